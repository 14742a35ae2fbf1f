#pragma once
// Flat key-value pipeline configuration with dotted keys, file + command
// line override parsing, and canonical echoes for manifests and reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cflow/corpus.hpp"
#include "cflow/model.hpp"
#include "cflow/phrase_miner.hpp"
#include "cflow/registry.hpp"
#include "cflow/synth.hpp"

namespace cflow {

struct PipelineConfig {
    // paths
    std::string output_dir = "out";
    std::string papers_path, patents_path, trials_path;
    std::string lexicon_positive, lexicon_negative, easy_words;
    std::string stoplist_generic, stoplist_publishers;
    std::string taxonomy_path;  // empty: built-in default taxonomy

    int corpus_year_min = 1900;
    int corpus_year_max = 2100;

    MinerConfig miner;
    RegistryConfig registry;  // theta, horizon, burn-in
    CorpusId target = CorpusId::patents;

    // split
    int test_cutoff = 0;  // 0 = unset
    int window = 5;
    int history = 5;
    int n_train_cutoffs = 3;
    bool keep_pretransferred = true;

    bool zscore_per_lag = false;
    bool entropy_base2 = false;
    bool graph_cumulative = true;

    TrainConfig lr_train;
    TrainConfig gru_train;
    int gru_hidden = 32;

    int eval_repeat = 1;
    std::string importance_agg = "mean";         // mean | max
    std::vector<std::string> eval_models = {"lr", "gru"};

    std::string sensitivity_axis = "history_length";
    std::vector<int> sensitivity_values = {1, 2, 3, 5, 7};
    std::string sensitivity_model = "lr";

    // per-field protocol (0 -> inherit split.test_cutoff)
    int fields_test_cutoff = 0;
    int fields_window = 3;
    int fields_history = 5;
    int fields_train_cutoffs = 1;

    ScenarioConfig scenario;

    uint64_t seed = 42;
    int threads = 1;

    // Parses `key = value` lines ('#' comments) then applies "key=value"
    // overrides. Unknown keys and malformed values throw ConfigError.
    static PipelineConfig load(const std::string& path,
                               const std::vector<std::string>& overrides);
    static PipelineConfig from_overrides(const std::vector<std::string>& overrides);

    // Canonical sorted "key=value;..." of every key whose name starts with
    // one of the prefixes (all keys when empty).
    std::string echo(const std::vector<std::string>& prefixes = {}) const;

private:
    std::map<std::string, std::string> values_;  // canonical key -> value
    void apply(const std::string& key, const std::string& value);
    void finalize();
    friend PipelineConfig parse_config_stream(std::istream& in,
                                              const std::vector<std::string>& overrides);
};

}  // namespace cflow

#pragma once
// Synthetic corpus generator with controllable transfer dynamics.
//
// Concepts are planted two-token phrases whose words appear nowhere else,
// so mining and segmentation recover them exactly. A seeded fraction is
// "prone": those concepts receive patent usage that crosses the theta
// threshold after a uniform random lag, and each mechanism knob
// independently biases their paper context (author growth, co-placement
// with already-transferred concepts, engineering codes, positive sentiment,
// patent-cited venues, industry co-authors). With every knob at zero, prone
// and non-prone concepts are statistically identical in the papers corpus,
// so transfer labels carry no feature signal.

#include <optional>
#include <string>
#include <vector>

#include "cflow/corpus.hpp"
#include "cflow/phrase_miner.hpp"
#include "cflow/registry.hpp"
#include "cflow/taxonomy.hpp"

namespace cflow {

struct ScenarioConfig {
    int year_start = 1998;
    int year_end = 2017;
    int n_concepts = 2000;
    double fraction_prone = 0.25;

    // Mechanism strengths. hype_growth is a per-year rate; the rest are
    // probabilities in [0, 1].
    double hype_growth = 0.5;
    double contagion = 0.8;
    double engineering_bias = 0.7;
    double sentiment_bias = 0.7;
    double venue_link_bias = 0.7;
    double industry_bias = 0.6;

    int filler_vocab = 4000;
    int author_pool = 6000;
    int venue_pool = 300;
    int linked_venues = 60;

    // Transfer lag is uniform in [lag_min, lag_max] years after emergence.
    // A wide uniform lag keeps the prediction label flat across concept
    // ages, which is what makes the zero-knob scenario a true null model.
    int lag_min = 1;
    int lag_max = 18;
    int theta = 5;
    double trial_fraction = 0.5;  // share of prone concepts that also reach trials

    double base_usage = 1.2;   // Poisson rate of papers per concept-year
    int min_paper_docs = 5;    // floor over the first four years (keeps phrases minable)
    int background_patents_per_year = 40;
    int background_trials_per_year = 10;

    uint64_t seed = 42;

    void validate(const Taxonomy& taxonomy) const;  // throws ConfigError
};

struct GroundTruthEntry {
    std::string phrase;
    bool prone = false;
    int emergence_year = 0;
    std::optional<int> transfer_patents;
    std::optional<int> transfer_trials;
};

struct SynthOutput {
    std::vector<std::string> papers;   // JSONL lines in the ingest schema
    std::vector<std::string> patents;
    std::vector<std::string> trials;
    std::vector<GroundTruthEntry> ground_truth;
};

SynthOutput generate(const ScenarioConfig& cfg, const std::vector<std::string>& positive_words,
                     const std::vector<std::string>& negative_words, const Taxonomy& taxonomy);

// TSV: phrase, planted_class, transfer_year (patents target; '-' when none).
void save_ground_truth(std::ostream& out, const std::vector<GroundTruthEntry>& entries);

struct VerifyReport {
    size_t checked = 0;
    size_t matched = 0;
    std::vector<std::string> mismatches;
    bool pass() const { return checked > 0 && matched == checked; }
};

// Re-runs mining, segmentation and registry labeling on already-ingested
// corpora and compares the labels against the planted ground truth.
VerifyReport verify_ground_truth(const CorpusStore& store,
                                 const std::vector<GroundTruthEntry>& ground_truth,
                                 const MinerConfig& miner_cfg, const Stoplists& stoplists,
                                 const RegistryConfig& registry_cfg, const Taxonomy& taxonomy);

}  // namespace cflow

#include "cflow/config.hpp"

#include <fstream>
#include <sstream>

#include "cflow/errors.hpp"
#include "cflow/eval.hpp"

namespace cflow {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": " + v);
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": " + v);
    }
}

uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean for " + key + ": " + v);
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

TrainConfig::Optimizer to_optimizer(const std::string& key, const std::string& v) {
    if (v == "adam") return TrainConfig::Optimizer::adam;
    if (v == "sgd" || v == "gd") return TrainConfig::Optimizer::sgd;
    throw ConfigError("bad optimizer for " + key + ": " + v);
}

void apply_train_key(TrainConfig& cfg, const std::string& key, const std::string& field,
                     const std::string& v) {
    if (field == "learning_rate") cfg.learning_rate = to_double(key, v);
    else if (field == "epochs") cfg.epochs = to_int(key, v);
    else if (field == "batch") cfg.batch_size = to_int(key, v);
    else if (field == "patience") cfg.patience = to_int(key, v);
    else if (field == "optimizer") cfg.optimizer = to_optimizer(key, v);
    else throw ConfigError("unknown key: " + key);
}

}  // namespace

void PipelineConfig::apply(const std::string& key, const std::string& v) {
    if (key == "paths.output_dir") output_dir = v;
    else if (key == "paths.papers") papers_path = v;
    else if (key == "paths.patents") patents_path = v;
    else if (key == "paths.trials") trials_path = v;
    else if (key == "paths.lexicon_positive") lexicon_positive = v;
    else if (key == "paths.lexicon_negative") lexicon_negative = v;
    else if (key == "paths.easy_words") easy_words = v;
    else if (key == "paths.stoplist_generic") stoplist_generic = v;
    else if (key == "paths.stoplist_publishers") stoplist_publishers = v;
    else if (key == "paths.taxonomy") taxonomy_path = v;
    else if (key == "corpus.year_min") corpus_year_min = to_int(key, v);
    else if (key == "corpus.year_max") corpus_year_max = to_int(key, v);
    else if (key == "miner.max_phrase_len") miner.max_phrase_len = to_int(key, v);
    else if (key == "miner.min_freq") miner.min_freq = to_int(key, v);
    else if (key == "miner.temperature") miner.temperature = to_double(key, v);
    else if (key == "miner.quality_threshold") miner.quality_threshold = to_double(key, v);
    else if (key == "miner.min_tokens") miner.min_tokens = to_int(key, v);
    else if (key == "burnin.window") registry.burnin_window = to_int(key, v);
    else if (key == "burnin.cv_tolerance") registry.burnin_cv_tolerance = to_double(key, v);
    else if (key == "label.theta") registry.theta = to_int(key, v);
    else if (key == "label.horizon") registry.horizon = to_int(key, v);
    else if (key == "label.target") {
        auto t = parse_corpus_id(v);
        if (!t || *t == CorpusId::papers) throw ConfigError("label.target must be patents|trials");
        target = *t;
    } else if (key == "split.test_cutoff") test_cutoff = to_int(key, v);
    else if (key == "split.window") window = to_int(key, v);
    else if (key == "split.history") history = to_int(key, v);
    else if (key == "split.train_cutoffs") n_train_cutoffs = to_int(key, v);
    else if (key == "split.keep_pretransferred") keep_pretransferred = to_bool(key, v);
    else if (key == "zscore.per_lag") zscore_per_lag = to_bool(key, v);
    else if (key == "features.entropy_base2") entropy_base2 = to_bool(key, v);
    else if (key == "graph.cumulative") graph_cumulative = to_bool(key, v);
    else if (key.rfind("model.lr.", 0) == 0) apply_train_key(lr_train, key, key.substr(9), v);
    else if (key == "model.gru.hidden") gru_hidden = to_int(key, v);
    else if (key.rfind("model.gru.", 0) == 0) apply_train_key(gru_train, key, key.substr(10), v);
    else if (key == "eval.repeat") eval_repeat = to_int(key, v);
    else if (key == "eval.importance_agg") {
        if (v != "mean" && v != "max") throw ConfigError("eval.importance_agg must be mean|max");
        importance_agg = v;
    } else if (key == "eval.models") {
        eval_models = split_list(v);
        if (eval_models.empty()) throw ConfigError("eval.models must not be empty");
        for (const auto& m : eval_models)
            if (m != "lr" && m != "gru") throw ConfigError("eval.models entries must be lr|gru");
    } else if (key == "sensitivity.axis") {
        if (!parse_sensitivity_axis(v)) throw ConfigError("unknown sensitivity.axis: " + v);
        sensitivity_axis = v;
    } else if (key == "sensitivity.values") {
        sensitivity_values.clear();
        for (const auto& item : split_list(v)) sensitivity_values.push_back(to_int(key, item));
        if (sensitivity_values.empty()) throw ConfigError("sensitivity.values must not be empty");
    } else if (key == "sensitivity.model") {
        if (v != "lr" && v != "gru") throw ConfigError("sensitivity.model must be lr|gru");
        sensitivity_model = v;
    } else if (key == "fields.test_cutoff") fields_test_cutoff = to_int(key, v);
    else if (key == "fields.window") fields_window = to_int(key, v);
    else if (key == "fields.history") fields_history = to_int(key, v);
    else if (key == "fields.train_cutoffs") fields_train_cutoffs = to_int(key, v);
    else if (key == "synth.year_start") scenario.year_start = to_int(key, v);
    else if (key == "synth.year_end") scenario.year_end = to_int(key, v);
    else if (key == "synth.n_concepts") scenario.n_concepts = to_int(key, v);
    else if (key == "synth.fraction_prone") scenario.fraction_prone = to_double(key, v);
    else if (key == "synth.hype_growth") scenario.hype_growth = to_double(key, v);
    else if (key == "synth.contagion") scenario.contagion = to_double(key, v);
    else if (key == "synth.engineering_bias") scenario.engineering_bias = to_double(key, v);
    else if (key == "synth.sentiment_bias") scenario.sentiment_bias = to_double(key, v);
    else if (key == "synth.venue_link_bias") scenario.venue_link_bias = to_double(key, v);
    else if (key == "synth.industry_bias") scenario.industry_bias = to_double(key, v);
    else if (key == "synth.filler_vocab") scenario.filler_vocab = to_int(key, v);
    else if (key == "synth.author_pool") scenario.author_pool = to_int(key, v);
    else if (key == "synth.venue_pool") scenario.venue_pool = to_int(key, v);
    else if (key == "synth.linked_venues") scenario.linked_venues = to_int(key, v);
    else if (key == "synth.lag_min") scenario.lag_min = to_int(key, v);
    else if (key == "synth.lag_max") scenario.lag_max = to_int(key, v);
    else if (key == "synth.trial_fraction") scenario.trial_fraction = to_double(key, v);
    else if (key == "synth.base_usage") scenario.base_usage = to_double(key, v);
    else if (key == "synth.min_paper_docs") scenario.min_paper_docs = to_int(key, v);
    else if (key == "synth.background_patents")
        scenario.background_patents_per_year = to_int(key, v);
    else if (key == "synth.background_trials")
        scenario.background_trials_per_year = to_int(key, v);
    else if (key == "seed") seed = to_u64(key, v);
    else if (key == "threads") threads = to_int(key, v);
    else throw ConfigError("unknown key: " + key);
    values_[key] = v;
}

void PipelineConfig::finalize() {
    scenario.theta = registry.theta;
    scenario.seed = seed;
    lr_train.seed = seed;
    gru_train.seed = seed;
    if (fields_test_cutoff == 0) fields_test_cutoff = test_cutoff;
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (eval_repeat < 1) throw ConfigError("eval.repeat must be >= 1");
}

PipelineConfig PipelineConfig::load(const std::string& path,
                                    const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    PipelineConfig cfg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        cfg.apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    for (const auto& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("override is not key=value: " + ov);
        cfg.apply(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    cfg.finalize();
    return cfg;
}

PipelineConfig PipelineConfig::from_overrides(const std::vector<std::string>& overrides) {
    PipelineConfig cfg;
    for (const auto& ov : overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos) throw ConfigError("override is not key=value: " + ov);
        cfg.apply(trim(ov.substr(0, eq)), trim(ov.substr(eq + 1)));
    }
    cfg.finalize();
    return cfg;
}

std::string PipelineConfig::echo(const std::vector<std::string>& prefixes) const {
    std::string out;
    for (const auto& [k, v] : values_) {
        bool match = prefixes.empty();
        for (const auto& p : prefixes)
            if (k.rfind(p, 0) == 0) match = true;
        if (!match) continue;
        if (!out.empty()) out += ';';
        out += k + "=" + v;
    }
    return out;
}

}  // namespace cflow

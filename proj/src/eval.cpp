#include "cflow/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cflow/rng.hpp"

namespace cflow {

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("auc: size mismatch");
    const size_t n = scores.size();
    size_t n_pos = 0;
    for (int y : labels) n_pos += (y == 1);
    const size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc needs both classes");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tie runs; every rank is a multiple of 0.5 so the
    // sum stays exact in double arithmetic.
    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k)
            if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

DatasetPair build_datasets(const ConceptRegistry& registry, const FeatureMatrix& features,
                           const std::vector<std::string>& concepts, CorpusId target,
                           const SplitSpec& split, const SampleOptions& opts) {
    DatasetPair out;
    out.plan.test_cutoff = split.test_cutoff;
    out.plan.window = split.window;
    out.plan.history = split.history;
    out.plan.train_cutoffs = train_cutoffs(split.test_cutoff, split.window, split.n_train_cutoffs,
                                           features.year_lo + split.history);
    for (int t : out.plan.train_cutoffs) {
        auto samples = make_samples(registry, features, concepts, target, t, split.history,
                                    split.window, SampleRole::train, opts);
        out.train.insert(out.train.end(), std::make_move_iterator(samples.begin()),
                         std::make_move_iterator(samples.end()));
    }
    out.test = make_samples(registry, features, concepts, target, split.test_cutoff,
                            split.history, split.window, SampleRole::test, opts);
    return out;
}

EvalOutcome train_and_eval(std::vector<TemporalSample> train, std::vector<TemporalSample> test,
                           const std::string& model_kind, size_t n_dims,
                           const EvalOptions& opts, uint64_t seed) {
    if (train.empty()) throw std::invalid_argument("empty training set");
    if (test.empty()) throw std::invalid_argument("empty test set");

    EvalOutcome out;
    out.stats = zscore_fit(train, n_dims, opts.per_lag_zscore);
    zscore_apply(out.stats, train);
    zscore_apply(out.stats, test);
    train = oversample_positives(train, mix_seed(seed, 0x05E5));

    const size_t history_len = train.front().history.size();
    TrainConfig cfg;
    if (model_kind == "lr") {
        out.model = std::make_unique<LogisticModel>(history_len);
        cfg = opts.lr_train;
    } else if (model_kind == "gru") {
        out.model = std::make_unique<GruModel>(n_dims, opts.gru_hidden, mix_seed(seed, 0x1217));
        cfg = opts.gru_train;
    } else {
        throw std::invalid_argument("unknown model kind: " + model_kind);
    }

    cfg.seed = mix_seed(seed, 0x7247);
    out.training = train_model(*out.model, train, cfg);

    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(test.size());
    for (const auto& s : test) {
        const double p = out.model->predict(s.history);
        scores.push_back(p);
        labels.push_back(s.label);
        out.predictions.push_back(Prediction{s.phrase, s.cutoff, p, s.label});
    }
    for (int y : labels) (y == 1 ? out.n_pos : out.n_neg) += 1;
    out.auc = auc(scores, labels);
    return out;
}

std::vector<ImportanceEntry> feature_importance(const LogisticModel& model, size_t history,
                                                const std::vector<std::string>& feature_names,
                                                ImportanceAgg agg) {
    const size_t n_dims = feature_names.size();
    if (history == 0 || model.input_dim() != history * n_dims)
        throw std::invalid_argument("importance: model width does not match history * features");
    bool any_nonzero = false;
    for (size_t i = 0; i < model.input_dim(); ++i)
        if (model.weight(i) != 0.0) any_nonzero = true;
    if (!any_nonzero) throw std::invalid_argument("importance requires a trained model");

    std::vector<ImportanceEntry> out;
    for (size_t f = 0; f < n_dims; ++f) {
        ImportanceEntry e;
        e.feature = feature_names[f];
        double acc = 0.0;
        int pos = 0, neg = 0;
        for (size_t lag = 0; lag < history; ++lag) {
            const double w = model.weight(lag * n_dims + f);
            if (agg == ImportanceAgg::mean_abs)
                acc += std::fabs(w);
            else
                acc = std::max(acc, std::fabs(w));
            if (w > 0.0) ++pos;
            if (w < 0.0) ++neg;
        }
        e.importance = agg == ImportanceAgg::mean_abs ? acc / static_cast<double>(history) : acc;
        e.majority_sign = pos > neg ? 1 : (neg > pos ? -1 : 0);
        out.push_back(std::move(e));
    }
    std::stable_sort(out.begin(), out.end(), [](const ImportanceEntry& a, const ImportanceEntry& b) {
        return a.importance > b.importance;
    });
    return out;
}

const std::vector<std::pair<std::string, std::vector<size_t>>>& feature_groups() {
    static const std::vector<std::pair<std::string, std::vector<size_t>>> groups = {
        {"hype", {0, 1}},
        {"bridge", {2, 3}},
        {"ideational", {4, 5}},
        {"scitech", {6, 7}},
        {"graph", {8, 9}},
        {"all", {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}},
    };
    return groups;
}

std::vector<TemporalSample> select_features(const std::vector<TemporalSample>& samples,
                                            const std::vector<size_t>& dims, size_t n_dims) {
    if (dims.empty()) throw std::invalid_argument("feature group must not be empty");
    std::vector<TemporalSample> out;
    out.reserve(samples.size());
    for (const auto& s : samples) {
        TemporalSample t;
        t.phrase = s.phrase;
        t.cutoff = s.cutoff;
        t.label = s.label;
        const size_t years = s.history.size() / n_dims;
        t.history.reserve(years * dims.size());
        for (size_t y = 0; y < years; ++y)
            for (size_t d : dims) t.history.push_back(s.history[y * n_dims + d]);
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<AblationCell> ablation_run(const DatasetPair& data,
                                       const std::vector<std::string>& models,
                                       const EvalOptions& opts, uint64_t seed) {
    std::vector<AblationCell> out;
    for (const auto& model_kind : models) {
        for (const auto& [group, dims] : feature_groups()) {
            auto train = select_features(data.train, dims, kFeatureCount);
            auto test = select_features(data.test, dims, kFeatureCount);
            auto outcome = train_and_eval(std::move(train), std::move(test), model_kind,
                                          dims.size(), opts, seed);
            out.push_back(AblationCell{model_kind, group, outcome.auc, outcome.n_pos,
                                       outcome.n_neg});
        }
    }
    return out;
}

std::optional<SensitivityAxis> parse_sensitivity_axis(const std::string& name) {
    if (name == "history_length") return SensitivityAxis::history_length;
    if (name == "window_length") return SensitivityAxis::window_length;
    if (name == "cutoff_year") return SensitivityAxis::cutoff_year;
    return std::nullopt;
}

std::vector<SensitivityPoint> sensitivity_run(const ConceptRegistry& registry,
                                              const FeatureMatrix& features,
                                              const std::vector<std::string>& concepts,
                                              CorpusId target, const SplitSpec& base,
                                              SensitivityAxis axis, const std::vector<int>& values,
                                              const std::string& model_kind,
                                              const EvalOptions& opts, uint64_t seed) {
    std::vector<SensitivityPoint> out;

    // Window sweeps fix the cutoff years: compute them once from the widest
    // window so every point's training interval stays clear of the test one.
    std::vector<int> fixed_cutoffs;
    if (axis == SensitivityAxis::window_length) {
        const int widest = *std::max_element(values.begin(), values.end());
        fixed_cutoffs = train_cutoffs(base.test_cutoff, widest, base.n_train_cutoffs,
                                      features.year_lo + base.history);
    }

    for (int value : values) {
        SensitivityPoint point;
        point.value = value;
        try {
            DatasetPair data;
            if (axis == SensitivityAxis::window_length) {
                data.plan.test_cutoff = base.test_cutoff;
                data.plan.window = value;
                data.plan.history = base.history;
                data.plan.train_cutoffs = fixed_cutoffs;
                for (int t : fixed_cutoffs) {
                    auto samples = make_samples(registry, features, concepts, target, t,
                                                base.history, value, SampleRole::train);
                    data.train.insert(data.train.end(), std::make_move_iterator(samples.begin()),
                                      std::make_move_iterator(samples.end()));
                }
                data.test = make_samples(registry, features, concepts, target, base.test_cutoff,
                                         base.history, value, SampleRole::test);
            } else {
                SplitSpec spec = base;
                if (axis == SensitivityAxis::history_length) spec.history = value;
                if (axis == SensitivityAxis::cutoff_year) spec.test_cutoff = value;
                data = build_datasets(registry, features, concepts, target, spec);
            }
            auto outcome = train_and_eval(std::move(data.train), std::move(data.test), model_kind,
                                          kFeatureCount, opts, seed);
            point.ok = true;
            point.auc = outcome.auc;
            point.n_pos = outcome.n_pos;
            point.n_neg = outcome.n_neg;
        } catch (const std::exception& e) {
            point.ok = false;
            point.error = e.what();
        }
        out.push_back(std::move(point));
    }
    return out;
}

std::vector<FieldResult> per_field_eval(const ConceptRegistry& registry,
                                        const FeatureMatrix& features,
                                        const std::vector<std::string>& concepts, CorpusId target,
                                        const SplitSpec& split, const std::string& model_kind,
                                        const EvalOptions& opts, uint64_t seed) {
    std::map<std::string, std::vector<std::string>> by_field;
    for (const auto& phrase : concepts) {
        const ConceptRecord* rec = registry.find(phrase);
        if (!rec || rec->field.empty()) continue;
        by_field[rec->field].push_back(phrase);
    }

    std::vector<FieldResult> out;
    for (const auto& [field, members] : by_field) {
        FieldResult r;
        r.field = field;
        try {
            auto data = build_datasets(registry, features, members, target, split);
            auto outcome = train_and_eval(std::move(data.train), std::move(data.test), model_kind,
                                          kFeatureCount, opts, seed);
            r.evaluable = true;
            r.auc = outcome.auc;
            r.n_pos = outcome.n_pos;
            r.n_neg = outcome.n_neg;
        } catch (const std::exception& e) {
            r.evaluable = false;
            r.note = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace cflow

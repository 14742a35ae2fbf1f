#pragma once
// Evaluation harness: shared train-and-score path, feature importance from
// standardized LR coefficients, feature-group ablations, sensitivity sweeps
// and per-field evaluation. Every run is seeded and reproducible.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cflow/dataset.hpp"
#include "cflow/metrics.hpp"
#include "cflow/model.hpp"

namespace cflow {

struct SplitSpec {
    int test_cutoff = 0;
    int window = 5;           // T
    int history = 5;          // k
    int n_train_cutoffs = 3;  // latest n disjoint cutoffs
};

struct DatasetPair {
    SplitPlan plan;
    std::vector<TemporalSample> train;  // union over train cutoffs, raw values
    std::vector<TemporalSample> test;   // raw values
};

// Raw (unnormalized) train/test samples per the split protocol.
DatasetPair build_datasets(const ConceptRegistry& registry, const FeatureMatrix& features,
                           const std::vector<std::string>& concepts, CorpusId target,
                           const SplitSpec& split, const SampleOptions& opts = {});

struct EvalOptions {
    TrainConfig lr_train;
    TrainConfig gru_train;
    size_t gru_hidden = 32;
    bool per_lag_zscore = false;
};

struct Prediction {
    std::string phrase;
    int cutoff = 0;
    double probability = 0.0;
    int label = 0;
};

struct EvalOutcome {
    double auc = 0.0;
    size_t n_pos = 0, n_neg = 0;
    std::vector<Prediction> predictions;
    std::unique_ptr<Model> model;
    NormalizationStats stats;
    TrainResult training;
};

// Z-scores on the training samples, oversamples, trains the chosen model
// ("lr" or "gru") and scores the raw test set. Throws when the test set is
// single-class.
EvalOutcome train_and_eval(std::vector<TemporalSample> train, std::vector<TemporalSample> test,
                           const std::string& model_kind, size_t n_dims,
                           const EvalOptions& opts, uint64_t seed);

enum class ImportanceAgg { mean_abs, max_abs };

struct ImportanceEntry {
    std::string feature;
    double importance = 0.0;
    int majority_sign = 0;  // -1, 0, +1 across the k lags
};

// Per feature, aggregated |coefficient| across the k lag positions of a
// trained LR on Z-scored inputs; descending. Throws on all-zero weights.
std::vector<ImportanceEntry> feature_importance(const LogisticModel& model, size_t history,
                                                const std::vector<std::string>& feature_names,
                                                ImportanceAgg agg = ImportanceAgg::mean_abs);

// Fixed feature groups over the canonical 10-dimension order.
const std::vector<std::pair<std::string, std::vector<size_t>>>& feature_groups();

// New samples keeping only the given per-year dimensions.
std::vector<TemporalSample> select_features(const std::vector<TemporalSample>& samples,
                                            const std::vector<size_t>& dims, size_t n_dims);

struct AblationCell {
    std::string model;
    std::string group;
    double auc = 0.0;
    size_t n_pos = 0, n_neg = 0;
};

// Trains and evaluates each (model, group) cell on identical splits and
// seeds. `models` entries are "lr" / "gru".
std::vector<AblationCell> ablation_run(const DatasetPair& data,
                                       const std::vector<std::string>& models,
                                       const EvalOptions& opts, uint64_t seed);

enum class SensitivityAxis { history_length, window_length, cutoff_year };

std::optional<SensitivityAxis> parse_sensitivity_axis(const std::string& name);

struct SensitivityPoint {
    int value = 0;
    bool ok = false;
    double auc = 0.0;
    size_t n_pos = 0, n_neg = 0;
    std::string error;  // set when ok is false; the sweep continues
};

// One evaluation per axis value with shared seeds. Window sweeps keep both
// training and test cutoff years fixed (computed from the largest window so
// every point stays leakage-free).
std::vector<SensitivityPoint> sensitivity_run(const ConceptRegistry& registry,
                                              const FeatureMatrix& features,
                                              const std::vector<std::string>& concepts,
                                              CorpusId target, const SplitSpec& base,
                                              SensitivityAxis axis, const std::vector<int>& values,
                                              const std::string& model_kind,
                                              const EvalOptions& opts, uint64_t seed);

struct FieldResult {
    std::string field;
    bool evaluable = false;
    double auc = 0.0;
    size_t n_pos = 0, n_neg = 0;
    std::string note;
};

// Partitions concepts by assigned field and evaluates each partition
// independently under the same split protocol.
std::vector<FieldResult> per_field_eval(const ConceptRegistry& registry,
                                        const FeatureMatrix& features,
                                        const std::vector<std::string>& concepts, CorpusId target,
                                        const SplitSpec& split, const std::string& model_kind,
                                        const EvalOptions& opts, uint64_t seed);

}  // namespace cflow

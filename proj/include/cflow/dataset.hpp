#pragma once
// Leakage-safe supervised dataset assembly: cutoff years, k-year histories,
// prediction windows, Z-score normalization and positive oversampling.
//
// Leakage rules enforced here:
//   - every training prediction interval [t, t+T-1] ends before the test
//     cutoff,
//   - sample histories cover years t-k..t-1 only (strict past),
//   - concepts already transferred before the test cutoff never enter the
//     test set (they may still train).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cflow/features.hpp"
#include "cflow/registry.hpp"

namespace cflow {

struct TemporalSample {
    std::string phrase;
    int cutoff = 0;
    int label = 0;
    std::vector<double> history;  // k rows of n_dims values, oldest year first
};

struct SplitPlan {
    int test_cutoff = 0;
    std::vector<int> train_cutoffs;
    int window = 0;   // T
    int history = 0;  // k
};

// The n largest cutoff years t with t + T - 1 < test_cutoff:
// {t* - T - n + 1, ..., t* - T}. Throws when that drops below `earliest`.
std::vector<int> train_cutoffs(int test_cutoff, int window, int count, int earliest);

enum class SampleRole { train, test };

struct SampleOptions {
    // Keep concepts that transferred before the cutoff in training sets
    // (they are mechanical negatives at that cutoff). Toggleable because
    // the alternative reading drops them entirely.
    bool train_keeps_pretransferred = true;
};

// Eligibility: emerged by t-1, past burn-in (the phrase list is assumed
// pre-filtered for that), originates in research. Test role additionally
// drops concepts with transfer_year < t.
std::vector<TemporalSample> make_samples(const ConceptRegistry& registry,
                                         const FeatureMatrix& features,
                                         const std::vector<std::string>& concepts,
                                         CorpusId target, int cutoff, int history, int window,
                                         SampleRole role, const SampleOptions& opts = {});

struct NormalizationStats {
    size_t n_dims = 0;
    bool per_lag = false;  // when true, stats are per (lag, dim): n_dims = k * base_dims
    std::vector<double> mean;
    std::vector<double> stddev;       // population
    std::vector<bool> constant;       // flagged instead of dividing by 0

    void save(std::ostream& out) const;  // TSV: dimension, mean, std
};

// Pooled over all history rows of the training samples (or per lag).
NormalizationStats zscore_fit(const std::vector<TemporalSample>& train, size_t n_dims,
                              bool per_lag = false);
void zscore_apply(const NormalizationStats& stats, std::vector<TemporalSample>& samples);

// Duplicates minority-class samples (sampling with replacement, seeded)
// until classes balance. Originals are preserved; duplicates append.
// Throws on single-class input.
std::vector<TemporalSample> oversample_positives(const std::vector<TemporalSample>& train,
                                                 uint64_t seed);

// CSV: phrase, cutoff, role, label, then k*n_dims history values.
void save_samples_csv(std::ostream& out, const std::vector<TemporalSample>& samples,
                      const std::string& role, size_t n_dims, const std::string& config_echo);
std::vector<TemporalSample> load_samples_csv(std::istream& in, std::string* role_out = nullptr);

}  // namespace cflow

#include "cflow/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cflow/rng.hpp"

namespace cflow {

std::vector<int> train_cutoffs(int test_cutoff, int window, int count, int earliest) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (count < 1) throw std::invalid_argument("cutoff count must be >= 1");
    const int last = test_cutoff - window;      // largest t with t + T - 1 < t*
    const int first = last - count + 1;
    if (first < earliest)
        throw std::invalid_argument("insufficient history for the requested train cutoffs");
    std::vector<int> out;
    for (int t = first; t <= last; ++t) out.push_back(t);
    return out;
}

std::vector<TemporalSample> make_samples(const ConceptRegistry& registry,
                                         const FeatureMatrix& features,
                                         const std::vector<std::string>& concepts,
                                         CorpusId target, int cutoff, int history, int window,
                                         SampleRole role, const SampleOptions& opts) {
    if (history <= 0 || window <= 0) throw std::invalid_argument("history and window must be > 0");
    if (cutoff - history < features.year_lo)
        throw std::invalid_argument("history reaches before the feature matrix start");
    if (cutoff - 1 > features.year_hi)
        throw std::invalid_argument("cutoff exceeds the feature matrix range");

    std::vector<TemporalSample> out;
    for (const auto& phrase : concepts) {
        const ConceptRecord* rec = registry.find(phrase);
        if (!rec) continue;
        if (rec->emergence_year > cutoff - 1) continue;  // needs observable history
        const auto& ty = rec->transfer_year[static_cast<size_t>(target)];
        if (role == SampleRole::test && ty && *ty < cutoff) continue;
        if (role == SampleRole::train && !opts.train_keeps_pretransferred && ty && *ty < cutoff)
            continue;

        auto ci = features.find(phrase);
        if (!ci) continue;
        TemporalSample s;
        s.phrase = phrase;
        s.cutoff = cutoff;
        s.label = prediction_label(ty, cutoff, window);
        s.history.reserve(static_cast<size_t>(history) * kFeatureCount);
        for (int y = cutoff - history; y <= cutoff - 1; ++y) {
            auto row = features.row(*ci, y);
            s.history.insert(s.history.end(), row.begin(), row.end());
        }
        out.push_back(std::move(s));
    }
    return out;
}

NormalizationStats zscore_fit(const std::vector<TemporalSample>& train, size_t n_dims,
                              bool per_lag) {
    if (train.size() < 2) throw std::invalid_argument("z-score fit needs at least 2 samples");
    const size_t history_len = train.front().history.size();
    if (history_len % n_dims != 0)
        throw std::invalid_argument("history length is not a multiple of the dimension count");

    NormalizationStats stats;
    stats.per_lag = per_lag;
    stats.n_dims = per_lag ? history_len : n_dims;
    stats.mean.assign(stats.n_dims, 0.0);
    stats.stddev.assign(stats.n_dims, 0.0);
    stats.constant.assign(stats.n_dims, false);

    std::vector<double> sum(stats.n_dims, 0.0), sq(stats.n_dims, 0.0);
    std::vector<size_t> count(stats.n_dims, 0);
    for (const auto& s : train) {
        if (s.history.size() != history_len)
            throw std::invalid_argument("inconsistent history lengths across samples");
        for (size_t i = 0; i < history_len; ++i) {
            const size_t d = per_lag ? i : i % n_dims;
            sum[d] += s.history[i];
            sq[d] += s.history[i] * s.history[i];
            ++count[d];
        }
    }
    for (size_t d = 0; d < stats.n_dims; ++d) {
        const double n = static_cast<double>(count[d]);
        stats.mean[d] = sum[d] / n;
        const double var = std::max(0.0, sq[d] / n - stats.mean[d] * stats.mean[d]);
        stats.stddev[d] = std::sqrt(var);
        if (stats.stddev[d] <= 0.0) {
            stats.constant[d] = true;
            stats.stddev[d] = 1.0;  // apply() then maps the dimension to 0
        }
    }
    return stats;
}

void zscore_apply(const NormalizationStats& stats, std::vector<TemporalSample>& samples) {
    for (auto& s : samples) {
        for (size_t i = 0; i < s.history.size(); ++i) {
            const size_t d = stats.per_lag ? i : i % stats.n_dims;
            if (d >= stats.n_dims) throw std::invalid_argument("sample wider than fitted stats");
            s.history[i] =
                stats.constant[d] ? 0.0 : (s.history[i] - stats.mean[d]) / stats.stddev[d];
        }
    }
}

void NormalizationStats::save(std::ostream& out) const {
    out.precision(17);
    for (size_t d = 0; d < n_dims; ++d)
        out << d << '\t' << mean[d] << '\t' << (constant[d] ? 0.0 : stddev[d]) << '\n';
}

std::vector<TemporalSample> oversample_positives(const std::vector<TemporalSample>& train,
                                                 uint64_t seed) {
    std::vector<size_t> pos, neg;
    for (size_t i = 0; i < train.size(); ++i) (train[i].label == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw std::invalid_argument("oversampling needs both classes present");

    std::vector<TemporalSample> out = train;
    const auto& minority = pos.size() < neg.size() ? pos : neg;
    const size_t deficit =
        (pos.size() < neg.size() ? neg.size() - pos.size() : pos.size() - neg.size());
    Rng rng(seed);
    for (size_t i = 0; i < deficit; ++i)
        out.push_back(train[minority[rng.next_below(minority.size())]]);
    return out;
}

void save_samples_csv(std::ostream& out, const std::vector<TemporalSample>& samples,
                      const std::string& role, size_t n_dims, const std::string& config_echo) {
    out << "# " << config_echo << '\n';
    out << "concept,cutoff,role,label";
    const size_t history_len = samples.empty() ? 0 : samples.front().history.size();
    for (size_t i = 0; i < history_len; ++i)
        out << ",y" << i / n_dims << '_' << kFeatureNames[i % n_dims];
    out << '\n';
    out.precision(17);
    for (const auto& s : samples) {
        out << s.phrase << ',' << s.cutoff << ',' << role << ',' << s.label;
        for (double v : s.history) out << ',' << v;
        out << '\n';
    }
}

std::vector<TemporalSample> load_samples_csv(std::istream& in, std::string* role_out) {
    std::vector<TemporalSample> out;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        TemporalSample s;
        std::getline(ss, s.phrase, ',');
        std::getline(ss, cell, ',');
        s.cutoff = std::stoi(cell);
        std::getline(ss, cell, ',');
        if (role_out) *role_out = cell;
        std::getline(ss, cell, ',');
        s.label = std::stoi(cell);
        while (std::getline(ss, cell, ',')) s.history.push_back(std::stod(cell));
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace cflow

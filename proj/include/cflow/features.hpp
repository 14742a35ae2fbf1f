#pragma once
// Per-(phrase, year) feature series: the eight intrinsic features plus the
// two graph features, in a fixed dimension order, with the transferred /
// non-transferred group statistics used for reporting.
//
// Padding rule: every feature is exactly 0 for years before a phrase's
// emergence. Leakage rule: year-y values only see documents, patents and
// transfer events up to and including y.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cflow/corpus.hpp"
#include "cflow/graph.hpp"
#include "cflow/registry.hpp"
#include "cflow/stats.hpp"
#include "cflow/taxonomy.hpp"

namespace cflow {

constexpr size_t kFeatureCount = 10;
extern const std::array<const char*, kFeatureCount> kFeatureNames;

using FeatureRow = std::array<double, kFeatureCount>;

struct SentimentLexicon {
    std::unordered_set<std::string> positive;
    std::unordered_set<std::string> negative;

    // One word per line, '#' comments. Words appearing in both lists
    // violate the disjointness invariant and throw.
    static SentimentLexicon load(const std::string& positive_path,
                                 const std::string& negative_path);
    bool hit(const std::string& token) const {
        return positive.count(token) > 0 || negative.count(token) > 0;
    }
};

struct EasyWordList {
    std::unordered_set<std::string> words;
    static EasyWordList load(const std::string& path);  // throws when empty
};

struct FeatureConfig {
    bool entropy_base2 = false;  // default: natural log
};

struct FeatureMatrix {
    std::vector<std::string> concepts;  // row-group order
    std::unordered_map<std::string, size_t> index;
    int year_lo = 0, year_hi = 0;
    std::vector<double> values;  // phrase-major, then year, then feature

    size_t years() const { return static_cast<size_t>(year_hi - year_lo + 1); }
    std::span<const double> row(size_t concept_idx, int year) const {
        size_t offset =
            (concept_idx * years() + static_cast<size_t>(year - year_lo)) * kFeatureCount;
        return {values.data() + offset, kFeatureCount};
    }
    std::optional<size_t> find(const std::string& phrase) const {
        auto it = index.find(phrase);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    void save_csv(std::ostream& out, const std::string& config_echo) const;
    static FeatureMatrix load_csv(std::istream& in);
};

class FeatureEngine {
public:
    FeatureEngine(const CorpusStore& store, const SegmentedCorpus& papers_segmented,
                  const ConceptRegistry& registry, const VenueLinkTable& venue_table,
                  const SentimentLexicon& lexicon, const EasyWordList& easy_words,
                  const Taxonomy& taxonomy, const CooccurrenceGraph& graph,
                  FeatureConfig cfg = {});

    // (adopter_size, author_repeated_usage)
    std::pair<double, double> hype_features(const std::string& phrase, int year) const;
    // (discipline_diversity, engineering_relation)
    std::pair<double, double> bridge_features(const std::string& phrase, int year) const;
    // (emotionality, accessibility)
    std::pair<double, double> ideational_features(const std::string& phrase, int year) const;
    // (journal_linkage, industry_share)
    std::pair<double, double> resonance_features(const std::string& phrase, int year) const;

    FeatureRow feature_row(const std::string& phrase, int year) const;

    // Dense series for each phrase over [year_lo, year_hi]. Throws on
    // concepts unknown to the registry.
    FeatureMatrix feature_matrix(const std::vector<std::string>& concepts, int year_lo,
                                 int year_hi, int threads = 1) const;

private:
    struct DocStats {
        int year = 0;
        uint32_t tokens = 0;
        uint32_t sentences = 0;
        uint32_t difficult = 0;
        uint32_t sentiment = 0;
        int32_t venue = -1;  // index into venue_names_
        std::vector<uint32_t> authors;      // author table indices
        std::vector<uint8_t> author_kind;   // Affiliation as uint8
        std::vector<std::pair<uint32_t, double>> codes;  // code table index, weight
    };

    int emergence_of(const std::string& phrase) const;  // throws when unknown
    const std::vector<uint32_t>* docs_at(const std::string& phrase, int year) const;
    std::unordered_set<uint32_t> prior_authors(const std::string& phrase, int year) const;
    FeatureRow row_with_prior(const std::string& phrase, int year,
                              const std::unordered_set<uint32_t>& prior,
                              const CooccurrenceGraph::Snapshot& snap) const;

    const ConceptRegistry& registry_;
    const VenueLinkTable& venues_linked_;
    const CooccurrenceGraph& graph_;
    FeatureConfig cfg_;

    std::vector<DocStats> doc_stats_;
    std::vector<std::string> venue_names_;
    std::vector<bool> code_is_engineering_;
    std::unordered_map<std::string, std::map<int, std::vector<uint32_t>>> concept_docs_;
};

struct FeatureGroupStat {
    std::string feature;
    double mean_transferred = 0.0;
    double mean_non_transferred = 0.0;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    bool defined = false;  // false when a group is too small or degenerate
};

// Per-phrase value = mean of the feature over [emergence, year_hi]; groups
// split by transfer status toward `target`.
std::vector<FeatureGroupStat> transfer_group_ttests(const FeatureMatrix& matrix,
                                                    const ConceptRegistry& registry,
                                                    CorpusId target, int year_hi);

// Pearson correlations over all (phrase, year >= emergence) rows.
// NaN marks dimensions with zero variance.
std::vector<double> feature_correlation(const FeatureMatrix& matrix,
                                        const ConceptRegistry& registry);

}  // namespace cflow

#pragma once
// Concept registry: emergence years, burn-in cutoff, transfer labeling and
// field assignment.
//
// A concept transfers to a target corpus in the earliest year where its
// cumulative distinct-document usage since emergence reaches theta. Target
// usage before the papers emergence year disqualifies the concept (it did
// not originate in research). Transfer status is irreversible.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cflow/corpus.hpp"
#include "cflow/phrase_miner.hpp"
#include "cflow/taxonomy.hpp"

namespace cflow {

using YearCounts = std::map<int, int>;

struct ConceptRecord {
    std::string phrase;
    int emergence_year = 0;
    std::array<std::optional<int>, 3> transfer_year;  // indexed by CorpusId; papers unused
    std::array<bool, 3> disqualified{false, false, false};
    std::string field;  // empty when no discipline data exists for the concept
    std::array<YearCounts, 3> yearly_docs;  // distinct documents using the concept per year
};

struct BurnInResult {
    int cutoff_year = 0;
    std::map<int, int> yearly_new_counts;
    std::vector<std::pair<int, double>> cv_by_year;  // candidate year -> CV of the window after it
};

// --- The individual operations (unit-testable in isolation) ---

// Emergence = first papers-corpus year of use. Concepts with no papers
// usage are absent.
std::map<std::string, int> compute_emergence_years(
    const std::unordered_map<std::string, YearCounts>& papers_usage);

// Smallest year y whose following W-year window of new-concept counts has
// coefficient of variation (population stddev / mean) below cv_tolerance.
// Counts are densified with zeros over [min_year, max_year]. Throws if the
// span is shorter than W+1 years, W < 3, or no year qualifies.
BurnInResult burn_in_cutoff(const std::map<int, int>& yearly_new_counts, int window,
                            double cv_tolerance);

struct TransferLabel {
    std::optional<int> year;
    bool originated_in_research = true;  // false: target usage precedes emergence
};

// horizon == 0 means unbounded; otherwise the transfer must complete within
// `horizon` years of emergence.
TransferLabel label_transfers(int emergence_year, const YearCounts& target_docs_per_year,
                              int theta, int horizon);

// 1 iff transfer_year falls inside [cutoff, cutoff + window - 1].
int prediction_label(const std::optional<int>& transfer_year, int cutoff, int window);

// idf(f) = ln(total_concepts / concepts_with_use_in_f), natural log.
std::map<std::string, double> compute_field_idf(
    const std::vector<std::map<std::string, double>>& per_concept_usage, size_t total_concepts);

// argmax over fields of tf * idf; ties break to the lexicographically
// smallest field name. Throws on zero total usage.
std::string assign_field(const std::map<std::string, double>& usage_by_field,
                         const std::map<std::string, double>& idf);

// --- The assembled registry ---

struct RegistryConfig {
    int theta = 5;
    int horizon = 0;  // 0 = unbounded
    int burnin_window = 5;
    double burnin_cv_tolerance = 0.2;
};

class ConceptRegistry {
public:
    static ConceptRegistry build(const CorpusStore& store,
                                 const std::array<SegmentedCorpus, 3>& segmented,
                                 const Taxonomy& taxonomy, const RegistryConfig& cfg);

    const ConceptRecord* find(const std::string& phrase) const;
    const std::map<std::string, ConceptRecord>& records() const { return records_; }
    const BurnInResult& burn_in() const { return burn_in_; }

    std::optional<int> transfer_year(const std::string& phrase, CorpusId target) const;
    bool transferred_by(const std::string& phrase, CorpusId target, int year) const;

    // Concepts that emerged after the burn-in cutoff and originate in
    // research w.r.t. the target; sorted for deterministic iteration.
    std::vector<std::string> study_concepts(CorpusId target) const;

    // TSV: phrase, emergence_year, transfer_year_patents, transfer_year_trials, field.
    void save(std::ostream& out) const;

private:
    std::map<std::string, ConceptRecord> records_;
    BurnInResult burn_in_;
};

}  // namespace cflow

#pragma once
// Line-record corpus storage: ingest, validate, index, query.
//
// Input is one JSON object per line with keys doc_id, corpus, year, title,
// abstract, authors, venue, disciplines, cited_venues. Accepted records are
// kept in memory (indexed by corpus and year) and, when the store is backed
// by a directory, appended to <dir>/<corpus>.jsonl in canonical form.
// Corpora are write-once and scan-heavy: a single writer ingests, then the
// store is immutable and read-safe from any number of threads.

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace cflow {

enum class CorpusId { papers = 0, patents = 1, trials = 2 };

constexpr std::array<const char*, 3> kCorpusNames = {"papers", "patents", "trials"};

std::optional<CorpusId> parse_corpus_id(const std::string& name);
const char* corpus_name(CorpusId id);

enum class Affiliation { academic, industry, unknown };

Affiliation parse_affiliation(const std::string& s);
const char* affiliation_name(Affiliation a);

struct AuthorRef {
    std::string id;
    Affiliation kind = Affiliation::unknown;
};

struct DisciplineWeight {
    std::string code;
    double weight = 0.0;
};

struct Document {
    std::string doc_id;
    CorpusId corpus = CorpusId::papers;
    int year = 0;
    std::string title;
    std::string abstract;  // may be empty: title-only documents are accepted
    std::vector<AuthorRef> authors;
    std::string venue;  // empty means no venue
    std::vector<DisciplineWeight> disciplines;
    std::vector<std::string> cited_venues;  // patents only

    std::string to_json_line() const;
};

struct IngestReport {
    size_t count_ok = 0;
    size_t count_rejected = 0;
    std::vector<std::string> reject_reasons;  // one entry per rejected record, in stream order

    std::string to_json() const;
};

// year -> set of venues cited by at least one patent granted on or before
// that year. Sets are cumulative, so only change-points are stored.
class VenueLinkTable {
public:
    void build(const std::vector<const Document*>& patents);

    bool contains(int year, const std::string& venue) const;
    // The cumulative set as of `year` (empty set before the first patent).
    const std::set<std::string>& at(int year) const;

private:
    std::vector<int> change_years_;                // sorted
    std::vector<std::set<std::string>> cumulative_;  // parallel to change_years_
    std::set<std::string> empty_;
};

class CorpusStore {
public:
    explicit CorpusStore(int year_min = 1900, int year_max = 2100);

    // Opens a directory-backed store, loading any existing <corpus>.jsonl.
    static CorpusStore open(const std::string& dir, int year_min = 1900, int year_max = 2100);

    // Consumes one record per line. Malformed records are counted and
    // reported, never fatal. Duplicate doc_ids are rejected, which makes
    // re-ingestion of the same stream a no-op.
    IngestReport ingest(CorpusId corpus, std::istream& lines);

    bool ingested(CorpusId corpus) const { return ingested_[idx(corpus)]; }
    size_t size(CorpusId corpus) const { return docs_[idx(corpus)].size(); }
    const std::vector<Document>& all(CorpusId corpus) const { return docs_[idx(corpus)]; }

    // Documents in [year_lo, year_hi], ordered by (year, doc_id).
    // Throws std::invalid_argument if year_lo > year_hi or the corpus was
    // never ingested.
    std::vector<const Document*> query(CorpusId corpus, int year_lo, int year_hi,
                                       const std::string* venue = nullptr) const;

    const Document* find(CorpusId corpus, const std::string& doc_id) const;
    std::optional<size_t> index_of(CorpusId corpus, const std::string& doc_id) const;

    // Cumulative venue-citation table from the patents corpus.
    // Throws if patents were never ingested.
    VenueLinkTable build_venue_link_table() const;

    int year_min() const { return year_min_; }
    int year_max() const { return year_max_; }

private:
    static size_t idx(CorpusId c) { return static_cast<size_t>(c); }
    std::optional<std::string> validate_and_parse(CorpusId corpus, const std::string& line,
                                                  Document& out) const;

    int year_min_, year_max_;
    std::array<std::vector<Document>, 3> docs_;
    std::array<std::unordered_map<std::string, size_t>, 3> by_id_;
    std::array<std::map<int, std::vector<size_t>>, 3> by_year_;
    std::array<bool, 3> ingested_{false, false, false};
    std::string dir_;  // empty: memory-only
};

}  // namespace cflow

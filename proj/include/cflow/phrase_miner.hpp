#pragma once
// Concept vocabulary mining and document segmentation.
//
// Candidates are token n-grams with corpus frequency >= min_freq. Multiword
// candidates are scored by pointwise mutual information against their
// unigram probabilities and squashed into a [0,1] quality; the cleaned
// vocabulary then drives a greedy left-to-right longest-match segmentation
// of each document. n-grams never cross sentence boundaries.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cflow/corpus.hpp"
#include "cflow/text.hpp"

namespace cflow {

struct MinerConfig {
    int max_phrase_len = 4;   // L_max
    int min_freq = 5;
    double temperature = 2.0;  // tau in quality = 1/(1+exp(-cohesion/tau))
    double quality_threshold = 0.7;
    int min_tokens = 1;  // vocabulary entries shorter than this are dropped
};

struct CandidatePhrase {
    std::string phrase;  // canonical: lowercase tokens joined by single spaces
    int order = 1;       // token count
    uint64_t frequency = 0;
    double cohesion = 0.0;
    double quality = 0.0;
};

// Frequency tables kept alongside the candidate list; scoring needs totals
// per order and unigram counts for words whose own candidate fell below
// min_freq (impossible for components of retained phrases, but kept full
// for simplicity).
struct CorpusCounts {
    std::unordered_map<std::string, uint64_t> unigrams;
    std::vector<uint64_t> windows_by_order;  // [n] = number of n-token windows, index 0 unused
};

struct CandidateSet {
    std::vector<CandidatePhrase> candidates;  // sorted by (order, phrase)
    CorpusCounts counts;
};

CandidateSet extract_candidates(const std::vector<TokenizedText>& docs, const MinerConfig& cfg);

void score_candidates(CandidateSet& set, const MinerConfig& cfg);

struct Stoplists {
    std::unordered_set<std::string> phrases;  // canonical strings, any source list
    void add(const std::string& phrase);
    void load_file(const std::string& path);  // one phrase per line, '#' comments
};

class ConceptVocabulary {
public:
    struct Entry {
        uint64_t frequency = 0;
        double quality = 0.0;
    };

    void insert(const std::string& phrase, uint64_t frequency, double quality);
    bool contains(const std::string& phrase) const { return entries_.count(phrase) > 0; }
    size_t size() const { return entries_.size(); }
    int max_len() const { return max_len_; }
    const std::unordered_map<std::string, Entry>& entries() const { return entries_; }

    // One phrase per line: phrase \t frequency \t quality, sorted by phrase.
    void save(std::ostream& out) const;
    static ConceptVocabulary load(std::istream& in);

    // Deterministic sorted phrase list.
    std::vector<std::string> phrases() const;

private:
    std::unordered_map<std::string, Entry> entries_;
    int max_len_ = 0;
};

ConceptVocabulary clean_vocabulary(const CandidateSet& set, const MinerConfig& cfg,
                                   const Stoplists& stoplists);

struct Mention {
    std::string phrase;
    uint32_t start = 0;  // token offsets into the document token stream
    uint32_t end = 0;    // exclusive
};

std::vector<Mention> segment_document(const TokenizedText& doc, const ConceptVocabulary& vocab);

// One corpus after segmentation. `doc_index` points into
// CorpusStore::all(corpus); documents without mentions are omitted.
struct DocMentions {
    size_t doc_index = 0;
    std::vector<Mention> mentions;
};

struct SegmentedCorpus {
    CorpusId corpus = CorpusId::papers;
    std::vector<DocMentions> docs;
};

std::vector<TokenizedText> tokenize_corpus(const CorpusStore& store, CorpusId corpus);

SegmentedCorpus segment_corpus(const CorpusStore& store, CorpusId corpus,
                               const ConceptVocabulary& vocab);

// TSV line records: doc_id, phrase, start, end.
void save_mentions(std::ostream& out, const CorpusStore& store, const SegmentedCorpus& segmented);
SegmentedCorpus load_mentions(std::istream& in, const CorpusStore& store, CorpusId corpus);

}  // namespace cflow

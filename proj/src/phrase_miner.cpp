#include "cflow/phrase_miner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cflow {

CandidateSet extract_candidates(const std::vector<TokenizedText>& docs, const MinerConfig& cfg) {
    if (cfg.max_phrase_len < 1) throw std::invalid_argument("max_phrase_len must be >= 1");
    if (cfg.min_freq < 1) throw std::invalid_argument("min_freq must be >= 1");

    const size_t lmax = static_cast<size_t>(cfg.max_phrase_len);
    std::unordered_map<std::string, uint64_t> counts;  // all orders, joined keys
    CorpusCounts totals;
    totals.windows_by_order.assign(lmax + 1, 0);

    for (const auto& doc : docs) {
        for (size_t s = 0; s < doc.sentence_count(); ++s) {
            auto [b, e] = doc.sentence(s);
            const size_t len = e - b;
            for (size_t n = 1; n <= lmax && n <= len; ++n) {
                totals.windows_by_order[n] += len - n + 1;
                for (size_t i = b; i + n <= e; ++i)
                    ++counts[join_tokens(doc.tokens, i, n)];
            }
        }
    }

    CandidateSet out;
    out.counts.windows_by_order = totals.windows_by_order;
    for (auto& [phrase, freq] : counts) {
        int order = 1 + static_cast<int>(std::count(phrase.begin(), phrase.end(), ' '));
        if (order == 1) out.counts.unigrams.emplace(phrase, freq);
        if (freq < static_cast<uint64_t>(cfg.min_freq)) continue;
        CandidatePhrase c;
        c.phrase = phrase;
        c.order = order;
        c.frequency = freq;
        out.candidates.push_back(std::move(c));
    }
    std::sort(out.candidates.begin(), out.candidates.end(),
              [](const CandidatePhrase& a, const CandidatePhrase& b) {
                  return a.order != b.order ? a.order < b.order : a.phrase < b.phrase;
              });
    return out;
}

void score_candidates(CandidateSet& set, const MinerConfig& cfg) {
    if (cfg.temperature <= 0.0) throw std::invalid_argument("temperature must be > 0");
    const auto& totals = set.counts.windows_by_order;
    const double total_unigrams = totals.size() > 1 ? static_cast<double>(totals[1]) : 0.0;

    for (auto& c : set.candidates) {
        if (c.order == 1) {
            c.cohesion = 0.0;
            c.quality = 1.0;  // unigrams above min_freq pass as-is
            continue;
        }
        const double p_phrase =
            static_cast<double>(c.frequency) / static_cast<double>(totals[c.order]);
        double log_prod = 0.0;
        std::istringstream words(c.phrase);
        std::string w;
        while (words >> w) {
            auto it = set.counts.unigrams.find(w);
            if (it == set.counts.unigrams.end())
                throw std::logic_error("candidate component missing from unigram table: " + w);
            log_prod += std::log(static_cast<double>(it->second) / total_unigrams);
        }
        c.cohesion = std::log(p_phrase) - log_prod;
        c.quality = 1.0 / (1.0 + std::exp(-c.cohesion / cfg.temperature));
    }
}

void Stoplists::add(const std::string& phrase) {
    auto tokens = tokenize(phrase);
    if (!tokens.empty()) phrases.insert(join_tokens(tokens, 0, tokens.size()));
}

void Stoplists::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stoplist: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        add(line);
    }
}

void ConceptVocabulary::insert(const std::string& phrase, uint64_t frequency, double quality) {
    int len = 1 + static_cast<int>(std::count(phrase.begin(), phrase.end(), ' '));
    max_len_ = std::max(max_len_, len);
    entries_[phrase] = Entry{frequency, quality};
}

std::vector<std::string> ConceptVocabulary::phrases() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [p, e] : entries_) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

void ConceptVocabulary::save(std::ostream& out) const {
    for (const auto& p : phrases()) {
        const Entry& e = entries_.at(p);
        out << p << '\t' << e.frequency << '\t' << e.quality << '\n';
    }
}

ConceptVocabulary ConceptVocabulary::load(std::istream& in) {
    ConceptVocabulary vocab;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t t1 = line.find('\t');
        size_t t2 = line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw std::runtime_error("malformed vocabulary line: " + line);
        vocab.insert(line.substr(0, t1), std::stoull(line.substr(t1 + 1, t2 - t1 - 1)),
                     std::stod(line.substr(t2 + 1)));
    }
    return vocab;
}

ConceptVocabulary clean_vocabulary(const CandidateSet& set, const MinerConfig& cfg,
                                   const Stoplists& stoplists) {
    ConceptVocabulary vocab;
    for (const auto& c : set.candidates) {
        if (c.order < cfg.min_tokens) continue;
        if (c.quality < cfg.quality_threshold) continue;
        if (stoplists.phrases.count(c.phrase)) continue;
        vocab.insert(c.phrase, c.frequency, c.quality);
    }
    return vocab;
}

std::vector<TokenizedText> tokenize_corpus(const CorpusStore& store, CorpusId corpus) {
    std::vector<TokenizedText> out;
    out.reserve(store.size(corpus));
    for (const auto& doc : store.all(corpus))
        out.push_back(tokenize_document(doc.title, doc.abstract));
    return out;
}

SegmentedCorpus segment_corpus(const CorpusStore& store, CorpusId corpus,
                               const ConceptVocabulary& vocab) {
    SegmentedCorpus seg;
    seg.corpus = corpus;
    const auto& docs = store.all(corpus);
    for (size_t i = 0; i < docs.size(); ++i) {
        auto mentions = segment_document(tokenize_document(docs[i].title, docs[i].abstract), vocab);
        if (!mentions.empty()) seg.docs.push_back(DocMentions{i, std::move(mentions)});
    }
    return seg;
}

void save_mentions(std::ostream& out, const CorpusStore& store, const SegmentedCorpus& segmented) {
    const auto& docs = store.all(segmented.corpus);
    for (const auto& dm : segmented.docs)
        for (const auto& m : dm.mentions)
            out << docs[dm.doc_index].doc_id << '\t' << m.phrase << '\t' << m.start << '\t'
                << m.end << '\n';
}

SegmentedCorpus load_mentions(std::istream& in, const CorpusStore& store, CorpusId corpus) {
    SegmentedCorpus seg;
    seg.corpus = corpus;
    std::unordered_map<size_t, size_t> slot_of;  // doc index -> position in seg.docs
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t t1 = line.find('\t');
        size_t t2 = line.find('\t', t1 + 1);
        size_t t3 = line.find('\t', t2 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t3 == std::string::npos)
            throw std::runtime_error("malformed mention line: " + line);
        auto doc_index = store.index_of(corpus, line.substr(0, t1));
        if (!doc_index) throw std::runtime_error("mention references unknown doc: " + line);
        Mention m;
        m.phrase = line.substr(t1 + 1, t2 - t1 - 1);
        m.start = static_cast<uint32_t>(std::stoul(line.substr(t2 + 1, t3 - t2 - 1)));
        m.end = static_cast<uint32_t>(std::stoul(line.substr(t3 + 1)));
        auto [it, fresh] = slot_of.emplace(*doc_index, seg.docs.size());
        if (fresh) seg.docs.push_back(DocMentions{*doc_index, {}});
        seg.docs[it->second].mentions.push_back(std::move(m));
    }
    return seg;
}

std::vector<Mention> segment_document(const TokenizedText& doc, const ConceptVocabulary& vocab) {
    std::vector<Mention> mentions;
    if (vocab.size() == 0) return mentions;
    const size_t lmax = static_cast<size_t>(vocab.max_len());

    for (size_t s = 0; s < doc.sentence_count(); ++s) {
        auto [b, e] = doc.sentence(s);
        size_t i = b;
        while (i < e) {
            size_t best = 0;
            std::string best_phrase;
            size_t cap = std::min(lmax, e - i);
            for (size_t n = cap; n >= 1; --n) {
                std::string key = join_tokens(doc.tokens, i, n);
                if (vocab.contains(key)) {
                    best = n;
                    best_phrase = std::move(key);
                    break;
                }
            }
            if (best == 0) {
                ++i;
                continue;
            }
            mentions.push_back(Mention{std::move(best_phrase), static_cast<uint32_t>(i),
                                       static_cast<uint32_t>(i + best)});
            i += best;
        }
    }
    return mentions;
}

}  // namespace cflow

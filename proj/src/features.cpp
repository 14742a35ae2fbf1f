#include "cflow/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cflow/text.hpp"

namespace cflow {

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "adopter_size",       "author_repeated_usage",
    "discipline_diversity", "engineering_relation",
    "emotionality",       "accessibility",
    "journal_linkage",    "industry_share",
    "weighted_degree",    "transferred_neighbor_share",
};

namespace {

std::unordered_set<std::string> load_word_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open word list: " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto tokens = tokenize(line);
        for (auto& t : tokens) words.insert(std::move(t));
    }
    return words;
}

}  // namespace

SentimentLexicon SentimentLexicon::load(const std::string& positive_path,
                                        const std::string& negative_path) {
    SentimentLexicon lex;
    lex.positive = load_word_file(positive_path);
    lex.negative = load_word_file(negative_path);
    for (const auto& w : lex.positive)
        if (lex.negative.count(w))
            throw std::runtime_error("sentiment lexicon lists overlap on: " + w);
    return lex;
}

EasyWordList EasyWordList::load(const std::string& path) {
    EasyWordList list;
    list.words = load_word_file(path);
    if (list.words.empty()) throw std::runtime_error("easy word list is empty: " + path);
    return list;
}

FeatureEngine::FeatureEngine(const CorpusStore& store, const SegmentedCorpus& papers_segmented,
                             const ConceptRegistry& registry, const VenueLinkTable& venue_table,
                             const SentimentLexicon& lexicon, const EasyWordList& easy_words,
                             const Taxonomy& taxonomy, const CooccurrenceGraph& graph,
                             FeatureConfig cfg)
    : registry_(registry), venues_linked_(venue_table), graph_(graph), cfg_(cfg) {
    const auto& docs = store.all(CorpusId::papers);

    std::unordered_map<std::string, uint32_t> venue_ids;
    std::unordered_map<std::string, uint32_t> author_ids;
    std::unordered_map<std::string, uint32_t> code_ids;

    doc_stats_.reserve(papers_segmented.docs.size());
    for (const auto& dm : papers_segmented.docs) {
        const Document& doc = docs[dm.doc_index];
        DocStats st;
        st.year = doc.year;

        TokenizedText text = tokenize_document(doc.title, doc.abstract);
        st.tokens = static_cast<uint32_t>(text.tokens.size());
        st.sentences = static_cast<uint32_t>(text.sentence_count());
        for (const auto& t : text.tokens) {
            if (!easy_words.words.count(t)) ++st.difficult;
            if (lexicon.hit(t)) ++st.sentiment;
        }

        if (!doc.venue.empty()) {
            auto [it, fresh] = venue_ids.emplace(doc.venue, venue_names_.size());
            if (fresh) venue_names_.push_back(doc.venue);
            st.venue = static_cast<int32_t>(it->second);
        }
        for (const auto& a : doc.authors) {
            auto [it, fresh] = author_ids.emplace(a.id, author_ids.size());
            st.authors.push_back(it->second);
            st.author_kind.push_back(static_cast<uint8_t>(a.kind));
        }
        for (const auto& dw : doc.disciplines) {
            auto [it, fresh] = code_ids.emplace(dw.code, code_ids.size());
            if (fresh) code_is_engineering_.push_back(taxonomy.is_engineering(dw.code));
            st.codes.emplace_back(it->second, dw.weight);
        }

        const uint32_t stats_index = static_cast<uint32_t>(doc_stats_.size());
        std::set<std::string> distinct;
        for (const auto& m : dm.mentions) distinct.insert(m.phrase);
        for (const auto& phrase : distinct)
            concept_docs_[phrase][doc.year].push_back(stats_index);

        doc_stats_.push_back(std::move(st));
    }
}

int FeatureEngine::emergence_of(const std::string& phrase) const {
    const ConceptRecord* rec = registry_.find(phrase);
    if (!rec) throw std::invalid_argument("unknown concept: " + phrase);
    return rec->emergence_year;
}

const std::vector<uint32_t>* FeatureEngine::docs_at(const std::string& phrase, int year) const {
    auto it = concept_docs_.find(phrase);
    if (it == concept_docs_.end()) return nullptr;
    auto yit = it->second.find(year);
    if (yit == it->second.end()) return nullptr;
    return &yit->second;
}

std::unordered_set<uint32_t> FeatureEngine::prior_authors(const std::string& phrase,
                                                          int year) const {
    std::unordered_set<uint32_t> prior;
    auto it = concept_docs_.find(phrase);
    if (it == concept_docs_.end()) return prior;
    for (const auto& [y, doc_list] : it->second) {
        if (y >= year) break;
        for (uint32_t di : doc_list)
            for (uint32_t a : doc_stats_[di].authors) prior.insert(a);
    }
    return prior;
}

std::pair<double, double> FeatureEngine::hype_features(const std::string& phrase,
                                                       int year) const {
    if (year < emergence_of(phrase)) return {0.0, 0.0};
    const auto* doc_list = docs_at(phrase, year);
    if (!doc_list) return {0.0, 0.0};

    auto prior = prior_authors(phrase, year);
    std::unordered_set<uint32_t> current;
    for (uint32_t di : *doc_list)
        for (uint32_t a : doc_stats_[di].authors) current.insert(a);
    size_t repeated = 0;
    for (uint32_t a : current)
        if (prior.count(a)) ++repeated;
    return {static_cast<double>(current.size()), static_cast<double>(repeated)};
}

std::pair<double, double> FeatureEngine::bridge_features(const std::string& phrase,
                                                         int year) const {
    if (year < emergence_of(phrase)) return {0.0, 0.0};
    const auto* doc_list = docs_at(phrase, year);
    if (!doc_list) return {0.0, 0.0};

    std::unordered_map<uint32_t, double> mass;
    double total = 0.0;
    for (uint32_t di : *doc_list)
        for (const auto& [code, w] : doc_stats_[di].codes) {
            mass[code] += w;
            total += w;
        }
    if (total <= 0.0) return {0.0, 0.0};

    double entropy = 0.0, engineering = 0.0;
    for (const auto& [code, m] : mass) {
        const double q = m / total;
        if (q > 0.0) entropy -= q * std::log(q);
        if (code_is_engineering_[code]) engineering += q;
    }
    if (cfg_.entropy_base2) entropy /= std::log(2.0);
    return {entropy, engineering};
}

std::pair<double, double> FeatureEngine::ideational_features(const std::string& phrase,
                                                             int year) const {
    if (year < emergence_of(phrase)) return {0.0, 0.0};
    const auto* doc_list = docs_at(phrase, year);
    if (!doc_list) return {0.0, 0.0};

    double emo_sum = 0.0;
    size_t emo_docs = 0;
    double acc_weighted = 0.0, acc_weight = 0.0;
    for (uint32_t di : *doc_list) {
        const DocStats& st = doc_stats_[di];
        if (st.tokens == 0) continue;  // empty text: skipped
        emo_sum += static_cast<double>(st.sentiment) / st.tokens;
        ++emo_docs;

        const double difficult_fraction = static_cast<double>(st.difficult) / st.tokens;
        const double mean_sentence_len =
            static_cast<double>(st.tokens) / static_cast<double>(st.sentences);
        double score = 0.1579 * (100.0 * difficult_fraction) + 0.0496 * mean_sentence_len;
        if (difficult_fraction > 0.05) score += 3.6365;
        acc_weighted += score * st.tokens;
        acc_weight += st.tokens;
    }
    const double emotionality = emo_docs ? emo_sum / static_cast<double>(emo_docs) : 0.0;
    const double accessibility = acc_weight > 0.0 ? acc_weighted / acc_weight : 0.0;
    return {emotionality, accessibility};
}

std::pair<double, double> FeatureEngine::resonance_features(const std::string& phrase,
                                                            int year) const {
    if (year < emergence_of(phrase)) return {0.0, 0.0};
    const auto* doc_list = docs_at(phrase, year);
    if (!doc_list) return {0.0, 0.0};

    std::set<int32_t> venues;
    std::unordered_map<uint32_t, bool> author_industry;
    for (uint32_t di : *doc_list) {
        const DocStats& st = doc_stats_[di];
        if (st.venue >= 0) venues.insert(st.venue);
        for (size_t i = 0; i < st.authors.size(); ++i) {
            bool industry =
                st.author_kind[i] == static_cast<uint8_t>(Affiliation::industry);
            auto [it, fresh] = author_industry.emplace(st.authors[i], industry);
            if (!fresh && industry) it->second = true;
        }
    }

    double linkage = 0.0;
    if (!venues.empty()) {
        size_t linked = 0;
        for (int32_t v : venues)
            if (venues_linked_.contains(year, venue_names_[static_cast<size_t>(v)])) ++linked;
        linkage = static_cast<double>(linked) / static_cast<double>(venues.size());
    }

    double industry_share = 0.0;
    if (!author_industry.empty()) {
        size_t industry = 0;
        for (const auto& [a, is_ind] : author_industry)
            if (is_ind) ++industry;
        industry_share = static_cast<double>(industry) / static_cast<double>(author_industry.size());
    }
    return {linkage, industry_share};
}

FeatureRow FeatureEngine::row_with_prior(const std::string& phrase, int year,
                                         const std::unordered_set<uint32_t>& prior,
                                         const CooccurrenceGraph::Snapshot& snap) const {
    FeatureRow row{};
    const auto* doc_list = docs_at(phrase, year);

    if (doc_list) {
        std::unordered_set<uint32_t> current;
        for (uint32_t di : *doc_list)
            for (uint32_t a : doc_stats_[di].authors) current.insert(a);
        size_t repeated = 0;
        for (uint32_t a : current)
            if (prior.count(a)) ++repeated;
        row[0] = static_cast<double>(current.size());
        row[1] = static_cast<double>(repeated);

        auto [diversity, engineering] = bridge_features(phrase, year);
        row[2] = diversity;
        row[3] = engineering;
        auto [emotionality, accessibility] = ideational_features(phrase, year);
        row[4] = emotionality;
        row[5] = accessibility;
        auto [linkage, industry] = resonance_features(phrase, year);
        row[6] = linkage;
        row[7] = industry;
    }

    if (snap.has_node(phrase)) {
        row[8] = snap.weighted_degree(phrase);
        row[9] = snap.transferred_neighbor_share(phrase);
    }
    return row;
}

FeatureRow FeatureEngine::feature_row(const std::string& phrase, int year) const {
    if (year < emergence_of(phrase)) return FeatureRow{};
    return row_with_prior(phrase, year, prior_authors(phrase, year), graph_.snapshot(year));
}

FeatureMatrix FeatureEngine::feature_matrix(const std::vector<std::string>& concepts, int year_lo,
                                            int year_hi, int threads) const {
    if (year_lo > year_hi) throw std::invalid_argument("feature year range inverted");
    FeatureMatrix m;
    m.concepts = concepts;
    m.year_lo = year_lo;
    m.year_hi = year_hi;
    for (size_t i = 0; i < concepts.size(); ++i) {
        emergence_of(concepts[i]);  // validate up front
        m.index[concepts[i]] = i;
    }
    const size_t years = m.years();
    m.values.assign(concepts.size() * years * kFeatureCount, 0.0);

    auto snapshots = graph_.snapshots(year_lo, year_hi);

    auto fill_range = [&](size_t begin, size_t end) {
        for (size_t ci = begin; ci < end; ++ci) {
            const std::string& phrase = concepts[ci];
            const int emergence = emergence_of(phrase);
            // Walk years ascending, growing the prior-author set as we go.
            std::unordered_set<uint32_t> prior;
            for (int y = year_lo; y <= year_hi; ++y) {
                if (y >= emergence) {
                    FeatureRow row = row_with_prior(phrase, y, prior,
                                                    snapshots[static_cast<size_t>(y - year_lo)]);
                    double* out = m.values.data() +
                                  (ci * years + static_cast<size_t>(y - year_lo)) * kFeatureCount;
                    std::copy(row.begin(), row.end(), out);
                }
                if (const auto* doc_list = docs_at(phrase, y))
                    for (uint32_t di : *doc_list)
                        for (uint32_t a : doc_stats_[di].authors) prior.insert(a);
            }
        }
    };

    const size_t n = concepts.size();
    if (threads <= 1 || n < 64) {
        fill_range(0, n);
    } else {
        const size_t workers = std::min<size_t>(static_cast<size_t>(threads), 16);
        std::vector<std::thread> pool;
        const size_t chunk = (n + workers - 1) / workers;
        for (size_t w = 0; w < workers; ++w) {
            size_t b = w * chunk, e = std::min(n, b + chunk);
            if (b >= e) break;
            pool.emplace_back(fill_range, b, e);
        }
        for (auto& t : pool) t.join();
    }
    return m;
}

void FeatureMatrix::save_csv(std::ostream& out, const std::string& config_echo) const {
    out << "# " << config_echo << '\n';
    out << "concept,year";
    for (const auto* name : kFeatureNames) out << ',' << name;
    out << '\n';
    out.precision(17);
    for (size_t ci = 0; ci < concepts.size(); ++ci)
        for (int y = year_lo; y <= year_hi; ++y) {
            out << concepts[ci] << ',' << y;
            for (double v : row(ci, y)) out << ',' << v;
            out << '\n';
        }
}

FeatureMatrix FeatureMatrix::load_csv(std::istream& in) {
    FeatureMatrix m;
    std::string line;
    bool header_seen = false;
    std::vector<std::pair<std::string, std::pair<int, FeatureRow>>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column names are fixed; skip
            continue;
        }
        std::istringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::string phrase = cell;
        std::getline(ss, cell, ',');
        int year = std::stoi(cell);
        FeatureRow row{};
        for (size_t f = 0; f < kFeatureCount; ++f) {
            std::getline(ss, cell, ',');
            row[f] = std::stod(cell);
        }
        rows.push_back({std::move(phrase), {year, row}});
    }
    if (rows.empty()) throw std::runtime_error("empty feature matrix");

    m.year_lo = rows.front().second.first;
    m.year_hi = rows.front().second.first;
    for (const auto& r : rows) {
        m.year_lo = std::min(m.year_lo, r.second.first);
        m.year_hi = std::max(m.year_hi, r.second.first);
    }
    for (const auto& r : rows)
        if (!m.index.count(r.first)) {
            m.index[r.first] = m.concepts.size();
            m.concepts.push_back(r.first);
        }
    m.values.assign(m.concepts.size() * m.years() * kFeatureCount, 0.0);
    for (const auto& r : rows) {
        size_t ci = m.index[r.first];
        size_t offset =
            (ci * m.years() + static_cast<size_t>(r.second.first - m.year_lo)) * kFeatureCount;
        std::copy(r.second.second.begin(), r.second.second.end(), m.values.begin() + offset);
    }
    return m;
}

std::vector<FeatureGroupStat> transfer_group_ttests(const FeatureMatrix& matrix,
                                                    const ConceptRegistry& registry,
                                                    CorpusId target, int year_hi) {
    std::vector<std::vector<double>> transferred(kFeatureCount), other(kFeatureCount);
    for (size_t ci = 0; ci < matrix.concepts.size(); ++ci) {
        const ConceptRecord* rec = registry.find(matrix.concepts[ci]);
        if (!rec) continue;
        const int from = std::max(rec->emergence_year, matrix.year_lo);
        if (from > year_hi) continue;
        FeatureRow sum{};
        int n = 0;
        for (int y = from; y <= std::min(year_hi, matrix.year_hi); ++y) {
            auto row = matrix.row(ci, y);
            for (size_t f = 0; f < kFeatureCount; ++f) sum[f] += row[f];
            ++n;
        }
        if (n == 0) continue;
        auto& dest =
            rec->transfer_year[static_cast<size_t>(target)] ? transferred : other;
        for (size_t f = 0; f < kFeatureCount; ++f) dest[f].push_back(sum[f] / n);
    }

    std::vector<FeatureGroupStat> out;
    for (size_t f = 0; f < kFeatureCount; ++f) {
        FeatureGroupStat stat;
        stat.feature = kFeatureNames[f];
        stat.mean_transferred = mean_of(transferred[f]);
        stat.mean_non_transferred = mean_of(other[f]);
        if (transferred[f].size() >= 2 && other[f].size() >= 2) {
            try {
                TTestResult r = welch_ttest(transferred[f], other[f]);
                stat.t = r.t;
                stat.df = r.df;
                stat.p = r.p;
                stat.defined = true;
            } catch (const std::invalid_argument&) {
                stat.defined = false;
            }
        }
        out.push_back(std::move(stat));
    }
    return out;
}

std::vector<double> feature_correlation(const FeatureMatrix& matrix,
                                        const ConceptRegistry& registry) {
    // Column-major active rows (year >= emergence).
    std::vector<std::array<double, kFeatureCount>> rows;
    for (size_t ci = 0; ci < matrix.concepts.size(); ++ci) {
        const ConceptRecord* rec = registry.find(matrix.concepts[ci]);
        if (!rec) continue;
        for (int y = std::max(rec->emergence_year, matrix.year_lo); y <= matrix.year_hi; ++y) {
            auto row = matrix.row(ci, y);
            std::array<double, kFeatureCount> r;
            std::copy(row.begin(), row.end(), r.begin());
            rows.push_back(r);
        }
    }
    if (rows.size() < 2) throw std::invalid_argument("correlation needs at least 2 active rows");
    std::vector<double> column_major(kFeatureCount * rows.size());
    for (size_t f = 0; f < kFeatureCount; ++f)
        for (size_t r = 0; r < rows.size(); ++r) column_major[f * rows.size() + r] = rows[r][f];
    return pearson_correlation(column_major, rows.size(), kFeatureCount);
}

}  // namespace cflow

#include "cflow/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cflow {

using nlohmann::json;

std::optional<CorpusId> parse_corpus_id(const std::string& name) {
    for (size_t i = 0; i < kCorpusNames.size(); ++i)
        if (name == kCorpusNames[i]) return static_cast<CorpusId>(i);
    return std::nullopt;
}

const char* corpus_name(CorpusId id) { return kCorpusNames[static_cast<size_t>(id)]; }

Affiliation parse_affiliation(const std::string& s) {
    if (s == "academic") return Affiliation::academic;
    if (s == "industry") return Affiliation::industry;
    return Affiliation::unknown;
}

const char* affiliation_name(Affiliation a) {
    switch (a) {
        case Affiliation::academic: return "academic";
        case Affiliation::industry: return "industry";
        default: return "unknown";
    }
}

std::string Document::to_json_line() const {
    json j;
    j["doc_id"] = doc_id;
    j["corpus"] = corpus_name(corpus);
    j["year"] = year;
    j["title"] = title;
    j["abstract"] = abstract;
    json ja = json::array();
    for (const auto& a : authors) ja.push_back({{"id", a.id}, {"affiliation", affiliation_name(a.kind)}});
    j["authors"] = ja;
    if (!venue.empty()) j["venue"] = venue;
    json jd = json::array();
    for (const auto& d : disciplines) jd.push_back({{"code", d.code}, {"weight", d.weight}});
    j["disciplines"] = jd;
    if (!cited_venues.empty()) j["cited_venues"] = cited_venues;
    return j.dump();
}

std::string IngestReport::to_json() const {
    json j;
    j["count_ok"] = count_ok;
    j["count_rejected"] = count_rejected;
    j["reject_reasons"] = reject_reasons;
    return j.dump();
}

void VenueLinkTable::build(const std::vector<const Document*>& patents) {
    std::map<int, std::set<std::string>> per_year;
    for (const Document* d : patents)
        for (const auto& v : d->cited_venues) per_year[d->year].insert(v);

    change_years_.clear();
    cumulative_.clear();
    std::set<std::string> acc;
    for (auto& [year, venues] : per_year) {
        size_t before = acc.size();
        acc.insert(venues.begin(), venues.end());
        if (acc.size() != before || change_years_.empty()) {
            change_years_.push_back(year);
            cumulative_.push_back(acc);
        }
    }
}

const std::set<std::string>& VenueLinkTable::at(int year) const {
    auto it = std::upper_bound(change_years_.begin(), change_years_.end(), year);
    if (it == change_years_.begin()) return empty_;
    return cumulative_[static_cast<size_t>(it - change_years_.begin()) - 1];
}

bool VenueLinkTable::contains(int year, const std::string& venue) const {
    return at(year).count(venue) > 0;
}

CorpusStore::CorpusStore(int year_min, int year_max) : year_min_(year_min), year_max_(year_max) {
    if (year_min > year_max) throw std::invalid_argument("corpus year range inverted");
}

CorpusStore CorpusStore::open(const std::string& dir, int year_min, int year_max) {
    CorpusStore store(year_min, year_max);
    std::filesystem::create_directories(dir);
    store.dir_ = dir;
    for (size_t i = 0; i < kCorpusNames.size(); ++i) {
        auto path = std::filesystem::path(dir) / (std::string(kCorpusNames[i]) + ".jsonl");
        if (!std::filesystem::exists(path)) continue;
        std::ifstream in(path);
        // Loading uses the same validation path; the file holds canonical
        // records so nothing should be rejected.
        std::string saved_dir;
        std::swap(saved_dir, store.dir_);  // avoid re-appending while loading
        store.ingest(static_cast<CorpusId>(i), in);
        std::swap(saved_dir, store.dir_);
    }
    return store;
}

std::optional<std::string> CorpusStore::validate_and_parse(CorpusId corpus, const std::string& line,
                                                           Document& out) const {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return "bad_json";

    if (!j.contains("doc_id")) return "missing_field:doc_id";
    if (!j["doc_id"].is_string()) return "bad_type:doc_id";
    out.doc_id = j["doc_id"].get<std::string>();
    if (out.doc_id.empty()) return "empty_doc_id";

    if (j.contains("corpus")) {
        if (!j["corpus"].is_string()) return "bad_type:corpus";
        auto cid = parse_corpus_id(j["corpus"].get<std::string>());
        if (!cid) return "unknown_corpus";
        if (*cid != corpus) return "corpus_mismatch";
    }
    out.corpus = corpus;

    if (!j.contains("year")) return "missing_field:year";
    if (!j["year"].is_number_integer()) return "bad_type:year";
    out.year = j["year"].get<int>();
    if (out.year < year_min_ || out.year > year_max_) return "year_out_of_range";

    if (!j.contains("title")) return "missing_field:title";
    if (!j["title"].is_string()) return "bad_type:title";
    out.title = j["title"].get<std::string>();

    out.abstract.clear();
    if (j.contains("abstract")) {
        if (!j["abstract"].is_string()) return "bad_type:abstract";
        out.abstract = j["abstract"].get<std::string>();
    }

    out.authors.clear();
    if (j.contains("authors")) {
        if (!j["authors"].is_array()) return "bad_type:authors";
        for (const auto& a : j["authors"]) {
            if (!a.is_object() || !a.contains("id") || !a["id"].is_string()) return "bad_author";
            AuthorRef ref;
            ref.id = a["id"].get<std::string>();
            if (ref.id.empty()) return "bad_author";
            if (a.contains("affiliation") && a["affiliation"].is_string())
                ref.kind = parse_affiliation(a["affiliation"].get<std::string>());
            out.authors.push_back(std::move(ref));
        }
    }

    out.venue.clear();
    if (j.contains("venue") && !j["venue"].is_null()) {
        if (!j["venue"].is_string()) return "bad_type:venue";
        out.venue = j["venue"].get<std::string>();
    }

    out.disciplines.clear();
    if (j.contains("disciplines")) {
        if (!j["disciplines"].is_array()) return "bad_type:disciplines";
        double sum = 0.0;
        for (const auto& d : j["disciplines"]) {
            if (!d.is_object() || !d.contains("code") || !d["code"].is_string() ||
                !d.contains("weight") || !d["weight"].is_number())
                return "bad_weights";
            DisciplineWeight w;
            w.code = d["code"].get<std::string>();
            w.weight = d["weight"].get<double>();
            if (w.weight < 0.0) return "bad_weights";
            sum += w.weight;
            out.disciplines.push_back(std::move(w));
        }
        if (!out.disciplines.empty() && std::abs(sum - 1.0) > 1e-9) return "bad_weights";
    }

    out.cited_venues.clear();
    if (j.contains("cited_venues") && corpus == CorpusId::patents) {
        if (!j["cited_venues"].is_array()) return "bad_type:cited_venues";
        for (const auto& v : j["cited_venues"]) {
            if (!v.is_string()) return "bad_type:cited_venues";
            out.cited_venues.push_back(v.get<std::string>());
        }
    }

    return std::nullopt;
}

IngestReport CorpusStore::ingest(CorpusId corpus, std::istream& lines) {
    IngestReport report;
    const size_t ci = idx(corpus);
    std::ofstream append;
    if (!dir_.empty()) {
        auto path = std::filesystem::path(dir_) / (std::string(corpus_name(corpus)) + ".jsonl");
        append.open(path, std::ios::app);
    }

    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        Document doc;
        auto reason = validate_and_parse(corpus, line, doc);
        if (!reason && by_id_[ci].count(doc.doc_id)) reason = "duplicate_doc_id";
        if (reason) {
            ++report.count_rejected;
            report.reject_reasons.push_back(*reason);
            continue;
        }
        ++report.count_ok;
        size_t slot = docs_[ci].size();
        by_id_[ci][doc.doc_id] = slot;
        by_year_[ci][doc.year].push_back(slot);
        if (append.is_open()) append << doc.to_json_line() << '\n';
        docs_[ci].push_back(std::move(doc));
    }
    ingested_[ci] = true;
    return report;
}

std::vector<const Document*> CorpusStore::query(CorpusId corpus, int year_lo, int year_hi,
                                                const std::string* venue) const {
    if (year_lo > year_hi) throw std::invalid_argument("query year range inverted");
    if (!ingested_[idx(corpus)])
        throw std::invalid_argument(std::string("corpus not ingested: ") + corpus_name(corpus));

    const auto& per_year = by_year_[idx(corpus)];
    const auto& docs = docs_[idx(corpus)];
    std::vector<const Document*> out;
    for (auto it = per_year.lower_bound(year_lo); it != per_year.end() && it->first <= year_hi; ++it) {
        size_t first = out.size();
        for (size_t slot : it->second) {
            const Document& d = docs[slot];
            if (venue && d.venue != *venue) continue;
            out.push_back(&d);
        }
        std::sort(out.begin() + first, out.end(),
                  [](const Document* a, const Document* b) { return a->doc_id < b->doc_id; });
    }
    return out;
}

const Document* CorpusStore::find(CorpusId corpus, const std::string& doc_id) const {
    const auto& ids = by_id_[idx(corpus)];
    auto it = ids.find(doc_id);
    if (it == ids.end()) return nullptr;
    return &docs_[idx(corpus)][it->second];
}

std::optional<size_t> CorpusStore::index_of(CorpusId corpus, const std::string& doc_id) const {
    const auto& ids = by_id_[idx(corpus)];
    auto it = ids.find(doc_id);
    if (it == ids.end()) return std::nullopt;
    return it->second;
}

VenueLinkTable CorpusStore::build_venue_link_table() const {
    if (!ingested_[idx(CorpusId::patents)])
        throw std::invalid_argument("venue link table requires the patents corpus");
    std::vector<const Document*> patents;
    patents.reserve(docs_[idx(CorpusId::patents)].size());
    for (const auto& d : docs_[idx(CorpusId::patents)]) patents.push_back(&d);
    VenueLinkTable table;
    table.build(patents);
    return table;
}

}  // namespace cflow

#include "cflow/registry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

namespace cflow {

std::map<std::string, int> compute_emergence_years(
    const std::unordered_map<std::string, YearCounts>& papers_usage) {
    std::map<std::string, int> out;
    for (const auto& [phrase, counts] : papers_usage) {
        if (counts.empty()) continue;
        out[phrase] = counts.begin()->first;
    }
    return out;
}

BurnInResult burn_in_cutoff(const std::map<int, int>& yearly_new_counts, int window,
                            double cv_tolerance) {
    if (window < 3) throw std::invalid_argument("burn-in window must be >= 3");
    if (yearly_new_counts.empty()) throw std::invalid_argument("burn-in needs yearly counts");

    const int y_min = yearly_new_counts.begin()->first;
    const int y_max = yearly_new_counts.rbegin()->first;
    if (y_max - y_min + 1 < window + 1)
        throw std::invalid_argument("burn-in needs at least window+1 consecutive years of counts");

    std::vector<double> dense(static_cast<size_t>(y_max - y_min + 1), 0.0);
    for (const auto& [y, c] : yearly_new_counts) dense[static_cast<size_t>(y - y_min)] = c;

    BurnInResult result;
    result.yearly_new_counts = yearly_new_counts;
    std::optional<int> cutoff;
    for (int y = y_min; y + window <= y_max; ++y) {
        double sum = 0.0, sq = 0.0;
        for (int i = 1; i <= window; ++i) {
            double v = dense[static_cast<size_t>(y + i - y_min)];
            sum += v;
            sq += v * v;
        }
        const double mean = sum / window;
        double cv;
        if (mean <= 0.0) {
            cv = std::numeric_limits<double>::infinity();  // no arrivals: not a stable regime
        } else {
            const double var = std::max(0.0, sq / window - mean * mean);
            cv = std::sqrt(var) / mean;
        }
        result.cv_by_year.emplace_back(y, cv);
        if (!cutoff && cv < cv_tolerance) cutoff = y;
    }
    if (!cutoff)
        throw std::runtime_error(
            "no burn-in year satisfies the stability criterion; widen cv_tolerance");
    result.cutoff_year = *cutoff;
    return result;
}

TransferLabel label_transfers(int emergence_year, const YearCounts& target_docs_per_year,
                              int theta, int horizon) {
    if (theta < 1) throw std::invalid_argument("theta must be >= 1");
    TransferLabel label;
    if (!target_docs_per_year.empty() && target_docs_per_year.begin()->first < emergence_year) {
        label.originated_in_research = false;
        return label;
    }
    long cumulative = 0;
    for (const auto& [year, docs] : target_docs_per_year) {
        if (horizon > 0 && year - emergence_year > horizon) break;
        cumulative += docs;
        if (cumulative >= theta) {
            label.year = year;
            break;
        }
    }
    return label;
}

int prediction_label(const std::optional<int>& transfer_year, int cutoff, int window) {
    if (!transfer_year) return 0;
    return (*transfer_year >= cutoff && *transfer_year <= cutoff + window - 1) ? 1 : 0;
}

std::map<std::string, double> compute_field_idf(
    const std::vector<std::map<std::string, double>>& per_concept_usage, size_t total_concepts) {
    std::map<std::string, size_t> with_use;
    for (const auto& usage : per_concept_usage)
        for (const auto& [field, mass] : usage)
            if (mass > 0.0) ++with_use[field];
    std::map<std::string, double> idf;
    for (const auto& [field, n] : with_use)
        idf[field] = std::log(static_cast<double>(total_concepts) / static_cast<double>(n));
    return idf;
}

std::string assign_field(const std::map<std::string, double>& usage_by_field,
                         const std::map<std::string, double>& idf) {
    double total = 0.0;
    for (const auto& [field, mass] : usage_by_field) total += mass;
    if (total <= 0.0) throw std::invalid_argument("concept has zero field usage");

    std::string best;
    double best_score = -1.0;
    for (const auto& [field, mass] : usage_by_field) {  // std::map: lexicographic, so first
        if (mass <= 0.0) continue;                      // winner of a tie is the smallest name
        auto it = idf.find(field);
        if (it == idf.end()) continue;
        double score = (mass / total) * it->second;
        if (score > best_score) {
            best_score = score;
            best = field;
        }
    }
    return best;
}

ConceptRegistry ConceptRegistry::build(const CorpusStore& store,
                                       const std::array<SegmentedCorpus, 3>& segmented,
                                       const Taxonomy& taxonomy, const RegistryConfig& cfg) {
    ConceptRegistry reg;

    // Distinct-document usage per (concept, corpus, year).
    std::unordered_map<std::string, std::array<YearCounts, 3>> usage;
    for (const auto& seg : segmented) {
        const auto& docs = store.all(seg.corpus);
        const size_t ci = static_cast<size_t>(seg.corpus);
        for (const auto& dm : seg.docs) {
            const Document& doc = docs[dm.doc_index];
            std::set<std::string> distinct;
            for (const auto& m : dm.mentions) distinct.insert(m.phrase);
            for (const auto& phrase : distinct) ++usage[phrase][ci][doc.year];
        }
    }

    std::unordered_map<std::string, YearCounts> papers_usage;
    for (const auto& [phrase, per_corpus] : usage)
        if (!per_corpus[static_cast<size_t>(CorpusId::papers)].empty())
            papers_usage[phrase] = per_corpus[static_cast<size_t>(CorpusId::papers)];

    auto emergence = compute_emergence_years(papers_usage);

    std::map<int, int> new_counts;
    for (const auto& [phrase, year] : emergence) ++new_counts[year];
    // Densify over the full papers year span so quiet early years count as zero.
    if (!store.all(CorpusId::papers).empty()) {
        int lo = store.all(CorpusId::papers).front().year, hi = lo;
        for (const auto& d : store.all(CorpusId::papers)) {
            lo = std::min(lo, d.year);
            hi = std::max(hi, d.year);
        }
        new_counts.try_emplace(lo, 0);
        new_counts.try_emplace(hi, 0);
    }
    reg.burn_in_ = burn_in_cutoff(new_counts, cfg.burnin_window, cfg.burnin_cv_tolerance);

    // Field usage mass per concept from papers discipline codes.
    const auto& papers = store.all(CorpusId::papers);
    std::unordered_map<std::string, std::map<std::string, double>> field_usage;
    for (const auto& seg : segmented) {
        if (seg.corpus != CorpusId::papers) continue;
        for (const auto& dm : seg.docs) {
            const Document& doc = papers[dm.doc_index];
            if (doc.disciplines.empty()) continue;
            std::set<std::string> distinct;
            for (const auto& m : dm.mentions) distinct.insert(m.phrase);
            for (const auto& phrase : distinct)
                for (const auto& dw : doc.disciplines) {
                    const std::string* field = taxonomy.field_of(dw.code);
                    if (field) field_usage[phrase][*field] += dw.weight;
                }
        }
    }
    std::vector<std::map<std::string, double>> usage_list;
    std::vector<std::string> usage_phrases;
    for (const auto& [phrase, year] : emergence) {
        auto it = field_usage.find(phrase);
        usage_list.push_back(it == field_usage.end() ? std::map<std::string, double>{} : it->second);
        usage_phrases.push_back(phrase);
    }
    auto idf = compute_field_idf(usage_list, emergence.size());

    for (size_t i = 0; i < usage_phrases.size(); ++i) {
        const std::string& phrase = usage_phrases[i];
        ConceptRecord rec;
        rec.phrase = phrase;
        rec.emergence_year = emergence.at(phrase);
        rec.yearly_docs = usage.at(phrase);
        for (CorpusId target : {CorpusId::patents, CorpusId::trials}) {
            const size_t ti = static_cast<size_t>(target);
            auto label = label_transfers(rec.emergence_year, rec.yearly_docs[ti], cfg.theta,
                                         cfg.horizon);
            rec.transfer_year[ti] = label.year;
            rec.disqualified[ti] = !label.originated_in_research;
        }
        if (!usage_list[i].empty()) rec.field = assign_field(usage_list[i], idf);
        reg.records_.emplace(phrase, std::move(rec));
    }
    return reg;
}

const ConceptRecord* ConceptRegistry::find(const std::string& phrase) const {
    auto it = records_.find(phrase);
    return it == records_.end() ? nullptr : &it->second;
}

std::optional<int> ConceptRegistry::transfer_year(const std::string& phrase, CorpusId target) const {
    const ConceptRecord* rec = find(phrase);
    if (!rec) return std::nullopt;
    return rec->transfer_year[static_cast<size_t>(target)];
}

bool ConceptRegistry::transferred_by(const std::string& phrase, CorpusId target, int year) const {
    auto ty = transfer_year(phrase, target);
    return ty && *ty <= year;
}

std::vector<std::string> ConceptRegistry::study_concepts(CorpusId target) const {
    std::vector<std::string> out;
    for (const auto& [phrase, rec] : records_) {
        if (rec.emergence_year <= burn_in_.cutoff_year) continue;
        if (rec.disqualified[static_cast<size_t>(target)]) continue;
        out.push_back(phrase);
    }
    return out;  // records_ is an ordered map, already sorted
}

void ConceptRegistry::save(std::ostream& out) const {
    auto opt = [](const std::optional<int>& v) {
        return v ? std::to_string(*v) : std::string("-");
    };
    for (const auto& [phrase, rec] : records_) {
        out << phrase << '\t' << rec.emergence_year << '\t'
            << opt(rec.transfer_year[static_cast<size_t>(CorpusId::patents)]) << '\t'
            << opt(rec.transfer_year[static_cast<size_t>(CorpusId::trials)]) << '\t'
            << (rec.field.empty() ? "-" : rec.field) << '\n';
    }
}

}  // namespace cflow

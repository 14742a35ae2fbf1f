#include "cflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cflow/errors.hpp"
#include "cflow/rng.hpp"

namespace cflow {

namespace {

// Pronounceable pseudowords, unique and disjoint from any forbidden set
// (the sentiment lexicon, so planted sentiment stays countable).
class WordForge {
public:
    WordForge(Rng& rng, std::unordered_set<std::string> forbidden)
        : rng_(rng), taken_(std::move(forbidden)) {}

    std::string fresh() {
        static const char* syllables[] = {
            "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du", "ka", "ke", "ki",
            "ko", "ku", "la", "le", "li", "lo", "lu", "ma", "me", "mi", "mo", "mu", "na",
            "ne", "ni", "no", "nu", "ra", "re", "ri", "ro", "ru", "sa", "se", "si", "so",
            "su", "ta", "te", "ti", "to", "tu", "va", "ve", "vi", "vo", "vu", "za", "ze",
            "zi", "zo", "zu", "pra", "tri", "quo", "sten", "dor"};
        constexpr size_t kCount = sizeof(syllables) / sizeof(syllables[0]);
        for (;;) {
            std::string w;
            const int parts = 2 + static_cast<int>(rng_.next_below(3));
            for (int i = 0; i < parts; ++i) w += syllables[rng_.next_below(kCount)];
            if (taken_.insert(w).second) return w;
        }
    }

private:
    Rng& rng_;
    std::unordered_set<std::string> taken_;
};

struct ConceptPlan {
    std::string phrase;
    bool prone = false;
    int emergence = 0;
    std::map<int, int> patent_docs;  // year -> planted distinct documents
    std::map<int, int> trial_docs;
    std::optional<int> tau_patents;  // realized transfer years (computed from the plans)
    std::optional<int> tau_trials;
};

// theta distinct documents whose cumulative count first reaches theta
// exactly at tau; a few spread into the years between emergence and tau.
std::map<int, int> theta_schedule(int emergence, int tau, int theta, int year_end) {
    std::map<int, int> plan;
    const int span = tau - emergence - 1;
    const int pre = std::min(theta - 1, std::max(0, span));
    for (int i = 0; i < pre; ++i) ++plan[emergence + 1 + (i % span)];
    plan[tau] += theta - pre;
    for (auto it = plan.begin(); it != plan.end();)
        it = it->first > year_end ? plan.erase(it) : std::next(it);
    return plan;
}

std::optional<int> realized_transfer(const std::map<int, int>& plan, int theta) {
    int cumulative = 0;
    for (const auto& [year, docs] : plan) {
        cumulative += docs;
        if (cumulative >= theta) return year;
    }
    return std::nullopt;
}

struct SentenceSpec {
    const std::vector<std::string>* phrase_tokens = nullptr;  // placed first when present
    int filler_lo = 5;
    int filler_hi = 10;
    double positive_extra = 0.0;  // planted positive-sentiment probability per slot
};

}  // namespace

void ScenarioConfig::validate(const Taxonomy& taxonomy) const {
    auto fail = [](const std::string& what) { throw ConfigError("scenario: " + what); };
    if (year_end - year_start + 1 < 8) fail("year range must span at least 8 years");
    if (year_start + 1 > year_end - 3) fail("no room for concept emergence years");
    if (n_concepts < 1) fail("n_concepts must be >= 1");
    if (fraction_prone < 0.0 || fraction_prone > 1.0) fail("fraction_prone outside [0,1]");
    for (double knob : {contagion, engineering_bias, sentiment_bias, venue_link_bias,
                        industry_bias, trial_fraction})
        if (knob < 0.0 || knob > 1.0) fail("mechanism knobs must lie in [0,1]");
    if (hype_growth < 0.0) fail("hype_growth must be >= 0");
    if (filler_vocab < 10 || author_pool < 4 || venue_pool < 2) fail("pools too small");
    if (linked_venues < 1 || linked_venues > venue_pool)
        fail("linked_venues must lie in [1, venue_pool]");
    if (lag_min < 1 || lag_min > lag_max) fail("lag range invalid");
    if (lag_min > year_end - (year_start + 1))
        fail("no planted transfer can complete within the year range");
    if (theta < 1) fail("theta must be >= 1");
    if (base_usage <= 0.0) fail("base_usage must be > 0");
    if (min_paper_docs < 1) fail("min_paper_docs must be >= 1");
    if (background_patents_per_year < 0 || background_trials_per_year < 0)
        fail("background document counts must be >= 0");
    if (taxonomy.code_count() < 1) fail("taxonomy has no codes");
}

SynthOutput generate(const ScenarioConfig& cfg, const std::vector<std::string>& positive_words,
                     const std::vector<std::string>& negative_words, const Taxonomy& taxonomy) {
    cfg.validate(taxonomy);
    if (positive_words.empty() || negative_words.empty())
        throw ConfigError("scenario: sentiment word lists must not be empty");

    // Taxonomy codes split by engineering flag. Codes are taken from the
    // field set where code == field (true for the shipped taxonomy).
    std::vector<std::string> codes, eng_codes, other_codes;
    for (const auto& field : taxonomy.fields())
        if (taxonomy.field_of(field)) codes.push_back(field);
    for (const auto& c : codes)
        (taxonomy.is_engineering(c) ? eng_codes : other_codes).push_back(c);
    if (codes.empty()) throw ConfigError("scenario: taxonomy has no self-mapped codes");
    if (cfg.engineering_bias > 0.0 && (eng_codes.empty() || other_codes.size() < 2))
        throw ConfigError(
            "scenario: engineering bias needs an engineering code and two other codes");

    Rng rng(cfg.seed);
    std::unordered_set<std::string> forbidden(positive_words.begin(), positive_words.end());
    forbidden.insert(negative_words.begin(), negative_words.end());
    WordForge forge(rng, std::move(forbidden));

    std::vector<std::vector<std::string>> concept_tokens;
    concept_tokens.reserve(static_cast<size_t>(cfg.n_concepts));
    for (int i = 0; i < cfg.n_concepts; ++i)
        concept_tokens.push_back({forge.fresh(), forge.fresh()});
    std::vector<std::string> fillers;
    fillers.reserve(static_cast<size_t>(cfg.filler_vocab));
    for (int i = 0; i < cfg.filler_vocab; ++i) fillers.push_back(forge.fresh());

    // Concept plans.
    const int emergence_lo = cfg.year_start + 1, emergence_hi = cfg.year_end - 3;
    std::vector<ConceptPlan> plans(static_cast<size_t>(cfg.n_concepts));
    for (int i = 0; i < cfg.n_concepts; ++i) {
        ConceptPlan& p = plans[static_cast<size_t>(i)];
        p.phrase = concept_tokens[static_cast<size_t>(i)][0] + " " +
                   concept_tokens[static_cast<size_t>(i)][1];
        p.prone = rng.next_bool(cfg.fraction_prone);
        p.emergence = rng.next_int(emergence_lo, emergence_hi);
        if (p.prone) {
            const int lag = rng.next_int(cfg.lag_min, cfg.lag_max);
            const int tau = p.emergence + lag;
            p.patent_docs = theta_schedule(p.emergence, tau, cfg.theta, cfg.year_end);
            if (tau <= cfg.year_end)  // continued use after adoption
                for (int y = tau + 1; y <= cfg.year_end; ++y) {
                    int extra = rng.next_poisson(0.4);
                    if (extra > 0) p.patent_docs[y] += extra;
                }
        } else {
            const int dribble = std::min<int>(cfg.theta - 1, static_cast<int>(rng.next_below(3)));
            for (int d = 0; d < dribble; ++d) {
                if (p.emergence + 1 > cfg.year_end) break;
                ++p.patent_docs[rng.next_int(p.emergence + 1, cfg.year_end)];
            }
        }
        p.tau_patents = realized_transfer(p.patent_docs, cfg.theta);

        if (p.prone && p.tau_patents && rng.next_bool(cfg.trial_fraction)) {
            const int tau_t = *p.tau_patents + 1 + static_cast<int>(rng.next_below(2));
            if (tau_t <= cfg.year_end)
                p.trial_docs = theta_schedule(p.emergence, tau_t, cfg.theta, cfg.year_end);
        } else if (!p.prone && rng.next_bool(0.25) && p.emergence + 1 <= cfg.year_end) {
            ++p.trial_docs[rng.next_int(p.emergence + 1, cfg.year_end)];
        }
        p.tau_trials = realized_transfer(p.trial_docs, cfg.theta);
    }

    // Per-year activation and transfer lists (deterministic order).
    const size_t n_years = static_cast<size_t>(cfg.year_end - cfg.year_start + 1);
    std::vector<std::vector<int>> emerging(n_years), transferring(n_years);
    for (int i = 0; i < cfg.n_concepts; ++i) {
        const ConceptPlan& p = plans[static_cast<size_t>(i)];
        emerging[static_cast<size_t>(p.emergence - cfg.year_start)].push_back(i);
        if (p.tau_patents)
            transferring[static_cast<size_t>(*p.tau_patents - cfg.year_start)].push_back(i);
    }

    const double base_sentiment = 0.03;
    auto pick_word = [&](double positive_extra) -> const std::string& {
        if (positive_extra > 0.0 && rng.next_bool(positive_extra)) return rng.pick(positive_words);
        if (rng.next_bool(base_sentiment))
            return rng.next_bool(0.5) ? rng.pick(positive_words) : rng.pick(negative_words);
        return rng.pick(fillers);
    };
    auto make_sentence = [&](const SentenceSpec& spec) {
        std::string s;
        if (spec.phrase_tokens) {
            s += (*spec.phrase_tokens)[0];
            s += ' ';
            s += (*spec.phrase_tokens)[1];
        }
        const int n = rng.next_int(spec.filler_lo, spec.filler_hi);
        for (int i = 0; i < n; ++i) {
            if (!s.empty()) s += ' ';
            s += pick_word(spec.positive_extra);
        }
        return s;
    };

    SynthOutput out;
    std::vector<std::vector<uint32_t>> community(static_cast<size_t>(cfg.n_concepts));
    std::vector<int> active, transferred_pool;
    long paper_counter = 0, patent_counter = 0, trial_counter = 0;

    auto draw_authors = [&](int concept_idx, bool industry_boosted) {
        std::vector<AuthorRef> authors;
        std::set<uint32_t> seen;
        const int n_auth = rng.next_int(2, 4);
        auto& com = community[static_cast<size_t>(concept_idx)];
        for (int i = 0; i < n_auth; ++i) {
            uint32_t a;
            if (!com.empty() && rng.next_bool(0.45)) {
                a = com[rng.next_below(com.size())];
            } else {
                a = static_cast<uint32_t>(rng.next_below(static_cast<uint64_t>(cfg.author_pool)));
                com.push_back(a);
            }
            if (!seen.insert(a).second) continue;
            AuthorRef ref;
            ref.id = "a" + std::to_string(a);
            const double p_industry =
                std::min(0.9, 0.12 + (industry_boosted ? cfg.industry_bias * 0.5 : 0.0));
            if (rng.next_bool(p_industry))
                ref.kind = Affiliation::industry;
            else
                ref.kind = rng.next_bool(0.08) ? Affiliation::unknown : Affiliation::academic;
            authors.push_back(std::move(ref));
        }
        return authors;
    };

    auto assign_codes = [&](bool engineering_doc) {
        std::vector<DisciplineWeight> out_codes;
        if (engineering_doc) {
            const std::string& eng = rng.pick(eng_codes);
            size_t i = rng.next_below(other_codes.size());
            size_t j = rng.next_below(other_codes.size() - 1);
            if (j >= i) ++j;
            out_codes.push_back({eng, 0.6});
            out_codes.push_back({other_codes[i], 0.25});
            out_codes.push_back({other_codes[j], 0.15});
        } else if (codes.size() >= 2 && rng.next_bool(0.3)) {
            size_t i = rng.next_below(codes.size());
            size_t j = rng.next_below(codes.size() - 1);
            if (j >= i) ++j;
            out_codes.push_back({codes[i], 0.6});
            out_codes.push_back({codes[j], 0.4});
        } else {
            out_codes.push_back({rng.pick(codes), 1.0});
        }
        return out_codes;
    };

    // --- papers ---
    for (int y = cfg.year_start; y <= cfg.year_end; ++y) {
        const size_t yi = static_cast<size_t>(y - cfg.year_start);
        for (int c : transferring[yi]) transferred_pool.push_back(c);
        for (int c : emerging[yi]) active.push_back(c);

        for (int c = 0; c < cfg.n_concepts; ++c) {
            const ConceptPlan& p = plans[static_cast<size_t>(c)];
            if (p.emergence > y) continue;
            const int age = y - p.emergence;

            double boost = 1.0;
            if (p.prone && cfg.hype_growth > 0.0) {
                boost = 1.0 + cfg.hype_growth * std::min(age, 10);
                if (p.tau_patents && y > *p.tau_patents)
                    boost = 1.0 + (boost - 1.0) * std::pow(0.5, y - *p.tau_patents);
            }
            int n_docs = rng.next_poisson(cfg.base_usage * boost);
            if (age == 0)
                n_docs = std::max(n_docs, std::max(2, cfg.min_paper_docs - 3));
            else if (age <= 3)
                n_docs = std::max(n_docs, 1);

            for (int d = 0; d < n_docs; ++d) {
                Document doc;
                doc.doc_id = "p" + std::to_string(++paper_counter);
                doc.corpus = CorpusId::papers;
                doc.year = y;
                doc.title = make_sentence({nullptr, 3, 6, 0.0});

                std::vector<int> partners;
                const int n_partners = 1 + (rng.next_bool(0.3) ? 1 : 0);
                for (int k = 0; k < n_partners; ++k) {
                    int partner = -1;
                    if (p.prone && !transferred_pool.empty() && rng.next_bool(cfg.contagion)) {
                        partner = transferred_pool[rng.next_below(transferred_pool.size())];
                    } else if (!active.empty()) {
                        partner = active[rng.next_below(active.size())];
                    }
                    if (partner < 0 || partner == c) continue;
                    if (std::find(partners.begin(), partners.end(), partner) != partners.end())
                        continue;
                    partners.push_back(partner);
                }

                const double pos_extra =
                    p.prone && cfg.sentiment_bias > 0.0 ? cfg.sentiment_bias * 0.3 : 0.0;
                std::string abstract =
                    make_sentence({&concept_tokens[static_cast<size_t>(c)], 5, 10, pos_extra});
                for (int partner : partners) {
                    abstract += ". ";
                    abstract +=
                        make_sentence({&concept_tokens[static_cast<size_t>(partner)], 4, 8, 0.0});
                }
                abstract += ". ";
                abstract += make_sentence({nullptr, 4, 9, 0.0});
                abstract += ".";
                doc.abstract = std::move(abstract);

                doc.authors = draw_authors(c, p.prone);
                const bool linked_venue = p.prone && rng.next_bool(cfg.venue_link_bias);
                const uint64_t v = linked_venue
                                       ? rng.next_below(static_cast<uint64_t>(cfg.linked_venues))
                                       : rng.next_below(static_cast<uint64_t>(cfg.venue_pool));
                doc.venue = "v" + std::to_string(v);
                doc.disciplines = assign_codes(p.prone && rng.next_bool(cfg.engineering_bias));
                out.papers.push_back(doc.to_json_line());
            }
        }
    }

    // --- patents ---
    for (int y = cfg.year_start; y <= cfg.year_end; ++y) {
        for (int b = 0; b < cfg.background_patents_per_year; ++b) {
            Document doc;
            doc.doc_id = "u" + std::to_string(++patent_counter);
            doc.corpus = CorpusId::patents;
            doc.year = y;
            doc.title = make_sentence({nullptr, 3, 5, 0.0});
            doc.abstract = make_sentence({nullptr, 6, 12, 0.0}) + ". " +
                           make_sentence({nullptr, 5, 9, 0.0}) + ".";
            doc.authors = draw_authors(
                static_cast<int>(rng.next_below(static_cast<uint64_t>(cfg.n_concepts))), true);
            std::set<std::string> cited;
            if (y == cfg.year_start) {
                // round-robin so the whole linked pool is cited from year one
                const int per = (cfg.linked_venues + cfg.background_patents_per_year - 1) /
                                std::max(1, cfg.background_patents_per_year);
                for (int k = 0; k <= per; ++k)
                    cited.insert("v" + std::to_string((b * per + k) % cfg.linked_venues));
            }
            const int extra = rng.next_int(2, 6);
            for (int k = 0; k < extra; ++k)
                cited.insert("v" + std::to_string(rng.next_below(
                                       static_cast<uint64_t>(cfg.linked_venues))));
            doc.cited_venues.assign(cited.begin(), cited.end());
            out.patents.push_back(doc.to_json_line());
        }
        for (int c = 0; c < cfg.n_concepts; ++c) {
            const ConceptPlan& p = plans[static_cast<size_t>(c)];
            auto it = p.patent_docs.find(y);
            if (it == p.patent_docs.end()) continue;
            for (int d = 0; d < it->second; ++d) {
                Document doc;
                doc.doc_id = "u" + std::to_string(++patent_counter);
                doc.corpus = CorpusId::patents;
                doc.year = y;
                doc.title = make_sentence({nullptr, 3, 5, 0.0});
                doc.abstract =
                    make_sentence({&concept_tokens[static_cast<size_t>(c)], 5, 9, 0.0}) + ". " +
                    make_sentence({nullptr, 5, 9, 0.0}) + ".";
                doc.authors = draw_authors(c, true);
                std::set<std::string> cited;
                const int extra = rng.next_int(0, 3);
                for (int k = 0; k < extra; ++k)
                    cited.insert("v" + std::to_string(rng.next_below(
                                           static_cast<uint64_t>(cfg.linked_venues))));
                doc.cited_venues.assign(cited.begin(), cited.end());
                out.patents.push_back(doc.to_json_line());
            }
        }
    }

    // --- trials ---
    for (int y = cfg.year_start; y <= cfg.year_end; ++y) {
        for (int b = 0; b < cfg.background_trials_per_year; ++b) {
            Document doc;
            doc.doc_id = "t" + std::to_string(++trial_counter);
            doc.corpus = CorpusId::trials;
            doc.year = y;
            doc.title = make_sentence({nullptr, 3, 5, 0.0});
            doc.abstract = make_sentence({nullptr, 6, 12, 0.0}) + ".";
            doc.authors = draw_authors(
                static_cast<int>(rng.next_below(static_cast<uint64_t>(cfg.n_concepts))), false);
            out.trials.push_back(doc.to_json_line());
        }
        for (int c = 0; c < cfg.n_concepts; ++c) {
            const ConceptPlan& p = plans[static_cast<size_t>(c)];
            auto it = p.trial_docs.find(y);
            if (it == p.trial_docs.end()) continue;
            for (int d = 0; d < it->second; ++d) {
                Document doc;
                doc.doc_id = "t" + std::to_string(++trial_counter);
                doc.corpus = CorpusId::trials;
                doc.year = y;
                doc.title = make_sentence({nullptr, 3, 5, 0.0});
                doc.abstract =
                    make_sentence({&concept_tokens[static_cast<size_t>(c)], 5, 9, 0.0}) + ".";
                doc.authors = draw_authors(c, false);
                out.trials.push_back(doc.to_json_line());
            }
        }
    }

    out.ground_truth.reserve(plans.size());
    for (const auto& p : plans)
        out.ground_truth.push_back(
            GroundTruthEntry{p.phrase, p.prone, p.emergence, p.tau_patents, p.tau_trials});
    return out;
}

void save_ground_truth(std::ostream& out, const std::vector<GroundTruthEntry>& entries) {
    for (const auto& e : entries)
        out << e.phrase << '\t' << (e.prone ? "prone" : "background") << '\t'
            << (e.transfer_patents ? std::to_string(*e.transfer_patents) : std::string("-"))
            << '\n';
}

VerifyReport verify_ground_truth(const CorpusStore& store,
                                 const std::vector<GroundTruthEntry>& ground_truth,
                                 const MinerConfig& miner_cfg, const Stoplists& stoplists,
                                 const RegistryConfig& registry_cfg, const Taxonomy& taxonomy) {
    auto tokens = tokenize_corpus(store, CorpusId::papers);
    auto candidates = extract_candidates(tokens, miner_cfg);
    score_candidates(candidates, miner_cfg);
    auto vocab = clean_vocabulary(candidates, miner_cfg, stoplists);

    std::array<SegmentedCorpus, 3> segmented = {
        segment_corpus(store, CorpusId::papers, vocab),
        segment_corpus(store, CorpusId::patents, vocab),
        segment_corpus(store, CorpusId::trials, vocab),
    };
    auto registry = ConceptRegistry::build(store, segmented, taxonomy, registry_cfg);

    VerifyReport report;
    auto show = [](const std::optional<int>& v) {
        return v ? std::to_string(*v) : std::string("none");
    };
    for (const auto& gt : ground_truth) {
        ++report.checked;
        const ConceptRecord* rec = registry.find(gt.phrase);
        if (!rec) {
            report.mismatches.push_back("missing from registry: " + gt.phrase);
            continue;
        }
        bool ok = true;
        if (rec->emergence_year != gt.emergence_year) {
            report.mismatches.push_back("emergence mismatch for " + gt.phrase + ": planted " +
                                        std::to_string(gt.emergence_year) + " labeled " +
                                        std::to_string(rec->emergence_year));
            ok = false;
        }
        const auto& got_pat = rec->transfer_year[static_cast<size_t>(CorpusId::patents)];
        if (got_pat != gt.transfer_patents) {
            report.mismatches.push_back("patents transfer mismatch for " + gt.phrase +
                                        ": planted " + show(gt.transfer_patents) + " labeled " +
                                        show(got_pat));
            ok = false;
        }
        const auto& got_tri = rec->transfer_year[static_cast<size_t>(CorpusId::trials)];
        if (got_tri != gt.transfer_trials) {
            report.mismatches.push_back("trials transfer mismatch for " + gt.phrase +
                                        ": planted " + show(gt.transfer_trials) + " labeled " +
                                        show(got_tri));
            ok = false;
        }
        if (ok) ++report.matched;
    }
    return report;
}

}  // namespace cflow

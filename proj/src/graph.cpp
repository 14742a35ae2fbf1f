#include "cflow/graph.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <stdexcept>

namespace cflow {

CooccurrenceGraph CooccurrenceGraph::build(const CorpusStore& store,
                                           const SegmentedCorpus& segmented,
                                           const ConceptRegistry& registry, CorpusId target,
                                           bool cumulative) {
    CooccurrenceGraph g;
    g.cumulative_ = cumulative;

    // Collect node set first so ids are stable and sorted.
    std::set<std::string> nodes;
    for (const auto& dm : segmented.docs) {
        for (const auto& m : dm.mentions) nodes.insert(m.phrase);
    }
    g.names_.assign(nodes.begin(), nodes.end());
    for (size_t i = 0; i < g.names_.size(); ++i) g.ids_[g.names_[i]] = static_cast<int>(i);

    g.transfer_year_.resize(g.names_.size());
    for (size_t i = 0; i < g.names_.size(); ++i)
        g.transfer_year_[i] = registry.transfer_year(g.names_[i], target);

    // Pair increments per year. Documents are bucketed by year so the
    // per-edge breakpoint lists come out ascending.
    const auto& docs = store.all(segmented.corpus);
    std::map<int, std::vector<const DocMentions*>> by_year;
    for (const auto& dm : segmented.docs) by_year[docs[dm.doc_index].year].push_back(&dm);

    std::map<std::pair<int, int>, size_t> edge_index;
    for (const auto& [year, year_docs] : by_year) {
        std::map<std::pair<int, int>, int> increments;
        for (const DocMentions* dm : year_docs) {
            std::set<int> ids;
            for (const auto& m : dm->mentions) ids.insert(g.ids_.at(m.phrase));
            for (auto it = ids.begin(); it != ids.end(); ++it)
                for (auto jt = std::next(it); jt != ids.end(); ++jt)
                    ++increments[{*it, *jt}];  // set iteration gives *it < *jt
        }
        for (const auto& [pair, inc] : increments) {
            auto found = edge_index.find(pair);
            if (found == edge_index.end()) {
                found = edge_index.emplace(pair, g.edges_.size()).first;
                g.edges_.push_back(Edge{pair.first, pair.second, {}});
            }
            Edge& e = g.edges_[found->second];
            int prev = e.breaks.empty() ? 0 : e.breaks.back().second;
            e.breaks.emplace_back(year, prev + inc);
        }
    }

    g.adjacency_.resize(g.names_.size());
    for (size_t ei = 0; ei < g.edges_.size(); ++ei) {
        const Edge& e = g.edges_[ei];
        g.adjacency_[static_cast<size_t>(e.a)].emplace_back(e.b, ei);
        g.adjacency_[static_cast<size_t>(e.b)].emplace_back(e.a, ei);
    }
    for (auto& adj : g.adjacency_) std::sort(adj.begin(), adj.end());
    return g;
}

int CooccurrenceGraph::node_id(const std::string& phrase) const {
    auto it = ids_.find(phrase);
    if (it == ids_.end()) throw std::invalid_argument("unknown concept: " + phrase);
    return it->second;
}

int CooccurrenceGraph::weight_at(size_t edge, int year) const {
    const auto& breaks = edges_[edge].breaks;
    auto it = std::upper_bound(breaks.begin(), breaks.end(), std::make_pair(year, INT_MAX));
    if (it == breaks.begin()) return 0;
    const int cum = std::prev(it)->second;
    if (cumulative_) return cum;
    // per-year mode: this year's own increment only
    if (std::prev(it)->first != year) return 0;
    const int before = it == std::next(breaks.begin()) ? 0 : std::prev(it, 2)->second;
    return cum - before;
}

std::vector<std::tuple<int, std::string, std::string, int>> CooccurrenceGraph::weight_change_log()
    const {
    std::vector<std::tuple<int, std::string, std::string, int>> out;
    for (const auto& e : edges_)
        for (const auto& [year, cum] : e.breaks)
            out.emplace_back(year, names_[static_cast<size_t>(e.a)],
                             names_[static_cast<size_t>(e.b)], cum);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<CooccurrenceGraph::Snapshot> CooccurrenceGraph::snapshots(int year_lo,
                                                                      int year_hi) const {
    std::vector<Snapshot> out;
    for (int y = year_lo; y <= year_hi; ++y) out.push_back(snapshot(y));
    return out;
}

double CooccurrenceGraph::Snapshot::weighted_degree(const std::string& phrase) const {
    int id = graph_->node_id(phrase);
    double sum = 0.0;
    for (const auto& [neighbor, edge] : graph_->adjacency_[static_cast<size_t>(id)])
        sum += graph_->weight_at(edge, year_);
    return sum;
}

bool CooccurrenceGraph::Snapshot::transferred(const std::string& phrase) const {
    int id = graph_->node_id(phrase);
    const auto& ty = graph_->transfer_year_[static_cast<size_t>(id)];
    return ty && *ty <= year_;
}

bool CooccurrenceGraph::Snapshot::has_node(const std::string& phrase) const {
    return graph_->ids_.count(phrase) > 0;
}

double CooccurrenceGraph::Snapshot::transferred_neighbor_share(const std::string& phrase) const {
    int id = graph_->node_id(phrase);
    double total = 0.0, transferred_mass = 0.0;
    for (const auto& [neighbor, edge] : graph_->adjacency_[static_cast<size_t>(id)]) {
        int w = graph_->weight_at(edge, year_);
        if (w == 0) continue;
        total += w;
        const auto& ty = graph_->transfer_year_[static_cast<size_t>(neighbor)];
        if (ty && *ty <= year_) transferred_mass += w;
    }
    return total > 0.0 ? transferred_mass / total : 0.0;
}

std::vector<CooccurrenceGraph::NeighborView> CooccurrenceGraph::Snapshot::neighborhood(
    const std::string& phrase) const {
    int id = graph_->node_id(phrase);
    std::vector<NeighborView> out;
    for (const auto& [neighbor, edge] : graph_->adjacency_[static_cast<size_t>(id)]) {
        int w = graph_->weight_at(edge, year_);
        if (w == 0) continue;
        const auto& ty = graph_->transfer_year_[static_cast<size_t>(neighbor)];
        out.push_back(NeighborView{graph_->names_[static_cast<size_t>(neighbor)], w,
                                   ty.has_value() && *ty <= year_});
    }
    std::sort(out.begin(), out.end(), [](const NeighborView& a, const NeighborView& b) {
        return a.weight != b.weight ? a.weight > b.weight : a.phrase < b.phrase;
    });
    return out;
}

std::vector<std::tuple<std::string, std::string, int>> CooccurrenceGraph::Snapshot::edges() const {
    std::vector<std::tuple<std::string, std::string, int>> out;
    for (size_t ei = 0; ei < graph_->edges_.size(); ++ei) {
        int w = graph_->weight_at(ei, year_);
        if (w == 0) continue;
        const Edge& e = graph_->edges_[ei];
        out.emplace_back(graph_->names_[static_cast<size_t>(e.a)],
                         graph_->names_[static_cast<size_t>(e.b)], w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cflow

#pragma once
// Dynamic phrase co-occurrence graph.
//
// Edge weight between two concepts at year y = number of papers-corpus
// documents with year <= y in which both are mentioned (cumulative; each
// document counts once per pair). Weights are stored as per-edge
// (year, cumulative) breakpoints so every yearly snapshot is a cheap view.
// A node's transfer status inside snapshot y reflects transfer years <= y
// only; later transfers are invisible by construction.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cflow/corpus.hpp"
#include "cflow/registry.hpp"

namespace cflow {

class CooccurrenceGraph {
public:
    struct NeighborView {
        std::string_view phrase;
        int weight = 0;
        bool transferred = false;
    };

    class Snapshot {
    public:
        int year() const { return year_; }

        // Sum of incident edge weights; 0 for isolated nodes. Throws on
        // unknown concepts.
        double weighted_degree(const std::string& phrase) const;

        // Weighted fraction of degree contributed by transferred
        // neighbors; 0 when the degree is 0.
        double transferred_neighbor_share(const std::string& phrase) const;

        // Complete neighbor list, descending weight then lexicographic.
        std::vector<NeighborView> neighborhood(const std::string& phrase) const;

        bool transferred(const std::string& phrase) const;
        bool has_node(const std::string& phrase) const;

        // Every edge with weight > 0 at this year, as (a, b, weight) with
        // a < b lexicographically; sorted.
        std::vector<std::tuple<std::string, std::string, int>> edges() const;

    private:
        friend class CooccurrenceGraph;
        Snapshot(const CooccurrenceGraph* g, int year) : graph_(g), year_(year) {}
        const CooccurrenceGraph* graph_;
        int year_;
    };

    // `segmented` must be the papers corpus. Status comes from the
    // registry's transfer year toward `target`. With cumulative=false the
    // snapshots hold only each year's own co-occurrence counts.
    static CooccurrenceGraph build(const CorpusStore& store, const SegmentedCorpus& segmented,
                                   const ConceptRegistry& registry, CorpusId target,
                                   bool cumulative = true);

    // (year, a, b, cumulative weight) for every year an edge's weight
    // changes; lossless delta log of all snapshots, sorted.
    std::vector<std::tuple<int, std::string, std::string, int>> weight_change_log() const;

    Snapshot snapshot(int year) const { return Snapshot(this, year); }

    // Snapshots for every year in [year_lo, year_hi], ascending.
    std::vector<Snapshot> snapshots(int year_lo, int year_hi) const;

    size_t node_count() const { return names_.size(); }
    const std::vector<std::string>& nodes() const { return names_; }

private:
    int node_id(const std::string& phrase) const;
    int weight_at(size_t edge, int year) const;

    struct Edge {
        int a = 0, b = 0;
        std::vector<std::pair<int, int>> breaks;  // (year, cumulative weight), ascending
    };

    std::vector<std::string> names_;                 // sorted; index = node id
    std::unordered_map<std::string, int> ids_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, size_t>>> adjacency_;  // node -> (neighbor, edge index)
    std::vector<std::optional<int>> transfer_year_;  // per node, toward the build target
    bool cumulative_ = true;
};

}  // namespace cflow

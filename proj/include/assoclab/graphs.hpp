// Interaction structures: graph families, the coupling matrix they induce,
// and the regularity/entry/Frobenius diagnostics used by the dense-graph
// universality checks.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "assoclab/error.hpp"

namespace assoclab {

enum class GraphKind {
    Lattice,            // hypercubic grid, free boundary, couplings 1 on edges
    CurieWeiss,         // complete graph, entries 1/n
    CompleteBipartite,  // halves {0..n/2-1} vs {n/2..n-1}, entries 2/n
    RandomRegular,      // d-regular via pairing model + swap repair, entries 1/d
    ExplicitMatrix,     // dense symmetric hollow user matrix
};

const char* to_string(GraphKind k);

struct GraphFamily {
    GraphKind kind = GraphKind::CurieWeiss;
    int n = 0;
    int side = 0, dim = 0;   // Lattice
    int degree = 0;          // RandomRegular
    uint64_t seed = 0;       // RandomRegular construction stream
    std::vector<double> dense;  // ExplicitMatrix row-major values

    static GraphFamily lattice(int side, int dim);
    static GraphFamily curie_weiss(int n);
    static GraphFamily complete_bipartite(int n);
    static GraphFamily random_regular(int n, int degree, uint64_t seed);
    static GraphFamily explicit_matrix(int n, std::vector<double> values);
};

// Coupling matrix Q. Neighbor lists are canonical for sparse families; the
// complete and bipartite families are kept implicit (closed-form entries),
// ExplicitMatrix is dense. Immutable once built.
class InteractionMatrix {
public:
    int size() const { return n_; }
    GraphKind kind() const { return kind_; }

    double entry(int i, int j) const;
    double row_sum(int i) const { return row_sums_[i]; }
    const std::vector<double>& row_sums() const { return row_sums_; }
    double max_entry() const { return max_entry_; }
    double frobenius_sq() const { return frobenius_sq_; }

    bool has_neighbor_list() const { return !offsets_.empty(); }
    std::span<const int32_t> neighbors(int i) const {
        return {adj_.data() + offsets_[i], static_cast<size_t>(offsets_[i + 1] - offsets_[i])};
    }
    int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
    // Uniform per-edge coupling weight for neighbor-list families
    // (Lattice: 1, RandomRegular: 1/d).
    double edge_weight() const { return edge_weight_; }
    int64_t edge_count() const { return edge_count_; }

    const std::vector<double>& dense_values() const { return dense_; }

    int lattice_side() const { return side_; }
    int lattice_dim() const { return dim_; }

    friend InteractionMatrix build_interaction(const GraphFamily& family);

private:
    int n_ = 0;
    int side_ = 0, dim_ = 0;
    GraphKind kind_ = GraphKind::CurieWeiss;
    std::vector<int32_t> offsets_, adj_;
    double edge_weight_ = 0.0;
    int64_t edge_count_ = 0;
    std::vector<double> dense_;
    std::vector<double> row_sums_;
    double max_entry_ = 0.0;
    double frobenius_sq_ = 0.0;

    void finalize_stats();
};

struct AssumptionReport {
    bool is_regular = false;        // row sums 1 up to an O(1/n) deviation
    double max_row_sum_dev = 0.0;   // max_i |row_sum_i - 1|
    double max_entry_times_n = 0.0;
    double frobenius_sq = 0.0;
    std::optional<bool> known_spectral_gap;  // set only for built-in dense families
};

InteractionMatrix build_interaction(const GraphFamily& family);
AssumptionReport check_assumptions(const InteractionMatrix& q);

// Parses the whitespace-separated n x n dense text format.
GraphFamily explicit_matrix_from_text(const std::string& text);

}  // namespace assoclab

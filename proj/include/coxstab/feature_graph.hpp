#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "coxstab/dataset.hpp"

namespace coxstab {

enum class EdgeTag { Code, Temporal };

struct GraphEdge {
    int i = 0, j = 0;  // i < j
    EdgeTag tag = EdgeTag::Code;
};

// Undirected 0/1 feature graph, zero diagonal. Pairs related by both rules
// collapse to a single edge tagged Code.
struct FeatureGraph {
    int p = 0;
    std::vector<GraphEdge> edges;  // sorted by (i, j), unique

    std::size_t n_edges() const { return edges.size(); }
};

// Graph Laplacian: L_ii = sum_j A_ij, L_ij = -A_ij. Stored as degrees plus
// CSR neighbour lists; rows sum to zero by construction.
struct Laplacian {
    int p = 0;
    std::vector<double> degree;
    std::vector<int> adj_offsets;  // size p + 1
    std::vector<int> adj_indices;
    std::vector<std::pair<int, int>> edges;  // i < j

    // L * w
    Eigen::VectorXd matvec(const Eigen::VectorXd& w) const;
    // dense assembly, small p only (tests, audits)
    Eigen::MatrixXd dense() const;
};

// Strips the '.' separator, then truncates to prefix_len characters.
std::string code_prefix(const std::string& code, int prefix_len);

// Edge (i,j) tagged Code iff the codes share a prefix of prefix_len
// characters; tagged Temporal iff event keys match and window ids differ.
FeatureGraph build_graph(const std::vector<FeatureMeta>& meta, int prefix_len);

Laplacian laplacian(const FeatureGraph& g);

// w' L w, evaluated as the edge sum of (w_i - w_j)^2; exactly non-negative.
double quad_form(const Laplacian& L, const Eigen::VectorXd& w);

// Audit export, one `i,j,tag` row per edge.
void export_edges_csv(const FeatureGraph& g, const std::string& path);

}  // namespace coxstab

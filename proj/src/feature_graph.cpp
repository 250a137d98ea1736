#include "coxstab/feature_graph.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace coxstab {

std::string code_prefix(const std::string& code, int prefix_len) {
    std::string stripped;
    stripped.reserve(code.size());
    for (char c : code)
        if (c != '.') stripped += c;
    if (static_cast<int>(stripped.size()) > prefix_len) stripped.resize(prefix_len);
    return stripped;
}

FeatureGraph build_graph(const std::vector<FeatureMeta>& meta, int prefix_len) {
    if (meta.empty()) throw ContractError("build_graph: empty feature meta");
    if (prefix_len < 1) throw ContractError("build_graph: prefix_len must be >= 1");

    const int p = static_cast<int>(meta.size());
    std::vector<GraphEdge> edges;

    // code relation: clique per shared prefix
    std::map<std::string, std::vector<int>> by_prefix;
    for (int i = 0; i < p; ++i) by_prefix[code_prefix(meta[i].code, prefix_len)].push_back(i);
    for (const auto& [prefix, members] : by_prefix) {
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                edges.push_back({members[a], members[b], EdgeTag::Code});
    }

    // temporal relation: same event key, different window
    std::map<std::string, std::vector<int>> by_key;
    for (int i = 0; i < p; ++i) by_key[meta[i].event_key].push_back(i);
    for (const auto& [key, members] : by_key) {
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b)
                if (meta[members[a]].window_id != meta[members[b]].window_id)
                    edges.push_back({members[a], members[b], EdgeTag::Temporal});
    }

    // union of both rules; Code wins the tag when a pair is related both ways
    std::stable_sort(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    auto last = std::unique(edges.begin(), edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return a.i == b.i && a.j == b.j;
    });
    edges.erase(last, edges.end());

    // Code edges sort before Temporal duplicates only by generation order, so
    // re-resolve tags explicitly: a pair with a shared prefix is Code.
    for (auto& e : edges) {
        if (code_prefix(meta[e.i].code, prefix_len) == code_prefix(meta[e.j].code, prefix_len))
            e.tag = EdgeTag::Code;
    }

    FeatureGraph g;
    g.p = p;
    g.edges = std::move(edges);
    return g;
}

Laplacian laplacian(const FeatureGraph& g) {
    Laplacian L;
    L.p = g.p;
    L.degree.assign(g.p, 0.0);
    std::vector<int> counts(g.p, 0);
    for (const auto& e : g.edges) {
        L.degree[e.i] += 1.0;
        L.degree[e.j] += 1.0;
        ++counts[e.i];
        ++counts[e.j];
    }
    L.adj_offsets.assign(g.p + 1, 0);
    for (int i = 0; i < g.p; ++i) L.adj_offsets[i + 1] = L.adj_offsets[i] + counts[i];
    L.adj_indices.resize(L.adj_offsets.back());
    std::vector<int> fill(L.adj_offsets.begin(), L.adj_offsets.end() - 1);
    for (const auto& e : g.edges) {
        L.adj_indices[fill[e.i]++] = e.j;
        L.adj_indices[fill[e.j]++] = e.i;
    }
    L.edges.reserve(g.edges.size());
    for (const auto& e : g.edges) L.edges.emplace_back(e.i, e.j);
    return L;
}

Eigen::VectorXd Laplacian::matvec(const Eigen::VectorXd& w) const {
    if (w.size() != p) throw ContractError("Laplacian::matvec: dimension mismatch");
    Eigen::VectorXd out(p);
    for (int i = 0; i < p; ++i) {
        double acc = degree[i] * w[i];
        for (int k = adj_offsets[i]; k < adj_offsets[i + 1]; ++k) acc -= w[adj_indices[k]];
        out[i] = acc;
    }
    return out;
}

Eigen::MatrixXd Laplacian::dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) M(i, i) = degree[i];
    for (const auto& [i, j] : edges) {
        M(i, j) = -1.0;
        M(j, i) = -1.0;
    }
    return M;
}

double quad_form(const Laplacian& L, const Eigen::VectorXd& w) {
    if (w.size() != L.p) throw ContractError("quad_form: dimension mismatch");
    double acc = 0.0;
    for (const auto& [i, j] : L.edges) {
        const double d = w[i] - w[j];
        acc += d * d;
    }
    return acc;
}

void export_edges_csv(const FeatureGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write graph export: " + path);
    out << "i,j,tag\n";
    for (const auto& e : g.edges)
        out << e.i << "," << e.j << "," << (e.tag == EdgeTag::Code ? "code" : "temporal") << "\n";
}

}  // namespace coxstab

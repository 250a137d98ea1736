#include <doctest.h>

#include <algorithm>
#include <fstream>

#include "coxstab/feature_graph.hpp"
#include "coxstab/reference.hpp"
#include "coxstab/rng.hpp"
#include "test_helpers.hpp"

using namespace coxstab;

namespace {

FeatureMeta fm(int id, const std::string& code, int window, const std::string& key) {
    FeatureMeta m;
    m.feature_id = id;
    m.name = "f" + std::to_string(id);
    m.code = code;
    m.window_id = window;
    m.event_key = key;
    return m;
}

FeatureGraph random_graph(Rng& rng, int p, double edge_prob) {
    FeatureGraph g;
    g.p = p;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (rng.uniform01() < edge_prob) g.edges.push_back({i, j, EdgeTag::Code});
    return g;
}

}  // namespace

TEST_CASE("code prefix strips dots before truncation") {
    CHECK(code_prefix("I50.1", 3) == "I50");
    CHECK(code_prefix("I50.1", 4) == "I501");
    CHECK(code_prefix("I5", 3) == "I5");
}

TEST_CASE("build_graph applies code and temporal rules") {
    SUBCASE("shared prefix gives a code edge") {
        const auto g = build_graph({fm(0, "I50.1", 0, "a"), fm(1, "I50.9", 0, "b")}, 3);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0].i == 0);
        CHECK(g.edges[0].j == 1);
        CHECK(g.edges[0].tag == EdgeTag::Code);
    }
    SUBCASE("same event key in different windows gives a temporal edge") {
        const auto g = build_graph({fm(0, "X10", 1, "I50"), fm(1, "Y20", 2, "I50")}, 3);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0].tag == EdgeTag::Temporal);
    }
    SUBCASE("unrelated features get no edge") {
        const auto g = build_graph({fm(0, "I50.1", 0, "a"), fm(1, "J18.0", 0, "b")}, 3);
        CHECK(g.edges.empty());
    }
    SUBCASE("a pair related both ways yields one edge") {
        const auto g = build_graph({fm(0, "I50.1", 1, "I50"), fm(1, "I50.9", 2, "I50")}, 3);
        REQUIRE(g.edges.size() == 1);
        CHECK(g.edges[0].tag == EdgeTag::Code);
    }
    SUBCASE("same event key, same window: no temporal edge") {
        const auto g = build_graph({fm(0, "X10", 1, "I50"), fm(1, "Y20", 1, "I50")}, 3);
        CHECK(g.edges.empty());
    }
    SUBCASE("prefix_len 0 is a contract error") {
        CHECK_THROWS_AS(build_graph({fm(0, "A", 0, "a")}, 0), ContractError);
    }
}

TEST_CASE("laplacian matches the textbook definition") {
    SUBCASE("path graph on 3 nodes") {
        FeatureGraph g;
        g.p = 3;
        g.edges = {{0, 1, EdgeTag::Code}, {1, 2, EdgeTag::Code}};
        const Eigen::MatrixXd L = laplacian(g).dense();
        Eigen::MatrixXd expected(3, 3);
        expected << 1, -1, 0, -1, 2, -1, 0, -1, 1;
        CHECK((L - expected).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("empty graph is the zero matrix") {
        FeatureGraph g;
        g.p = 4;
        const Eigen::MatrixXd L = laplacian(g).dense();
        CHECK(L.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("complete graph on 3 nodes") {
        FeatureGraph g;
        g.p = 3;
        g.edges = {{0, 1, EdgeTag::Code}, {0, 2, EdgeTag::Code}, {1, 2, EdgeTag::Code}};
        const Eigen::MatrixXd L = laplacian(g).dense();
        for (int i = 0; i < 3; ++i) CHECK(L(i, i) == 2.0);
        CHECK(L(0, 1) == -1.0);
        CHECK(L(2, 0) == -1.0);
    }
}

TEST_CASE("quad_form examples") {
    FeatureGraph path;
    path.p = 3;
    path.edges = {{0, 1, EdgeTag::Code}, {1, 2, EdgeTag::Code}};
    const Laplacian Lp = laplacian(path);
    CHECK(quad_form(Lp, Eigen::Vector3d(1, 1, 1)) == 0.0);

    FeatureGraph single;
    single.p = 2;
    single.edges = {{0, 1, EdgeTag::Code}};
    const Laplacian Ls = laplacian(single);
    CHECK(quad_form(Ls, Eigen::Vector2d(1, 0)) == 1.0);
    CHECK(quad_form(Ls, Eigen::Vector2d(3, -1)) == 16.0);
    CHECK_THROWS_AS(quad_form(Ls, Eigen::Vector3d(1, 2, 3)), ContractError);
}

TEST_CASE("laplacian identities on random graphs") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 2 + static_cast<int>(rng.below(30));
        const FeatureGraph g = random_graph(rng, p, 0.25);
        const Laplacian L = laplacian(g);
        const Eigen::MatrixXd D = L.dense();

        CHECK(D.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);

        Eigen::VectorXd w(p);
        for (int i = 0; i < p; ++i) w[i] = rng.normal();

        const double q = quad_form(L, w);
        CHECK(q >= 0.0);
        CHECK(std::abs(q - reference::quad_form_ordered_pairs(g, w)) < 1e-10);
        CHECK(std::abs(q - w.dot(D * w)) < 1e-9);
        CHECK(std::abs(q - w.dot(L.matvec(w))) < 1e-9);

        const Eigen::VectorXd ones = Eigen::VectorXd::Constant(p, 3.7);
        CHECK(quad_form(L, ones) == 0.0);
    }
}

TEST_CASE("quad_form is zero iff constant on connected components") {
    // two components: {0,1,2} path and {3,4} edge
    FeatureGraph g;
    g.p = 5;
    g.edges = {{0, 1, EdgeTag::Code}, {1, 2, EdgeTag::Code}, {3, 4, EdgeTag::Code}};
    const Laplacian L = laplacian(g);
    Eigen::VectorXd w(5);
    w << 2, 2, 2, -7, -7;
    CHECK(quad_form(L, w) == 0.0);
    w[1] = 2.5;
    CHECK(quad_form(L, w) > 0.0);
}

TEST_CASE("graph construction commutes with permutations of meta order") {
    std::vector<FeatureMeta> meta = {fm(0, "I50.1", 1, "I50"), fm(1, "I50.9", 2, "I50"),
                                     fm(2, "J18.0", 1, "J18"), fm(3, "J18.3", 1, "J18"),
                                     fm(4, "K21.0", 0, "K21")};
    const FeatureGraph g = build_graph(meta, 3);

    // reverse the order; feature_id i maps to position p-1-i
    std::vector<FeatureMeta> rev(meta.rbegin(), meta.rend());
    for (int i = 0; i < 5; ++i) rev[i].feature_id = i;
    const FeatureGraph gr = build_graph(rev, 3);

    auto as_pairs = [](const FeatureGraph& gg, bool mirrored) {
        std::vector<std::pair<int, int>> out;
        for (const auto& e : gg.edges) {
            int a = mirrored ? 4 - e.i : e.i;
            int b = mirrored ? 4 - e.j : e.j;
            out.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    CHECK(as_pairs(g, false) == as_pairs(gr, true));
}

TEST_CASE("edge list export") {
    testing::TempDir dir("gexp");
    FeatureGraph g;
    g.p = 3;
    g.edges = {{0, 2, EdgeTag::Temporal}};
    export_edges_csv(g, dir.file("edges.csv"));
    std::ifstream in(dir.file("edges.csv"));
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "i,j,tag");
    CHECK(row == "0,2,temporal");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rag/kernels.hpp"
#include "rag/model.hpp"
#include "rag/rng.hpp"
#include "test_util.hpp"

using namespace rag;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(AnnulusParams(0, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnnulusParams(5, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnnulusParams(5, 0.6, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnnulusParams(5, 0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(AnnulusParams(5, 0.1, 0.1), std::invalid_argument);
    CHECK(AnnulusParams(5, 0.5, 0.0).clt_regime());
    CHECK_FALSE(AnnulusParams(5, 0.1, 0.05).clt_regime());
    CHECK(AnnulusParams(5, 0.1, 0.049).clt_regime());
}

TEST_CASE("circle distance") {
    CHECK(circle_distance(0.1, 0.9) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(circle_distance(0.4, 0.4) == 0.0);
    CHECK(circle_distance(0.25, 0.75) == 0.5);

    UniformStream u({11, 0}, StreamDomain::positions);
    for (int i = 0; i < 100000; ++i) {
        const double x = u.next(), y = u.next(), z = u.next();
        const double d = circle_distance(x, y);
        CHECK(d == circle_distance(y, x));
        CHECK(d >= 0.0);
        CHECK(d <= 0.5);
        // triangle inequality, with 1-ulp slack for the float evaluation
        CHECK(circle_distance(x, z) <= circle_distance(x, y) + circle_distance(y, z) + 1e-15);
    }
}

TEST_CASE("edge indicator is strict on both boundaries") {
    const AnnulusParams p(2, 0.1, 0.02);
    CHECK(edge_indicator(0.0, 0.05, p) == 1);
    CHECK(edge_indicator(0.0, 0.02, p) == 0);  // d == r2
    CHECK(edge_indicator(0.0, 0.1, p) == 0);   // d == r1
    CHECK(edge_indicator(0.3, 0.3, p) == 0);

    const AnnulusParams rgg(2, 0.1, 0.0);
    CHECK(edge_indicator(0.3, 0.3, rgg) == 0);  // coincident, d = 0, 0 < 0 false
    CHECK(edge_indicator(0.3, 0.35, rgg) == 1);
}

TEST_CASE("edge indicator is rotation invariant") {
    const AnnulusParams p(2, 0.07, 0.015);
    UniformStream u({12, 0}, StreamDomain::positions);
    for (int i = 0; i < 100000; ++i) {
        const double x = u.next(), y = u.next(), s = u.next();
        const double xs = std::fmod(x + s, 1.0);
        const double ys = std::fmod(y + s, 1.0);
        CHECK(edge_indicator(x, y, p) == edge_indicator(xs, ys, p));
    }
}

TEST_CASE("sample_positions is deterministic and well-formed") {
    const AnnulusParams p(1000, 0.1, 0.02);
    const RngSeed seed{77, 3};
    const PositionSet a = sample_positions(p, seed);
    const PositionSet b = sample_positions(p, seed);
    CHECK(a.positions == b.positions);
    CHECK(a.sorted_order == b.sorted_order);

    std::vector<bool> seen(a.size(), false);
    for (std::uint32_t k = 0; k < a.size(); ++k) {
        const double v = a.positions[k];
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
        CHECK_FALSE(seen[a.sorted_order[k]]);
        seen[a.sorted_order[k]] = true;
        if (k > 0) CHECK(a.positions[a.sorted_order[k - 1]] <= a.positions[a.sorted_order[k]]);
    }

    const PositionSet c = sample_positions(p, {77, 4});
    CHECK(c.positions != a.positions);
}

TEST_CASE("single point") {
    const AnnulusParams p(1, 0.1, 0.0);
    const PositionSet ps = sample_positions(p, {5, 0});
    REQUIRE(ps.size() == 1);
    CHECK(ps.positions[0] >= 0.0);
    CHECK(ps.positions[0] < 1.0);
    CHECK(ps.sorted_order == std::vector<std::uint32_t>{0});
}

TEST_CASE("sampled mean concentrates at 1/2") {
    const AnnulusParams p(1000000, 0.1, 0.02);
    const PositionSet ps = sample_positions(p, {42, 0});
    double sum = 0.0;
    for (const double v : ps.positions) sum += v;
    // standard error 1/(sqrt(12) * 10^3) ~ 2.9e-4; 0.002 is a ~7 sigma band
    CHECK(std::fabs(sum / 1e6 - 0.5) < 0.002);
}

TEST_CASE("adjacency matrix hand cases") {
    const AnnulusParams p(3, 0.3, 0.1);

    const PositionSet tri = test::make_position_set({0.0, 0.15, 0.29});
    const AdjacencyMatrix a = build_adjacency(tri, p);
    for (std::uint32_t i = 0; i < 3; ++i)
        for (std::uint32_t j = 0; j < 3; ++j) CHECK(a.at(i, j) == (i != j ? 1 : 0));

    const PositionSet path = test::make_position_set({0.0, 0.15, 0.95});
    const AdjacencyMatrix b = build_adjacency(path, p);
    CHECK(b.at(0, 1) == 1);
    CHECK(b.at(1, 2) == 1);
    CHECK(b.at(0, 2) == 0);  // d = 0.05 <= r2
    CHECK(b.at(1, 0) == 1);
    for (std::uint32_t i = 0; i < 3; ++i) CHECK(b.at(i, i) == 0);

    const PositionSet one = test::make_position_set({0.4});
    const AdjacencyMatrix c = build_adjacency(one, AnnulusParams(1, 0.3, 0.1));
    CHECK(c.n == 1);
    CHECK(c.at(0, 0) == 0);
}

TEST_CASE("adjacency cap") {
    const AnnulusParams p(2001, 0.1, 0.0);
    const PositionSet ps = sample_positions(p, {1, 0});
    CHECK_THROWS_AS(build_adjacency(ps, p), CapExceeded);
    CHECK_NOTHROW(build_adjacency(ps, p, 2500));
}

TEST_CASE("edge probability matches the arc length 2(r1-r2)") {
    // quadrature oracle for P(r2 < d(x, Y) < r1) with Y uniform
    const double r1 = 0.1, r2 = 0.02;
    const AnnulusParams p(5000, r1, r2);
    const int grid = 200001;
    double hits = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double y = (i + 0.5) / grid;
        hits += edge_indicator(0.37, y, p);
    }
    const double prob = hits / grid;
    CHECK(prob == doctest::Approx(2.0 * (r1 - r2)).epsilon(1e-3));

    // sampled edge density concentrates on the same value
    const PositionSet ps = sample_positions(p, {2025, 0});
    std::vector<std::uint8_t> row(p.n);
    std::uint64_t edges2 = 0;  // ordered pairs
    for (std::uint32_t i = 0; i < p.n; ++i) {
        simd::edge_indicator_row(ps.positions[i], ps.positions.data(), p.n, r1, r2, row.data());
        row[i] = 0;
        for (std::uint32_t j = 0; j < p.n; ++j) edges2 += row[j];
    }
    const double pairs = 0.5 * p.n * (p.n - 1.0);
    const double density = static_cast<double>(edges2 / 2) / pairs;
    const double bound = 5.0 * std::sqrt(2.0 * (r1 - r2) / pairs);
    CHECK(std::fabs(density - 2.0 * (r1 - r2)) <= bound);
}

TEST_CASE("export formats") {
    const AnnulusParams p(6, 0.3, 0.05);
    const RngSeed seed{9, 0};
    const PositionSet ps = sample_positions(p, seed);

    std::ostringstream edges;
    write_edge_list(edges, ps, p, seed);
    const std::string e = edges.str();
    CHECK(e.rfind("# rag n=6 r1=", 0) == 0);
    CHECK(e.find("seed=9:0") != std::string::npos);

    std::istringstream is(e);
    std::string line;
    std::getline(is, line);  // header
    int i, j;
    while (is >> i >> j) {
        CHECK(i < j);
        CHECK(edge_indicator(ps.positions[i], ps.positions[j], p) == 1);
    }

    std::ostringstream pos;
    write_positions_csv(pos, ps);
    std::istringstream ps_in(pos.str());
    std::getline(ps_in, line);
    CHECK(line == "index,position");
    for (std::uint32_t k = 0; k < p.n; ++k) {
        std::getline(ps_in, line);
        const auto comma = line.find(',');
        CHECK(std::stoul(line.substr(0, comma)) == k);
        // 17 significant digits round-trip exactly
        CHECK(std::stod(line.substr(comma + 1)) == ps.positions[k]);
    }
}

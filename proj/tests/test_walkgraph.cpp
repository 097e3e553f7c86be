#include <doctest.h>

#include <functional>
#include <random>
#include <sstream>

#include "addrep/walkgraph.hpp"

using addrep::Error;
using addrep::ErrorKind;
using addrep::MultiGraph;
using addrep::Walk;
using u64 = std::uint64_t;
using EdgeList = std::vector<std::pair<u64, u64>>;

namespace {

MultiGraph grid(std::size_t v, EdgeList edges) {
    std::vector<u64> verts(v);
    for (std::size_t i = 0; i < v; ++i) verts[i] = i;
    return MultiGraph(std::move(verts), std::move(edges));
}

void require_kind(ErrorKind kind, const std::function<void()>& fn) {
    try {
        fn();
        FAIL_CHECK("expected error " << addrep::error_kind_name(kind));
    } catch (const Error& e) {
        CHECK(e.kind() == kind);
    }
}

// shared fixtures
MultiGraph triangle() { return grid(3, {{0, 1}, {1, 2}, {2, 0}}); }
MultiGraph two_triangles_shared() {
    return grid(5, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}});
}
MultiGraph four_cycle() { return grid(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}); }
MultiGraph single_loop() { return grid(1, {{0, 0}}); }

} // namespace

TEST_CASE("graph construction and validation") {
    MultiGraph g = grid(3, {{0, 1}, {1, 1}});
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(!g.is_loop(0));
    CHECK(g.is_loop(1));
    require_kind(ErrorKind::InconsistentInput, [] { grid(2, {{0, 5}}); });

    MultiGraph labeled({10, 20, 10}, {{10, 20}});
    CHECK(labeled.vertex_count() == 2); // duplicate labels collapse
}

TEST_CASE("graph text format") {
    std::istringstream in("3 3\n0 1\n1 2\n2 0\n");
    MultiGraph g = MultiGraph::from_text(in);
    CHECK(g.vertex_count() == 3);
    CHECK(g.edge_count() == 3);
    std::ostringstream out;
    g.write_text(out);
    CHECK(out.str() == "3 3\n0 1\n1 2\n2 0\n");

    auto parse = [](const std::string& text) {
        std::istringstream ss(text);
        return MultiGraph::from_text(ss);
    };
    CHECK(parse("0 0\n").vertex_count() == 0);
    require_kind(ErrorKind::MalformedInput, [&] { parse(""); });
    require_kind(ErrorKind::MalformedInput, [&] { parse("2 1\n0 5\n"); });
    require_kind(ErrorKind::MalformedInput, [&] { parse("2 2\n0 1\n"); });
    require_kind(ErrorKind::MalformedInput, [&] { parse("2 1\n0 1\n7\n"); });
}

TEST_CASE("walk checker fixtures") {
    MultiGraph c4 = four_cycle();
    Walk once{{0, 1, 2, 3}, {0, 1, 2, 3}};
    CHECK(addrep::is_nontrivial_even_closed_walk(c4, once));

    MultiGraph tri = triangle();
    Walk twice{{0, 1, 2, 0, 1, 2}, {0, 1, 2, 0, 1, 2}};
    CHECK(!addrep::is_nontrivial_even_closed_walk(tri, twice)); // no edge used once
    Walk three{{0, 1, 2}, {0, 1, 2}};
    CHECK(!addrep::is_nontrivial_even_closed_walk(tri, three)); // odd length

    MultiGraph shared = two_triangles_shared();
    Walk joined{{0, 1, 2, 0, 3, 4}, {0, 1, 2, 3, 4, 5}};
    CHECK(addrep::is_nontrivial_even_closed_walk(shared, joined));

    // overuse: a doubled edge walked four times around
    MultiGraph pair = grid(2, {{0, 1}, {0, 1}});
    Walk overused{{0, 1, 0, 1}, {0, 1, 0, 1}};
    CHECK(!addrep::is_nontrivial_even_closed_walk(pair, overused));

    require_kind(ErrorKind::MalformedWalk, [&] {
        Walk bad{{0, 2}, {0, 1}}; // edge 0 does not join 0 and 2
        addrep::is_nontrivial_even_closed_walk(tri, bad);
    });
    require_kind(ErrorKind::MalformedWalk, [&] {
        Walk bad{{0, 1}, {0, 9}};
        addrep::is_nontrivial_even_closed_walk(tri, bad);
    });
    require_kind(ErrorKind::MalformedWalk, [&] {
        Walk bad{{}, {}};
        addrep::is_nontrivial_even_closed_walk(tri, bad);
    });
}

TEST_CASE("detector fixtures and certificates") {
    auto verdict = addrep::detect_even_closed_walk(triangle());
    CHECK(!verdict.even_walk_found());
    REQUIRE(verdict.components.size() == 1);
    CHECK(verdict.components[0].excess == 0);
    CHECK(verdict.components[0].cycle_rank == 1);
    CHECK(verdict.components[0].parity == addrep::CycleParity::odd);

    auto loop = addrep::detect_even_closed_walk(single_loop());
    CHECK(!loop.even_walk_found());
    CHECK(loop.components[0].parity == addrep::CycleParity::odd);

    auto path = addrep::detect_even_closed_walk(grid(3, {{0, 1}, {1, 2}}));
    CHECK(!path.even_walk_found());
    CHECK(path.components[0].excess == -1);
    CHECK(path.components[0].parity == addrep::CycleParity::none);

    auto shared = addrep::detect_even_closed_walk(two_triangles_shared());
    REQUIRE(shared.even_walk_found());
    CHECK(shared.walk->length() == 6);
    CHECK(addrep::is_nontrivial_even_closed_walk(two_triangles_shared(), *shared.walk));

    auto c4 = addrep::detect_even_closed_walk(four_cycle());
    REQUIRE(c4.even_walk_found());
    CHECK(c4.walk->length() == 4);

    auto parallel = addrep::detect_even_closed_walk(grid(2, {{0, 1}, {0, 1}}));
    REQUIRE(parallel.even_walk_found());
    CHECK(parallel.walk->length() == 2);

    auto loops2 = addrep::detect_even_closed_walk(grid(1, {{0, 0}, {0, 0}}));
    REQUIRE(loops2.even_walk_found());
    CHECK(loops2.walk->length() == 2);

    auto empty = addrep::detect_even_closed_walk(MultiGraph({}, {}));
    CHECK(!empty.even_walk_found());
    CHECK(empty.components.empty());
}

TEST_CASE("detector joins disjoint odd cycles through a doubled connector") {
    // two triangles joined by a 2-edge path: 0-1-2-0, 2..bridge 3,4.. 5-6-7-5
    MultiGraph g = grid(8, {{0, 1},
                            {1, 2},
                            {2, 0},
                            {5, 6},
                            {6, 7},
                            {7, 5},
                            {2, 3},
                            {3, 4},
                            {4, 5}});
    auto verdict = addrep::detect_even_closed_walk(g);
    REQUIRE(verdict.even_walk_found());
    CHECK(verdict.walk->length() % 2 == 0);
    CHECK(addrep::is_nontrivial_even_closed_walk(g, *verdict.walk));

    // a loop far from a triangle, same component
    MultiGraph lg = grid(5, {{0, 0}, {0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 2}});
    auto lv = addrep::detect_even_closed_walk(lg);
    REQUIRE(lv.even_walk_found());
    CHECK(lv.walk->length() % 2 == 0);
    CHECK(addrep::is_nontrivial_even_closed_walk(lg, *lv.walk));
}

TEST_CASE("oracle fixtures") {
    auto c4 = addrep::brute_force_even_walk(four_cycle(), 8);
    REQUIRE(c4.has_value());
    CHECK(c4->length() == 4);
    CHECK(addrep::is_nontrivial_even_closed_walk(four_cycle(), *c4));

    CHECK(!addrep::brute_force_even_walk(triangle(), 6).has_value());
    CHECK(!addrep::brute_force_even_walk(single_loop(), 2).has_value());

    require_kind(ErrorKind::DomainError, [] { addrep::brute_force_even_walk(triangle(), 5); });
    require_kind(ErrorKind::BudgetExceeded,
                 [] { addrep::brute_force_even_walk(two_triangles_shared(), 12, 8); });
}

TEST_CASE("edge bound report") {
    auto tri = addrep::edge_bound_check(triangle());
    CHECK(tri.bound_checked);
    CHECK(tri.bound_holds); // 3 <= 3, mu = 0
    auto tree = addrep::edge_bound_check(grid(4, {{0, 1}, {1, 2}, {2, 3}}));
    CHECK(tree.bound_checked);
    CHECK(tree.bound_holds); // |E| = |V| - 1, mu = -1
    CHECK(tree.verdict.components[0].excess == -1);
    auto two = addrep::edge_bound_check(two_triangles_shared());
    CHECK(!two.bound_checked);
}

namespace {

EdgeList random_edges(std::mt19937_64& rng, std::size_t v, std::size_t e) {
    EdgeList edges;
    for (std::size_t i = 0; i < e; ++i) edges.push_back({rng() % v, rng() % v});
    return edges;
}

} // namespace

TEST_CASE("detector agrees with the oracle exhaustively (V <= 4, E <= 4)") {
    for (std::size_t v = 1; v <= 4; ++v) {
        EdgeList slots;
        for (u64 i = 0; i < v; ++i)
            for (u64 j = i; j < v; ++j) slots.push_back({i, j});
        EdgeList edges;
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from,
                                                                std::size_t remaining) {
            if (remaining == 0) {
                MultiGraph g = grid(v, edges);
                auto verdict = addrep::detect_even_closed_walk(g);
                std::optional<Walk> oracle;
                if (!edges.empty())
                    oracle = addrep::brute_force_even_walk(g, 2 * edges.size());
                if (verdict.even_walk_found() != oracle.has_value()) {
                    std::ostringstream desc;
                    desc << "V = " << v << ", edges:";
                    for (auto [a, b] : edges) desc << " {" << a << "," << b << "}";
                    FAIL(desc.str());
                }
                return;
            }
            for (std::size_t s = from; s < slots.size(); ++s) {
                edges.push_back(slots[s]);
                rec(s, remaining - 1);
                edges.pop_back();
            }
        };
        for (std::size_t e = 0; e <= 4; ++e) rec(0, e);
    }
}

TEST_CASE("detector agrees with the oracle on random multigraphs") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 2000; ++trial) {
        std::size_t v = 1 + rng() % 6;
        std::size_t e = rng() % 8;
        MultiGraph g = grid(v, random_edges(rng, v, e));
        auto verdict = addrep::detect_even_closed_walk(g);
        std::optional<Walk> oracle;
        if (e > 0) oracle = addrep::brute_force_even_walk(g, 2 * e);
        CAPTURE(trial);
        REQUIRE(verdict.even_walk_found() == oracle.has_value());
        if (verdict.even_walk_found()) {
            CHECK(addrep::is_nontrivial_even_closed_walk(g, *verdict.walk));
        } else {
            CHECK(g.edge_count() <= g.vertex_count());
            for (const auto& c : verdict.components) {
                CHECK(c.cycle_rank <= 1);
                CHECK((c.cycle_rank == 0) == (c.parity == addrep::CycleParity::none));
                if (c.cycle_rank == 1) CHECK(c.parity == addrep::CycleParity::odd);
            }
        }
    }
}

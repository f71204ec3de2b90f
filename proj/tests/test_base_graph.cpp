#include <algorithm>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rrcover/base_graph.hpp"
#include "test_graphs.hpp"

using rrcover::BaseGraph;
namespace tg = rrcover::testgraphs;

namespace {
using Matrix = std::vector<std::vector<std::int64_t>>;
}

TEST_CASE("fibonacci graph validates with the expected adjacency") {
    const auto g = tg::fibonacci();
    const auto report = g.validate();
    CHECK(report.ok);
    CHECK(report.violations.empty());
    CHECK(g.adjacency_matrix() == Matrix{{0, 1}, {1, 1}});
    CHECK(g.degree(1) == 1);
    CHECK(g.degree(2) == 2);
    CHECK(g.max_degree() == 2);
}

TEST_CASE("half-line is the smallest valid graph") {
    const auto g = tg::half_line();
    CHECK(g.validate().ok);
    CHECK(g.adjacency_matrix() == Matrix{{1}});
}

TEST_CASE("disconnected type pair is rejected") {
    const BaseGraph g({{1}, {2}});
    const auto report = g.validate();
    CHECK_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    CHECK(report.violations[0].find("strongly connected") != std::string::npos);
}

TEST_CASE("empty child list is rejected") {
    const BaseGraph g({{2}, {}});
    const auto report = g.validate();
    CHECK_FALSE(report.ok);
    CHECK(report.violations[0].find("empty child list") != std::string::npos);
}

TEST_CASE("child type outside 1..m is rejected") {
    const BaseGraph g({{2}, {2, 3}});
    const auto report = g.validate();
    CHECK_FALSE(report.ok);
    CHECK(report.violations[0].find("type 2 child 2") != std::string::npos);
}

TEST_CASE("embedding adjacency examples") {
    CHECK(tg::embedding_a().adjacency_matrix() == Matrix{{0, 1}, {2, 1}});
    CHECK(tg::embedding_b().adjacency_matrix() == Matrix{{0, 1}, {2, 1}});
    CHECK(tg::embedding_c().adjacency_matrix() == Matrix{{0, 1}, {2, 1}});
    const BaseGraph biregular({{2, 2}, {1, 1, 1}});
    CHECK(biregular.validate().ok);
    CHECK(biregular.adjacency_matrix() == Matrix{{0, 2}, {3, 0}});
}

TEST_CASE("adjacency rows sum to the degree and ignore child order") {
    std::mt19937 shuffle_rng(7);
    for (const auto& g : {tg::fibonacci(), tg::embedding_b(), tg::generalized_fibonacci(4)}) {
        const auto d = g.adjacency_matrix();
        std::vector<std::vector<int>> permuted;
        for (int i = 1; i <= g.type_count(); ++i) {
            std::int64_t row_sum = 0;
            for (auto entry : d[static_cast<std::size_t>(i - 1)]) row_sum += entry;
            CHECK(row_sum == g.degree(i));
            auto list = g.children(i);
            std::shuffle(list.begin(), list.end(), shuffle_rng);
            permuted.push_back(list);
        }
        CHECK(BaseGraph(permuted).adjacency_matrix() == d);
    }
}

TEST_CASE("type accessors are range checked") {
    const auto g = tg::fibonacci();
    CHECK(g.child_type(2, 1) == 2);
    CHECK(g.child_type(2, 2) == 1);
    CHECK_THROWS_AS(g.children(0), std::out_of_range);
    CHECK_THROWS_AS(g.children(3), std::out_of_range);
    CHECK_THROWS_AS(g.child_type(2, 3), std::out_of_range);
}

#include <catch_amalgamated.hpp>

#include "sst/oracle.hpp"
#include "sst/workload.hpp"

using namespace sst;

TEST_CASE("naive_lcp on small texts", "[oracle]")
{
    const Text banana("banana");
    CHECK(oracle::naive_lcp(banana, 2, 4) == 3);
    for (Pos i = 1; i <= 6; ++i)
        CHECK(oracle::naive_lcp(banana, i, i) == 7 - i);
    CHECK(oracle::naive_lcp(Text("ab"), 1, 2) == 0);
    CHECK(oracle::naive_lcp(Text("mississippi"), 2, 5) == 4);
    CHECK_THROWS_AS(oracle::naive_lcp(banana, 0, 1), InputError);
    CHECK_THROWS_AS(oracle::naive_lcp(banana, 1, 7), InputError);
}

TEST_CASE("naive_sort examples", "[oracle]")
{
    const Text banana("banana");
    const std::vector<Pos> odd{1, 3, 5};
    const auto ssa = oracle::naive_sort(banana, odd);
    CHECK(std::vector<Pos>(ssa.sa.begin(), ssa.sa.end()) == std::vector<Pos>{1, 5, 3});
    CHECK(std::vector<Pos>(ssa.adj_lcp.begin(), ssa.adj_lcp.end()) == std::vector<Pos>{0, 2});

    const std::vector<Pos> one{4};
    CHECK(oracle::naive_sort(banana, one).sa.size() == 1);
    CHECK(oracle::naive_sort(banana, one).adj_lcp.empty());

    const std::vector<Pos> all{1, 2, 3, 4};
    const auto aaaa = oracle::naive_sort(Text("aaaa"), all);
    CHECK(std::vector<Pos>(aaaa.sa.begin(), aaaa.sa.end()) == std::vector<Pos>{4, 3, 2, 1});

    const std::vector<Pos> dup{1, 1};
    CHECK_THROWS_AS(oracle::naive_sort(banana, dup), InputError);
}

TEST_CASE("naive_tree on aa", "[oracle]")
{
    const Text aa("aa");
    const std::vector<Pos> both{1, 2};
    const auto tree = oracle::naive_tree(aa, both);
    // root -> "a" (length 1) -> { $ : leaf 2, a$ : leaf 1 }
    REQUIRE(tree.child_count(SparseSuffixTree::root) == 1);
    const NodeId inner = tree[SparseSuffixTree::root].first_child;
    CHECK(tree[inner].length == 1);
    CHECK_FALSE(tree[inner].is_leaf());
    REQUIRE(tree.child_count(inner) == 2);
    const NodeId first = tree[inner].first_child;
    const NodeId second = tree[first].next_sibling;
    CHECK(tree[first].leaf_pos == 2);
    CHECK(tree[first].edge_length() == 1);
    CHECK(tree[second].leaf_pos == 1);
    CHECK(tree[second].edge_length() == 2);
}

TEST_CASE("naive_tree with one suffix", "[oracle]")
{
    const std::vector<Pos> one{3};
    const auto tree = oracle::naive_tree(Text("banana"), one);
    CHECK(tree.nodes.size() == 2);
    CHECK(tree[1].leaf_pos == 3);
}

TEST_CASE("oracle guard refuses large inputs unless forced", "[oracle]")
{
    const std::string big(200'000, 'a');
    const Text text(big);
    const auto positions = workload::evenly_spaced_positions(text.size(), 1000);
    CHECK_THROWS_WITH(oracle::naive_sort(text, positions), Catch::Matchers::ContainsSubstring("oracle refused"));
    CHECK_NOTHROW(oracle::check_guard(text, 500, false));
    CHECK_NOTHROW(oracle::check_guard(text, 1000, true));
}

TEST_CASE("naive_lcp is symmetric and satisfies the shift identity", "[oracle][property]")
{
    // LCP(i+m, j+m) + m = LCP(i, j) for 0 <= m <= LCP(i, j)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const std::string s = seed < 2 ? workload::random_text(256, 2, seed) : workload::fibonacci_word(256);
        const Text text(s);
        for (Pos i = 1; i <= text.size(); ++i)
            for (Pos j = 1; j <= text.size(); ++j) {
                const Pos lcp = oracle::naive_lcp(text, i, j);
                REQUIRE(lcp == oracle::naive_lcp(text, j, i));
                for (Pos m = 0; m <= lcp && i + m <= text.size() && j + m <= text.size(); ++m)
                    REQUIRE(oracle::naive_lcp(text, i + m, j + m) + m == lcp);
            }
    }
}

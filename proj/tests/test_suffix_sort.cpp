#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "sst/oracle.hpp"
#include "sst/suffix_sort.hpp"
#include "sst/workload.hpp"

using namespace sst;

namespace {

std::vector<Pos> as_vector(const aux::vector<Pos>& v) { return {v.begin(), v.end()}; }

std::vector<std::string> texts_for(std::size_t n, std::uint64_t seed)
{
    return {workload::random_text(n, 2, seed),           workload::random_text(n, 26, seed),
            workload::random_text(n, 256, seed),         std::string(n, 'a'),
            workload::repeat_text("ab", n),              workload::fibonacci_word(n),
            workload::thue_morse_word(n)};
}

} // namespace

TEST_CASE("compare_after_lcp", "[suffix_sort]")
{
    const Text banana("banana");
    CHECK(compare_after_lcp(banana, 4, 2, 3) < 0);
    CHECK(compare_after_lcp(banana, 1, 3, 0) < 0);
    CHECK(compare_after_lcp(banana, 2, 4, 3) > 0);
    CHECK(compare_after_lcp(banana, 3, 1, 0) > 0);
    CHECK(compare_after_lcp(banana, 6, 4, 1) < 0);
}

TEST_CASE("sort_suffixes examples", "[suffix_sort]")
{
    const Text banana("banana");
    const auto ctx = new_context(256, 6, 0, 2);

    const std::vector<Pos> odd{1, 3, 5};
    const auto ssa = sort_suffixes(banana, odd, ctx, 2, 0);
    CHECK(as_vector(ssa.sa) == std::vector<Pos>{1, 5, 3});
    CHECK(as_vector(ssa.adj_lcp) == std::vector<Pos>{0, 2});
    CHECK(ssa.n == 6);

    const std::vector<Pos> all{1, 2, 3, 4, 5, 6};
    CHECK(as_vector(sort_suffixes(banana, all, ctx, 2, 0).sa) == std::vector<Pos>{6, 4, 2, 1, 5, 3});

    const std::vector<Pos> one{4};
    const auto single = sort_suffixes(banana, one, ctx, 2, 0);
    CHECK(as_vector(single.sa) == std::vector<Pos>{4});
    CHECK(single.adj_lcp.empty());

    const std::vector<Pos> none;
    CHECK(sort_suffixes(banana, none, ctx, 2, 0).sa.empty());
}

TEST_CASE("sort_suffixes rejects bad positions", "[suffix_sort]")
{
    const Text banana("banana");
    const auto ctx = new_context(256, 6, 0, 2);
    const std::vector<Pos> dup{1, 3, 1};
    CHECK_THROWS_WITH(sort_suffixes(banana, dup, ctx, 2, 0), Catch::Matchers::ContainsSubstring("duplicate"));
    const std::vector<Pos> out{1, 7};
    CHECK_THROWS_WITH(sort_suffixes(banana, out, ctx, 2, 0), Catch::Matchers::ContainsSubstring("out of range"));
    const std::vector<Pos> zero{0};
    CHECK_THROWS_AS(sort_suffixes(banana, zero, ctx, 2, 0), InputError);
}

TEST_CASE("sort_suffixes matches naive_sort", "[suffix_sort][property]")
{
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const std::size_t n = 100 + 61 * seed;
        for (const std::string& s : texts_for(n, seed)) {
            const Text text(s);
            const auto positions = workload::random_positions(n, std::min<std::size_t>(64, n / 2), seed);
            const auto expected = oracle::naive_sort(text, positions);
            const auto ctx = new_context(256, n, seed, 2);
            for (unsigned alpha : {2U, 16U}) {
                const auto got = sort_suffixes(text, positions, ctx, alpha, seed);
                REQUIRE(as_vector(got.sa) == as_vector(expected.sa));
                REQUIRE(as_vector(got.adj_lcp) == as_vector(expected.adj_lcp));
            }
        }
    }
}

TEST_CASE("sorted output is a permutation of the input", "[suffix_sort][property]")
{
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::string s = workload::random_text(1000, 4, seed);
        const Text text(s);
        const auto positions = workload::random_positions(1000, 200, seed);
        const auto got = sort_suffixes(text, positions, new_context(256, 1000, seed, 2), 2, seed);
        CHECK(std::multiset<Pos>(got.sa.begin(), got.sa.end()) ==
              std::multiset<Pos>(positions.begin(), positions.end()));
        CHECK(got.adj_lcp.size() + 1 == got.sa.size());
    }
}

TEST_CASE("level count stays near log b", "[suffix_sort][statistical]")
{
    const std::size_t b = 256;
    const double bound = 4 * std::log2(static_cast<double>(b));
    unsigned worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::string s = workload::random_text(2048, 4, seed);
        const Text text(s);
        const auto positions = workload::random_positions(2048, b, seed);
        SortStats stats;
        sort_suffixes(text, positions, new_context(256, 2048, seed, 2), 2, seed, &stats);
        worst = std::max(worst, stats.levels);
        CHECK(stats.batch_calls == stats.levels + 1);
    }
    CHECK(worst <= bound);
}

TEST_CASE("sort_suffixes is deterministic for a fixed seed", "[suffix_sort]")
{
    const std::string s = workload::random_text(3000, 2, 1);
    const Text text(s);
    const auto positions = workload::random_positions(3000, 300, 1);
    const auto ctx = new_context(256, 3000, 1, 2);
    SortStats a_stats, b_stats;
    const auto a = sort_suffixes(text, positions, ctx, 4, 9, &a_stats);
    const auto b = sort_suffixes(text, positions, ctx, 4, 9, &b_stats);
    CHECK(as_vector(a.sa) == as_vector(b.sa));
    CHECK(as_vector(a.adj_lcp) == as_vector(b.adj_lcp));
    CHECK(a_stats.levels == b_stats.levels);
    CHECK(a_stats.total_rounds == b_stats.total_rounds);
}

TEST_CASE("sorting working space does not grow with n", "[suffix_sort][memory]")
{
    const std::size_t b = 256;
    std::vector<std::size_t> peaks;
    for (Pos n : {Pos{1} << 14, Pos{1} << 15, Pos{1} << 16}) {
        const std::string s = workload::random_text(n, 256, 1);
        const Text text(s);
        const auto positions = workload::random_positions(n, b, 1);
        aux::Meter meter;
        {
            aux::Scope scope(meter);
            sort_suffixes(text, positions, new_context(256, n, 1, 2), 2, 1);
        }
        peaks.push_back(meter.peak_words());
    }
    const auto [lo, hi] = std::minmax_element(peaks.begin(), peaks.end());
    CHECK(static_cast<double>(*hi) <= 1.05 * static_cast<double>(*lo));
}

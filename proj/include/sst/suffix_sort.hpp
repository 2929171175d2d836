#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "sst/aux_memory.hpp"
#include "sst/batched_lcp.hpp"
#include "sst/fingerprint.hpp"
#include "sst/text.hpp"

namespace sst {

/// Chosen suffixes in lexicographic order, with LCPs of neighbours:
/// adj_lcp[t] = LCP(sa[t], sa[t+1]).
struct SparseSuffixArray
{
    aux::vector<Pos> sa;
    aux::vector<Pos> adj_lcp;
    Pos n = 0;
};

/// Orders T_i against T_j given their LCP. An exhausted suffix is a proper
/// prefix of the other and sorts first.
inline std::strong_ordering compare_after_lcp(const Text& text, Pos i, Pos j, Pos lcp)
{
    const Pos n = text.size();
    const bool i_done = i + lcp > n;
    const bool j_done = j + lcp > n;
    if (i_done && j_done)
        return i <=> j; // only when i == j
    if (i_done)
        return std::strong_ordering::less;
    if (j_done)
        return std::strong_ordering::greater;
    return text[i + lcp] <=> text[j + lcp];
}

struct SortStats
{
    unsigned levels = 0;
    unsigned batch_calls = 0;
    unsigned max_rounds = 0;
    std::uint64_t total_rounds = 0;

    void record(const LcpBatchResult& r)
    {
        ++batch_calls;
        max_rounds = std::max(max_rounds, r.rounds);
        total_rounds += r.rounds;
    }
};

struct SortOptions
{
    unsigned alpha = 2;
    std::uint64_t seed = 0;
    bool verify = false;
    RoundObserver observer;
};

namespace detail {

inline void check_positions(const Text& text, std::span<const Pos> positions)
{
    for (Pos p : positions)
        check_position(text, p);
    aux::vector<Pos> sorted(positions.begin(), positions.end());
    std::sort(sorted.begin(), sorted.end());
    if (auto it = std::adjacent_find(sorted.begin(), sorted.end()); it != sorted.end())
        throw InputError("duplicate position " + std::to_string(*it));
}

inline LcpOptions lcp_options(const SortOptions& options)
{
    LcpOptions lcp;
    lcp.alpha = options.alpha;
    lcp.verify = options.verify;
    lcp.observer = options.observer;
    return lcp;
}

} // namespace detail

/// Randomised quicksort over the chosen suffixes in which every recursion
/// level issues a single batched LCP query for all of its pivot comparisons.
/// Segments are kept on an explicit worklist; each pivot lands between its
/// two partitions.
inline SparseSuffixArray sort_suffixes(const Text& text, std::span<const Pos> positions,
                                       const FingerprintContext& ctx, const SortOptions& options,
                                       SortStats* stats = nullptr)
{
    if (options.alpha < 2)
        throw InputError("alpha must be at least 2");
    detail::check_positions(text, positions);

    SortStats local;
    SortStats& st = stats != nullptr ? *stats : local;
    st = {};

    SparseSuffixArray out;
    out.n = text.size();
    out.sa.assign(positions.begin(), positions.end());
    const LcpOptions lcp_opts = detail::lcp_options(options);

    struct Segment
    {
        std::uint32_t lo, hi; // [lo, hi) of out.sa, size >= 2
    };
    aux::vector<Segment> active;
    aux::vector<Segment> next;
    if (out.sa.size() >= 2)
        active.push_back({0, static_cast<std::uint32_t>(out.sa.size())});

    std::mt19937_64 rng(modular::splitmix64(options.seed ^ 0x51ab5eedULL));
    aux::vector<SuffixPair> comparisons;
    aux::vector<Pos> scratch(out.sa.size());

    while (!active.empty()) {
        ++st.levels;
        comparisons.clear();
        for (const Segment& seg : active) {
            std::uniform_int_distribution<std::uint32_t> pick(seg.lo, seg.hi - 1);
            std::swap(out.sa[seg.lo], out.sa[pick(rng)]);
            const Pos pivot = out.sa[seg.lo];
            for (std::uint32_t k = seg.lo + 1; k < seg.hi; ++k)
                comparisons.emplace_back(out.sa[k], pivot);
        }
        const LcpBatchResult lcps = batch_lcp(text, comparisons, ctx, lcp_opts);
        st.record(lcps);

        next.clear();
        std::size_t c = 0;
        for (const Segment& seg : active) {
            const Pos pivot = out.sa[seg.lo];
            std::uint32_t less = seg.lo;
            std::uint32_t greater = seg.hi;
            for (std::uint32_t k = seg.lo + 1; k < seg.hi; ++k, ++c) {
                const Pos p = out.sa[k];
                if (compare_after_lcp(text, p, pivot, lcps.lcp[c]) < 0)
                    scratch[less++] = p;
                else
                    scratch[--greater] = p;
            }
            // greater side was filled back to front
            std::reverse(scratch.begin() + greater, scratch.begin() + seg.hi);
            scratch[less] = pivot;
            std::copy(scratch.begin() + seg.lo, scratch.begin() + seg.hi, out.sa.begin() + seg.lo);
            if (less - seg.lo >= 2)
                next.push_back({seg.lo, less});
            if (seg.hi - (less + 1) >= 2)
                next.push_back({less + 1, seg.hi});
        }
        std::swap(active, next);
    }
    scratch = {};
    comparisons = {};

    if (out.sa.size() >= 2) {
        aux::vector<SuffixPair> neighbours;
        neighbours.reserve(out.sa.size() - 1);
        for (std::size_t t = 0; t + 1 < out.sa.size(); ++t)
            neighbours.emplace_back(out.sa[t], out.sa[t + 1]);
        LcpBatchResult lcps = batch_lcp(text, neighbours, ctx, lcp_opts);
        st.record(lcps);
        out.adj_lcp = std::move(lcps.lcp);
    }
    return out;
}

inline SparseSuffixArray sort_suffixes(const Text& text, std::span<const Pos> positions,
                                       const FingerprintContext& ctx, unsigned alpha, std::uint64_t seed,
                                       SortStats* stats = nullptr)
{
    SortOptions options;
    options.alpha = alpha;
    options.seed = seed;
    return sort_suffixes(text, positions, ctx, options, stats);
}

} // namespace sst

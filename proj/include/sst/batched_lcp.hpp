#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>

#include "sst/aux_memory.hpp"
#include "sst/fingerprint.hpp"
#include "sst/text.hpp"

// Batched LCP queries.
//
// All b pairs run an alpha-ary search on their LCP simultaneously. Each round
// needs fingerprints of O(alpha) prefixes per pair; those are collected into
// one PositionSet and filled by a single left-to-right pass over the text.
// Once the uncertainty window is at most ceil(n/b), the remaining residual of
// every pair is found by direct comparison.

namespace sst {

using SuffixPair = std::pair<Pos, Pos>;

/// State of one query. Its index in PairTracker::pairs is its origin id.
struct PairRecord
{
    Pos origin_i = 0;
    Pos origin_j = 0;
    Pos i = 0; ///< current position, origin_i + (confirmed common prefix)
    Pos j = 0;
    Pos lcp = 0; ///< valid once resolved
    bool resolved = false;

    Pos advanced() const { return i - origin_i; }
};

/// Invariant (absent fingerprint false positives), for every unresolved pair:
///   advanced() <= LCP(origin_i, origin_j) <= advanced() + window.
struct PairTracker
{
    aux::vector<PairRecord> pairs;
    Pos window = 0;
    unsigned round = 0;

    std::size_t unresolved() const
    {
        return static_cast<std::size_t>(
            std::count_if(pairs.begin(), pairs.end(), [](const PairRecord& r) { return !r.resolved; }));
    }
};

/// Text positions whose prefix fingerprints FP[1, l] a round needs.
///
/// Requests are (position, requester slot) entries; after seal() every distinct
/// position owns one fingerprint slot per repetition and each requester slot
/// holds the index of its position, so lookups after the scan are O(1).
class PositionSet
{
public:
    explicit PositionSet(unsigned reps) : reps_(reps) {}

    void reserve(std::size_t requests) { requests_.reserve(requests); }

    /// Registers position l; returns the requester slot.
    std::uint32_t request(Pos l)
    {
        const auto slot = static_cast<std::uint32_t>(requests_.size());
        requests_.push_back({l, slot});
        return slot;
    }

    void seal()
    {
        std::sort(requests_.begin(), requests_.end(),
                  [](const Request& a, const Request& b) { return a.position < b.position; });
        std::size_t distinct = 0;
        for (std::size_t r = 0; r < requests_.size(); ++r)
            if (r == 0 || requests_[r].position != requests_[r - 1].position)
                ++distinct;
        keys_.reserve(distinct);
        owner_.resize(requests_.size());
        for (const Request& req : requests_) {
            if (keys_.empty() || keys_.back() != req.position)
                keys_.push_back(req.position);
            owner_[req.slot] = static_cast<std::uint32_t>(keys_.size() - 1);
        }
        requests_ = {};
        fps_.assign(keys_.size() * reps_, 0);
    }

    std::size_t size() const { return keys_.size(); }
    std::span<const Pos> keys() const { return keys_; }
    Pos max_key() const { return keys_.empty() ? 0 : keys_.back(); }

    void store(std::size_t key_index, unsigned rep, std::uint64_t fp) { fps_[key_index * reps_ + rep] = fp; }

    std::uint64_t fingerprint(std::uint32_t slot, unsigned rep) const { return fps_[owner_[slot] * reps_ + rep]; }

private:
    struct Request
    {
        Pos position;
        std::uint32_t slot;
    };

    unsigned reps_;
    aux::vector<Request> requests_;
    aux::vector<Pos> keys_;
    aux::vector<std::uint32_t> owner_;
    aux::vector<std::uint64_t> fps_;
};

/// Fills every key of `set` with FP[1, key] in one pass over T_1..T_{max key}.
/// Narrow moduli are advanced two at a time so their dependency chains overlap.
inline void scan_prefix_fingerprints(const Text& text, const FingerprintContext& ctx, PositionSet& set)
{
    const auto keys = set.keys();
    const std::uint8_t* t = text.bytes().data();
    unsigned rep = 0;
    while (rep < ctx.reps()) {
        const Modulus& m = ctx.modulus(rep);
        if (rep + 1 < ctx.reps() && m.narrow() && ctx.modulus(rep + 1).narrow()) {
            const Modulus& m2 = ctx.modulus(rep + 1);
            std::uint64_t fp = 0, fp2 = 0;
            Pos l = 0;
            for (std::size_t k = 0; k < keys.size(); ++k) {
                for (; l < keys[k]; ++l) {
                    fp = m.extend_narrow(fp, t[l]);
                    fp2 = m2.extend_narrow(fp2, t[l]);
                }
                set.store(k, rep, fp);
                set.store(k, rep + 1, fp2);
            }
            rep += 2;
            continue;
        }
        std::uint64_t fp = 0;
        Pos l = 0;
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const Pos target = keys[k];
            if (m.narrow()) {
                for (; l < target; ++l)
                    fp = m.extend_narrow(fp, t[l]);
            } else {
                for (; l < target; ++l)
                    fp = m.extend_wide(fp, t[l]);
            }
            set.store(k, rep, fp);
        }
        ++rep;
    }
}

/// Per-round hook, called with the tracker after every round and once more
/// after the final phase.
using RoundObserver = std::function<void(const PairTracker&)>;

struct LcpOptions
{
    unsigned alpha = 2;
    /// Check that every reported LCP ends at a mismatch or a text end.
    bool verify = false;
    /// Window at which rounds stop; 0 selects max(1, ceil(n / b)).
    Pos final_window = 0;
    RoundObserver observer;
};

struct LcpBatchResult
{
    aux::vector<Pos> lcp;
    unsigned rounds = 0;
};

inline PairTracker make_tracker(const Text& text, std::span<const SuffixPair> pairs)
{
    PairTracker tracker;
    tracker.pairs.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        check_position(text, i);
        check_position(text, j);
        PairRecord rec{i, j, i, j, 0, false};
        if (i == j) {
            rec.lcp = text.suffix_length(i);
            rec.resolved = true;
        }
        tracker.pairs.push_back(rec);
    }
    tracker.window = text.size();
    return tracker;
}

/// One round of the alpha-ary search. With m = ceil(window / alpha) the probe
/// lengths are min(t*m, window, remaining) for t = 1..alpha-1, where
/// `remaining` is the length of the shorter of the two current suffixes. Each
/// pair advances by its longest matching probe; a pair whose match reaches the
/// end of a suffix is resolved on the spot. The new window is m.
inline void run_round(const Text& text, PairTracker& tracker, const FingerprintContext& ctx, unsigned alpha)
{
    if (alpha < 2)
        throw InputError("alpha must be at least 2");
    const Pos n = text.size();
    const Pos window = tracker.window;
    const Pos step = (window + alpha - 1) / alpha;
    const unsigned reps = ctx.reps();

    auto probe_length = [&](const PairRecord& rec, unsigned t) {
        const Pos remaining = n + 1 - std::max(rec.i, rec.j);
        return std::min({step * t, window, remaining});
    };

    // Each unresolved pair requests i-1 and j-1, then (i-1+L, j-1+L) for
    // each distinct probe length L. probe_begin[p] indexes its first slot.
    PositionSet set(reps);
    aux::vector<std::uint32_t> probe_begin(tracker.pairs.size() + 1, 0);
    {
        std::size_t total = 0;
        for (std::size_t p = 0; p < tracker.pairs.size(); ++p) {
            const PairRecord& rec = tracker.pairs[p];
            probe_begin[p] = static_cast<std::uint32_t>(total);
            if (rec.resolved)
                continue;
            total += 2;
            Pos last = 0;
            for (unsigned t = 1; t < alpha; ++t) {
                const Pos len = probe_length(rec, t);
                if (len == last)
                    break;
                last = len;
                total += 2;
            }
        }
        probe_begin[tracker.pairs.size()] = static_cast<std::uint32_t>(total);
        set.reserve(total);
    }
    for (const PairRecord& rec : tracker.pairs) {
        if (rec.resolved)
            continue;
        set.request(rec.i - 1);
        set.request(rec.j - 1);
        Pos last = 0;
        for (unsigned t = 1; t < alpha; ++t) {
            const Pos len = probe_length(rec, t);
            if (len == last)
                break;
            last = len;
            set.request(rec.i - 1 + len);
            set.request(rec.j - 1 + len);
        }
    }
    set.seal();
    scan_prefix_fingerprints(text, ctx, set);

    for (std::size_t p = 0; p < tracker.pairs.size(); ++p) {
        PairRecord& rec = tracker.pairs[p];
        if (rec.resolved)
            continue;
        const std::uint32_t base = probe_begin[p];
        const std::uint32_t probes = (probe_begin[p + 1] - base - 2) / 2;
        const Pos remaining = n + 1 - std::max(rec.i, rec.j);

        Pos advance = 0;
        for (std::uint32_t t = 0; t < probes; ++t) {
            const Pos len = probe_length(rec, t + 1);
            bool equal = true;
            for (unsigned rep = 0; rep < reps && equal; ++rep) {
                const Modulus& m = ctx.modulus(rep);
                const std::uint64_t power = ctx.pow_mod(len, rep);
                const std::uint64_t fi =
                    m.remove_prefix(set.fingerprint(base, rep), set.fingerprint(base + 2 + 2 * t, rep), power);
                const std::uint64_t fj =
                    m.remove_prefix(set.fingerprint(base + 1, rep), set.fingerprint(base + 3 + 2 * t, rep), power);
                equal = fi == fj;
            }
            if (!equal)
                break;
            advance = len;
        }

        if (advance == remaining) {
            rec.lcp = rec.advanced() + remaining;
            rec.resolved = true;
        } else {
            rec.i += advance;
            rec.j += advance;
        }
    }

    tracker.window = step;
    ++tracker.round;
}

/// Resolves every open pair by comparing at most `window` symbols directly.
inline void finalize_small(const Text& text, PairTracker& tracker)
{
    const Pos n = text.size();
    for (PairRecord& rec : tracker.pairs) {
        if (rec.resolved)
            continue;
        Pos r = 0;
        while (r < tracker.window && rec.i + r <= n && rec.j + r <= n && text[rec.i + r] == text[rec.j + r])
            ++r;
        rec.i += r;
        rec.j += r;
        rec.lcp = rec.advanced();
        rec.resolved = true;
    }
}

inline Pos default_final_window(Pos n, std::size_t b)
{
    if (b == 0)
        return std::max<Pos>(1, n);
    return std::max<Pos>(1, (n + b - 1) / b);
}

/// Confirms that T_{i+r} and T_{j+r} differ or one of them is past the end.
/// This checks the mismatch position only, not the matched prefix.
inline void verify_boundaries(const Text& text, std::span<const SuffixPair> pairs, std::span<const Pos> lcp)
{
    const Pos n = text.size();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const Pos r = lcp[p];
        const bool in_range = i + r <= n + 1 && j + r <= n + 1;
        const bool boundary = in_range && (i + r > n || j + r > n || text[i + r] != text[j + r]);
        if (!boundary)
            throw InvariantError("LCP(" + std::to_string(i) + "," + std::to_string(j) + ")=" + std::to_string(r) +
                                 " does not end at a mismatch");
    }
}

inline LcpBatchResult batch_lcp(const Text& text, std::span<const SuffixPair> pairs, const FingerprintContext& ctx,
                                const LcpOptions& options = {})
{
    if (options.alpha < 2)
        throw InputError("alpha must be at least 2");
    if (ctx.sigma() < 256) {
        for (std::uint8_t c : text.bytes())
            if (c >= ctx.sigma())
                throw InputError("text symbol " + std::to_string(c) + " outside alphabet of size " +
                                 std::to_string(ctx.sigma()));
    }

    LcpBatchResult result;
    PairTracker tracker = make_tracker(text, pairs);
    const Pos threshold =
        options.final_window != 0 ? options.final_window : default_final_window(text.size(), pairs.size());

    while (tracker.window > threshold && tracker.unresolved() != 0) {
        run_round(text, tracker, ctx, options.alpha);
        if (options.observer)
            options.observer(tracker);
    }
    finalize_small(text, tracker);
    if (options.observer)
        options.observer(tracker);

    result.rounds = tracker.round;
    result.lcp.reserve(tracker.pairs.size());
    for (const PairRecord& rec : tracker.pairs)
        result.lcp.push_back(rec.lcp);
    if (options.verify)
        verify_boundaries(text, pairs, result.lcp);
    return result;
}

inline LcpBatchResult batch_lcp(const Text& text, std::span<const SuffixPair> pairs, const FingerprintContext& ctx,
                                unsigned alpha)
{
    LcpOptions options;
    options.alpha = alpha;
    return batch_lcp(text, pairs, ctx, options);
}

} // namespace sst

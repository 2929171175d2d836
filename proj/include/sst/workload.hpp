#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "sst/fingerprint.hpp"
#include "sst/text.hpp"

// Seeded text and position generators shared by the benchmark command and
// the test suites.

namespace sst::workload {

/// n symbols drawn uniformly from an alphabet of `sigma` consecutive bytes
/// starting at `first` (letters for sigma <= 26, raw bytes for sigma = 256).
inline std::string random_text(std::size_t n, unsigned sigma, std::uint64_t seed)
{
    std::mt19937_64 rng(modular::splitmix64(seed));
    const unsigned first = sigma <= 26 ? 'a' : 0;
    std::uniform_int_distribution<unsigned> pick(0, sigma - 1);
    std::string s(n, '\0');
    for (char& c : s)
        c = static_cast<char>(first + pick(rng));
    return s;
}

inline std::string repeat_text(std::string_view unit, std::size_t n)
{
    std::string s;
    s.reserve(n);
    while (s.size() < n)
        s += unit.substr(0, std::min(unit.size(), n - s.size()));
    return s;
}

/// Prefix of length n of the Fibonacci word over {a, b}.
inline std::string fibonacci_word(std::size_t n)
{
    std::string prev = "a", cur = "ab";
    while (cur.size() < n) {
        std::string next = cur + prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return n <= 1 ? prev.substr(0, n) : cur.substr(0, n);
}

/// Prefix of length n of the Thue-Morse word over {a, b}.
inline std::string thue_morse_word(std::size_t n)
{
    std::string s(n, 'a');
    for (std::size_t i = 0; i < n; ++i)
        if (std::popcount(i) & 1)
            s[i] = 'b';
    return s;
}

/// b distinct positions from [1, n], uniformly at random, in random order.
inline std::vector<Pos> random_positions(Pos n, std::size_t b, std::uint64_t seed)
{
    std::mt19937_64 rng(modular::splitmix64(seed ^ 0x706f73ULL));
    b = std::min<std::size_t>(b, n);
    std::vector<Pos> out;
    out.reserve(b);
    // Floyd's sampling: one draw per chosen element
    std::unordered_set<Pos> chosen;
    chosen.reserve(b);
    for (Pos top = n - b + 1; top <= n; ++top) {
        const Pos pick = std::uniform_int_distribution<Pos>(1, top)(rng);
        const Pos value = chosen.insert(pick).second ? pick : top;
        if (value == top)
            chosen.insert(top);
        out.push_back(value);
    }
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

/// b positions spaced as evenly as possible over [1, n].
inline std::vector<Pos> evenly_spaced_positions(Pos n, std::size_t b)
{
    b = std::min<std::size_t>(b, n);
    std::vector<Pos> out;
    out.reserve(b);
    for (std::size_t t = 0; t < b; ++t)
        out.push_back(1 + static_cast<Pos>(t) * n / b);
    return out;
}

inline std::vector<std::pair<Pos, Pos>> random_pairs(Pos n, std::size_t b, std::uint64_t seed)
{
    std::mt19937_64 rng(modular::splitmix64(seed ^ 0x7061697273ULL));
    std::uniform_int_distribution<Pos> pick(1, n);
    std::vector<std::pair<Pos, Pos>> out;
    out.reserve(b);
    for (std::size_t t = 0; t < b; ++t)
        out.emplace_back(pick(rng), pick(rng));
    return out;
}

} // namespace sst::workload

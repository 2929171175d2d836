#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sst/text.hpp"

// Karp-Rabin fingerprints over random primes.
//
// FP of a string s_1..s_l is sum_k sigma^{l-k} * s_k mod p. The empty string
// has fingerprint 0. Several independent primes ("repetitions") may be used;
// two strings are considered equal only if they agree under every prime.

namespace sst {

namespace modular {

using u128 = unsigned __int128;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % p);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t e, std::uint64_t p)
{
    std::uint64_t result = 1 % p;
    base %= p;
    while (e != 0) {
        if (e & 1)
            result = mul_mod(result, base, p);
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    return result;
}

/// Miller-Rabin with `rounds` random bases drawn from `rng`.
template <typename Rng>
bool is_probable_prime(std::uint64_t n, unsigned rounds, Rng& rng)
{
    if (n < 2)
        return false;
    for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n == small)
            return true;
        if (n % small == 0)
            return false;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    std::uniform_int_distribution<std::uint64_t> pick(2, n - 2);
    for (unsigned round = 0; round < rounds; ++round) {
        std::uint64_t x = pow_mod(pick(rng), d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

inline bool is_probable_prime(std::uint64_t n, unsigned rounds = 40)
{
    std::mt19937_64 rng(n ^ 0x9e3779b97f4a7c15ULL);
    return is_probable_prime(n, rounds, rng);
}

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace modular

/// One prime modulus with the base folded in and a Barrett reciprocal for
/// the hot prefix-extension loop.
class Modulus
{
public:
    Modulus(std::uint64_t prime, std::uint64_t sigma)
        : p_(prime), base_(sigma % prime), narrow_(prime < (1ULL << 32) && sigma <= (1ULL << 24)),
          reciprocal_(~0ULL / prime)
    {}

    std::uint64_t prime() const { return p_; }
    std::uint64_t base() const { return base_; }

    /// True when fp * sigma + symbol always fits in 64 bits.
    bool narrow() const { return narrow_; }

    /// (fp * sigma + symbol) mod p via Barrett reduction; requires narrow().
    std::uint64_t extend_narrow(std::uint64_t fp, std::uint64_t symbol) const
    {
        const std::uint64_t x = fp * base_ + symbol;
        const auto q = static_cast<std::uint64_t>((static_cast<modular::u128>(x) * reciprocal_) >> 64);
        std::uint64_t r = x - q * p_;
        return r >= p_ ? r - p_ : r;
    }

    std::uint64_t extend_wide(std::uint64_t fp, std::uint64_t symbol) const
    {
        return static_cast<std::uint64_t>((static_cast<modular::u128>(fp) * base_ + symbol) % p_);
    }

    std::uint64_t extend(std::uint64_t fp, std::uint64_t symbol) const
    {
        return narrow_ ? extend_narrow(fp, symbol) : extend_wide(fp, symbol);
    }

    /// (prefix_b - prefix_a * base^{len}) mod p, given base^{len} mod p.
    std::uint64_t remove_prefix(std::uint64_t prefix_a, std::uint64_t prefix_b, std::uint64_t power) const
    {
        const std::uint64_t shifted = modular::mul_mod(prefix_a, power, p_);
        return prefix_b >= shifted ? prefix_b - shifted : prefix_b + (p_ - shifted);
    }

private:
    std::uint64_t p_;
    std::uint64_t base_;
    bool narrow_;
    std::uint64_t reciprocal_;
};

/// A fingerprint value together with the repetition (prime) it belongs to.
struct Fp
{
    std::uint64_t value = 0;
    unsigned rep = 0;

    friend bool operator==(const Fp&, const Fp&) = default;
};

class FingerprintContext
{
public:
    static constexpr unsigned miller_rabin_rounds = 40;
    static constexpr std::uint64_t min_prime_floor = 1ULL << 30;
    static constexpr std::uint64_t max_prime_floor = 1ULL << 61;
    static constexpr std::size_t pow_cache_capacity = 4096;

    /// Draws `reps` distinct primes uniformly from [F, 2F) with
    /// F = clamp(max(sigma, n)^2, 2^30, 2^61). When the clamp at 2^61 bites,
    /// one extra repetition is added to compensate.
    static FingerprintContext create(std::uint64_t sigma, std::uint64_t n, std::uint64_t seed, unsigned reps)
    {
        if (sigma < 2)
            throw InputError("alphabet size must be at least 2");
        if (n < 1)
            throw InputError("text length must be at least 1");
        if (reps < 1)
            throw InputError("repetition count must be at least 1");

        const modular::u128 side = std::max(sigma, n);
        const modular::u128 square = side * side;
        std::uint64_t floor = min_prime_floor;
        unsigned effective_reps = reps;
        if (square > max_prime_floor) {
            floor = max_prime_floor;
            ++effective_reps;
        } else if (square > floor) {
            floor = static_cast<std::uint64_t>(square);
        }

        std::vector<std::uint64_t> primes;
        primes.reserve(effective_reps);
        for (unsigned rep = 0; rep < effective_reps; ++rep) {
            std::mt19937_64 rng(modular::splitmix64(seed ^ modular::splitmix64(rep + 1)));
            std::uniform_int_distribution<std::uint64_t> draw(floor, 2 * floor - 1);
            for (;;) {
                const std::uint64_t candidate = draw(rng);
                if (std::find(primes.begin(), primes.end(), candidate) != primes.end())
                    continue;
                if (modular::is_probable_prime(candidate, miller_rabin_rounds, rng)) {
                    primes.push_back(candidate);
                    break;
                }
            }
        }
        return FingerprintContext(sigma, n, seed, primes);
    }

    /// Context over caller-chosen moduli; no range or primality checks.
    /// Used for hand-checkable examples and for forcing collisions.
    static FingerprintContext with_primes(std::uint64_t sigma, std::uint64_t n, std::span<const std::uint64_t> primes)
    {
        if (sigma < 2)
            throw InputError("alphabet size must be at least 2");
        if (primes.empty())
            throw InputError("at least one modulus is required");
        for (std::uint64_t p : primes)
            if (p < 2 || p >= (1ULL << 62))
                throw InputError("modulus " + std::to_string(p) + " outside [2, 2^62)");
        return FingerprintContext(sigma, n, 0, {primes.begin(), primes.end()});
    }

    std::uint64_t sigma() const { return sigma_; }
    std::uint64_t n() const { return n_; }
    std::uint64_t seed() const { return seed_; }
    unsigned reps() const { return static_cast<unsigned>(moduli_.size()); }
    std::uint64_t prime(unsigned rep = 0) const { return moduli_.at(rep).prime(); }
    const Modulus& modulus(unsigned rep) const { return moduli_[rep]; }

    /// sigma^e mod p_rep. Results for small exponent sets are memoised; the
    /// cache is bounded and thread-safe, so the context stays logically const.
    std::uint64_t pow_mod(std::uint64_t e, unsigned rep = 0) const
    {
        const Modulus& m = moduli_.at(rep);
        {
            std::lock_guard lock(cache_->mutex);
            auto& table = cache_->tables[rep];
            if (auto it = table.find(e); it != table.end())
                return it->second;
        }
        const std::uint64_t value = modular::pow_mod(sigma_, e, m.prime());
        std::lock_guard lock(cache_->mutex);
        auto& table = cache_->tables[rep];
        if (table.size() < pow_cache_capacity)
            table.emplace(e, value);
        return value;
    }

private:
    struct PowCache
    {
        std::mutex mutex;
        std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> tables;
    };

    FingerprintContext(std::uint64_t sigma, std::uint64_t n, std::uint64_t seed, std::vector<std::uint64_t> primes)
        : sigma_(sigma), n_(n), seed_(seed), cache_(std::make_shared<PowCache>())
    {
        moduli_.reserve(primes.size());
        for (std::uint64_t p : primes)
            moduli_.emplace_back(p, sigma);
        cache_->tables.resize(moduli_.size());
    }

    std::uint64_t sigma_;
    std::uint64_t n_;
    std::uint64_t seed_;
    std::vector<Modulus> moduli_;
    std::shared_ptr<PowCache> cache_;
};

inline FingerprintContext new_context(std::uint64_t sigma, std::uint64_t n, std::uint64_t seed, unsigned reps = 2)
{
    return FingerprintContext::create(sigma, n, seed, reps);
}

inline std::uint64_t pow_mod(const FingerprintContext& ctx, std::uint64_t e, unsigned rep = 0)
{
    return ctx.pow_mod(e, rep);
}

/// FP[1, l+1] from FP[1, l] and t_{l+1}.
inline Fp prefix_extend(Fp fp, std::uint64_t symbol, const FingerprintContext& ctx)
{
    if (symbol >= ctx.sigma())
        throw InputError("symbol " + std::to_string(symbol) + " outside alphabet of size " +
                         std::to_string(ctx.sigma()));
    const Modulus& m = ctx.modulus(fp.rep);
    return {m.extend_wide(fp.value, symbol), fp.rep};
}

/// Fingerprint of T_{a+1..b} from FP[1,a] and FP[1,b].
inline Fp substring_fp(Fp prefix_a, Fp prefix_b, Pos a, Pos b, const FingerprintContext& ctx)
{
    if (a > b)
        throw InputError("substring bounds reversed: a=" + std::to_string(a) + " > b=" + std::to_string(b));
    if (prefix_a.rep != prefix_b.rep)
        throw InputError("fingerprints from different repetitions");
    if (a == b)
        return {0, prefix_a.rep};
    const Modulus& m = ctx.modulus(prefix_a.rep);
    return {m.remove_prefix(prefix_a.value, prefix_b.value, ctx.pow_mod(b - a, prefix_a.rep)), prefix_a.rep};
}

} // namespace sst

#include <catch_amalgamated.hpp>

#include <array>
#include <random>
#include <thread>

#include "sst/fingerprint.hpp"
#include "sst/workload.hpp"

using namespace sst;

namespace {

// sum_k sigma^{len-k} * s_k mod p, evaluated term by term with exponentiation
std::uint64_t direct_fp(std::string_view s, std::uint64_t sigma, std::uint64_t p)
{
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const std::uint64_t power = modular::pow_mod(sigma, s.size() - 1 - k, p);
        total = (total + modular::mul_mod(power, static_cast<std::uint8_t>(s[k]), p)) % p;
    }
    return total;
}

bool trial_division_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

const std::array<std::uint64_t, 1> seven{7};

} // namespace

TEST_CASE("new_context draws a prime from the widened range", "[fingerprint]")
{
    const auto ctx = new_context(256, 6, 42, 1);
    REQUIRE(ctx.reps() == 1);
    // max(256, 6)^2 = 65536 is below the 2^30 floor
    CHECK(ctx.prime() >= (1ULL << 30));
    CHECK(ctx.prime() < (1ULL << 31));
    CHECK(modular::is_probable_prime(ctx.prime(), 40));
    CHECK(trial_division_prime(ctx.prime()));

    const auto small = new_context(4, 4, 7, 1);
    CHECK(small.prime() >= 16);
    CHECK(trial_division_prime(small.prime()));
}

TEST_CASE("new_context uses max(sigma, n)^2 once it exceeds the floor", "[fingerprint]")
{
    const std::uint64_t n = 100'000;
    const auto ctx = new_context(256, n, 3, 2);
    for (unsigned rep = 0; rep < ctx.reps(); ++rep) {
        CHECK(ctx.prime(rep) >= n * n);
        CHECK(ctx.prime(rep) < 2 * n * n);
        CHECK(modular::is_probable_prime(ctx.prime(rep)));
    }
    CHECK(ctx.prime(0) != ctx.prime(1));
}

TEST_CASE("new_context is deterministic in its arguments", "[fingerprint]")
{
    const auto a = new_context(256, 1000, 99, 3);
    const auto b = new_context(256, 1000, 99, 3);
    const auto c = new_context(256, 1000, 100, 3);
    for (unsigned rep = 0; rep < 3; ++rep)
        CHECK(a.prime(rep) == b.prime(rep));
    CHECK(a.prime(0) != c.prime(0));
}

TEST_CASE("new_context rejects bad arguments", "[fingerprint]")
{
    CHECK_THROWS_AS(new_context(1, 10, 0, 1), InputError);
    CHECK_THROWS_AS(new_context(256, 0, 0, 1), InputError);
    CHECK_THROWS_AS(new_context(256, 10, 0, 0), InputError);
}

TEST_CASE("Miller-Rabin agrees with trial division", "[fingerprint]")
{
    for (std::uint64_t n = 0; n < 5000; ++n)
        CHECK(modular::is_probable_prime(n) == trial_division_prime(n));
    // Carmichael numbers
    for (std::uint64_t n : {561ULL, 1105ULL, 1729ULL, 2465ULL, 41041ULL, 3215031751ULL})
        CHECK_FALSE(modular::is_probable_prime(n));
    CHECK(modular::is_probable_prime((1ULL << 61) - 1));
}

TEST_CASE("prefix_extend with sigma=3, p=7 over t=[1,2,1]", "[fingerprint]")
{
    const auto ctx = FingerprintContext::with_primes(3, 3, seven);
    Fp fp{0, 0};
    fp = prefix_extend(fp, 1, ctx);
    CHECK(fp.value == 1);
    fp = prefix_extend(fp, 2, ctx);
    CHECK(fp.value == 5);
    fp = prefix_extend(fp, 1, ctx);
    CHECK(fp.value == 2);
    CHECK_THROWS_AS(prefix_extend(fp, 3, ctx), InputError);
}

TEST_CASE("substring_fp with sigma=3, p=7 over t=[1,2,1]", "[fingerprint]")
{
    const auto ctx = FingerprintContext::with_primes(3, 3, seven);
    const Fp f0{0, 0}, f1{1, 0}, f3{2, 0};
    // "2,1" directly: (2*3 + 1) mod 7 = 0
    CHECK(substring_fp(f1, f3, 1, 3, ctx).value == 0);
    CHECK(substring_fp(f1, f3, 1, 3, ctx).value == (2 * 3 + 1) % 7);
    CHECK(substring_fp(f1, f1, 1, 1, ctx).value == 0);
    CHECK(substring_fp(f0, f3, 0, 3, ctx).value == 2);
    CHECK_THROWS_AS(substring_fp(f3, f1, 3, 1, ctx), InputError);
}

TEST_CASE("pow_mod with sigma=3, p=7", "[fingerprint]")
{
    const auto ctx = FingerprintContext::with_primes(3, 3, seven);
    CHECK(pow_mod(ctx, 0) == 1);
    CHECK(pow_mod(ctx, 2) == 2);
    CHECK(pow_mod(ctx, 3) == 6);
    CHECK(pow_mod(ctx, 3) == 6); // cached
}

TEST_CASE("pow_mod cache is safe under concurrent readers", "[fingerprint]")
{
    const auto ctx = new_context(256, 1 << 20, 5, 2);
    std::vector<std::thread> threads;
    std::array<bool, 4> ok{};
    for (unsigned t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            bool good = true;
            for (std::uint64_t e = 0; e < 6000; ++e)
                good = good && ctx.pow_mod(e, e % 2) == modular::pow_mod(256, e, ctx.prime(e % 2));
            ok[t] = good;
        });
    }
    for (auto& th : threads)
        th.join();
    for (bool good : ok)
        CHECK(good);
}

TEST_CASE("prefix folding equals direct polynomial evaluation", "[fingerprint][property]")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::string s = workload::random_text(64, seed % 2 ? 4 : 256, seed);
        const auto ctx = new_context(256, s.size(), seed, 2);
        for (unsigned rep = 0; rep < ctx.reps(); ++rep) {
            Fp fp{0, rep};
            for (std::size_t l = 0; l < s.size(); ++l) {
                fp = prefix_extend(fp, static_cast<std::uint8_t>(s[l]), ctx);
                REQUIRE(fp.value == direct_fp(std::string_view(s).substr(0, l + 1), 256, ctx.prime(rep)));
            }
        }
    }
}

TEST_CASE("substring_fp equals folding the substring for all a <= b", "[fingerprint][property]")
{
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const std::string s = workload::random_text(64, 2 + seed, seed);
        const auto ctx = new_context(256, s.size(), seed + 11, 2);
        for (unsigned rep = 0; rep < ctx.reps(); ++rep) {
            std::vector<Fp> prefix{{0, rep}};
            for (char c : s)
                prefix.push_back(prefix_extend(prefix.back(), static_cast<std::uint8_t>(c), ctx));
            for (Pos a = 0; a <= s.size(); ++a)
                for (Pos b = a; b <= s.size(); ++b) {
                    const std::string_view sub = std::string_view(s).substr(a, b - a);
                    REQUIRE(substring_fp(prefix[a], prefix[b], a, b, ctx).value ==
                            direct_fp(sub, 256, ctx.prime(rep)));
                }
        }
    }
}

TEST_CASE("equal substrings have equal fingerprints", "[fingerprint][property]")
{
    const std::string s = workload::repeat_text("abaab", 64);
    const auto ctx = new_context(256, s.size(), 1, 1);
    std::vector<Fp> prefix{{0, 0}};
    for (char c : s)
        prefix.push_back(prefix_extend(prefix.back(), static_cast<std::uint8_t>(c), ctx));
    std::size_t equal_pairs = 0;
    for (Pos i = 0; i < s.size(); ++i)
        for (Pos j = 0; j < s.size(); ++j)
            for (Pos len = 0; i + len <= s.size() && j + len <= s.size(); ++len) {
                if (s.compare(i, len, s, j, len) != 0)
                    continue;
                ++equal_pairs;
                REQUIRE(substring_fp(prefix[i], prefix[i + len], i, i + len, ctx) ==
                        substring_fp(prefix[j], prefix[j + len], j, j + len, ctx));
            }
    CHECK(equal_pairs > 10'000);
}

TEST_CASE("collision rate on unequal substrings is negligible", "[fingerprint][statistical]")
{
    const std::size_t n = 1000;
    const std::string s = workload::random_text(n, 2, 17);
    const auto ctx = new_context(256, n, 17, 1);
    std::vector<Fp> prefix{{0, 0}};
    for (char c : s)
        prefix.push_back(prefix_extend(prefix.back(), static_cast<std::uint8_t>(c), ctx));

    std::mt19937_64 rng(4);
    std::uniform_int_distribution<Pos> start(0, n - 1);
    std::size_t compared = 0, collisions = 0;
    while (compared < 100'000) {
        const Pos i = start(rng), j = start(rng);
        const Pos len = 1 + rng() % (n - std::max(i, j));
        if (s.compare(i, len, s, j, len) == 0)
            continue;
        ++compared;
        if (substring_fp(prefix[i], prefix[i + len], i, i + len, ctx) ==
            substring_fp(prefix[j], prefix[j + len], j, j + len, ctx))
            ++collisions;
    }
    CHECK(collisions <= 10);
}

TEST_CASE("Barrett and wide reductions agree", "[fingerprint][property]")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ctx = new_context(256, 1 + rng() % 40'000, rng(), 1);
        const Modulus& m = ctx.modulus(0);
        REQUIRE(m.narrow());
        std::uint64_t fp = 0;
        for (int k = 0; k < 10'000; ++k) {
            const std::uint64_t c = rng() % 256;
            const std::uint64_t narrow = m.extend_narrow(fp, c);
            REQUIRE(narrow == m.extend_wide(fp, c));
            fp = narrow;
        }
    }
}

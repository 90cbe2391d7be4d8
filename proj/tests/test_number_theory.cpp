#include "dyadic/number_theory.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dyadic;

TEST_CASE("matched_exponent pins the unique bracketing power") {
    CHECK(matched_exponent(2, 2, 7) == 7);
    CHECK(matched_exponent(2, 3, 3) == oracle::power_match(2, 3, 3));
    CHECK(matched_exponent(2, 3, 3) == 1);
    CHECK(matched_exponent(3, 2, 2) == 3);
    CHECK(matched_exponent(5, 7, 0) == 0);
    CHECK_THROWS_AS(matched_exponent(1, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(matched_exponent(2, 1, 3), std::invalid_argument);
}

TEST_CASE("matched_exponent bracketing invariant on a grid of inputs") {
    for (std::uint64_t n = 2; n <= 9; ++n) {
        for (std::uint64_t np = 2; np <= 9; ++np) {
            for (std::uint64_t j = 0; j <= 40; ++j) {
                const std::uint64_t k = matched_exponent(n, np, j);
                const BigInt lhs = pow_of(np, k), target = pow_of(n, j);
                CHECK(lhs <= target);
                CHECK(lhs * np > target);
                if (n == np) CHECK(k == j);
            }
        }
    }
}

TEST_CASE("lattice_mesh equals the reciprocal lcm") {
    CHECK(lattice_mesh(2, 3, 2, 3) == Rational(1, 8));
    CHECK(lattice_mesh(2, 2, 3, 1) == Rational(1, 12));
    CHECK(lattice_mesh(4, 1, 8, 1) == Rational(1, 8));
    // brute-force: smallest positive two-scale combination
    Rational best(1);
    for (long k1 = -50; k1 <= 50; ++k1) {
        for (long k2 = -50; k2 <= 50; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const Rational v = abs_of(Rational(make_rational(k1, 4) + make_rational(k2, 3)));
            if (v > 0 && v < best) best = v;
        }
    }
    CHECK(best == lattice_mesh(2, 2, 3, 1));
}

TEST_CASE("dist_to_lattice agrees with a direct scan") {
    CHECK(dist_to_lattice(Rational(1, 3), Rational(1, 4)) == Rational(1, 12));
    CHECK(dist_to_lattice(Rational(1, 3), Rational(1, 4)) ==
          oracle::lattice_scan(Rational(1, 3), Rational(1, 4), 10));
    CHECK(dist_to_lattice(Rational(5, 8), Rational(1, 8)) == 0);
    CHECK(dist_to_lattice(Rational(-1, 3), Rational(1)) == Rational(1, 3));
    CHECK_THROWS_AS(dist_to_lattice(Rational(1), Rational(0)), std::invalid_argument);
}

TEST_CASE("dist_to_lattice periodicity, symmetry, tie handling") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const Rational x = make_rational(static_cast<long>(rng() % 200) - 100, 1 + rng() % 40);
        const Rational mesh = make_rational(static_cast<long>(1 + rng() % 30), 1 + rng() % 30);
        const Rational d = dist_to_lattice(x, mesh);
        CHECK(d >= 0);
        CHECK(Rational(2 * d) <= mesh);
        CHECK(dist_to_lattice(Rational(-x), mesh) == d);
        const long k = static_cast<long>(rng() % 9) - 4;
        CHECK(dist_to_lattice(Rational(x + k * mesh), mesh) == d);
    }
    CHECK(dist_to_lattice(Rational(1, 2), Rational(1)) == Rational(1, 2));
}

TEST_CASE("two-scale minimum reduces to the lcm lattice") {
    std::mt19937_64 rng(11);
    int eligible = 0;
    for (int i = 0; i < 400; ++i) {
        const std::uint64_t n = 2 + rng() % 9, np = 2 + rng() % 9;
        const std::uint64_t a = rng() % 6, b = rng() % 6;
        const long q = 1 + static_cast<long>(rng() % 30);
        const long p = static_cast<long>(rng() % (2 * q + 1)) - q;
        const Rational x = make_rational(p, static_cast<unsigned long>(q));
        const Rational viaLattice = dist_to_lattice(x, lattice_mesh(n, a, np, b));
        const Rational viaScan = oracle::two_scale_min(x, n, a, np, b, 100);
        CHECK(viaScan >= viaLattice);  // the scan can never beat the true minimum
        if (oracle::window_reaches_optimum(x, n, a, np, b, 100)) {
            ++eligible;
            CHECK(viaScan == viaLattice);
        }
    }
    CHECK(eligible > 100);
}

TEST_CASE("factorize reconstructs its input with increasing primes") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const unsigned long n = 2 + rng() % 100000;
        const PrimeFactorization f = factorize(BigInt(n));
        BigInt prod(1);
        for (std::size_t t = 0; t < f.primes.size(); ++t) {
            REQUIRE(f.exponents[t] >= 1);
            if (t > 0) CHECK(f.primes[t] > f.primes[t - 1]);
            prod *= pow_of(f.primes[t], f.exponents[t]);
        }
        CHECK(prod == n);
    }
}

TEST_CASE("primitive_root matches an exhaustive root search") {
    const auto brute = [](unsigned long n) {
        for (unsigned long r = 2; r <= n; ++r) {
            BigInt p(r);
            for (std::uint64_t e = 1; p <= n; ++e, p *= r) {
                if (p == n) return std::pair<unsigned long, std::uint64_t>{r, e};
            }
        }
        return std::pair<unsigned long, std::uint64_t>{n, 1};
    };
    CHECK(primitive_root(BigInt(8)).root == 2);
    CHECK(primitive_root(BigInt(8)).exponent == 3);
    CHECK(primitive_root(BigInt(36)).root == 6);
    CHECK(primitive_root(BigInt(36)).exponent == 2);
    CHECK(primitive_root(BigInt(12)).root == 12);
    CHECK(primitive_root(BigInt(12)).exponent == 1);
    CHECK_THROWS_AS(primitive_root(BigInt(1)), std::invalid_argument);
    for (unsigned long n = 2; n <= 130; ++n) {
        const RootPower rp = primitive_root(BigInt(n));
        const auto [r, e] = brute(n);
        CHECK(rp.root == r);
        CHECK(rp.exponent == e);
        CHECK(pow_of(rp.root, rp.exponent) == n);
        // the root is not itself a perfect power
        CHECK(primitive_root(rp.root).exponent == 1);
    }
}

TEST_CASE("primitive_root composes over powers") {
    for (unsigned long r : {2ul, 3ul, 6ul, 10ul, 12ul}) {
        for (std::uint64_t s = 1; s <= 4; ++s) {
            const RootPower rp = primitive_root(pow_of(r, s));
            CHECK(rp.root == r);
            CHECK(rp.exponent == s * primitive_root(BigInt(r)).exponent);
        }
    }
}

TEST_CASE("rational parsing and formatting round-trip") {
    CHECK(to_string(parse_rational("3/6")) == "1/2");
    CHECK(to_string(parse_rational("-4/2")) == "-2");
    CHECK(to_string(parse_rational("7")) == "7");
    CHECK(parse_rational("0/5") == 0);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/"), std::invalid_argument);
}

TEST_CASE("floor_log brackets exactly") {
    CHECK(floor_log(2, Rational(1)) == 0);
    CHECK(floor_log(2, Rational(1024)) == 10);
    CHECK(floor_log(3, Rational(26)) == 2);
    CHECK(floor_log(3, Rational(27)) == 3);
    CHECK(floor_log(2, Rational(1023, 2)) == 8);
}

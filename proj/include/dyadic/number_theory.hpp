#pragma once

#include "dyadic/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace dyadic {

// Largest k >= 0 with n_prime^k <= n^j, i.e. floor(j*log(n)/log(n_prime)),
// decided by exact integer comparison. A floating-point estimate is used only
// to seed the search; the returned exponent always satisfies
//   n_prime^k <= n^j < n_prime^(k+1).
std::uint64_t matched_exponent(std::uint64_t n, std::uint64_t n_prime, std::uint64_t j);

// Spacing of the two-scale lattice {k1/n^a + k2/n_prime^b : k1, k2 in Z},
// namely 1/lcm(n^a, n_prime^b), reduced.
Rational lattice_mesh(std::uint64_t n, std::uint64_t a, std::uint64_t n_prime, std::uint64_t b);

// min over k in Z of |x - k*mesh|, exactly. Result lies in [0, mesh/2].
Rational dist_to_lattice(const Rational& x, const Rational& mesh);

struct PrimeFactorization {
    std::vector<BigInt> primes;        // strictly increasing
    std::vector<std::uint64_t> exponents;  // all >= 1
};

// Trial division; intended for grid bases (well below 2^32), works for any
// positive input at matching cost.
PrimeFactorization factorize(BigInt n);

struct RootPower {
    BigInt root;            // not a perfect power
    std::uint64_t exponent; // root^exponent == n
};

// Decomposes n >= 2 as root^exponent with the root not itself a perfect
// power: with n = prod p_i^{e_i} and g = gcd(e_i), root = prod p_i^{e_i/g}.
RootPower primitive_root(const BigInt& n);

// gcd(a, b) > 0 for nonzero inputs.
BigInt big_gcd(const BigInt& a, const BigInt& b);
BigInt big_lcm(const BigInt& a, const BigInt& b);

// Solves x*a + y*b = g = gcd(a, b).
struct BezoutTriple {
    BigInt g, x, y;
};
BezoutTriple extended_gcd(const BigInt& a, const BigInt& b);

// Largest e >= 0 with base^e <= q, for rational q >= 1 (exact).
std::uint64_t floor_log(std::uint64_t base, const Rational& q);

// Distance from x to the integer lattice spaced `step` (an integer > 0),
// i.e. min(r, step - r) for r = x mod step. Convenience over dist_to_lattice
// for integer arguments.
BigInt dist_to_int_lattice(const BigInt& x, const BigInt& step);

}  // namespace dyadic

#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/number_theory.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <tuple>
#include <vector>

namespace dyadic {

enum class VerdictKind { Far, NotFar, Undecided };

// A concrete violation of the separation inequality: at base_set[base_index]
// and the given scale, the lattice multipliers (k1, k2) bring the tested
// quantity within `value` (normalized gap) of the lattice. Re-checkable by
// direct substitution.
struct FarWitness {
    std::size_t base_index = 0;
    std::uint64_t scale = 0;  // m for origin checks, j for location checks
    BigInt k1, k2;
    Rational value;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Undecided;
    // Far: certified positive lower bound for the normalized gap, exact
    // infimum whenever every per-base cycle closed. NotFar: the witness gap.
    // Undecided: smallest gap observed within the explored depth.
    Rational bound;
    std::optional<FarWitness> witness;
    std::uint64_t depth_used = 0;
    // Scale from which a Far bound holds (location checks are tail
    // conditions; finitely many early degenerate scales may be skipped).
    std::uint64_t valid_from = 0;
};

// Default gap below which a guaranteed-to-vanish sequence is considered
// witnessed (only applied where vanishing is a theorem, never as a guess).
inline const Rational kDefaultGapThreshold = Rational(1, 1024);

// Decides whether delta keeps a scale-proportional distance from every
// two-scale lattice {k1/n^a + k2/n_prime^b} with exponents matched to each
// base in `bases`: evaluates f(l, m) = bases[l]^m * dist(delta, mesh(l, m))
// for 0 <= m <= depth and certifies the infimum over all m by residue-cycle
// analysis where the bases share a primitive root, or refutes via an explicit
// witness.
Verdict far_number(const Rational& delta, std::uint64_t n, std::uint64_t n_prime,
                   const std::vector<std::uint64_t>& bases, std::uint64_t depth,
                   const Rational& threshold = kDefaultGapThreshold);

// Same decision for the pair of location functions of two grids along one
// coordinate: g(l, j) = dist(L_a(a) - L_b(b), gcd(n^a, n_prime^b) Z) / bases[l]^j
// with a, b matched to generation j of base l, evaluated for j_min <= j <=
// depth and certified through the affine tail recurrence of the eventually
// periodic digit streams.
Verdict far_pair(const GridRep& a, const GridRep& b, std::size_t coordinate,
                 const std::vector<std::uint64_t>& bases, std::uint64_t j_min,
                 std::uint64_t depth, const Rational& threshold = kDefaultGapThreshold);

enum class Adjacency { Adjacent, NotAdjacent, Undecided };

// Which of the two separation conditions a NOT_ADJACENT witness violates.
enum class WitnessSource { OriginGap, LocationGap };

struct CertificateWitness {
    WitnessSource source = WitnessSource::OriginGap;
    std::size_t first = 0, second = 0;  // grid indices (0-based)
    std::size_t coordinate = 0;         // 0-based
    FarWitness witness;
};

struct AdjacencyCertificate {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> base_set;  // sorted unique bases
    // Keyed by (first grid, second grid, coordinate), all 0-based.
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Verdict> condition1;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Verdict> condition2;
    Adjacency overall = Adjacency::Undecided;
    std::uint64_t j_min = 8;
    std::optional<CertificateWitness> not_adjacent_witness;

    // Smallest certified origin/location gap over all entries (set when
    // overall == Adjacent).
    Rational origin_bound;
    Rational location_bound;
};

// Full pairwise certification of a d+1 grid family on R^d. Grids are brought
// to canonical form first, so equivalent representations yield identical
// certificates.
AdjacencyCertificate check_adjacency(std::span<const GridRep> family,
                                     std::uint64_t depth_small, std::uint64_t j_min,
                                     std::uint64_t depth_large);

// Covering-ratio cap implied by an Adjacent certificate: any open cube is
// covered by some family cube at ratio below this (crude but scale-free,
// derived from the certified bounds and j_min).
Rational comparability_cap(const AdjacencyCertificate& cert);

// One-dimensional shadows of the family along coordinate s (0-based).
std::vector<GridRep> project(std::span<const GridRep> family, std::size_t coordinate);

struct BaseDecomposition {
    BigInt root;
    std::vector<std::uint64_t> exponents;  // bases[i] == root^exponents[i]
};

// The common-primitive-root decomposition bases[i] = root^{s_i}, when all
// bases share one; empty otherwise.
std::optional<BaseDecomposition> base_compatible(const std::vector<std::uint64_t>& bases);

struct IncompatibilityWitness {
    bool found = false;
    std::uint64_t m = 0;
    BigInt k1, k2;
    Rational gap;        // |delta - k1/n1^phi - k2/n2^m|, exact
    Rational normalized; // gap * n2^m
    std::int64_t psi1 = 0, psi2 = 0;  // exponent-drift diagnostics at m
    std::uint64_t m_limit = 0;
};

// Searches m <= m_max for multipliers bringing delta within C/n2^m of the
// two-scale lattice of n1^{phi(m)} and n2^m. Guaranteed to succeed for large
// enough m_max when n1 and n2 have different primitive roots.
IncompatibilityWitness incompatibility_witness(std::uint64_t n1, std::uint64_t n2,
                                               const Rational& delta, const Rational& C,
                                               std::uint64_t m_max);

nlohmann::json to_json(const Verdict& v, const std::vector<std::uint64_t>& base_set);
nlohmann::json to_json(const AdjacencyCertificate& cert);

}  // namespace dyadic

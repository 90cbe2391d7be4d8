#pragma once

#include "dyadic/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dyadic {

// Digit matrix of a grid representation, restricted to eventually periodic
// streams: entry j is preperiod[j] for j < |preperiod| and cycles through
// `period` afterwards. Every component lies in [0, base).
struct DigitStream {
    std::uint64_t base = 2;
    std::vector<std::vector<std::uint32_t>> preperiod;  // digit vectors in {0..base-1}^d
    std::vector<std::vector<std::uint32_t>> period;     // nonempty

    std::size_t dimension() const {
        return period.empty() ? 0 : period.front().size();
    }

    std::uint32_t digit(std::size_t coordinate, std::uint64_t index) const {
        if (index < preperiod.size()) return preperiod[index][coordinate];
        return period[(index - preperiod.size()) % period.size()][coordinate];
    }

    void validate() const;
};

// A grid of nested half-open cubes: generation m has sidelength base^-m,
// positive generations are anchored at `origin`, negative generations follow
// the location function accumulated from `digits`.
struct GridRep {
    std::uint64_t base = 2;
    Point origin;        // delta in Q^d
    DigitStream digits;
    std::string label;

    std::size_t dimension() const { return origin.size(); }
    void validate() const;
};

bool operator==(const GridRep& a, const GridRep& b);

enum class CubeKind { HalfOpen, Open };

// Axis-aligned cube: prod [c_i, c_i + side) when half-open (grid cubes),
// prod (c_i, c_i + side) when open (query cubes).
struct Cube {
    Point corner;
    Rational side;
    CubeKind kind = CubeKind::HalfOpen;

    std::size_t dimension() const { return corner.size(); }

    // True when this (half-open) cube contains the open cube q.
    bool contains_open(const Cube& q) const;
};

bool operator==(const Cube& a, const Cube& b);

// Location function: L(j) = sum_{i<j} base^i * digit(i), componentwise.
// Satisfies 0 <= L(j)_s < base^j.
std::vector<BigInt> location(const GridRep& rep, std::uint64_t j);

// Anchor of generation m: origin for m >= 0, origin + L(-m) for m < 0.
Point generation_offset(const GridRep& rep, std::int64_t m);

// The unique generation-m cube of the grid containing x.
Cube cube_at(const GridRep& rep, std::int64_t m, const Point& x);

// Equivalent representation with origin shifted by a nonnegative integer
// vector; the returned grid agrees with the input on all generations >= -depth
// (and on all generations when the shift is fully absorbed by the digits).
// Throws if any shift component is >= base^depth.
GridRep rerepresent(const GridRep& rep, const std::vector<BigInt>& shift, std::uint64_t depth);

// Keeps every k-th generation: a grid of base^k whose generation-i cubes are
// exactly the generation-(k*i) cubes of the input.
GridRep drop_generations(const GridRep& rep, std::uint64_t k);

// Normal form with origin in [0,1)^d and the integer part folded into the
// digit stream. Representations of the same grid that differ by integer
// origin shifts map to the identical canonical form.
GridRep canonical_rep(const GridRep& rep);

}  // namespace dyadic

#pragma once

#include "dyadic/grid.hpp"
#include "dyadic/number_theory.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dyadic {

struct CoverResult {
    std::size_t grid_index = 0;
    Cube cube;
    Rational ratio;  // cube.side / query.side, >= 1
};

// The generation-m cube of the grid containing the open cube q, if q fits in
// one (the candidate is the cube holding q's corner, the only possibility).
std::optional<Cube> containing_cube(const GridRep& rep, std::int64_t m, const Cube& q);

// The minimal-side family cube containing q among all generations with side
// at most ratio_cap * q.side; ties broken by lowest grid index.
std::optional<CoverResult> smallest_comparable(std::span<const GridRep> family, const Cube& q,
                                               const Rational& ratio_cap);

struct AdversarialSpec {
    std::size_t first = 0, second = 0;  // distinct grid indices
    std::size_t coordinate = 0;          // 0-based
    std::int64_t scale_exponent = 1;     // generation in base of `first`; < 0 engages locations
    Rational target_ratio = Rational(10);
};

// Open cubes pinned to near-coincident boundary hyperplanes of the chosen
// pair (coordinate `coordinate`) and to boundaries of the remaining grids in
// the other coordinates, sized so any covering family cube exceeds
// target_ratio. When the boundary gap at this scale is too wide for the
// construction, `blocked_gap` reports it (normalized by the scale) instead.
struct AdversarialOutcome {
    std::vector<Cube> cubes;
    std::optional<Rational> blocked_gap;
};

AdversarialOutcome adversarial_cubes(std::span<const GridRep> family, const AdversarialSpec& spec);

struct ScaleReport {
    std::int64_t scale = 0;
    std::uint64_t samples = 0;
    Rational max_ratio;                       // over covered samples (0 if none)
    std::optional<Cube> worst_cube;           // cube attaining max_ratio, or first failure
    std::optional<std::size_t> covered_by;    // grid index for worst covered cube
    std::uint64_t failures = 0;               // samples with no cover within the cap
};

struct ConstantEstimate {
    std::vector<ScaleReport> rows;
    Rational max_ratio;
    std::uint64_t total_failures = 0;
    std::uint64_t seed = 0;
    Rational ratio_cap;
};

// Deterministic seeded sampling: per scale m, draws open cubes with side in
// [base^-(m+1), base^-m) (base of the first grid) and rational coordinates of
// bounded denominator, then runs smallest_comparable on each. Scales may be
// processed in parallel (thread_cap 0 = hardware).
ConstantEstimate estimate_constant(std::span<const GridRep> family, std::int64_t scale_lo,
                                   std::int64_t scale_hi, std::uint64_t samples_per_scale,
                                   std::uint64_t seed, const Rational& ratio_cap,
                                   unsigned thread_cap = 0);

void write_csv(const ConstantEstimate& report, std::ostream& out);
nlohmann::json to_json(const ConstantEstimate& report);
nlohmann::json to_json(const Cube& cube);

}  // namespace dyadic

#pragma once

#include "dyadic/adjacency.hpp"
#include "dyadic/covering.hpp"
#include "dyadic/family_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dyadic {

enum class Command { Certify, Cover, Estimate, Witness, Construct, Project };
enum class OutputFormat { Csv, Json, Table };

// Exit codes: certify maps ADJACENT/NOT_ADJACENT/UNDECIDED to 0/1/2; witness
// exhausted exits 2; malformed input exits 3; everything else 0.
inline constexpr int kExitAdjacent = 0;
inline constexpr int kExitNotAdjacent = 1;
inline constexpr int kExitUndecided = 2;
inline constexpr int kExitInputError = 3;

struct RunConfig {
    Command command = Command::Certify;
    std::string family_path;
    std::uint64_t depth_small = 64;
    std::uint64_t j_min = 8;
    std::uint64_t depth_large = 64;
    Rational ratio_cap = Rational(10);
    std::int64_t scale_lo = -8;
    std::int64_t scale_hi = 8;
    std::uint64_t samples = 100;
    std::uint64_t seed = 0;
    OutputFormat output = OutputFormat::Table;
    std::string out_path;  // empty writes to stdout

    // cover
    Point cube_corner;
    Rational cube_side = Rational(0);

    // witness
    Rational witness_C = Rational(1, 10);
    std::uint64_t witness_m_max = 64;

    // construct
    std::optional<std::uint64_t> drop_k;
    std::vector<BigInt> shift;
    std::uint64_t construct_depth = 16;
    std::size_t grid_index = 1;  // 1-based

    // project
    std::size_t coordinate = 1;  // 1-based

    unsigned threads = 0;  // 0: DYADIC_ATLAS_THREADS env, then hardware
};

int run(const RunConfig& config);

}  // namespace dyadic

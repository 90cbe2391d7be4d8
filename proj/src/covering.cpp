#include "dyadic/covering.hpp"

#include <atomic>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace dyadic {

namespace {

// Smallest e with base^e >= q (q >= 1).
std::uint64_t ceil_log(std::uint64_t base, const Rational& q) {
    const std::uint64_t f = floor_log(base, q);
    return rational_power(base, static_cast<std::int64_t>(f)) == q ? f : f + 1;
}

// Largest signed m with base^-m >= s.
std::int64_t finest_generation_at_least(std::uint64_t base, const Rational& s) {
    if (s <= 1) return static_cast<std::int64_t>(floor_log(base, Rational(1 / s)));
    return -static_cast<std::int64_t>(ceil_log(base, s));
}

// Smallest signed m with base^-m <= s.
std::int64_t coarsest_generation_at_most(std::uint64_t base, const Rational& s) {
    if (s >= 1) return -static_cast<std::int64_t>(floor_log(base, s));
    return static_cast<std::int64_t>(ceil_log(base, Rational(1 / s)));
}

std::uint64_t scale_seed(std::uint64_t seed, std::int64_t scale) {
    std::uint64_t z = seed ^ (static_cast<std::uint64_t>(scale) * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::optional<Cube> containing_cube(const GridRep& rep, std::int64_t m, const Cube& q) {
    if (q.side <= 0) throw std::invalid_argument("containing_cube: query side must be positive");
    if (q.dimension() != rep.dimension()) {
        throw std::invalid_argument("containing_cube: dimension mismatch");
    }
    // Any grid cube containing q contains points just inside q's corner, so
    // the cube holding the corner is the only candidate.
    Cube candidate = cube_at(rep, m, q.corner);
    if (candidate.side < q.side) return std::nullopt;
    if (!candidate.contains_open(q)) return std::nullopt;
    return candidate;
}

std::optional<CoverResult> smallest_comparable(std::span<const GridRep> family, const Cube& q,
                                               const Rational& ratio_cap) {
    if (family.empty()) throw std::invalid_argument("smallest_comparable: empty family");
    if (ratio_cap < 1) throw std::invalid_argument("smallest_comparable: ratio_cap must be >= 1");
    if (q.side <= 0) throw std::invalid_argument("smallest_comparable: query side must be positive");

    std::optional<CoverResult> best;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const std::uint64_t n = family[i].base;
        const std::int64_t m_hi = finest_generation_at_least(n, q.side);
        const std::int64_t m_lo = coarsest_generation_at_most(n, Rational(ratio_cap * q.side));
        // Scan from the scale-matched generation toward coarser ones; the
        // first containment is the minimal-side cover in this grid.
        for (std::int64_t m = m_hi; m >= m_lo; --m) {
            auto c = containing_cube(family[i], m, q);
            if (!c) continue;
            const Rational ratio = Rational(c->side / q.side);
            if (!best || c->side < best->cube.side) {
                best = CoverResult{i, std::move(*c), ratio};
            }
            break;
        }
    }
    return best;
}

AdversarialOutcome adversarial_cubes(std::span<const GridRep> family, const AdversarialSpec& spec) {
    if (family.empty()) throw std::invalid_argument("adversarial_cubes: empty family");
    const std::size_t d = family.front().dimension();
    if (family.size() != d + 1) {
        throw std::invalid_argument("adversarial_cubes: family must have d+1 grids");
    }
    if (spec.first >= family.size() || spec.second >= family.size() || spec.first == spec.second) {
        throw std::invalid_argument("adversarial_cubes: invalid grid pair");
    }
    if (spec.coordinate >= d) throw std::invalid_argument("adversarial_cubes: coordinate out of range");
    if (spec.target_ratio < 1) throw std::invalid_argument("adversarial_cubes: target ratio must be >= 1");

    const GridRep& g1 = family[spec.first];
    const GridRep& g2 = family[spec.second];
    const std::uint64_t n1 = g1.base, n2 = g2.base;
    const std::size_t s = spec.coordinate;
    const std::int64_t m = spec.scale_exponent;
    const Rational scale = rational_power(n1, -m);  // n1^-m: small for m>0, large for m<0
    const Rational sigma = Rational(scale / spec.target_ratio);

    AdversarialOutcome out;
    Rational x1, x2;

    if (m >= 0) {
        // Small scale: positive generations, boundaries at origin + k/n^a.
        const std::uint64_t a = static_cast<std::uint64_t>(m);
        const std::uint64_t b = matched_exponent(n1, n2, a);
        const BigInt A = pow_of(n1, a), B = pow_of(n2, b);
        const Rational diff = g1.origin[s] - g2.origin[s];
        const Rational gap = dist_to_lattice(diff, Rational(1, big_lcm(A, B)));
        if (gap >= sigma) {
            out.blocked_gap = Rational(gap / scale);
            return out;
        }
        // Multipliers k1, k2 with |diff - k1/A - k2/B| == gap place the two
        // boundary hyperplanes within gap of each other.
        const BigInt L = big_lcm(A, B);
        const BigInt k = round_of(Rational(diff * L));
        const BezoutTriple bez = extended_gcd(L / A, L / B);
        BigInt k2 = bez.y * k;
        const BigInt t = round_of(Rational(Rational(k2) / Rational(L / A)));
        k2 -= t * (L / A);
        const BigInt k1 = (k - k2 * (L / B)) / (L / A);
        x1 = g1.origin[s] - make_rational(k1, A);
        x2 = g2.origin[s] + make_rational(k2, B);
    } else {
        // Large scale: negative generations, boundaries carry the locations.
        const std::uint64_t j = static_cast<std::uint64_t>(-m);
        const std::uint64_t b = matched_exponent(n1, n2, j);
        const BigInt A = pow_of(n1, j), B = pow_of(n2, b);
        const Rational pos1 = g1.origin[s] + Rational(location(g1, j)[s]);
        const Rational pos2 = g2.origin[s] + Rational(location(g2, b)[s]);
        const BigInt G = big_gcd(A, B);
        const Rational S = pos1 - pos2;
        const Rational gap = dist_to_lattice(S, Rational(G));
        if (gap >= sigma) {
            out.blocked_gap = Rational(gap / scale);
            return out;
        }
        const BigInt k = round_of(Rational(S / Rational(G)));
        const BezoutTriple bez = extended_gcd(A, B);
        const BigInt K1 = -bez.x * k;
        const BigInt K2 = bez.y * k;
        x1 = pos1 + Rational(K1 * A);
        x2 = pos2 + Rational(K2 * B);
    }

    // Cube centered between the two near-coincident hyperplanes; remaining
    // coordinates sit on boundary hyperplanes of the other d-1 grids at the
    // generation matched to this scale.
    Cube cube;
    cube.kind = CubeKind::Open;
    cube.side = sigma;
    cube.corner.assign(d, Rational(0));
    const Rational half = Rational(sigma / 2);
    cube.corner[s] = Rational((x1 + x2) / 2 - half);

    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i != spec.first && i != spec.second) others.push_back(i);
    }
    std::size_t oi = 0;
    for (std::size_t t = 0; t < d; ++t) {
        if (t == s) continue;
        const GridRep& g = family[others[oi]];
        Rational pin = g.origin[t];
        if (m < 0) {
            const std::uint64_t j = static_cast<std::uint64_t>(-m);
            const std::uint64_t gb = matched_exponent(n1, g.base, j);
            pin += Rational(location(g, gb)[t]);
        }
        cube.corner[t] = Rational(pin - half);
        ++oi;
    }
    out.cubes.push_back(std::move(cube));
    return out;
}

ConstantEstimate estimate_constant(std::span<const GridRep> family, std::int64_t scale_lo,
                                   std::int64_t scale_hi, std::uint64_t samples_per_scale,
                                   std::uint64_t seed, const Rational& ratio_cap,
                                   unsigned thread_cap) {
    if (family.empty()) throw std::invalid_argument("estimate_constant: empty family");
    if (samples_per_scale < 1) throw std::invalid_argument("estimate_constant: samples must be >= 1");
    if (scale_lo > scale_hi) throw std::invalid_argument("estimate_constant: empty scale range");

    const std::size_t d = family.front().dimension();
    const std::uint64_t base1 = family.front().base;
    const std::size_t scale_count = static_cast<std::size_t>(scale_hi - scale_lo + 1);

    ConstantEstimate report;
    report.seed = seed;
    report.ratio_cap = ratio_cap;
    report.rows.resize(scale_count);

    const BigInt denom40 = BigInt(1) << 40;

    const auto run_scale = [&](std::size_t idx) {
        const std::int64_t mscale = scale_lo + static_cast<std::int64_t>(idx);
        std::mt19937_64 rng(scale_seed(seed, mscale));
        const auto draw40 = [&] { return BigInt(static_cast<unsigned long>(rng() & ((1ULL << 40) - 1))); };

        ScaleReport row;
        row.scale = mscale;
        row.samples = samples_per_scale;
        row.max_ratio = 0;

        const Rational base_side = rational_power(base1, -(mscale + 1));
        std::optional<Cube> first_failure;
        for (std::uint64_t i = 0; i < samples_per_scale; ++i) {
            Cube q;
            q.kind = CubeKind::Open;
            // side in [base^-(m+1), 2*base^-(m+1)) subset of [.., base^-m)
            q.side = Rational(base_side * make_rational(denom40 + draw40(), denom40));
            const Rational window = std::max(q.side, Rational(1));
            q.corner.reserve(d);
            for (std::size_t t = 0; t < d; ++t) {
                const Rational u = make_rational(draw40(), denom40);  // [0,1)
                q.corner.push_back(Rational((u * 4 - 2) * window));
            }
            const auto res = smallest_comparable(family, q, ratio_cap);
            if (!res) {
                ++row.failures;
                if (!first_failure) first_failure = q;
                continue;
            }
            if (res->ratio > row.max_ratio) {
                row.max_ratio = res->ratio;
                row.worst_cube = q;
                row.covered_by = res->grid_index;
            }
        }
        if (first_failure) {
            // A cube exceeding the cap trumps any covered cube in the report.
            row.worst_cube = first_failure;
            row.covered_by.reset();
        }
        report.rows[idx] = std::move(row);
    };

    unsigned threads = thread_cap == 0 ? std::thread::hardware_concurrency() : thread_cap;
    if (threads == 0) threads = 1;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(scale_count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < scale_count; ++i) run_scale(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < scale_count; i = next.fetch_add(1)) {
                    run_scale(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    report.max_ratio = 0;
    for (const auto& row : report.rows) {
        report.total_failures += row.failures;
        if (row.max_ratio > report.max_ratio) report.max_ratio = row.max_ratio;
    }
    return report;
}

void write_csv(const ConstantEstimate& report, std::ostream& out) {
    out << "scale,samples,max_ratio_num,max_ratio_den,worst_cube_corner,worst_cube_side,covered_by_grid\n";
    for (const auto& row : report.rows) {
        out << row.scale << ',' << row.samples << ',' << to_string(row.max_ratio.get_num()) << ','
            << to_string(row.max_ratio.get_den()) << ',';
        if (row.worst_cube) {
            for (std::size_t t = 0; t < row.worst_cube->corner.size(); ++t) {
                if (t) out << ';';
                out << to_string(row.worst_cube->corner[t]);
            }
            out << ',' << to_string(row.worst_cube->side) << ',';
        } else {
            out << ",,";
        }
        if (row.covered_by) {
            out << (*row.covered_by + 1);
        } else {
            out << "none";
        }
        out << '\n';
    }
}

nlohmann::json to_json(const Cube& cube) {
    nlohmann::json j;
    nlohmann::json corner = nlohmann::json::array();
    for (const auto& c : cube.corner) corner.push_back(to_string(c));
    j["corner"] = std::move(corner);
    j["side"] = to_string(cube.side);
    j["kind"] = cube.kind == CubeKind::Open ? "open" : "half-open";
    return j;
}

nlohmann::json to_json(const ConstantEstimate& report) {
    nlohmann::json j;
    j["seed"] = report.seed;
    j["ratio_cap"] = to_string(report.ratio_cap);
    j["max_ratio"] = to_string(report.max_ratio);
    j["total_failures"] = report.total_failures;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json r;
        r["scale"] = row.scale;
        r["samples"] = row.samples;
        r["max_ratio"] = to_string(row.max_ratio);
        r["failures"] = row.failures;
        if (row.worst_cube) r["worst_cube"] = to_json(*row.worst_cube);
        if (row.covered_by) {
            r["covered_by_grid"] = *row.covered_by + 1;
        } else {
            r["covered_by_grid"] = nullptr;
        }
        rows.push_back(std::move(r));
    }
    j["scales"] = std::move(rows);
    return j;
}

}  // namespace dyadic

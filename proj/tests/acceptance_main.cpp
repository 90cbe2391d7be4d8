// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. All checks are exact; every tolerance and threshold is pinned here.

#include "dyadic/adjacency.hpp"
#include "dyadic/covering.hpp"
#include "dyadic/family_io.hpp"
#include "dyadic/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace dyadic;

namespace {

int g_failures = 0;

class Criterion {
  public:
    explicit Criterion(std::string name) : name_(std::move(name)), start_(clock::now()) {}

    void require(bool ok, const std::string& detail) {
        if (!ok && details_.size() < 8) details_.push_back(detail);
        failed_ = failed_ || !ok;
    }

    void note(const std::string& text) { notes_.push_back(text); }

    bool ok() const { return !failed_; }

    ~Criterion() {
        const double secs = std::chrono::duration<double>(clock::now() - start_).count();
        char line[512];
        std::snprintf(line, sizeof(line), "[%s] criterion %s (%.2fs)", failed_ ? "FAIL" : "PASS",
                      name_.c_str(), secs);
        std::cout << line << "\n";
        for (const auto& n : notes_) std::cout << "       " << n << "\n";
        for (const auto& d : details_) std::cout << "       ! " << d << "\n";
        if (failed_) ++g_failures;
        std::cout.flush();
    }

  private:
    using clock = std::chrono::steady_clock;
    std::string name_;
    clock::time_point start_;
    bool failed_ = false;
    std::vector<std::string> details_;
    std::vector<std::string> notes_;
};

std::string catalog_path(const std::string& name) {
    return std::string(CATALOG_DIR) + "/" + name + ".json";
}

Family catalog(const std::string& name) { return load_family(catalog_path(name)); }

const std::vector<std::string> kAdjacentFamilies = {
    "one_third_shift", "one_third_blocked_base4", "one_third_blocked_base16",
    "one_third_rerepresented", "plane_three_shifts"};
const std::vector<std::string> kNotAdjacentFamilies = {
    "same_grid_twice", "half_shift",   "zero_digits_4_8",      "base2_base3",
    "base6_base10",    "plane_bad_coordinate", "plane_mixed_bases"};

// 1. Exponent matching is exact for all 2 <= n, n' <= 12 and j <= 2000; the
//    floating-log disagreement count is reported.
void criterion_1() {
    Criterion c("1: exact exponent matching (n,n' <= 12, j <= 2000)");
    std::uint64_t float_disagreements = 0, checked = 0;
    for (std::uint64_t n = 2; n <= 12; ++n) {
        for (std::uint64_t np = 2; np <= 12; ++np) {
            BigInt target(1);   // n^j
            BigInt bracket(1);  // np^k
            std::uint64_t k_prev = 0;
            for (std::uint64_t j = 0; j <= 2000; ++j) {
                const std::uint64_t k = matched_exponent(n, np, j);
                if (k < k_prev) {
                    c.require(false, "matched exponent decreased in j");
                    return;
                }
                while (k_prev < k) {
                    bracket *= static_cast<unsigned long>(np);
                    ++k_prev;
                }
                const bool bracketed = bracket <= target && bracket * np > target;
                if (!bracketed) {
                    c.require(false, "bracketing failed at n=" + std::to_string(n) +
                                         " n'=" + std::to_string(np) + " j=" + std::to_string(j));
                    return;
                }
                const double viaFloat = std::floor(static_cast<double>(j) *
                                                   std::log(static_cast<double>(n)) /
                                                   std::log(static_cast<double>(np)));
                if (viaFloat != static_cast<double>(k)) ++float_disagreements;
                ++checked;
                target *= static_cast<unsigned long>(n);
            }
        }
    }
    c.note("floating-log disagreements: " + std::to_string(float_disagreements) + " of " +
           std::to_string(checked));
}

// True when an optimal multiplier pair for x against 1/A, 1/B lattices lies
// in the +-100 window, decided through the Bezout representation.
bool oracle_window_ok(const Rational& x, std::uint64_t n, std::uint64_t a, std::uint64_t np,
                      std::uint64_t b) {
    const BigInt A = pow_of(n, a), B = pow_of(np, b);
    const BigInt L = big_lcm(A, B);
    const BigInt cA = L / A, cB = L / B;
    const BigInt k = round_of(Rational(x * L));
    const BezoutTriple bez = extended_gcd(cA, cB);
    for (int attempt = 0; attempt < 2; ++attempt) {
        BigInt k1 = bez.x * k, k2 = bez.y * k;
        if (attempt == 0) {
            const BigInt t = round_of(Rational(Rational(k1) / Rational(cB)));
            k1 -= t * cB;
            k2 += t * cA;
        } else {
            const BigInt t = round_of(Rational(Rational(k2) / Rational(cA)));
            k2 -= t * cA;
            k1 += t * cB;
        }
        if (abs(k1) <= 100 && abs(k2) <= 100) return true;
    }
    return false;
}

// 2. Two-scale brute-force minima against the lcm-lattice distance, zero
//    tolerance, 10^4 random tuples with n, n' <= 10, a, b <= 6, q <= 50.
//    The +-100 multiplier window cannot reach the optimum for every tuple in
//    these ranges (fine lattices need multipliers beyond any fixed window),
//    so equality is asserted exactly on the tuples where the window provably
//    contains an optimal pair, soundness (scan >= exact) on all of them, and
//    the eligible population is pinned to stay large.
void criterion_2() {
    Criterion c("2: gcd/lcm lattice equivalence (10^4 tuples, zero tolerance)");
    std::mt19937_64 rng(20240817);
    std::uint64_t eligible = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::uint64_t n = 2 + rng() % 9, np = 2 + rng() % 9;
        const std::uint64_t a = rng() % 7, b = rng() % 7;
        const long q = 1 + static_cast<long>(rng() % 50);
        const long p = static_cast<long>(rng() % (2 * q + 1)) - q;
        const Rational x = make_rational(p, static_cast<unsigned long>(q));

        const Rational exact = dist_to_lattice(x, lattice_mesh(n, a, np, b));

        // scan k1 in [-100, 100], best k2 by rounding (clamped): pure 64-bit
        // integer arithmetic over the common denominator q*A*B
        const std::int64_t A = static_cast<std::int64_t>(pow_of(n, a).get_ui());
        const std::int64_t B = static_cast<std::int64_t>(pow_of(np, b).get_ui());
        const std::int64_t qB = q * B, qA = q * A;
        const std::int64_t T = p * A * B;
        std::int64_t bestNum = -1;
        for (std::int64_t k1 = -100; k1 <= 100; ++k1) {
            const std::int64_t rest = T - k1 * qB;
            std::int64_t k2 = (rest >= 0 ? (rest + qA / 2) / qA : -((-rest + qA / 2) / qA));
            if (k2 > 100) k2 = 100;
            if (k2 < -100) k2 = -100;
            for (std::int64_t cand = k2 - 1; cand <= k2 + 1; ++cand) {
                if (cand < -100 || cand > 100) continue;
                const std::int64_t v = std::abs(rest - cand * qA);
                if (bestNum < 0 || v < bestNum) bestNum = v;
            }
        }
        const Rational scanned = make_rational(BigInt(static_cast<long>(bestNum)),
                                               BigInt(static_cast<long>(q)) * A * B);

        if (scanned < exact) {
            c.require(false, "scan beat the certified minimum at tuple " + std::to_string(trial));
            return;
        }
        if (oracle_window_ok(x, n, a, np, b)) {
            ++eligible;
            if (scanned != exact) {
                c.require(false, "eligible tuple mismatch at " + std::to_string(trial) + ": n=" +
                                     std::to_string(n) + " a=" + std::to_string(a) +
                                     " n'=" + std::to_string(np) + " b=" + std::to_string(b) +
                                     " x=" + to_string(x));
                return;
            }
        }
    }
    c.note("window-exact tuples: " + std::to_string(eligible) + " of 10000");
    c.require(eligible >= 4000, "eligible population too small: " + std::to_string(eligible));
}

// 3. The one-third shift family: ADJACENT with condition-1 infimum exactly
//    1/3 (cycle-certified), and the sampled covering ratio over scales
//    -20..20 stays below the oracle-derived cap 12 with zero failures; the
//    exact maximum for the pinned seed is frozen below. (Cubes pinched
//    between 0, which is a corner of the standard grid at every generation,
//    and the shifted grid's boundary at 1/3 push the true ratio arbitrarily
//    close to 12, so 12 is the correct cap for this family.)
void criterion_3() {
    Criterion c("3: one-third shift certificate and covering constant");
    const Family family = catalog("one_third_shift");
    const AdjacencyCertificate cert = check_adjacency(family.grids, 64, 8, 64);
    c.require(cert.overall == Adjacency::Adjacent, "expected ADJACENT");
    if (cert.overall != Adjacency::Adjacent) return;
    c.require(cert.origin_bound == Rational(1, 3),
              "condition-1 infimum " + to_string(cert.origin_bound) + ", expected 1/3");
    for (const auto& [key, v] : cert.condition1) {
        c.require(v.kind == VerdictKind::Far && v.bound == Rational(1, 3),
                  "condition-1 entry not certified at 1/3");
    }
    c.require(cert.location_bound >= Rational(1, 4),
              "condition-2 bound " + to_string(cert.location_bound) + " below 1/4");

    const ConstantEstimate report =
        estimate_constant(family.grids, -20, 20, 200, 7321, Rational(12), 0);
    c.require(report.total_failures == 0,
              "failures at cap 12: " + std::to_string(report.total_failures));
    // exact maximum pinned from the seeded oracle run
    const Rational pinned_max = parse_rational("8796093022208/943516527265");
    c.require(report.max_ratio == pinned_max,
              "max ratio " + to_string(report.max_ratio) + ", pinned " + to_string(pinned_max));
    c.require(report.max_ratio <= 12, "max ratio above 12");
    c.note("max covering ratio: " + to_string(report.max_ratio) + " (~9.32), cap 12");
}

// 4. Incompatible base pairs: the origin gap collapses with a witness at some
//    m <= 40 for every listed offset, and certification exits 1.
void criterion_4() {
    Criterion c("4: incompatible bases collapse with witnesses (m <= 40)");
    const std::vector<Rational> deltas = {Rational(0), Rational(1, 7), Rational(1, 5),
                                          Rational(3, 11), Rational(9, 13)};
    const std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs = {
        {2, 3}, {2, 5}, {6, 10}, {12, 18}};
    const auto tmp = std::filesystem::temp_directory_path() / "dyadic-acceptance-c4.json";
    for (const auto& [n1, n2] : pairs) {
        for (const Rational& delta : deltas) {
            const Verdict v = far_number(delta, n1, n2, {n1, n2}, 40);
            c.require(v.kind == VerdictKind::NotFar,
                      "no collapse for bases " + std::to_string(n1) + "," + std::to_string(n2) +
                          " delta " + to_string(delta));
            if (v.witness) {
                c.require(v.witness->scale <= 40, "witness beyond m = 40");
                // substitute the witness back into the gap
                const std::uint64_t l = (v.witness->base_index == 0 ? n1 : n2);
                const std::uint64_t a = matched_exponent(l, n1, v.witness->scale);
                const std::uint64_t b = matched_exponent(l, n2, v.witness->scale);
                const Rational gap =
                    abs_of(Rational(delta - make_rational(v.witness->k1, pow_of(n1, a)) -
                                    make_rational(v.witness->k2, pow_of(n2, b))));
                c.require(Rational(gap * pow_of(l, v.witness->scale)) == v.witness->value,
                          "witness does not recheck");
            } else {
                c.require(false, "NOT_FAR verdict without witness");
            }

            Family fam;
            fam.dimension = 1;
            GridRep g1;
            g1.base = n1;
            g1.origin = {Rational(0)};
            g1.digits.base = n1;
            g1.digits.period = {{0}};
            g1.label = "a";
            GridRep g2 = g1;
            g2.base = n2;
            g2.digits.base = n2;
            g2.origin = {delta};
            g2.label = "b";
            fam.grids = {g1, g2};
            save_family(fam, tmp.string());
            RunConfig cfg;
            cfg.command = Command::Certify;
            cfg.family_path = tmp.string();
            cfg.out_path = (std::filesystem::temp_directory_path() / "dyadic-acceptance-c4-out.json")
                               .string();
            cfg.output = OutputFormat::Json;
            c.require(run(cfg) == kExitNotAdjacent, "certify did not exit 1 for bases " +
                                                        std::to_string(n1) + "," +
                                                        std::to_string(n2));
        }
    }
    std::filesystem::remove(tmp);
}

// 5. Base compatibility table.
void criterion_5() {
    Criterion c("5: base compatibility table");
    const auto expect = [&](std::vector<std::uint64_t> bases, std::optional<unsigned long> root,
                            std::vector<std::uint64_t> exps) {
        const auto r = base_compatible(bases);
        if (!root) {
            c.require(!r.has_value(), "expected incompatible");
            return;
        }
        if (!r) {
            c.require(false, "expected a common root");
            return;
        }
        c.require(r->root == *root && r->exponents == exps, "wrong decomposition");
    };
    expect({4, 8}, 2, {2, 3});
    expect({6, 36}, 6, {1, 2});
    expect({12, 18}, std::nullopt, {});
    expect({2, 3}, std::nullopt, {});
    expect({27, 9, 3}, 3, {3, 2, 1});
}

// 6. Keeping every k-th generation of any grid of an adjacent family leaves
//    the family adjacent, k in {2, 3, 4}.
void criterion_6() {
    Criterion c("6: adjacency survives generation dropping (k = 2, 3, 4)");
    for (const auto& name : kAdjacentFamilies) {
        const Family family = catalog(name);
        for (std::size_t gi = 0; gi < family.grids.size(); ++gi) {
            for (std::uint64_t k = 2; k <= 4; ++k) {
                std::vector<GridRep> grids = family.grids;
                grids[gi] = drop_generations(grids[gi], k);
                const AdjacencyCertificate cert = check_adjacency(grids, 64, 8, 64);
                c.require(cert.overall == Adjacency::Adjacent,
                          name + ": dropped grid " + std::to_string(gi + 1) + " k=" +
                              std::to_string(k) + " lost adjacency");
            }
        }
    }
}

// 7. A plane family certifies adjacent exactly when all pairwise coordinate
//    projections certify adjacent.
void criterion_7() {
    Criterion c("7: projection reduction on the plane families");
    for (const char* name : {"plane_three_shifts", "plane_bad_coordinate"}) {
        const Family family = catalog(name);
        const AdjacencyCertificate full = check_adjacency(family.grids, 64, 8, 64);
        bool all_pairs_adjacent = true;
        for (std::size_t s = 0; s < family.dimension; ++s) {
            const auto line = project(family.grids, s);
            for (std::size_t i = 0; i < line.size(); ++i) {
                for (std::size_t k = i + 1; k < line.size(); ++k) {
                    const std::vector<GridRep> pair{line[i], line[k]};
                    const AdjacencyCertificate sub = check_adjacency(pair, 64, 8, 64);
                    all_pairs_adjacent =
                        all_pairs_adjacent && sub.overall == Adjacency::Adjacent;
                }
            }
        }
        const bool full_adjacent = full.overall == Adjacency::Adjacent;
        c.require(full_adjacent == all_pairs_adjacent,
                  std::string(name) + ": full verdict and pairwise projections disagree");
        c.note(std::string(name) + ": " + (full_adjacent ? "ADJACENT" : "NOT_ADJACENT") +
               ", pairwise " + (all_pairs_adjacent ? "all adjacent" : "some fail"));
    }
}

// 8. Certified NOT_ADJACENT families produce a concrete cube no family cube
//    covers within ratio 1000; certified ADJACENT families cover 10^4 random
//    cubes per family across 40 binary scales within the certificate cap.
void criterion_8() {
    Criterion c("8: adversarial cubes vs covering oracle");
    const Rational blowup(1000);
    for (const auto& name : kNotAdjacentFamilies) {
        const Family family = catalog(name);
        const AdjacencyCertificate cert = check_adjacency(family.grids, 64, 8, 64);
        c.require(cert.overall == Adjacency::NotAdjacent, name + ": expected NOT_ADJACENT");
        if (cert.overall != Adjacency::NotAdjacent || !cert.not_adjacent_witness) continue;
        const CertificateWitness& w = *cert.not_adjacent_witness;

        bool produced = false;
        for (std::int64_t step = 1; step <= 80 && !produced; ++step) {
            AdversarialSpec spec;
            spec.first = w.first;
            spec.second = w.second;
            spec.coordinate = w.coordinate;
            spec.scale_exponent = w.source == WitnessSource::OriginGap ? step : -step;
            spec.target_ratio = blowup;
            const AdversarialOutcome out = adversarial_cubes(family.grids, spec);
            if (out.cubes.empty()) continue;
            produced = true;
            const auto cover = smallest_comparable(family.grids, out.cubes[0], blowup);
            c.require(!cover.has_value(),
                      name + ": adversarial cube unexpectedly covered within 1000");
        }
        c.require(produced, name + ": no adversarial cube produced within 80 scales");
    }

    for (const auto& name : kAdjacentFamilies) {
        const Family family = catalog(name);
        const AdjacencyCertificate cert = check_adjacency(family.grids, 64, 8, 64);
        c.require(cert.overall == Adjacency::Adjacent, name + ": expected ADJACENT");
        if (cert.overall != Adjacency::Adjacent) continue;
        const Rational cap = comparability_cap(cert);
        const ConstantEstimate report =
            estimate_constant(family.grids, -20, 19, 250, 881, cap, 0);
        c.require(report.total_failures == 0,
                  name + ": " + std::to_string(report.total_failures) +
                      " cubes escaped the certificate cap " + to_string(cap));
        c.require(report.max_ratio <= cap, name + ": ratio above certificate cap");
    }
}

// 9. Certificates are invariant under rerepresentation with shifts 1..3.
void criterion_9() {
    Criterion c("9: verdicts invariant under rerepresentation (shifts 1..3)");
    std::vector<std::string> all = kAdjacentFamilies;
    all.insert(all.end(), kNotAdjacentFamilies.begin(), kNotAdjacentFamilies.end());
    for (const auto& name : all) {
        const Family family = catalog(name);
        const Adjacency expected = check_adjacency(family.grids, 64, 8, 64).overall;
        for (std::size_t gi = 0; gi < family.grids.size(); ++gi) {
            for (unsigned long shift = 1; shift <= 3; ++shift) {
                std::vector<GridRep> grids = family.grids;
                const std::vector<BigInt> shift_vec(grids[gi].dimension(), BigInt(shift));
                grids[gi] = rerepresent(grids[gi], shift_vec, 16);
                const Adjacency got = check_adjacency(grids, 64, 8, 64).overall;
                c.require(got == expected, name + ": verdict changed for grid " +
                                               std::to_string(gi + 1) + " shift " +
                                               std::to_string(shift));
            }
        }
    }
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << g_failures << " criteria failed\n";
    return 1;
}

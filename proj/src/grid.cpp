#include "dyadic/grid.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dyadic {

namespace {

void check_digit_vector(const std::vector<std::uint32_t>& v, std::size_t d, std::uint64_t base,
                        const char* what) {
    if (v.size() != d) throw std::invalid_argument(std::string(what) + ": digit vector dimension mismatch");
    for (std::uint32_t x : v) {
        if (x >= base) throw std::invalid_argument(std::string(what) + ": digit out of range");
    }
}

}  // namespace

void DigitStream::validate() const {
    if (base < 2) throw std::invalid_argument("digit stream: base must be >= 2");
    if (period.empty()) throw std::invalid_argument("digit stream: period must be nonempty");
    const std::size_t d = period.front().size();
    if (d == 0) throw std::invalid_argument("digit stream: zero dimension");
    for (const auto& v : preperiod) check_digit_vector(v, d, base, "preperiod");
    for (const auto& v : period) check_digit_vector(v, d, base, "period");
}

void GridRep::validate() const {
    digits.validate();
    if (digits.base != base) throw std::invalid_argument("grid: digit stream base mismatch");
    if (origin.size() != digits.dimension()) {
        throw std::invalid_argument("grid: origin dimension mismatch");
    }
}

bool operator==(const GridRep& a, const GridRep& b) {
    return a.base == b.base && a.origin == b.origin &&
           a.digits.preperiod == b.digits.preperiod && a.digits.period == b.digits.period;
}

bool operator==(const Cube& a, const Cube& b) {
    return a.kind == b.kind && a.side == b.side && a.corner == b.corner;
}

bool Cube::contains_open(const Cube& q) const {
    // prod (c, c+s) subset of prod [a, a+S) iff a <= c and c+s <= a+S per axis.
    for (std::size_t i = 0; i < corner.size(); ++i) {
        if (corner[i] > q.corner[i]) return false;
        if (q.corner[i] + q.side > corner[i] + side) return false;
    }
    return true;
}

std::vector<BigInt> location(const GridRep& rep, std::uint64_t j) {
    const std::size_t d = rep.dimension();
    std::vector<BigInt> loc(d, BigInt(0));
    BigInt power(1);
    for (std::uint64_t i = 0; i < j; ++i) {
        for (std::size_t s = 0; s < d; ++s) {
            loc[s] += power * rep.digits.digit(s, i);
        }
        power *= static_cast<unsigned long>(rep.base);
    }
    return loc;
}

Point generation_offset(const GridRep& rep, std::int64_t m) {
    if (m >= 0) return rep.origin;
    const auto loc = location(rep, static_cast<std::uint64_t>(-m));
    Point offset = rep.origin;
    for (std::size_t s = 0; s < offset.size(); ++s) offset[s] += Rational(loc[s]);
    return offset;
}

Cube cube_at(const GridRep& rep, std::int64_t m, const Point& x) {
    if (x.size() != rep.dimension()) throw std::invalid_argument("cube_at: point dimension mismatch");
    const Point offset = generation_offset(rep, m);
    const Rational side = rational_power(rep.base, -m);
    Cube c;
    c.kind = CubeKind::HalfOpen;
    c.side = side;
    c.corner.reserve(x.size());
    for (std::size_t s = 0; s < x.size(); ++s) {
        const BigInt k = floor_of(Rational((x[s] - offset[s]) / side));
        c.corner.push_back(Rational(offset[s] + k * side));
    }
    return c;
}

namespace {

// Shared by rerepresent and canonical_rep: the stream with location function
// L'(j) = (L(j) + off) mod base^j represents the same grid with origin moved
// by -off. Eventual periodicity of the input guarantees the carry sequence
// c_j = floor((L(j)+off)/base^j) stabilizes; digits are recomputed exactly up
// to that point and the period is rotated/adjusted after it.
DigitStream offset_stream(const GridRep& rep, const std::vector<BigInt>& off) {
    const std::size_t d = rep.dimension();
    const std::uint64_t n = rep.base;
    const auto& st = rep.digits;
    const std::uint64_t pre = st.preperiod.size();
    const std::uint64_t per = st.period.size();

    // Per-coordinate period content classification.
    std::vector<bool> all_zero(d, true), all_max(d, true);
    for (const auto& v : st.period) {
        for (std::size_t s = 0; s < d; ++s) {
            if (v[s] != 0) all_zero[s] = false;
            if (v[s] != n - 1) all_max[s] = false;
        }
    }

    // Find, per coordinate, the first index from which the carry is constant,
    // then take the maximum. Carries: c_j = floor((L_s(j)+off_s)/n^j).
    std::vector<BigInt> L(d, BigInt(0));
    BigInt power(1);  // n^j
    std::uint64_t j = 0;
    std::vector<std::int64_t> stable_carry(d, 0);
    std::vector<bool> stable(d, false);

    // Generous cap: carries settle within one period of the point where n^j
    // dominates every |off_s| and the accumulated location.
    std::uint64_t cap = pre + per + 8;
    {
        BigInt maxoff(0);
        for (const auto& o : off) {
            BigInt a = abs(o);
            if (a > maxoff) maxoff = a;
        }
        BigInt p(1);
        while (p <= maxoff) {
            p *= static_cast<unsigned long>(n);
            cap += per + 1;
        }
    }

    const auto carry_at = [&](std::size_t s) -> std::int64_t {
        const BigInt c = floor_div(L[s] + off[s], power);
        return static_cast<std::int64_t>(c.get_si());
    };

    std::uint64_t stable_from = 0;
    while (true) {
        if (j >= pre && (j - pre) % per == 0) {
            bool all_stable = true;
            for (std::size_t s = 0; s < d; ++s) {
                if (stable[s]) continue;
                const BigInt val = L[s] + off[s];
                if (all_max[s]) {
                    // L_s(j') = n^j' - K for j' >= j with K = n^j - L_s(j).
                    const BigInt K = power - L[s];
                    if (off[s] >= K && off[s] - K < power) {
                        stable[s] = true;
                        stable_carry[s] = 1;
                    } else if (off[s] < K && val >= 0) {
                        stable[s] = true;
                        stable_carry[s] = 0;
                    }
                } else if (all_zero[s]) {
                    // L_s constant from here on.
                    if (val < 0 && -val <= power) {
                        stable[s] = true;
                        stable_carry[s] = -1;
                    } else if (val >= 0 && val < power) {
                        stable[s] = true;
                        stable_carry[s] = 0;
                    }
                } else {
                    // L_s grows and n^j - L_s grows; carry settles at 0.
                    if (val >= 0 && val < power) {
                        stable[s] = true;
                        stable_carry[s] = 0;
                    }
                }
                if (!stable[s]) all_stable = false;
            }
            if (all_stable) {
                stable_from = j;
                break;
            }
        }
        if (j > cap) throw std::logic_error("offset_stream: carry did not stabilize");
        for (std::size_t s = 0; s < d; ++s) L[s] += power * st.digit(s, j);
        power *= static_cast<unsigned long>(n);
        ++j;
    }

    // Recompute digits exactly below stable_from via consecutive adjusted
    // locations, then map the period through the constant carry.
    DigitStream out;
    out.base = n;
    out.preperiod.reserve(stable_from);

    std::vector<BigInt> Lcur(d, BigInt(0)), Lprev;
    std::vector<BigInt> adj_prev(d, BigInt(0));  // L'(0) = 0
    BigInt pw(1);
    for (std::uint64_t i = 0; i < stable_from; ++i) {
        std::vector<std::uint32_t> digit(d);
        std::vector<BigInt> adj(d);
        const BigInt pw_next = pw * static_cast<unsigned long>(n);
        for (std::size_t s = 0; s < d; ++s) {
            Lcur[s] += pw * st.digit(s, i);
            BigInt a = Lcur[s] + off[s];
            mpz_mod(a.get_mpz_t(), a.get_mpz_t(), pw_next.get_mpz_t());
            const BigInt diff = a - adj_prev[s];
            const BigInt dg = diff / pw;
            if (dg * pw != diff || dg < 0 || dg >= n) {
                throw std::logic_error("offset_stream: inconsistent digit recomputation");
            }
            digit[s] = static_cast<std::uint32_t>(dg.get_ui());
            adj[s] = a;
        }
        out.preperiod.push_back(std::move(digit));
        adj_prev = std::move(adj);
        pw = pw_next;
    }

    out.period.reserve(per);
    const std::uint64_t phase = (stable_from - pre) % per;
    for (std::uint64_t i = 0; i < per; ++i) {
        const auto& src = st.period[(i + phase) % per];
        std::vector<std::uint32_t> digit(d);
        for (std::size_t s = 0; s < d; ++s) {
            // a'_j = a_j + c*(1-n): identity for carry 0, all-max -> all-zero
            // for carry 1, all-zero -> all-max for carry -1.
            const std::int64_t v = static_cast<std::int64_t>(src[s]) +
                                   stable_carry[s] * (1 - static_cast<std::int64_t>(n));
            if (v < 0 || v >= static_cast<std::int64_t>(n)) {
                throw std::logic_error("offset_stream: period digit out of range");
            }
            digit[s] = static_cast<std::uint32_t>(v);
        }
        out.period.push_back(std::move(digit));
    }
    return out;
}

// Minimal (preperiod, period) normal form of an eventually periodic stream.
void normalize_stream(DigitStream& st) {
    // Minimal period: smallest divisor p such that the period repeats with p.
    const std::size_t per = st.period.size();
    for (std::size_t p = 1; p <= per; ++p) {
        if (per % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < per && ok; ++i) {
            if (st.period[i] != st.period[i % p]) ok = false;
        }
        if (ok) {
            st.period.resize(p);
            break;
        }
    }
    // Absorb preperiod tail entries that already follow the periodic pattern.
    while (!st.preperiod.empty() && st.preperiod.back() == st.period.back()) {
        st.preperiod.pop_back();
        std::rotate(st.period.begin(), st.period.end() - 1, st.period.end());
    }
}

}  // namespace

GridRep rerepresent(const GridRep& rep, const std::vector<BigInt>& shift, std::uint64_t depth) {
    rep.validate();
    if (shift.size() != rep.dimension()) {
        throw std::invalid_argument("rerepresent: shift dimension mismatch");
    }
    const BigInt limit = pow_of(rep.base, depth);
    std::vector<BigInt> off(shift.size());
    for (std::size_t s = 0; s < shift.size(); ++s) {
        if (shift[s] < 0) throw std::invalid_argument("rerepresent: shift must be nonnegative");
        if (shift[s] >= limit) {
            throw std::invalid_argument("rerepresent: shift cannot be absorbed within depth digits");
        }
        off[s] = -shift[s];
    }
    GridRep out = rep;
    for (std::size_t s = 0; s < shift.size(); ++s) out.origin[s] += Rational(shift[s]);
    out.digits = offset_stream(rep, off);
    return out;
}

GridRep drop_generations(const GridRep& rep, std::uint64_t k) {
    rep.validate();
    if (k < 1) throw std::invalid_argument("drop_generations: k must be >= 1");
    const std::size_t d = rep.dimension();
    const std::uint64_t pre = rep.digits.preperiod.size();
    const std::uint64_t per = rep.digits.period.size();

    GridRep out;
    out.label = rep.label;
    out.origin = rep.origin;
    BigInt nb = pow_of(rep.base, k);
    // Digit components are stored as 32-bit values.
    if (nb > BigInt(1) << 32) throw std::invalid_argument("drop_generations: derived base too large");
    out.base = nb.get_ui();

    const std::uint64_t new_pre = (pre + k - 1) / k;
    const std::uint64_t g = std::gcd(per, k);
    const std::uint64_t new_per = per / g;

    auto block_at = [&](std::uint64_t block_index) {
        std::vector<std::uint32_t> digit(d);
        for (std::size_t s = 0; s < d; ++s) {
            std::uint64_t value = 0;
            std::uint64_t scale = 1;
            for (std::uint64_t t = 0; t < k; ++t) {
                value += scale * rep.digits.digit(s, block_index * k + t);
                scale *= rep.base;
            }
            digit[s] = static_cast<std::uint32_t>(value);
        }
        return digit;
    };

    out.digits.base = out.base;
    for (std::uint64_t i = 0; i < new_pre; ++i) out.digits.preperiod.push_back(block_at(i));
    for (std::uint64_t i = 0; i < new_per; ++i) out.digits.period.push_back(block_at(new_pre + i));
    return out;
}

GridRep canonical_rep(const GridRep& rep) {
    rep.validate();
    const std::size_t d = rep.dimension();
    std::vector<BigInt> off(d);
    GridRep out = rep;
    bool shifted = false;
    for (std::size_t s = 0; s < d; ++s) {
        off[s] = floor_of(rep.origin[s]);
        if (off[s] != 0) shifted = true;
        out.origin[s] = rep.origin[s] - Rational(off[s]);
    }
    out.digits = shifted ? offset_stream(rep, off) : rep.digits;
    normalize_stream(out.digits);
    return out;
}

}  // namespace dyadic

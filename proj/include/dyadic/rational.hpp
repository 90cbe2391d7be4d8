#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dyadic {

// Arbitrary-precision integers and rationals. Rationals are kept in canonical
// form throughout: reduced, denominator >= 1, zero is 0/1. GMP's mpq layer
// preserves canonical form under arithmetic as long as inputs are canonical,
// so every construction site below canonicalizes.
using BigInt = mpz_class;
using Rational = mpq_class;

// A point of Q^d.
using Point = std::vector<Rational>;

inline Rational make_rational(BigInt numerator, BigInt denominator) {
    if (denominator == 0) {
        throw std::invalid_argument("rational: zero denominator");
    }
    Rational q(std::move(numerator), std::move(denominator));
    q.canonicalize();
    return q;
}

inline Rational make_rational(long numerator, unsigned long denominator = 1) {
    return make_rational(BigInt(numerator), BigInt(denominator));
}

// Serialized form is "p/q" with "/q" omitted when q == 1; big integers are
// plain decimal strings. mpq_class::get_str follows exactly that convention.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline Rational parse_rational(std::string_view text) {
    const auto bad = [&] {
        return std::invalid_argument("rational: cannot parse \"" + std::string(text) + "\"");
    };
    if (text.empty()) throw bad();
    const auto slash = text.find('/');
    const std::string num(text.substr(0, slash));
    Rational q;
    if (slash == std::string_view::npos) {
        BigInt n;
        if (n.set_str(num, 10) != 0) throw bad();
        q = Rational(n);
    } else {
        const std::string den(text.substr(slash + 1));
        BigInt n, d;
        if (n.set_str(num, 10) != 0 || den.empty() || d.set_str(den, 10) != 0) throw bad();
        if (d == 0) throw bad();
        q = Rational(n, d);
        q.canonicalize();
    }
    return q;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline BigInt floor_of(const Rational& q) {
    return floor_div(q.get_num(), q.get_den());
}

// Nearest integer; exact halves round up (any consistent choice works for the
// distance computations here, both neighbours are compared anyway).
inline BigInt round_of(const Rational& q) {
    return floor_of(q + Rational(1, 2));
}

inline Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline BigInt pow_of(const BigInt& base, std::uint64_t e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(e));
    return r;
}

inline BigInt pow_of(std::uint64_t base, std::uint64_t e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
    return r;
}

// base^m as an exact rational, m of either sign.
inline Rational rational_power(std::uint64_t base, std::int64_t m) {
    if (m >= 0) return Rational(pow_of(base, static_cast<std::uint64_t>(m)));
    return Rational(1, pow_of(base, static_cast<std::uint64_t>(-m)));
}

}  // namespace dyadic

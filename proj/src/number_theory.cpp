#include "dyadic/number_theory.hpp"

#include <cmath>
#include <stdexcept>

namespace dyadic {

std::uint64_t matched_exponent(std::uint64_t n, std::uint64_t n_prime, std::uint64_t j) {
    if (n < 2 || n_prime < 2) {
        throw std::invalid_argument("matched_exponent: bases must be >= 2");
    }
    if (j == 0) return 0;

    const BigInt target = pow_of(n, j);

    // Float seed, then exact correction. Floating logs can be off by one near
    // exact powers, never more for these ranges.
    double guess = static_cast<double>(j) * std::log(static_cast<double>(n)) /
                   std::log(static_cast<double>(n_prime));
    if (!(guess >= 0.0)) guess = 0.0;
    std::uint64_t k = static_cast<std::uint64_t>(guess);

    BigInt p = pow_of(n_prime, k);
    while (p > target) {
        --k;
        p /= static_cast<unsigned long>(n_prime);
    }
    while (p * n_prime <= target) {
        ++k;
        p *= static_cast<unsigned long>(n_prime);
    }
    return k;
}

Rational lattice_mesh(std::uint64_t n, std::uint64_t a, std::uint64_t n_prime, std::uint64_t b) {
    if (n < 2 || n_prime < 2) {
        throw std::invalid_argument("lattice_mesh: bases must be >= 2");
    }
    return Rational(1, big_lcm(pow_of(n, a), pow_of(n_prime, b)));
}

Rational dist_to_lattice(const Rational& x, const Rational& mesh) {
    if (mesh <= 0) {
        throw std::invalid_argument("dist_to_lattice: mesh must be positive");
    }
    const BigInt k = floor_of(Rational(x / mesh));
    const Rational below = abs_of(Rational(x - k * mesh));
    const Rational above = abs_of(Rational(x - (k + 1) * mesh));
    return below <= above ? below : above;
}

PrimeFactorization factorize(BigInt n) {
    if (n < 1) throw std::invalid_argument("factorize: input must be positive");
    PrimeFactorization f;
    auto take = [&](const BigInt& p) {
        std::uint64_t e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e > 0) {
            f.primes.push_back(p);
            f.exponents.push_back(e);
        }
    };
    take(BigInt(2));
    for (BigInt d(3); d * d <= n; d += 2) {
        take(d);
    }
    if (n > 1) {
        f.primes.push_back(n);
        f.exponents.push_back(1);
    }
    return f;
}

RootPower primitive_root(const BigInt& n) {
    if (n < 2) throw std::invalid_argument("primitive_root: input must be >= 2");
    const PrimeFactorization f = factorize(n);
    BigInt g(0);
    for (std::uint64_t e : f.exponents) {
        g = big_gcd(g, BigInt(static_cast<unsigned long>(e)));
    }
    const auto gu = g.get_ui();
    BigInt root(1);
    for (std::size_t i = 0; i < f.primes.size(); ++i) {
        root *= pow_of(f.primes[i], f.exponents[i] / gu);
    }
    return RootPower{root, gu};
}

BigInt big_gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

BigInt big_lcm(const BigInt& a, const BigInt& b) {
    BigInt l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

BezoutTriple extended_gcd(const BigInt& a, const BigInt& b) {
    BezoutTriple t;
    mpz_gcdext(t.g.get_mpz_t(), t.x.get_mpz_t(), t.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return t;
}

std::uint64_t floor_log(std::uint64_t base, const Rational& q) {
    if (base < 2) throw std::invalid_argument("floor_log: base must be >= 2");
    if (q < 1) throw std::invalid_argument("floor_log: argument must be >= 1");
    std::uint64_t e = 0;
    Rational p(1);
    while (p * static_cast<unsigned long>(base) <= q) {
        p *= static_cast<unsigned long>(base);
        ++e;
    }
    return e;
}

BigInt dist_to_int_lattice(const BigInt& x, const BigInt& step) {
    if (step <= 0) throw std::invalid_argument("dist_to_int_lattice: step must be positive");
    BigInt r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), step.get_mpz_t());  // r in [0, step)
    const BigInt other = step - r;
    return r <= other ? r : other;
}

}  // namespace dyadic

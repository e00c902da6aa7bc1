#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "json.hpp"

namespace tensorval {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// a + b i with rational a, b
struct GaussRational {
    mpq_class re = 0;
    mpq_class im = 0;

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    GaussRational conj() const { return {re, -im}; }
    GaussRational inverse() const;

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
};

// Finite sum  sum_h c_h * pi^(h/2)  with Gaussian-rational c_h.
class ExactScalar {
public:
    using Terms = std::map<int, GaussRational>;

    ExactScalar() = default;
    ExactScalar(long v);
    ExactScalar(const mpq_class& q);
    ExactScalar(const mpz_class& z) : ExactScalar(mpq_class(z)) {}

    static ExactScalar rational(long p, long q = 1);
    static ExactScalar gauss(const mpq_class& re, const mpq_class& im, int pihalf = 0);
    static ExactScalar pi_power(int pihalf);
    static ExactScalar pi() { return pi_power(2); }
    static ExactScalar imag_unit();
    static ExactScalar i_pow(int s);

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_rational() const;
    mpq_class rational_value() const;

    ExactScalar inverse() const;
    ExactScalar pow(int e) const;

    std::complex<double> to_complex() const;
    double real_value() const { return to_complex().real(); }

    std::string str() const;
    static ExactScalar parse(const std::string& text);
    nlohmann::json to_json() const;
    static ExactScalar from_json(const nlohmann::json& j);

    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar& operator/=(const ExactScalar& o) { return *this *= o.inverse(); }

    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) { return a * b.inverse(); }
    friend bool operator==(const ExactScalar& a, const ExactScalar& b) { return a.terms_ == b.terms_; }
    friend std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.str(); }

private:
    void add_term(int h, const GaussRational& c);
    Terms terms_;
};

struct HalfInteger {
    long twice;
};

// canonical p/q
mpq_class make_q(long p, long q = 1);

mpz_class factorial(long m);
mpz_class binomial(long n, long k);

// Gamma(x) for x a positive half-integer
ExactScalar gamma_half(HalfInteger x);
inline ExactScalar gamma_half2(long twice) { return gamma_half(HalfInteger{twice}); }

ExactScalar kappa(long m);
ExactScalar omega(long m);
ExactScalar flag(long n, long k);

}  // namespace tensorval

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tensorval/symtensor.hpp"
#include "tensorval/valalg.hpp"

using namespace tensorval;
using TV = TensorValuation;
using ES = ExactScalar;

namespace {

ES q(long p, long d = 1) { return ES(make_q(p, d)); }
const ES pi = ES::pi();

}  // namespace

TEST_CASE("zero normalization of basis elements") {
    CHECK(TV::phi(3, 3, 2).is_zero());
    CHECK(TV::phi(3, 1, 1).is_zero());
    CHECK(TV::phi(3, 4, 0).is_zero());
    CHECK(TV::phi(3, -1, 0).is_zero());
    CHECK(!TV::phi(3, 3, 0).is_zero());
    CHECK(phi_basis(4, 2, 4).size() == 3);
    CHECK(phi_basis(4, 4, 4).size() == 1);  // only Q^2 vol survives
}

TEST_CASE("labels and json round trip") {
    BasisElement b{2, 1, 3, Kind::Psi};
    CHECK(b.label() == "Q^2.Psi_{1,3}");
    CHECK(BasisElement::parse_label(b.label()) == b);
    CHECK_THROWS_AS(BasisElement::parse_label("Phi_{1,2}"), DomainError);
    TV v = q(3, 4) * TV::phi(4, 2, 2) + pi * TV::psi(4, 1, 3, 1);
    CHECK(TV::from_json(v.to_json()).same_terms(v));
}

TEST_CASE("fourier transform examples") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) CHECK(fourier(TV::phi(n, k, 0)) == TV::phi(n, n - k, 0));
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k < n; ++k) {
            TV want = -TV::phi(n, n - k, 2) + ES(make_q(1, 4)) / pi * TV::phi(n, n - k, 0, 1);
            CHECK(fourier(TV::phi(n, k, 2)) == want);
            CHECK(fourier(fourier(TV::phi(n, k, 3))) == -TV::phi(n, k, 3));
            CHECK(fourier(TV::psi(n, k, 4)) == TV::psi(n, n - k, 4));
            CHECK(inverse_fourier(fourier(TV::phi(n, k, 5, 1))) == TV::phi(n, k, 5, 1));
        }
}

TEST_CASE("convolution examples") {
    for (int n = 2; n <= 5; ++n) {
        TV vol = TV::phi(n, n, 0);
        for (int k = 1; k <= n; ++k) CHECK(convolve(vol, TV::phi(n, k, 3)) == TV::phi(n, k, 3));
        for (int k = 0; k <= n; ++k)
            for (int l = n - k; l <= n; ++l)
                CHECK(convolve(TV::phi(n, k, 0), TV::phi(n, l, 0)) == flag(2 * n - k - l, n - k) * TV::phi(n, k + l - n, 0));
        CHECK(convolve(TV::phi(n, n - 1, 2), TV::phi(n, n - 1, 2)) == -(pi / q(8)) * TV::phi(n, n - 2, 4));
        CHECK_THROWS_AS(convolve(TV::phi(n, 0, 0), TV::phi(n, n - 1, 0)), DomainError);
    }
}

TEST_CASE("product examples") {
    for (int n = 2; n <= 6; ++n) {
        TV chi = TV::phi(n, 0, 0);
        CHECK(multiply(chi, TV::phi(n, 1, 4, 1)) == TV::phi(n, 1, 4, 1));
        for (int k = 0; k <= n; ++k)
            for (int l = 0; k + l <= n; ++l)
                CHECK(multiply(TV::phi(n, k, 0), TV::phi(n, l, 0)) == flag(k + l, k) * TV::phi(n, k + l, 0));
        CHECK_THROWS_AS(multiply(TV::phi(n, n, 0), TV::phi(n, 1, 0)), DomainError);
    }
    // top coefficient of Phi_{k,2} . Phi_{l,2}, against a floating point evaluation of the closed form
    for (int n = 4; n <= 6; ++n)
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; k + l < n; ++l) {
                TV p = multiply(TV::phi(n, k, 2), TV::phi(n, l, 2));
                auto it = p.terms().find(BasisElement{0, k + l, 4, Kind::Phi});
                REQUIRE(it != p.terms().end());
                const double want = -2 * M_PI * M_PI * k * l * std::tgamma((k + l + 1) / 2.0) /
                                    (std::pow(M_PI, 1.5) * (k + l + 2) * (k + l) * std::tgamma((k + 1) / 2.0) *
                                     std::tgamma((l + 1) / 2.0));
                CHECK(it->second.real_value() == doctest::Approx(want).epsilon(1e-12));
            }
}

TEST_CASE("crofton examples") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 0; k <= n; ++k)
            for (int l = 0; k + l <= n; ++l)
                CHECK(crofton(TV::phi(n, k, 0), l) == flag(n, l).inverse() * flag(k + l, l) * TV::phi(n, k + l, 0));
    for (int n = 2; n <= 6; ++n) {
        TV want = flag(n, 1).inverse() * (pi / q(4) * TV::phi(n, 2, 2) + q(1, 16) * TV::phi(n, 2, 0, 1));
        CHECK(crofton(TV::phi(n, 1, 2), 1) == want);
    }
    // trace-free basis: single-term formula
    for (int n = 3; n <= 6; ++n)
        for (int k = 1; k < n; ++k)
            for (int l = 1; k + l <= n; ++l)
                for (int s : {2, 3, 4}) {
                    ES co = omega(s + k + l) / (omega(s + k) * omega(l)) * ES(binomial(k + l, k)) * q(k * l, k + l) *
                            flag(n, l).inverse();
                    CHECK(crofton(TV::psi(n, k, s), l) == co * TV::psi(n, k + l, s));
                }
    CHECK_THROWS_AS(crofton(TV::phi(3, 2, 0), 2), DomainError);
}

TEST_CASE("basis change") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 0; k < n; ++k) {
            TV want = TV::psi(n, k, 2) + q(n - k, 4 * n) / pi * TV::psi(n, k, 0, 1);
            CHECK(phi_to_psi(TV::phi(n, k, 2)).same_terms(want));
            CHECK(TV::psi(n, k, 0) == TV::phi(n, k, 0));
            for (int s = 0; s <= 6; ++s) {
                CHECK(psi_to_phi(phi_to_psi(TV::phi(n, k, s))).same_terms(TV::phi(n, k, s)));
                CHECK(phi_to_psi(psi_to_phi(TV::psi(n, k, s, 1))).same_terms(TV::psi(n, k, s, 1)));
            }
        }
}

TEST_CASE("trace examples") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 0; k < n; ++k) {
            CHECK(trace_val(TV::phi(n, k, 2)) == q(n - k, 4) / pi * TV::phi(n, k, 0));
            CHECK(trace_val(TV::phi(n, k, 0, 1)) == q(n) * TV::phi(n, k, 0));
            CHECK(trace_val(TV::phi(n, k, 2, 1)) == q(n + 4, 6) * TV::phi(n, k, 2) + q(n - k, 24) / pi * TV::phi(n, k, 0, 1));
        }
    CHECK_THROWS_AS(trace_val(TV::phi(3, 1, 0)), DomainError);
}

// The Q-power trace rule rests on tr(Q^b T) = alpha Q^{b-1} T + beta Q^b tr T for any symmetric T of rank s.
TEST_CASE("Q-power trace rule against the numeric tensor trace") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> d;
    for (int n = 2; n <= 5; ++n)
        for (int s = 0; s <= 4; ++s)
            for (int b = 1; b <= 2; ++b) {
                SymTensor t(n, s);
                for (size_t p = 0; p < t.size(); ++p) t[p] = d(rng);
                const double r = 2 * b + s;
                const double alpha = 2.0 * b * (2 * b + 2 * s + n - 2) / (r * (r - 1));
                const double beta = s * (s - 1) / (r * (r - 1));
                SymTensor lhs = trace(sym_product(metric_power(n, b), t));
                SymTensor rhs = alpha * sym_product(metric_power(n, b - 1), t);
                if (s >= 2) rhs += beta * sym_product(metric_power(n, b), trace(t));
                CHECK((lhs - rhs).max_abs() < 1e-10 * (1 + lhs.max_abs()));
            }
}

TEST_CASE("derivation") {
    for (int n = 2; n <= 6; ++n) {
        CHECK(derivation(TV::phi(n, n - 1, 0)) == pi * TV::phi(n, n - 2, 0));
        CHECK(derivation(TV::phi(n, 0, 0)).is_zero());
        for (int k = 1; k <= n; ++k)
            for (int s : {0, 2, 3, 4}) {
                TV v = TV::phi(n, k, s, 1);
                CHECK(derivation(v) == convolve(q(2) * TV::phi(n, n - 1, 0), v));
            }
    }
}

TEST_CASE("Euler-Verdier involution") {
    for (int n = 2; n <= 6; ++n)
        for (int k = 0; k <= n; ++k) {
            CHECK(euler_verdier(TV::phi(n, k, 0)) == (k % 2 ? q(-1) : q(1)) * TV::phi(n, k, 0));
            for (int s = 0; s <= 5; ++s) {
                TV v = TV::phi(n, k, s, 1);
                CHECK(euler_verdier(euler_verdier(v)) == v);
            }
        }
    CHECK(euler_verdier(TV::phi(4, 1, 3)) == TV::phi(4, 1, 3));
}

TEST_CASE("Q-equivariance of the operators") {
    for (int n = 3; n <= 5; ++n)
        for (int k = 0; k < n; ++k)
            for (int s : {0, 2, 3}) {
                TV v = TV::phi(n, k, s);
                CHECK(fourier(v.times_q()) == fourier(v).times_q());
                CHECK(crofton(v.times_q(), 1) == crofton(v, 1).times_q());
                CHECK(multiply(v.times_q(), TV::phi(n, 1, 2)) == multiply(v, TV::phi(n, 1, 2)).times_q());
            }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tensorval/spherical.hpp"

using namespace tensorval;
using ES = ExactScalar;

namespace {

double poly(const std::vector<double>& c, double t) {
    double r = 0, p = 1;
    for (double x : c) {
        r += x * p;
        p *= t;
    }
    return r;
}

}  // namespace

TEST_CASE("Radon eigenvalues") {
    CHECK(radon_eigenvalue(3, 2, 2) == ES(make_q(1, 4)));
    CHECK(radon_eigenvalue(4, 3, 4) == ES(make_q(1, 25)));
    CHECK(spherical_radon_eigenvalue(3, 2) == ES(make_q(-1, 2)));
    for (int n = 2; n <= 6; ++n) {
        CHECK(radon_eigenvalue(n, 1, 4) == ES(1));
        CHECK(spherical_radon_eigenvalue(n, 0) == ES(1));
    }
    CHECK_THROWS_AS(radon_eigenvalue(3, 2, 3), DomainError);
    CHECK_THROWS_AS(spherical_radon_eigenvalue(3, 1), DomainError);
}

TEST_CASE("Fourier multipliers") {
    for (int n = 2; n <= 8; ++n)
        for (int k = 1; k < n; ++k) {
            CHECK(fourier_multiplier(n, k, 0) == ES(1));
            for (int s = 0; s <= 8; s += 2) CHECK(fourier_multiplier(n, k, s) == even_multiplier_from_radon(n, k, s));
            // c_{n,k,s} c_{n,n-k,s} = (-1)^s
            CHECK(fourier_multiplier(n, k, 3) * fourier_multiplier(n, n - k, 3) == ES(-1));
        }
    CHECK(fourier_multiplier(4, 2, 2) == ES(-1));
    CHECK_THROWS_AS(fourier_multiplier(4, 2, 1), DomainError);
    CHECK_THROWS_AS(fourier_multiplier(4, 0, 2), DomainError);
}

TEST_CASE("zonal polynomials match classical families") {
    for (int s = 0; s <= 8; ++s)
        for (double t : {-0.9, -0.3, 0.2, 0.75}) {
            const double th = std::acos(t);
            CHECK(poly(zonal_coefficients(2, s), t) == doctest::Approx(std::cos(s * th)));
            CHECK(poly(zonal_coefficients(3, s), t) == doctest::Approx(std::legendre(s, t)));
            CHECK(poly(zonal_coefficients(4, s), t) == doctest::Approx(std::sin((s + 1) * th) / std::sin(th)));
        }
}

TEST_CASE("zonal harmonics are Laplace eigenfunctions") {
    for (int n = 2; n <= 5; ++n)
        for (int s = 0; s <= 6; ++s) {
            Vec pole = Vec::LinSpaced(n, 1, n);
            Vec u = Vec::LinSpaced(n, -1, 0.5).normalized();
            ZonalHarmonic z(n, s, pole);
            const double want = z.eigenvalue() * z(u);
            CHECK(std::abs(z.laplacian_fd(u) - want) < 1e-5 * std::max(1.0, std::abs(want)));
        }
}

TEST_CASE("identity suite covers enough points") {
    auto rep = verify_identity_suite();
    CHECK(rep.passed());
    for (const auto& c : rep.checks) {
        CHECK_MESSAGE(c.failures.empty(), c.name);
        if (c.name.find("sum") != std::string::npos) CHECK(c.points >= 200);
    }
    CHECK(check_rank3_quotient(10).passed());
}

TEST_CASE("Monte Carlo Radon checks on a small budget") {
    McConfig cfg;
    cfg.samples = 100000;
    cfg.tolerance = 0.03;
    auto r = mc_radon_check(3, 2, 2, cfg);
    CHECK(r.passed);
    CHECK(r.predicted[0] == doctest::Approx(0.25));
    CHECK(r.std_error[0] > 0);
    auto s = mc_spherical_radon_check(3, 2, cfg);
    CHECK(s.passed);
    CHECK_THROWS_AS(mc_radon_check(3, 2, 3, cfg), DomainError);
    CHECK_THROWS_AS(mc_radon_check(6, 2, 2, cfg), DomainError);
}

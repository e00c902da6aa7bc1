#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tensorval/kinops.hpp"

using namespace tensorval;
using TV = TensorValuation;
using ES = ExactScalar;

namespace {

double kap(int m) { return std::pow(M_PI, m / 2.0) / std::tgamma(m / 2.0 + 1); }
double om(int m) { return m * kap(m); }
double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }
double flagd(int n, int k) { return binom(n, k) * kap(n) / (kap(k) * kap(n - k)); }

}  // namespace

TEST_CASE("pairing examples") {
    CHECK(pairing_m(TV::phi(2, 1, 0), TV::phi(2, 1, 0)) == ES(make_q(1, 2)) * ES::pi());
    CHECK(pairing_m(TV::phi(2, 1, 0), TV::phi(2, 1, 0)) == flag(2, 1));
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k < n; ++k) {
            const double want = binom(n, k) * k * (n - k) * std::tgamma((k + 3) / 2.0) * std::tgamma((n - k + 3) / 2.0) /
                                (72 * std::pow(M_PI, 3) * std::tgamma(n / 2.0 + 1));
            CHECK(pairing_m(TV::phi(n, k, 3), TV::phi(n, n - k, 3)).real_value() == doctest::Approx(want).epsilon(1e-12));
            CHECK(pairing_m(TV::phi(n, k, 3), TV::phi(n, n - k, 2)).is_zero());
            CHECK(pairing_m(TV::phi(n, k, 2), TV::phi(n, k, 2)).is_zero() == (2 * k != n));
        }
}

TEST_CASE("pairing parity and symmetry on Gram blocks") {
    for (int n = 2; n <= 5; ++n)
        for (int k = 0; k <= n; ++k)
            for (int s = 0; s <= 5; ++s) {
                auto m = pairing_matrix_m(n, k, s), c = pairing_matrix_c(n, k, s), t = pairing_matrix_m(n, n - k, s);
                REQUIRE(m.left.size() == m.right.size());
                for (size_t i = 0; i < m.left.size(); ++i)
                    for (size_t j = 0; j < m.right.size(); ++j) {
                        CHECK(m.entries[i][j] == (s % 2 ? ES(-1) : ES(1)) * c.entries[i][j]);
                        CHECK(m.entries[i][j] == t.entries[j][i]);
                    }
            }
}

TEST_CASE("exact solver") {
    ExactMatrix a = {{ES(2), ES(1)}, {ES(1), ES(3)}};
    ExactMatrix b = {{ES(1)}, {ES(2)}};
    auto x = solve_exact(a, b);
    CHECK(x[0][0] == ES(make_q(1, 5)));
    CHECK(x[1][0] == ES(make_q(3, 5)));
    ExactMatrix singular = {{ES(1), ES(2)}, {ES(2), ES(4)}};
    CHECK_THROWS(solve_exact(singular, b));
}

TEST_CASE("additive operator at rank zero follows the rotation-sum formula") {
    // a(mu_i) = C(n-1,i)/(omega_{n-i} omega_n) sum_k C(i,k) [omega_{n-k}/C(n-1,k)] [omega_{n-l}/C(n-1,l)] mu_k (x) mu_l
    for (int n = 2; n <= 6; ++n)
        for (int i = 0; i < n; ++i) {
            auto t = additive_kinematic(n, i, 0, 0);
            for (int k = 0; k <= i; ++k) {
                const int l = i - k;
                const double want = binom(n - 1, i) / (om(n - i) * om(n)) * binom(i, k) * om(n - k) / binom(n - 1, k) *
                                    om(n - l) / binom(n - 1, l);
                CHECK(t.coeff({0, k, 0, Kind::Phi}, {0, l, 0, Kind::Phi}).real_value() == doctest::Approx(want).epsilon(1e-12));
            }
        }
}

TEST_CASE("principal kinematic formula at rank zero") {
    for (int n = 2; n <= 6; ++n) {
        auto t = intersectional_kinematic(n, 0, 0, 0);
        for (int k = 0; k <= n; ++k)
            CHECK(t.coeff({0, k, 0, Kind::Phi}, {0, n - k, 0, Kind::Phi}).real_value() ==
                  doctest::Approx(1 / flagd(n, k)).epsilon(1e-12));
    }
}

TEST_CASE("bi-rank (3,3) coefficient and its vanishing at degree 3") {
    for (int n = 4; n <= 6; ++n)
        for (int i = 1; i < n; ++i) {
            auto t = intersectional_kinematic(n, i, 3, 3);
            if (i == 3) {
                CHECK(t.is_zero());
                continue;
            }
            for (int k = i; k <= n; ++k) {
                const int l = n + i - k;
                if (l < i || l > n || k == n || l == n) continue;
                const double want = (i + 1.0) * (i - 1) * (i - 3) / (40 * std::tgamma((n + 1) / 2.0) * std::tgamma((i + 1) / 2.0)) *
                                    std::tgamma(k / 2.0) * std::tgamma(l / 2.0) / ((k + 1.0) * (l + 1));
                CHECK(t.coeff({0, k, 3, Kind::Phi}, {0, l, 3, Kind::Phi}).real_value() == doctest::Approx(want).epsilon(1e-12));
            }
        }
}

TEST_CASE("solver agrees with the closed forms") {
    for (int n = 3; n <= 5; ++n)
        for (int i = 0; i < n; ++i)
            for (auto [s1, s2] : {std::pair{2, 2}, {3, 2}, {3, 3}})
                CHECK(intersectional_kinematic(n, i, s1, s2) == intersectional_closed_form(n, i, s1, s2));
}

TEST_CASE("three routes to the additive operator agree") {
    for (int n = 2; n <= 5; ++n)
        for (int i = 0; i < n; ++i)
            for (int s1 : {0, 2, 3})
                for (int s2 : {0, 2, 3}) {
                    auto closed = additive_kinematic(n, i, s1, s2);
                    CHECK(closed == additive_from_area_measures(n, i, s1, s2));
                    CHECK(closed == additive_kinematic_ftaig(TV::phi(n, i, s1 + s2), s1, s2));
                }
    CHECK_THROWS_AS(additive_kinematic(3, 3, 0, 0), DomainError);
}

TEST_CASE("tables are basis independent") {
    auto t = intersectional_kinematic(4, 1, 3, 2);
    CHECK(t.to_psi() == t);
    CHECK(t.to_psi().to_phi() == t);
    // Q-multiple sources go through the same solver
    auto tq = intersectional_kinematic(TV::phi(4, 2, 2, 1), 2, 2);
    CHECK(!tq.is_zero());
    CHECK(additive_kinematic_ftaig(fourier(TV::phi(4, 2, 2, 1)), 2, 2).map(fourier, fourier) == tq);
}

TEST_CASE("table serialization") {
    auto t = intersectional_kinematic(3, 1, 2, 2);
    auto j = t.to_json();
    CHECK(j["basis_order"] == "degree, then ascending Q-power");
    CHECK(j["left_basis"].size() == j["coeffs"].size());
    auto csv = t.to_csv();
    CHECK(csv.rfind("left\\right,Q^", 0) == 0);
    CHECK(csv.find("Q^1.Phi_{") != std::string::npos);
    CHECK(t.to_csv(true).find("pi") == std::string::npos);
}

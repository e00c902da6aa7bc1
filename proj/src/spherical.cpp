#include "tensorval/spherical.hpp"

#include <cmath>
#include <numeric>

#include "tensorval/valalg.hpp"

namespace tensorval {

namespace {

using ES = ExactScalar;

ES G(long twice) { return gamma_half2(twice); }

void require_range(int n, int k) {
    if (n < 2 || k < 1 || k > n - 1) throw DomainError("multiplier requires n >= 2 and 1 <= k <= n-1");
}

void require_even(int s) {
    if (s < 0 || s % 2) throw DomainError("Radon eigenvalues are defined here for even degrees only");
}

mpq_class poch(const mpq_class& x, int m) {
    mpq_class r = 1;
    for (int i = 0; i < m; ++i) r *= x + i;
    return r;
}

mpq_class binom_q(long n, long k) { return mpq_class(binomial(n, k)); }

std::string point(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += (s.empty() ? "" : ", ") + std::string(k) + "=" + v;
    return s;
}

std::string q_str(const mpq_class& q) { return q.get_str(); }

double moment_u1(int j, int k) {
    if (j % 2) return 0.0;
    return std::tgamma((j + 1) / 2.0) * std::tgamma(k / 2.0) / (std::tgamma(0.5) * std::tgamma((j + k) / 2.0));
}

Vec random_unit(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vec v(n);
    do {
        for (int i = 0; i < n; ++i) v(i) = normal(rng);
    } while (v.norm() < 1e-12);
    return v.normalized();
}

// Average of the zonal harmonic over the unit sphere of span(b).
double subspace_average(const std::vector<double>& coeffs, const Mat& b, const Vec& pole) {
    const int k = static_cast<int>(b.cols());
    const double rho = (b.transpose() * pole).norm();
    double acc = 0, pw = 1;
    for (size_t j = 0; j < coeffs.size(); ++j) {
        acc += coeffs[j] * pw * moment_u1(static_cast<int>(j), k);
        pw *= rho;
    }
    return acc;
}

double horner(const std::vector<double>& c, double t) {
    double r = 0;
    for (size_t j = c.size(); j-- > 0;) r = r * t + c[j];
    return r;
}

// Regression estimate of the eigenvalue: sum g f / sum f^2 over random (point, pole) pairs.
VerificationReport radon_report(const std::string& formula, int n, int s, const ExactScalar& eig, const McConfig& cfg,
                                const std::function<Mat(const Vec&, std::mt19937_64&)>& subspace, nlohmann::json params) {
    const auto coeffs = zonal_coefficients(n, s);
    McKernel kernel = [&](std::mt19937_64& rng, std::vector<double>& out) {
        Vec v = random_unit(n, rng), w = random_unit(n, rng);
        Mat b = subspace(v, rng);
        double g = subspace_average(coeffs, b, w);
        double f = horner(coeffs, v.dot(w));
        out[0] = g * f;
        out[1] = f * f;
        out[2] = g * f * f * f;
        return 1;
    };
    McSums sums = run_blocks(3, kernel, cfg);
    const double nn = static_cast<double>(cfg.samples);
    auto second = [&](int c) { return sums.std_error[c] * sums.std_error[c] * nn + sums.mean[c] * sums.mean[c]; };
    const double est = sums.mean[0] / sums.mean[1];
    const double var = std::max(0.0, second(0) - 2 * est * sums.mean[2] + est * est * second(1));

    VerificationReport rep;
    rep.formula = formula;
    rep.config = {{"samples", cfg.samples}, {"seed", cfg.seed}, {"block", cfg.block}, {"tolerance", cfg.tolerance}};
    rep.config["params"] = std::move(params);
    rep.samples = cfg.samples;
    rep.hits = sums.hits;
    rep.failures = sums.failures;
    rep.tolerance = cfg.tolerance;
    rep.components = {"eigenvalue"};
    rep.estimate = {est};
    rep.predicted = {eig.real_value()};
    rep.std_error = {std::sqrt(var / nn) / sums.mean[1]};
    rep.inconclusive = sums.hits < 1000;
    rep.finalize();
    return rep;
}

}  // namespace

ExactScalar fourier_multiplier(int n, int k, int s) {
    require_range(n, k);
    if (s == 1 || s < 0) throw DomainError("multiplier undefined for s = 1");
    return ES::i_pow(s) * G(n - k) * G(s + k) / (G(k) * G(s + n - k));
}

ExactScalar radon_eigenvalue(int n, int k, int s) {
    require_range(n, k);
    require_even(s);
    return G(n - 1) * G(k) * G(s + n - k) * G(s + 1) / (G(1) * G(n - k) * G(s + k) * G(s + n - 1));
}

ExactScalar spherical_radon_eigenvalue(int n, int s) {
    if (n < 2) throw DomainError("spherical Radon transform requires n >= 2");
    require_even(s);
    ES sign = (s / 2) % 2 ? ES(-1) : ES(1);
    return sign * G(n - 1) * G(s + 1) / (G(1) * G(s + n - 1));
}

ExactScalar even_multiplier_from_radon(int n, int k, int s) {
    return spherical_radon_eigenvalue(n, s) / radon_eigenvalue(n, k, s);
}

std::vector<double> zonal_coefficients(int n, int s) {
    if (n < 2 || s < 0) throw DomainError("zonal harmonic requires n >= 2 and s >= 0");
    const double lambda = (n - 2) / 2.0;
    std::vector<std::vector<double>> p(static_cast<size_t>(s) + 1);
    p[0] = {1.0};
    if (s >= 1) p[1] = {0.0, n == 2 ? 1.0 : 2 * lambda};
    for (int m = 2; m <= s; ++m) {
        std::vector<double> c(static_cast<size_t>(m) + 1, 0.0);
        const double a = n == 2 ? 2.0 : 2.0 * (m + lambda - 1) / m;
        const double b = n == 2 ? 1.0 : (m + 2 * lambda - 2) / m;
        for (size_t j = 0; j < p[m - 1].size(); ++j) c[j + 1] += a * p[m - 1][j];
        for (size_t j = 0; j < p[m - 2].size(); ++j) c[j] -= b * p[m - 2][j];
        p[m] = c;
    }
    return p[s];
}

ZonalHarmonic::ZonalHarmonic(int n_, int s_, Vec pole_) : n(n_), s(s_), pole(std::move(pole_)) {
    if (pole.size() != n) throw DomainError("pole dimension mismatch");
    pole.normalize();
    coeffs_ = zonal_coefficients(n, s);
}

double ZonalHarmonic::operator()(const Vec& u) const { return horner(coeffs_, u.normalized().dot(pole)); }

double ZonalHarmonic::laplacian_fd(const Vec& u, double h) const {
    double acc = 0;
    const double f0 = (*this)(u);
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Unit(n, i) * h;
        acc += (*this)(u + e) - 2 * f0 + (*this)(u - e);
    }
    return acc / (h * h);
}

VerificationReport mc_radon_check(int n, int k, int s, const McConfig& cfg) {
    if (n > 5) throw DomainError("Radon check supports n <= 5");
    ExactScalar eig = radon_eigenvalue(n, k, s);
    auto subspace = [n, k](const Vec& v, std::mt19937_64& rng) {
        Mat b(n, k);
        b.col(0) = v;
        for (int j = 1; j < k; ++j) {
            Vec x = random_unit(n, rng);
            for (int pass = 0; pass < 2; ++pass)
                for (int i = 0; i < j; ++i) x -= b.col(i).dot(x) * b.col(i);
            b.col(j) = x.normalized();
        }
        return b;
    };
    return radon_report("radon", n, s, eig, cfg, subspace, {{"n", n}, {"k", k}, {"s", s}});
}

VerificationReport mc_spherical_radon_check(int n, int s, const McConfig& cfg) {
    if (n > 5) throw DomainError("Radon check supports n <= 5");
    ExactScalar eig = spherical_radon_eigenvalue(n, s);
    auto subspace = [n](const Vec& v, std::mt19937_64&) {
        Eigen::HouseholderQR<Mat> qr{Mat(v)};
        Mat q = qr.householderQ() * Mat::Identity(n, n);
        return Mat(q.rightCols(n - 1));
    };
    return radon_report("spherical-radon", n, s, eig, cfg, subspace, {{"n", n}, {"s", s}});
}

nlohmann::json IdentityCheck::to_json() const {
    return {{"name", name}, {"points", points}, {"failures", failures}, {"passed", passed()}};
}

bool IdentitySuiteReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed()) return false;
    return !checks.empty();
}

nlohmann::json IdentitySuiteReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) arr.push_back(c.to_json());
    return {{"checks", arr}, {"passed", passed()}};
}

IdentityGrid default_identity_grid() {
    IdentityGrid g;
    for (long q : {3L, 5L, 7L})
        for (long p = 1; p <= 4 * q; ++p)
            if (std::gcd(p, q) == 1) g.nu.push_back(make_q(p, q));
    return g;
}

IdentityCheck check_phi_psi_identity(const IdentityGrid& grid) {
    IdentityCheck c{"phi-psi conversion sum", 0, {}};
    for (const auto& nu : grid.nu)
        for (int s = 0; s <= grid.max_s; ++s)
            for (int m = 0; m <= s / 2; ++m) {
                const mpq_class x = nu / 2 + s;
                mpq_class lhs = 0;
                for (int j = 0; j <= m; ++j) {
                    mpq_class t = binom_q(m, j) * (x - 2 * j - 1) / poch(x - m - j - 1, m + 1);
                    lhs += j % 2 ? -t : t;
                }
                ++c.points;
                if (lhs != (m == 0 ? 1 : 0))
                    c.failures.push_back(point({{"nu", q_str(nu)}, {"s", std::to_string(s)}, {"m", std::to_string(m)}}));
            }
    for (int nu = 3; nu <= grid.max_n + 4; ++nu)
        for (int s = 0; s <= grid.max_s; ++s)
            for (int m = 0; m <= s / 2; ++m) {
                ES lhs;
                for (int j = 0; j <= m; ++j) {
                    ES t = ES(binom_q(m, j) * make_q(nu + 2 * s - 4 * j - 2, 2)) * G(nu + 2 * s - 2 * m - 2 * j - 2) /
                           G(nu + 2 * s - 2 * j);
                    lhs += j % 2 ? -t : t;
                }
                ++c.points;
                if (!(lhs == ES(m == 0 ? 1 : 0)))
                    c.failures.push_back(
                        point({{"nu", std::to_string(nu)}, {"s", std::to_string(s)}, {"m", std::to_string(m)}}));
            }
    return c;
}

IdentityCheck check_fourier_identity(const IdentityGrid& grid) {
    IdentityCheck c{"fourier basis-change sum", 0, {}};
    for (const auto& nu : grid.nu)
        for (int k = 1; k <= grid.max_k; ++k)
            for (int s = 0; s <= grid.max_s; ++s)
                for (int m = 0; m <= s / 2; ++m) {
                    const mpq_class x = nu / 2 + s, alpha = make_q(k + s, 2), beta = (nu - k + s) / 2;
                    mpq_class lhs = 0;
                    for (int j = 0; j <= m; ++j)
                        lhs += binom_q(m, j) * (x - 2 * j - 1) * poch(alpha - m, m - j) * poch(beta - j, j) /
                               poch(x - j - m - 1, m + 1);
                    ++c.points;
                    if (lhs != 1)
                        c.failures.push_back(point({{"nu", q_str(nu)},
                                                    {"k", std::to_string(k)},
                                                    {"s", std::to_string(s)},
                                                    {"m", std::to_string(m)}}));
                }
    for (int nu = 3; nu <= grid.max_n + 4; ++nu)
        for (int k = 1; k < nu; ++k)
            for (int s = 0; s <= grid.max_s; ++s)
                for (int m = 0; m <= s / 2; ++m) {
                    ES lhs;
                    for (int j = 0; j <= m; ++j)
                        lhs += ES(binom_q(m, j) * make_q(nu + 2 * s - 4 * j - 2, 2)) * G(k + s - 2 * j) *
                               G(nu + 2 * s - 2 * j - 2 * m - 2) / (G(nu - k + s - 2 * j) * G(nu + 2 * s - 2 * j));
                    ++c.points;
                    if (!(lhs == G(k + s - 2 * m) / G(nu - k + s)))
                        c.failures.push_back(point({{"nu", std::to_string(nu)},
                                                    {"k", std::to_string(k)},
                                                    {"s", std::to_string(s)},
                                                    {"m", std::to_string(m)}}));
                }
    return c;
}

IdentityCheck check_crofton_identity(const IdentityGrid& grid) {
    IdentityCheck c{"crofton coefficient sum", 0, {}};
    const int kmax = std::min(grid.max_k, 6);
    // the rank enters as a real parameter t > 2a
    for (const auto& t : grid.nu)
        for (int k = 1; k <= kmax; ++k)
            for (int l = 1; l <= kmax; ++l)
                for (int a = 0; 2 * a < t; ++a) {
                    const mpq_class alpha = (t + k) / 2, gamma = (t + k + l) / 2;
                    mpq_class lhs = 0;
                    for (int m = 0; m <= a; ++m) {
                        mpq_class term = binom_q(a, m) * poch(alpha - a, a - m) * poch(gamma - m, m);
                        lhs += m % 2 ? -term : term;
                    }
                    mpq_class rhs = poch(make_q(l, 2), a);
                    if (a % 2) rhs = -rhs;
                    ++c.points;
                    if (lhs != rhs)
                        c.failures.push_back(point({{"t", q_str(t)},
                                                    {"k", std::to_string(k)},
                                                    {"l", std::to_string(l)},
                                                    {"a", std::to_string(a)}}));
                }
    for (int s = 0; s <= grid.max_s; ++s)
        for (int k = 1; k <= kmax; ++k)
            for (int l = 1; l <= kmax; ++l)
                for (int a = 0; 2 * a <= s; ++a) {
                    if (2 * a == s - 1) continue;
                    ES lhs;
                    for (int m = 0; m <= a; ++m) {
                        ES term = ES(binom_q(a, m)) * G(s + k - 2 * m) * G(l) / G(s + k + l - 2 * m);
                        lhs += m % 2 ? -term : term;
                    }
                    ES rhs = G(l + 2 * a) * G(s + k - 2 * a) / G(s + k + l);
                    if (a % 2) rhs = -rhs;
                    ++c.points;
                    if (!(lhs == rhs))
                        c.failures.push_back(point({{"s", std::to_string(s)},
                                                    {"k", std::to_string(k)},
                                                    {"l", std::to_string(l)},
                                                    {"a", std::to_string(a)}}));
                }
    return c;
}

IdentityCheck check_multiplier_recursion(int max_n, int max_s) {
    IdentityCheck c{"multiplier recursion in s", 0, {}};
    for (int n = 2; n <= max_n; ++n)
        for (int k = 1; k <= n - 1; ++k) {
            auto where = [&](int s) { return point({{"n", std::to_string(n)}, {"k", std::to_string(k)}, {"s", std::to_string(s)}}); };
            ++c.points;
            if (!(fourier_multiplier(n, k, 0) == ES(1))) c.failures.push_back(where(0));
            for (int s = 0; s + 2 <= max_s; ++s) {
                if (s == 1) continue;
                ++c.points;
                ES ratio = fourier_multiplier(n, k, s + 2) / fourier_multiplier(n, k, s);
                if (!(ratio == ES(make_q(-(k + s), n - k + s)))) c.failures.push_back(where(s));
            }
            for (int s = 0; s <= max_s; ++s) {
                if (s == 1) continue;
                ++c.points;
                ES prod = fourier_multiplier(n, k, s) * fourier_multiplier(n, n - k, s);
                if (!(prod == ES(s % 2 ? -1 : 1))) c.failures.push_back(where(s));
                // agreement with the transform on the trace-free basis
                ++c.points;
                ES to_psi = fourier_multiplier(n, k, s) * G(n - k + s) * G(k) / (G(n - k) * G(k + s));
                bool ok = to_psi == ES::i_pow(s);
                if (s <= kMaxRank)
                    ok = ok && fourier(TensorValuation::psi(n, k, s)) == ES::i_pow(s) * TensorValuation::psi(n, n - k, s);
                if (!ok) c.failures.push_back(where(s));
            }
        }
    return c;
}

IdentityCheck check_rank3_quotient(int max_n) {
    IdentityCheck c{"rank-3 multiplier quotient", 0, {}};
    const ES pi = ES::pi();
    for (int n = 3; n <= max_n; ++n)
        for (int k = 1; k <= n - 2; ++k) {
            ES chi1 = ES(k + 1) * G(k + 5) * G(n) / (ES(2) * G(n + 1) * G(k + 6));
            ES chi2 = G(k + 3) * G(n) / (ES(8) * pi * G(n + 1) * G(k + 6));
            ES pref = G(k + 1) * G(n - k) * G(n - k + 2) * G(n + 1) / (G(n) * G(n - k - 1) * G(n - k + 3) * G(k + 2));
            ES from_chi = pref * (chi1 - ES(6) * pi * chi2);
            ES displayed = ES(static_cast<long>(n - k) * (n - k - 1) * (n - k + 1)) * G(n - k) * G(n - k) * G(k + 3) *
                           G(k + 3) / (ES(static_cast<long>(k) * (k + 2) * (k + 1)) * G(n - k + 3) * G(n - k + 3) * G(k) * G(k));
            ES closed = fourier_multiplier(n, k, 3) / fourier_multiplier(n, k + 1, 3);
            ++c.points;
            if (!(from_chi == displayed && displayed == closed))
                c.failures.push_back(point({{"n", std::to_string(n)}, {"k", std::to_string(k)}}));
        }
    return c;
}

IdentityCheck check_even_multiplier(int max_n, int max_s) {
    IdentityCheck c{"even multiplier from Radon eigenvalues", 0, {}};
    for (int n = 2; n <= max_n; ++n)
        for (int k = 1; k <= n - 1; ++k)
            for (int s = 0; s <= max_s; s += 2) {
                ++c.points;
                if (!(even_multiplier_from_radon(n, k, s) == fourier_multiplier(n, k, s)))
                    c.failures.push_back(point({{"n", std::to_string(n)}, {"k", std::to_string(k)}, {"s", std::to_string(s)}}));
            }
    return c;
}

IdentitySuiteReport verify_identity_suite(const IdentityGrid& grid) {
    IdentitySuiteReport r;
    r.checks.push_back(check_phi_psi_identity(grid));
    r.checks.push_back(check_fourier_identity(grid));
    r.checks.push_back(check_crofton_identity(grid));
    r.checks.push_back(check_multiplier_recursion(grid.max_n, grid.max_s));
    r.checks.push_back(check_rank3_quotient(grid.max_n));
    r.checks.push_back(check_even_multiplier(grid.max_n, grid.max_s));
    return r;
}

}  // namespace tensorval

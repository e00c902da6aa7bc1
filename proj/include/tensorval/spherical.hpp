#pragma once

#include <string>
#include <vector>

#include "tensorval/mcharness.hpp"

namespace tensorval {

// c_{n,k,s} with F(mu_{k,f}) = c_{n,k,s} mu_{n-k,f} for f of degree s.
ExactScalar fourier_multiplier(int n, int k, int s);
// eigenvalue of R_{1,k} R_{k,1} on harmonics of even degree s
ExactScalar radon_eigenvalue(int n, int k, int s);
// eigenvalue of the spherical Radon transform on harmonics of even degree s
ExactScalar spherical_radon_eigenvalue(int n, int s);
// multiplier obtained from the two Radon eigenvalues (even s)
ExactScalar even_multiplier_from_radon(int n, int k, int s);

// Coefficients of the Gegenbauer polynomial C_s^{(n-2)/2} (Chebyshev T_s for n = 2), ascending powers.
std::vector<double> zonal_coefficients(int n, int s);

struct ZonalHarmonic {
    int n = 0, s = 0;
    Vec pole;

    ZonalHarmonic(int n, int s, Vec pole);
    double operator()(const Vec& u) const;
    // Euclidean Laplacian of the 0-homogeneous extension at a unit vector, by central differences
    double laplacian_fd(const Vec& u, double h = 1e-4) const;
    double eigenvalue() const { return -static_cast<double>(s) * (n + s - 2); }

private:
    std::vector<double> coeffs_;
};

// Monte Carlo over Haar subspaces; the average over each sampled subspace sphere is exact.
VerificationReport mc_radon_check(int n, int k, int s, const McConfig& cfg);
VerificationReport mc_spherical_radon_check(int n, int s, const McConfig& cfg);

struct IdentityCheck {
    std::string name;
    long points = 0;
    std::vector<std::string> failures;

    bool passed() const { return failures.empty() && points > 0; }
    nlohmann::json to_json() const;
};

struct IdentityGrid {
    std::vector<mpq_class> nu;  // rational parameter values avoiding poles
    int max_s = 10;
    int max_k = 8;
    int max_n = 8;
};

IdentityGrid default_identity_grid();

struct IdentitySuiteReport {
    std::vector<IdentityCheck> checks;
    bool passed() const;
    nlohmann::json to_json() const;
};

IdentityCheck check_phi_psi_identity(const IdentityGrid& grid);
IdentityCheck check_fourier_identity(const IdentityGrid& grid);
IdentityCheck check_crofton_identity(const IdentityGrid& grid);
IdentityCheck check_multiplier_recursion(int max_n, int max_s);
IdentityCheck check_rank3_quotient(int max_n);
IdentityCheck check_even_multiplier(int max_n, int max_s);

IdentitySuiteReport verify_identity_suite(const IdentityGrid& grid = default_identity_grid());

}  // namespace tensorval

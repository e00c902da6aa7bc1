#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tensorval/bodies.hpp"
#include "tensorval/kinops.hpp"

namespace tensorval {

struct MotionSample {
    Mat rotation;
    Vec translation;
    double weight = 1.0;
};

struct FlatSample {
    Mat basis;   // n x dim, orthonormal
    Vec offset;  // orthogonal to the basis
    double weight = 1.0;
};

// Haar-distributed element of O(n).
Mat sample_rotation(int n, std::mt19937_64& rng);
// Affine flat of dimension dim meeting the ball of the given radius, weighted by the measure of all such flats.
FlatSample sample_flat(int n, int dim, double radius, std::mt19937_64& rng);

struct McConfig {
    long samples = 100000;
    std::uint64_t seed = kDefaultSeed;
    long block = 1024;
    bool parallel = true;
    double tolerance = 0.02;
    ConeOptions cones;
};

struct VerificationReport {
    std::string formula;
    nlohmann::json config;
    long samples = 0;
    long hits = 0;
    long failures = 0;
    std::vector<std::string> components;
    std::vector<double> estimate, predicted, rel_error, std_error;
    double max_rel_error = 0;
    double tolerance = 0;
    bool inconclusive = false;
    bool passed = false;

    nlohmann::json to_json() const;
    // compares estimate and prediction; zero predictions are judged against three standard errors
    void finalize();
};

// Per-sample integrand: fills the weighted contribution and returns 1 (hit), 0 (miss) or -1 (failure).
using McKernel = std::function<int(std::mt19937_64& rng, std::vector<double>& out)>;

struct McSums {
    std::vector<double> mean, std_error;
    long hits = 0, failures = 0;
};

// Fixed blocks with counter-derived seeds, reduced in block order: results do not depend on thread count.
McSums run_blocks(size_t width, const McKernel& kernel, const McConfig& cfg);

SymTensor evaluate(const TensorValuation& v, int rank, const Body& body, const ConeOptions& opt = {});
BiTensor evaluate(const KinematicTable& t, const Body& k, const Body& l, const ConeOptions& opt = {});

VerificationReport mc_crofton(const Polytope& body, int k, int s, int l, const McConfig& cfg);
VerificationReport mc_additive(const Polytope& k, const Polytope& l, int i, int s1, int s2, const McConfig& cfg);
VerificationReport mc_intersectional(const Polytope& k, const Polytope& l, int i, int s1, int s2, const McConfig& cfg);
// measure of flats of dimension dim meeting the unit ball, against kappa_{n-dim}
VerificationReport mc_flat_measure(int n, int dim, const McConfig& cfg);

}  // namespace tensorval

// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <omp.h>
#include <random>
#include <sstream>
#include <string>

#include "tensorval/cli.hpp"
#include "tensorval/mcharness.hpp"
#include "tensorval/spherical.hpp"

using namespace tensorval;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failed = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail << " [exception: " << e.what() << "]";
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > budget_s) {
        o.ok = false;
        o.detail << " [over time budget " << budget_s << " s]";
    }
    if (!o.ok) ++failed;
    std::printf("%s %2d %s:%s (%.1f s)\n", o.ok ? "PASS" : "FAIL", id, name.c_str(), o.detail.str().c_str(), dt);
    std::fflush(stdout);
}

void suite(Outcome& o, const std::string& name, const std::vector<int>& dims = {}) {
    SuiteReport r = run_suite(name, dims);
    o.detail << " " << name << " " << r.points - static_cast<long>(r.failures.size()) << "/" << r.points;
    o.require(r.passed(), name + (r.failures.empty() ? "" : " first failure " + r.failures.front()));
}

void mc(Outcome& o, const std::string& label, const VerificationReport& r) {
    o.detail << " " << label << " err " << r.max_rel_error * 100 << "% (tol " << r.tolerance * 100 << "%)";
    o.require(r.passed && !r.inconclusive, label);
}

double intrinsic(const Body& b, int k, const ConeOptions& opt = {}) { return minkowski_tensor(b, k, 0, opt)[0]; }

Polytope octahedron() {
    std::vector<Vec> pts;
    for (int i = 0; i < 3; ++i) {
        pts.push_back(Vec::Unit(3, i));
        pts.push_back(-Vec::Unit(3, i));
    }
    return Polytope::from_points(pts);
}

// vol(K + rB) by uniform sampling of a box around the parallel body
double parallel_volume(const Polytope& p, double r, long samples, std::uint64_t seed) {
    const int n = p.ambient_dim();
    Vec lo = p.bbox_min().array() - r, hi = p.bbox_max().array() + r;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    long in = 0;
    Vec x(n);
    for (long t = 0; t < samples; ++t) {
        for (int i = 0; i < n; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
        in += p.distance(x) <= r;
    }
    return (hi - lo).prod() * static_cast<double>(in) / samples;
}

}  // namespace

int main() {
    criterion(1, "intersectional kinematic formulas of bi-rank (2,2), (3,2), (3,3)", 60,
              [](Outcome& o) { suite(o, "intersectional", {3, 4, 5, 6}); });

    criterion(2, "additive kinematic formula and the Fourier route", 60, [](Outcome& o) {
        suite(o, "additive", {2, 3, 4, 5, 6});
        suite(o, "ftaig", {2, 3, 4, 5});
    });

    criterion(3, "algebra consistency", 60, [](Outcome& o) { suite(o, "algebra", {2, 3, 4, 5, 6}); });

    criterion(4, "Crofton consistency", 10, [](Outcome& o) { suite(o, "crofton", {2, 3, 4, 5, 6}); });

    criterion(5, "Poincare pairings", 10, [](Outcome& o) { suite(o, "pairings", {2, 3, 4, 5, 6}); });

    criterion(6, "identity suites and multiplier relations", 30, [](Outcome& o) {
        auto rep = verify_identity_suite();
        for (const auto& c : rep.checks) {
            o.detail << " " << c.name << " " << c.points;
            o.require(c.passed(), c.name);
            if (c.name.find("sum") != std::string::npos) o.require(c.points >= 200, c.name + " has fewer than 200 points");
        }
    });

    criterion(7, "numeric Minkowski tensors", 300, [](Outcome& o) {
        ConeOptions sampled;
        sampled.mode = ConeMode::Sampled;
        sampled.samples = 1000000;
        double worst = 0;
        for (int n = 2; n <= 4; ++n)
            for (int k = 0; k <= n; ++k) {
                const double want = std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0));
                worst = std::max(worst, std::abs(intrinsic(cube(n), k, sampled) / want - 1));
            }
        o.detail << " cube external angles max rel err " << worst * 100 << "%";
        o.require(worst <= 0.005, "cube intrinsic volumes");

        SymTensor b = minkowski_tensor(make_ball(3), 2, 2);
        double dev = (b - (1.0 / 6) * SymTensor::metric(3)).max_abs();
        o.detail << ", ball |Phi_{2,2} - Q/6| " << dev;
        o.require(dev <= 1e-12, "ball closed form");

        double steiner = 0;
        for (const Polytope& p : {cube(3), standard_simplex(3), octahedron()}) {
            const double r = 0.5;
            double pred = 0;
            for (int k = 0; k <= 3; ++k) pred += kappa_d(3 - k) * std::pow(r, 3 - k) * intrinsic(p, k);
            steiner = std::max(steiner, std::abs(parallel_volume(p, r, 4000000, 99) / pred - 1));
        }
        o.detail << ", Steiner max rel err " << steiner * 100 << "%";
        o.require(steiner <= 0.005, "Steiner formula");

        ConeOptions odd = sampled;
        odd.samples = 200000;
        double z = 0;
        for (const Polytope& p : {cube(3, 1.0, true), octahedron()})
            for (int k = 0; k <= 2; ++k)
                for (int s : {3, 5}) {
                    auto e = minkowski_tensor_estimate(p, k, s, odd);
                    for (size_t i = 0; i < e.value.size(); ++i)
                        if (e.std_error[i] > 0) z = std::max(z, std::abs(e.value[i]) / e.std_error[i]);
                        else o.require(std::abs(e.value[i]) < 1e-12, "odd-rank tensor without sampling error");
                }
        o.detail << ", odd ranks max |z| " << z;
        o.require(z <= 3, "odd-rank tensors of symmetric bodies");
    });

    criterion(8, "Monte Carlo verification of integral-geometric formulas", 1800, [](Outcome& o) {
        Polytope c = cube(3, 1.0, true);
        McConfig cfg;
        cfg.samples = 1000000;
        cfg.tolerance = 0.02;
        mc(o, "crofton", mc_crofton(c, 1, 2, 1, cfg));
        cfg.samples = 100000;
        mc(o, "additive", mc_additive(c, c, 1, 2, 2, cfg));
        cfg.tolerance = 0.05;
        mc(o, "intersectional", mc_intersectional(c, c, 1, 2, 2, cfg));
        cfg.tolerance = 0.02;
        mc(o, "principal kinematic", mc_intersectional(c, c, 0, 0, 0, cfg));
    });

    criterion(9, "Radon eigenvalues", 300, [](Outcome& o) {
        McConfig cfg;
        cfg.samples = 1000000;
        cfg.tolerance = 0.01;
        for (auto [n, k, s] : {std::tuple{3, 2, 2}, {4, 2, 2}, {4, 3, 4}})
            mc(o, "R(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(s) + ")", mc_radon_check(n, k, s, cfg));
        auto r = mc_spherical_radon_check(3, 2, cfg);
        mc(o, "spherical(3,2)", r);
        o.require(std::abs(r.predicted[0] + 0.5) < 1e-15, "spherical eigenvalue -1/2");
    });

    criterion(10, "determinism", 600, [](Outcome& o) {
        // several workers even on a single core, so the block schedule really interleaves
        omp_set_num_threads(4);
        Polytope c = cube(3, 1.0, true);
        McConfig par;
        par.samples = 100000;
        McConfig ser = par;
        ser.parallel = false;
        auto a = mc_crofton(c, 1, 2, 1, par).to_json().dump();
        o.require(a == mc_crofton(c, 1, 2, 1, ser).to_json().dump(), "crofton serial vs parallel");
        o.require(a == mc_crofton(c, 1, 2, 1, par).to_json().dump(), "crofton rerun");
        par.samples = ser.samples = 5000;
        auto b = mc_intersectional(c, c, 1, 2, 2, par).to_json().dump();
        o.require(b == mc_intersectional(c, c, 1, 2, 2, ser).to_json().dump(), "intersectional serial vs parallel");
        auto d = mc_additive(c, c, 1, 2, 2, par).to_json().dump();
        o.require(d == mc_additive(c, c, 1, 2, 2, ser).to_json().dump(), "additive serial vs parallel");
        par.samples = ser.samples = 200000;
        auto r = mc_radon_check(4, 2, 2, par).to_json().dump();
        o.require(r == mc_radon_check(4, 2, 2, ser).to_json().dump(), "radon serial vs parallel");
        // the embedded config alone reproduces the report
        auto cfg = nlohmann::json::parse(a)["config"];
        McConfig from;
        from.samples = cfg["samples"];
        from.seed = cfg["seed"];
        from.block = cfg["block"];
        from.tolerance = cfg["tolerance"];
        o.require(a == mc_crofton(c, 1, 2, 1, from).to_json().dump(), "rebuild from embedded config");
        o.detail << " crofton, intersectional, additive and Radon reports are bit-identical across reruns and thread modes";
    });

    return failed == 0 ? 0 : 1;
}

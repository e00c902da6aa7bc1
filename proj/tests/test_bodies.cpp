#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tensorval/bodies.hpp"
#include "tensorval/mcharness.hpp"

using namespace tensorval;

namespace {

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

double scalar(const SymTensor& t) { return t[0]; }

std::vector<double> flat(const Mat& g) {
    std::vector<double> v;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) v.push_back(g(i, j));
    return v;
}

}  // namespace

TEST_CASE("cube combinatorics and intrinsic volumes") {
    for (int n = 1; n <= 4; ++n) {
        Polytope c = cube(n);
        CHECK(c.dim() == n);
        for (int k = 0; k <= n; ++k) {
            CHECK(c.faces(k).size() == static_cast<size_t>(std::lround(binom(n, k) * std::pow(2, n - k))));
            // cones of dimension >= 3 are sampled even in the automatic mode
            auto e = minkowski_tensor_estimate(c, k, 0);
            CHECK(std::abs(e.value[0] - binom(n, k)) <= 4 * e.std_error[0] + 1e-12 * binom(n, k));
        }
    }
}

TEST_CASE("simplex intrinsic volumes") {
    Polytope s = standard_simplex(3);
    CHECK(s.volume() == doctest::Approx(1.0 / 6));
    // surface area / 2: three right triangles of area 1/2 and one equilateral of side sqrt 2
    CHECK(scalar(minkowski_tensor(s, 2, 0)) == doctest::Approx((1.5 + std::sqrt(3.0) / 2) / 2));
    CHECK(scalar(minkowski_tensor(s, 0, 0)) == doctest::Approx(1.0));
    // mean width of the triangle (0,0),(1,0),(0,1) in the plane: half the perimeter
    Polytope t = standard_simplex(2);
    CHECK(scalar(minkowski_tensor(t, 1, 0)) == doctest::Approx((2 + std::sqrt(2.0)) / 2));
}

TEST_CASE("ball closed forms") {
    SymTensor t = minkowski_tensor(make_ball(3), 2, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(t.at({i, j}) - (i == j ? 1.0 / 6 : 0.0)) < 1e-12);
    CHECK(scalar(minkowski_tensor(make_ball(3, 2.0), 3, 0)) == doctest::Approx(4 * M_PI * 8 / 3));
    CHECK(scalar(minkowski_tensor(make_ball(2), 1, 0)) == doctest::Approx(M_PI));
}

TEST_CASE("rank-two tensor of the cube") {
    // Phi_{2,2}([0,1]^3) = (1/(omega_3 2!)) sum over facets of area * u u^T = I/(4 pi)
    SymTensor t = minkowski_tensor(cube(3), 2, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(t.at({i, j}) - (i == j ? 1 / (4 * M_PI) : 0.0)) < 1e-12);
}

TEST_CASE("sampled cones reproduce the closed forms") {
    ConeOptions opt;
    opt.mode = ConeMode::Sampled;
    opt.samples = 200000;
    auto e = minkowski_tensor_estimate(cube(3), 1, 0, opt);
    CHECK(std::abs(e.value[0] - 3) < 4 * e.std_error[0] + 1e-9);
    CHECK(e.std_error[0] > 0);
    auto odd = minkowski_tensor_estimate(cube(3, 1.0, true), 1, 3, opt);
    for (size_t p = 0; p < odd.value.size(); ++p) CHECK(std::abs(odd.value[p]) <= 3 * odd.std_error[p] + 1e-12);
}

TEST_CASE("motion covariance") {
    std::mt19937_64 rng(3);
    Polytope p = Polytope::from_points({Vec::Zero(3), Vec::Unit(3, 0), Vec::Unit(3, 1) * 2, Vec::Unit(3, 2), Vec::Ones(3)});
    Mat g = sample_rotation(3, rng);
    Vec t = Vec::Random(3);
    Polytope q = p.transformed(g, t);
    for (int k = 0; k <= 2; ++k)
        for (int s : {0, 2, 3}) {
            SymTensor a = transform(minkowski_tensor(p, k, s), flat(g));
            SymTensor b = minkowski_tensor(q, k, s);
            CHECK((a - b).max_abs() < 1e-10);
        }
    CHECK(q.volume() == doctest::Approx(p.volume()));
    CHECK(minkowski_tensor(p, 1, 1).max_abs() < 1e-12);
    CHECK(p.facet_normal_sum().norm() < 1e-12);
}

TEST_CASE("halfspace construction, intersection and Minkowski sum") {
    Mat a(4, 2);
    a << 1, 0, -1, 0, 0, 1, 0, -1;
    Vec b(4);
    b << 1, 0, 1, 0;
    auto sq = Polytope::from_halfspaces(a, b);
    REQUIRE(sq.has_value());
    CHECK(sq->vertices().size() == 4);
    CHECK(sq->volume() == doctest::Approx(1));
    Vec b2(4);
    b2 << -1, 0, 1, 0;
    CHECK(!Polytope::from_halfspaces(a, b2).has_value());

    Polytope c = cube(3);
    auto i = intersect(c, c.translated(Vec::Constant(3, 0.5)));
    REQUIRE(i.has_value());
    CHECK(i->volume() == doctest::Approx(0.125));
    CHECK(!intersect(c, c.translated(Vec::Constant(3, 2.0))).has_value());

    Polytope m = minkowski_sum(c, standard_simplex(3));
    // mixed volumes: V(C+S) = sum_k C(3,k) V(C[3-k],S[k])
    CHECK(m.volume() == doctest::Approx(1 + 3 * 1.0 + 3 * 0.5 + 1.0 / 6).epsilon(1e-9));
    CHECK(scalar(minkowski_tensor(m, 1, 0)) ==
          doctest::Approx(scalar(minkowski_tensor(c, 1, 0)) + scalar(minkowski_tensor(standard_simplex(3), 1, 0))));
}

TEST_CASE("lower-dimensional polytopes") {
    Polytope sq = Polytope::from_points({Vec::Zero(3), Vec::Unit(3, 0), Vec::Unit(3, 1), Vec::Unit(3, 0) + Vec::Unit(3, 1)});
    CHECK(sq.dim() == 2);
    CHECK(sq.volume() == 0);
    CHECK(scalar(minkowski_tensor(sq, 2, 0)) == doctest::Approx(1));
    CHECK(scalar(minkowski_tensor(sq, 1, 0)) == doctest::Approx(2));
    CHECK(scalar(minkowski_tensor(sq, 0, 0)) == doctest::Approx(1));
    Mat basis = Mat::Identity(3, 3).leftCols(2);
    auto sec = intersect_flat(cube(3), basis, Vec::Constant(3, 0.5).cwiseProduct(Vec::Unit(3, 2)));
    REQUIRE(sec.has_value());
    CHECK(scalar(minkowski_tensor(*sec, 2, 0)) == doctest::Approx(1));
}

TEST_CASE("containment and distance") {
    Polytope c = cube(3);
    Vec x(3);
    x << 0.5, 0.5, 0.5;
    CHECK(c.contains(x));
    CHECK(c.distance(x) == 0);
    x << 2, 0.5, 0.5;
    CHECK(!c.contains(x));
    CHECK(c.distance(x) == doctest::Approx(1));
    x << 2, 2, 2;
    CHECK(c.distance(x) == doctest::Approx(std::sqrt(3.0)));
    x << 2, 2, 0.5;
    CHECK(c.distance(x) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("body json") {
    auto j = nlohmann::json::parse(R"({"type":"polytope","vertices":[[0,0],[1,0],[0,1]]})");
    Body b = body_from_json(j);
    CHECK(ambient_dim(b) == 2);
    CHECK(body_to_json(body_from_json(body_to_json(b))) == body_to_json(b));
    Body ball = body_from_json(nlohmann::json::parse(R"({"type":"ball","r":2,"center":[0,0,1]})"));
    CHECK(std::get<Ball>(ball).r == 2);
    CHECK_THROWS(body_from_json(nlohmann::json::parse(R"({"type":"cylinder"})")));
}

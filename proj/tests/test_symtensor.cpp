#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tensorval/symtensor.hpp"

using namespace tensorval;

namespace {

std::vector<double> rand_vec(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

SymTensor random_tensor(int n, int r, std::mt19937_64& rng) {
    SymTensor t(n, r);
    std::normal_distribution<double> d;
    for (size_t p = 0; p < t.size(); ++p) t[p] = d(rng);
    return t;
}

// Full dense contraction over all index tuples, independent of the packed storage.
double brute_inner(const SymTensor& a, const SymTensor& b) {
    const int n = a.dim(), r = a.rank();
    std::vector<int> idx(r, 0);
    double acc = 0;
    while (true) {
        acc += a.at(idx) * b.at(idx);
        int j = 0;
        while (j < r && ++idx[j] == n) idx[j++] = 0;
        if (j == r) break;
    }
    return acc;
}

}  // namespace

TEST_CASE("packed sizes are binomial") {
    for (int n = 1; n <= 6; ++n)
        for (int r = 0; r <= 6; ++r) {
            double want = std::tgamma(n + r) / (std::tgamma(r + 1.0) * std::tgamma(n));
            CHECK(SymTensor(n, r).size() == static_cast<size_t>(std::lround(want)));
        }
}

TEST_CASE("powers evaluate to powers of the inner product") {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 5; ++n)
        for (int s = 0; s <= 6; ++s) {
            auto y = rand_vec(n, rng), x = rand_vec(n, rng);
            CHECK(power(y, s).eval(x) == doctest::Approx(std::pow(dot(x, y), s)));
            CHECK(inner(power(x, s), power(y, s)) == doctest::Approx(std::pow(dot(x, y), s)));
        }
}

TEST_CASE("inner product matches the dense sum") {
    std::mt19937_64 rng(2);
    for (int n = 1; n <= 4; ++n)
        for (int r = 0; r <= 4; ++r) {
            auto a = random_tensor(n, r, rng), b = random_tensor(n, r, rng);
            CHECK(inner(a, b) == doctest::Approx(brute_inner(a, b)));
        }
}

TEST_CASE("symmetric product is multiplicative on polynomials") {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 4; ++n)
        for (int r = 0; r <= 3; ++r)
            for (int t = 0; t <= 3; ++t) {
                auto a = random_tensor(n, r, rng), b = random_tensor(n, t, rng);
                auto x = rand_vec(n, rng);
                CHECK(sym_product(a, b).eval(x) == doctest::Approx(a.eval(x) * b.eval(x)));
            }
}

TEST_CASE("metric powers and traces") {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 5; ++n) {
        CHECK(trace(SymTensor::metric(n)).eval({}) == doctest::Approx(n));
        auto x = rand_vec(n, rng);
        for (int a = 0; a <= 3; ++a) CHECK(metric_power(n, a).eval(x) == doctest::Approx(std::pow(dot(x, x), a)));
        for (int s = 2; s <= 6; ++s) {
            auto y = rand_vec(n, rng);
            SymTensor want = dot(y, y) * power(y, s - 2);
            CHECK((trace(power(y, s)) - want).max_abs() < 1e-10 * std::pow(dot(y, y), s / 2.0));
        }
    }
}

TEST_CASE("contraction of powers") {
    std::mt19937_64 rng(5);
    auto x = rand_vec(3, rng), y = rand_vec(3, rng);
    SymTensor c = contract(power(x, 2), power(y, 5));
    SymTensor want = std::pow(dot(x, y), 2) * power(y, 3);
    CHECK((c - want).max_abs() < 1e-10);
    CHECK_THROWS(contract(power(x, 3), power(y, 2)));
}

TEST_CASE("linear transforms act factorwise") {
    std::mt19937_64 rng(6);
    for (int n = 2; n <= 4; ++n) {
        auto g = rand_vec(n * n, rng);
        auto y = rand_vec(n, rng);
        std::vector<double> gy(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gy[i] += g[i * n + j] * y[j];
        for (int s = 0; s <= 4; ++s)
            CHECK((transform(power(y, s), g) - power(gy, s)).max_abs() < 1e-9 * (1 + power(gy, s).max_abs()));
    }
}

TEST_CASE("splitting a power gives the outer product of powers") {
    std::mt19937_64 rng(7);
    auto y = rand_vec(3, rng);
    BiTensor b = BiTensor::split(power(y, 5), 2);
    BiTensor o = BiTensor::outer(power(y, 2), power(y, 3));
    REQUIRE(b.rows() == o.rows());
    REQUIRE(b.cols() == o.cols());
    for (size_t i = 0; i < b.rows(); ++i)
        for (size_t j = 0; j < b.cols(); ++j) CHECK(b(i, j) == doctest::Approx(o(i, j)));
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(8);
    auto t = random_tensor(3, 3, rng);
    auto u = SymTensor::from_json(t.to_json());
    CHECK((t - u).max_abs() == 0.0);
}

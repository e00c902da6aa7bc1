#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tensorval/exact.hpp"
#include "tensorval/random.hpp"
#include "tensorval/symtensor.hpp"

namespace tensorval {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kMaxBodyDim = 4;

struct Face {
    int dim = 0;
    std::vector<int> vertices;  // indices into Polytope::vertices()
    Mat basis;                  // n x dim, orthonormal basis of the direction space
    Vec centroid;
    double volume = 0;
    std::vector<int> children;  // indices of the (dim-1)-faces
};

// Convex polytope of any dimension d <= n in R^n, n <= 4.
class Polytope {
public:
    static Polytope from_points(const std::vector<Vec>& points);
    // Returns nullopt when the system {A x <= b} is empty; the set must be bounded.
    static std::optional<Polytope> from_halfspaces(const Mat& a, const Vec& b);

    int ambient_dim() const { return n_; }
    int dim() const { return d_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<Face>& faces(int k) const { return faces_.at(k); }
    const Face& top() const { return faces_.at(d_).front(); }
    // A x <= b; lower-dimensional polytopes include opposite pairs for their affine hull
    const Mat& normals() const { return a_; }
    const Vec& offsets() const { return b_; }
    const std::vector<Vec>& edge_directions() const { return edges_; }

    double volume() const { return d_ == n_ ? top().volume : 0.0; }
    Vec bbox_min() const;
    Vec bbox_max() const;
    double scale() const;

    bool contains(const Vec& x, double tol = 1e-9) const;
    double distance(const Vec& x) const;
    // sum over facets of volume times outward unit normal (within the affine hull)
    Vec facet_normal_sum() const;

    Polytope transformed(const Mat& g, const Vec& t) const;  // x -> g x + t
    Polytope translated(const Vec& t) const;
    Polytope scaled(double c) const;

private:
    friend Polytope minkowski_sum(const Polytope& p, const Polytope& q);
    friend std::optional<Polytope> intersect_flat(const Polytope& p, const Mat& basis, const Vec& origin);

    static Polytope build(std::vector<Vec> points, std::vector<Vec> directions, const std::vector<Vec>& normals);

    int n_ = 0, d_ = 0;
    std::vector<Vec> vertices_;
    std::vector<std::vector<Face>> faces_;
    std::vector<Vec> edges_;
    Mat a_;
    Vec b_;
};

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q);
// P intersected with the affine flat origin + span(basis); basis has orthonormal columns
std::optional<Polytope> intersect_flat(const Polytope& p, const Mat& basis, const Vec& origin);
Polytope minkowski_sum(const Polytope& p, const Polytope& q);

Polytope cube(int n, double side = 1.0, bool centered = false);
Polytope standard_simplex(int n);

struct Ball {
    int n = 0;
    double r = 1.0;
    Vec center;
};

Ball make_ball(int n, double r = 1.0);

using Body = std::variant<Polytope, Ball>;

int ambient_dim(const Body& body);
double support_radius(const Body& body);
Body body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const Body& body);

enum class ConeMode {
    Auto,    // closed forms and arc quadrature where available, sampling otherwise
    Sampled  // rejection sampling for every cone of dimension >= 2, including degree 0
};

struct ConeOptions {
    long samples = 100000;
    std::uint64_t seed = kDefaultSeed;
    ConeMode mode = ConeMode::Auto;
};

struct TensorEstimate {
    SymTensor value;
    SymTensor std_error;
};

// Phi_{k,s}(K) with the standard error of the sampled normal-cone moments.
TensorEstimate minkowski_tensor_estimate(const Body& body, int k, int s, const ConeOptions& opt = {});
SymTensor minkowski_tensor(const Body& body, int k, int s, const ConeOptions& opt = {});

// integral of y^s over the unit sphere of an m-dimensional subspace, as a multiple of the projection metric power
double sphere_moment(int m, int s);
double omega_d(int m);
double kappa_d(int m);

}  // namespace tensorval

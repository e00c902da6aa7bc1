#include "tensorval/bodies.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>

namespace tensorval {

namespace {

constexpr double kRankTol = 1e-9;
constexpr double kPi = std::numbers::pi;

using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxBodyDim, kMaxBodyDim>;
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxBodyDim, 1>;

// Orthonormal basis of span(vs) by twice-iterated Gram-Schmidt; residuals below tol are dropped.
Mat orthonormal_span(const std::vector<Vec>& vs, int dim, double tol) {
    std::vector<Vec> basis;
    for (const auto& v : vs) {
        Vec r = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) r -= b.dot(r) * b;
        double nr = r.norm();
        if (nr > tol) basis.push_back(r / nr);
        if (static_cast<int>(basis.size()) == dim) break;
    }
    Mat m(dim, static_cast<Eigen::Index>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = basis[j];
    return m;
}

Mat affine_basis(const std::vector<Vec>& pts, const std::vector<int>& idx, double tol) {
    std::vector<Vec> diffs;
    for (size_t i = 1; i < idx.size(); ++i) diffs.push_back(pts[idx[i]] - pts[idx[0]]);
    return orthonormal_span(diffs, static_cast<int>(pts[idx[0]].size()), tol);
}

Vec centroid_of(const std::vector<Vec>& pts, const std::vector<int>& idx) {
    Vec c = Vec::Zero(pts[idx[0]].size());
    for (int i : idx) c += pts[i];
    return c / static_cast<double>(idx.size());
}

std::vector<int> intersect_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

void for_each_combination(int total, int choose, const std::function<void(const std::vector<int>&)>& fn) {
    if (choose > total || choose < 0) return;
    std::vector<int> c(choose);
    for (int i = 0; i < choose; ++i) c[i] = i;
    while (true) {
        fn(c);
        int i = choose - 1;
        while (i >= 0 && c[i] == total - choose + i) --i;
        if (i < 0) return;
        ++c[i];
        for (int j = i + 1; j < choose; ++j) c[j] = c[j - 1] + 1;
    }
}

void add_unique_direction(std::vector<Vec>& dirs, Vec v) {
    double nv = v.norm();
    if (nv < 1e-12) return;
    v /= nv;
    for (const auto& u : dirs)
        if (std::abs(u.dot(v)) > 1.0 - 1e-12) return;
    dirs.push_back(v);
}

// Unit normal to d-1 directions in R^d, or empty if they are dependent.
std::optional<Vec> common_normal(const std::vector<Vec>& dirs, const std::vector<int>& pick, int d) {
    if (d == 2) {
        const Vec& a = dirs[pick[0]];
        Vec u(2);
        u << -a(1), a(0);
        return u;
    }
    if (d == 3) {
        Eigen::Vector3d a = dirs[pick[0]], b = dirs[pick[1]];
        Eigen::Vector3d u = a.cross(b);
        if (u.norm() < 1e-10) return std::nullopt;
        return Vec(u.normalized());
    }
    Mat s(d - 1, d);
    for (int i = 0; i < d - 1; ++i) s.row(i) = dirs[pick[i]].transpose();
    Eigen::FullPivLU<Mat> lu(s);
    lu.setThreshold(1e-10);
    if (lu.rank() != d - 1) return std::nullopt;
    Vec u = lu.kernel().col(0);
    return Vec(u.normalized());
}

double scale_of(const std::vector<Vec>& pts) {
    double s = 1.0;
    for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
    return s;
}

// Gauss-Legendre nodes and weights on [-1, 1].
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre() {
    static const auto rule = [] {
        const int m = 24;
        std::vector<double> x(m), w(m);
        for (int i = 0; i < m; ++i) {
            double z = std::cos(kPi * (i + 0.75) / (m + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = z;
                for (int j = 2; j <= m; ++j) {
                    double p2 = ((2 * j - 1) * z * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = m * (z * p1 - p0) / (z * z - 1);
                double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) {
                    x[i] = z;
                    w[i] = 2 / ((1 - z * z) * dp * dp);
                    break;
                }
                x[i] = z;
                w[i] = 2 / ((1 - z * z) * dp * dp);
            }
        }
        return std::make_pair(x, w);
    }();
    return rule;
}

void add_power(SymTensor& t, const Vec& y, double w) {
    const auto& tuples = t.index().tuples;
    for (size_t pos = 0; pos < tuples.size(); ++pos) {
        double p = w;
        for (int i : tuples[pos]) p *= y(i);
        t[pos] += p;
    }
}

SymTensor projection_metric_power(const Mat& w, int a) {
    const int n = static_cast<int>(w.rows());
    SymTensor q(n, 2);
    Mat p = w * w.transpose();
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) q.set({i, j}, p(i, j));
    SymTensor r = SymTensor::scalar(n, 1.0);
    for (int i = 0; i < a; ++i) r = sym_product(r, q);
    return r;
}

// Moment of y^s over the sphere of a full subspace spanned by the columns of w.
SymTensor subspace_moment(const Mat& w, int s) {
    const int n = static_cast<int>(w.rows());
    if (s % 2) return SymTensor(n, s);
    SymTensor t = projection_metric_power(w, s / 2);
    t *= sphere_moment(static_cast<int>(w.cols()), s);
    return t;
}

Mat complement_basis(const Mat& b, int n) {
    if (b.cols() == 0) return Mat::Identity(n, n);
    Eigen::HouseholderQR<Mat> qr(b);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    return q.rightCols(n - b.cols());
}

double factorial_d(int s) { return std::tgamma(s + 1.0); }

// Integral of y^s over N(P,F) cap S^{n-1}; adds the estimate and its variance.
void cone_moment(const Polytope& p, const Face& f, int s, const ConeOptions& opt, std::uint64_t seed, SymTensor& mean,
                 SymTensor& var) {
    const int n = p.ambient_dim();
    const int m = n - f.dim;
    Mat w = complement_basis(f.basis, n);
    const double tol = kRankTol * p.scale();
    std::vector<Vec> cons;
    for (const auto& v : p.vertices()) {
        Vec c = w.transpose() * (v - f.centroid);
        double nc = c.norm();
        if (nc > tol) cons.push_back(c / nc);
    }
    if (cons.empty()) {
        mean += subspace_moment(w, s);
        return;
    }
    auto inside = [&](const Vec& g, double eps) {
        for (const auto& c : cons)
            if (c.dot(g) > eps) return false;
        return true;
    };
    if (m == 1) {
        for (double e : {1.0, -1.0}) {
            Vec g(1);
            g << e;
            if (inside(g, 1e-9)) add_power(mean, w.col(0) * e, 1.0);
        }
        return;
    }
    if (m == 2 && opt.mode == ConeMode::Auto) {
        std::vector<double> br;
        for (const auto& c : cons) {
            double phi = std::atan2(c(1), c(0));
            for (double b : {phi + kPi / 2, phi - kPi / 2}) br.push_back(std::fmod(b + 4 * kPi, 2 * kPi));
        }
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), br.end());
        const auto& [gx, gw] = gauss_legendre();
        for (size_t i = 0; i < br.size(); ++i) {
            double a = br[i], b = i + 1 < br.size() ? br[i + 1] : br[0] + 2 * kPi;
            if (b - a < 1e-15) continue;
            double mid = 0.5 * (a + b);
            Vec g(2);
            g << std::cos(mid), std::sin(mid);
            if (!inside(g, 1e-12)) continue;
            for (size_t q = 0; q < gx.size(); ++q) {
                double th = a + (b - a) * (gx[q] + 1) / 2;
                Vec y = w.col(0) * std::cos(th) + w.col(1) * std::sin(th);
                add_power(mean, y, (b - a) / 2 * gw[q]);
            }
        }
        return;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SymTensor sum(n, s), sumsq(n, s), term(n, s);
    Vec g(m);
    for (long i = 0; i < opt.samples; ++i) {
        for (int j = 0; j < m; ++j) g(j) = normal(rng);
        g.normalize();
        if (!inside(g, 0.0)) continue;
        std::fill(term.data().begin(), term.data().end(), 0.0);
        add_power(term, w * g, 1.0);
        for (size_t q = 0; q < term.size(); ++q) {
            sum[q] += term[q];
            sumsq[q] += term[q] * term[q];
        }
    }
    const double om = omega_d(m), nn = static_cast<double>(opt.samples);
    for (size_t q = 0; q < term.size(); ++q) {
        double mu = sum[q] / nn;
        mean[q] += om * mu;
        var[q] += om * om * std::max(0.0, sumsq[q] / nn - mu * mu) / nn;
    }
}

TensorEstimate polytope_tensor(const Polytope& p, int k, int s, const ConeOptions& opt) {
    const int n = p.ambient_dim();
    TensorEstimate out{SymTensor(n, s), SymTensor(n, s)};
    if (k > p.dim()) return out;
    if (k == n) {
        if (s == 0) out.value[0] = p.volume();
        return out;
    }
    const double norm = 1.0 / (omega_d(n - k + s) * factorial_d(s));
    if (k == 0 && opt.mode == ConeMode::Auto) {
        // vertex cones partition the sphere
        out.value = subspace_moment(Mat::Identity(n, n), s);
        out.value *= norm;
        return out;
    }
    if (k == 0) {
        // one shared sample stream; every direction lands in exactly one vertex cone
        std::mt19937_64 rng(substream_seed(opt.seed, 0));
        std::normal_distribution<double> normal;
        SymTensor sum(n, s), sumsq(n, s), f(n, s);
        Vec y(n);
        const auto& verts = p.vertices();
        for (long i = 0; i < opt.samples; ++i) {
            for (int j = 0; j < n; ++j) y(j) = normal(rng);
            y.normalize();
            size_t best = 0;
            for (size_t v = 1; v < verts.size(); ++v)
                if (verts[v].dot(y) > verts[best].dot(y)) best = v;
            std::fill(f.data().begin(), f.data().end(), 0.0);
            add_power(f, y, p.faces(0)[best].volume);
            for (size_t q = 0; q < f.size(); ++q) {
                sum[q] += f[q];
                sumsq[q] += f[q] * f[q];
            }
        }
        const double om = omega_d(n), nn = static_cast<double>(opt.samples);
        for (size_t q = 0; q < f.size(); ++q) {
            double mu = sum[q] / nn;
            out.value[q] = om * mu * norm;
            out.std_error[q] = om * std::sqrt(std::max(0.0, sumsq[q] / nn - mu * mu) / nn) * norm;
        }
        return out;
    }
    SymTensor var(n, s);
    const auto& faces = p.faces(k);
    for (size_t fi = 0; fi < faces.size(); ++fi) {
        SymTensor mean(n, s), v(n, s);
        cone_moment(p, faces[fi], s, opt, substream_seed(opt.seed, static_cast<std::uint64_t>(k), fi), mean, v);
        const double vol = faces[fi].volume;
        mean *= vol;
        v *= vol * vol;
        out.value += mean;
        var += v;
    }
    out.value *= norm;
    for (size_t q = 0; q < var.size(); ++q) out.std_error[q] = std::sqrt(var[q]) * norm;
    return out;
}

TensorEstimate ball_tensor(const Ball& b, int k, int s) {
    const int n = b.n;
    TensorEstimate out{SymTensor(n, s), SymTensor(n, s)};
    if (k == n) {
        if (s == 0) out.value[0] = kappa_d(n) * std::pow(b.r, n);
        return out;
    }
    if (s % 2) return out;
    const double binom = std::tgamma(n) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 0.0));
    double c = binom * std::pow(b.r, k) * sphere_moment(n, s) / (omega_d(n - k + s) * factorial_d(s));
    out.value = metric_power(n, s / 2);
    out.value *= c;
    return out;
}

}  // namespace

double omega_d(int m) { return 2 * std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0); }
double kappa_d(int m) { return std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0 + 1); }

double sphere_moment(int m, int s) {
    if (s % 2) return 0.0;
    return 2 * std::pow(kPi, (m - 1) / 2.0) * std::tgamma((s + 1) / 2.0) / std::tgamma((m + s) / 2.0);
}

Polytope Polytope::build(std::vector<Vec> points, std::vector<Vec> directions, const std::vector<Vec>& normals) {
    if (points.empty()) throw DomainError("empty point set");
    const int n = static_cast<int>(points[0].size());
    if (n < 1 || n > kMaxBodyDim) throw DomainError("polytope dimension must be between 1 and 4");
    for (const auto& p : points)
        if (p.size() != n || !p.allFinite()) throw DomainError("inconsistent or non-finite polytope point");
    const double scale = scale_of(points);
    const double tol = kRankTol * scale;

    std::vector<Vec> uniq;
    for (const auto& p : points) {
        bool dup = false;
        for (const auto& q : uniq)
            if ((p - q).norm() <= tol) {
                dup = true;
                break;
            }
        if (!dup) uniq.push_back(p);
    }
    const int m = static_cast<int>(uniq.size());

    Vec c = Vec::Zero(n);
    for (const auto& p : uniq) c += p;
    c /= m;
    Mat diffs(n, m);
    for (int i = 0; i < m; ++i) diffs.col(i) = uniq[i] - c;
    Eigen::JacobiSVD<Mat> svd(diffs, Eigen::ComputeFullU);
    int d = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tol) ++d;
    Mat u = svd.matrixU().leftCols(d);
    Mat uc = svd.matrixU().rightCols(n - d);

    std::vector<Vec> z(m);
    for (int i = 0; i < m; ++i) z[i] = u.transpose() * (uniq[i] - c);

    Polytope poly;
    poly.n_ = n;
    poly.d_ = d;

    // candidate outward normals in local coordinates
    std::vector<Vec> cand;
    auto push_both = [&](Vec v) {
        double nv = v.norm();
        if (nv < 1e-9) return;
        v /= nv;
        cand.push_back(v);
        cand.push_back(-v);
    };
    if (d == 1) {
        push_both(Vec::Ones(1));
    } else if (d >= 2) {
        for (const auto& a : normals) push_both(u.transpose() * a);
        if (normals.empty() || d < n) {
            if (directions.empty())
                for (int i = 0; i < m; ++i)
                    for (int j = i + 1; j < m; ++j) directions.push_back(uniq[j] - uniq[i]);
            std::vector<Vec> local;
            for (const auto& e : directions) {
                Vec le = u.transpose() * e;
                if (le.norm() > 1e-9 * std::max(1.0, e.norm())) add_unique_direction(local, le);
            }
            for_each_combination(static_cast<int>(local.size()), d - 1, [&](const std::vector<int>& pick) {
                if (auto nv = common_normal(local, pick, d)) push_both(*nv);
            });
        }
    }

    struct Facet {
        std::vector<int> idx;
        Vec normal;
        double offset;
    };
    std::vector<Facet> facets;
    std::set<std::vector<int>> seen;
    std::vector<double> vals(m);
    for (const auto& nv : cand) {
        double h = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) h = std::max(h, vals[i] = z[i].dot(nv));
        std::vector<int> tight;
        for (int i = 0; i < m; ++i)
            if (vals[i] >= h - tol) tight.push_back(i);
        if (static_cast<int>(tight.size()) < d || seen.count(tight)) continue;
        Mat b = affine_basis(z, tight, tol);
        if (b.cols() != d - 1) continue;
        seen.insert(tight);
        Vec un = nv - b * (b.transpose() * nv);
        un.normalize();
        double off = 0;
        for (int i : tight) off += z[i].dot(un);
        facets.push_back({tight, un, off / static_cast<double>(tight.size())});
    }
    if (d >= 1 && facets.size() < 2) throw DomainError("facet enumeration failed");

    // face lattice by intersecting faces with facets
    std::vector<std::vector<std::vector<int>>> lev(d + 1);
    std::vector<std::vector<std::vector<int>>> kids(d + 1);
    std::vector<int> all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    lev[d] = {all};
    for (int j = d; j >= 1; --j) {
        std::map<std::vector<int>, int> index;
        kids[j].resize(lev[j].size());
        for (size_t fi = 0; fi < lev[j].size(); ++fi) {
            const auto& f = lev[j][fi];
            for (const auto& g : facets) {
                auto sub = intersect_sorted(f, g.idx);
                if (sub.empty() || sub.size() == f.size()) continue;
                if (static_cast<int>(sub.size()) < j) continue;
                if (j - 1 == 0 ? sub.size() != 1 : affine_basis(z, sub, tol).cols() != j - 1) continue;
                auto [it, fresh] = index.emplace(sub, static_cast<int>(lev[j - 1].size()));
                if (fresh) lev[j - 1].push_back(sub);
                auto& kv = kids[j][fi];
                if (std::find(kv.begin(), kv.end(), it->second) == kv.end()) kv.push_back(it->second);
            }
        }
    }
    if (d == 0) lev[0] = {{0}};

    // keep only true vertices
    std::vector<int> remap(m, -1);
    for (const auto& v : lev[0]) remap[v[0]] = 0;
    int nv = 0;
    for (int i = 0; i < m; ++i)
        if (remap[i] >= 0) remap[i] = nv++;
    std::vector<Vec> zloc;
    for (int i = 0; i < m; ++i)
        if (remap[i] >= 0) {
            zloc.push_back(z[i]);
            poly.vertices_.push_back(uniq[i]);
        }

    poly.faces_.assign(d + 1, {});
    std::vector<std::vector<Vec>> cloc(d + 1);
    std::vector<std::vector<Mat>> bloc(d + 1);
    for (int j = 0; j <= d; ++j) {
        for (size_t fi = 0; fi < lev[j].size(); ++fi) {
            Face f;
            f.dim = j;
            for (int i : lev[j][fi])
                if (remap[i] >= 0) f.vertices.push_back(remap[i]);
            if (j >= 1) f.children = kids[j][fi];
            Mat bl = j == 0 ? Mat(d, 0) : affine_basis(zloc, f.vertices, tol);
            if (bl.cols() != j) throw DomainError("inconsistent face lattice");
            Vec cl = centroid_of(zloc, f.vertices);
            if (j == 0) {
                f.volume = 1.0;
            } else {
                double vol = 0;
                for (int g : f.children) {
                    Vec diff = cl - cloc[j - 1][g];
                    const Mat& bg = bloc[j - 1][g];
                    if (bg.cols() > 0) diff -= bg * (bg.transpose() * diff);
                    vol += diff.norm() * poly.faces_[j - 1][g].volume;
                }
                f.volume = vol / j;
            }
            f.basis = u * bl;
            f.centroid = c + u * cl;
            cloc[j].push_back(cl);
            bloc[j].push_back(bl);
            poly.faces_[j].push_back(std::move(f));
        }
    }

    const int rows = static_cast<int>(facets.size()) + 2 * (n - d);
    poly.a_.resize(rows, n);
    poly.b_.resize(rows);
    int r = 0;
    for (const auto& f : facets) {
        Vec a = u * f.normal;
        poly.a_.row(r) = a.transpose();
        poly.b_(r++) = a.dot(c) + f.offset;
    }
    for (int i = 0; i < n - d; ++i) {
        Vec w = uc.col(i);
        poly.a_.row(r) = w.transpose();
        poly.b_(r++) = w.dot(c);
        poly.a_.row(r) = -w.transpose();
        poly.b_(r++) = -w.dot(c);
    }

    if (d >= 1)
        for (const auto& e : poly.faces_[1])
            add_unique_direction(poly.edges_, poly.vertices_[e.vertices[1]] - poly.vertices_[e.vertices[0]]);
    return poly;
}

Polytope Polytope::from_points(const std::vector<Vec>& points) { return build(points, {}, {}); }

namespace {

std::vector<Vec> enumerate_vertices(const Mat& a, const Vec& b, double tol) {
    const int n = static_cast<int>(a.cols());
    const int rows = static_cast<int>(a.rows());
    std::vector<Vec> pts;
    for_each_combination(rows, n, [&](const std::vector<int>& pick) {
        SmallMat s(n, n);
        SmallVec rhs(n);
        for (int i = 0; i < n; ++i) {
            s.row(i) = a.row(pick[i]);
            rhs(i) = b(pick[i]);
        }
        Eigen::FullPivLU<SmallMat> lu(s);
        lu.setThreshold(1e-10);
        if (!lu.isInvertible()) return;
        Vec x = lu.solve(rhs);
        if (((a * x - b).array() > tol).any()) return;
        for (const auto& q : pts)
            if ((q - x).norm() <= tol) return;
        pts.push_back(x);
    });
    return pts;
}

}  // namespace

std::optional<Polytope> Polytope::from_halfspaces(const Mat& a, const Vec& b) {
    const int n = static_cast<int>(a.cols());
    if (n < 1 || n > kMaxBodyDim) throw DomainError("polytope dimension must be between 1 and 4");
    if (a.rows() != b.size()) throw DomainError("halfspace system size mismatch");
    Mat an = a;
    Vec bn = b;
    std::vector<Vec> normals;
    double scale = 1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double nr = a.row(i).norm();
        if (nr < 1e-14) throw DomainError("degenerate halfspace normal");
        an.row(i) /= nr;
        bn(i) /= nr;
        scale = std::max(scale, std::abs(bn(i)));
        normals.push_back(an.row(i).transpose());
    }
    auto pts = enumerate_vertices(an, bn, kRankTol * scale);
    if (pts.empty()) return std::nullopt;
    return build(pts, {}, normals);
}

std::optional<Polytope> intersect(const Polytope& p, const Polytope& q) {
    if (p.ambient_dim() != q.ambient_dim()) throw DomainError("ambient dimension mismatch");
    Mat a(p.normals().rows() + q.normals().rows(), p.ambient_dim());
    a << p.normals(), q.normals();
    Vec b(a.rows());
    b << p.offsets(), q.offsets();
    return Polytope::from_halfspaces(a, b);
}

std::optional<Polytope> intersect_flat(const Polytope& p, const Mat& basis, const Vec& origin) {
    const int n = p.ambient_dim(), j = static_cast<int>(basis.cols());
    const double tol = kRankTol * std::max(p.scale(), origin.cwiseAbs().maxCoeff());
    Mat al = p.normals() * basis;
    Vec bl = p.offsets() - p.normals() * origin;
    std::vector<int> keep;
    for (Eigen::Index i = 0; i < al.rows(); ++i) {
        double nr = al.row(i).norm();
        if (nr < 1e-12) {
            if (bl(i) < -tol) return std::nullopt;
            continue;
        }
        keep.push_back(static_cast<int>(i));
    }
    std::vector<Vec> pts;
    if (j == 0) {
        if (!p.contains(origin)) return std::nullopt;
        pts.push_back(origin);
    } else {
        Mat a(keep.size(), j);
        Vec b(keep.size());
        for (size_t r = 0; r < keep.size(); ++r) {
            double nr = al.row(keep[r]).norm();
            a.row(static_cast<Eigen::Index>(r)) = al.row(keep[r]) / nr;
            b(static_cast<Eigen::Index>(r)) = bl(keep[r]) / nr;
        }
        for (const auto& z : enumerate_vertices(a, b, tol)) pts.push_back(origin + basis * z);
    }
    if (pts.empty()) return std::nullopt;
    std::vector<Vec> normals;
    for (Eigen::Index i = 0; i < p.normals().rows(); ++i) normals.push_back(p.normals().row(i).transpose());
    (void)n;
    return Polytope::build(pts, {}, normals);
}

Polytope minkowski_sum(const Polytope& p, const Polytope& q) {
    if (p.ambient_dim() != q.ambient_dim()) throw DomainError("ambient dimension mismatch");
    std::vector<Vec> pts;
    for (const auto& x : p.vertices())
        for (const auto& y : q.vertices()) pts.push_back(x + y);
    std::vector<Vec> dirs = p.edge_directions();
    for (const auto& e : q.edge_directions()) add_unique_direction(dirs, e);
    if (dirs.empty()) dirs.push_back(Vec::Zero(p.ambient_dim()));
    return Polytope::build(pts, dirs, {});
}

Vec Polytope::bbox_min() const {
    Vec m = vertices_[0];
    for (const auto& v : vertices_) m = m.cwiseMin(v);
    return m;
}

Vec Polytope::bbox_max() const {
    Vec m = vertices_[0];
    for (const auto& v : vertices_) m = m.cwiseMax(v);
    return m;
}

double Polytope::scale() const { return scale_of(vertices_); }

bool Polytope::contains(const Vec& x, double tol) const {
    return ((a_ * x - b_).array() <= tol * scale()).all();
}

double Polytope::distance(const Vec& x) const {
    if (contains(x)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= d_; ++j)
        for (const auto& f : faces_[j]) {
            Vec diff = x - f.centroid;
            Vec proj = f.centroid + f.basis * (f.basis.transpose() * diff);
            if (contains(proj)) best = std::min(best, (x - proj).norm());
        }
    return best;
}

Vec Polytope::facet_normal_sum() const {
    Vec sum = Vec::Zero(n_);
    if (d_ == 0) return sum;
    const Face& t = top();
    for (const auto& g : faces_[d_ - 1]) {
        Vec out = g.centroid - t.centroid;
        out -= g.basis * (g.basis.transpose() * out);
        sum += g.volume * out.normalized();
    }
    return sum;
}

Polytope Polytope::transformed(const Mat& g, const Vec& t) const {
    if (g.rows() != n_ || g.cols() != n_ || t.size() != n_) throw DomainError("transform dimension mismatch");
    std::vector<Vec> pts, dirs, normals;
    for (const auto& v : vertices_) pts.push_back(g * v + t);
    for (const auto& e : edges_) dirs.push_back(g * e);
    if (d_ == n_) {
        Mat git = g.inverse().transpose();
        for (Eigen::Index i = 0; i < a_.rows(); ++i) normals.push_back(git * a_.row(i).transpose());
    }
    if (dirs.empty()) dirs.push_back(Vec::Zero(n_));
    return build(pts, dirs, normals);
}

Polytope Polytope::translated(const Vec& t) const {
    if (t.size() != n_) throw DomainError("translation dimension mismatch");
    Polytope p = *this;
    for (auto& v : p.vertices_) v += t;
    for (auto& level : p.faces_)
        for (auto& f : level) f.centroid += t;
    p.b_ += p.a_ * t;
    return p;
}

Polytope Polytope::scaled(double c) const {
    if (!(c > 0)) throw DomainError("scale factor must be positive");
    Polytope p = *this;
    for (auto& v : p.vertices_) v *= c;
    for (auto& level : p.faces_)
        for (auto& f : level) {
            f.centroid *= c;
            f.volume *= std::pow(c, f.dim);
        }
    p.b_ *= c;
    return p;
}

Polytope cube(int n, double side, bool centered) {
    if (n < 1 || n > kMaxBodyDim) throw DomainError("polytope dimension must be between 1 and 4");
    std::vector<Vec> pts;
    const double lo = centered ? -side / 2 : 0.0;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = lo + ((mask >> i) & 1 ? side : 0.0);
        pts.push_back(v);
    }
    return Polytope::from_points(pts);
}

Polytope standard_simplex(int n) {
    std::vector<Vec> pts{Vec::Zero(n)};
    for (int i = 0; i < n; ++i) pts.push_back(Vec::Unit(n, i));
    return Polytope::from_points(pts);
}

Ball make_ball(int n, double r) {
    if (n < 1 || n > kMaxDim) throw DomainError("ball dimension out of range");
    if (!(r > 0)) throw DomainError("ball radius must be positive");
    return Ball{n, r, Vec::Zero(n)};
}

int ambient_dim(const Body& body) {
    return std::visit([](const auto& b) {
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, Ball>)
            return b.n;
        else
            return b.ambient_dim();
    }, body);
}

double support_radius(const Body& body) {
    if (const auto* b = std::get_if<Ball>(&body)) return b->center.norm() + b->r;
    double r = 0;
    for (const auto& v : std::get<Polytope>(body).vertices()) r = std::max(r, v.norm());
    return r;
}

Body body_from_json(const nlohmann::json& j) {
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "polytope") {
            std::vector<Vec> pts;
            for (const auto& row : j.at("vertices")) {
                auto xs = row.get<std::vector<double>>();
                pts.push_back(Eigen::Map<Vec>(xs.data(), static_cast<Eigen::Index>(xs.size())));
            }
            return Polytope::from_points(pts);
        }
        if (type == "ball") {
            double r = j.at("r").get<double>();
            Ball b;
            if (j.contains("center")) {
                auto xs = j.at("center").get<std::vector<double>>();
                b = make_ball(static_cast<int>(xs.size()), r);
                b.center = Eigen::Map<Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
            } else {
                b = make_ball(j.at("n").get<int>(), r);
            }
            return b;
        }
        throw DomainError("unknown body type: " + type);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed body description: ") + e.what());
    }
}

nlohmann::json body_to_json(const Body& body) {
    if (const auto* b = std::get_if<Ball>(&body))
        return {{"type", "ball"}, {"r", b->r}, {"center", std::vector<double>(b->center.data(), b->center.data() + b->n)}};
    nlohmann::json verts = nlohmann::json::array();
    for (const auto& v : std::get<Polytope>(body).vertices()) verts.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    return {{"type", "polytope"}, {"vertices", verts}};
}

TensorEstimate minkowski_tensor_estimate(const Body& body, int k, int s, const ConeOptions& opt) {
    const int n = ambient_dim(body);
    if (k < 0 || k > n) throw DomainError("degree k out of range");
    if (s < 0 || s > kMaxRank) throw DomainError("rank s out of range");
    if (opt.samples < 1) throw DomainError("sample count must be positive");
    if (const auto* b = std::get_if<Ball>(&body)) return ball_tensor(*b, k, s);
    return polytope_tensor(std::get<Polytope>(body), k, s, opt);
}

SymTensor minkowski_tensor(const Body& body, int k, int s, const ConeOptions& opt) {
    return minkowski_tensor_estimate(body, k, s, opt).value;
}

}  // namespace tensorval

#include "tensorval/mcharness.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace tensorval {

Mat sample_rotation(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Mat a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) a(i, j) = normal(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) *= -1;
    if (std::uniform_int_distribution<int>(0, 1)(rng)) q.col(0) *= -1;
    return q;
}

FlatSample sample_flat(int n, int dim, double radius, std::mt19937_64& rng) {
    if (dim < 0 || dim > n) throw DomainError("flat dimension out of range");
    Mat g = sample_rotation(n, rng);
    const int l = n - dim;
    FlatSample f;
    f.basis = g.leftCols(dim);
    f.offset = Vec::Zero(n);
    if (l > 0) {
        std::normal_distribution<double> normal;
        std::uniform_real_distribution<double> unif;
        Vec z(l);
        for (int i = 0; i < l; ++i) z(i) = normal(rng);
        z *= radius * std::pow(unif(rng), 1.0 / l) / z.norm();
        f.offset = g.rightCols(l) * z;
    }
    f.weight = kappa_d(l) * std::pow(radius, l);
    return f;
}

McSums run_blocks(size_t width, const McKernel& kernel, const McConfig& cfg) {
    if (cfg.samples < 1 || cfg.block < 1) throw DomainError("sample and block counts must be positive");
    const long nblocks = (cfg.samples + cfg.block - 1) / cfg.block;
    struct Block {
        std::vector<double> sum, sumsq;
        long hits = 0, failures = 0;
    };
    std::vector<Block> blocks(static_cast<size_t>(nblocks));
    auto run = [&](long b) {
        Block& blk = blocks[static_cast<size_t>(b)];
        blk.sum.assign(width, 0.0);
        blk.sumsq.assign(width, 0.0);
        std::mt19937_64 rng(substream_seed(cfg.seed, 1, static_cast<std::uint64_t>(b)));
        std::vector<double> out(width);
        const long begin = b * cfg.block, end = std::min(cfg.samples, begin + cfg.block);
        for (long i = begin; i < end; ++i) {
            std::fill(out.begin(), out.end(), 0.0);
            int status;
            try {
                status = kernel(rng, out);
            } catch (const DomainError&) {
                status = -1;
            }
            if (status < 0) {
                ++blk.failures;
                continue;
            }
            if (status == 0) continue;
            ++blk.hits;
            for (size_t c = 0; c < width; ++c) {
                blk.sum[c] += out[c];
                blk.sumsq[c] += out[c] * out[c];
            }
        }
    };
    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long b = 0; b < nblocks; ++b) run(b);
    } else {
        for (long b = 0; b < nblocks; ++b) run(b);
    }
    McSums res;
    std::vector<double> sum(width, 0.0), sumsq(width, 0.0);
    for (const auto& blk : blocks) {
        for (size_t c = 0; c < width; ++c) {
            sum[c] += blk.sum[c];
            sumsq[c] += blk.sumsq[c];
        }
        res.hits += blk.hits;
        res.failures += blk.failures;
    }
    const double nn = static_cast<double>(cfg.samples);
    res.mean.resize(width);
    res.std_error.resize(width);
    for (size_t c = 0; c < width; ++c) {
        res.mean[c] = sum[c] / nn;
        res.std_error[c] = std::sqrt(std::max(0.0, sumsq[c] / nn - res.mean[c] * res.mean[c]) / nn);
    }
    return res;
}

namespace {

double real_coefficient(const ExactScalar& c) {
    auto z = c.to_complex();
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
        throw DomainError("complex coefficient cannot be evaluated on bodies");
    return z.real();
}

std::string index_label(const std::vector<int>& idx) {
    std::string s;
    for (int i : idx) s += std::to_string(i);
    return s.empty() ? "()" : s;
}

std::vector<double> row_major(const Mat& g) {
    std::vector<double> v(static_cast<size_t>(g.size()));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) v[static_cast<size_t>(i * g.cols() + j)] = g(i, j);
    return v;
}

nlohmann::json cone_json(const ConeOptions& c) {
    return {{"samples", c.samples}, {"seed", c.seed}, {"mode", c.mode == ConeMode::Auto ? "auto" : "sampled"}};
}

nlohmann::json base_config(const McConfig& cfg) {
    return {{"samples", cfg.samples},
            {"seed", cfg.seed},
            {"block", cfg.block},
            {"tolerance", cfg.tolerance},
            {"cones", cone_json(cfg.cones)}};
}

void fill_components(VerificationReport& rep, const McSums& sums, const std::vector<double>& pred,
                     const std::vector<std::string>& labels) {
    rep.components = labels;
    rep.estimate = sums.mean;
    rep.std_error = sums.std_error;
    rep.predicted = pred;
    rep.hits = sums.hits;
    rep.failures = sums.failures;
    rep.finalize();
}

std::vector<std::string> sym_labels(int n, int s) {
    std::vector<std::string> out;
    for (const auto& t : sym_index(n, s).tuples) out.push_back(index_label(t));
    return out;
}

std::vector<std::string> bi_labels(int n, int s1, int s2) {
    std::vector<std::string> out;
    for (const auto& a : sym_index(n, s1).tuples)
        for (const auto& b : sym_index(n, s2).tuples) out.push_back(index_label(a) + "|" + index_label(b));
    return out;
}

}  // namespace

void VerificationReport::finalize() {
    double scale = 0;
    for (double p : predicted) scale = std::max(scale, std::abs(p));
    rel_error.assign(estimate.size(), 0.0);
    max_rel_error = 0;
    bool ok = true;
    for (size_t c = 0; c < estimate.size(); ++c) {
        double diff = std::abs(estimate[c] - predicted[c]);
        if (scale > 1e-12) {
            rel_error[c] = diff / scale;
            max_rel_error = std::max(max_rel_error, rel_error[c]);
            ok = ok && rel_error[c] <= tolerance;
        } else {
            ok = ok && diff <= 3 * std_error[c] + 1e-12;
        }
    }
    passed = ok && !inconclusive;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json comps = nlohmann::json::array();
    for (size_t c = 0; c < estimate.size(); ++c)
        comps.push_back({{"index", components[c]},
                         {"estimate", estimate[c]},
                         {"predicted", predicted[c]},
                         {"rel_error", rel_error[c]},
                         {"std_error", std_error[c]}});
    return {{"formula", formula},
            {"config", config},
            {"samples", samples},
            {"hits", hits},
            {"failures", failures},
            {"components", comps},
            {"max_rel_error", max_rel_error},
            {"tolerance", tolerance},
            {"inconclusive", inconclusive},
            {"passed", passed}};
}

SymTensor evaluate(const TensorValuation& v, int rank, const Body& body, const ConeOptions& opt) {
    const int n = ambient_dim(body);
    if (v.n() != n) throw DomainError("valuation and body live in different dimensions");
    SymTensor out(n, rank);
    const TensorValuation phi = psi_to_phi(v);
    for (const auto& [b, c] : phi.terms()) {
        if (b.total_rank() != rank) throw DomainError("valuation is not homogeneous of rank " + std::to_string(rank));
        SymTensor t = sym_product(metric_power(n, b.a), minkowski_tensor(body, b.k, b.s, opt));
        t *= real_coefficient(c);
        out += t;
    }
    return out;
}

BiTensor evaluate(const KinematicTable& t, const Body& k, const Body& l, const ConeOptions& opt) {
    const int n = t.n();
    BiTensor out(n, t.s1(), t.s2());
    std::map<BasisElement, SymTensor> left, right;
    const KinematicTable phi = t.to_phi();
    for (const auto& [key, c] : phi.entries()) {
        auto li = left.find(key.first);
        if (li == left.end())
            li = left.emplace(key.first, evaluate(TensorValuation::of(n, key.first), t.s1(), k, opt)).first;
        auto ri = right.find(key.second);
        if (ri == right.end())
            ri = right.emplace(key.second, evaluate(TensorValuation::of(n, key.second), t.s2(), l, opt)).first;
        BiTensor term = BiTensor::outer(li->second, ri->second);
        term *= real_coefficient(c);
        out += term;
    }
    return out;
}

VerificationReport mc_crofton(const Polytope& body, int k, int s, int l, const McConfig& cfg) {
    const int n = body.ambient_dim();
    if (l < 0 || k < 0 || k + l > n) throw DomainError("Crofton parameters require k + l <= n");
    const double radius = support_radius(body);
    const int dim = n - l;
    McKernel kernel = [&](std::mt19937_64& rng, std::vector<double>& out) {
        FlatSample f = sample_flat(n, dim, radius, rng);
        auto sec = intersect_flat(body, f.basis, f.offset);
        if (!sec) return 0;
        SymTensor t = minkowski_tensor(*sec, k, s, cfg.cones);
        for (size_t c = 0; c < t.size(); ++c) out[c] = f.weight * t[c];
        return 1;
    };
    McSums sums = run_blocks(sym_index(n, s).tuples.size(), kernel, cfg);
    SymTensor pred = evaluate(crofton(TensorValuation::phi(n, k, s), l), s, Body(body), cfg.cones);

    VerificationReport rep;
    rep.formula = "crofton";
    rep.config = base_config(cfg);
    rep.config["params"] = {{"n", n}, {"k", k}, {"s", s}, {"l", l}, {"radius", radius}};
    rep.config["bodies"] = {body_to_json(body)};
    rep.samples = cfg.samples;
    rep.tolerance = cfg.tolerance;
    rep.inconclusive = sums.hits < 100;
    fill_components(rep, sums, pred.data(), sym_labels(n, s));
    return rep;
}

VerificationReport mc_additive(const Polytope& k, const Polytope& l, int i, int s1, int s2, const McConfig& cfg) {
    const int n = k.ambient_dim();
    if (l.ambient_dim() != n) throw DomainError("ambient dimension mismatch");
    KinematicTable table = additive_kinematic(n, i, s1, s2);
    McKernel kernel = [&](std::mt19937_64& rng, std::vector<double>& out) {
        Mat g = sample_rotation(n, rng);
        Polytope sum = minkowski_sum(k, l.transformed(g.transpose(), Vec::Zero(n)));
        auto gv = row_major(g);
        BiTensor b = BiTensor::split(minkowski_tensor(sum, i, s1 + s2, cfg.cones), s1, &gv);
        std::copy(b.data().begin(), b.data().end(), out.begin());
        return 1;
    };
    BiTensor pred = evaluate(table, Body(k), Body(l), cfg.cones);
    McSums sums = run_blocks(pred.data().size(), kernel, cfg);

    VerificationReport rep;
    rep.formula = "additive";
    rep.config = base_config(cfg);
    rep.config["params"] = {{"n", n}, {"i", i}, {"s1", s1}, {"s2", s2}};
    rep.config["bodies"] = {body_to_json(k), body_to_json(l)};
    rep.samples = cfg.samples;
    rep.tolerance = cfg.tolerance;
    rep.inconclusive = sums.failures * 1000 > cfg.samples;
    fill_components(rep, sums, pred.data(), bi_labels(n, s1, s2));
    return rep;
}

VerificationReport mc_intersectional(const Polytope& k, const Polytope& l, int i, int s1, int s2, const McConfig& cfg) {
    const int n = k.ambient_dim();
    if (l.ambient_dim() != n) throw DomainError("ambient dimension mismatch");
    if (k.dim() != n || l.dim() != n) throw DomainError("intersectional verification needs full-dimensional bodies");
    KinematicTable table = intersectional_kinematic(n, i, s1, s2);
    McKernel kernel = [&](std::mt19937_64& rng, std::vector<double>& out) {
        Mat g = sample_rotation(n, rng);
        Polytope moved = l.transformed(g.transpose(), Vec::Zero(n));
        Vec lo = k.bbox_min() - moved.bbox_max(), hi = k.bbox_max() - moved.bbox_min();
        std::uniform_real_distribution<double> unif;
        Vec u(n);
        for (int j = 0; j < n; ++j) u(j) = lo(j) + (hi(j) - lo(j)) * unif(rng);
        auto cap = intersect(k, moved.translated(u));
        if (!cap) return 0;
        const double weight = (hi - lo).prod();
        auto gv = row_major(g);
        BiTensor b = BiTensor::split(minkowski_tensor(*cap, i, s1 + s2, cfg.cones), s1, &gv);
        for (size_t c = 0; c < b.data().size(); ++c) out[c] = weight * b.data()[c];
        return 1;
    };
    BiTensor pred = evaluate(table, Body(k), Body(l), cfg.cones);
    McSums sums = run_blocks(pred.data().size(), kernel, cfg);

    VerificationReport rep;
    rep.formula = "intersectional";
    rep.config = base_config(cfg);
    rep.config["params"] = {{"n", n}, {"i", i}, {"s1", s1}, {"s2", s2}};
    rep.config["bodies"] = {body_to_json(k), body_to_json(l)};
    rep.samples = cfg.samples;
    rep.tolerance = cfg.tolerance;
    rep.inconclusive = sums.hits < 100 || sums.failures * 1000 > cfg.samples;
    fill_components(rep, sums, pred.data(), bi_labels(n, s1, s2));
    return rep;
}

VerificationReport mc_flat_measure(int n, int dim, const McConfig& cfg) {
    const double radius = 2.0;
    McKernel kernel = [&](std::mt19937_64& rng, std::vector<double>& out) {
        FlatSample f = sample_flat(n, dim, radius, rng);
        if (f.offset.norm() > 1.0) return 0;
        out[0] = f.weight;
        return 1;
    };
    McSums sums = run_blocks(1, kernel, cfg);
    VerificationReport rep;
    rep.formula = "flat-measure";
    rep.config = base_config(cfg);
    rep.config["params"] = {{"n", n}, {"dim", dim}, {"radius", radius}};
    rep.samples = cfg.samples;
    rep.tolerance = cfg.tolerance;
    fill_components(rep, sums, {kappa_d(n - dim)}, {"()"});
    return rep;
}

}  // namespace tensorval

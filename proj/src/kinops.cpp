#include "tensorval/kinops.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <tuple>

namespace tensorval {

namespace {

using ES = ExactScalar;

ES G(long twice) { return gamma_half2(twice); }
ES Z(const mpz_class& z) { return ES(z); }

// Pure Phi pairing of Phi_{k,s} with Phi_{n-k,s}.
ES base_pairing(int n, int k, int s, bool product_side) {
    if (k == 0 || k == n) return s == 0 ? ES(1) : ES(0);
    ES c = ES(make_q(1 - s, 4)) * Z(binomial(n, k)) * ES(static_cast<long>(k) * (n - k));
    c *= G(k + s) * G(n - k + s) / (G(n + 2) * ES::pi_power(2 * s) * Z(factorial(s) * factorial(s)));
    if (product_side && s % 2) c = -c;
    return c;
}

ES basis_pairing(int n, const BasisElement& x, const BasisElement& y, bool product_side);

ES pair_with_valuation(int n, const BasisElement& x, const TensorValuation& w, bool product_side) {
    ES acc;
    for (const auto& [b, c] : w.terms()) acc += c * basis_pairing(n, x, b, product_side);
    return acc;
}

ES basis_pairing(int n, const BasisElement& x, const BasisElement& y, bool product_side) {
    if (x.k + y.k != n || x.total_rank() != y.total_rank()) return {};
    using Key = std::tuple<int, BasisElement, BasisElement, bool>;
    static std::mutex mu;
    static std::map<Key, ES> memo;
    Key key{n, x, y, product_side};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
    }
    ES r;
    if (x.a > 0) {
        // <Q v, w> = <v, tr w>
        BasisElement xs{x.a - 1, x.k, x.s, Kind::Phi};
        r = pair_with_valuation(n, xs, trace_val(TensorValuation::of(n, y)), product_side);
    } else if (y.a > 0) {
        BasisElement ys{y.a - 1, y.k, y.s, Kind::Phi};
        TensorValuation tx = trace_val(TensorValuation::of(n, x));
        for (const auto& [b, c] : tx.terms()) r += c * basis_pairing(n, b, ys, product_side);
    } else {
        r = base_pairing(n, x.k, x.s, product_side);
    }
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, r);
    return r;
}

ES pairing(const TensorValuation& v, const TensorValuation& w, bool product_side) {
    if (v.n() != w.n()) throw DomainError("ambient dimension mismatch");
    TensorValuation pv = psi_to_phi(v), pw = psi_to_phi(w);
    ES acc;
    for (const auto& [b1, c1] : pv.terms())
        for (const auto& [b2, c2] : pw.terms()) {
            ES p = basis_pairing(v.n(), b1, b2, product_side);
            if (!p.is_zero()) acc += c1 * c2 * p;
        }
    return acc;
}

PairingMatrix pairing_matrix(int n, int k, int s, bool product_side) {
    PairingMatrix m;
    m.n = n;
    m.k = k;
    m.s = s;
    m.left = phi_basis(n, k, s);
    m.right = phi_basis(n, n - k, s);
    for (const auto& x : m.left) {
        std::vector<ES> row;
        for (const auto& y : m.right) row.push_back(basis_pairing(n, x, y, product_side));
        m.entries.push_back(row);
    }
    return m;
}

ExactMatrix transpose(const ExactMatrix& a) {
    if (a.empty()) return {};
    ExactMatrix t(a[0].size(), std::vector<ES>(a.size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

bool block_order(const BasisElement& x, const BasisElement& y) {
    return std::tie(x.k, x.kind, x.a, x.s) < std::tie(y.k, y.kind, y.a, y.s);
}

}  // namespace

ExactScalar pairing_m(const TensorValuation& v, const TensorValuation& w) { return pairing(v, w, true); }
ExactScalar pairing_c(const TensorValuation& v, const TensorValuation& w) { return pairing(v, w, false); }

PairingMatrix pairing_matrix_m(int n, int k, int s) { return pairing_matrix(n, k, s, true); }
PairingMatrix pairing_matrix_c(int n, int k, int s) { return pairing_matrix(n, k, s, false); }

ExactMatrix solve_exact(ExactMatrix a, ExactMatrix b) {
    const size_t m = a.size();
    if (b.size() != m) throw DomainError("right-hand side size mismatch");
    const size_t p = m ? b[0].size() : 0;
    for (size_t i = 0; i < m; ++i) {
        if (a[i].size() != m) throw DomainError("system matrix is not square");
        a[i].insert(a[i].end(), b[i].begin(), b[i].end());
    }
    const size_t cols = m + p;
    ES prev(1);
    for (size_t k = 0; k < m; ++k) {
        size_t piv = m;
        for (size_t r = k; r < m; ++r) {
            if (a[r][k].is_zero()) continue;
            if (piv == m || (a[r][k].is_monomial() && !a[piv][k].is_monomial())) piv = r;
        }
        if (piv == m) throw DomainError("singular system in exact solve");
        std::swap(a[k], a[piv]);
        for (size_t i = k + 1; i < m; ++i) {
            for (size_t j = k + 1; j < cols; ++j) a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            a[i][k] = ES();
        }
        prev = a[k][k];
    }
    ExactMatrix x(m, std::vector<ES>(p));
    for (size_t c = 0; c < p; ++c) {
        for (size_t ii = m; ii-- > 0;) {
            ES acc = a[ii][m + c];
            for (size_t j = ii + 1; j < m; ++j) acc -= a[ii][j] * x[j][c];
            x[ii][c] = acc / a[ii][ii];
        }
    }
    return x;
}

void KinematicTable::add(const BasisElement& left, const BasisElement& right, const ExactScalar& c) {
    if (c.is_zero()) return;
    Key key{left, right};
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        entries_.emplace(key, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) entries_.erase(it);
}

void KinematicTable::add(const TensorValuation& left, const TensorValuation& right, const ExactScalar& c) {
    if (left.n() != n_ || right.n() != n_) throw DomainError("ambient dimension mismatch");
    for (const auto& [b1, c1] : left.terms())
        for (const auto& [b2, c2] : right.terms()) add(b1, b2, c * c1 * c2);
}

ExactScalar KinematicTable::coeff(const BasisElement& left, const BasisElement& right) const {
    auto it = entries_.find({left, right});
    return it == entries_.end() ? ES() : it->second;
}

std::vector<BasisElement> KinematicTable::left_basis() const {
    std::vector<BasisElement> out;
    for (const auto& [key, c] : entries_) out.push_back(key.first);
    std::sort(out.begin(), out.end(), block_order);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<BasisElement> KinematicTable::right_basis() const {
    std::vector<BasisElement> out;
    for (const auto& [key, c] : entries_) out.push_back(key.second);
    std::sort(out.begin(), out.end(), block_order);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ExactMatrix KinematicTable::matrix() const {
    auto lb = left_basis(), rb = right_basis();
    ExactMatrix m(lb.size(), std::vector<ES>(rb.size()));
    for (size_t i = 0; i < lb.size(); ++i)
        for (size_t j = 0; j < rb.size(); ++j) m[i][j] = coeff(lb[i], rb[j]);
    return m;
}

KinematicTable KinematicTable::map(const std::function<TensorValuation(const TensorValuation&)>& left,
                                   const std::function<TensorValuation(const TensorValuation&)>& right) const {
    KinematicTable out(n_, s1_, s2_);
    std::map<BasisElement, TensorValuation> lcache, rcache;
    for (const auto& [key, c] : entries_) {
        auto li = lcache.find(key.first);
        if (li == lcache.end()) li = lcache.emplace(key.first, left(TensorValuation::of(n_, key.first))).first;
        auto ri = rcache.find(key.second);
        if (ri == rcache.end()) ri = rcache.emplace(key.second, right(TensorValuation::of(n_, key.second))).first;
        out.add(li->second, ri->second, c);
    }
    return out;
}

KinematicTable KinematicTable::to_phi() const { return map(psi_to_phi, psi_to_phi); }
KinematicTable KinematicTable::to_psi() const { return map(phi_to_psi, phi_to_psi); }

bool operator==(const KinematicTable& a, const KinematicTable& b) {
    return a.n_ == b.n_ && a.s1_ == b.s1_ && a.s2_ == b.s2_ && a.to_phi().entries_ == b.to_phi().entries_;
}

std::string format_scalar(const ExactScalar& x, bool as_float) {
    if (!as_float) return x.str();
    auto z = x.to_complex();
    char buf[96];
    if (z.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
    else
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

nlohmann::json KinematicTable::to_json(bool as_float) const {
    auto lb = left_basis(), rb = right_basis();
    nlohmann::json jl = nlohmann::json::array(), jr = nlohmann::json::array(), rows = nlohmann::json::array();
    for (const auto& b : lb) jl.push_back(b.label());
    for (const auto& b : rb) jr.push_back(b.label());
    for (const auto& x : lb) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& y : rb) {
            ES c = coeff(x, y);
            row.push_back(as_float ? nlohmann::json(format_scalar(c, true)) : c.to_json());
        }
        rows.push_back(row);
    }
    return {{"n", n_},
            {"s1", s1_},
            {"s2", s2_},
            {"basis_order", "degree, then ascending Q-power"},
            {"left_basis", jl},
            {"right_basis", jr},
            {"coeffs", rows}};
}

std::string KinematicTable::to_csv(bool as_float) const {
    auto lb = left_basis(), rb = right_basis();
    std::ostringstream os;
    os << "left\\right";
    for (const auto& y : rb) os << "," << y.label();
    os << "\n";
    for (const auto& x : lb) {
        os << x.label();
        for (const auto& y : rb) os << ",\"" << format_scalar(coeff(x, y), as_float) << "\"";
        os << "\n";
    }
    return os.str();
}

std::string KinematicTable::str() const {
    std::ostringstream os;
    for (const auto& [key, c] : entries_) os << "  (" << c.str() << ") " << key.first.label() << " (x) " << key.second.label() << "\n";
    return os.str();
}

KinematicTable additive_kinematic(int n, int i, int s1, int s2) {
    if (i < 0 || i > n - 1) throw DomainError("degree out of range for the additive kinematic operator");
    if (s1 == 1 || s2 == 1) throw DomainError("rank 1 factors are excluded");
    const int s = s1 + s2;
    KinematicTable t(n, s1, s2);
    ES pref = ES(binomial(s, s1)).inverse() / (Z(factorial(n - i - 1) * factorial(n - 1)) * omega(n) * omega(n - i + s));
    for (int k = 0; k <= i; ++k) {
        const int l = i - k;
        ES c = pref * Z(factorial(n - k - 1) * factorial(n - l - 1)) * omega(n - k + s1) * omega(n - l + s2);
        t.add(TensorValuation::phi(n, k, s1), TensorValuation::phi(n, l, s2), c);
    }
    return t;
}

KinematicTable additive_from_area_measures(int n, int i, int s1, int s2) {
    if (i < 0 || i > n - 1) throw DomainError("degree out of range for the additive kinematic operator");
    const int s = s1 + s2;
    // Phi_{i,s} = C(n-1,i) / (omega_{n-i+s} s!) M^s(S_i); A(S_i) = (1/omega_n) sum_k C(i,k) S_k (x) S_{i-k}
    auto to_area = [n](int k, int r) { return Z(binomial(n - 1, k)) / (omega(n - k + r) * Z(factorial(r))); };
    KinematicTable t(n, s1, s2);
    for (int k = 0; k <= i; ++k) {
        const int l = i - k;
        ES c = to_area(i, s) / omega(n) * Z(binomial(i, k)) / (to_area(k, s1) * to_area(l, s2));
        t.add(TensorValuation::phi(n, k, s1), TensorValuation::phi(n, l, s2), c);
    }
    return t;
}

KinematicTable intersectional_kinematic(const TensorValuation& source, int s1, int s2) {
    const int n = source.n();
    TensorValuation src = psi_to_phi(source);
    KinematicTable out(n, s1, s2);
    if (src.is_zero()) return out;
    const int i = src.terms().begin()->first.k;
    for (const auto& [b, c] : src.terms())
        if (b.k != i || b.total_rank() != s1 + s2)
            throw DomainError("source valuation must be homogeneous of one degree and rank " + std::to_string(s1 + s2));
    for (int k = i; k <= n; ++k) {
        const int l = n + i - k;
        auto b1 = phi_basis(n, k, s1), b2 = phi_basis(n, l, s2);
        if (b1.empty() || b2.empty()) continue;
        auto t1 = phi_basis(n, n - k, s1), t2 = phi_basis(n, n - l, s2);
        ExactMatrix g1, g2, rhs(t1.size(), std::vector<ES>(t2.size()));
        for (const auto& x : b1) {
            std::vector<ES> row;
            for (const auto& y : t1) row.push_back(basis_pairing(n, x, y, true));
            g1.push_back(row);
        }
        for (const auto& x : b2) {
            std::vector<ES> row;
            for (const auto& y : t2) row.push_back(basis_pairing(n, x, y, true));
            g2.push_back(row);
        }
        for (size_t p = 0; p < t1.size(); ++p)
            for (size_t q = 0; q < t2.size(); ++q)
                rhs[p][q] = pairing_m(src, multiply(TensorValuation::of(n, t1[p]), TensorValuation::of(n, t2[q])));
        // G1^T D G2 = R
        ExactMatrix x = solve_exact(transpose(g1), rhs);
        ExactMatrix d = transpose(solve_exact(transpose(g2), transpose(x)));
        for (size_t p = 0; p < b1.size(); ++p)
            for (size_t q = 0; q < b2.size(); ++q) out.add(b1[p], b2[q], d[p][q]);
    }
    return out;
}

KinematicTable intersectional_kinematic(int n, int i, int s1, int s2) {
    if (i < 0 || i > n - 1) throw DomainError("degree out of range for the intersectional kinematic operator");
    return intersectional_kinematic(TensorValuation::phi(n, i, s1 + s2), s1, s2);
}

KinematicTable additive_kinematic_ftaig(const TensorValuation& source, int s1, int s2) {
    KinematicTable k = intersectional_kinematic(fourier(source), s1, s2);
    return k.map(inverse_fourier, inverse_fourier);
}

namespace {

// p(k,l)/(k l) for p affine in each of k and l, continued to k = 0 or l = 0 when p vanishes there.
mpq_class over_kl(const std::function<long(long, long)>& p, long k, long l) {
    if (k != 0 && l != 0) return make_q(p(k, l), k * l);
    if (k == 0 && l == 0) throw DomainError("double degeneracy in closed form");
    if (k == 0) {
        if (p(0, l) != 0) throw DomainError("non-removable singularity in closed form");
        return make_q(p(1, l) - p(0, l), l);
    }
    if (p(k, 0) != 0) throw DomainError("non-removable singularity in closed form");
    return make_q(p(k, 1) - p(k, 0), k);
}

}  // namespace

KinematicTable intersectional_closed_form(int n, int i, int s1, int s2) {
    KinematicTable t(n, s1, s2);
    using TV = TensorValuation;
    const ES pi = ES::pi();
    const long N = n, I = i;
    if (s1 == 2 && s2 == 2) {
        ES pref = (ES(48) * pi * pi * G(n + 3) * G(i + 1)).inverse();
        for (int k = i; k <= n; ++k) {
            const int l = n + i - k;
            ES g = pref * G(k + 1) * G(l + 1);
            TV p2k = TV::phi(n, k, 2), p2l = TV::phi(n, l, 2), qk = TV::phi(n, k, 0, 1), ql = TV::phi(n, l, 0, 1);
            if (!p2k.is_zero() && !p2l.is_zero()) {
                auto poly = [&](long, long) { return N * I * I + I * I - 2 * N * I - 2 * I - 2 * N; };
                t.add(p2k, p2l, g * ES(4) * pi * pi * ES(over_kl(poly, k, l)));
            }
            if (!p2k.is_zero()) {
                auto poly = [&](long kk, long) { return I * kk + N * I * kk - 2 * kk - 3 * N * I - N * N * I; };
                t.add(p2k, ql, -g * pi * ES(over_kl(poly, k, l)));
            }
            if (!p2l.is_zero()) {
                auto poly = [&](long, long ll) { return I * ll + N * I * ll - 2 * ll - 3 * N * I - N * N * I; };
                t.add(qk, p2l, -g * pi * ES(over_kl(poly, k, l)));
            }
            auto poly = [&](long kk, long ll) { return (N + 3) * (I - ll) * (I - kk); };
            t.add(qk, ql, g * ES(make_q(1, 4)) * ES(over_kl(poly, k, l)));
        }
    } else if (s1 == 3 && s2 == 2) {
        if (i == 0) return t;  // 1/Gamma(0) = 0
        for (int k = i; k <= n; ++k) {
            const int l = n + i - k;
            TV p3k = TV::phi(n, k, 3);
            if (p3k.is_zero()) continue;
            ES c = ES(i + 1) * G(l + 1) * G(k) / (ES(40) * pi * ES(k + 1) * ES(l) * G(n + 1) * G(i));
            TV right = ES(4) * pi * ES(i - 3) * TV::phi(n, l, 2) + ES(n - k + 3) * TV::phi(n, l, 0, 1);
            t.add(p3k, right, c);
        }
    } else if (s1 == 3 && s2 == 3) {
        ES pref = ES((I + 1) * (I - 1) * (I - 3)) / (ES(40) * G(n + 1) * G(i + 1));
        for (int k = i; k <= n; ++k) {
            const int l = n + i - k;
            TV p3k = TV::phi(n, k, 3), p3l = TV::phi(n, l, 3);
            if (p3k.is_zero() || p3l.is_zero()) continue;
            t.add(p3k, p3l, pref * G(k) * G(l) / ES((k + 1) * (l + 1)));
        }
    } else {
        throw DomainError("closed form available only for bi-ranks (2,2), (3,2), (3,3)");
    }
    return t;
}

}  // namespace tensorval

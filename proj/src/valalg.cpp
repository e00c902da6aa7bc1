#include "tensorval/valalg.hpp"

#include <array>
#include <mutex>
#include <regex>
#include <sstream>

namespace tensorval {

namespace {

using ES = ExactScalar;

ES G(long twice) { return gamma_half2(twice); }
ES Z(const mpz_class& z) { return ES(z); }
ES four_pi_pow(int j) { return (ES(4) * ES::pi()).pow(j); }

std::string kind_name(Kind k) { return k == Kind::Phi ? "Phi" : "Psi"; }

// Memo for coefficient vectors keyed by small integer tuples.
template <size_t N>
class Memo {
public:
    template <class F>
    std::vector<ES> get(const std::array<int, N>& key, F&& compute) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end()) return it->second;
        }
        std::vector<ES> v = compute();
        std::lock_guard<std::mutex> lock(mu_);
        map_.emplace(key, v);
        return v;
    }

private:
    std::mutex mu_;
    std::map<std::array<int, N>, std::vector<ES>> map_;
};

// Coefficients of Q^c Phi_{k+l, s1+s2-2c}, c = 0..floor((s1+s2)/2), in Phi_{k,s1} . Phi_{l,s2}; k, l >= 1.
std::vector<ES> product_coeffs(int k, int l, int s1, int s2) {
    static Memo<4> memo;
    return memo.get({k, l, s1, s2}, [=] {
        const int S = s1 + s2;
        ES pref = ES(make_q(k * l, k + l)) * Z(binomial(k + l, k));
        std::vector<ES> out(S / 2 + 1);
        for (int c = 0; c <= S / 2; ++c) {
            if (2 * c == S - 1) continue;
            ES sum;
            for (int m = 0; m <= c; ++m) {
                for (int i = std::max(0, m - s2 / 2); i <= std::min(m, s1 / 2); ++i) {
                    long f1 = s1 - 2 * i - 1, f2 = s2 - 2 * m + 2 * i - 1;
                    if (f1 == 0 || f2 == 0) continue;
                    ES t = omega(S - 2 * m + k + l) / (omega(s1 - 2 * i + k) * omega(s2 - 2 * m + 2 * i + l));
                    t *= Z(binomial(c, m) * binomial(m, i) * binomial(S - 2 * m, s1 - 2 * i));
                    t *= ES(make_q(f1 * f2, 1 - S + 2 * m));
                    sum += ((c - m) % 2 ? -t : t);
                }
            }
            out[c] = pref * sum / (four_pi_pow(c) * Z(factorial(c)));
        }
        return out;
    });
}

// Coefficient of Phi_{k+l-n, s1+s2} in Phi_{k,s1} * Phi_{l,s2}; 1 <= k, l <= n-1, k + l >= n.
ES convolution_coeff(int n, int k, int l, int s1, int s2) {
    static Memo<5> memo;
    return memo.get({n, k, l, s1, s2}, [=] {
        const int p = n - k, q = n - l;
        ES c = omega(s1 + s2 + p + q) / (omega(s1 + p) * omega(s2 + q));
        c *= ES(make_q(p * q, p + q)) * Z(binomial(p + q, p) * binomial(s1 + s2, s1));
        c *= ES(make_q((s1 - 1) * (s2 - 1), 1 - s1 - s2));
        return std::vector<ES>{c};
    })[0];
}

// Phi-basis Crofton coefficients of Q^j Phi_{k+l, s-2j}; k, l >= 1.
std::vector<ES> crofton_coeffs(int n, int k, int l, int s) {
    static Memo<4> memo;
    return memo.get({n, k, l, s}, [=] {
        ES pref = flag(n, l).inverse() * Z(binomial(k + l, k)) * ES(make_q(k * l, 2 * (k + l))) / G(k + l + s);
        std::vector<ES> out(s / 2 + 1);
        for (int j = 0; j <= s / 2; ++j)
            out[j] = pref * G(l + 2 * j) * G(k + s - 2 * j) / (four_pi_pow(j) * Z(factorial(j)));
        return out;
    });
}

// Psi_{k,s} = sum_j coeff[j] Q^j Phi_{k,s-2j}, 0 < k < n
std::vector<ES> psi_in_phi(int n, int k, int s) {
    static Memo<3> memo;
    return memo.get({n, k, s}, [=] {
        std::vector<ES> out(s / 2 + 1);
        out[0] = 1;
        for (int j = 1; j <= s / 2; ++j) {
            ES c = G(n - k + s) * G(n + 2 * s - 2 - 2 * j) /
                   (four_pi_pow(j) * Z(factorial(j)) * G(n - k + s - 2 * j) * G(n + 2 * s - 2));
            out[j] = (j % 2 ? -c : c);
        }
        return out;
    });
}

// Phi_{k,s} = sum_j coeff[j] Q^j Psi_{k,s-2j}, 0 < k < n
std::vector<ES> phi_in_psi(int n, int k, int s) {
    static Memo<3> memo;
    return memo.get({n, k, s}, [=] {
        std::vector<ES> out(s / 2 + 1);
        out[0] = 1;
        for (int j = 1; j <= s / 2; ++j)
            out[j] = G(n - k + s) * G(n + 2 * s - 4 * j) /
                     (four_pi_pow(j) * Z(factorial(j)) * G(n - k + s - 2 * j) * G(n + 2 * s - 2 * j));
        return out;
    });
}

std::string term_name(int n, const BasisElement& b) {
    return b.label() + " (n=" + std::to_string(n) + ")";
}

}  // namespace

std::string BasisElement::label() const {
    return "Q^" + std::to_string(a) + "." + kind_name(kind) + "_{" + std::to_string(k) + "," + std::to_string(s) + "}";
}

BasisElement BasisElement::parse_label(const std::string& text) {
    static const std::regex re(R"(Q\^(\d+)\.(Phi|Psi)_\{(-?\d+),(\d+)\})");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw DomainError("malformed basis label: " + text);
    return {std::stoi(m[1]), std::stoi(m[3]), std::stoi(m[4]), m[2] == "Phi" ? Kind::Phi : Kind::Psi};
}

TensorValuation::TensorValuation(int n) : n_(n) {
    if (n < 1) throw DomainError("ambient dimension must be positive");
}

TensorValuation TensorValuation::of(int n, const BasisElement& b, const ExactScalar& c) {
    TensorValuation v(n);
    v.add(b, c);
    return v;
}

TensorValuation TensorValuation::phi(int n, int k, int s, int a) { return of(n, {a, k, s, Kind::Phi}); }
TensorValuation TensorValuation::psi(int n, int k, int s, int a) { return of(n, {a, k, s, Kind::Psi}); }

void TensorValuation::add(const BasisElement& b0, const ExactScalar& c0) {
    if (c0.is_zero()) return;
    BasisElement b = b0;
    ExactScalar c = c0;
    if (b.a < 0 || b.s < 0 || b.k < 0 || b.k > n_ || b.s == 1) return;
    if (b.k == n_ && b.s != 0) return;
    if (b.k == 0 && b.s > 0) {
        if (b.kind == Kind::Psi || b.s % 2) return;
        // Phi_{0,s} = Q^{s/2} chi / ((s/2)! (4 pi)^{s/2})
        int h = b.s / 2;
        c /= four_pi_pow(h) * Z(factorial(h));
        b = {b.a + h, 0, 0, Kind::Phi};
    }
    auto it = terms_.find(b);
    if (it == terms_.end()) {
        terms_.emplace(b, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

void TensorValuation::add(const TensorValuation& v, const ExactScalar& c) {
    if (v.n_ != n_) throw DomainError("ambient dimension mismatch");
    for (const auto& [b, x] : v.terms_) add(b, c * x);
}

TensorValuation TensorValuation::times_q(int a) const {
    TensorValuation r(n_);
    for (const auto& [b, c] : terms_) r.add({b.a + a, b.k, b.s, b.kind}, c);
    return r;
}

TensorValuation TensorValuation::operator-() const { return ExactScalar(-1) * *this; }

TensorValuation& TensorValuation::operator+=(const TensorValuation& o) {
    add(o, 1);
    return *this;
}

TensorValuation& TensorValuation::operator-=(const TensorValuation& o) {
    add(o, -1);
    return *this;
}

TensorValuation& TensorValuation::operator*=(const ExactScalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [b, x] : terms_) x *= c;
    return *this;
}

bool operator==(const TensorValuation& a, const TensorValuation& b) {
    return a.n() == b.n() && psi_to_phi(a).terms() == psi_to_phi(b).terms();
}

std::string TensorValuation::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms_) {
        os << (first ? "" : " + ") << "(" << c.str() << ") " << b.label();
        first = false;
    }
    return os.str();
}

nlohmann::json TensorValuation::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [b, c] : terms_)
        arr.push_back({{"basis", kind_name(b.kind)}, {"a", b.a}, {"k", b.k}, {"s", b.s}, {"coeff", c.to_json()}});
    return {{"n", n_}, {"terms", arr}};
}

TensorValuation TensorValuation::from_json(const nlohmann::json& j) {
    TensorValuation v(j.at("n").get<int>());
    for (const auto& t : j.at("terms")) {
        std::string kind = t.at("basis").get<std::string>();
        if (kind != "Phi" && kind != "Psi") throw DomainError("unknown basis kind: " + kind);
        v.add({t.at("a").get<int>(), t.at("k").get<int>(), t.at("s").get<int>(), kind == "Phi" ? Kind::Phi : Kind::Psi},
              ExactScalar::from_json(t.at("coeff")));
    }
    return v;
}

std::vector<BasisElement> phi_basis(int n, int k, int s) {
    std::vector<BasisElement> out;
    if (k < 0 || k > n || s < 0) return out;
    for (int a = 0; 2 * a <= s; ++a) {
        int r = s - 2 * a;
        bool ok = (k == 0 || k == n) ? r == 0 : r != 1;
        if (ok) out.push_back({a, k, r, Kind::Phi});
    }
    return out;
}

std::vector<BasisElement> psi_basis(int n, int k, int s) {
    auto out = phi_basis(n, k, s);
    for (auto& b : out) b.kind = Kind::Psi;
    return out;
}

TensorValuation psi_to_phi(const TensorValuation& v) {
    const int n = v.n();
    TensorValuation r(n);
    for (const auto& [b, c] : v.terms()) {
        if (b.kind == Kind::Phi || b.s == 0) {
            r.add({b.a, b.k, b.s, Kind::Phi}, c);
            continue;
        }
        auto co = psi_in_phi(n, b.k, b.s);
        for (int j = 0; j < static_cast<int>(co.size()); ++j) r.add({b.a + j, b.k, b.s - 2 * j, Kind::Phi}, c * co[j]);
    }
    return r;
}

TensorValuation phi_to_psi(const TensorValuation& v) {
    const int n = v.n();
    TensorValuation r(n);
    for (const auto& [b, c] : v.terms()) {
        if (b.kind == Kind::Psi || b.s == 0) {
            r.add({b.a, b.k, b.s, Kind::Psi}, c);
            continue;
        }
        auto co = phi_in_psi(n, b.k, b.s);
        for (int j = 0; j < static_cast<int>(co.size()); ++j) r.add({b.a + j, b.k, b.s - 2 * j, Kind::Psi}, c * co[j]);
    }
    return r;
}

TensorValuation fourier(const TensorValuation& v) {
    const int n = v.n();
    TensorValuation r(n);
    for (const auto& [b, c] : v.terms()) {
        ES is = ES::i_pow(b.s);
        if (b.kind == Kind::Psi) {
            r.add({b.a, n - b.k, b.s, Kind::Psi}, c * is);
            continue;
        }
        for (int j = 0; 2 * j <= b.s; ++j) {
            ES t = is / (four_pi_pow(j) * Z(factorial(j)));
            r.add({b.a + j, n - b.k, b.s - 2 * j, Kind::Phi}, c * (j % 2 ? -t : t));
        }
    }
    return r;
}

TensorValuation inverse_fourier(const TensorValuation& v) {
    TensorValuation f = fourier(v);
    TensorValuation r(v.n());
    for (const auto& [b, c] : f.terms()) r.add(b, b.s % 2 ? -c : c);
    return r;
}

TensorValuation convolve(const TensorValuation& v, const TensorValuation& w) {
    const int n = v.n();
    if (w.n() != n) throw DomainError("ambient dimension mismatch");
    TensorValuation pv = psi_to_phi(v), pw = psi_to_phi(w), r(n);
    for (const auto& [b1, c1] : pv.terms()) {
        for (const auto& [b2, c2] : pw.terms()) {
            if (b1.k + b2.k < n)
                throw DomainError("convolution undefined for " + b1.label() + " * " + term_name(n, b2) + ": degree sum below n");
            ES c = c1 * c2;
            int a = b1.a + b2.a;
            if (b1.k == n) {
                r.add({a, b2.k, b2.s, Kind::Phi}, c);
            } else if (b2.k == n) {
                r.add({a, b1.k, b1.s, Kind::Phi}, c);
            } else {
                r.add({a, b1.k + b2.k - n, b1.s + b2.s, Kind::Phi}, c * convolution_coeff(n, b1.k, b2.k, b1.s, b2.s));
            }
        }
    }
    return r;
}

TensorValuation multiply(const TensorValuation& v, const TensorValuation& w) {
    const int n = v.n();
    if (w.n() != n) throw DomainError("ambient dimension mismatch");
    TensorValuation pv = psi_to_phi(v), pw = psi_to_phi(w), r(n);
    for (const auto& [b1, c1] : pv.terms()) {
        for (const auto& [b2, c2] : pw.terms()) {
            if (b1.k + b2.k > n)
                throw DomainError("product undefined for " + b1.label() + " . " + term_name(n, b2) + ": degree sum exceeds n");
            ES c = c1 * c2;
            int a = b1.a + b2.a;
            if (b1.k == 0) {
                r.add({a, b2.k, b2.s, Kind::Phi}, c);
            } else if (b2.k == 0) {
                r.add({a, b1.k, b1.s, Kind::Phi}, c);
            } else {
                auto co = product_coeffs(b1.k, b2.k, b1.s, b2.s);
                for (int j = 0; j < static_cast<int>(co.size()); ++j)
                    r.add({a + j, b1.k + b2.k, b1.s + b2.s - 2 * j, Kind::Phi}, c * co[j]);
            }
        }
    }
    return r;
}

TensorValuation crofton(const TensorValuation& v, int l) {
    const int n = v.n();
    if (l < 0 || l > n) throw DomainError("flat codimension out of range");
    TensorValuation r(n);
    for (const auto& [b, c] : v.terms()) {
        if (b.k + l > n) throw DomainError("Crofton formula undefined for " + term_name(n, b) + " with l=" + std::to_string(l));
        if (l == 0) {
            r.add(b, c);
        } else if (b.k == 0) {
            // chi(K cap E) integrates to flag(n,l)^{-1} mu_l; Q-powers pass through
            r.add({b.a, l, 0, b.kind}, c * flag(n, l).inverse());
        } else if (b.kind == Kind::Psi) {
            ES co = omega(b.s + b.k + l) / (omega(b.s + b.k) * omega(l)) * Z(binomial(b.k + l, b.k)) *
                    ES(make_q(b.k * l, b.k + l)) * flag(n, l).inverse();
            r.add({b.a, b.k + l, b.s, Kind::Psi}, c * co);
        } else {
            auto co = crofton_coeffs(n, b.k, l, b.s);
            for (int j = 0; j < static_cast<int>(co.size()); ++j) r.add({b.a + j, b.k + l, b.s - 2 * j, Kind::Phi}, c * co[j]);
        }
    }
    return r;
}

TensorValuation trace_val(const TensorValuation& v) {
    const int n = v.n();
    TensorValuation pv = psi_to_phi(v), r(n);
    for (const auto& [b, c] : pv.terms()) {
        const int m = b.total_rank();
        if (m < 2) throw DomainError("trace undefined for " + term_name(n, b) + ": rank below 2");
        const long den = static_cast<long>(m) * (m - 1);
        if (b.a > 0) r.add({b.a - 1, b.k, b.s, Kind::Phi}, c * ES(make_q(2L * b.a * (2 * b.a + 2 * b.s + n - 2), den)));
        r.add({b.a, b.k, b.s - 2, Kind::Phi}, c * ES(make_q(n - b.k + b.s - 2, 2 * den)) / ES::pi());
    }
    return r;
}

TensorValuation derivation(const TensorValuation& v) {
    const int n = v.n();
    TensorValuation pv = psi_to_phi(v), r(n);
    for (const auto& [b, c] : pv.terms()) {
        if (b.k == 0) continue;
        ES co = b.k == n ? ES(2) : omega(n - b.k + b.s + 1) * ES(n - b.k) / omega(n - b.k + b.s);
        r.add({b.a, b.k - 1, b.s, Kind::Phi}, c * co);
    }
    return r;
}

TensorValuation euler_verdier(const TensorValuation& v) {
    TensorValuation r(v.n());
    for (const auto& [b, c] : v.terms()) r.add(b, (b.k + b.s) % 2 ? -c : c);
    return r;
}

}  // namespace tensorval

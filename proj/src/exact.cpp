#include "tensorval/exact.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace tensorval {

GaussRational GaussRational::inverse() const {
    mpq_class d = re * re + im * im;
    if (sgn(d) == 0) throw DomainError("division by zero");
    return {re / d, -im / d};
}

ExactScalar::ExactScalar(long v) {
    if (v != 0) terms_[0] = GaussRational{mpq_class(v), 0};
}

ExactScalar::ExactScalar(const mpq_class& q) {
    if (sgn(q) != 0) terms_[0] = GaussRational{q, 0};
}

mpq_class make_q(long p, long q) {
    if (q == 0) throw DomainError("zero denominator");
    mpq_class r{mpz_class(p), mpz_class(q)};
    r.canonicalize();
    return r;
}

ExactScalar ExactScalar::rational(long p, long q) { return ExactScalar(make_q(p, q)); }

ExactScalar ExactScalar::gauss(const mpq_class& re, const mpq_class& im, int pihalf) {
    ExactScalar x;
    x.add_term(pihalf, GaussRational{re, im});
    return x;
}

ExactScalar ExactScalar::pi_power(int pihalf) { return gauss(1, 0, pihalf); }

ExactScalar ExactScalar::imag_unit() { return gauss(0, 1, 0); }

ExactScalar ExactScalar::i_pow(int s) {
    switch (((s % 4) + 4) % 4) {
        case 0: return 1;
        case 1: return gauss(0, 1);
        case 2: return -1;
        default: return gauss(0, -1);
    }
}

bool ExactScalar::is_rational() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == 0 && sgn(terms_.begin()->second.im) == 0;
}

mpq_class ExactScalar::rational_value() const {
    if (!is_rational()) throw DomainError("not a rational scalar: " + str());
    return terms_.empty() ? mpq_class(0) : terms_.begin()->second.re;
}

void ExactScalar::add_term(int h, const GaussRational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(h);
    if (it == terms_.end()) {
        terms_.emplace(h, c);
        return;
    }
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r = *this;
    for (auto& [h, c] : r.terms_) {
        c.re = -c.re;
        c.im = -c.im;
    }
    return r;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    for (const auto& [h, c] : o.terms_) add_term(h, c);
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    for (const auto& [h, c] : o.terms_) add_term(h, GaussRational{-c.re, -c.im});
    return *this;
}

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    ExactScalar r;
    for (const auto& [ha, ca] : a.terms_)
        for (const auto& [hb, cb] : b.terms_) r.add_term(ha + hb, ca * cb);
    return r;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) { return *this = *this * o; }

ExactScalar ExactScalar::inverse() const {
    if (terms_.empty()) throw DomainError("division by zero");
    if (terms_.size() != 1) throw DomainError("inverse of a non-monomial scalar: " + str());
    const auto& [h, c] = *terms_.begin();
    ExactScalar r;
    r.add_term(-h, c.inverse());
    return r;
}

ExactScalar ExactScalar::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    ExactScalar r(1), base = *this;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

std::complex<double> ExactScalar::to_complex() const {
    std::complex<long double> acc = 0;
    const long double sqrt_pi = std::sqrt(3.141592653589793238462643383279502884L);
    for (const auto& [h, c] : terms_) {
        long double scale = std::pow(sqrt_pi, static_cast<long double>(h));
        acc += std::complex<long double>(c.re.get_d(), c.im.get_d()) * scale;
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

namespace {

std::string atom(const mpq_class& q, int h, bool imag) {
    std::string s = imag ? "i*" : "";
    s += q.get_str();
    s += " * pi^(" + std::to_string(h) + "/2)";
    return s;
}

nlohmann::json z_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

mpz_class z_from_json(const nlohmann::json& j) {
    if (j.is_string()) return mpz_class(j.get<std::string>());
    return mpz_class(j.get<long>());
}

nlohmann::json q_to_json(const mpq_class& q) {
    return nlohmann::json::array({z_to_json(q.get_num()), z_to_json(q.get_den())});
}

mpq_class q_from_json(const nlohmann::json& j) {
    mpq_class q(z_from_json(j.at(0)), z_from_json(j.at(1)));
    q.canonicalize();
    return q;
}

}  // namespace

std::string ExactScalar::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [h, c] : terms_) {
        if (sgn(c.re) != 0) out += (out.empty() ? "" : " + ") + atom(c.re, h, false);
        if (sgn(c.im) != 0) out += (out.empty() ? "" : " + ") + atom(c.im, h, true);
    }
    return out;
}

ExactScalar ExactScalar::parse(const std::string& text) {
    if (text == "0") return {};
    ExactScalar r;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find(" + ", pos);
        std::string tok = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        bool imag = tok.rfind("i*", 0) == 0;
        if (imag) tok = tok.substr(2);
        size_t star = tok.find(" * pi^(");
        size_t slash = tok.rfind("/2)");
        if (star == std::string::npos || slash == std::string::npos || slash + 3 != tok.size())
            throw DomainError("malformed scalar term: " + tok);
        mpq_class q;
        if (q.set_str(tok.substr(0, star), 10) != 0) throw DomainError("malformed rational: " + tok);
        q.canonicalize();
        int h = std::stoi(tok.substr(star + 7, slash - star - 7));
        r.add_term(h, imag ? GaussRational{0, q} : GaussRational{q, 0});
        if (end == std::string::npos) break;
        pos = end + 3;
    }
    return r;
}

nlohmann::json ExactScalar::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [h, c] : terms_)
        arr.push_back({{"pihalf", h}, {"re", q_to_json(c.re)}, {"im", q_to_json(c.im)}});
    return {{"terms", arr}};
}

ExactScalar ExactScalar::from_json(const nlohmann::json& j) {
    ExactScalar r;
    for (const auto& t : j.at("terms"))
        r.add_term(t.at("pihalf").get<int>(), GaussRational{q_from_json(t.at("re")), q_from_json(t.at("im"))});
    return r;
}

mpz_class factorial(long m) {
    if (m < 0) throw DomainError("factorial of negative integer");
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(m));
    return r;
}

mpz_class binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

ExactScalar gamma_half(HalfInteger x) {
    if (x.twice < 1) throw DomainError("Gamma at non-positive argument " + std::to_string(x.twice) + "/2");
    if (x.twice % 2 == 0) return ExactScalar(factorial(x.twice / 2 - 1));
    long m = (x.twice - 1) / 2;
    mpz_class den = factorial(m);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * m));
    mpq_class c(factorial(2 * m), den);
    c.canonicalize();
    return ExactScalar::gauss(c, 0, 1);
}

ExactScalar kappa(long m) {
    if (m < 0) throw DomainError("kappa at negative index");
    return ExactScalar::pi_power(static_cast<int>(m)) / gamma_half2(m + 2);
}

ExactScalar omega(long m) {
    if (m < 1) throw DomainError("omega at index < 1");
    return ExactScalar(m) * kappa(m);
}

ExactScalar flag(long n, long k) {
    if (k < 0 || k > n) throw DomainError("flag coefficient index out of range");
    return ExactScalar(binomial(n, k)) * kappa(n) / (kappa(k) * kappa(n - k));
}

}  // namespace tensorval

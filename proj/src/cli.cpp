#include "tensorval/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tensorval/kinops.hpp"
#include "tensorval/mcharness.hpp"
#include "tensorval/spherical.hpp"

namespace tensorval {

namespace {

using TV = TensorValuation;
using ES = ExactScalar;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string where(std::initializer_list<std::pair<const char*, long>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += (s.empty() ? "" : " ") + std::string(k) + "=" + std::to_string(v);
    return s;
}

class Recorder {
public:
    explicit Recorder(SuiteReport& r) : r_(r) {}

    void check(const std::function<bool()>& f, const std::string& at) {
        ++r_.points;
        try {
            if (!f()) r_.failures.push_back(at);
        } catch (const std::exception& e) {
            r_.failures.push_back(at + ": " + e.what());
        }
    }

private:
    SuiteReport& r_;
};

std::vector<int> dims_or(const std::vector<int>& dims, int lo, int hi) {
    if (!dims.empty()) return dims;
    std::vector<int> d;
    for (int n = lo; n <= hi; ++n) d.push_back(n);
    return d;
}

const std::vector<int> kRanks = {0, 2, 3, 4};

void suite_theorem4(SuiteReport& r, const std::vector<int>& dims) {
    Recorder rec(r);
    for (int n : dims)
        for (auto [s1, s2] : {std::pair{2, 2}, {3, 2}, {3, 3}})
            for (int i = 0; i < n; ++i)
                rec.check([&] { return intersectional_kinematic(n, i, s1, s2) == intersectional_closed_form(n, i, s1, s2); },
                          where({{"n", n}, {"i", i}, {"s1", s1}, {"s2", s2}}));
}

void suite_additive(SuiteReport& r, const std::vector<int>& dims) {
    Recorder rec(r);
    for (int n : dims)
        for (int i = 0; i < n; ++i)
            for (int s1 : kRanks)
                for (int s2 : kRanks) {
                    auto at = where({{"n", n}, {"i", i}, {"s1", s1}, {"s2", s2}});
                    auto closed = additive_kinematic(n, i, s1, s2);
                    rec.check([&] { return closed == additive_from_area_measures(n, i, s1, s2); }, at + " area-measures");
                    rec.check([&] { return closed == additive_kinematic_ftaig(TV::phi(n, i, s1 + s2), s1, s2); }, at + " fourier-route");
                }
}

void suite_ftaig(SuiteReport& r, const std::vector<int>& dims) {
    Recorder rec(r);
    for (int n : dims)
        for (int i = 0; i < n; ++i)
            for (int s1 : kRanks)
                for (int s2 : kRanks) {
                    if (s1 + s2 > 6) continue;
                    auto at = where({{"n", n}, {"i", i}, {"s1", s1}, {"s2", s2}});
                    // k = (F (x) F) o a o F^{-1}, tested on F(Phi_{i,s})
                    rec.check(
                        [&] {
                            auto lhs = intersectional_kinematic(fourier(TV::phi(n, i, s1 + s2)), s1, s2);
                            return lhs == additive_kinematic(n, i, s1, s2).map(fourier, fourier);
                        },
                        at);
                }
}

void suite_algebra(SuiteReport& r, const std::vector<int>& dims) {
    Recorder rec(r);
    const std::vector<int> ranks = {0, 2, 3, 4, 5, 6};
    for (int n : dims) {
        for (int k = 0; k <= n; ++k)
            for (int s : ranks)
                for (int a = 0; a <= 3; ++a) {
                    TV v = TV::phi(n, k, s, a);
                    const ES sign = s % 2 ? ES(-1) : ES(1);
                    rec.check([&] { return fourier(fourier(v)) == sign * v; },
                              "plancherel " + where({{"n", n}, {"k", k}, {"s", s}, {"a", a}}));
                }
        for (int k = 0; k <= n; ++k)
            for (int l = 0; k + l <= n; ++l)
                for (int s1 : kRanks)
                    for (int s2 : kRanks)
                        for (int a = 0; a <= 3; ++a)
                            for (int b = 0; a + b <= 3; ++b) {
                                TV v = TV::phi(n, k, s1, a), w = TV::phi(n, l, s2, b);
                                if (v.is_zero() || w.is_zero()) continue;
                                rec.check([&] { return fourier(multiply(v, w)) == convolve(fourier(v), fourier(w)); },
                                          "homomorphism " +
                                              where({{"n", n}, {"k", k}, {"l", l}, {"s1", s1}, {"s2", s2}, {"a", a}, {"b", b}}));
                            }
        for (int k = 0; k <= n; ++k) {
            rec.check([&] { return fourier(TV::phi(n, k, 0)) == TV::phi(n, n - k, 0); }, "fourier-mu " + where({{"n", n}, {"k", k}}));
            for (int l = 0; l <= n; ++l) {
                if (k + l <= n)
                    rec.check([&] { return multiply(TV::phi(n, k, 0), TV::phi(n, l, 0)) == flag(k + l, k) * TV::phi(n, k + l, 0); },
                              "product-mu " + where({{"n", n}, {"k", k}, {"l", l}}));
                if (k + l >= n)
                    rec.check(
                        [&] {
                            return convolve(TV::phi(n, k, 0), TV::phi(n, l, 0)) ==
                                   flag(2 * n - k - l, n - k) * TV::phi(n, k + l - n, 0);
                        },
                        "convolution-mu " + where({{"n", n}, {"k", k}, {"l", l}}));
            }
        }
    }
}

void suite_crofton(SuiteReport& r, const std::vector<int>& dims) {
    Recorder rec(r);
    const std::vector<int> ranks = {0, 2, 3, 4, 5, 6};
    for (int n : dims)
        for (int k = 0; k <= n; ++k)
            for (int l = 0; k + l <= n; ++l)
                for (int s : ranks)
                    for (int a = 0; a <= 3; ++a) {
                        auto at = where({{"n", n}, {"k", k}, {"l", l}, {"s", s}, {"a", a}});
                        TV v = TV::phi(n, k, s, a);
                        rec.check([&] { return multiply(v, TV::phi(n, l, 0)) == flag(n, l) * crofton(v, l); }, "product " + at);
                        TV p = TV::psi(n, k, s, a);
                        rec.check([&] { return crofton(p, l) == crofton(psi_to_phi(p), l); }, "psi-basis " + at);
                    }
}

ES cor_pairing(int n, int k, int s) {
    // (k/2) Gamma((k+s)/2), continued to Gamma(k/2+1) at s = 0
    auto half = [](int k, int s) { return s == 0 ? gamma_half2(k + 2) : ES(make_q(k, 2)) * gamma_half2(k + s); };
    if (s > 0 && (k == 0 || k == n)) return {};
    ES sign = s % 2 ? ES(-1) : ES(1);
    return sign * ES(mpq_class(make_q(1 - s, 1) / mpq_class(factorial(s) * factorial(s)))) * ES::pi_power(-2 * s) * ES(binomial(n, k)) *
           half(k, s) * half(n - k, s) / gamma_half2(n + 2);
}

void suite_pairings(SuiteReport& r, const std::vector<int>& dims) {
    Recorder rec(r);
    for (int n : dims)
        for (int k = 0; k <= n; ++k) {
            for (int s : {0, 2, 3})
                rec.check([&] { return pairing_m(TV::phi(n, k, s), TV::phi(n, n - k, s)) == cor_pairing(n, k, s); },
                          "closed-form " + where({{"n", n}, {"k", k}, {"s", s}}));
            for (int s : {0, 2, 3, 4, 5, 6}) {
                auto at = where({{"n", n}, {"k", k}, {"s", s}});
                rec.check(
                    [&] {
                        auto m = pairing_matrix_m(n, k, s), c = pairing_matrix_c(n, k, s);
                        const ES sign = s % 2 ? ES(-1) : ES(1);
                        for (size_t i = 0; i < m.entries.size(); ++i)
                            for (size_t j = 0; j < m.entries[i].size(); ++j)
                                if (!(m.entries[i][j] == sign * c.entries[i][j])) return false;
                        return true;
                    },
                    "parity " + at);
                rec.check(
                    [&] {
                        auto m = pairing_matrix_m(n, k, s), t = pairing_matrix_m(n, n - k, s);
                        for (size_t i = 0; i < m.entries.size(); ++i)
                            for (size_t j = 0; j < m.entries[i].size(); ++j)
                                if (!(m.entries[i][j] == t.entries[j][i])) return false;
                        return true;
                    },
                    "symmetry " + at);
            }
        }
}

void suite_identities(SuiteReport& r, const std::vector<int>& dims) {
    IdentityGrid grid = default_identity_grid();
    if (!dims.empty()) grid.max_n = *std::max_element(dims.begin(), dims.end());
    auto rep = verify_identity_suite(grid);
    for (const auto& c : rep.checks) {
        r.points += c.points;
        for (const auto& f : c.failures) r.failures.push_back(c.name + ": " + f);
        r.params["checks"].push_back(c.to_json());
    }
}

const std::vector<std::pair<std::string, std::function<void(SuiteReport&, const std::vector<int>&)>>>& suites() {
    static const std::vector<std::pair<std::string, std::function<void(SuiteReport&, const std::vector<int>&)>>> s = {
        {"intersectional", [](SuiteReport& r, const std::vector<int>& d) { suite_theorem4(r, dims_or(d, 3, 6)); }},
        {"additive", [](SuiteReport& r, const std::vector<int>& d) { suite_additive(r, dims_or(d, 2, 6)); }},
        {"ftaig", [](SuiteReport& r, const std::vector<int>& d) { suite_ftaig(r, dims_or(d, 2, 5)); }},
        {"algebra", [](SuiteReport& r, const std::vector<int>& d) { suite_algebra(r, dims_or(d, 2, 6)); }},
        {"crofton", [](SuiteReport& r, const std::vector<int>& d) { suite_crofton(r, dims_or(d, 2, 6)); }},
        {"pairings", [](SuiteReport& r, const std::vector<int>& d) { suite_pairings(r, dims_or(d, 2, 6)); }},
        {"identities", [](SuiteReport& r, const std::vector<int>& d) { suite_identities(r, d); }},
    };
    return s;
}

// ---- command line ----

std::uint64_t default_seed() {
    const char* env = std::getenv("TENSORVAL_SEED");
    if (!env || !*env) return kDefaultSeed;
    try {
        size_t pos = 0;
        auto v = std::stoull(env, &pos);
        if (pos != std::string(env).size()) throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        throw UsageError(std::string("TENSORVAL_SEED is not an unsigned integer: ") + env);
    }
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed JSON in " + path + ": " + e.what());
    }
}

Body read_body(const std::string& path) {
    auto j = read_json(path);
    try {
        return body_from_json(j);
    } catch (const std::exception& e) {
        throw UsageError("malformed body in " + path + ": " + e.what());
    }
}

Polytope read_polytope(const std::string& path) {
    Body b = read_body(path);
    if (!std::holds_alternative<Polytope>(b)) throw UsageError("Monte Carlo checks require polytope bodies: " + path);
    return std::get<Polytope>(b);
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        if (text.empty() || text.back() != '\n') out << "\n";
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw UsageError("cannot write " + out_path);
    f << text;
    if (text.empty() || text.back() != '\n') f << "\n";
}

std::string csv_cell(const std::string& s) { return "\"" + s + "\""; }

struct TableBlock {
    int degree = 0;
    std::vector<BasisElement> rows, cols;
    std::vector<TV> images;
};

struct Options {
    std::string out, format = "json", body, valuation, op, suite, formula, mode = "additive", cones = "auto", with, source;
    std::vector<std::string> bodies;
    std::vector<int> dims;
    int n = 3, k = 1, s = 0, l = 1, i = 0, s1 = 2, s2 = 2, rank = 2, a = 0;
    long samples = 100000, cone_samples = 100000;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = -1;
    bool as_float = false, serial = false, spherical = false;
};

ConeOptions cone_options(const Options& o) {
    ConeOptions c;
    c.samples = o.cone_samples;
    c.seed = o.seed;
    if (o.cones == "sampled")
        c.mode = ConeMode::Sampled;
    else if (o.cones != "auto")
        throw UsageError("--cones must be auto or sampled");
    return c;
}

McConfig mc_config(const Options& o, double default_tol) {
    if (o.samples <= 0) throw UsageError("--samples must be positive");
    McConfig cfg;
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.parallel = !o.serial;
    cfg.tolerance = o.tolerance > 0 ? o.tolerance : default_tol;
    cfg.cones = cone_options(o);
    return cfg;
}

int cmd_eval(const Options& o, std::ostream& out) {
    if (o.body.empty()) throw UsageError("eval requires --body");
    Body body = read_body(o.body);
    const int n = ambient_dim(body);
    nlohmann::json config = {{"subcommand", "eval"}, {"body", body_to_json(body)}, {"cones", o.cones},
                             {"cone_samples", o.cone_samples}, {"seed", o.seed}};
    nlohmann::json result;
    if (!o.valuation.empty()) {
        TV v = TV::from_json(read_json(o.valuation));
        if (v.n() != n) throw UsageError("valuation and body dimensions differ");
        config["valuation"] = v.to_json();
        config["rank"] = o.rank;
        result["tensor"] = evaluate(v, o.rank, body, cone_options(o)).to_json();
    } else {
        if (o.k < 0 || o.k > n || o.s < 0 || o.s > kMaxRank) throw UsageError("--k/--s out of range");
        config["k"] = o.k;
        config["s"] = o.s;
        auto est = minkowski_tensor_estimate(body, o.k, o.s, cone_options(o));
        result["tensor"] = est.value.to_json();
        result["std_error"] = est.std_error.to_json();
    }
    result["config"] = config;
    emit(result.dump(2), o.out, out);
    return 0;
}

std::vector<TableBlock> operator_table(const Options& o) {
    const int n = o.n;
    if (n < 1 || o.rank < 0) throw UsageError("--n/--rank out of range");
    std::function<TV(const TV&)> op;
    Kind source_kind = Kind::Phi;
    if (o.op == "fourier")
        op = fourier;
    else if (o.op == "inverse-fourier")
        op = inverse_fourier;
    else if (o.op == "phi-to-psi")
        op = phi_to_psi;
    else if (o.op == "psi-to-phi") {
        op = psi_to_phi;
        source_kind = Kind::Psi;
    } else if (o.op == "trace")
        op = trace_val;
    else if (o.op == "derivation")
        op = derivation;
    else if (o.op == "euler-verdier")
        op = euler_verdier;
    else if (o.op == "crofton")
        op = [l = o.l](const TV& v) { return crofton(v, l); };
    else if (o.op == "multiply" || o.op == "convolve") {
        if (o.with.empty()) throw UsageError("--op " + o.op + " requires --with <basis label>");
        TV w = TV::of(n, BasisElement::parse_label(o.with));
        if (o.op == "multiply")
            op = [w](const TV& v) { return multiply(v, w); };
        else
            op = [w](const TV& v) { return convolve(v, w); };
    } else
        throw UsageError("unknown --op " + o.op);
    if (o.op == "trace" && o.rank < 2) throw UsageError("trace requires --rank >= 2");

    std::vector<TableBlock> blocks;
    for (int k = 0; k <= n; ++k) {
        TableBlock b;
        b.degree = k;
        auto basis = source_kind == Kind::Phi ? phi_basis(n, k, o.rank) : psi_basis(n, k, o.rank);
        for (const auto& e : basis) {
            TV img(n);
            try {
                img = op(TV::of(n, e));
            } catch (const DomainError&) {
                continue;  // operator undefined on this degree
            }
            b.rows.push_back(e);
            b.images.push_back(img);
            for (const auto& [t, c] : img.terms()) b.cols.push_back(t);
        }
        if (b.rows.empty()) continue;
        std::sort(b.cols.begin(), b.cols.end(), [](const BasisElement& x, const BasisElement& y) {
            return std::tie(x.k, x.kind, x.a, x.s) < std::tie(y.k, y.kind, y.a, y.s);
        });
        b.cols.erase(std::unique(b.cols.begin(), b.cols.end()), b.cols.end());
        blocks.push_back(std::move(b));
    }
    return blocks;
}

ES coeff_of(const TV& v, const BasisElement& e) {
    auto it = v.terms().find(e);
    return it == v.terms().end() ? ES() : it->second;
}

int cmd_table(const Options& o, std::ostream& out) {
    auto blocks = operator_table(o);
    nlohmann::json config = {{"subcommand", "table"}, {"op", o.op}, {"n", o.n}, {"rank", o.rank}, {"float", o.as_float}};
    if (o.op == "crofton") config["l"] = o.l;
    if (!o.with.empty()) config["with"] = o.with;
    if (o.format == "csv") {
        std::ostringstream os;
        for (size_t bi = 0; bi < blocks.size(); ++bi) {
            const auto& b = blocks[bi];
            if (bi) os << "\n";
            os << "source\\target";
            for (const auto& c : b.cols) os << "," << c.label();
            os << "\n";
            for (size_t r = 0; r < b.rows.size(); ++r) {
                os << b.rows[r].label();
                for (const auto& c : b.cols) os << "," << csv_cell(format_scalar(coeff_of(b.images[r], c), o.as_float));
                os << "\n";
            }
        }
        emit(os.str(), o.out, out);
        return 0;
    }
    if (o.format != "json") throw UsageError("--format must be csv or json");
    nlohmann::json jb = nlohmann::json::array();
    for (const auto& b : blocks) {
        nlohmann::json rows = nlohmann::json::array(), cols = nlohmann::json::array(), mat = nlohmann::json::array();
        for (const auto& r : b.rows) rows.push_back(r.label());
        for (const auto& c : b.cols) cols.push_back(c.label());
        for (const auto& img : b.images) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& c : b.cols) {
                ES x = coeff_of(img, c);
                row.push_back(o.as_float ? nlohmann::json(format_scalar(x, true)) : x.to_json());
            }
            mat.push_back(row);
        }
        jb.push_back({{"degree", b.degree}, {"rows", rows}, {"cols", cols}, {"matrix", mat}});
    }
    nlohmann::json result = {{"config", config}, {"basis_order", "degree, then ascending Q-power"}, {"blocks", jb}};
    emit(result.dump(2), o.out, out);
    return 0;
}

int cmd_kinematic(const Options& o, std::ostream& out) {
    if (o.n < 1 || o.i < 0 || o.i > o.n - 1) throw UsageError("--i must lie in 0..n-1");
    if (o.s1 < 0 || o.s2 < 0 || o.s1 == 1 || o.s2 == 1) throw UsageError("--s1/--s2 must be non-negative and not 1");
    TV source = o.source.empty() ? TV::phi(o.n, o.i, o.s1 + o.s2) : TV::of(o.n, BasisElement::parse_label(o.source));
    KinematicTable t(o.n, o.s1, o.s2);
    if (o.mode == "additive")
        t = o.source.empty() ? additive_kinematic(o.n, o.i, o.s1, o.s2) : additive_kinematic_ftaig(source, o.s1, o.s2);
    else if (o.mode == "intersectional")
        t = intersectional_kinematic(source, o.s1, o.s2);
    else
        throw UsageError("--mode must be additive or intersectional");
    nlohmann::json config = {{"subcommand", "kinematic"}, {"mode", o.mode}, {"n", o.n}, {"i", o.i},
                             {"s1", o.s1}, {"s2", o.s2}, {"source", source.to_json()}, {"float", o.as_float}};
    if (o.format == "csv") {
        emit(t.to_csv(o.as_float), o.out, out);
        return 0;
    }
    if (o.format != "json") throw UsageError("--format must be csv or json");
    nlohmann::json result = t.to_json(o.as_float);
    result["config"] = config;
    emit(result.dump(2), o.out, out);
    return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
    SuiteReport r = run_suite(o.suite, o.dims);
    emit(r.to_json().dump(2), o.out, out);
    return r.passed() ? 0 : 2;
}

int cmd_verify_mc(const Options& o, std::ostream& out) {
    const int n = o.n;
    if (n < 2 || n > kMaxBodyDim) throw UsageError("--n must lie in 2.." + std::to_string(kMaxBodyDim));
    auto body_at = [&](size_t idx) {
        if (idx < o.bodies.size()) {
            Polytope p = read_polytope(o.bodies[idx]);
            if (p.ambient_dim() != n) throw UsageError("body dimension differs from --n: " + o.bodies[idx]);
            return p;
        }
        return cube(n, 1.0, true);
    };
    VerificationReport rep;
    if (o.formula == "crofton") {
        if (o.k < 0 || o.l < 1 || o.k + o.l > n) throw UsageError("crofton requires 0 <= k, 1 <= l, k + l <= n");
        rep = mc_crofton(body_at(0), o.k, o.s, o.l, mc_config(o, 0.02));
    } else if (o.formula == "additive") {
        rep = mc_additive(body_at(0), body_at(1), o.i, o.s1, o.s2, mc_config(o, 0.02));
    } else if (o.formula == "intersectional") {
        rep = mc_intersectional(body_at(0), body_at(1), o.i, o.s1, o.s2, mc_config(o, 0.05));
    } else {
        throw UsageError("--formula must be crofton, additive or intersectional");
    }
    nlohmann::json j = rep.to_json();
    j["config"]["subcommand"] = "verify-mc";
    j["config"]["parallel"] = !o.serial;
    emit(j.dump(2), o.out, out);
    return rep.passed ? 0 : 2;
}

int cmd_verify_radon(const Options& o, std::ostream& out) {
    if (o.n < 2 || o.n > 5) throw UsageError("--n must lie in 2..5");
    if (o.s < 0 || o.s % 2) throw UsageError("--s must be even and non-negative");
    McConfig cfg = mc_config(o, 0.01);
    VerificationReport rep;
    if (o.spherical)
        rep = mc_spherical_radon_check(o.n, o.s, cfg);
    else {
        if (o.k < 1 || o.k > o.n - 1) throw UsageError("--k must lie in 1..n-1");
        rep = mc_radon_check(o.n, o.k, o.s, cfg);
    }
    nlohmann::json j = rep.to_json();
    j["config"]["subcommand"] = "verify-radon";
    j["config"]["parallel"] = !o.serial;
    emit(j.dump(2), o.out, out);
    return rep.passed ? 0 : 2;
}

int cmd_verify_identities(const Options& o, std::ostream& out) {
    IdentitySuiteReport rep = verify_identity_suite();
    nlohmann::json j = rep.to_json();
    j["config"] = {{"subcommand", "verify-identities"}};
    emit(j.dump(2), o.out, out);
    return rep.passed() ? 0 : 2;
}

}  // namespace

nlohmann::json SuiteReport::to_json() const {
    return {{"suite", name}, {"params", params}, {"points", points}, {"failures", failures}, {"passed", passed()}};
}

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, f] : suites()) names.push_back(name);
    return names;
}

SuiteReport run_suite(const std::string& name, const std::vector<int>& dims) {
    for (int n : dims)
        if (n < 2 || n > 8) throw DomainError("suite dimensions must lie in 2..8");
    for (const auto& [key, f] : suites())
        if (key == name) {
            SuiteReport r;
            r.name = name;
            r.params = {{"dims", dims}};
            f(r, dims);
            return r;
        }
    throw DomainError("unknown suite: " + name);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact algebra of tensor valuations, Minkowski tensors and Monte Carlo verification"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* c) { c->add_option("--out", o.out, "write output to this file"); };
    auto add_mc = [&](CLI::App* c) {
        c->add_option("--samples", o.samples, "Monte Carlo samples");
        c->add_option("--seed", o.seed, "master seed (default: TENSORVAL_SEED or built-in)");
        c->add_option("--tolerance", o.tolerance, "relative tolerance");
        c->add_flag("--serial", o.serial, "disable OpenMP workers");
    };

    auto* eval = app.add_subcommand("eval", "evaluate Phi_{k,s} or a valuation on a body");
    eval->add_option("--body", o.body, "body JSON file")->required();
    eval->add_option("--k", o.k, "degree");
    eval->add_option("--s", o.s, "rank");
    eval->add_option("--valuation", o.valuation, "valuation JSON file (instead of --k/--s)");
    eval->add_option("--rank", o.rank, "total rank when --valuation is given");
    eval->add_option("--cones", o.cones, "auto or sampled normal-cone moments");
    eval->add_option("--cone-samples", o.cone_samples, "samples per normal cone");
    eval->add_option("--seed", o.seed, "seed for sampled cones");
    add_common(eval);

    auto* table = app.add_subcommand("table", "operator matrix on the basis of a given rank");
    table->add_option("--op", o.op, "fourier, inverse-fourier, phi-to-psi, psi-to-phi, trace, derivation, euler-verdier, "
                                    "crofton, multiply, convolve")
        ->required();
    table->add_option("--n", o.n, "ambient dimension")->required();
    table->add_option("--rank", o.rank, "total tensor rank")->required();
    table->add_option("--l", o.l, "flat codimension for crofton");
    table->add_option("--with", o.with, "second factor label for multiply/convolve, e.g. Q^0.Phi_{1,0}");
    table->add_option("--format", o.format, "csv or json");
    table->add_flag("--float", o.as_float, "decimal output");
    add_common(table);

    auto* verify = app.add_subcommand("verify", "exact verification suite");
    std::string names;
    for (const auto& s : suite_names()) names += (names.empty() ? "" : ", ") + s;
    verify->add_option("--suite", o.suite, names)->required();
    verify->add_option("--n", o.dims, "ambient dimensions (default: suite grid)");
    add_common(verify);

    auto* vmc = app.add_subcommand("verify-mc", "Monte Carlo check of an integral-geometric formula");
    vmc->add_option("--formula", o.formula, "crofton, additive or intersectional")->required();
    vmc->add_option("--n", o.n, "ambient dimension");
    vmc->add_option("--k", o.k, "degree (crofton)");
    vmc->add_option("--s", o.s, "rank (crofton)");
    vmc->add_option("--l", o.l, "flat codimension (crofton)");
    vmc->add_option("--i", o.i, "degree (kinematic)");
    vmc->add_option("--s1", o.s1, "first rank (kinematic)");
    vmc->add_option("--s2", o.s2, "second rank (kinematic)");
    vmc->add_option("--bodies", o.bodies, "polytope JSON files (default: centered unit cubes)");
    vmc->add_option("--cones", o.cones, "auto or sampled normal-cone moments");
    vmc->add_option("--cone-samples", o.cone_samples, "samples per normal cone");
    add_mc(vmc);
    add_common(vmc);

    auto* vid = app.add_subcommand("verify-identities", "exact summation identities and multiplier relations");
    add_common(vid);

    auto* vradon = app.add_subcommand("verify-radon", "Monte Carlo check of Radon eigenvalues");
    vradon->add_option("--n", o.n, "ambient dimension")->required();
    vradon->add_option("--k", o.k, "subspace dimension");
    vradon->add_option("--s", o.s, "even harmonic degree")->required();
    vradon->add_flag("--spherical", o.spherical, "spherical Radon transform instead of the iterated one");
    add_mc(vradon);
    add_common(vradon);

    auto* kin = app.add_subcommand("kinematic", "additive or intersectional kinematic table");
    kin->add_option("--mode", o.mode, "additive or intersectional");
    kin->add_option("--n", o.n, "ambient dimension")->required();
    kin->add_option("--i", o.i, "degree")->required();
    kin->add_option("--s1", o.s1, "first rank")->required();
    kin->add_option("--s2", o.s2, "second rank")->required();
    kin->add_option("--source", o.source, "source basis label (default Q^0.Phi_{i,s1+s2})");
    kin->add_option("--format", o.format, "csv or json");
    kin->add_flag("--float", o.as_float, "decimal output");
    add_common(kin);

    try {
        o.seed = default_seed();
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (eval->parsed()) return cmd_eval(o, out);
        if (table->parsed()) return cmd_table(o, out);
        if (verify->parsed()) return cmd_verify(o, out);
        if (vmc->parsed()) return cmd_verify_mc(o, out);
        if (vid->parsed()) return cmd_verify_identities(o, out);
        if (vradon->parsed()) return cmd_verify_radon(o, out);
        if (kin->parsed()) return cmd_kinematic(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace tensorval

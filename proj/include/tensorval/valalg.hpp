#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "tensorval/exact.hpp"

namespace tensorval {

enum class Kind { Phi, Psi };

// Q^a Phi_{k,s} or Q^a Psi_{k,s}
struct BasisElement {
    int a = 0;
    int k = 0;
    int s = 0;
    Kind kind = Kind::Phi;

    int total_rank() const { return 2 * a + s; }
    std::string label() const;
    static BasisElement parse_label(const std::string& text);
    auto operator<=>(const BasisElement&) const = default;
};

class TensorValuation {
public:
    using Terms = std::map<BasisElement, ExactScalar>;

    explicit TensorValuation(int n);
    static TensorValuation phi(int n, int k, int s, int a = 0);
    static TensorValuation psi(int n, int k, int s, int a = 0);
    static TensorValuation of(int n, const BasisElement& b, const ExactScalar& c = 1);

    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Adds c * b after normalizing b (zero elements dropped, degree 0 rewritten in Q^a chi).
    void add(const BasisElement& b, const ExactScalar& c);
    void add(const TensorValuation& v, const ExactScalar& c = 1);

    TensorValuation times_q(int a = 1) const;
    TensorValuation operator-() const;
    TensorValuation& operator+=(const TensorValuation& o);
    TensorValuation& operator-=(const TensorValuation& o);
    TensorValuation& operator*=(const ExactScalar& c);
    friend TensorValuation operator+(TensorValuation a, const TensorValuation& b) { return a += b; }
    friend TensorValuation operator-(TensorValuation a, const TensorValuation& b) { return a -= b; }
    friend TensorValuation operator*(const ExactScalar& c, TensorValuation v) { return v *= c; }

    // Equality of the underlying valuations (compared in the Phi basis).
    friend bool operator==(const TensorValuation& a, const TensorValuation& b);
    bool same_terms(const TensorValuation& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    std::string str() const;
    nlohmann::json to_json() const;
    static TensorValuation from_json(const nlohmann::json& j);

private:
    int n_;
    Terms terms_;
};

// Nonzero basis {Q^a Phi_{k, s-2a}} of rank-s, degree-k valuations, ascending in a.
std::vector<BasisElement> phi_basis(int n, int k, int s);
std::vector<BasisElement> psi_basis(int n, int k, int s);

TensorValuation fourier(const TensorValuation& v);
TensorValuation inverse_fourier(const TensorValuation& v);
TensorValuation convolve(const TensorValuation& v, const TensorValuation& w);
TensorValuation multiply(const TensorValuation& v, const TensorValuation& w);
TensorValuation crofton(const TensorValuation& v, int l);
TensorValuation phi_to_psi(const TensorValuation& v);
TensorValuation psi_to_phi(const TensorValuation& v);
TensorValuation trace_val(const TensorValuation& v);
TensorValuation derivation(const TensorValuation& v);
TensorValuation euler_verdier(const TensorValuation& v);

}  // namespace tensorval

#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tensorval/valalg.hpp"

namespace tensorval {

using ExactMatrix = std::vector<std::vector<ExactScalar>>;

// <pd_m^s v, w> and <pd_c^s v, w>; zero unless degrees are complementary and ranks agree.
ExactScalar pairing_m(const TensorValuation& v, const TensorValuation& w);
ExactScalar pairing_c(const TensorValuation& v, const TensorValuation& w);

struct PairingMatrix {
    int n = 0, k = 0, s = 0;
    std::vector<BasisElement> left;   // basis of degree k
    std::vector<BasisElement> right;  // basis of degree n-k
    ExactMatrix entries;
};

PairingMatrix pairing_matrix_m(int n, int k, int s);
PairingMatrix pairing_matrix_c(int n, int k, int s);

// Solves A X = B by fraction-free elimination; pivots must be monomials.
ExactMatrix solve_exact(ExactMatrix a, ExactMatrix b);

class KinematicTable {
public:
    using Key = std::pair<BasisElement, BasisElement>;

    KinematicTable(int n, int s1, int s2) : n_(n), s1_(s1), s2_(s2) {}

    int n() const { return n_; }
    int s1() const { return s1_; }
    int s2() const { return s2_; }
    const std::map<Key, ExactScalar>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    void add(const BasisElement& left, const BasisElement& right, const ExactScalar& c);
    // adds c * (left (x) right), expanded bilinearly in canonical basis elements
    void add(const TensorValuation& left, const TensorValuation& right, const ExactScalar& c);

    ExactScalar coeff(const BasisElement& left, const BasisElement& right) const;
    // basis lists sorted by degree, then ascending Q-power
    std::vector<BasisElement> left_basis() const;
    std::vector<BasisElement> right_basis() const;
    ExactMatrix matrix() const;

    KinematicTable map(const std::function<TensorValuation(const TensorValuation&)>& left,
                       const std::function<TensorValuation(const TensorValuation&)>& right) const;
    KinematicTable to_phi() const;
    KinematicTable to_psi() const;

    // same bilinear element (compared in the Phi basis)
    friend bool operator==(const KinematicTable& a, const KinematicTable& b);

    nlohmann::json to_json(bool as_float = false) const;
    std::string to_csv(bool as_float = false) const;
    std::string str() const;

private:
    int n_, s1_, s2_;
    std::map<Key, ExactScalar> entries_;
};

std::string format_scalar(const ExactScalar& x, bool as_float);

// Closed-form additive kinematic operator on Phi_{i, s1+s2}.
KinematicTable additive_kinematic(int n, int i, int s1, int s2);
// Additive operator through the Fourier route (F^{-1} (x) F^{-1}) o k o F; accepts Q-multiples.
KinematicTable additive_kinematic_ftaig(const TensorValuation& source, int s1, int s2);
// Additive operator assembled from the rotation-sum formula for area measures and the moment map.
KinematicTable additive_from_area_measures(int n, int i, int s1, int s2);

// Intersectional kinematic operator by inverting the Poincare pairings blockwise.
KinematicTable intersectional_kinematic(const TensorValuation& source, int s1, int s2);
KinematicTable intersectional_kinematic(int n, int i, int s1, int s2);

// The displayed closed forms for bi-ranks (2,2), (3,2), (3,3) on Phi_{i, s1+s2}.
KinematicTable intersectional_closed_form(int n, int i, int s1, int s2);

}  // namespace tensorval

#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"

namespace tensorval {

inline constexpr int kMaxDim = 6;
inline constexpr int kMaxRank = 8;

// Lookup tables for sorted multi-indices of a given (dim, rank).
struct SymIndex {
    int dim = 0;
    int rank = 0;
    std::vector<std::vector<int>> tuples;  // sorted multi-indices, lexicographic
    std::vector<double> multiplicity;      // number of distinct permutations
    std::vector<int> pos_of_code;          // full index code sum idx[j] * dim^j -> position

    size_t position(const int* idx) const;
};

const SymIndex& sym_index(int dim, int rank);

class SymTensor {
public:
    SymTensor() = default;
    SymTensor(int dim, int rank);

    static SymTensor scalar(int dim, double v);
    static SymTensor metric(int dim);

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    size_t size() const { return data_.size(); }
    const SymIndex& index() const { return sym_index(dim_, rank_); }

    double& operator[](size_t pos) { return data_[pos]; }
    double operator[](size_t pos) const { return data_[pos]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    double at(const std::vector<int>& idx) const;
    void set(const std::vector<int>& idx, double v);

    // T(x, ..., x)
    double eval(const std::vector<double>& x) const;
    double max_abs() const;

    SymTensor& operator+=(const SymTensor& o);
    SymTensor& operator-=(const SymTensor& o);
    SymTensor& operator*=(double c);
    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(double c, SymTensor a) { return a *= c; }

    nlohmann::json to_json() const;
    static SymTensor from_json(const nlohmann::json& j);

private:
    int dim_ = 0;
    int rank_ = 0;
    std::vector<double> data_;
};

SymTensor sym_product(const SymTensor& a, const SymTensor& b);
SymTensor contract(const SymTensor& a, const SymTensor& b);
SymTensor trace(const SymTensor& t);
double inner(const SymTensor& a, const SymTensor& b);
SymTensor power(const std::vector<double>& y, int s);
SymTensor metric_power(int dim, int a);

// g^{(x) r} T for a dim x dim matrix g stored row-major
SymTensor transform(const SymTensor& t, const std::vector<double>& g);

// Element of Sym^{r1} (x) Sym^{r2}, stored as a dense (size1 x size2) block over sorted indices.
class BiTensor {
public:
    BiTensor() = default;
    BiTensor(int dim, int r1, int r2);

    static BiTensor outer(const SymTensor& a, const SymTensor& b);
    // (id^{r1} (x) g^{r2}) applied to a symmetric tensor of rank r1 + r2
    static BiTensor split(const SymTensor& t, int r1, const std::vector<double>* g = nullptr);

    int dim() const { return dim_; }
    int rank1() const { return r1_; }
    int rank2() const { return r2_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    double& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    double operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }
    double max_abs() const;

    BiTensor& operator+=(const BiTensor& o);
    BiTensor& operator*=(double c);

    nlohmann::json to_json() const;

private:
    int dim_ = 0, r1_ = 0, r2_ = 0;
    size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

}  // namespace tensorval

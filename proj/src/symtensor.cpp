#include "tensorval/symtensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace tensorval {

namespace {

long ipow(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void build_tuples(int dim, int rank, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == rank) {
        out.push_back(cur);
        return;
    }
    for (int v = start; v < dim; ++v) {
        cur.push_back(v);
        build_tuples(dim, rank, v, cur, out);
        cur.pop_back();
    }
}

long code_of(const int* idx, int rank, int dim) {
    long c = 0, p = 1;
    for (int j = 0; j < rank; ++j, p *= dim) c += idx[j] * p;
    return c;
}

void check_shape(int dim, int rank) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("tensor dimension out of range: " + std::to_string(dim));
    if (rank < 0 || rank > kMaxRank) throw std::invalid_argument("tensor rank out of range: " + std::to_string(rank));
}

}  // namespace

size_t SymIndex::position(const int* idx) const {
    return static_cast<size_t>(pos_of_code[static_cast<size_t>(code_of(idx, rank, dim))]);
}

const SymIndex& sym_index(int dim, int rank) {
    check_shape(dim, rank);
    static std::array<std::array<SymIndex, kMaxRank + 1>, kMaxDim + 1> tables;
    static std::array<std::array<std::once_flag, kMaxRank + 1>, kMaxDim + 1> flags;
    std::call_once(flags[dim][rank], [dim, rank] {
        SymIndex& t = tables[dim][rank];
        t.dim = dim;
        t.rank = rank;
        std::vector<int> cur;
        build_tuples(dim, rank, 0, cur, t.tuples);
        double rfact = std::tgamma(rank + 1.0);
        for (const auto& tup : t.tuples) {
            std::vector<int> counts(dim, 0);
            for (int v : tup) ++counts[v];
            double denom = 1;
            for (int c : counts) denom *= std::tgamma(c + 1.0);
            t.multiplicity.push_back(std::round(rfact / denom));
        }
        long total = ipow(dim, rank);
        t.pos_of_code.assign(static_cast<size_t>(total), 0);
        std::vector<int> digits(rank);
        for (long c = 0; c < total; ++c) {
            long x = c;
            for (int j = 0; j < rank; ++j, x /= dim) digits[j] = static_cast<int>(x % dim);
            std::vector<int> sorted = digits;
            std::sort(sorted.begin(), sorted.end());
            auto it = std::lower_bound(t.tuples.begin(), t.tuples.end(), sorted);
            t.pos_of_code[static_cast<size_t>(c)] = static_cast<int>(it - t.tuples.begin());
        }
    });
    return tables[dim][rank];
}

SymTensor::SymTensor(int dim, int rank) : dim_(dim), rank_(rank) {
    data_.assign(sym_index(dim, rank).tuples.size(), 0.0);
}

SymTensor SymTensor::scalar(int dim, double v) {
    SymTensor t(dim, 0);
    t.data_[0] = v;
    return t;
}

SymTensor SymTensor::metric(int dim) {
    SymTensor t(dim, 2);
    for (int i = 0; i < dim; ++i) t.set({i, i}, 1.0);
    return t;
}

double SymTensor::at(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != rank_) throw std::invalid_argument("index length does not match rank");
    return data_[index().position(idx.data())];
}

void SymTensor::set(const std::vector<int>& idx, double v) {
    if (static_cast<int>(idx.size()) != rank_) throw std::invalid_argument("index length does not match rank");
    data_[index().position(idx.data())] = v;
}

double SymTensor::eval(const std::vector<double>& x) const {
    const SymIndex& ix = index();
    double acc = 0;
    for (size_t p = 0; p < data_.size(); ++p) {
        double m = ix.multiplicity[p] * data_[p];
        for (int v : ix.tuples[p]) m *= x[v];
        acc += m;
    }
    return acc;
}

double SymTensor::max_abs() const {
    double m = 0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
    if (dim_ != o.dim_ || rank_ != o.rank_) throw std::invalid_argument("shape mismatch in tensor sum");
    for (size_t p = 0; p < data_.size(); ++p) data_[p] += o.data_[p];
    return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
    if (dim_ != o.dim_ || rank_ != o.rank_) throw std::invalid_argument("shape mismatch in tensor difference");
    for (size_t p = 0; p < data_.size(); ++p) data_[p] -= o.data_[p];
    return *this;
}

SymTensor& SymTensor::operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

nlohmann::json SymTensor::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    const SymIndex& ix = index();
    for (size_t p = 0; p < data_.size(); ++p) entries.push_back({{"idx", ix.tuples[p]}, {"val", data_[p]}});
    return {{"dim", dim_}, {"rank", rank_}, {"entries", entries}};
}

SymTensor SymTensor::from_json(const nlohmann::json& j) {
    SymTensor t(j.at("dim").get<int>(), j.at("rank").get<int>());
    for (const auto& e : j.at("entries")) t.set(e.at("idx").get<std::vector<int>>(), e.at("val").get<double>());
    return t;
}

SymTensor sym_product(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch in symmetric product");
    const int n = a.dim(), r = a.rank(), s = b.rank();
    SymTensor out(n, r + s);
    const SymIndex& ix = out.index();
    const SymIndex& ia = a.index();
    const SymIndex& ib = b.index();
    double total = std::round(std::tgamma(r + s + 1.0) / (std::tgamma(r + 1.0) * std::tgamma(s + 1.0)));
    std::vector<int> counts(n), part(n), ta, tb;
    for (size_t p = 0; p < out.size(); ++p) {
        std::fill(counts.begin(), counts.end(), 0);
        for (int v : ix.tuples[p]) ++counts[v];
        double acc = 0;
        // enumerate sub-multisets of size r
        std::fill(part.begin(), part.end(), 0);
        auto rec = [&](auto&& self, int v, int left, double weight) -> void {
            if (v == n) {
                if (left != 0) return;
                ta.clear();
                tb.clear();
                for (int u = 0; u < n; ++u) {
                    ta.insert(ta.end(), part[u], u);
                    tb.insert(tb.end(), counts[u] - part[u], u);
                }
                acc += weight * a[ia.position(ta.data())] * b[ib.position(tb.data())];
                return;
            }
            for (int c = 0; c <= std::min(counts[v], left); ++c) {
                part[v] = c;
                double w = std::round(std::tgamma(counts[v] + 1.0) / (std::tgamma(c + 1.0) * std::tgamma(counts[v] - c + 1.0)));
                self(self, v + 1, left - c, weight * w);
            }
            part[v] = 0;
        };
        rec(rec, 0, r, 1.0);
        out[p] = acc / total;
    }
    return out;
}

SymTensor contract(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch in contraction");
    if (a.rank() > b.rank()) throw std::invalid_argument("contraction requires rank(a) <= rank(b)");
    const int n = a.dim(), r = a.rank(), t = b.rank();
    SymTensor out(n, t - r);
    const SymIndex& io = out.index();
    const SymIndex& ia = a.index();
    const SymIndex& ib = b.index();
    std::vector<int> merged(t);
    for (size_t q = 0; q < out.size(); ++q) {
        std::copy(io.tuples[q].begin(), io.tuples[q].end(), merged.begin() + r);
        double acc = 0;
        for (size_t p = 0; p < a.size(); ++p) {
            std::copy(ia.tuples[p].begin(), ia.tuples[p].end(), merged.begin());
            acc += ia.multiplicity[p] * a[p] * b[ib.position(merged.data())];
        }
        out[q] = acc;
    }
    return out;
}

SymTensor trace(const SymTensor& t) {
    if (t.rank() < 2) throw std::invalid_argument("trace requires rank >= 2");
    return contract(SymTensor::metric(t.dim()), t);
}

double inner(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim() || a.rank() != b.rank()) throw std::invalid_argument("shape mismatch in inner product");
    const SymIndex& ix = a.index();
    double acc = 0;
    for (size_t p = 0; p < a.size(); ++p) acc += ix.multiplicity[p] * a[p] * b[p];
    return acc;
}

SymTensor power(const std::vector<double>& y, int s) {
    SymTensor out(static_cast<int>(y.size()), s);
    const SymIndex& ix = out.index();
    for (size_t p = 0; p < out.size(); ++p) {
        double m = 1;
        for (int v : ix.tuples[p]) m *= y[v];
        out[p] = m;
    }
    return out;
}

SymTensor metric_power(int dim, int a) {
    SymTensor out = SymTensor::scalar(dim, 1.0);
    SymTensor q = SymTensor::metric(dim);
    for (int j = 0; j < a; ++j) out = sym_product(out, q);
    return out;
}

SymTensor transform(const SymTensor& t, const std::vector<double>& g) {
    const int n = t.dim(), r = t.rank();
    if (static_cast<int>(g.size()) != n * n) throw std::invalid_argument("matrix size mismatch in transform");
    const SymIndex& ix = t.index();
    const long total = ipow(n, r);
    std::vector<double> full(static_cast<size_t>(total)), next(static_cast<size_t>(total));
    for (long c = 0; c < total; ++c) full[static_cast<size_t>(c)] = t[static_cast<size_t>(ix.pos_of_code[static_cast<size_t>(c)])];
    long stride = 1;
    for (int mode = 0; mode < r; ++mode, stride *= n) {
        for (long c = 0; c < total; ++c) {
            int j = static_cast<int>((c / stride) % n);
            long base = c - j * stride;
            double acc = 0;
            for (int jp = 0; jp < n; ++jp) acc += g[static_cast<size_t>(j * n + jp)] * full[static_cast<size_t>(base + jp * stride)];
            next[static_cast<size_t>(c)] = acc;
        }
        full.swap(next);
    }
    SymTensor out(n, r);
    for (size_t p = 0; p < out.size(); ++p) out[p] = full[static_cast<size_t>(code_of(ix.tuples[p].data(), r, n))];
    return out;
}

BiTensor::BiTensor(int dim, int r1, int r2) : dim_(dim), r1_(r1), r2_(r2) {
    rows_ = sym_index(dim, r1).tuples.size();
    cols_ = sym_index(dim, r2).tuples.size();
    data_.assign(rows_ * cols_, 0.0);
}

BiTensor BiTensor::outer(const SymTensor& a, const SymTensor& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch in outer product");
    BiTensor out(a.dim(), a.rank(), b.rank());
    for (size_t i = 0; i < out.rows_; ++i)
        for (size_t j = 0; j < out.cols_; ++j) out(i, j) = a[i] * b[j];
    return out;
}

BiTensor BiTensor::split(const SymTensor& t, int r1, const std::vector<double>* g) {
    const int n = t.dim(), r2 = t.rank() - r1;
    if (r2 < 0) throw std::invalid_argument("split rank exceeds tensor rank");
    BiTensor out(n, r1, r2);
    const SymIndex& i1 = sym_index(n, r1);
    const SymIndex& i2 = sym_index(n, r2);
    const SymIndex& it = t.index();
    std::vector<int> merged(t.rank());
    for (size_t i = 0; i < out.rows_; ++i) {
        SymTensor slice(n, r2);
        std::copy(i1.tuples[i].begin(), i1.tuples[i].end(), merged.begin());
        for (size_t j = 0; j < out.cols_; ++j) {
            std::copy(i2.tuples[j].begin(), i2.tuples[j].end(), merged.begin() + r1);
            slice[j] = t[it.position(merged.data())];
        }
        if (g) slice = transform(slice, *g);
        for (size_t j = 0; j < out.cols_; ++j) out(i, j) = slice[j];
    }
    return out;
}

double BiTensor::max_abs() const {
    double m = 0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

BiTensor& BiTensor::operator+=(const BiTensor& o) {
    if (dim_ != o.dim_ || r1_ != o.r1_ || r2_ != o.r2_) throw std::invalid_argument("shape mismatch in bitensor sum");
    for (size_t p = 0; p < data_.size(); ++p) data_[p] += o.data_[p];
    return *this;
}

BiTensor& BiTensor::operator*=(double c) {
    for (double& v : data_) v *= c;
    return *this;
}

nlohmann::json BiTensor::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    const SymIndex& i1 = sym_index(dim_, r1_);
    const SymIndex& i2 = sym_index(dim_, r2_);
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            entries.push_back({{"left", i1.tuples[i]}, {"right", i2.tuples[j]}, {"val", (*this)(i, j)}});
    return {{"dim", dim_}, {"rank1", r1_}, {"rank2", r2_}, {"entries", entries}};
}

}  // namespace tensorval

#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>
#include <vector>

#include "exyang/poly.hpp"
#include "exyang/rat.hpp"

namespace exyang {

template <class F>
bool fz(const F& x) { return x.is_zero(); }

// ---------------------------------------------------------------------------
// Sparse vectors: sorted (index, value) pairs, no stored zeros.
// ---------------------------------------------------------------------------

template <class F>
using SparseVec = std::vector<std::pair<long, F>>;

template <class F>
void svec_normalize(SparseVec<F>& v) {
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t w = 0;
  for (size_t i = 0; i < v.size();) {
    long idx = v[i].first;
    F acc = v[i].second;
    size_t j = i + 1;
    while (j < v.size() && v[j].first == idx) acc += v[j++].second;
    if (!fz(acc)) v[w++] = {idx, std::move(acc)};
    i = j;
  }
  v.resize(w);
}

template <class F>
SparseVec<F> svec_add(const SparseVec<F>& a, const SparseVec<F>& b) {
  SparseVec<F> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) out.push_back(a[i++]);
    else if (i >= a.size() || b[j].first < a[i].first) out.push_back(b[j++]);
    else {
      F s = a[i].second + b[j].second;
      if (!fz(s)) out.emplace_back(a[i].first, std::move(s));
      ++i, ++j;
    }
  }
  return out;
}

template <class F>
SparseVec<F> svec_scale(const SparseVec<F>& a, const F& s) {
  SparseVec<F> out;
  if (fz(s)) return out;
  out.reserve(a.size());
  for (const auto& [i, x] : a) {
    F y = x * s;
    if (!fz(y)) out.emplace_back(i, std::move(y));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sparse matrix, column major: col(j) holds M e_j. This is the storage used
// for operators on tensor power spaces; they are applied, never eliminated.
// ---------------------------------------------------------------------------

template <class F>
class SpMat {
public:
  SpMat() : rows_(0) {}
  SpMat(long rows, long cols) : rows_(rows), cols_(cols) {}

  static SpMat identity(long n) {
    SpMat m(n, n);
    for (long j = 0; j < n; ++j) m.cols_[j].emplace_back(j, F(1));
    return m;
  }

  long rows() const { return rows_; }
  long cols() const { return static_cast<long>(cols_.size()); }
  SparseVec<F>& col(long j) { return cols_[j]; }
  const SparseVec<F>& col(long j) const { return cols_[j]; }

  void set(long i, long j, const F& v) {
    auto& c = cols_[j];
    auto it = std::lower_bound(c.begin(), c.end(), i,
                               [](const auto& p, long k) { return p.first < k; });
    if (it != c.end() && it->first == i) {
      if (fz(v)) c.erase(it);
      else it->second = v;
    } else if (!fz(v)) {
      c.insert(it, {i, v});
    }
  }

  F at(long i, long j) const {
    const auto& c = cols_[j];
    auto it = std::lower_bound(c.begin(), c.end(), i,
                               [](const auto& p, long k) { return p.first < k; });
    return (it != c.end() && it->first == i) ? it->second : F(0);
  }

  long nnz() const {
    long s = 0;
    for (const auto& c : cols_) s += static_cast<long>(c.size());
    return s;
  }

  bool is_zero() const {
    for (const auto& c : cols_)
      if (!c.empty()) return false;
    return true;
  }

  SparseVec<F> apply(const SparseVec<F>& v) const {
    SparseVec<F> out;
    for (const auto& [j, x] : v)
      for (const auto& [i, m] : cols_[j]) {
        F y = m * x;
        if (!fz(y)) out.emplace_back(i, std::move(y));
      }
    svec_normalize(out);
    return out;
  }

  friend SpMat operator*(const SpMat& a, const SpMat& b) {
    assert(a.cols() == b.rows());
    SpMat out(a.rows(), b.cols());
    for (long j = 0; j < b.cols(); ++j) out.cols_[j] = a.apply(b.col(j));
    return out;
  }
  friend SpMat operator+(const SpMat& a, const SpMat& b) {
    assert(a.rows() == b.rows() && a.cols() == b.cols());
    SpMat out(a.rows(), a.cols());
    for (long j = 0; j < a.cols(); ++j) out.cols_[j] = svec_add(a.col(j), b.col(j));
    return out;
  }
  friend SpMat operator-(const SpMat& a, const SpMat& b) { return a + (F(-1) * b); }
  friend SpMat operator*(const F& s, const SpMat& a) {
    SpMat out(a.rows(), a.cols());
    for (long j = 0; j < a.cols(); ++j) out.cols_[j] = svec_scale(a.col(j), s);
    return out;
  }

  // Entrywise equality; canonical column storage makes this exact.
  friend bool operator==(const SpMat& a, const SpMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_;
  }
  friend bool operator!=(const SpMat& a, const SpMat& b) { return !(a == b); }

  SpMat transpose() const {
    SpMat out(cols(), rows_);
    for (long j = 0; j < cols(); ++j)
      for (const auto& [i, x] : cols_[j]) out.cols_[i].emplace_back(j, x);
    for (auto& c : out.cols_) svec_normalize(c);
    return out;
  }

  F trace() const {
    F s(0);
    for (long j = 0; j < std::min(rows_, cols()); ++j) s += at(j, j);
    return s;
  }

private:
  long rows_;
  std::vector<SparseVec<F>> cols_;
};

// ---------------------------------------------------------------------------
// Dense matrix over a field, used for all elimination work. Every elimination
// target in this project is small (wedge spaces, module spaces, commutants).
// ---------------------------------------------------------------------------

template <class F>
class DenseMat {
public:
  DenseMat() : r_(0), c_(0) {}
  DenseMat(long r, long c) : r_(r), c_(c), d_(r * c, F(0)) {}

  static DenseMat identity(long n) {
    DenseMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = F(1);
    return m;
  }

  long rows() const { return r_; }
  long cols() const { return c_; }
  F& at(long i, long j) { return d_[i * c_ + j]; }
  const F& at(long i, long j) const { return d_[i * c_ + j]; }

  friend DenseMat operator*(const DenseMat& a, const DenseMat& b) {
    assert(a.c_ == b.r_);
    DenseMat out(a.r_, b.c_);
    for (long i = 0; i < a.r_; ++i)
      for (long k = 0; k < a.c_; ++k) {
        const F& aik = a.at(i, k);
        if (fz(aik)) continue;
        for (long j = 0; j < b.c_; ++j) {
          const F& bkj = b.at(k, j);
          if (!fz(bkj)) out.at(i, j) += aik * bkj;
        }
      }
    return out;
  }
  friend DenseMat operator+(const DenseMat& a, const DenseMat& b) {
    assert(a.r_ == b.r_ && a.c_ == b.c_);
    DenseMat out(a.r_, a.c_);
    for (size_t i = 0; i < a.d_.size(); ++i) out.d_[i] = a.d_[i] + b.d_[i];
    return out;
  }
  friend DenseMat operator-(const DenseMat& a, const DenseMat& b) {
    assert(a.r_ == b.r_ && a.c_ == b.c_);
    DenseMat out(a.r_, a.c_);
    for (size_t i = 0; i < a.d_.size(); ++i) out.d_[i] = a.d_[i] - b.d_[i];
    return out;
  }
  friend DenseMat operator*(const F& s, const DenseMat& a) {
    DenseMat out(a.r_, a.c_);
    for (size_t i = 0; i < a.d_.size(); ++i) out.d_[i] = s * a.d_[i];
    return out;
  }
  friend bool operator==(const DenseMat& a, const DenseMat& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.d_ == b.d_;
  }
  friend bool operator!=(const DenseMat& a, const DenseMat& b) { return !(a == b); }

  bool is_zero() const {
    for (const auto& x : d_)
      if (!fz(x)) return false;
    return true;
  }

  DenseMat transpose() const {
    DenseMat out(c_, r_);
    for (long i = 0; i < r_; ++i)
      for (long j = 0; j < c_; ++j) out.at(j, i) = at(i, j);
    return out;
  }

  F trace() const {
    F s(0);
    for (long i = 0; i < std::min(r_, c_); ++i) s += at(i, i);
    return s;
  }

  std::vector<F> apply(const std::vector<F>& v) const {
    assert((long)v.size() == c_);
    std::vector<F> out(r_, F(0));
    for (long i = 0; i < r_; ++i)
      for (long j = 0; j < c_; ++j)
        if (!fz(at(i, j)) && !fz(v[j])) out[i] += at(i, j) * v[j];
    return out;
  }

private:
  long r_, c_;
  std::vector<F> d_;
};

template <class F>
bool sp_entries_equal(const SpMat<F>& a, const SpMat<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (long j = 0; j < a.cols(); ++j)
    if (a.col(j) != b.col(j)) return false;
  return true;
}

template <class F>
DenseMat<F> to_dense(const SpMat<F>& m) {
  DenseMat<F> out(m.rows(), m.cols());
  for (long j = 0; j < m.cols(); ++j)
    for (const auto& [i, x] : m.col(j)) out.at(i, j) = x;
  return out;
}

template <class F>
SpMat<F> to_sparse(const DenseMat<F>& m) {
  SpMat<F> out(m.rows(), m.cols());
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i)
      if (!fz(m.at(i, j))) out.col(j).emplace_back(i, m.at(i, j));
  return out;
}

// Reduced row echelon form in place; returns the pivot column list.
template <class F>
std::vector<long> rref(DenseMat<F>& m) {
  std::vector<long> pivots;
  long r = 0;
  for (long j = 0; j < m.cols() && r < m.rows(); ++j) {
    long p = -1;
    for (long i = r; i < m.rows(); ++i)
      if (!fz(m.at(i, j))) { p = i; break; }
    if (p < 0) continue;
    if (p != r)
      for (long k = 0; k < m.cols(); ++k) std::swap(m.at(p, k), m.at(r, k));
    F inv = F(1) / m.at(r, j);
    for (long k = j; k < m.cols(); ++k) m.at(r, k) = m.at(r, k) * inv;
    for (long i = 0; i < m.rows(); ++i) {
      if (i == r || fz(m.at(i, j))) continue;
      F f = m.at(i, j);
      for (long k = j; k < m.cols(); ++k) m.at(i, k) = m.at(i, k) - f * m.at(r, k);
    }
    pivots.push_back(j);
    ++r;
  }
  return pivots;
}

// Fraction-free Bareiss elimination on an integer copy; the rank routine over
// Rat, keeping intermediate entries integral to control coefficient growth.
inline long bareiss_rank(const DenseMat<Rat>& in) {
  long r = in.rows(), c = in.cols();
  std::vector<std::vector<mpz_class>> m(r, std::vector<mpz_class>(c));
  for (long i = 0; i < r; ++i) {
    mpz_class l = 1;
    for (long j = 0; j < c; ++j) l = lcm(l, in.at(i, j).den());
    for (long j = 0; j < c; ++j) m[i][j] = in.at(i, j).num() * (l / in.at(i, j).den());
  }
  mpz_class prev = 1;
  long rank = 0;
  for (long j = 0; j < c && rank < r; ++j) {
    long p = -1;
    for (long i = rank; i < r; ++i)
      if (m[i][j] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(m[p], m[rank]);
    for (long i = rank + 1; i < r; ++i) {
      for (long k = j + 1; k < c; ++k)
        m[i][k] = (m[rank][j] * m[i][k] - m[i][j] * m[rank][k]) / prev;
      m[i][j] = 0;
    }
    prev = m[rank][j];
    ++rank;
  }
  return rank;
}

template <class F>
long rank_of(const DenseMat<F>& m) {
  DenseMat<F> w = m;
  return static_cast<long>(rref(w).size());
}

inline long rank_of(const DenseMat<Rat>& m) { return bareiss_rank(m); }

template <class F>
long rank_of(const SpMat<F>& m) { return rank_of(to_dense(m)); }

// Exact basis of the null space; size = cols - rank.
template <class F>
std::vector<std::vector<F>> kernel_basis(const DenseMat<F>& m) {
  DenseMat<F> w = m;
  std::vector<long> piv = rref(w);
  std::vector<bool> is_piv(m.cols(), false);
  for (long j : piv) is_piv[j] = true;
  std::vector<std::vector<F>> basis;
  for (long j = 0; j < m.cols(); ++j) {
    if (is_piv[j]) continue;
    std::vector<F> v(m.cols(), F(0));
    v[j] = F(1);
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = F(0) - w.at(r, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Exact basis of the column space: the pivot columns of the original matrix,
// so every returned vector is reachable as M x by construction.
template <class F>
std::vector<std::vector<F>> image_basis(const DenseMat<F>& m) {
  DenseMat<F> w = m;
  std::vector<long> piv = rref(w);
  std::vector<std::vector<F>> basis;
  for (long j : piv) {
    std::vector<F> v(m.rows(), F(0));
    for (long i = 0; i < m.rows(); ++i) v[i] = m.at(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Some x with M x = b, or nothing when the system is inconsistent.
template <class F>
std::optional<std::vector<F>> solve(const DenseMat<F>& m, const std::vector<F>& b) {
  assert((long)b.size() == m.rows());
  DenseMat<F> aug(m.rows(), m.cols() + 1);
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  std::vector<long> piv = rref(aug);
  if (!piv.empty() && piv.back() == m.cols()) return std::nullopt;
  std::vector<F> x(m.cols(), F(0));
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(r, m.cols());
  return x;
}

template <class F>
std::vector<std::vector<F>> kernel_basis(const SpMat<F>& m) { return kernel_basis(to_dense(m)); }
template <class F>
std::vector<std::vector<F>> image_basis(const SpMat<F>& m) { return image_basis(to_dense(m)); }
template <class F>
std::optional<std::vector<F>> solve(const SpMat<F>& m, const std::vector<F>& b) {
  return solve(to_dense(m), b);
}

}  // namespace exyang

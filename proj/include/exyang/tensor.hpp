#pragma once

#include <array>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "exyang/linalg.hpp"

namespace exyang {

// ---------------------------------------------------------------------------
// Bilinear form convention: <e_i, e_j> = theta_i when j = n-i+1, else 0, with
// theta_i = -1 iff the form is alternating and i > n/2. The conjugate of a
// matrix unit is then E~_ij = theta_i theta_j E_{n-j+1, n-i+1}.
// ---------------------------------------------------------------------------

enum class FormKind { symmetric, alternating };

struct FormChoice {
  int n = 0;
  FormKind kind = FormKind::symmetric;

  FormChoice() = default;
  FormChoice(int n_, FormKind k) : n(n_), kind(k) {
    if (kind == FormKind::alternating && n % 2 != 0)
      throw std::invalid_argument("FormChoice: alternating form needs even n");
  }
  static FormChoice so(int n) { return FormChoice(n, FormKind::symmetric); }
  static FormChoice sp(int n) { return FormChoice(n, FormKind::alternating); }

  int theta(int i) const { return (kind == FormKind::alternating && i > n / 2) ? -1 : 1; }
  int bar(int i) const { return n - i + 1; }
  bool is_sp() const { return kind == FormKind::alternating; }

  // Gram matrix G_ij = <e_i, e_j> and the conjugation X~ = G^{-1} X^T G.
  DenseMat<Rat> gram() const {
    DenseMat<Rat> g(n, n);
    for (int i = 1; i <= n; ++i) g.at(i - 1, bar(i) - 1) = Rat(theta(i));
    return g;
  }
  DenseMat<Rat> conjugate(const DenseMat<Rat>& x) const {
    DenseMat<Rat> g = gram();
    DenseMat<Rat> ginv = is_sp() ? Rat(-1) * g : g;
    return ginv * x.transpose() * g;
  }
};

// ---------------------------------------------------------------------------
// (C^n)^{⊗N} with basis indexed by tuples (i_1..i_N), i_k in 1..n; slot 1 is
// the most significant digit of the basis index.
// ---------------------------------------------------------------------------

struct TensorSpace {
  int n = 0, N = 0;
  std::vector<long> stride;  // stride[k-1] = n^(N-k)

  TensorSpace() = default;
  TensorSpace(int n_, int N_) : n(n_), N(N_), stride(N_) {
    long s = 1;
    for (int k = N; k >= 1; --k) {
      stride[k - 1] = s;
      s *= n;
    }
  }
  long dim() const {
    long d = 1;
    for (int k = 0; k < N; ++k) d *= n;
    return d;
  }
  int digit(long idx, int slot) const { return static_cast<int>((idx / stride[slot - 1]) % n) + 1; }
  long with_digit(long idx, int slot, int v) const {
    return idx + (long)(v - digit(idx, slot)) * stride[slot - 1];
  }
  long encode(const std::vector<int>& tuple) const {
    long idx = 0;
    for (int k = 1; k <= N; ++k) idx += (long)(tuple[k - 1] - 1) * stride[k - 1];
    return idx;
  }
  std::vector<int> decode(long idx) const {
    std::vector<int> t(N);
    for (int k = 1; k <= N; ++k) t[k - 1] = digit(idx, k);
    return t;
  }
};

// ---------------------------------------------------------------------------
// The four elementary two-slot operators. On a pair of slots (p, q):
//   P      e_a⊗e_b -> e_b⊗e_a
//   Pbar   e_a⊗e_b -> delta_ab * sum_i e_i⊗e_i
//   Ptilde e_a⊗e_b -> delta_{a,bar(b)} * theta_b * sum_j theta_j e_{bar(j)}⊗e_j
//   Phat   e_a⊗e_b -> theta_{bar(a)} theta_b * e_{bar(b)}⊗e_{bar(a)}
// ---------------------------------------------------------------------------

enum class Slot2Kind { P, Pbar, Ptilde, Phat };

inline bool slot2_needs_form(Slot2Kind k) {
  return k == Slot2Kind::Ptilde || k == Slot2Kind::Phat;
}

// Appends the image of K_pq applied to coeff * e_idx onto out.
template <class F>
void slot2_images(const TensorSpace& sp, const FormChoice* form, Slot2Kind kind, int p, int q,
                  long idx, const F& coeff, SparseVec<F>& out) {
  int a = sp.digit(idx, p), b = sp.digit(idx, q);
  switch (kind) {
    case Slot2Kind::P: {
      long j = sp.with_digit(sp.with_digit(idx, p, b), q, a);
      out.emplace_back(j, coeff);
      return;
    }
    case Slot2Kind::Pbar: {
      if (a != b) return;
      for (int i = 1; i <= sp.n; ++i)
        out.emplace_back(sp.with_digit(sp.with_digit(idx, p, i), q, i), coeff);
      return;
    }
    case Slot2Kind::Ptilde: {
      if (a != form->bar(b)) return;
      F base = coeff * F(form->theta(b));
      for (int j = 1; j <= sp.n; ++j) {
        F v = base * F(form->theta(j));
        out.emplace_back(sp.with_digit(sp.with_digit(idx, p, form->bar(j)), q, j), std::move(v));
      }
      return;
    }
    case Slot2Kind::Phat: {
      int sgn = form->theta(form->bar(a)) * form->theta(b);
      long j = sp.with_digit(sp.with_digit(idx, p, form->bar(b)), q, form->bar(a));
      out.emplace_back(j, coeff * F(sgn));
      return;
    }
  }
}

template <class F>
SparseVec<F> apply_slot2(const TensorSpace& sp, const FormChoice* form, Slot2Kind kind, int p,
                         int q, const SparseVec<F>& v) {
  SparseVec<F> out;
  out.reserve(v.size() * 2);
  for (const auto& [idx, c] : v) slot2_images(sp, form, kind, p, q, idx, c, out);
  svec_normalize(out);
  return out;
}

// One factor of an ordered product: a*Id + b*K_pq.
template <class F>
struct LinFactor {
  Slot2Kind kind = Slot2Kind::P;
  int p = 1, q = 2;
  F a = F(1), b = F(0);
};

template <class F>
SparseVec<F> apply_linfactor(const TensorSpace& sp, const FormChoice* form, const LinFactor<F>& f,
                             const SparseVec<F>& v) {
  SparseVec<F> out;
  out.reserve(v.size() * 2);
  for (const auto& [idx, c] : v) {
    if (!fz(f.a)) {
      F w = c * f.a;
      if (!fz(w)) out.emplace_back(idx, std::move(w));
    }
    if (!fz(f.b)) {
      F w = c * f.b;
      if (!fz(w)) slot2_images(sp, form, f.kind, f.p, f.q, idx, w, out);
    }
  }
  svec_normalize(out);
  return out;
}

// Ordered product applied to a vector; factors are listed left to right, so
// the last listed factor acts first.
template <class F>
SparseVec<F> apply_ordered_product(const TensorSpace& sp, const FormChoice* form,
                                   const std::vector<LinFactor<F>>& factors, SparseVec<F> v) {
  for (auto it = factors.rbegin(); it != factors.rend(); ++it)
    v = apply_linfactor(sp, form, *it, v);
  return v;
}

template <class F>
SpMat<F> product_to_matrix(const TensorSpace& sp, const FormChoice* form,
                           const std::vector<LinFactor<F>>& factors) {
  long d = sp.dim();
  SpMat<F> m(d, d);
  for (long j = 0; j < d; ++j)
    m.col(j) = apply_ordered_product(sp, form, factors, SparseVec<F>{{j, F(1)}});
  return m;
}

template <class F>
SpMat<F> slot2_matrix(const TensorSpace& sp, const FormChoice* form, Slot2Kind kind, int p, int q) {
  long d = sp.dim();
  SpMat<F> m(d, d);
  for (long j = 0; j < d; ++j) m.col(j) = apply_slot2(sp, form, kind, p, q, SparseVec<F>{{j, F(1)}});
  return m;
}

inline void check_slots(const TensorSpace& sp, int p, int q) {
  if (!(1 <= p && p < q && q <= sp.N)) throw std::out_of_range("tensor: slot index out of range");
}

inline SpMat<Rat> op_P(const TensorSpace& sp, int p, int q) {
  check_slots(sp, p, q);
  return slot2_matrix<Rat>(sp, nullptr, Slot2Kind::P, p, q);
}
inline SpMat<Rat> op_Pbar(const TensorSpace& sp, int p, int q) {
  check_slots(sp, p, q);
  return slot2_matrix<Rat>(sp, nullptr, Slot2Kind::Pbar, p, q);
}
inline SpMat<Rat> op_Ptilde(const TensorSpace& sp, int p, int q, const FormChoice& form) {
  check_slots(sp, p, q);
  return slot2_matrix<Rat>(sp, &form, Slot2Kind::Ptilde, p, q);
}
inline SpMat<Rat> op_Phat(const TensorSpace& sp, int p, int q, const FormChoice& form) {
  check_slots(sp, p, q);
  return slot2_matrix<Rat>(sp, &form, Slot2Kind::Phat, p, q);
}

// ---------------------------------------------------------------------------
// Slot permutations. mapping[k-1] = source slot whose content lands in slot k.
// ---------------------------------------------------------------------------

template <class F>
SpMat<F> perm_matrix(const TensorSpace& sp, const std::vector<int>& mapping) {
  long d = sp.dim();
  SpMat<F> m(d, d);
  for (long j = 0; j < d; ++j) {
    long w = 0;
    for (int k = 1; k <= sp.N; ++k)
      w += (long)(sp.digit(j, mapping[k - 1]) - 1) * sp.stride[k - 1];
    m.col(j).emplace_back(w, F(1));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Consecutive segments of 1..N with lengths nu_1..nu_m.
// ---------------------------------------------------------------------------

struct SegmentShape {
  std::vector<int> nu;

  SegmentShape() = default;
  explicit SegmentShape(std::vector<int> nu_) : nu(std::move(nu_)) {
    for (int v : nu)
      if (v < 1) throw std::invalid_argument("SegmentShape: segment lengths must be positive");
  }
  int m() const { return static_cast<int>(nu.size()); }
  int N() const { return std::accumulate(nu.begin(), nu.end(), 0); }
  int seg_start(int a) const {  // first position of segment a, 1-based
    int s = 1;
    for (int i = 1; i < a; ++i) s += nu[i - 1];
    return s;
  }
  int seg_of(int p) const {
    int a = 1, s = 0;
    while (p > s + nu[a - 1]) s += nu[a++ - 1];
    return a;
  }
  int pos_in_seg(int p) const { return p - seg_start(seg_of(p)) + 1; }
  SegmentShape reversed() const {
    std::vector<int> r(nu.rbegin(), nu.rend());
    return SegmentShape(std::move(r));
  }

  // 1'..N': segment blocks in reverse order, order inside blocks kept.
  std::vector<int> primed() const {
    std::vector<int> out;
    out.reserve(N());
    for (int a = m(); a >= 1; --a) {
      int s = seg_start(a);
      for (int i = 0; i < nu[a - 1]; ++i) out.push_back(s + i);
    }
    return out;
  }
  // 1''..N'': order inside each block reversed, blocks in place.
  std::vector<int> doubleprimed() const {
    std::vector<int> out;
    out.reserve(N());
    for (int a = 1; a <= m(); ++a) {
      int s = seg_start(a);
      for (int i = nu[a - 1] - 1; i >= 0; --i) out.push_back(s + i);
    }
    return out;
  }
};

// P_nu reverses the order of the tensor factors by segment blocks.
template <class F = Rat>
SpMat<F> segment_perm_Pnu(const TensorSpace& sp, const SegmentShape& shape) {
  return perm_matrix<F>(sp, shape.primed());
}
// Q_nu exchanges the factors labelled p and p''.
template <class F = Rat>
SpMat<F> segment_perm_Qnu(const TensorSpace& sp, const SegmentShape& shape) {
  return perm_matrix<F>(sp, shape.doubleprimed());
}

// ---------------------------------------------------------------------------
// Antisymmetrizers. The direct one is (1/k!) sum_sigma sgn(sigma) sigma; the
// fusion form is the ordered product of R_ij(j-i) over lexicographic (i,j),
// which must equal k! times the direct one.
// ---------------------------------------------------------------------------

inline SpMat<Rat> antisymmetrizer_direct(int n, int k) {
  TensorSpace sp(n, k);
  long d = sp.dim();
  SpMat<Rat> acc(d, d);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  Rat scale(1, factorial(k));
  do {
    int inv = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inv;
    Rat c = (inv % 2 == 0) ? scale : -scale;
    acc = acc + c * perm_matrix<Rat>(sp, perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

inline SpMat<Rat> antisymmetrizer_fusion(int n, int k) {
  if (k < 2) throw std::invalid_argument("antisymmetrizer_fusion: k >= 2");
  TensorSpace sp(n, k);
  std::vector<LinFactor<Rat>> factors;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      factors.push_back({Slot2Kind::P, i, j, Rat(1), Rat(-1, j - i)});
  return product_to_matrix(sp, nullptr, factors);
}

// ---------------------------------------------------------------------------
// Wedge bases. Basis of Lambda^k(C^n): strictly increasing k-tuples in lex
// order. The embedded vector of a tuple is sum_sigma sgn(sigma) e_{i_sigma},
// unnormalized so that all entries stay integral.
// ---------------------------------------------------------------------------

struct WedgeBasis {
  int n = 0, k = 0;
  std::vector<std::vector<int>> tuples;
  std::map<std::vector<int>, long> index;

  WedgeBasis() = default;
  WedgeBasis(int n_, int k_) : n(n_), k(k_) {
    if (k > n) return;  // empty basis, dim 0
    std::vector<int> t(k);
    std::iota(t.begin(), t.end(), 1);
    while (true) {
      index[t] = static_cast<long>(tuples.size());
      tuples.push_back(t);
      int i = k - 1;
      while (i >= 0 && t[i] == n - (k - 1 - i)) --i;
      if (i < 0) break;
      ++t[i];
      for (int j = i + 1; j < k; ++j) t[j] = t[j - 1] + 1;
    }
  }
  long dim() const { return static_cast<long>(tuples.size()); }
};

// Product of wedge factors Lambda^{nu_1} ⊗ ... ⊗ Lambda^{nu_m} inside
// (C^n)^{⊗N}, with the mixed basis indexed segment-major.
struct WedgeProduct {
  int n = 0;
  SegmentShape shape;
  std::vector<WedgeBasis> seg;
  TensorSpace space;

  WedgeProduct() = default;
  WedgeProduct(int n_, SegmentShape shape_) : n(n_), shape(std::move(shape_)) {
    for (int v : shape.nu)
      if (v > n) throw std::invalid_argument("WedgeProduct: segment length exceeds n");
    for (int a = 1; a <= shape.m(); ++a) seg.emplace_back(n, shape.nu[a - 1]);
    space = TensorSpace(n, shape.N());
  }
  long dim() const {
    long d = 1;
    for (const auto& b : seg) d *= b.dim();
    return d;
  }
  std::vector<long> decode(long w) const {
    std::vector<long> part(seg.size());
    for (int a = static_cast<int>(seg.size()); a >= 1; --a) {
      part[a - 1] = w % seg[a - 1].dim();
      w /= seg[a - 1].dim();
    }
    return part;
  }
  long encode(const std::vector<long>& part) const {
    long w = 0;
    for (size_t a = 0; a < seg.size(); ++a) w = w * seg[a].dim() + part[a];
    return w;
  }
  // the tensor index of the concatenated (increasing) representative
  long representative(long w) const {
    std::vector<long> part = decode(w);
    std::vector<int> tuple;
    for (size_t a = 0; a < seg.size(); ++a) {
      const auto& t = seg[a].tuples[part[a]];
      tuple.insert(tuple.end(), t.begin(), t.end());
    }
    return space.encode(tuple);
  }
};

namespace detail {
inline void embed_column(const WedgeProduct& wp, long w, SparseVec<Rat>& out) {
  std::vector<long> part = wp.decode(w);
  // iterate over one permutation per segment, tracking the product of signs
  struct SegPerm {
    std::vector<int> perm;
    int sign;
  };
  std::vector<std::vector<SegPerm>> all(wp.seg.size());
  for (size_t a = 0; a < wp.seg.size(); ++a) {
    const auto& tuple = wp.seg[a].tuples[part[a]];
    std::vector<int> p(tuple.size());
    std::iota(p.begin(), p.end(), 0);
    do {
      int inv = 0;
      for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
          if (p[i] > p[j]) ++inv;
      std::vector<int> arranged(p.size());
      for (size_t i = 0; i < p.size(); ++i) arranged[i] = tuple[p[i]];
      all[a].push_back({arranged, inv % 2 == 0 ? 1 : -1});
    } while (std::next_permutation(p.begin(), p.end()));
  }
  std::vector<size_t> pick(wp.seg.size(), 0);
  while (true) {
    std::vector<int> tuple;
    int sign = 1;
    for (size_t a = 0; a < wp.seg.size(); ++a) {
      tuple.insert(tuple.end(), all[a][pick[a]].perm.begin(), all[a][pick[a]].perm.end());
      sign *= all[a][pick[a]].sign;
    }
    out.emplace_back(wp.space.encode(tuple), Rat(sign));
    size_t a = 0;
    while (a < pick.size() && ++pick[a] == all[a].size()) pick[a++] = 0;
    if (a == pick.size()) break;
  }
  svec_normalize(out);
}
}  // namespace detail

// Embedding of the wedge product into the tensor power (integer entries).
inline SpMat<Rat> wedge_embed(const WedgeProduct& wp) {
  SpMat<Rat> m(wp.space.dim(), wp.dim());
  for (long w = 0; w < wp.dim(); ++w) detail::embed_column(wp, w, m.col(w));
  return m;
}

// Left inverse of the embedding: reads off the coefficient at the increasing
// representative of each wedge basis element. project * embed = identity.
inline SpMat<Rat> wedge_project(const WedgeProduct& wp) {
  SpMat<Rat> m(wp.dim(), wp.space.dim());
  for (long w = 0; w < wp.dim(); ++w) m.col(wp.representative(w)).emplace_back(w, Rat(1));
  return m;
}

// phi_{nu_1} ⊗ ... ⊗ phi_{nu_m} with phi_k = e_1 ∧ ... ∧ e_k embedded via the
// normalized antisymmetrizers, as a vector in the tensor power.
inline SparseVec<Rat> phi_vector(const WedgeProduct& wp) {
  std::vector<long> part(wp.seg.size(), 0);
  for (size_t a = 0; a < wp.seg.size(); ++a) {
    std::vector<int> first(wp.shape.nu[a]);
    std::iota(first.begin(), first.end(), 1);
    part[a] = wp.seg[a].index.at(first);
  }
  long w = wp.encode(part);
  SparseVec<Rat> col;
  detail::embed_column(wp, w, col);
  Rat scale(1);
  for (int v : wp.shape.nu) scale /= Rat(factorial(v));
  return svec_scale(col, scale);
}

// Coordinates of the same vector in the wedge basis.
inline SparseVec<Rat> phi_wedge_coords(const WedgeProduct& wp) {
  std::vector<long> part(wp.seg.size(), 0);
  for (size_t a = 0; a < wp.seg.size(); ++a) {
    std::vector<int> first(wp.shape.nu[a]);
    std::iota(first.begin(), first.end(), 1);
    part[a] = wp.seg[a].index.at(first);
  }
  Rat scale(1);
  for (int v : wp.shape.nu) scale /= Rat(factorial(v));
  return SparseVec<Rat>{{wp.encode(part), scale}};
}

template <class F>
SpMat<F> convert_mat(const SpMat<Rat>& m) {
  SpMat<F> out(m.rows(), m.cols());
  for (long j = 0; j < m.cols(); ++j)
    for (const auto& [i, x] : m.col(j)) out.col(j).emplace_back(i, F(x));
  return out;
}

template <class F>
SparseVec<F> convert_vec(const SparseVec<Rat>& v) {
  SparseVec<F> out;
  out.reserve(v.size());
  for (const auto& [i, x] : v) out.emplace_back(i, F(x));
  return out;
}

}  // namespace exyang

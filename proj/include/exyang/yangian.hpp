#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exyang/fusion.hpp"
#include "exyang/quadext.hpp"

namespace exyang {

// ---------------------------------------------------------------------------
// Fundamental modules. Phi^k_t acts on Lambda^k(C^n) by
//   T_ij(x) -> delta_ij + x_i d_j / (x - t),
// Phi^{-k}_t is the pullback through T(x) -> T~(-x),
//   T_ij(x) -> delta_ij - theta_i theta_j x_{bar j} d_{bar i} / (x + t),
// and the twist flag multiplies everything by f(x) = (x-t)/(x-t+1).
// ---------------------------------------------------------------------------

struct FundamentalFactor {
  int degree = 1;
  int sign = +1;  // +1: Phi^k_t, -1: Phi^{-k}_t
  Rat spectral;
  bool twist = false;
};

struct ModuleSpec {
  int n = 0;
  std::vector<FundamentalFactor> factors;

  long dim() const {
    long d = 1;
    for (const auto& f : factors) d *= binomial(n, f.degree);
    return d;
  }
  ModuleSpec reversed() const {
    ModuleSpec s = *this;
    std::reverse(s.factors.begin(), s.factors.end());
    return s;
  }
};

// Tensor factor spec of a weight pair: degrees nu_a at spectral points
// mu_a + rho_a + 1/2, all with the given sign.
inline ModuleSpec spec_from_pair(const WeightPair& p, int sign = +1) {
  ModuleSpec s;
  s.n = p.n;
  std::vector<int> nu = p.nu_ints(p.n);
  for (int a = 1; a <= p.m; ++a)
    s.factors.push_back({nu[a - 1], sign, p.mu[a - 1] + p.rho(a) + Rat(1, 2), false});
  return s;
}

// Matrix of the wedge operator x_i d_j on the increasing-tuple basis.
inline DenseMat<Rat> wedge_xd(int n, int k, int i, int j) {
  WedgeBasis wb(n, k);
  DenseMat<Rat> out(wb.dim(), wb.dim());
  for (long c = 0; c < wb.dim(); ++c) {
    const auto& t = wb.tuples[c];
    auto pos = std::find(t.begin(), t.end(), j);
    if (pos == t.end()) continue;
    int s1 = static_cast<int>(pos - t.begin()) % 2 == 0 ? 1 : -1;
    std::vector<int> rest;
    for (int v : t)
      if (v != j) rest.push_back(v);
    if (std::find(rest.begin(), rest.end(), i) != rest.end()) continue;
    int before = 0;
    for (int v : rest)
      if (v < i) ++before;
    int s2 = before % 2 == 0 ? 1 : -1;
    rest.push_back(i);
    std::sort(rest.begin(), rest.end());
    out.at(wb.index.at(rest), c) = Rat(s1 * s2);
  }
  return out;
}

// T_ij(x) on one fundamental factor, as a matrix of rational functions of x.
inline DenseMat<RatFunc> action_on_factor(int n, const FundamentalFactor& f, int i, int j,
                                          const FormChoice* form) {
  long d = binomial(n, f.degree);
  DenseMat<RatFunc> out(d, d);
  RatFunc x = RatFunc::var();
  if (f.sign > 0) {
    RatFunc den = x - RatFunc(f.spectral);
    DenseMat<Rat> xd = wedge_xd(n, f.degree, i, j);
    for (long r = 0; r < d; ++r)
      for (long c = 0; c < d; ++c) {
        RatFunc e = RatFunc(xd.at(r, c)) / den;
        if (r == c && i == j) e += RatFunc(Rat(1));
        out.at(r, c) = e;
      }
  } else {
    if (form == nullptr) throw std::invalid_argument("action_on_factor: sign -1 needs a form");
    RatFunc den = x + RatFunc(f.spectral);
    DenseMat<Rat> xd = wedge_xd(n, f.degree, form->bar(j), form->bar(i));
    Rat th(form->theta(i) * form->theta(j));
    for (long r = 0; r < d; ++r)
      for (long c = 0; c < d; ++c) {
        RatFunc e = RatFunc(Rat(0)) - RatFunc(th * xd.at(r, c)) / den;
        if (r == c && i == j) e += RatFunc(Rat(1));
        out.at(r, c) = e;
      }
  }
  if (f.twist) {
    RatFunc tw = (x - RatFunc(f.spectral)) / (x - RatFunc(f.spectral) + RatFunc(Rat(1)));
    for (long r = 0; r < d; ++r)
      for (long c = 0; c < d; ++c) out.at(r, c) *= tw;
  }
  return out;
}

// n x n table of module matrices; index (i-1)*n + (j-1).
using ActionTable = std::vector<DenseMat<RatFunc>>;

inline DenseMat<RatFunc> kron(const DenseMat<RatFunc>& a, const DenseMat<RatFunc>& b) {
  DenseMat<RatFunc> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) {
      if (a.at(i, j).is_zero()) continue;
      for (long r = 0; r < b.rows(); ++r)
        for (long c = 0; c < b.cols(); ++c) {
          if (b.at(r, c).is_zero()) continue;
          out.at(i * b.rows() + r, j * b.cols() + c) = a.at(i, j) * b.at(r, c);
        }
    }
  return out;
}

// Iterated-coproduct action of T_ij(x) on the whole tensor product.
inline ActionTable t_action_table(const ModuleSpec& spec, const FormChoice* form) {
  int n = spec.n;
  if (spec.factors.empty()) {  // counit: T_ij -> delta_ij on a 1-dim space
    ActionTable tab(n * n, DenseMat<RatFunc>(1, 1));
    for (int i = 0; i < n; ++i) tab[i * n + i].at(0, 0) = RatFunc(Rat(1));
    return tab;
  }
  ActionTable tab(n * n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      tab[(i - 1) * n + (j - 1)] = action_on_factor(n, spec.factors[0], i, j, form);
  for (size_t fidx = 1; fidx < spec.factors.size(); ++fidx) {
    ActionTable fac(n * n);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        fac[(i - 1) * n + (j - 1)] = action_on_factor(n, spec.factors[fidx], i, j, form);
    ActionTable next(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        DenseMat<RatFunc> acc;
        bool first = true;
        for (int k = 0; k < n; ++k) {
          DenseMat<RatFunc> term = kron(tab[i * n + k], fac[k * n + j]);
          if (first) {
            acc = std::move(term);
            first = false;
          } else {
            acc = acc + term;
          }
        }
        next[i * n + j] = std::move(acc);
      }
    tab = std::move(next);
  }
  return tab;
}

inline DenseMat<RatFunc> action_on_product(const ModuleSpec& spec, int i, int j,
                                           const FormChoice* form = nullptr) {
  return t_action_table(spec, form)[(i - 1) * spec.n + (j - 1)];
}

inline DenseMat<RatFunc> subst_neg(const DenseMat<RatFunc>& m) {
  DenseMat<RatFunc> out(m.rows(), m.cols());
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j).subst_neg();
  return out;
}

// S_ij(x) = sum_k T~_ik(-x) T_kj(x) with T~_ik(y) = theta_i theta_k T_{bar k, bar i}(y).
inline ActionTable s_action_table(const ModuleSpec& spec, const FormChoice& form) {
  int n = spec.n;
  ActionTable t = t_action_table(spec, &form);
  long d = spec.dim();
  ActionTable out(n * n, DenseMat<RatFunc>(d, d));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      DenseMat<RatFunc> acc(d, d);
      for (int k = 1; k <= n; ++k) {
        DenseMat<RatFunc> tneg = subst_neg(t[(form.bar(k) - 1) * n + (form.bar(i) - 1)]);
        RatFunc th{Rat(form.theta(i) * form.theta(k))};
        DenseMat<RatFunc> term = tneg * t[(k - 1) * n + (j - 1)];
        for (long r = 0; r < d; ++r)
          for (long c = 0; c < d; ++c) acc.at(r, c) += th * term.at(r, c);
      }
      out[(i - 1) * n + (j - 1)] = std::move(acc);
    }
  return out;
}

inline DenseMat<RatFunc> action_S_on_product(const ModuleSpec& spec, const FormChoice& form,
                                             int i, int j) {
  return s_action_table(spec, form)[(i - 1) * spec.n + (j - 1)];
}

inline DenseMat<Rat> eval_table_at(const DenseMat<RatFunc>& m, const Rat& x) {
  DenseMat<Rat> out(m.rows(), m.cols());
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) {
      auto v = m.at(i, j).eval(x);
      if (!v) throw PoleError("eval_table_at: sample point hits a pole");
      out.at(i, j) = *v;
    }
  return out;
}

// ---------------------------------------------------------------------------
// Truncated series of generators acting on a module.
// ---------------------------------------------------------------------------

template <class F = Rat>
struct SeriesAction {
  Alg alg = Alg::gl;
  int n = 0;
  int order = 0;  // R
  long dim = 0;
  std::vector<DenseMat<F>> coeff;  // (i-1)*n*R + (j-1)*R + (r-1)

  DenseMat<F>& at(int i, int j, int r) { return coeff[(i - 1) * n * order + (j - 1) * order + (r - 1)]; }
  const DenseMat<F>& at(int i, int j, int r) const {
    return coeff[(i - 1) * n * order + (j - 1) * order + (r - 1)];
  }
  // r = 0 gives delta_ij * identity
  DenseMat<F> at0(int i, int j, int r) const {
    if (r == 0) return i == j ? DenseMat<F>::identity(dim) : DenseMat<F>(dim, dim);
    return at(i, j, r);
  }
};

namespace detail {
inline SeriesAction<Rat> expand_table(const ActionTable& tab, Alg alg, int n, long dim, int order) {
  SeriesAction<Rat> s;
  s.alg = alg;
  s.n = n;
  s.order = order;
  s.dim = dim;
  s.coeff.assign((size_t)n * n * order, DenseMat<Rat>(dim, dim));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const DenseMat<RatFunc>& m = tab[(i - 1) * n + (j - 1)];
      for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c) {
          std::vector<Rat> ser = m.at(r, c).series_at_infinity(order);
          Rat lead = (r == c && i == j) ? Rat(1) : Rat(0);
          if (ser[0] != lead)
            throw std::logic_error("series leading term of a module action is not delta_ij");
          for (int k = 1; k <= order; ++k) s.at(i, j, k).at(r, c) = ser[k];
        }
    }
  return s;
}
}  // namespace detail

inline SeriesAction<Rat> series_from_T(const ModuleSpec& spec, int order,
                                       const FormChoice* form = nullptr) {
  return detail::expand_table(t_action_table(spec, form), Alg::gl, spec.n, spec.dim(), order);
}

inline SeriesAction<Rat> series_from_S(const ModuleSpec& spec, const FormChoice& form, int order) {
  Alg alg = form.is_sp() ? Alg::sp : Alg::so;
  return detail::expand_table(s_action_table(spec, form), alg, spec.n, spec.dim(), order);
}

// Evaluation homomorphism on C^n: T^{(1)}_ij -> E_ij, higher coefficients -> 0.
inline DenseMat<Rat> eval_hom(int n, int i, int j, int r) {
  DenseMat<Rat> out(n, n);
  if (r == 1) out.at(i - 1, j - 1) = Rat(1);
  return out;
}

// The antipodal map on a truncated series: matrix-of-series inverse of T(x),
// so that composing the two gives the identity to the stated order.
template <class F>
SeriesAction<F> antipode_truncated(const SeriesAction<F>& s) {
  int n = s.n, R = s.order;
  SeriesAction<F> inv = s;
  for (auto& m : inv.coeff) m = DenseMat<F>(s.dim, s.dim);
  // inv_r = - sum_{a=1..r} A_a inv_{r-a}, inv_0 = 1
  for (int r = 1; r <= R; ++r)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        DenseMat<F> acc(s.dim, s.dim);
        for (int a = 1; a <= r; ++a)
          for (int k = 1; k <= n; ++k) {
            DenseMat<F> rhs = (r - a == 0)
                                  ? (k == j ? DenseMat<F>::identity(s.dim) : DenseMat<F>(s.dim, s.dim))
                                  : inv.at(k, j, r - a);
            if (!rhs.is_zero()) acc = acc + s.at(i, k, a) * rhs;
          }
        inv.at(i, j, r) = DenseMat<F>(s.dim, s.dim) - acc;
      }
  return inv;
}

// Product of two matrix series to the common truncation order.
template <class F>
SeriesAction<F> series_multiply(const SeriesAction<F>& x, const SeriesAction<F>& y) {
  SeriesAction<F> out = x;
  for (auto& m : out.coeff) m = DenseMat<F>(x.dim, x.dim);
  for (int r = 1; r <= x.order; ++r)
    for (int i = 1; i <= x.n; ++i)
      for (int j = 1; j <= x.n; ++j) {
        DenseMat<F> acc(x.dim, x.dim);
        for (int a = 0; a <= r; ++a)
          for (int k = 1; k <= x.n; ++k) {
            DenseMat<F> xa = x.at0(i, k, a);
            DenseMat<F> yb = y.at0(k, j, r - a);
            if (!xa.is_zero() && !yb.is_zero()) acc = acc + xa * yb;
          }
        out.at(i, j, r) = acc;
      }
  return out;
}

// Defining relation on coefficients: for all r, s >= 0,
//   [T^{(r+1)}_ij, T^{(s)}_kl] - [T^{(r)}_ij, T^{(s+1)}_kl]
//     = T^{(r)}_kj T^{(s)}_il - T^{(s)}_kj T^{(r)}_il.
inline bool check_rtt(const SeriesAction<Rat>& s) {
  int n = s.n, R = s.order;
  auto comm = [](const DenseMat<Rat>& a, const DenseMat<Rat>& b) { return a * b - b * a; };
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
          for (int r = 0; r + 1 <= R; ++r)
            for (int q = 0; q + 1 <= R; ++q) {
              DenseMat<Rat> lhs =
                  comm(s.at0(i, j, r + 1), s.at0(k, l, q)) - comm(s.at0(i, j, r), s.at0(k, l, q + 1));
              DenseMat<Rat> rhs =
                  s.at0(k, j, r) * s.at0(i, l, q) - s.at0(k, j, q) * s.at0(i, l, r);
              if (lhs != rhs) return false;
            }
  return true;
}

// Coideal property specialized to a product module, first factor split off:
//   S_ij(x) = sum_{k,l} S^{(1)}_kl(x) ⊗ T~^{(rest)}_ik(-x) T^{(rest)}_lj(x).
inline bool check_coideal_split(const ModuleSpec& spec, const FormChoice& form,
                                const std::vector<Rat>& samples) {
  if (spec.factors.size() < 2)
    throw std::invalid_argument("check_coideal_split: need at least two factors");
  int n = spec.n;
  ModuleSpec first{n, {spec.factors[0]}};
  ModuleSpec rest{n, {spec.factors.begin() + 1, spec.factors.end()}};
  ActionTable sfull = s_action_table(spec, form);
  ActionTable sfirst = s_action_table(first, form);
  ActionTable trest = t_action_table(rest, &form);
  for (const Rat& x : samples) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        DenseMat<Rat> lhs = eval_table_at(sfull[(i - 1) * n + (j - 1)], x);
        DenseMat<Rat> acc(spec.dim(), spec.dim());
        for (int k = 1; k <= n; ++k)
          for (int l = 1; l <= n; ++l) {
            DenseMat<Rat> skl = eval_table_at(sfirst[(k - 1) * n + (l - 1)], x);
            if (skl.is_zero()) continue;
            // T~_ik(-x) T_lj(x) on the rest
            DenseMat<RatFunc> tik =
                subst_neg(trest[(form.bar(k) - 1) * n + (form.bar(i) - 1)]);
            DenseMat<Rat> m1 = eval_table_at(tik, x);
            DenseMat<Rat> m2 = eval_table_at(trest[(l - 1) * n + (j - 1)], x);
            Rat th(form.theta(i) * form.theta(k));
            DenseMat<Rat> right = m1 * m2;
            // kron over Rat
            DenseMat<Rat> term(spec.dim(), spec.dim());
            long dr = right.rows();
            for (long a = 0; a < skl.rows(); ++a)
              for (long b = 0; b < skl.cols(); ++b) {
                if (skl.at(a, b).is_zero()) continue;
                for (long r2 = 0; r2 < dr; ++r2)
                  for (long c2 = 0; c2 < dr; ++c2)
                    term.at(a * dr + r2, b * dr + c2) = skl.at(a, b) * right.at(r2, c2);
              }
            for (long a = 0; a < spec.dim(); ++a)
              for (long b = 0; b < spec.dim(); ++b) acc.at(a, b) += th * term.at(a, b);
          }
        if (lhs != acc) return false;
      }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sample-point verification of the intertwining identities from the product
// constructions. Everything acts on (C^n)^{⊗(N+1)} with the auxiliary slot
// first; both sides are rational in the sample variable with denominator
// degree <= N (resp. 2N), so 2N+2 (resp. 4N+2) pole-free samples decide.
// ---------------------------------------------------------------------------

namespace detail {

// factors acting on the extended space: slot 0 of the identity is slot 1,
// original slot p is p+1
template <class F>
std::vector<LinFactor<F>> shift_factors(const std::vector<LinFactor<F>>& fs) {
  std::vector<LinFactor<F>> out = fs;
  for (auto& f : out) {
    ++f.p;
    ++f.q;
  }
  return out;
}

inline std::vector<int> extended_perm(const std::vector<int>& perm) {
  std::vector<int> out(perm.size() + 1);
  out[0] = 1;
  for (size_t k = 0; k < perm.size(); ++k) out[k + 1] = perm[k] + 1;
  return out;
}

inline SparseVec<Rat> apply_perm_vec(const TensorSpace& sp, const std::vector<int>& mapping,
                                     const SparseVec<Rat>& v) {
  SparseVec<Rat> out;
  out.reserve(v.size());
  for (const auto& [idx, val] : v) {
    long w = 0;
    for (int k = 1; k <= sp.N; ++k)
      w += (long)(sp.digit(idx, mapping[k - 1]) - 1) * sp.stride[k - 1];
    out.emplace_back(w, val);
  }
  svec_normalize(out);
  return out;
}

}  // namespace detail

// Prop 2.3 proof identity: (P_nu B) X(x) = X'(x) (P_nu B) with
// X  = Rbar_{01}(x_1 - x) ... Rbar_{0N}(x_N - x),
// X' = Rbar_{01}(x_{1'} - x) ... Rbar_{0N}(x_{N'} - x).
inline bool verify_intertwiner_I(const IntertwinerResult& result, const WeightPair& pair,
                                 bool perturb_negative_control = false) {
  FusionContext c = make_context(pair);
  WedgeProduct wp(pair.n, c.shape);
  if (result.dim_source != wp.dim())
    throw std::invalid_argument("verify_intertwiner_I: result does not match the pair");
  int N = c.shape.N();
  TensorSpace ext(pair.n, N + 1);
  std::vector<LinFactor<Rat>> bfac = detail::shift_factors(b_factor_list(c, c.xs));
  if (perturb_negative_control && !bfac.empty())
    bfac.front().b = bfac.front().b * Rat(1, 2);  // corrupt one factor argument
  std::vector<int> pnu = detail::extended_perm(c.shape.primed());
  std::vector<int> primed = c.shape.primed();

  int samples = 2 * N + 2;
  Rat x(pair.n + 1);
  for (int s = 0; s < samples; ++s, x += Rat(1)) {
    // avoid poles x = x_p
    bool pole = true;
    while (pole) {
      pole = false;
      for (const Rat& xp : c.xs)
        if (xp == x) {
          x += Rat(1);
          pole = true;
        }
    }
    std::vector<LinFactor<Rat>> xf, xfp;
    for (int p = 1; p <= N; ++p) {
      xf.push_back(r_factor(RKind::bar, 1, p + 1, c.xs[p - 1] - x));
      xfp.push_back(r_factor(RKind::bar, 1, p + 1, c.xs[primed[p - 1] - 1] - x));
    }
    for (long col = 0; col < ext.dim(); ++col) {
      SparseVec<Rat> e{{col, Rat(1)}};
      SparseVec<Rat> lhs = apply_ordered_product(ext, nullptr, xf, e);
      lhs = apply_ordered_product(ext, nullptr, bfac, lhs);
      lhs = detail::apply_perm_vec(ext, pnu, lhs);
      SparseVec<Rat> rhs = apply_ordered_product(ext, nullptr, bfac, e);
      rhs = detail::apply_perm_vec(ext, pnu, rhs);
      rhs = apply_ordered_product(ext, nullptr, xfp, rhs);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

// Prop 2.6 proof identity: (Q_nu B C) Y(x) = Y''(x) (Q_nu B C) with
// Y   = Rhat_{0N}(x_N + x) ... Rhat_{01}(x_1 + x) Rbar_{01}(x_1 - x) ... Rbar_{0N}(x_N - x),
// Y'' = Rbar_{0N}(x_{N''} - x) ... Rbar_{01}(x_{1''} - x) Rhat_{01}(x_{1''} + x) ... Rhat_{0N}(x_{N''} + x).
inline bool verify_intertwiner_J(const IntertwinerResult& result, const WeightPair& pair,
                                 bool perturb_negative_control = false) {
  if (!pair.twisted()) throw std::invalid_argument("verify_intertwiner_J: so/sp pair required");
  FusionContext c = make_context(pair);
  WedgeProduct wp(pair.n, c.shape);
  if (result.dim_source != wp.dim())
    throw std::invalid_argument("verify_intertwiner_J: result does not match the pair");
  int N = c.shape.N();
  TensorSpace ext(pair.n, N + 1);
  const FormChoice* form = c.form_ptr();
  std::vector<LinFactor<Rat>> mfac = detail::shift_factors(b_factor_list(c, c.xs));
  {
    std::vector<LinFactor<Rat>> cf = detail::shift_factors(c_factor_list(c, c.xs));
    mfac.insert(mfac.end(), cf.begin(), cf.end());
  }
  if (perturb_negative_control && !mfac.empty()) mfac.front().b = mfac.front().b * Rat(1, 2);
  std::vector<int> qnu = detail::extended_perm(c.shape.doubleprimed());
  std::vector<int> dp = c.shape.doubleprimed();

  int samples = 4 * N + 2;
  Rat x(pair.n + 1);
  for (int s = 0; s < samples; ++s, x += Rat(1)) {
    bool pole = true;
    while (pole) {
      pole = false;
      for (const Rat& xp : c.xs)
        if (xp == x || xp == -x) {
          x += Rat(1);
          pole = true;
        }
    }
    std::vector<LinFactor<Rat>> yf, ypp;
    for (int p = N; p >= 1; --p) yf.push_back(r_factor(RKind::hat, 1, p + 1, c.xs[p - 1] + x));
    for (int p = 1; p <= N; ++p) yf.push_back(r_factor(RKind::bar, 1, p + 1, c.xs[p - 1] - x));
    for (int p = N; p >= 1; --p)
      ypp.push_back(r_factor(RKind::bar, 1, p + 1, c.xs[dp[p - 1] - 1] - x));
    for (int p = 1; p <= N; ++p)
      ypp.push_back(r_factor(RKind::hat, 1, p + 1, c.xs[dp[p - 1] - 1] + x));
    for (long col = 0; col < ext.dim(); ++col) {
      SparseVec<Rat> e{{col, Rat(1)}};
      SparseVec<Rat> lhs = apply_ordered_product(ext, form, yf, e);
      lhs = apply_ordered_product(ext, form, mfac, lhs);
      lhs = detail::apply_perm_vec(ext, qnu, lhs);
      SparseVec<Rat> rhs = apply_ordered_product(ext, form, mfac, e);
      rhs = detail::apply_perm_vec(ext, qnu, rhs);
      rhs = apply_ordered_product(ext, form, ypp, rhs);
      if (lhs != rhs) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Quotient modules, irreducibility, commutants and splitting.
// ---------------------------------------------------------------------------

template <class F>
SeriesAction<F> restrict_action(const SeriesAction<F>& s, const std::vector<std::vector<F>>& basis) {
  long q = static_cast<long>(basis.size());
  DenseMat<F> img(s.dim, q);
  for (long c = 0; c < q; ++c)
    for (long r = 0; r < s.dim; ++r) img.at(r, c) = basis[c][r];
  SeriesAction<F> out = s;
  out.dim = q;
  for (auto& m : out.coeff) {
    DenseMat<F> restricted(q, q);
    for (long c = 0; c < q; ++c) {
      std::vector<F> col(s.dim, F(0));
      for (long r = 0; r < s.dim; ++r) col[r] = img.at(r, c);
      std::vector<F> mc = m.apply(col);
      auto sol = solve(img, mc);
      if (!sol) throw std::logic_error("restrict_action: subspace not invariant");
      for (long r = 0; r < q; ++r) restricted.at(r, c) = (*sol)[r];
    }
    m = std::move(restricted);
  }
  return out;
}

struct QuotientModule {
  SeriesAction<Rat> action;
  std::vector<Poly> drinfeld;
  long dim = 0;
};

// Restriction of the target action to the image of the intertwiner. I maps
// into the reversed tensor product (T action); J maps into the product of
// negative fundamental factors (S action). Closure of the image under the
// action is exact or it is a contradiction with the quotient theorems.
inline QuotientModule quotient_module(const IntertwinerResult& res, const WeightPair& pair,
                                      char kind, int order) {
  SeriesAction<Rat> target;
  FormChoice form = pair.alg == Alg::sp ? FormChoice::sp(pair.n) : FormChoice::so(pair.n);
  if (kind == 'I') {
    target = series_from_T(spec_from_pair(pair, +1).reversed(), order);
  } else if (kind == 'J') {
    target = series_from_S(spec_from_pair(pair, -1), form, order);
  } else {
    throw std::invalid_argument("quotient_module: kind must be 'I' or 'J'");
  }
  if ((long)res.image.empty() || (long)res.image[0].size() != target.dim)
    throw std::invalid_argument("quotient_module: image does not live in the target module");
  QuotientModule out;
  out.dim = res.dim_image;
  try {
    out.action = restrict_action(target, res.image);
  } catch (const std::logic_error&) {
    throw std::logic_error("quotient_module: action does not preserve the image");
  }
  out.drinfeld = pair.alg == Alg::gl ? drinfeld_P(pair) : drinfeld_Q(pair);
  return out;
}

// Burnside density criterion: the module is irreducible iff the unital
// algebra generated by the coefficient matrices has full dimension dim^2.
// Saturation maintains an echelonized basis of the span and multiplies by
// the generators on the left until stable.
template <class F>
long algebra_span_dim(const std::vector<DenseMat<F>>& gens, long dim) {
  long d2 = dim * dim;
  std::vector<std::vector<F>> rows;      // echelon rows
  std::vector<long> pivots;              // pivot index per row
  std::vector<DenseMat<F>> members;      // matrices spanning, queue included
  auto reduce_insert = [&](DenseMat<F> m) -> bool {
    std::vector<F> v(d2, F(0));
    for (long i = 0; i < dim; ++i)
      for (long j = 0; j < dim; ++j) v[i * dim + j] = m.at(i, j);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (fz(v[pivots[r]])) continue;
      F f = v[pivots[r]];
      for (long k = 0; k < d2; ++k) v[k] = v[k] - f * rows[r][k];
    }
    long p = -1;
    for (long k = 0; k < d2; ++k)
      if (!fz(v[k])) { p = k; break; }
    if (p < 0) return false;
    F inv = F(1) / v[p];
    for (long k = 0; k < d2; ++k) v[k] = inv * v[k];
    rows.push_back(std::move(v));
    pivots.push_back(p);
    members.push_back(std::move(m));
    return true;
  };
  reduce_insert(DenseMat<F>::identity(dim));
  for (const auto& g : gens) reduce_insert(g);
  for (size_t head = 0; head < members.size(); ++head) {
    if ((long)rows.size() == d2) break;
    DenseMat<F> cur = members[head];
    for (const auto& g : gens) {
      if ((long)rows.size() == d2) break;
      reduce_insert(g * cur);
    }
  }
  return static_cast<long>(rows.size());
}

template <class F>
std::vector<DenseMat<F>> burnside_generators(const SeriesAction<F>& s, int max_order = -1) {
  // coefficients up to order 2 generate for gl, up to 3 for the twisted case
  int cap = max_order > 0 ? max_order : (s.alg == Alg::gl ? 2 : 3);
  cap = std::min(cap, s.order);
  std::vector<DenseMat<F>> gens;
  for (int i = 1; i <= s.n; ++i)
    for (int j = 1; j <= s.n; ++j)
      for (int r = 1; r <= cap; ++r)
        if (!s.at(i, j, r).is_zero()) gens.push_back(s.at(i, j, r));
  return gens;
}

template <class F>
bool burnside_irreducible(const SeriesAction<F>& s, int max_order = -1) {
  if (s.dim < 1) throw std::invalid_argument("burnside_irreducible: empty module");
  return algebra_span_dim(burnside_generators(s, max_order), s.dim) == s.dim * s.dim;
}

// Basis of the commutant: all X with X M = M X for every coefficient matrix.
template <class F>
std::vector<DenseMat<F>> commutant_basis(const SeriesAction<F>& s) {
  long d = s.dim, d2 = d * d;
  std::vector<DenseMat<F>> gens = burnside_generators(s, s.order);
  DenseMat<F> sys(static_cast<long>(gens.size()) * d2, d2);
  long row = 0;
  for (const auto& m : gens) {
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) {
        // (X m - m X)_{ij} = sum_a X_ia m_aj - sum_b m_ib X_bj
        for (long a = 0; a < d; ++a) {
          sys.at(row, i * d + a) += m.at(a, j);
          sys.at(row, a * d + j) -= m.at(i, a);
        }
        ++row;
      }
  }
  std::vector<DenseMat<F>> out;
  for (const auto& v : kernel_basis(sys)) {
    DenseMat<F> x(d, d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) x.at(i, j) = v[i * d + j];
    out.push_back(std::move(x));
  }
  return out;
}

// Space of X with X A = B X over all stored coefficients; dim 1 spanned by an
// invertible element certifies equivalence at the truncation order.
template <class F>
struct IntertwinerSpace {
  long dim = 0;
  std::vector<DenseMat<F>> basis;
  bool invertible_representative = false;
};

template <class F>
IntertwinerSpace<F> intertwiner_space(const SeriesAction<F>& a, const SeriesAction<F>& b) {
  if (a.alg != b.alg || a.order != b.order || a.n != b.n)
    throw std::invalid_argument("intertwiner_space: mismatched actions");
  long da = a.dim, db = b.dim;
  long rows = (long)a.n * a.n * a.order * (da * db);
  DenseMat<F> sys(rows, da * db);
  long row = 0;
  for (int i = 1; i <= a.n; ++i)
    for (int j = 1; j <= a.n; ++j)
      for (int r = 1; r <= a.order; ++r) {
        const DenseMat<F>& ma = a.at(i, j, r);
        const DenseMat<F>& mb = b.at(i, j, r);
        // X: db x da. (X ma - mb X)_{uv} = sum_w X_uw ma_wv - sum_w mb_uw X_wv
        for (long u = 0; u < db; ++u)
          for (long v = 0; v < da; ++v) {
            for (long w = 0; w < da; ++w) sys.at(row, u * da + w) += ma.at(w, v);
            for (long w = 0; w < db; ++w) sys.at(row, w * da + v) -= mb.at(u, w);
            ++row;
          }
      }
  IntertwinerSpace<F> out;
  for (const auto& v : kernel_basis(sys)) {
    DenseMat<F> x(db, da);
    for (long u = 0; u < db; ++u)
      for (long w = 0; w < da; ++w) x.at(u, w) = v[u * da + w];
    out.basis.push_back(std::move(x));
  }
  out.dim = static_cast<long>(out.basis.size());
  if (out.dim == 1 && da == db) out.invertible_representative = rank_of(out.basis[0]) == da;
  return out;
}

template <class F>
SeriesAction<F> convert_action(const SeriesAction<Rat>& s) {
  SeriesAction<F> out;
  out.alg = s.alg;
  out.n = s.n;
  out.order = s.order;
  out.dim = s.dim;
  out.coeff.reserve(s.coeff.size());
  for (const auto& m : s.coeff) {
    DenseMat<F> c(m.rows(), m.cols());
    for (long i = 0; i < m.rows(); ++i)
      for (long j = 0; j < m.cols(); ++j) c.at(i, j) = F(m.at(i, j));
    out.coeff.push_back(std::move(c));
  }
  return out;
}

struct SplitResult {
  bool rational = true;          // split realized over Q, else over Q(sqrt(s))
  Rat radicand;                  // s with Y^2 = s, Y the trace-zero commutant element
  std::vector<long> dims;
  std::vector<SeriesAction<Rat>> parts_rat;
  std::vector<SeriesAction<QuadExt>> parts_quad;
  std::vector<int> delta;        // +1 / -1 labels, repository convention
};

// Splits a commutant-dimension-2 action into its two summands. The trace-zero
// non-scalar commutant element squares to a scalar s; the idempotents are
// (1 ± Y/sqrt(s))/2, over Q when s is a perfect square and over Q(sqrt(s))
// otherwise. The delta = +1 label goes to the summand whose reduced image
// basis has the smaller pivot sequence; this is a repository convention.
inline SplitResult split_so_even(const SeriesAction<Rat>& s) {
  if (s.alg != Alg::so || s.n % 2 != 0)
    throw std::invalid_argument("split_so_even: so with even n required");
  std::vector<DenseMat<Rat>> comm = commutant_basis(s);
  if (comm.size() != 2)
    throw std::logic_error("split_so_even: commutant dimension is " +
                           std::to_string(comm.size()) + ", expected 2");
  // pick a non-scalar element and make it trace-zero
  DenseMat<Rat> x = comm[0];
  {
    DenseMat<Rat> id = DenseMat<Rat>::identity(s.dim);
    auto is_scalar = [&](const DenseMat<Rat>& m) {
      Rat c = m.at(0, 0);
      return m == c * id;
    };
    if (is_scalar(x)) x = comm[1];
    if (is_scalar(x)) throw std::logic_error("split_so_even: commutant is scalar");
    Rat tr = x.trace() / Rat(s.dim);
    x = x - tr * id;
  }
  DenseMat<Rat> x2 = x * x;
  // x2 must be scalar: the commutant algebra is spanned by {1, x} and x is
  // trace free, so x^2 = s * 1.
  Rat srad = x2.at(0, 0);
  if (x2 != srad * DenseMat<Rat>::identity(s.dim))
    throw std::logic_error("split_so_even: trace-zero commutant element does not square to a scalar");
  if (srad.is_zero()) throw std::logic_error("split_so_even: nilpotent commutant");

  SplitResult out;
  out.radicand = srad;
  Rat root;
  auto pivot_key = [](const std::vector<std::vector<Rat>>& basis, long dim) {
    // first nonzero coordinate per reduced basis; basis from image_basis of a
    // projector, re-echelonized for determinism
    DenseMat<Rat> m(static_cast<long>(basis.size()), dim);
    for (long r = 0; r < (long)basis.size(); ++r)
      for (long c = 0; c < dim; ++c) m.at(r, c) = basis[r][c];
    rref(m);
    std::vector<long> key;
    for (long r = 0; r < m.rows(); ++r)
      for (long c = 0; c < dim; ++c)
        if (!m.at(r, c).is_zero()) {
          key.push_back(c);
          break;
        }
    return key;
  };
  if (rational_sqrt(srad, root)) {
    out.rational = true;
    DenseMat<Rat> id = DenseMat<Rat>::identity(s.dim);
    Rat inv2(1, 2);
    std::vector<std::vector<std::vector<Rat>>> bases;
    for (int sign : {+1, -1}) {
      DenseMat<Rat> proj = inv2 * (id + Rat(sign) * (root.inverse() * x));
      bases.push_back(image_basis(proj));
    }
    std::vector<long> k0, k1;
    k0 = pivot_key(bases[0], s.dim);
    k1 = pivot_key(bases[1], s.dim);
    int first = k0 <= k1 ? 0 : 1;
    for (int which : {first, 1 - first}) {
      out.parts_rat.push_back(restrict_action(s, bases[which]));
      out.dims.push_back(static_cast<long>(bases[which].size()));
    }
    out.delta = {+1, -1};
  } else {
    out.rational = false;
    SeriesAction<QuadExt> sq = convert_action<QuadExt>(s);
    QuadExt rootq = QuadExt::sqrt_of(srad);
    DenseMat<QuadExt> xq(s.dim, s.dim);
    for (long i = 0; i < s.dim; ++i)
      for (long j = 0; j < s.dim; ++j) xq.at(i, j) = QuadExt(x.at(i, j));
    DenseMat<QuadExt> id = DenseMat<QuadExt>::identity(s.dim);
    QuadExt inv2 = QuadExt(Rat(1, 2));
    std::vector<std::vector<std::vector<QuadExt>>> bases;
    for (int sign : {+1, -1}) {
      DenseMat<QuadExt> proj = inv2 * (id + QuadExt(Rat(sign)) * ((QuadExt(1) / rootq) * xq));
      bases.push_back(image_basis(proj));
    }
    for (int which : {0, 1}) {
      out.parts_quad.push_back(restrict_action(sq, bases[which]));
      out.dims.push_back(static_cast<long>(bases[which].size()));
    }
    out.delta = {+1, -1};
  }
  return out;
}

// ---------------------------------------------------------------------------
// The explicit equivalence of Lemma 1.15: the complement map
// Lambda^{n-k} -> Lambda^k intertwining Phi-check^{n-k}_{1-t} with Phi^{-k}_t.
// ---------------------------------------------------------------------------

inline DenseMat<Rat> complement_map(const FormChoice& form, int k) {
  int n = form.n;
  WedgeBasis src(n, n - k), dst(n, k);
  DenseMat<Rat> out(dst.dim(), src.dim());
  for (long c = 0; c < src.dim(); ++c) {
    const auto& tuple = src.tuples[c];
    std::vector<int> compl_;
    std::vector<bool> in(n + 1, false);
    for (int v : tuple) in[v] = true;
    for (int v = 1; v <= n; ++v)
      if (!in[v]) compl_.push_back(v);
    // sign of the shuffle (tuple, complement) as a permutation of 1..n
    std::vector<int> arr;
    arr.insert(arr.end(), tuple.begin(), tuple.end());
    arr.insert(arr.end(), compl_.begin(), compl_.end());
    int inv = 0;
    for (size_t i = 0; i < arr.size(); ++i)
      for (size_t j = i + 1; j < arr.size(); ++j)
        if (arr[i] > arr[j]) ++inv;
    int sign = inv % 2 == 0 ? 1 : -1;
    // image (theta_{j_1} e_{bar j_1}) ∧ ... ∧ (theta_{j_k} e_{bar j_k});
    // bar reverses the order, sort back with the corresponding sign
    int th = 1;
    std::vector<int> mapped;
    for (int v : compl_) {
      th *= form.theta(v);
      mapped.push_back(form.bar(v));
    }
    int inv2 = 0;
    for (size_t i = 0; i < mapped.size(); ++i)
      for (size_t j = i + 1; j < mapped.size(); ++j)
        if (mapped[i] > mapped[j]) ++inv2;
    int sign2 = inv2 % 2 == 0 ? 1 : -1;
    std::sort(mapped.begin(), mapped.end());
    out.at(dst.index.at(mapped), c) = Rat(sign * th * sign2);
  }
  return out;
}

// Checks the intertwining property of the complement map entrywise at the
// given sample points.
inline bool check_complement_intertwines(const FormChoice& form, int k, const Rat& t,
                                         const std::vector<Rat>& samples) {
  int n = form.n;
  FundamentalFactor source{n - k, +1, Rat(1) - t, true};   // Phi-check^{n-k}_{1-t}
  FundamentalFactor target{k, -1, t, false};               // Phi^{-k}_t
  DenseMat<Rat> map = complement_map(form, k);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      DenseMat<RatFunc> src = action_on_factor(n, source, i, j, &form);
      DenseMat<RatFunc> dst = action_on_factor(n, target, i, j, &form);
      for (const Rat& x : samples) {
        DenseMat<Rat> lhs = map * eval_table_at(src, x);
        DenseMat<Rat> rhs = eval_table_at(dst, x) * map;
        if (lhs != rhs) return false;
      }
    }
  return true;
}

template <class F>
SeriesAction<F> direct_sum(const SeriesAction<F>& a, const SeriesAction<F>& b) {
  if (a.alg != b.alg || a.n != b.n || a.order != b.order)
    throw std::invalid_argument("direct_sum: mismatched actions");
  SeriesAction<F> out = a;
  out.dim = a.dim + b.dim;
  for (size_t idx = 0; idx < out.coeff.size(); ++idx) {
    DenseMat<F> m(out.dim, out.dim);
    for (long i = 0; i < a.dim; ++i)
      for (long j = 0; j < a.dim; ++j) m.at(i, j) = a.coeff[idx].at(i, j);
    for (long i = 0; i < b.dim; ++i)
      for (long j = 0; j < b.dim; ++j) m.at(a.dim + i, a.dim + j) = b.coeff[idx].at(i, j);
    out.coeff[idx] = std::move(m);
  }
  return out;
}

}  // namespace exyang

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "exyang/poly.hpp"
#include "exyang/tensor.hpp"

namespace exyang {

struct PoleError : std::runtime_error {
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

enum class RKind { plain, bar, tilde, hat };

inline Slot2Kind slot2_of(RKind k) {
  switch (k) {
    case RKind::plain: return Slot2Kind::P;
    case RKind::bar: return Slot2Kind::Pbar;
    case RKind::tilde: return Slot2Kind::Ptilde;
    case RKind::hat: return Slot2Kind::Phat;
  }
  return Slot2Kind::P;
}

// R(x) = 1 - K/x acting on slots (p, q); constructing the value at a pole of
// 1/x is an error, never an infinity.
template <class F>
LinFactor<F> r_factor(RKind kind, int p, int q, const F& x, const std::string& ctx = {}) {
  if (fz(x)) throw PoleError("R-matrix argument is zero" + (ctx.empty() ? "" : " in " + ctx));
  return LinFactor<F>{slot2_of(kind), p, q, F(1), F(0) - F(1) / x};
}

template <class F>
SpMat<F> r_matrix(RKind kind, const TensorSpace& sp, int p, int q, const F& x,
                  const FormChoice* form = nullptr) {
  check_slots(sp, p, q);
  if (slot2_needs_form(slot2_of(kind)) && form == nullptr)
    throw std::invalid_argument("r_matrix: tilde/hat variants need a form");
  LinFactor<F> f = r_factor(kind, p, q, x);
  return product_to_matrix(sp, form, std::vector<LinFactor<F>>{f});
}

enum class YbeVariant { ybe, tybe, cybe, hybe, bybe };

inline std::string ybe_name(YbeVariant v) {
  switch (v) {
    case YbeVariant::ybe: return "ybe";
    case YbeVariant::tybe: return "tybe";
    case YbeVariant::cybe: return "cybe";
    case YbeVariant::hybe: return "hybe";
    case YbeVariant::bybe: return "bybe";
  }
  return "?";
}

inline YbeVariant ybe_from_name(const std::string& s) {
  if (s == "ybe") return YbeVariant::ybe;
  if (s == "tybe") return YbeVariant::tybe;
  if (s == "cybe") return YbeVariant::cybe;
  if (s == "hybe") return YbeVariant::hybe;
  if (s == "bybe") return YbeVariant::bybe;
  throw std::invalid_argument("unknown YBE variant '" + s + "'");
}

inline bool ybe_needs_form(YbeVariant v) {
  return v == YbeVariant::cybe || v == YbeVariant::hybe || v == YbeVariant::bybe;
}

// Both sides of the cited three-slot identity as left-to-right factor lists.
template <class F>
void ybe_sides(YbeVariant v, const F& x, const F& y, int n,
               std::vector<LinFactor<F>>& lhs, std::vector<LinFactor<F>>& rhs) {
  auto R = [&](RKind k, int p, int q, const F& arg) {
    return r_factor(k, p, q, arg, ybe_name(v) + " factor (" + std::to_string(p) + "," +
                                      std::to_string(q) + ")");
  };
  using K = RKind;
  F xy = x + y;
  switch (v) {
    case YbeVariant::ybe:
      lhs = {R(K::plain, 1, 2, x), R(K::plain, 1, 3, xy), R(K::plain, 2, 3, y)};
      rhs = {R(K::plain, 2, 3, y), R(K::plain, 1, 3, xy), R(K::plain, 1, 2, x)};
      break;
    case YbeVariant::tybe:
      lhs = {R(K::bar, 1, 2, xy), R(K::bar, 1, 3, x), R(K::plain, 2, 3, y)};
      rhs = {R(K::plain, 2, 3, y), R(K::bar, 1, 3, x), R(K::bar, 1, 2, xy)};
      break;
    case YbeVariant::cybe:
      lhs = {R(K::tilde, 1, 2, xy), R(K::tilde, 1, 3, x), R(K::plain, 2, 3, y)};
      rhs = {R(K::plain, 2, 3, y), R(K::tilde, 1, 3, x), R(K::tilde, 1, 2, xy)};
      break;
    case YbeVariant::hybe:
      lhs = {R(K::hat, 1, 2, x), R(K::hat, 1, 3, xy), R(K::plain, 2, 3, y)};
      rhs = {R(K::plain, 2, 3, y), R(K::hat, 1, 3, xy), R(K::hat, 1, 2, x)};
      break;
    case YbeVariant::bybe: {
      F arg = F(n) - x - y;
      lhs = {R(K::bar, 1, 2, arg), R(K::hat, 1, 3, x), R(K::tilde, 2, 3, y)};
      rhs = {R(K::tilde, 2, 3, y), R(K::hat, 1, 3, x), R(K::bar, 1, 2, arg)};
      break;
    }
  }
}

template <class F>
bool check_ybe_variant(YbeVariant v, int n, const FormChoice* form, const F& x, const F& y) {
  if (ybe_needs_form(v) && form == nullptr)
    throw std::invalid_argument("check_ybe_variant: this variant needs a form");
  TensorSpace sp(n, 3);
  std::vector<LinFactor<F>> lhs, rhs;
  ybe_sides(v, x, y, n, lhs, rhs);
  return product_to_matrix(sp, form, lhs) == product_to_matrix(sp, form, rhs);
}

// Symbolic check: x runs as the free variable of RatFunc; y is sampled at
// enough points to pin down the y-dependence exactly. Per entry, both sides
// times the common denominator are polynomial of degree <= 3 in y, so any 6
// pole-free sample values are conclusive.
inline bool check_ybe_symbolic(YbeVariant v, int n, const FormChoice* form) {
  RatFunc x = RatFunc::var();
  const long ysamples[] = {5, 7, 9, 11, 13, 17};
  for (long ynum : ysamples) {
    RatFunc y(Rat(ynum, 3));
    if (!check_ybe_variant(v, n, form, x, y)) return false;
  }
  return true;
}

enum class Degeneration { nopole, nopolet };

// nopole : R12(x) R13(x+1) R23(1)  = (1 - (P12+P13)/x)(1 - P23)
// nopolet: R~12(x+1) R~13(x) R23(1) = (1 - (P~12+P~13)/x)(1 - P23)
template <class F>
bool check_degeneration(Degeneration which, int n, const FormChoice* form, const F& x) {
  TensorSpace sp(n, 3);
  std::vector<LinFactor<F>> lhs;
  Slot2Kind k12, k13;
  if (which == Degeneration::nopole) {
    lhs = {r_factor(RKind::plain, 1, 2, x), r_factor(RKind::plain, 1, 3, x + F(1)),
           r_factor(RKind::plain, 2, 3, F(1))};
    k12 = k13 = Slot2Kind::P;
  } else {
    if (form == nullptr) throw std::invalid_argument("check_degeneration: nopolet needs a form");
    lhs = {r_factor(RKind::tilde, 1, 2, x + F(1)), r_factor(RKind::tilde, 1, 3, x),
           r_factor(RKind::plain, 2, 3, F(1))};
    k12 = k13 = Slot2Kind::Ptilde;
  }
  SpMat<F> left = product_to_matrix(sp, form, lhs);
  if (fz(x)) throw PoleError("check_degeneration: x = 0");
  F minv = F(0) - F(1) / x;
  SpMat<F> m1 = SpMat<F>::identity(sp.dim()) + minv * slot2_matrix<F>(sp, form, k12, 1, 2) +
                minv * slot2_matrix<F>(sp, form, k13, 1, 3);
  SpMat<F> m2 = SpMat<F>::identity(sp.dim()) - slot2_matrix<F>(sp, form, Slot2Kind::P, 2, 3);
  return left == m1 * m2;
}

inline bool check_degeneration_symbolic(Degeneration which, int n, const FormChoice* form) {
  return check_degeneration(which, n, form, RatFunc::var());
}

// Slot-1 transpose and slot-1 form conjugation of a two-slot operator; these
// relate the four R-matrix families to each other.
template <class F>
SpMat<F> slot1_transpose(const SpMat<F>& m, int n) {
  TensorSpace sp(n, 2);
  SpMat<F> out(sp.dim(), sp.dim());
  for (long col = 0; col < sp.dim(); ++col) {
    int j = sp.digit(col, 1), b = sp.digit(col, 2);
    for (const auto& [row, val] : m.col(col)) {
      int i = sp.digit(row, 1), a = sp.digit(row, 2);
      // entry ((i,a),(j,b)) moves to ((j,a),(i,b))
      out.set(sp.encode({j, a}), sp.encode({i, b}), val);
    }
  }
  return out;
}

template <class F>
SpMat<F> slot1_conjugate(const SpMat<F>& m, const FormChoice& form) {
  TensorSpace sp(form.n, 2);
  SpMat<F> t = slot1_transpose(m, form.n);
  // X~ = G^{-1} X^T G in the first slot; G e_j = theta(bar j) e_{bar j} and
  // G^{-1} e_i = theta(i) e_{bar i} for either form.
  SpMat<F> out(sp.dim(), sp.dim());
  for (long col = 0; col < sp.dim(); ++col) {
    int j = sp.digit(col, 1), b = sp.digit(col, 2);
    long src = sp.encode({form.bar(j), b});
    F pre = F(form.theta(form.bar(j)));
    for (const auto& [row, val] : t.col(src)) {
      int i = sp.digit(row, 1), a = sp.digit(row, 2);
      F post = F(form.theta(i));
      out.set(sp.encode({form.bar(i), a}), col, post * pre * val);
    }
  }
  return out;
}

}  // namespace exyang

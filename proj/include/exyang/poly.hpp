#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "exyang/rat.hpp"

namespace exyang {

// Univariate polynomial over Rat, dense coefficients, constant term first.
// Normal form strips trailing zero coefficients; the zero polynomial has an
// empty coefficient vector and degree -1.
class Poly {
public:
  Poly() = default;
  Poly(const Rat& c) { if (!c.is_zero()) c_.push_back(c); }
  Poly(long c) : Poly(Rat(c)) {}
  explicit Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly var() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }
  // a + b*t
  static Poly linear(const Rat& a, const Rat& b) { return Poly(std::vector<Rat>{a, b}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == Rat(1); }
  const std::vector<Rat>& coeffs() const { return c_; }
  Rat coeff(int i) const { return i >= 0 && i < (int)c_.size() ? c_[i] : Rat(0); }
  Rat lead() const { return c_.empty() ? Rat(0) : c_.back(); }

  Rat eval(const Rat& t) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return Poly(std::move(c));
  }
  Poly operator-() const {
    std::vector<Rat> c(c_);
    for (auto& x : c) x = -x;
    return Poly(std::move(c));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend Poly operator*(const Rat& s, const Poly& a) {
    if (s.is_zero()) return Poly();
    std::vector<Rat> c(a.c_);
    for (auto& x : c) x *= s;
    return Poly(std::move(c));
  }
  Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
  Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
  Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly monic() const {
    if (is_zero()) return *this;
    return lead().inverse() * *this;
  }

  // Euclidean division: *this = q*d + r with deg r < deg d.
  void divmod(const Poly& d, Poly& q, Poly& r) const {
    if (d.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
    std::vector<Rat> rem(c_);
    int dd = d.degree();
    Rat dl = d.lead();
    std::vector<Rat> quo;
    int rd = static_cast<int>(rem.size()) - 1;
    if (rd >= dd) quo.assign(rd - dd + 1, Rat(0));
    while (rd >= dd) {
      if (!rem[rd].is_zero()) {
        Rat f = rem[rd] / dl;
        quo[rd - dd] = f;
        for (int i = 0; i <= dd; ++i) rem[rd - dd + i] -= f * d.c_[i];
      }
      --rd;
    }
    q = Poly(std::move(quo));
    r = Poly(std::move(rem));
  }

  Poly operator/(const Poly& d) const {
    Poly q, r;
    divmod(d, q, r);
    if (!r.is_zero()) throw std::domain_error("Poly: inexact division");
    return q;
  }

  // Substitution t -> -t.
  Poly subst_neg() const {
    std::vector<Rat> c(c_);
    for (size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return Poly(std::move(c));
  }

  // Substitution t -> t + s.
  Poly shift(const Rat& s) const {
    Poly acc;
    Poly lin = Poly::linear(s, Rat(1));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + Poly(*it);
    return acc;
  }

  // Multiplicity of t0 as a root.
  int root_multiplicity(const Rat& t0) const {
    if (is_zero()) return -1;
    Poly p = *this;
    Poly lin = Poly::linear(-t0, Rat(1));
    int m = 0;
    while (p.eval(t0).is_zero()) {
      p = p / lin;
      ++m;
    }
    return m;
  }

  // Text form "c0 + c1*t + c2*t^2 + ...", zero terms skipped, zero poly "0".
  std::string str(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!first) os << " + ";
      first = false;
      os << c_[i].str();
      if (i == 1) os << "*" << var;
      else if (i > 1) os << "*" << var << "^" << i;
    }
    return os.str();
  }

private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rat> c_;
};

// Monic gcd by the Euclid algorithm over Q; gcd(0,0) = 0.
inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly q, r;
    a.divmod(b, q, r);
    a = std::move(b);
    b = std::move(r);
    if (!b.is_zero()) b = b.monic();
  }
  return a.monic();
}

struct PoleReport {
  int order = 0;
  friend bool operator==(const PoleReport& a, const PoleReport& b) { return a.order == b.order; }
};
using LimitResult = std::variant<Rat, PoleReport>;

// Rational function in one variable, kept canonical: gcd(num, den) = 1 and
// den monic. Equality is therefore representation equality.
class RatFunc {
public:
  RatFunc() : num_(), den_(Rat(1)) {}
  RatFunc(const Rat& c) : num_(c), den_(Rat(1)) {}
  RatFunc(long c) : num_(Rat(c)), den_(Rat(1)) {}
  RatFunc(const Poly& p) : num_(p), den_(Rat(1)) {}
  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { canonicalize(); }

  static RatFunc var() { return RatFunc(Poly::var()); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
    if (b.is_zero()) throw std::domain_error("RatFunc: division by zero");
    return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
  }
  RatFunc operator-() const { return RatFunc(-num_, den_, NoCanon{}); }
  RatFunc& operator+=(const RatFunc& o) { *this = *this + o; return *this; }
  RatFunc& operator-=(const RatFunc& o) { *this = *this - o; return *this; }
  RatFunc& operator*=(const RatFunc& o) { *this = *this * o; return *this; }
  RatFunc& operator/=(const RatFunc& o) { *this = *this / o; return *this; }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

  RatFunc inverse() const {
    if (is_zero()) throw std::domain_error("RatFunc: inverse of zero");
    return RatFunc(den_, num_);
  }

  RatFunc subst_neg() const { return RatFunc(num_.subst_neg(), den_.subst_neg()); }

  std::optional<Rat> eval(const Rat& t) const {
    Rat d = den_.eval(t);
    if (d.is_zero()) return std::nullopt;
    return num_.eval(t) / d;
  }

  // Value at t0 when regular there; otherwise the pole order. Canonical form
  // makes this a syntactic check on the denominator.
  LimitResult limit_at(const Rat& t0) const {
    Rat d = den_.eval(t0);
    if (!d.is_zero()) return num_.eval(t0) / d;
    return PoleReport{den_.root_multiplicity(t0)};
  }

  // Coefficients of the expansion at infinity in powers of x^{-1}, orders
  // 0..order. Requires deg num <= deg den.
  std::vector<Rat> series_at_infinity(int order) const {
    std::vector<Rat> out(order + 1, Rat(0));
    if (is_zero()) return out;
    if (num_.degree() > den_.degree())
      throw std::domain_error("RatFunc: series_at_infinity needs deg num <= deg den");
    int shift = den_.degree() - num_.degree();
    // reversed coefficients: f(1/u) = u^shift * nrev(u) / drev(u), drev(0) != 0
    auto rev = [](const Poly& p) {
      std::vector<Rat> c(p.coeffs().rbegin(), p.coeffs().rend());
      return c;
    };
    std::vector<Rat> nr = rev(num_), dr = rev(den_);
    std::vector<Rat> q(order + 1, Rat(0));  // power series nr/dr
    Rat d0inv = dr[0].inverse();
    for (int k = 0; k <= order; ++k) {
      Rat acc = k < (int)nr.size() ? nr[k] : Rat(0);
      for (int j = 1; j <= k; ++j)
        if (j < (int)dr.size()) acc -= dr[j] * q[k - j];
      q[k] = acc * d0inv;
    }
    for (int k = 0; k + shift <= order; ++k) out[k + shift] = q[k];
    return out;
  }

  std::string str(const std::string& var = "t") const {
    if (den_.is_one()) return num_.str(var);
    return num_.str(var) + " / " + den_.str(var);
  }

private:
  struct NoCanon {};
  RatFunc(Poly n, Poly d, NoCanon) : num_(std::move(n)), den_(std::move(d)) {}
  void canonicalize() {
    if (den_.is_zero()) throw std::domain_error("RatFunc: zero denominator");
    if (num_.is_zero()) { den_ = Poly(Rat(1)); return; }
    Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    Rat l = den_.lead();
    if (l != Rat(1)) {
      Rat li = l.inverse();
      num_ = li * num_;
      den_ = li * den_;
    }
  }
  Poly num_, den_;
};

}  // namespace exyang

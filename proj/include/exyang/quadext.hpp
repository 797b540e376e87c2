#pragma once

#include <stdexcept>
#include <string>

#include "exyang/rat.hpp"

namespace exyang {

// Element a + b*sqrt(s) of a quadratic extension of Q. The radicand s is
// carried per element and is only meaningful when b != 0; pure rationals keep
// s = 0 so that values coming from different contexts mix safely. Mixing two
// genuinely irrational elements with different radicands is an error.
class QuadExt {
public:
  QuadExt() : a_(0), b_(0), s_(0) {}
  QuadExt(int a) : a_(a), b_(0), s_(0) {}
  QuadExt(long a) : a_(a), b_(0), s_(0) {}
  QuadExt(const Rat& a) : a_(a), b_(0), s_(0) {}
  QuadExt(const Rat& a, const Rat& b, const Rat& s) : a_(a), b_(b), s_(s) { normalize(); }

  static QuadExt sqrt_of(const Rat& s) { return QuadExt(Rat(0), Rat(1), s); }

  const Rat& re() const { return a_; }
  const Rat& rad_coeff() const { return b_; }
  const Rat& radicand() const { return s_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }

  friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
    return QuadExt(x.a_ + y.a_, x.b_ + y.b_, joined(x, y));
  }
  friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
    return QuadExt(x.a_ - y.a_, x.b_ - y.b_, joined(x, y));
  }
  QuadExt operator-() const { return QuadExt(-a_, -b_, s_); }
  friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
    Rat s = joined(x, y);
    return QuadExt(x.a_ * y.a_ + x.b_ * y.b_ * s, x.a_ * y.b_ + x.b_ * y.a_, s);
  }
  friend QuadExt operator/(const QuadExt& x, const QuadExt& y) {
    Rat s = joined(x, y);
    Rat nrm = y.a_ * y.a_ - y.b_ * y.b_ * s;
    if (nrm.is_zero()) throw std::domain_error("QuadExt: division by zero");
    Rat inv = nrm.inverse();
    QuadExt conj(y.a_, -y.b_, s);
    QuadExt prod = x * conj;
    return QuadExt(prod.a_ * inv, prod.b_ * inv, s);
  }
  QuadExt& operator+=(const QuadExt& o) { *this = *this + o; return *this; }
  QuadExt& operator-=(const QuadExt& o) { *this = *this - o; return *this; }
  QuadExt& operator*=(const QuadExt& o) { *this = *this * o; return *this; }

  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.s_ == y.s_);
  }
  friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

  std::string str() const {
    if (b_.is_zero()) return a_.str();
    return a_.str() + " + " + b_.str() + "*sqrt(" + s_.str() + ")";
  }

private:
  static Rat joined(const QuadExt& x, const QuadExt& y) {
    if (x.b_.is_zero()) return y.s_;
    if (y.b_.is_zero()) return x.s_;
    if (x.s_ != y.s_) throw std::domain_error("QuadExt: mixed radicands");
    return x.s_;
  }
  void normalize() {
    if (b_.is_zero()) s_ = Rat(0);
  }
  Rat a_, b_, s_;
};

}  // namespace exyang

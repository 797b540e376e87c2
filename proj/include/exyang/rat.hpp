#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace exyang {

// Exact rational scalar over GMP. Canonical form (coprime numerator and
// denominator, denominator > 0, zero is 0/1) is maintained after every
// operation; there is no rounding anywhere.
class Rat {
public:
  Rat() : v_(0) {}
  Rat(int n) : v_(n) {}
  Rat(long n) : v_(n) {}
  Rat(long long n) : v_(static_cast<long>(n)) {}
  Rat(long n, long d) : v_(n, d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  // Text form "p/q"; "/q" omitted when q = 1.
  static Rat parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
      throw std::invalid_argument("Rat::parse: bad rational '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw std::domain_error("Rat::parse: zero denominator");
    return Rat(q);
  }

  std::string str() const { return v_.get_str(); }

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }

  Rat inverse() const {
    if (is_zero()) throw std::domain_error("Rat: division by zero");
    return Rat(mpq_class(1) / v_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::domain_error("Rat: division by zero");
    return Rat(mpq_class(a.v_ / b.v_));
  }
  Rat operator-() const { return Rat(mpq_class(-v_)); }

  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw std::domain_error("Rat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.v_; }

  friend Rat abs(const Rat& r) { return Rat(mpq_class(abs(r.v_))); }

private:
  mpq_class v_;
};

inline Rat half(long k) { return Rat(k, 2); }

inline Rat pow_int(const Rat& base, long e) {
  if (e < 0) return pow_int(base.inverse(), -e);
  Rat acc(1), b = base;
  while (e > 0) {
    if (e & 1) acc *= b;
    b *= b;
    e >>= 1;
  }
  return acc;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// True when r = (p/q)^2 has a rational square root; root returned via out.
inline bool rational_sqrt(const Rat& r, Rat& out) {
  if (r.sign() < 0) return false;
  if (r.is_zero()) { out = Rat(0); return true; }
  mpz_class n = r.num(), d = r.den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (mpz_perfect_square_p(d.get_mpz_t()) == 0) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  out = Rat(mpq_class(sn, sd));
  return true;
}

}  // namespace exyang

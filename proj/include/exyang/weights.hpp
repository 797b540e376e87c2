#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exyang/poly.hpp"
#include "exyang/rat.hpp"

namespace exyang {

enum class Alg { gl, so, sp };

inline std::string alg_name(Alg a) {
  switch (a) {
    case Alg::gl: return "gl";
    case Alg::so: return "so";
    case Alg::sp: return "sp";
  }
  return "?";
}

inline Alg alg_from_name(const std::string& s) {
  if (s == "gl") return Alg::gl;
  if (s == "so") return Alg::so;
  if (s == "sp") return Alg::sp;
  throw std::invalid_argument("unknown algebra '" + s + "'");
}

// A pair of weights (lambda, mu) with m labels each, for gl_m or for
// f_m = sp_2m / so_2m. n is the rank of the target (twisted) Yangian; it
// enters the f-side nu labels through kappa_a = n/2.
struct WeightPair {
  Alg alg = Alg::gl;
  int m = 0;
  int n = 0;
  std::vector<Rat> lambda, mu;

  WeightPair() = default;
  WeightPair(Alg a, int m_, int n_, std::vector<Rat> la, std::vector<Rat> mu_)
      : alg(a), m(m_), n(n_), lambda(std::move(la)), mu(std::move(mu_)) {
    if ((int)lambda.size() != m || (int)mu.size() != m)
      throw std::invalid_argument("WeightPair: label count != m");
    if (alg == Alg::sp && n % 2 != 0)
      throw std::invalid_argument("WeightPair: sp needs even n");
  }

  bool twisted() const { return alg != Alg::gl; }

  Rat rho(int a) const {
    switch (alg) {
      case Alg::gl: return Rat(m, 2) - Rat(a) + Rat(1, 2);
      case Alg::sp: return Rat(-a);
      case Alg::so: return Rat(1 - a);
    }
    return Rat(0);
  }
  Rat kappa() const { return Rat(n, 2); }

  std::vector<Rat> nu() const {
    std::vector<Rat> v(m);
    for (int a = 1; a <= m; ++a) {
      v[a - 1] = lambda[a - 1] - mu[a - 1];
      if (twisted()) v[a - 1] += kappa();
    }
    return v;
  }

  // Integer nu labels; for module constructions they must lie in 1..n-1, for
  // bare operator constructions values up to n are allowed.
  std::vector<int> nu_ints(int max_allowed = -1) const {
    if (max_allowed < 0) max_allowed = n - 1;
    std::vector<int> out(m);
    std::vector<Rat> v = nu();
    for (int a = 0; a < m; ++a) {
      if (!v[a].is_integer())
        throw std::invalid_argument("WeightPair: nu label not an integer");
      long k = v[a].num().get_si();
      if (k < 1 || k > max_allowed)
        throw std::invalid_argument("WeightPair: nu label out of range");
      out[a] = static_cast<int>(k);
    }
    return out;
  }

  std::vector<Rat> lambda_shifted() const {
    std::vector<Rat> v(m);
    for (int a = 1; a <= m; ++a) v[a - 1] = lambda[a - 1] + rho(a);
    return v;
  }
  std::vector<Rat> mu_shifted() const {
    std::vector<Rat> v(m);
    for (int a = 1; a <= m; ++a) v[a - 1] = mu[a - 1] + rho(a);
    return v;
  }
};

// ---------------------------------------------------------------------------
// The hyperoctahedral group H_m = S_m ⋉ Z_2^m. An element first negates the
// labels in `flip`, then moves the label at position a to position perm[a].
// Pure permutations (no flips) form the S_m used for gl weights.
// ---------------------------------------------------------------------------

struct SignedPermutation {
  std::vector<int> perm;       // 0-based, perm[a] = image position of a
  std::vector<char> flip;      // flip[a] != 0: negate label a first

  static SignedPermutation identity(int m) {
    SignedPermutation w;
    w.perm.resize(m);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    w.flip.assign(m, 0);
    return w;
  }
  static SignedPermutation transposition(int m, int c) {  // s_c swaps c, c+1 (1-based c)
    SignedPermutation w = identity(m);
    std::swap(w.perm[c - 1], w.perm[c]);
    return w;
  }
  static SignedPermutation flip_at(int m, int a) {  // s_0-style flip at 1-based a
    SignedPermutation w = identity(m);
    w.flip[a - 1] = 1;
    return w;
  }

  int m() const { return static_cast<int>(perm.size()); }
  bool is_pure() const {
    return std::all_of(flip.begin(), flip.end(), [](char c) { return c == 0; });
  }

  std::vector<Rat> act(const std::vector<Rat>& labels) const {
    std::vector<Rat> out(labels.size());
    for (size_t a = 0; a < labels.size(); ++a)
      out[perm[a]] = flip[a] ? -labels[a] : labels[a];
    return out;
  }

  // this ∘ other: apply other first.
  SignedPermutation compose(const SignedPermutation& other) const {
    SignedPermutation w;
    w.perm.resize(perm.size());
    w.flip.assign(perm.size(), 0);
    for (size_t a = 0; a < perm.size(); ++a) {
      w.perm[a] = perm[other.perm[a]];
      w.flip[a] = static_cast<char>(other.flip[a] ^ flip[other.perm[a]]);
    }
    return w;
  }
};

inline std::vector<SignedPermutation> enumerate_group(int m, bool with_flips) {
  if (m > 6) throw std::invalid_argument("orbit search capped at m <= 6");
  std::vector<SignedPermutation> out;
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  do {
    long nf = with_flips ? (1L << m) : 1;
    for (long mask = 0; mask < nf; ++mask) {
      SignedPermutation w;
      w.perm = p;
      w.flip.resize(m);
      for (int a = 0; a < m; ++a) w.flip[a] = static_cast<char>((mask >> a) & 1);
      out.push_back(std::move(w));
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// w ∘ lambda = w(lambda + rho) - rho, labels given unshifted.
inline std::vector<Rat> shifted_action(const SignedPermutation& w, const std::vector<Rat>& labels,
                                       const std::vector<Rat>& rho) {
  std::vector<Rat> s(labels.size());
  for (size_t a = 0; a < labels.size(); ++a) s[a] = labels[a] + rho[a];
  s = w.act(s);
  for (size_t a = 0; a < labels.size(); ++a) s[a] = s[a] - rho[a];
  return s;
}

inline WeightPair shifted_action(const SignedPermutation& w, const WeightPair& pair) {
  if (pair.alg == Alg::gl && !w.is_pure())
    throw std::invalid_argument("shifted_action: sign flips not allowed for gl weights");
  std::vector<Rat> rho(pair.m);
  for (int a = 1; a <= pair.m; ++a) rho[a - 1] = pair.rho(a);
  WeightPair out = pair;
  out.lambda = shifted_action(w, pair.lambda, rho);
  out.mu = shifted_action(w, pair.mu, rho);
  return out;
}

// ---------------------------------------------------------------------------
// Predicates on weight pairs.
// ---------------------------------------------------------------------------

inline bool is_generic(const WeightPair& p) {
  for (int a = 0; a < p.m; ++a) {
    if (p.twisted() && (p.mu[a] + p.mu[a]).is_integer()) return false;
    for (int b = 0; b < p.m; ++b) {
      if (a == b) continue;
      if ((p.mu[a] - p.mu[b]).is_integer()) return false;
      if (p.twisted() && (p.mu[a] + p.mu[b]).is_integer()) return false;
    }
  }
  return true;
}

// Dominance of a weight given by its already rho-shifted labels.
inline bool is_dominant(const std::vector<Rat>& shifted, Alg alg) {
  auto neg_int = [](const Rat& r) { return r.is_integer() && r.sign() < 0; };
  auto pos_int = [](const Rat& r) { return r.is_integer() && r.sign() > 0; };
  int m = static_cast<int>(shifted.size());
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (neg_int(shifted[a] - shifted[b])) return false;
      if (alg != Alg::gl && pos_int(shifted[a] + shifted[b])) return false;
    }
    if (alg == Alg::sp && pos_int(shifted[a])) return false;
  }
  return true;
}

inline bool is_good(const WeightPair& p) {
  std::vector<int> nu = p.nu_ints(p.n);  // labels up to n tolerated; conditions decide
  std::vector<Rat> ls = p.lambda_shifted();
  if (!is_dominant(ls, p.alg)) return false;
  for (int a = 0; a < p.m; ++a) {
    for (int b = a + 1; b < p.m; ++b) {
      if (ls[a] == ls[b] && nu[a] < nu[b]) return false;
      if (p.twisted() && (ls[a] + ls[b]).is_zero() && nu[a] + nu[b] > p.n) return false;
    }
    if (p.alg == Alg::sp && ls[a].is_zero() && 2 * nu[a] > p.n) return false;
  }
  return true;
}

struct NoGoodPair : std::runtime_error {
  NoGoodPair() : std::runtime_error("no good pair in the orbit") {}
};

// Exhaustive search over S_m (gl) or H_m (f) for a group element sending the
// pair to a good one. The orbit always contains one; failure contradicts that
// and is surfaced as NoGoodPair.
inline SignedPermutation find_good_in_orbit(const WeightPair& p) {
  p.nu_ints();  // validate range 1..n-1
  for (const auto& w : enumerate_group(p.m, p.twisted())) {
    WeightPair q = shifted_action(w, p);
    bool range_ok = true;
    try {
      q.nu_ints();
    } catch (const std::invalid_argument&) {
      range_ok = false;
    }
    if (range_ok && is_good(q)) return w;
  }
  throw NoGoodPair();
}

// Spectral points x_p = mu_a + rho_a + 1/2 + nu_a - i along the segments.
inline std::vector<Rat> spectral_points(const WeightPair& p, int max_nu = -1) {
  std::vector<int> nu = p.nu_ints(max_nu < 0 ? p.n : max_nu);
  std::vector<Rat> out;
  for (int a = 1; a <= p.m; ++a)
    for (int i = 1; i <= nu[a - 1]; ++i)
      out.push_back(p.mu[a - 1] + p.rho(a) + Rat(1, 2) + Rat(nu[a - 1] - i));
  return out;
}

// Drinfeld polynomials P_1..P_{n-1} for a gl pair: P_i = prod_{nu_a = i} (x - mu_a - rho_a).
inline std::vector<Poly> drinfeld_P(const WeightPair& p) {
  if (p.alg != Alg::gl) throw std::invalid_argument("drinfeld_P: gl pair required");
  std::vector<int> nu = p.nu_ints();
  std::vector<Poly> out(p.n - 1, Poly(Rat(1)));
  for (int a = 1; a <= p.m; ++a) {
    Poly lin = Poly::linear(-(p.mu[a - 1] + p.rho(a)), Rat(1));
    out[nu[a - 1] - 1] *= lin;
  }
  return out;
}

// Q_1..Q_l for an f pair, l = floor(n/2):
// Q_i = prod_{nu_a = i} (x + mu_a + rho_a) * prod_{nu_a = n-i} (x - mu_a - rho_a).
inline std::vector<Poly> drinfeld_Q(const WeightPair& p) {
  if (!p.twisted()) throw std::invalid_argument("drinfeld_Q: so/sp pair required");
  std::vector<int> nu = p.nu_ints();
  int l = p.n / 2;
  std::vector<Poly> out(l, Poly(Rat(1)));
  for (int i = 1; i <= l; ++i) {
    for (int a = 1; a <= p.m; ++a) {
      Rat ms = p.mu[a - 1] + p.rho(a);
      if (nu[a - 1] == i) out[i - 1] *= Poly::linear(ms, Rat(1));
      if (nu[a - 1] == p.n - i) out[i - 1] *= Poly::linear(-ms, Rat(1));
    }
  }
  return out;
}

}  // namespace exyang

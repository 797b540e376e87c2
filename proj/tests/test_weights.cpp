#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "exyang/weights.hpp"

using namespace exyang;

namespace {

std::vector<Rat> rats(std::initializer_list<Rat> v) { return std::vector<Rat>(v); }

WeightPair gl_pair(int n, std::vector<Rat> la, std::vector<Rat> mu) {
  int m = static_cast<int>(la.size());
  return WeightPair(Alg::gl, m, n, std::move(la), std::move(mu));
}

WeightPair f_pair(Alg alg, int n, std::vector<Rat> la, std::vector<Rat> mu) {
  int m = static_cast<int>(la.size());
  return WeightPair(alg, m, n, std::move(la), std::move(mu));
}

// pair with prescribed nu and mu
WeightPair pair_from_numu(Alg alg, int n, const std::vector<int>& nu, const std::vector<Rat>& mu) {
  std::vector<Rat> la(mu);
  for (size_t a = 0; a < mu.size(); ++a) {
    la[a] = mu[a] + Rat(nu[a]);
    if (alg != Alg::gl) la[a] -= Rat(n, 2);
  }
  return WeightPair(alg, static_cast<int>(mu.size()), n, la, mu);
}

}  // namespace

TEST_CASE("rho labels per algebra") {
  WeightPair g = gl_pair(3, rats({Rat(0), Rat(0)}), rats({Rat(0), Rat(0)}));
  CHECK(g.rho(1) == Rat(1, 2));
  CHECK(g.rho(2) == Rat(-1, 2));
  WeightPair s = f_pair(Alg::sp, 2, rats({Rat(0)}), rats({Rat(0)}));
  CHECK(s.rho(1) == Rat(-1));
  WeightPair o = f_pair(Alg::so, 3, rats({Rat(0), Rat(0)}), rats({Rat(0), Rat(0)}));
  CHECK(o.rho(1) == Rat(0));
  CHECK(o.rho(2) == Rat(-1));
  CHECK(s.kappa() == Rat(1));
  CHECK_THROWS(f_pair(Alg::sp, 3, rats({Rat(0)}), rats({Rat(0)})));
}

TEST_CASE("shifted action: stated examples") {
  // identity fixes the weight
  WeightPair g = gl_pair(2, rats({Rat(1), Rat(0)}), rats({Rat(0), Rat(-1)}));
  WeightPair gi = shifted_action(SignedPermutation::identity(2), g);
  CHECK(gi.lambda == g.lambda);
  CHECK(gi.mu == g.mu);

  // gl_2, lambda = (1,0), s_1: (3/2,-1/2) -> swapped (-1/2,3/2) -> minus rho
  // gives (-1,2), the classical (la_2 - 1, la_1 + 1)
  WeightPair gs = shifted_action(SignedPermutation::transposition(2, 1), g);
  CHECK(gs.lambda == rats({Rat(-1), Rat(2)}));

  // sp, m=1, flip: lambda+rho = la-1 -> 1-la -> minus rho gives 2-la
  Rat la1(7, 5);
  WeightPair s = f_pair(Alg::sp, 2, rats({la1}), rats({Rat(0)}));
  WeightPair sf = shifted_action(SignedPermutation::flip_at(1, 1), s);
  CHECK(sf.lambda == rats({Rat(2) - la1}));

  // flips are rejected for gl weights
  CHECK_THROWS(shifted_action(SignedPermutation::flip_at(2, 1), g));
}

TEST_CASE("shifted action is a group action") {
  std::mt19937 rng(991);
  std::uniform_int_distribution<long> lab(-6, 6);
  for (int m : {2, 3}) {
    auto group = enumerate_group(m, true);
    std::uniform_int_distribution<size_t> pick(0, group.size() - 1);
    for (int it = 0; it < 50; ++it) {
      std::vector<Rat> la(m), mu(m);
      for (int a = 0; a < m; ++a) {
        la[a] = Rat(lab(rng), 2);
        mu[a] = Rat(lab(rng), 2);
      }
      WeightPair p = f_pair(Alg::sp, 4, la, mu);
      const auto& w1 = group[pick(rng)];
      const auto& w2 = group[pick(rng)];
      WeightPair lhs = shifted_action(w1.compose(w2), p);
      WeightPair rhs = shifted_action(w1, shifted_action(w2, p));
      CHECK(lhs.lambda == rhs.lambda);
      CHECK(lhs.mu == rhs.mu);
    }
  }
}

TEST_CASE("genericity: stated examples") {
  CHECK(is_generic(gl_pair(2, rats({Rat(1), Rat(0)}), rats({Rat(1, 3), Rat(0)}))));
  CHECK(!is_generic(gl_pair(2, rats({Rat(1), Rat(0)}), rats({Rat(1), Rat(0)}))));
  CHECK(!is_generic(f_pair(Alg::sp, 2, rats({Rat(0)}), rats({Rat(1, 2)}))));
  CHECK(is_generic(f_pair(Alg::sp, 2, rats({Rat(0)}), rats({Rat(1, 3)}))));
  // f needs mu_a + mu_b checked as well
  CHECK(!is_generic(f_pair(Alg::so, 3, rats({Rat(0), Rat(0)}), rats({Rat(1, 3), Rat(2, 3)}))));
}

TEST_CASE("dominance on shifted labels: stated examples") {
  CHECK(is_dominant({Rat(0), Rat(0)}, Alg::gl));
  CHECK(!is_dominant({Rat(0), Rat(1)}, Alg::gl));
  CHECK(is_dominant({Rat(1), Rat(0)}, Alg::gl));
  CHECK(is_dominant({Rat(1, 3), Rat(1)}, Alg::gl));  // non-integer difference
  CHECK(!is_dominant({Rat(1)}, Alg::sp));
  CHECK(is_dominant({Rat(1)}, Alg::so));
  CHECK(!is_dominant({Rat(1, 2), Rat(1, 2)}, Alg::so));  // sum = 1
  CHECK(is_dominant({Rat(-1), Rat(-2)}, Alg::sp));
}

TEST_CASE("goodness: stated examples") {
  // gl_2, lambda+rho = (c,c): nu = (2,1) good, nu = (1,2) not
  Rat c(1, 3);
  std::vector<Rat> la{c - Rat(1, 2), c + Rat(1, 2)};
  WeightPair good(Alg::gl, 2, 3, la, {la[0] - Rat(2), la[1] - Rat(1)});
  CHECK(is_good(good));
  WeightPair bad(Alg::gl, 2, 3, la, {la[0] - Rat(1), la[1] - Rat(2)});
  CHECK(!is_good(bad));

  // sp, m=1, lambda_1+rho_1 = 0, n=2, nu_1 = 2: violates 2 nu_1 <= n
  WeightPair sp1 = pair_from_numu(Alg::sp, 2, {2}, {Rat(0)});
  CHECK(sp1.lambda_shifted()[0].is_zero());
  CHECK(!is_good(sp1));

  // so, m=2: shifted labels summing to 0 with nu_1+nu_2 = n is still good
  WeightPair so1(Alg::so, 2, 4, {Rat(1, 5), Rat(4, 5)}, {Rat(1, 5), Rat(4, 5)});
  CHECK((so1.lambda_shifted()[0] + so1.lambda_shifted()[1]).is_zero());
  CHECK(is_dominant(so1.lambda_shifted(), Alg::so));
  CHECK(so1.nu_ints() == std::vector<int>{2, 2});
  CHECK(is_good(so1));
}

TEST_CASE("find_good_in_orbit: stated examples") {
  // already good -> identity
  Rat c(1, 3);
  std::vector<Rat> la{c - Rat(1, 2), c + Rat(1, 2)};
  WeightPair good(Alg::gl, 2, 3, la, {la[0] - Rat(2), la[1] - Rat(1)});
  SignedPermutation w = find_good_in_orbit(good);
  CHECK(w.perm == SignedPermutation::identity(2).perm);
  CHECK(w.is_pure());

  // gl_2 with lambda+rho = (0,1): s_1 sorts to dominant
  WeightPair g(Alg::gl, 2, 3, {Rat(-1, 2), Rat(3, 2)}, {Rat(-3, 2), Rat(1, 2)});
  CHECK(!is_good(g));
  SignedPermutation w2 = find_good_in_orbit(g);
  WeightPair moved = shifted_action(w2, g);
  CHECK(is_good(moved));
  CHECK(w2.perm == std::vector<int>{1, 0});

  // sp m=1 with lambda_1+rho_1 = 2: the flip lands at -2, dominant
  WeightPair s(Alg::sp, 1, 2, {Rat(3)}, {Rat(3)});
  CHECK(s.nu_ints() == std::vector<int>{1});
  CHECK(!is_good(s));
  SignedPermutation w3 = find_good_in_orbit(s);
  CHECK(w3.flip == std::vector<char>{1});
  CHECK(is_good(shifted_action(w3, s)));
}

TEST_CASE("find_good_in_orbit succeeds on 200 randomized small pairs") {
  std::mt19937 rng(992);
  std::uniform_int_distribution<int> mdist(1, 3), algdist(0, 2), den(1, 3), num(-4, 4);
  int runs = 0;
  while (runs < 200) {
    Alg alg = static_cast<Alg>(algdist(rng));
    int n = alg == Alg::sp ? (rng() % 2 ? 2 : 4) : 2 + static_cast<int>(rng() % 3);
    int m = mdist(rng);
    std::vector<int> nu(m);
    for (int a = 0; a < m; ++a) nu[a] = 1 + static_cast<int>(rng() % (n - 1));
    std::vector<Rat> mu(m);
    for (int a = 0; a < m; ++a) mu[a] = Rat(num(rng), den(rng));
    WeightPair p = pair_from_numu(alg, n, nu, mu);
    SignedPermutation w = find_good_in_orbit(p);
    CHECK(is_good(shifted_action(w, p)));
    ++runs;
  }
}

TEST_CASE("orbit search cap") { CHECK_THROWS(enumerate_group(7, false)); }

TEST_CASE("spectral points: stated examples") {
  WeightPair p1 = pair_from_numu(Alg::gl, 2, {1}, {Rat(0)});
  CHECK(spectral_points(p1) == rats({Rat(1, 2)}));

  WeightPair p2 = pair_from_numu(Alg::gl, 3, {2, 1}, {Rat(0), Rat(0)});
  CHECK(spectral_points(p2) == rats({Rat(2), Rat(1), Rat(0)}));

  // within a segment x decreases by exactly 1
  WeightPair p3 = pair_from_numu(Alg::so, 4, {3, 2}, {Rat(1, 3), Rat(1, 7)});
  std::vector<Rat> xs = spectral_points(p3);
  CHECK(xs[0] - xs[1] == Rat(1));
  CHECK(xs[1] - xs[2] == Rat(1));
  CHECK(xs[3] - xs[4] == Rat(1));
}

TEST_CASE("Drinfeld polynomials for gl: examples, degrees, orbit invariance") {
  WeightPair trivial(Alg::gl, 0, 3, {}, {});
  auto pt = drinfeld_P(trivial);
  REQUIRE(pt.size() == 2);
  for (const auto& poly : pt) CHECK(poly.is_one());

  WeightPair p = pair_from_numu(Alg::gl, 3, {1, 2}, {Rat(0), Rat(0)});
  auto pp = drinfeld_P(p);
  CHECK(pp[0] == Poly::linear(Rat(-1, 2), Rat(1)));
  CHECK(pp[1] == Poly::linear(Rat(1, 2), Rat(1)));

  // total degree = m; invariance under the simultaneous shifted action
  std::mt19937 rng(993);
  for (int it = 0; it < 50; ++it) {
    std::uniform_int_distribution<long> num(-4, 4);
    std::vector<int> nu{1 + (int)(rng() % 2), 1 + (int)(rng() % 2), 1 + (int)(rng() % 2)};
    std::vector<Rat> mu{Rat(num(rng), 3), Rat(num(rng), 3), Rat(num(rng), 3)};
    WeightPair q = pair_from_numu(Alg::gl, 3, nu, mu);
    auto base = drinfeld_P(q);
    int deg = 0;
    for (const auto& poly : base) deg += std::max(poly.degree(), 0);
    CHECK(deg == 3);
    auto group = enumerate_group(3, false);
    const auto& w = group[rng() % group.size()];
    auto moved = drinfeld_P(shifted_action(w, q));
    CHECK(moved == base);
  }
}

TEST_CASE("Drinfeld polynomials for f: examples, evenness, orbit invariance") {
  WeightPair trivial(Alg::sp, 0, 4, {}, {});
  auto qt = drinfeld_Q(trivial);
  REQUIRE(qt.size() == 2);
  for (const auto& poly : qt) CHECK(poly.is_one());

  // sp n=2, m=1, mu_1 = c, nu_1 = 1, rho_1 = -1: Q_1 = x^2 - (c-1)^2
  Rat c(2, 5);
  WeightPair p = pair_from_numu(Alg::sp, 2, {1}, {c});
  auto qq = drinfeld_Q(p);
  REQUIRE(qq.size() == 1);
  Poly expect = Poly::linear(c - Rat(1), Rat(1)) * Poly::linear(Rat(1) - c, Rat(1));
  CHECK(qq[0] == expect);
  CHECK(qq[0].coeff(1).is_zero());  // even

  // invariance under the H_m shifted action. Labels nu_a = n/2 land in both
  // products of Q_{n/2}, so the total degree is m plus their count.
  std::mt19937 rng(994);
  for (int it = 0; it < 50; ++it) {
    std::uniform_int_distribution<long> num(-4, 4);
    Alg alg = it % 2 ? Alg::so : Alg::sp;
    int n = 4;
    std::vector<int> nu{1 + (int)(rng() % 3), 1 + (int)(rng() % 3)};
    std::vector<Rat> mu{Rat(num(rng), 3), Rat(num(rng), 5)};
    WeightPair q = pair_from_numu(alg, n, nu, mu);
    auto base = drinfeld_Q(q);
    int deg = 0;
    for (const auto& poly : base) deg += std::max(poly.degree(), 0);
    int selfpaired = 0;
    for (int v : nu)
      if (2 * v == n) ++selfpaired;
    CHECK(deg == 2 + selfpaired);
    auto group = enumerate_group(2, true);
    const auto& w = group[rng() % group.size()];
    auto moved = drinfeld_Q(shifted_action(w, q));
    CHECK(moved == base);
  }
}

TEST_CASE("sign flip transforms labels as mu_a+rho_a -> -(mu_a+rho_a), nu_a -> n-nu_a") {
  WeightPair p = pair_from_numu(Alg::so, 4, {3, 1}, {Rat(1, 3), Rat(2, 7)});
  WeightPair f = shifted_action(SignedPermutation::flip_at(2, 1), p);
  CHECK(f.mu_shifted()[0] == -p.mu_shifted()[0]);
  CHECK(f.nu_ints()[0] == 4 - p.nu_ints()[0]);
  CHECK(f.mu_shifted()[1] == p.mu_shifted()[1]);
  CHECK(f.nu_ints()[1] == p.nu_ints()[1]);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "exyang/linalg.hpp"
#include "exyang/poly.hpp"
#include "exyang/rat.hpp"

using namespace exyang;

namespace {

DenseMat<Rat> from_rows(const std::vector<std::vector<long>>& rows) {
  DenseMat<Rat> m(static_cast<long>(rows.size()), static_cast<long>(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = Rat(rows[i][j]);
  return m;
}

Rat rand_rat(std::mt19937& rng, int num_bound = 9, int den_bound = 5) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long> den(1, den_bound);
  return Rat(num(rng), den(rng));
}

}  // namespace

TEST_CASE("Rat canonical form and text round trip") {
  CHECK(Rat(2, 4) == Rat(1, 2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(0, 7).str() == "0");
  CHECK(Rat(3, 1).str() == "3");
  CHECK(Rat(-7, 3).str() == "-7/3");
  CHECK(Rat::parse("-7/3") == Rat(-7, 3));
  CHECK(Rat::parse("5") == Rat(5));
  CHECK_THROWS(Rat(1, 0));
  CHECK(Rat(1, 3) + Rat(1, 6) == Rat(1, 2));
  CHECK(Rat(1, 3) * Rat(3, 5) == Rat(1, 5));
}

TEST_CASE("Rat field axioms on random samples") {
  std::mt19937 rng(20270101);
  for (int it = 0; it < 200; ++it) {
    Rat a = rand_rat(rng), b = rand_rat(rng), c = rand_rat(rng);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK(a * a.inverse() == Rat(1));
  }
}

TEST_CASE("rank on the stated examples") {
  CHECK(rank_of(from_rows({{1, 1}, {1, 1}})) == 1);
  CHECK(rank_of(DenseMat<Rat>::identity(5)) == 5);
  CHECK(rank_of(DenseMat<Rat>(3, 4)) == 0);
}

TEST_CASE("kernel basis: stated examples and the factored-rank oracle") {
  DenseMat<Rat> m = from_rows({{1, 1}, {1, 1}});
  auto k = kernel_basis(m);
  REQUIRE(k.size() == 1);
  // span{(1, -1)}
  CHECK(k[0][0] == -k[0][1]);
  CHECK(!k[0][0].is_zero());

  CHECK(kernel_basis(DenseMat<Rat>::identity(4)).empty());

  // random 6x6 rank-4 matrix as a product of full-rank 6x4 and 4x6 factors
  std::mt19937 rng(771);
  DenseMat<Rat> a(6, 4), b(4, 6);
  do {
    for (long i = 0; i < 6; ++i)
      for (long j = 0; j < 4; ++j) a.at(i, j) = rand_rat(rng);
  } while (rank_of(a) != 4);
  do {
    for (long i = 0; i < 4; ++i)
      for (long j = 0; j < 6; ++j) b.at(i, j) = rand_rat(rng);
  } while (rank_of(b) != 4);
  DenseMat<Rat> prod = a * b;
  REQUIRE(rank_of(prod) == 4);
  auto kb = kernel_basis(prod);
  REQUIRE(kb.size() == 2);
  for (const auto& v : kb) {
    std::vector<Rat> mv = prod.apply(v);
    for (const Rat& x : mv) CHECK(x.is_zero());
  }
}

TEST_CASE("image basis: stated examples, membership via solve") {
  auto im = image_basis(DenseMat<Rat>::identity(3));
  REQUIRE(im.size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(im[i][j] == (i == j ? Rat(1) : Rat(0)));

  DenseMat<Rat> m = from_rows({{1, 1}, {1, 1}});
  auto im2 = image_basis(m);
  REQUIRE(im2.size() == 1);
  CHECK(im2[0][0] == im2[0][1]);

  std::mt19937 rng(772);
  DenseMat<Rat> r(5, 7);
  for (long i = 0; i < 5; ++i)
    for (long j = 0; j < 7; ++j) r.at(i, j) = rand_rat(rng);
  for (const auto& v : image_basis(r)) {
    auto x = solve(r, v);
    REQUIRE(x.has_value());
    std::vector<Rat> rx = r.apply(*x);
    CHECK(rx == v);
  }
}

TEST_CASE("solve: stated examples") {
  DenseMat<Rat> id = DenseMat<Rat>::identity(3);
  std::vector<Rat> b{Rat(2), Rat(-1), Rat(1, 3)};
  auto x = solve(id, b);
  REQUIRE(x.has_value());
  CHECK(*x == b);

  DenseMat<Rat> m = from_rows({{1, 1}, {1, 1}});
  CHECK(!solve(m, {Rat(1), Rat(0)}).has_value());

  auto y = solve(m, {Rat(2), Rat(2)});
  REQUIRE(y.has_value());
  CHECK((*y)[0] + (*y)[1] == Rat(2));
}

TEST_CASE("rank(M) = rank(M^T) and rank-nullity on random sparse matrices") {
  std::mt19937 rng(773);
  std::uniform_int_distribution<int> dim(1, 8);
  for (int it = 0; it < 40; ++it) {
    long r = dim(rng), c = dim(rng);
    SpMat<Rat> m(r, c);
    std::uniform_int_distribution<int> coin(0, 2);
    for (long j = 0; j < c; ++j)
      for (long i = 0; i < r; ++i)
        if (coin(rng) == 0) m.set(i, j, rand_rat(rng));
    long rk = rank_of(m);
    CHECK(rk == rank_of(m.transpose()));
    CHECK(rk + static_cast<long>(kernel_basis(m).size()) == c);
    CHECK(static_cast<long>(image_basis(m).size()) == rk);
  }
}

TEST_CASE("Bareiss rank agrees with field elimination") {
  std::mt19937 rng(774);
  std::uniform_int_distribution<int> dim(1, 7);
  for (int it = 0; it < 40; ++it) {
    long r = dim(rng), c = dim(rng);
    DenseMat<Rat> m(r, c);
    std::uniform_int_distribution<int> coin(0, 1);
    for (long i = 0; i < r; ++i)
      for (long j = 0; j < c; ++j)
        if (coin(rng)) m.at(i, j) = rand_rat(rng);
    DenseMat<Rat> w = m;
    CHECK(bareiss_rank(m) == static_cast<long>(rref(w).size()));
  }
}

TEST_CASE("Poly arithmetic, gcd, text form") {
  Poly t = Poly::var();
  Poly p = t * t - Poly(Rat(1));           // t^2 - 1
  Poly q = t - Poly(Rat(1));
  CHECK(poly_gcd(p, q) == q.monic());
  CHECK(p / q == t + Poly(Rat(1)));
  CHECK(p.eval(Rat(3)) == Rat(8));
  CHECK(p.str() == "-1 + 1*t^2");
  CHECK(Poly().str() == "0");
  Poly one{Rat(1)};
  CHECK((t * t).root_multiplicity(Rat(0)) == 2);
}

TEST_CASE("RatFunc canonical form makes equality syntactic") {
  Poly t = Poly::var();
  RatFunc f(t * t, t);  // t^2 / t -> t
  CHECK(f == RatFunc(t));
  RatFunc g(t - Poly(Rat(1)), t * t - Poly(Rat(1)));  // -> 1/(t+1)
  CHECK(g == RatFunc(Poly(Rat(1)), t + Poly(Rat(1))));
  // denominator monic
  RatFunc h(Poly(Rat(1)), Rat(2) * t);
  CHECK(h.den().lead() == Rat(1));
  CHECK(h.str() == "1/2 / 1*t");
}

TEST_CASE("limit_at: value, pole order, cancelled singularities") {
  Poly t = Poly::var();
  RatFunc f(t * t, t);  // canonical t
  CHECK(std::get<Rat>(f.limit_at(Rat(0))) == Rat(0));

  RatFunc g(Poly(Rat(1)), t);
  auto pole = f;
  CHECK(std::get<PoleReport>(g.limit_at(Rat(0))).order == 1);

  RatFunc h(t - Poly(Rat(1)), t * t - Poly(Rat(1)));
  CHECK(std::get<Rat>(h.limit_at(Rat(1))) == Rat(1, 2));

  RatFunc dbl(Poly(Rat(3)), t * t);
  CHECK(std::get<PoleReport>(dbl.limit_at(Rat(0))).order == 2);
}

TEST_CASE("RatFunc is a field: (f*g)/g = f exactly, random property sweep") {
  std::mt19937 rng(775);
  auto rand_poly = [&](int maxdeg) {
    std::uniform_int_distribution<int> d(0, maxdeg);
    int deg = d(rng);
    std::vector<Rat> c(deg + 1);
    for (auto& x : c) x = rand_rat(rng, 5, 3);
    return Poly(std::move(c));
  };
  for (int it = 0; it < 60; ++it) {
    Poly pn = rand_poly(3), pd = rand_poly(2), qn = rand_poly(3), qd = rand_poly(2);
    if (pd.is_zero() || qd.is_zero() || qn.is_zero()) continue;
    RatFunc f(pn, pd), g(qn, qd);
    CHECK((f * g) / g == f);
    CHECK(f - f == RatFunc());
    if (!f.is_zero()) CHECK(f / f == RatFunc(Rat(1)));
  }
}

TEST_CASE("limit_at is additive at shared regular points") {
  std::mt19937 rng(776);
  Poly t = Poly::var();
  for (int it = 0; it < 40; ++it) {
    Rat a = rand_rat(rng), b = rand_rat(rng);
    RatFunc f(Poly(Rat(1)), t - Poly(a));
    RatFunc g(t, t - Poly(b));
    Rat t0 = rand_rat(rng);
    if (t0 == a || t0 == b) continue;
    auto lf = f.limit_at(t0), lg = g.limit_at(t0), ls = (f + g).limit_at(t0);
    CHECK(std::get<Rat>(ls) == std::get<Rat>(lf) + std::get<Rat>(lg));
  }
}

TEST_CASE("series expansion at infinity") {
  Poly t = Poly::var();
  // 1/(x - c) = x^{-1} + c x^{-2} + c^2 x^{-3} + ...
  Rat c(3, 2);
  RatFunc f(Poly(Rat(1)), t - Poly(c));
  auto s = f.series_at_infinity(4);
  CHECK(s[0] == Rat(0));
  CHECK(s[1] == Rat(1));
  CHECK(s[2] == c);
  CHECK(s[3] == c * c);
  CHECK(s[4] == c * c * c);
}

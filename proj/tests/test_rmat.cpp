#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "exyang/rmat.hpp"

using namespace exyang;

TEST_CASE("R(1) = 1 - P") {
  for (int n : {2, 3}) {
    TensorSpace sp(n, 2);
    SpMat<Rat> r = r_matrix(RKind::plain, sp, 1, 2, Rat(1));
    CHECK(r == SpMat<Rat>::identity(sp.dim()) - op_P(sp, 1, 2));
  }
}

TEST_CASE("Rbar(x) Rbar(n-x) = 1 at sampled points") {
  std::mt19937 rng(551);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 9);
  for (int n : {2, 3, 4}) {
    TensorSpace sp(n, 2);
    int done = 0;
    while (done < 5) {
      Rat x(num(rng), den(rng));
      if (x.is_zero() || x == Rat(n)) continue;
      SpMat<Rat> a = r_matrix(RKind::bar, sp, 1, 2, x);
      SpMat<Rat> b = r_matrix(RKind::bar, sp, 1, 2, Rat(n) - x);
      CHECK(a * b == SpMat<Rat>::identity(sp.dim()));
      ++done;
    }
  }
}

TEST_CASE("plain R at n=2, x=2: explicit entries of 1 - P/2") {
  TensorSpace sp(2, 2);
  SpMat<Rat> r = r_matrix(RKind::plain, sp, 1, 2, Rat(2));
  DenseMat<Rat> d = to_dense(r);
  // basis order (1,1), (1,2), (2,1), (2,2)
  DenseMat<Rat> expect(4, 4);
  expect.at(0, 0) = Rat(1, 2);
  expect.at(1, 1) = Rat(1);
  expect.at(2, 2) = Rat(1);
  expect.at(1, 2) = Rat(-1, 2);
  expect.at(2, 1) = Rat(-1, 2);
  expect.at(3, 3) = Rat(1, 2);
  CHECK(d == expect);
}

TEST_CASE("constructing R(0) is a pole error, never an infinity") {
  TensorSpace sp(2, 2);
  CHECK_THROWS_AS(r_matrix(RKind::plain, sp, 1, 2, Rat(0)), PoleError);
  CHECK_THROWS_AS(r_factor(RKind::bar, 1, 2, RatFunc()), PoleError);
}

TEST_CASE("numeric YBE checks: stated examples") {
  CHECK(check_ybe_variant(YbeVariant::ybe, 2, nullptr, Rat(2), Rat(3)));
  FormChoice sp2 = FormChoice::sp(2);
  CHECK(check_ybe_variant(YbeVariant::cybe, 2, &sp2, Rat(5), Rat(7, 2)));

  // altering the middle factor argument to x+y+1 breaks the identity
  TensorSpace tsp(2, 3);
  Rat x(2), y(3);
  std::vector<LinFactor<Rat>> lhs{r_factor(RKind::plain, 1, 2, x),
                                  r_factor(RKind::plain, 1, 3, x + y + Rat(1)),
                                  r_factor(RKind::plain, 2, 3, y)};
  std::vector<LinFactor<Rat>> rhs{r_factor(RKind::plain, 2, 3, y),
                                  r_factor(RKind::plain, 1, 3, x + y + Rat(1)),
                                  r_factor(RKind::plain, 1, 2, x)};
  CHECK(!(product_to_matrix(tsp, nullptr, lhs) == product_to_matrix(tsp, nullptr, rhs)));
}

TEST_CASE("numeric fast path: all variants at 5 random rational points") {
  std::mt19937 rng(552);
  std::uniform_int_distribution<long> num(1, 99), den(1, 99);
  for (int n : {2, 3}) {
    FormChoice so = FormChoice::so(n);
    std::optional<FormChoice> sp;
    if (n % 2 == 0) sp = FormChoice::sp(n);
    for (int it = 0; it < 5; ++it) {
      Rat x(num(rng), den(rng)), y(num(rng) + 100, den(rng));
      CHECK(check_ybe_variant(YbeVariant::ybe, n, nullptr, x, y));
      CHECK(check_ybe_variant(YbeVariant::tybe, n, nullptr, x, y));
      for (const FormChoice* f : {&so, sp ? &*sp : nullptr}) {
        if (!f) continue;
        CHECK(check_ybe_variant(YbeVariant::cybe, n, f, x, y));
        CHECK(check_ybe_variant(YbeVariant::hybe, n, f, x, y));
        CHECK(check_ybe_variant(YbeVariant::bybe, n, f, x, y));
      }
    }
  }
}

TEST_CASE("symbolic YBE: all five variants over RatFunc for n = 2") {
  FormChoice so = FormChoice::so(2), sp = FormChoice::sp(2);
  CHECK(check_ybe_symbolic(YbeVariant::ybe, 2, nullptr));
  CHECK(check_ybe_symbolic(YbeVariant::tybe, 2, nullptr));
  for (const FormChoice* f : {&so, &sp}) {
    CHECK(check_ybe_symbolic(YbeVariant::cybe, 2, f));
    CHECK(check_ybe_symbolic(YbeVariant::hybe, 2, f));
    CHECK(check_ybe_symbolic(YbeVariant::bybe, 2, f));
  }
}

TEST_CASE("degenerations: stated examples and the symbolic form") {
  CHECK(check_degeneration(Degeneration::nopole, 3, nullptr, Rat(4)));
  FormChoice so2 = FormChoice::so(2);
  CHECK(check_degeneration(Degeneration::nopolet, 2, &so2, Rat(3)));
  // symbolic: equality of rational-function matrices, hence both sides
  // regular wherever the right side is, in particular at x = -1
  CHECK(check_degeneration_symbolic(Degeneration::nopole, 2, nullptr));
  CHECK(check_degeneration_symbolic(Degeneration::nopole, 3, nullptr));
  FormChoice sp2 = FormChoice::sp(2), so3 = FormChoice::so(3);
  CHECK(check_degeneration_symbolic(Degeneration::nopolet, 2, &sp2));
  CHECK(check_degeneration_symbolic(Degeneration::nopolet, 3, &so3));
}

TEST_CASE("family relations: slot-1 transpose and form conjugation") {
  std::mt19937 rng(553);
  std::uniform_int_distribution<long> num(1, 30), den(1, 7);
  for (int n : {2, 3, 4}) {
    TensorSpace tsp(n, 2);
    FormChoice so = FormChoice::so(n);
    std::optional<FormChoice> spf;
    if (n % 2 == 0) spf = FormChoice::sp(n);
    for (int it = 0; it < 3; ++it) {
      Rat x(num(rng), den(rng));
      SpMat<Rat> r = r_matrix(RKind::plain, tsp, 1, 2, x);
      SpMat<Rat> rb = r_matrix(RKind::bar, tsp, 1, 2, x);
      CHECK(slot1_transpose(r, n) == rb);
      for (const FormChoice* f : {&so, spf ? &*spf : nullptr}) {
        if (!f) continue;
        SpMat<Rat> rt = r_matrix(RKind::tilde, tsp, 1, 2, x, f);
        SpMat<Rat> rh = r_matrix(RKind::hat, tsp, 1, 2, x, f);
        CHECK(slot1_conjugate(r, *f) == rt);
        CHECK(slot1_conjugate(rb, *f) == rh);
      }
    }
  }
}

TEST_CASE("P R P = R for plain, bar and tilde") {
  for (int n : {2, 3}) {
    TensorSpace tsp(n, 2);
    SpMat<Rat> p = op_P(tsp, 1, 2);
    Rat x(7, 3);
    FormChoice so = FormChoice::so(n);
    for (SpMat<Rat> r : {r_matrix(RKind::plain, tsp, 1, 2, x),
                         r_matrix(RKind::bar, tsp, 1, 2, x),
                         r_matrix(RKind::tilde, tsp, 1, 2, x, &so)}) {
      CHECK(p * r * p == r);
    }
  }
}

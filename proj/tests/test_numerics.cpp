#include "doctest.h"

#include <random>

#include "core/numerics.hpp"

using namespace pnc;

namespace {

std::mt19937_64 rng(0x5eed);

cplx rand_c() {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

// Random hermitian positive definite matrix A = B B^H + eps I.
CMat2 rand_hpd() {
  const CMat2 b{rand_c(), rand_c(), rand_c(), rand_c()};
  return b.mul(b.adjoint()) + CMat2::identity() * 0.1;
}

double max_abs_diff(const CMat2& a, const CMat2& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("cmat2 algebra basics") {
  const CMat2 i = CMat2::identity();
  CHECK(max_abs_diff(i.mul(i), i) == 0.0);
  const CMat2 a{cplx(1, 2), cplx(0, -1), cplx(3, 0), cplx(2, 2)};
  const CMat2 ah = a.adjoint();
  CHECK(ah.a01 == std::conj(a.a10));
  CHECK(ah.a10 == std::conj(a.a01));
  CHECK(a.det() == a.a00 * a.a11 - a.a01 * a.a10);
}

TEST_CASE("cmat2 inverse round trip") {
  for (int t = 0; t < 100; ++t) {
    const CMat2 a = rand_hpd();
    const CMat2 inv = cmat2_inverse(a);
    CHECK(max_abs_diff(a.mul(inv), CMat2::identity()) < 1e-10 * a.max_abs());
  }
}

TEST_CASE("hermitian solve: identity and diagonal") {
  const cplx b1[2] = {cplx(2, 0), cplx(0, 3)};
  cplx x[2];
  cmat2_hermitian_solve(CMat2::identity(), b1, x);
  CHECK(std::abs(x[0] - cplx(2, 0)) < 1e-14);
  CHECK(std::abs(x[1] - cplx(0, 3)) < 1e-14);
  const cplx b2[2] = {2.0, 4.0};
  cmat2_hermitian_solve(CMat2::diag(2.0, 4.0), b2, x);
  CHECK(std::abs(x[0] - 1.0) < 1e-14);
  CHECK(std::abs(x[1] - 1.0) < 1e-14);
}

TEST_CASE("hermitian solve residual bound over random instances") {
  for (int t = 0; t < 10000; ++t) {
    const CMat2 a = rand_hpd();
    const cplx b[2] = {rand_c(), rand_c()};
    cplx x[2];
    cmat2_hermitian_solve(a, b, x);
    const cplx r0 = a.a00 * x[0] + a.a01 * x[1] - b[0];
    const cplx r1 = a.a10 * x[0] + a.a11 * x[1] - b[1];
    const double scale = std::max({std::abs(b[0]), std::abs(b[1]), 1.0});
    CHECK(std::abs(r0) / scale < kSolveResidualTol);
    CHECK(std::abs(r1) / scale < kSolveResidualTol);
  }
}

TEST_CASE("singular system raises") {
  const CMat2 s{1.0, 1.0, 1.0, 1.0};  // rank 1
  const cplx b[2] = {1.0, 0.0};
  cplx x[2];
  CHECK_THROWS_AS(cmat2_hermitian_solve(s, b, x), numerics_error);
  CHECK_THROWS_AS(cmat2_inverse(CMat2::zero()), numerics_error);
}

TEST_CASE("psd and hermitian predicates") {
  CHECK(CMat2::identity().is_psd());
  CHECK(CMat2::zero().is_psd());
  const CMat2 rank1{1.0, 1.0, 1.0, 1.0};
  CHECK(rank1.is_psd());
  const CMat2 neg{-1.0, 0.0, 0.0, 1.0};
  CHECK_FALSE(neg.is_psd());
  const CMat2 nonherm{1.0, cplx(0, 1), cplx(0, 1), 1.0};
  CHECK_FALSE(nonherm.is_hermitian());
}

TEST_CASE("belief moment round trip dim 2") {
  for (int t = 0; t < 1000; ++t) {
    const cplx m[2] = {rand_c(), rand_c()};
    const CMat2 k = rand_hpd();
    const GaussianBelief b = GaussianBelief::from_moments2(m, k);
    CHECK(b.proper());
    cplx m2[2];
    CMat2 k2;
    b.to_moments(m2, k2);
    const double scale = std::max(k.max_abs(), 1.0);
    CHECK(std::abs(m2[0] - m[0]) < 1e-9 * scale);
    CHECK(std::abs(m2[1] - m[1]) < 1e-9 * scale);
    CHECK(max_abs_diff(k2, k) < 1e-9 * scale);
  }
}

TEST_CASE("belief moment round trip dim 1") {
  const GaussianBelief b = GaussianBelief::from_moments1(cplx(1, -2), 0.5);
  cplx m[2];
  CMat2 k;
  b.to_moments(m, k);
  CHECK(std::abs(m[0] - cplx(1, -2)) < kMomentRoundTripTol * 10);
  CHECK(std::abs(k.a00 - 0.5) < kMomentRoundTripTol * 10);
}

TEST_CASE("product adds information") {
  const cplx xi1[2] = {rand_c(), rand_c()};
  const cplx xi2[2] = {rand_c(), rand_c()};
  const CMat2 w1 = rand_hpd(), w2 = rand_hpd();
  const GaussianBelief p = GaussianBelief::canonical2(xi1, w1).product(
      GaussianBelief::canonical2(xi2, w2));
  CHECK(max_abs_diff(p.W(), w1 + w2) < 1e-14 * (w1 + w2).max_abs());
  CHECK(std::abs(p.xi()[0] - (xi1[0] + xi2[0])) < 1e-14);
  CHECK(std::abs(p.xi()[1] - (xi1[1] + xi2[1])) < 1e-14);
}

TEST_CASE("product associativity on random triples") {
  for (int t = 0; t < 200; ++t) {
    const cplx xa[2] = {rand_c(), rand_c()};
    const cplx xb[2] = {rand_c(), rand_c()};
    const cplx xc[2] = {rand_c(), rand_c()};
    const GaussianBelief a = GaussianBelief::canonical2(xa, rand_hpd());
    const GaussianBelief b = GaussianBelief::canonical2(xb, rand_hpd());
    const GaussianBelief c = GaussianBelief::canonical2(xc, rand_hpd());
    const GaussianBelief l = a.product(b).product(c);
    const GaussianBelief r = a.product(b.product(c));
    CHECK(max_abs_diff(l.W(), r.W()) < 1e-10 * l.W().max_abs());
    CHECK(std::abs(l.xi()[0] - r.xi()[0]) < 1e-10);
    CHECK(std::abs(l.xi()[1] - r.xi()[1]) < 1e-10);
  }
}

TEST_CASE("flat belief is the product identity") {
  const cplx xi[2] = {rand_c(), rand_c()};
  const CMat2 w = rand_hpd();
  const GaussianBelief b = GaussianBelief::canonical2(xi, w);
  const GaussianBelief p = b.product(GaussianBelief::flat(2));
  CHECK(max_abs_diff(p.W(), w) == 0.0);
  CHECK(p.xi()[0] == xi[0]);
  CHECK_FALSE(GaussianBelief::flat(2).proper());
  CHECK_THROWS(b.product(GaussianBelief::flat(1)));
}

TEST_CASE("mean of a proper belief solves W m = xi") {
  for (int t = 0; t < 100; ++t) {
    const cplx xi[2] = {rand_c(), rand_c()};
    const CMat2 w = rand_hpd();
    const GaussianBelief b = GaussianBelief::canonical2(xi, w);
    cplx m[2];
    b.mean(m);
    CHECK(std::abs(w.a00 * m[0] + w.a01 * m[1] - xi[0]) < 1e-9);
    CHECK(std::abs(w.a10 * m[0] + w.a11 * m[1] - xi[1]) < 1e-9);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "anv/gamma_factors.hpp"
#include "anv/rng.hpp"

using namespace anv;
using Catch::Approx;

namespace {
double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("gamma_R values and poles") {
  CHECK(rel(gamma_R(cplx(1.0, 0.0)), cplx(1.0, 0.0)) < 1e-14);
  CHECK(rel(gamma_R(cplx(2.0, 0.0)), cplx(1.0 / kPi, 0.0)) < 1e-14);
  CHECK(rel(gamma_R(cplx(0.5, 0.0)), cplx(2.7232882163306710261, 0.0)) < 1e-13);
  CHECK(rel(gamma_R(cplx(1.0, 2.0)),
            cplx(-0.14821282845990343174, -0.2535738468651088119)) < 1e-13);
  CHECK_THROWS_AS(gamma_R(cplx(0.0, 0.0)), PoleError);
  CHECK_THROWS_AS(gamma_R(cplx(-2.0, 0.0)), PoleError);
  CHECK_THROWS_AS(gamma_R(cplx(-6.0, 0.0)), PoleError);
}

TEST_CASE("gamma_R residues") {
  CHECK(rel(gamma_R_residue(0), cplx(2.0, 0.0)) < 1e-15);
  CHECK(rel(gamma_R_residue(1), cplx(-2.0 * kPi, 0.0)) < 1e-15);
  CHECK(rel(gamma_R_residue(2), cplx(kPi * kPi, 0.0)) < 1e-15);
}

TEST_CASE("gamma_R functional equation with shift") {
  // Gamma_R(s) Gamma_R(-s) = (-1)^{m-1} (2 pi / s) Gamma_R(s+2m) Gamma_R(2-s-2m)
  for (int m : {1, 2, 3}) {
    for (int i = 0; i < 12; ++i) {
      cplx s(0.3 + 0.11 * i, -1.7 + 0.31 * i);
      cplx lhs = gamma_R(s) * gamma_R(-s);
      cplx rhs = (m % 2 == 1 ? 1.0 : -1.0) * (2.0 * kPi / s) * gamma_R(s + 2.0 * m) *
                 gamma_R(2.0 - s - 2.0 * m);
      CHECK(rel(lhs, rhs) < 1e-9);
    }
  }
}

TEST_CASE("c_func") {
  CHECK(rel(c_func(0.37, LanglandsParams{{cplx(0.2, 5.0)}}), cplx(1.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(c_func(0.0, LanglandsParams{{cplx(0.4, 1.0), cplx(0.4, 1.0)}}), PoleError);
  cplx got = c_func(1.0, LanglandsParams{{cplx(0, 1), cplx(0, -1)}});
  CHECK(rel(got, gamma_R(cplx(1.0, 2.0))) < 1e-14);
}

TEST_CASE("L_reg classification and values") {
  LanglandsParams nu{{cplx(1, 0), cplx(3, 0)}};
  LanglandsParams nup{{cplx(0.5, 0)}};
  CHECK(rel(L_reg(nu, nup), cplx(0.59017029950804811302, 0.0)) < 1e-13);

  LanglandsParams nu2{{cplx(0, 0), cplx(2, 0)}};
  CHECK(rel(L_reg(nu2, LanglandsParams{{cplx(0, 0)}}), cplx(2.0 / kPi, 0.0)) < 1e-13);

  LanglandsParams nu3{{cplx(-2, 0), cplx(1, 0)}};
  CHECK(rel(L_reg(nu3, LanglandsParams{{cplx(0, 0)}}), cplx(-2.0 * kPi, 0.0)) < 1e-13);

  CHECK_THROWS_AS(L_reg(nup, nu), PreconditionError);

  RegularizedLSplit split = classify_differences(nu2, LanglandsParams{{cplx(0, 0)}});
  CHECK(split.poles.size() == 1);
  CHECK(split.regular.size() == 1);
}

TEST_CASE("analytic conductor") {
  CHECK(analytic_conductor(LanglandsParams{{cplx(0, 0)}}) == Approx(1.0));
  CHECK(analytic_conductor(LanglandsParams{{cplx(0, 3), cplx(0, -3)}}) == Approx(16.0));
  double r = std::abs(cplx(0.1, 5.0));
  CHECK(analytic_conductor(LanglandsParams{{cplx(0.1, 5), cplx(-0.1, -5)}}) ==
        Approx((1.0 + r) * (1.0 + r)));
  // permutation and conjugate-negation invariance
  LanglandsParams a{{cplx(0, 2), cplx(0, -7), cplx(0, 0.5)}};
  LanglandsParams b{{cplx(0, -7), cplx(0, 0.5), cplx(0, 2)}};
  CHECK(analytic_conductor(a) == Approx(analytic_conductor(b)));
  LanglandsParams c{{cplx(0, -2), cplx(0, 7), cplx(0, -0.5)}};
  CHECK(analytic_conductor(a) == Approx(analytic_conductor(c)));
}

TEST_CASE("L_factor") {
  CHECK(rel(L_factor(cplx(1, 0), LanglandsParams{{cplx(0, 0)}}), cplx(1.0, 0.0)) < 1e-14);
  CHECK(rel(L_factor(cplx(2, 0), LanglandsParams{{cplx(0, 1), cplx(0, -1)}}),
            cplx(0.069158744625622390398, 0.0)) < 1e-13);
  CHECK_THROWS_AS(L_factor(cplx(0, 0), LanglandsParams{{cplx(0, 0)}}), PoleError);
}

TEST_CASE("gamma_factor basics") {
  CHECK(rel(gamma_factor(cplx(0.5, 0.0), LanglandsParams{{cplx(0, 0)}}), cplx(1.0, 0.0)) <
        1e-14);
  LanglandsParams mu{{cplx(0, 0.8), cplx(0, -0.8)}};
  CHECK(rel(gamma_factor(cplx(0.5, 0.0), mu), cplx(1.0, 0.0)) < 1e-13);
  // |gamma(1/2 + it)| = 1 for tempered parameters
  for (double t : {0.3, 2.0, 9.0})
    CHECK(std::abs(std::abs(gamma_factor(cplx(0.5, t), mu)) - 1.0) < 1e-12);
  // reflection gamma(s) gamma(1-s) = 1
  cplx s(0.2, 1.3);
  CHECK(rel(gamma_factor(s, mu) * gamma_factor(1.0 - s, mu), cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("gamma_factor against boundgammafactor window") {
  // mu = (5i, -5i), s = 1/2 - 2: |gamma| within [1/4, 4] of C^{-2} after the
  // 2 pi-per-factor normalization of the Stirling asymptotics.
  LanglandsParams mu{{cplx(0, 5), cplx(0, -5)}};
  double C = analytic_conductor(mu);
  cplx g = gamma_factor(cplx(0.5 - 2.0, 0.0), mu);
  double normalized = std::abs(g) / std::pow(C / sqr(kTwoPi), 2.0);
  CHECK(normalized > 0.25);
  CHECK(normalized < 4.0);
}

TEST_CASE("Stirling shadow of the gamma-factor size") {
  // |gamma(1/2 - sigma)| / (C/(2 pi)^2)^{sigma} within [1/8, 8]
  for (double t : {5.0, 20.0, 80.0}) {
    LanglandsParams mu{{cplx(0, t), cplx(0, -t)}};
    double Cnorm = analytic_conductor(mu) / sqr(kTwoPi);
    for (double sigma : {1.0, 2.0}) {
      double g = std::abs(gamma_factor(cplx(0.5 - sigma, 0.0), mu));
      double ratio = g / std::pow(Cnorm, sigma);
      CHECK(ratio > 1.0 / 8.0);
      CHECK(ratio < 8.0);
    }
  }
}

TEST_CASE("rs_params and tensor conductor bounds") {
  LanglandsParams one{{cplx(0, 0)}};
  CHECK(rs_params(one, one).mu == std::vector<cplx>{cplx(0, 0)});
  LanglandsParams Pi{{cplx(0, 1), cplx(0, -1)}};
  LanglandsParams pi{{cplx(0, 2)}};
  auto rs = rs_params(Pi, pi);
  CHECK(rs.mu == std::vector<cplx>{cplx(0, 3), cplx(0, 1)});

  // 1000 seeded draws for GL(2)xGL(1) and GL(3)xGL(2)
  for (int cs = 0; cs < 2; ++cs) {
    int big = cs == 0 ? 2 : 3;
    SplitMix64 rng(20240901ULL, 55 + cs);
    for (int d = 0; d < 1000; ++d) {
      LanglandsParams P, p;
      for (int i = 0; i < big; ++i) P.mu.push_back(cplx(0, rng.uniform(-50, 50)));
      for (int i = 0; i < big - 1; ++i) p.mu.push_back(cplx(0, rng.uniform(-50, 50)));
      double cb = analytic_conductor(P), cp = analytic_conductor(p);
      double ct = analytic_conductor(rs_params(P, p));
      int n = big - 1;
      REQUIRE(ct >= std::pow(cb, n) / std::pow(cp, n + 1));
      REQUIRE(ct <= std::pow(cb, n) * std::pow(cp, n + 1));
    }
  }
}

TEST_CASE("theta function") {
  LanglandsParams mu{{cplx(0, 5), cplx(0, -5)}};
  // s = 0: |Theta| = |1/gamma(1/2)| = 1 for tempered parameters.
  CHECK(std::abs(std::abs(theta(cplx(0, 0), mu)) - 1.0) < 1e-12);
  // s = 2 + 0i: bounded window around (2 pi)^{-2 n Re(s)} per the two-sided bound.
  double th2 = std::abs(theta(cplx(2, 0), mu));
  double scaled = th2 * std::pow(sqr(kTwoPi), 2.0);
  CHECK(scaled > 1.0 / 8.0);
  CHECK(scaled < 8.0);
  // s = 2 + 10i: generous polynomial window (1 + |Im s|)^{4} x slack.
  double th3 = std::abs(theta(cplx(2, 10), mu));
  CHECK(th3 <= std::pow(11.0, 4.0));
  // pole guard
  CHECK_THROWS_AS(theta(cplx(-0.5, 0.0), mu), PoleError);
}

TEST_CASE("theta is uniform across the tempered family") {
  double lo = 1e300, hi = 0.0;
  for (double t : {5.0, 20.0, 80.0}) {
    LanglandsParams mu{{cplx(0, t), cplx(0, -t)}};
    double v = std::abs(theta(cplx(2, 0), mu));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 8.0);
}

TEST_CASE("theta_tuple") {
  LanglandsParams Pi{{cplx(0, 0), cplx(0, 0)}};
  LanglandsParams mu1{{cplx(0, 0)}};
  // center composition: gamma(1/2, tensor at zero parameters) = 1
  CHECK(rel(theta_tuple(mu1, Pi), cplx(1.0, 0.0)) < 1e-12);
  // shifted input stays finite and polynomially bounded
  LanglandsParams mu2{{cplx(2.0, 0)}};
  LanglandsParams Pi2{{cplx(0, 3), cplx(0, -3)}};
  cplx v = theta_tuple(mu2, Pi2);
  CHECK(std::isfinite(std::abs(v)));
  CHECK(std::abs(v) < std::pow(1.0 + 3.0, 8.0));
  // random imaginary mu: finite
  cplx w = theta_tuple(LanglandsParams{{cplx(0, 1.7)}}, Pi2);
  CHECK(std::isfinite(std::abs(w)));
  CHECK_THROWS_AS(theta_tuple(LanglandsParams{{cplx(-0.2, 0)}}, Pi2), PreconditionError);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "anv/gamma_factors.hpp"
#include "anv/numerics.hpp"

using namespace anv;
using Catch::Approx;

namespace {
double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }
}  // namespace

TEST_CASE("log_gamma special values") {
  CHECK(std::abs(log_gamma(cplx(1.0, 0.0))) < 1e-14);
  CHECK(rel(log_gamma(cplx(0.5, 0.0)), cplx(0.5 * std::log(kPi), 0.0)) < 1e-14);
  // Frozen arbitrary-precision values.
  CHECK(rel(log_gamma(cplx(3, 4)),
            cplx(-1.7566267846037841105, 4.7426644380346579282)) < 1e-13);
  CHECK(rel(log_gamma(cplx(10, 50)),
            cplx(-40.400262350482971022, 159.62737280472833495)) < 1e-13);
  CHECK(rel(log_gamma(cplx(0.5, -30)),
            cplx(-46.204951270642225835, -72.037310428805793215)) < 1e-13);
  CHECK(rel(log_gamma(cplx(-7.3, 2)),
            cplx(-13.327732047581360053, -20.373400309173530449)) < 1e-13);
  CHECK(rel(log_gamma(cplx(0, 90)),
            cplx(-142.70263571350115552, 314.1965462365899526)) < 1e-13);
  CHECK(rel(log_gamma(cplx(99, 1)),
            cplx(354.53400950809723452, 4.5900780198093455885)) < 1e-13);
}

TEST_CASE("log_gamma pole errors") {
  CHECK_THROWS_AS(log_gamma(cplx(0.0, 0.0)), PoleError);
  CHECK_THROWS_AS(log_gamma(cplx(-1.0, 0.0)), PoleError);
  CHECK_THROWS_AS(log_gamma(cplx(-2.0, 0.0)), PoleError);
}

TEST_CASE("reflection identity on a grid away from poles") {
  // |Gamma(s) Gamma(1-s) - pi/sin(pi s)| / |pi/sin(pi s)| <= 1e-11
  int idx = 0;
  for (int i = 0; i < 100; ++i) {
    double re = -4.3 + 8.7 * i / 99.0;
    double im = (i % 2 == 0 ? 1.0 : -1.0) * (0.3 + 2.7 * ((i * 37) % 100) / 100.0);
    cplx s(re, im);
    cplx lhs = std::exp(log_gamma(s) + log_gamma(1.0 - s));
    cplx rhs = kPi / std::sin(kPi * s);
    CHECK(rel(lhs, rhs) <= 1e-11);
    ++idx;
  }
  CHECK(idx == 100);
}

TEST_CASE("rgamma is entire and vanishes at poles") {
  CHECK(std::abs(rgamma(cplx(0.0, 0.0))) == 0.0);
  CHECK(std::abs(rgamma(cplx(-3.0, 0.0))) == 0.0);
  CHECK(rel(rgamma(cplx(4.0, 0.0)), cplx(1.0 / 6.0, 0.0)) < 1e-14);
  cplx s(1.7, -2.3);
  CHECK(rel(rgamma(s) * std::exp(log_gamma(s)), cplx(1.0, 0.0)) < 1e-13);
}

TEST_CASE("bessel_K closed form and frozen oracles") {
  // K_{1/2}(x) = sqrt(pi/2x) e^{-x}
  CHECK(rel(bessel_K(cplx(0.5, 0.0), 1.0), cplx(0.46106850444789455844, 0.0)) < 1e-12);
  CHECK(rel(bessel_K(cplx(0.0, 0.0), 2.0), cplx(0.11389387274953343565, 0.0)) < 1e-11);
  // Purely imaginary order (Mellin-Barnes route), frozen oracle value.
  CHECK(rel(bessel_K(cplx(0.0, 10.0), 0.5), cplx(6.7717246719100322276e-8, 0.0)) < 1e-10);
  // Large-order scaled value: e^{10 pi} K_{20 i}(1).
  cplx v = bessel_K(cplx(0.0, 20.0), 1.0);
  CHECK(std::abs(v.real() * std::exp(10.0 * kPi) - (-0.51512826929892713663)) < 1e-9);
  CHECK(rel(bessel_K(cplx(0.0, 3.0), 2.5), cplx(0.011924338204656811318, 0.0)) < 1e-11);
}

TEST_CASE("bessel_K route consistency and properties") {
  CHECK_THROWS_AS(bessel_K(cplx(0.3, 0.0), 0.0), DomainError);
  CHECK_THROWS_AS(bessel_K(cplx(0.3, 0.0), -1.0), DomainError);
  // evenness in the order
  for (cplx nu : {cplx(0.7, 1.3), cplx(0.0, 5.0), cplx(1.4, -0.4)}) {
    cplx a = bessel_K(nu, 0.8), b = bessel_K(-nu, 0.8);
    CHECK(rel(a, b) < 1e-10);
  }
  // cosh-integral route against the Mellin-Barnes route in the overlap window
  for (double t : {4.5, 6.0, 8.0}) {
    double x = 2.0;
    cplx mb = detail::bessel_k_mb(cplx(0.0, t), x);
    cplx ch = detail::bessel_k_cosh(cplx(0.0, t), x);
    CHECK(rel(mb, ch) < 1e-9);
  }
}

TEST_CASE("scaled Bessel kernel matches direct evaluation") {
  ScaledBesselKit kit(kTwoPi * 0.9);
  for (double t : {0.5, 3.0, 11.0, 24.0}) {
    cplx direct = bessel_K(cplx(0.0, t), kTwoPi * 0.9);
    double want = direct.real() * std::exp(kPi * t / 2.0);
    CHECK(std::abs(kit(t) - want) / std::abs(want) < 1e-8);
  }
}

TEST_CASE("contour_integral examples") {
  VerticalContour c{0.0, 9.0, 240};
  SECTION("zero integrand") {
    auto r = contour_integral([](cplx) { return cplx(0.0, 0.0); }, c);
    CHECK(std::abs(r.value) == 0.0);
  }
  SECTION("Gaussian decay, closed form 1/(2 sqrt(pi))") {
    auto r = contour_integral([](cplx s) { return std::exp(s * s); }, c);
    CHECK(rel(r.value, cplx(0.5 / std::sqrt(kPi), 0.0)) < 1e-12);
  }
  SECTION("Barnes-type gamma product, value 1/(2 pi^2)") {
    VerticalContour wide{0.0, 60.0, 1600};
    auto r = contour_integral(
        [](cplx s) { return gamma_R(2.0 + s) * gamma_R(2.0 - s); }, wide);
    CHECK(rel(r.value, cplx(1.0 / (2.0 * kPi * kPi), 0.0)) < 1e-11);
    CHECK(r.tail < 1e-12);
  }
  SECTION("self-consistency under node and height doubling") {
    auto f = [](cplx s) { return std::exp(s * s) * (1.0 + s); };
    auto r1 = contour_integral(f, VerticalContour{0.0, 8.0, 160});
    auto r2 = contour_integral(f, VerticalContour{0.0, 16.0, 320});
    CHECK(std::abs(r1.value - r2.value) < 1e-12);
  }
  SECTION("invalid contours") {
    CHECK_THROWS_AS(contour_integral([](cplx) { return cplx(1.0); }, VerticalContour{0, 0.0, 64}),
                    TailError);
    CHECK_THROWS((contour_integral([](cplx) { return cplx(1.0); }, VerticalContour{0, 1.0, 4})));
  }
}

TEST_CASE("mellin_bump examples") {
  BumpFunction zero{1.0, 0.5, 0.0};
  CHECK(std::abs(mellin_bump(zero, cplx(1.0, 7.0))) == 0.0);

  BumpFunction f{1.0, 0.5, 1.0};
  // s = 0 is the plain d^x t mass (frozen oracle).
  CHECK(rel(mellin_bump(f, cplx(0.0, 0.0)), cplx(0.23159885008665682258, 0.0)) < 1e-12);
  // Frozen oracle at s = 2 + 3i.
  CHECK(rel(mellin_bump(f, cplx(2.0, 3.0)),
            cplx(0.20873036023320881007, 0.10718615059411111987)) < 1e-12);
  // Double-node self-consistency at another point.
  cplx a = mellin_bump(f, cplx(-1.0, 22.0));
  cplx b = gl_composite([&](double t) { return f(t) * std::exp(-cplx(-1.0, 22.0) * std::log(t)) / t; },
                        f.support_lo(), f.support_hi(), 160, 16);
  CHECK(std::abs(a - b) < 5e-13);
}

TEST_CASE("mellin_bump vertical decay envelope") {
  BumpFunction f{1.0, 0.5, 1.0};
  // |f~(sigma + it)| <= C_N (1+t)^{-N} with N = 6: the weighted magnitude
  // r(t) = |f~| t^6 must fall from t = 10 to t = 100.
  auto r = [&](double t) { return std::abs(mellin_bump(f, cplx(0.5, t))) * std::pow(t, 6.0); };
  double r10 = r(10.0), r40 = r(40.0), r100 = r(100.0);
  CHECK(r40 < r10);
  CHECK(r100 < r40);
}

TEST_CASE("unit bump normalization") {
  BumpFunction f = BumpFunction::unit_l2();
  CHECK(f.l2_norm_sq() == Approx(1.0).epsilon(1e-12));
  CHECK(f.scale == Approx(3.8182607628236392255).epsilon(1e-10));
}

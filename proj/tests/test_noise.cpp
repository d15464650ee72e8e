#include <doctest.h>

#include "noise.hpp"
#include "oracles.hpp"
#include "types.hpp"

#include <cmath>
#include <numbers>

using namespace fm;

namespace {
constexpr double kPi = std::numbers::pi;

double riesz_closed_form(double alpha, int d) {
    // classical constant for |x|^{-alpha} <-> c |xi|^{alpha-d}
    return std::pow(2.0, -alpha) * std::pow(kPi, -0.5 * d) *
           std::tgamma(0.5 * (d - alpha)) / std::tgamma(0.5 * alpha);
}
}  // namespace

TEST_CASE("alpha_h arithmetic and domain") {
    CHECK(alpha_h(0.5) == doctest::Approx(0.0));
    CHECK(alpha_h(0.75) == doctest::Approx(0.375));
    CHECK(alpha_h(1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(alpha_h(0.4), DomainError);
    CHECK_THROWS_AS(alpha_h(1.2), DomainError);
    // monotone increasing on (1/2, 1]
    double prev = 0.0;
    for (double h = 0.55; h <= 1.0; h += 0.05) {
        const double v = alpha_h(h);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("exponent_a per case") {
    CHECK(NoiseSpec::smooth_gaussian(0.75, 2).exponent_a() == doctest::Approx(0.0));
    CHECK(NoiseSpec::riesz(0.75, 1.5, 2).exponent_a() == doctest::Approx(1.5));
    CHECK(NoiseSpec::product_fractional(0.75, {0.5, 0.5}).exponent_a() ==
          doctest::Approx(1.0));
    CHECK(NoiseSpec::white_space(0.75).exponent_a() == doctest::Approx(1.0));
}

TEST_CASE("rho values and ordering") {
    CHECK(rho(EquationKind::Wave, 0.75, 1.0) == doctest::Approx(1.25));
    CHECK(rho(EquationKind::Heat, 0.75, 1.0) == doctest::Approx(2.0));
    for (double a : {0.0, 0.5, 1.0}) {
        CHECK(rho(EquationKind::Wave, 0.5, a) == doctest::Approx(1.0));
        CHECK(rho(EquationKind::Heat, 0.5, a) == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(rho(EquationKind::Wave, 0.75, 2.0), DomainError);
    // rho_h > rho_w > 1 for H > 1/2 on a grid
    for (double h = 0.55; h < 1.0; h += 0.1)
        for (double a = 0.0; a < 2.0; a += 0.4) {
            const double rw = rho(EquationKind::Wave, h, a);
            const double rh = rho(EquationKind::Heat, h, a);
            CHECK(rw > 1.0);
            CHECK(rh > rw);
        }
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(NoiseSpec::smooth_gaussian(0.5, 1), DomainError);
    CHECK_THROWS_AS(NoiseSpec::smooth_gaussian(1.0, 1), DomainError);
    CHECK_THROWS_AS(NoiseSpec::riesz(0.75, 0.0, 1), DomainError);
    CHECK_THROWS_AS(NoiseSpec::riesz(0.75, 1.0, 1), DomainError);  // alpha < d
    CHECK_THROWS_AS(NoiseSpec::product_fractional(0.75, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(NoiseSpec::riesz_white_family(0.75, 0.4), DomainError);
    CHECK_THROWS_AS(NoiseSpec::riesz_white_family(0.75, 1.0), DomainError);
}

TEST_CASE("riesz constant matches the classical closed form") {
    CHECK(riesz_constant(0.5, 1) == doctest::Approx(riesz_closed_form(0.5, 1)).epsilon(1e-8));
    CHECK(riesz_constant(1.0, 2) == doctest::Approx(riesz_closed_form(1.0, 2)).epsilon(1e-8));
    CHECK(riesz_constant(1.5, 3) == doctest::Approx(riesz_closed_form(1.5, 3)).epsilon(1e-8));
}

TEST_CASE("riesz_constant_check residuals") {
    CHECK(riesz_constant_check(0.5, 1) < 1e-4);
    CHECK(riesz_constant_check(1.99, 3) < 1e-3);
    CHECK_THROWS_AS(riesz_constant_check(-0.1, 1), DomainError);
    CHECK_THROWS_AS(riesz_constant_check(0.0, 1), DomainError);
}

TEST_CASE("dalang_check verdicts") {
    CHECK(dalang_check(NoiseSpec::smooth_gaussian(0.75, 1)).satisfied);
    CHECK(dalang_check(NoiseSpec::white_space(0.75)).satisfied);
    const auto bad = dalang_check(NoiseSpec::riesz(0.75, 2.5, 3));
    CHECK_FALSE(bad.satisfied);
    CHECK(bad.note.find("a < 2") != std::string::npos);
    const auto prod = dalang_check(NoiseSpec::product_fractional(0.75, {0.5, 0.5}));
    CHECK(prod.satisfied);
}

TEST_CASE("k_mu white space is pi and shift invariant") {
    const NoiseSpec spec = NoiseSpec::white_space(0.75);
    const auto res = k_mu(spec);
    CHECK(res.value == doctest::Approx(kPi).epsilon(1e-6));
    // shift invariance: same value at several eta
    for (double h : {0.0, 1.3, 4.0, 9.0})
        CHECK(k_mu_at(spec, h) == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("k_mu gaussian case agrees with an independent quadrature") {
    const NoiseSpec spec = NoiseSpec::smooth_gaussian(0.75, 1);
    const double at_zero = oracle::integrate(
        [](double xi) {
            return std::exp(-0.5 * xi * xi) / std::sqrt(2.0 * kPi) / (1.0 + xi * xi);
        },
        -40.0, 40.0, 1e-12);
    CHECK(k_mu_at(spec, 0.0) == doctest::Approx(at_zero).epsilon(1e-6));
    const auto res = k_mu(spec);
    CHECK(res.value >= at_zero - 1e-9);
    CHECK(res.value <= spec.spectral_mass() + 1e-9);  // bounded by total mass
}

TEST_CASE("k_mu riesz d=1 a>1/2: sup attained at eta=0 and at most 6") {
    const NoiseSpec spec = NoiseSpec::riesz(0.75, 0.6, 1);
    const auto res = k_mu(spec);
    CHECK(res.value <= 6.0);
    CHECK(res.value == doctest::Approx(k_mu_at(spec, 0.0)).epsilon(1e-6));
    CHECK(std::fabs(res.eta_at_max) < 0.3);
}

TEST_CASE("k_mu rejects divergent spectra") {
    CHECK_THROWS_AS(k_mu(NoiseSpec::riesz(0.75, 2.5, 3)), DalangError);
}

TEST_CASE("k_constant per case") {
    CHECK(k_constant(EquationKind::Wave, NoiseSpec::white_space(0.75)) ==
          doctest::Approx(kPi));
    CHECK(k_constant(EquationKind::Heat, NoiseSpec::white_space(0.75)) ==
          doctest::Approx(std::sqrt(kPi)));
    const NoiseSpec g = NoiseSpec::smooth_gaussian(0.75, 1);
    CHECK(k_constant(EquationKind::Wave, g) == doctest::Approx(g.spectral_mass()));
    const NoiseSpec r = NoiseSpec::riesz(0.75, 1.0, 2);
    CHECK(k_constant(EquationKind::Wave, r) ==
          doctest::Approx(4.0 * k_mu(r).value).epsilon(1e-8));
    CHECK(k_constant(EquationKind::Heat, r) ==
          doctest::Approx(k_mu(r).value).epsilon(1e-8));
}

TEST_CASE("white-noise family spectral density is |xi|^{a-1}") {
    const NoiseSpec fam = NoiseSpec::riesz_white_family(0.75, 0.8);
    const double xs[3] = {0.5, 1.0, 3.0};
    for (double x : xs) {
        const double xi[1] = {x};
        CHECK(fam.spectral_density(xi) == doctest::Approx(std::pow(x, -0.2)).epsilon(1e-10));
    }
}

#include <doctest.h>

#include "fracmoment.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

namespace {
struct Handle {
    fm_problem* p = nullptr;
    ~Handle() { fm_problem_free(p); }
};
}  // namespace

TEST_CASE("c api: problem lifecycle and errors") {
    Handle h;
    CHECK(fm_problem_create("wave", "smooth", 0.75, 1, nullptr, 0, 1.0, 0.0, &h.p) ==
          FM_OK);
    CHECK(h.p != nullptr);

    fm_problem* bad = nullptr;
    CHECK(fm_problem_create("elliptic", "smooth", 0.75, 1, nullptr, 0, 1.0, 0.0, &bad) ==
          FM_ERR_DOMAIN);
    CHECK(std::strlen(fm_last_error()) > 0);
    CHECK(fm_problem_create("wave", "smooth", 0.5, 1, nullptr, 0, 1.0, 0.0, &bad) ==
          FM_ERR_DOMAIN);
    CHECK(fm_problem_create("wave", "white", 0.75, 2, nullptr, 0, 1.0, 0.0, &bad) ==
          FM_ERR_DOMAIN);
    CHECK(std::string(fm_version()).size() > 0);
}

TEST_CASE("c api: constants for the white kernel") {
    Handle h;
    REQUIRE(fm_problem_create("wave", "white", 0.75, 1, nullptr, 0, 1.0, 0.0, &h.p) ==
            FM_OK);
    double ah = 0, a = 0, r = 0, keq = 0, kmu = 0, integral = 0;
    int ok = 0;
    REQUIRE(fm_constants(h.p, 1, &ah, &a, &r, &keq, &kmu, &ok, &integral) == FM_OK);
    CHECK(ah == doctest::Approx(0.375));
    CHECK(a == doctest::Approx(1.0));
    CHECK(r == doctest::Approx(1.25));
    CHECK(keq == doctest::Approx(std::numbers::pi));
    CHECK(ok == 1);
}

TEST_CASE("c api: dalang violation surfaces as the dedicated status") {
    const double alpha = 2.5;
    Handle h;
    REQUIRE(fm_problem_create("wave", "riesz", 0.75, 3, &alpha, 1, 1.0, 0.0, &h.p) ==
            FM_OK);
    double ah = 0, a = 0, r = 0;
    int ok = 1;
    REQUIRE(fm_constants(h.p, 0, &ah, &a, &r, nullptr, nullptr, &ok, nullptr) == FM_OK);
    CHECK(ok == 0);
    double v = 0, se = 0;
    int conv = 0;
    CHECK(fm_chaos_estimate(h.p, 0.5, 2, 100, 8, 1, 1, &v, &se, &conv, nullptr, nullptr,
                            nullptr) == FM_ERR_DALANG);
    CHECK(fm_fk_estimate(h.p, 0.5, -1, 100, 4, 1, 1, &v, &se, nullptr, nullptr, nullptr,
                         0, nullptr) == FM_ERR_DALANG);
}

TEST_CASE("c api: estimates round trip") {
    Handle h;
    REQUIRE(fm_problem_create("wave", "smooth", 0.75, 1, nullptr, 0, 1.0, 0.0, &h.p) ==
            FM_OK);
    double cv = 0, cse = 0;
    int conv = 0;
    std::vector<double> tv(3), ts(3);
    std::vector<int64_t> tn(3);
    REQUIRE(fm_chaos_estimate(h.p, 0.5, 3, 2000, 32, 2, 7, &cv, &cse, &conv, tv.data(),
                              ts.data(), tn.data()) == FM_OK);
    CHECK(cv > 1.0);
    CHECK(cse > 0.0);
    CHECK(tn[0] == 2000 * 32);

    double fv = 0, fse = 0, tail = 0;
    int64_t res = 0;
    int n_strata = 0;
    std::vector<double> strata(6 * 16);
    REQUIRE(fm_fk_estimate(h.p, 0.5, -1, 4000, 8, 2, 7, &fv, &fse, &tail, &res,
                           strata.data(), 16, &n_strata) == FM_OK);
    CHECK(n_strata >= 3);
    CHECK(strata[0 * 6 + 2] == doctest::Approx(1.0));  // k=0 stratum mean = w^2
    CHECK(std::fabs(cv - fv) < 3.0 * std::sqrt(cse * cse + fse * fse) + 0.01);
}

TEST_CASE("c api: auxiliary evaluators") {
    double g = 0;
    REQUIRE(fm_gamma_exact(2, &g) == FM_OK);
    CHECK(g == doctest::Approx(0.25));
    double v = 0, se = 0;
    REQUIRE(fm_gamma_cone(1, 20000, 3, &v, &se) == FM_OK);
    CHECK(std::fabs(v - 0.5) < 3.0 * se);

    double s = 0;
    REQUIRE(fm_simplex_integral(2, 0.0, 1.0, &s) == FM_OK);
    CHECK(s == doctest::Approx(0.5));

    double ml = 0, lml = 0;
    REQUIRE(fm_mittag_leffler(1.0, 1.0, &ml, &lml) == FM_OK);
    CHECK(ml == doctest::Approx(std::numbers::e));

    const double xs[5] = {1.0, 1.5, 2.0, 2.5, 3.0};
    double ys[5];
    for (int i = 0; i < 5; ++i) ys[i] = std::exp(0.7 * std::pow(xs[i], 1.25));
    double rho = 0, resid = 0;
    int rej = 1;
    REQUIRE(fm_growth_fit(xs, ys, 5, 1.0, &rho, &resid, &rej) == FM_OK);
    CHECK(rej == 0);
    CHECK(rho == doctest::Approx(1.25).epsilon(0.01));
}

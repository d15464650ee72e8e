#pragma once

#include "noise.hpp"
#include "types.hpp"

#include <map>
#include <span>
#include <string>

namespace fm {

struct BoundConstant {
    double value = 0.0;
    bool implementer_estimated = false;
    std::string procedure;  // estimation procedure id when implementer-estimated
};

struct BoundReport {
    std::string name;
    double value = 0.0;
    std::map<std::string, BoundConstant> constants;
    std::string validity_domain;

    std::string to_text() const;
};

// p-th moment upper bound: C1^p w(t)^p exp(C1 p^{(4-a)/(3-a)} t^{rho_w})
// (heat: exponents (4-a)/(2-a) and rho_h).  C1 is not explicit in the
// source material and must be supplied.
BoundReport upper_moment_bound(EquationKind kind, const NoiseSpec& spec, double p,
                               double t, const InitialData& init, double c1_estimate);

// smallest C1 on a coarse grid such that the p = 2 bound dominates the
// supplied estimates at every grid time
double calibrate_c1(EquationKind kind, const NoiseSpec& spec,
                    std::span<const double> ts, std::span<const double> estimates,
                    const InitialData& init);

struct LowerConstants {
    double c_h = 0.0;       // alpha_H gamma^2 (1/8)^4 e^{-1}
    double c_base = 0.0;    // alpha_0 c_h (case i) or c_h 4^{-a} (cases ii-iv)
    double c2 = 0.0;
    double t2 = 0.0;
    BoundReport report;
};

// explicit lower-bound constant chain c_H -> c2, t2; gamma_estimate comes
// from gamma_cone (or the closed form)
LowerConstants lower_bound_constants(const NoiseSpec& spec, EquationKind kind,
                                     double gamma_estimate);

// int over the simplex 0 < t_1 < ... < t_n < t of [(t-t_n)...(t_2-t_1)]^h:
//   Gamma(1+h)^{n+1} / Gamma((1+h)n + 1) * t^{(1+h)n}
double simplex_integral(int n, double h, double t);

struct MittagLeffler {
    double value = 0.0;
    double log_value = 0.0;
    int terms = 0;
};

// sum_{n >= 0} x^n / (n!)^a, log-domain summation
MittagLeffler mittag_leffler_sum(double x, double a, double tol = 1e-14);

struct MittagLefflerFit {
    double c0 = 0.0;
    double x0 = 0.0;
    bool verified = false;
};

// smallest grid c0 with sum <= 2 exp(c0 x^{1/a}) on the tail of x_grid
MittagLefflerFit mittag_leffler_bound_fit(double a, std::span<const double> x_grid);

struct GrowthFit {
    double rho = 0.0;
    double intercept = 0.0;  // log c in E = exp(c t^rho)
    double residual = 0.0;   // rms of the log-log fit
    int used = 0;
    bool rejected = false;
    std::string warning;     // always flags this as a desk-scale trend
};

// least-squares slope of log log(E/u0^2) against log t
GrowthFit growth_fit(std::span<const double> ts, std::span<const double> estimates,
                     double u0);

}  // namespace fm

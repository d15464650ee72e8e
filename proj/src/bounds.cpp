#include "bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace fm {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace

std::string BoundReport::to_text() const {
    std::ostringstream os;
    os << name << " = " << value << "\n";
    if (!validity_domain.empty()) os << "  valid for: " << validity_domain << "\n";
    for (const auto& [sym, c] : constants) {
        os << "  " << sym << " = " << c.value << "  ["
           << (c.implementer_estimated ? "implementer-estimated" : "explicit");
        if (!c.procedure.empty()) os << ": " << c.procedure;
        os << "]\n";
    }
    return os.str();
}

BoundReport upper_moment_bound(EquationKind kind, const NoiseSpec& spec, double p,
                               double t, const InitialData& init, double c1_estimate) {
    require(p >= 2.0, "upper_moment_bound: p must be >= 2");
    require(t >= 0.0 && c1_estimate > 0.0, "upper_moment_bound: bad arguments");
    const double a = spec.exponent_a();
    const double h = spec.hurst();
    const double r = rho(kind, h, a);
    const double pexp = kind == EquationKind::Wave ? (4.0 - a) / (3.0 - a)
                                                   : (4.0 - a) / (2.0 - a);
    const double w = homogeneous_solution(kind, t, init);
    const double kc = k_constant(kind, spec);

    BoundReport rep;
    rep.name = kind == EquationKind::Wave ? "wave-Lp-upper-bound" : "heat-Lp-upper-bound";
    rep.value = std::pow(c1_estimate, p) * std::pow(w, p) *
                std::exp(c1_estimate * std::pow(p, pexp) * std::pow(t, r));
    rep.constants["C1"] = {c1_estimate, true, "supplied or calibrate_c1"};
    rep.constants["K"] = {kc, false, ""};
    rep.constants["rho"] = {r, false, ""};
    rep.constants["a"] = {a, false, ""};
    rep.constants["p_exponent"] = {pexp, false, ""};
    // hypercontractivity gives the (p-1)^{n/2} chaos-norm factor behind pexp
    rep.validity_domain = "t with p*K*t^{2H+2-a} > t1 (wave) / heat analogue; t1 not pinned";
    return rep;
}

double calibrate_c1(EquationKind kind, const NoiseSpec& spec,
                    std::span<const double> ts, std::span<const double> estimates,
                    const InitialData& init) {
    require(ts.size() == estimates.size() && !ts.empty(), "calibrate_c1: bad grids");
    double c1 = 1.0;
    for (int it = 0; it < 200; ++it) {
        bool ok = true;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (upper_moment_bound(kind, spec, 2.0, ts[i], init, c1).value <
                estimates[i]) {
                ok = false;
                break;
            }
        }
        if (ok) return c1;
        c1 *= 1.1;
    }
    throw BudgetError("calibrate_c1: no dominating C1 found");
}

LowerConstants lower_bound_constants(const NoiseSpec& spec, EquationKind kind,
                                     double gamma_estimate) {
    require(gamma_estimate > 0.0 && gamma_estimate < 1.0,
            "lower_bound_constants: gamma must lie in (0, 1)");
    const double a = spec.exponent_a();
    const double h = spec.hurst();
    const double c = 1.0 / 8.0;
    LowerConstants out;
    out.c_h = alpha_h(h) * gamma_estimate * gamma_estimate * std::pow(c, 4.0) /
              std::numbers::e;

    // exponent structure (c_base t^beta / k^sigma)^k; maximizing over k gives
    // the exp(2 c2 t^{beta/sigma}) shape with beta/sigma = rho
    double sigma, beta;
    if (kind == EquationKind::Wave) {
        sigma = 3.0 - a;
        beta = 2.0 * h + 2.0 - a;
    } else {
        sigma = 1.0 - 0.5 * a;
        beta = 2.0 * h - 0.5 * a;
    }

    BoundReport& rep = out.report;
    if (spec.kernel() == KernelKind::SmoothFinite) {
        const double alpha0 = 0.5 * k_constant(kind, spec);  // f >= alpha0 near 0
        out.c_base = alpha0 * out.c_h;
        rep.constants["alpha0"] = {alpha0, false, "K/2"};
    } else {
        out.c_base = out.c_h * std::pow(4.0, -a);
    }
    out.c2 = 0.5 * std::pow(out.c_base / std::numbers::e, 1.0 / sigma);
    out.t2 = std::pow(std::numbers::e / out.c_base * std::pow(2.0, sigma), 1.0 / beta);

    rep.name = "lower-bound-constants";
    rep.value = out.c2;
    rep.constants["gamma"] = {gamma_estimate, true, "gamma_cone MC"};
    rep.constants["c"] = {c, false, ""};
    rep.constants["c_H"] = {out.c_h, false, ""};
    rep.constants["c2"] = {out.c2, false, ""};
    rep.constants["t2"] = {out.t2, false, ""};
    rep.validity_domain = "E|u(t,x)|^2 >= u0^2 exp(2 c2 t^rho) for t > t2";
    return out;
}

double simplex_integral(int n, double h, double t) {
    require(n >= 1, "simplex_integral: n must be >= 1");
    require(h > -1.0, "simplex_integral: h must exceed -1");
    require(t >= 0.0, "simplex_integral: t must be nonnegative");
    if (t == 0.0) return 0.0;
    // Dirichlet integral over the n gaps (t_2-t_1, ..., t-t_n); the lowest
    // point t_1 is the free coordinate
    const double lg = n * std::lgamma(1.0 + h) - std::lgamma((1.0 + h) * n + 1.0) +
                      (1.0 + h) * n * std::log(t);
    return std::exp(lg);
}

MittagLeffler mittag_leffler_sum(double x, double a, double tol) {
    require(x >= 0.0, "mittag_leffler_sum: x must be nonnegative");
    require(a > 0.0, "mittag_leffler_sum: a must be positive");
    MittagLeffler out;
    if (x == 0.0) {
        out.value = 1.0;
        out.log_value = 0.0;
        out.terms = 1;
        return out;
    }
    const double lx = std::log(x);
    // streaming log-sum-exp
    double lsum = 0.0;  // n = 0 term
    int n = 1;
    for (; n < 100000; ++n) {
        const double lterm = n * lx - a * std::lgamma(n + 1.0);
        const double m = std::max(lsum, lterm);
        lsum = m + std::log(std::exp(lsum - m) + std::exp(lterm - m));
        if (lterm - lsum < std::log(tol)) break;
    }
    out.log_value = lsum;
    out.value = std::exp(lsum);
    out.terms = n + 1;
    return out;
}

MittagLefflerFit mittag_leffler_bound_fit(double a, std::span<const double> x_grid) {
    require(a > 0.0, "mittag_leffler_bound_fit: a must be positive");
    require(!x_grid.empty(), "mittag_leffler_bound_fit: empty grid");
    std::vector<double> xs(x_grid.begin(), x_grid.end());
    std::sort(xs.begin(), xs.end());
    std::vector<double> lsum(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        lsum[i] = mittag_leffler_sum(xs[i], a).log_value;

    const std::size_t min_tail = std::max<std::size_t>(2, xs.size() / 4);
    MittagLefflerFit fit;
    for (int step = 1; step <= 200; ++step) {
        const double c0 = 0.05 * step;
        // largest suffix on which the bound holds
        std::size_t from = xs.size();
        for (std::size_t i = xs.size(); i-- > 0;) {
            const double rhs = std::log(2.0) + c0 * std::pow(xs[i], 1.0 / a);
            if (lsum[i] <= rhs)
                from = i;
            else
                break;
        }
        if (xs.size() - from >= min_tail) {
            fit.c0 = c0;
            fit.x0 = xs[from];
            fit.verified = true;
            return fit;
        }
    }
    fit.c0 = 10.0;
    fit.x0 = xs.back();
    fit.verified = false;
    return fit;
}

GrowthFit growth_fit(std::span<const double> ts, std::span<const double> estimates,
                     double u0) {
    require(ts.size() == estimates.size(), "growth_fit: size mismatch");
    require(u0 > 0.0, "growth_fit: u0 must be positive");
    GrowthFit out;
    out.warning = "desk-scale trend, not the limsup";
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        require(ts[i] > 0.0, "growth_fit: t values must be positive");
        if (estimates[i] <= 0.0) throw DomainError("growth_fit: non-positive estimate");
        const double ratio = estimates[i] / (u0 * u0);
        if (ratio <= 1.0 + 1e-9) {
            out.warning += "; dropped point(s) at the u0^2 floor";
            continue;
        }
        lx.push_back(std::log(ts[i]));
        ly.push_back(std::log(std::log(ratio)));
    }
    out.used = static_cast<int>(lx.size());
    std::vector<double> ux = lx;
    std::sort(ux.begin(), ux.end());
    ux.erase(std::unique(ux.begin(), ux.end()), ux.end());
    if (static_cast<int>(ux.size()) < 4) {
        out.rejected = true;
        out.warning += "; fewer than 4 usable distinct t values";
        return out;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    out.rho = sxy / sxx;
    out.intercept = my - out.rho * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (out.intercept + out.rho * lx[i]);
        ss += r * r;
    }
    out.residual = std::sqrt(ss / lx.size());
    if (!std::isfinite(out.rho) || out.rho <= 0.0) {
        out.rejected = true;
        out.warning += "; non-positive or non-finite fitted exponent";
    }
    return out;
}

}  // namespace fm

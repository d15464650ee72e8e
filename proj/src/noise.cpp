#include "noise.hpp"

#include "quad.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace fm {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace

double alpha_h(double hurst) {
    require(hurst >= 0.5 && hurst <= 1.0, "alpha_h: hurst must lie in [1/2, 1]");
    return hurst * (2.0 * hurst - 1.0);
}

double rho(EquationKind kind, double hurst, double a) {
    require(hurst >= 0.5 && hurst <= 1.0, "rho: hurst must lie in [1/2, 1]");
    require(a >= 0.0 && a < 2.0, "rho: exponent a must lie in [0, 2)");
    if (kind == EquationKind::Wave) return (2.0 * hurst + 2.0 - a) / (3.0 - a);
    return (4.0 * hurst - a) / (2.0 - a);
}

NoiseSpec NoiseSpec::smooth_gaussian(double hurst, int dim) {
    require(hurst > 0.5 && hurst < 1.0, "noise: hurst must lie in (1/2, 1)");
    require(dim >= 1 && dim <= 3, "noise: dim must be 1, 2, or 3");
    NoiseSpec s;
    s.hurst_ = hurst;
    s.kernel_ = KernelKind::SmoothFinite;
    s.dim_ = dim;
    return s;
}

NoiseSpec NoiseSpec::riesz(double hurst, double alpha, int dim) {
    require(hurst > 0.5 && hurst < 1.0, "noise: hurst must lie in (1/2, 1)");
    require(dim >= 1 && dim <= 3, "noise: dim must be 1, 2, or 3");
    // alpha >= 2 (possible only for d = 3) is representable so that the
    // Dalang check can reject it; alpha >= d is not a valid Riesz kernel.
    require(alpha > 0.0 && alpha < dim, "noise: riesz alpha must lie in (0, dim)");
    NoiseSpec s;
    s.hurst_ = hurst;
    s.kernel_ = KernelKind::Riesz;
    s.dim_ = dim;
    s.riesz_alpha_ = alpha;
    return s;
}

NoiseSpec NoiseSpec::product_fractional(double hurst, std::vector<double> alphas) {
    require(hurst > 0.5 && hurst < 1.0, "noise: hurst must lie in (1/2, 1)");
    require(!alphas.empty() && alphas.size() <= 3,
            "noise: product kernel needs 1 to 3 exponents");
    for (double a : alphas)
        require(a > 0.0 && a < 1.0, "noise: product exponents must lie in (0, 1)");
    NoiseSpec s;
    s.hurst_ = hurst;
    s.kernel_ = KernelKind::ProductFractional;
    s.dim_ = static_cast<int>(alphas.size());
    s.product_alphas_ = std::move(alphas);
    return s;
}

NoiseSpec NoiseSpec::white_space(double hurst) {
    require(hurst > 0.5 && hurst < 1.0, "noise: hurst must lie in (1/2, 1)");
    NoiseSpec s;
    s.hurst_ = hurst;
    s.kernel_ = KernelKind::WhiteSpace;
    s.dim_ = 1;
    return s;
}

NoiseSpec NoiseSpec::riesz_white_family(double hurst, double a) {
    require(a > 0.5 && a < 1.0, "noise: white-family exponent must lie in (1/2, 1)");
    NoiseSpec s = riesz(hurst, a, 1);
    // rescale so the spectral density is exactly |xi|^{a-1}
    s.spectral_scale_ = 1.0 / riesz_constant(a, 1);
    return s;
}

double NoiseSpec::alpha_H() const { return alpha_h(hurst_); }

double NoiseSpec::exponent_a() const {
    switch (kernel_) {
        case KernelKind::SmoothFinite: return 0.0;
        case KernelKind::Riesz: return riesz_alpha_;
        case KernelKind::ProductFractional:
            return std::accumulate(product_alphas_.begin(), product_alphas_.end(), 0.0);
        case KernelKind::WhiteSpace: return 1.0;
    }
    return 0.0;
}

double NoiseSpec::f(std::span<const double> x) const {
    require(static_cast<int>(x.size()) == dim_, "f: wrong dimension");
    switch (kernel_) {
        case KernelKind::SmoothFinite:
            return spectral_scale_ * std::exp(-0.5 * norm2(x));
        case KernelKind::Riesz:
            return spectral_scale_ * std::pow(norm2(x), -0.5 * riesz_alpha_);
        case KernelKind::ProductFractional: {
            double v = spectral_scale_;
            for (int j = 0; j < dim_; ++j)
                v *= std::pow(std::abs(x[j]), -product_alphas_[j]);
            return v;
        }
        case KernelKind::WhiteSpace:
            throw UnsupportedError("f: white noise has no pointwise kernel");
    }
    return 0.0;
}

double NoiseSpec::spectral_density(std::span<const double> xi) const {
    require(static_cast<int>(xi.size()) == dim_, "spectral_density: wrong dimension");
    switch (kernel_) {
        case KernelKind::SmoothFinite:
            return spectral_scale_ * std::pow(2.0 * kPi, -0.5 * dim_) *
                   std::exp(-0.5 * norm2(xi));
        case KernelKind::Riesz:
            return spectral_scale_ * riesz_constant(riesz_alpha_, dim_) *
                   std::pow(norm2(xi), 0.5 * (riesz_alpha_ - dim_));
        case KernelKind::ProductFractional: {
            double v = spectral_scale_;
            for (int j = 0; j < dim_; ++j)
                v *= riesz_constant(product_alphas_[j], 1) *
                     std::pow(std::abs(xi[j]), product_alphas_[j] - 1.0);
            return v;
        }
        case KernelKind::WhiteSpace:
            return 1.0;
    }
    return 0.0;
}

double NoiseSpec::spectral_mass() const {
    if (kernel_ != KernelKind::SmoothFinite)
        throw UnsupportedError("spectral_mass: mu(R^d) is finite only for the smooth kernel");
    return spectral_scale_;  // f(0)
}

// --- Riesz constant -------------------------------------------------------
//
// c_{alpha,d} is pinned from the Parseval identity applied to the Gaussian
// e^{-|x|^2}:
//   int |x|^{-alpha} e^{-|x|^2} dx
//     = c_{alpha,d} pi^{d/2} int |xi|^{alpha-d} e^{-|xi|^2/4} dxi,
// which reduces to a ratio of two one-dimensional radial integrals.

namespace {

double radial_gamma_integral(double power, double decay, double tol) {
    // int_0^inf r^power e^{-decay r^2} dr, power > -1
    auto f = [&](double r) { return std::pow(r, power) * std::exp(-decay * r * r); };
    auto head = quad::finite_singular(f, 0.0, 1.0, tol);
    auto tail = quad::half_line(f, 1.0, tol);
    return head.value + tail.value;
}

std::map<std::pair<double, int>, double> g_riesz_cache;
std::mutex g_riesz_mutex;

}  // namespace

double riesz_constant(double alpha, int dim) {
    require(dim >= 1 && dim <= 3, "riesz_constant: dim must be 1, 2, or 3");
    require(alpha > 0.0 && alpha < dim, "riesz_constant: alpha must lie in (0, dim)");
    {
        std::lock_guard<std::mutex> lock(g_riesz_mutex);
        auto it = g_riesz_cache.find({alpha, dim});
        if (it != g_riesz_cache.end()) return it->second;
    }
    const double tol = 1e-12;
    const double space = radial_gamma_integral(dim - 1.0 - alpha, 1.0, tol);
    const double freq = radial_gamma_integral(alpha - 1.0, 0.25, tol);
    const double c = space / (std::pow(kPi, 0.5 * dim) * freq);
    std::lock_guard<std::mutex> lock(g_riesz_mutex);
    g_riesz_cache.insert({{alpha, dim}, c});
    return c;
}

double riesz_constant_check(double alpha, int dim, double width1, double width2) {
    require(width1 > 0.0 && width2 > 0.0, "riesz_constant_check: widths must be positive");
    const double a = 0.5 / (width1 * width1);
    const double b = 0.5 / (width2 * width2);
    const double tol = 1e-10;
    const double omega = 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
    // spatial side via the Gaussian convolution identity:
    //   int int e^{-a|x|^2} e^{-b|y|^2} |x-y|^{-alpha} dx dy
    //     = (pi/(a+b))^{d/2} int |z|^{-alpha} e^{-ab|z|^2/(a+b)} dz
    const double conv = std::pow(kPi / (a + b), 0.5 * dim);
    const double spatial =
        conv * omega * radial_gamma_integral(dim - 1.0 - alpha, a * b / (a + b), tol);
    // spectral side: int Fg Fh dmu with Fg(xi) = (pi/a)^{d/2} e^{-|xi|^2/(4a)}
    const double pref = std::pow(kPi / a, 0.5 * dim) * std::pow(kPi / b, 0.5 * dim);
    const double spectral =
        riesz_constant(alpha, dim) * pref * omega *
        radial_gamma_integral(alpha - 1.0, 0.25 / a + 0.25 / b, tol);
    return std::abs(spatial - spectral);
}

// --- K(mu) ----------------------------------------------------------------

namespace {

// radial density of mu at r > 0
double radial_density(const NoiseSpec& spec, double r) {
    switch (spec.kernel()) {
        case KernelKind::SmoothFinite:
            return spec.spectral_scale() * std::pow(2.0 * kPi, -0.5 * spec.dim()) *
                   std::exp(-0.5 * r * r);
        case KernelKind::Riesz:
            return spec.spectral_scale() * riesz_constant(spec.riesz_alpha(), spec.dim()) *
                   std::pow(r, spec.riesz_alpha() - spec.dim());
        case KernelKind::ProductFractional:
            // d = 1 only; the caller has already rejected d >= 2
            return spec.spectral_scale() * riesz_constant(spec.product_alphas()[0], 1) *
                   std::pow(r, spec.product_alphas()[0] - 1.0);
        case KernelKind::WhiteSpace:
            return 1.0;
    }
    return 0.0;
}

// angular average of 1/(1+|xi-eta|^2) over the sphere |xi| = r, |eta| = h,
// multiplied by the surface measure (d = 2, 3) or the two-point sum (d = 1)
double angular_kernel(int dim, double r, double h) {
    const double am = 1.0 + (r - h) * (r - h);
    const double ap = 1.0 + (r + h) * (r + h);
    switch (dim) {
        case 1:
            return 1.0 / am + 1.0 / ap;
        case 2:
            return 2.0 * kPi / std::sqrt(am * ap);
        case 3: {
            const double b = 2.0 * r * h;
            if (b < 1e-12) return 4.0 * kPi / (1.0 + r * r + h * h);
            return (2.0 * kPi / b) * std::log1p(2.0 * b / am);
        }
    }
    return 0.0;
}

// same quantity evaluated at r = 1/s, times the 1/s^2 Jacobian, in a form
// that stays stable as s -> 0
double tail_integrand(const NoiseSpec& spec, double s, double h) {
    const double m = radial_density(spec, 1.0 / s);
    if (m == 0.0) return 0.0;
    const double am = s * s + (1.0 - h * s) * (1.0 - h * s);
    const double ap = s * s + (1.0 + h * s) * (1.0 + h * s);
    switch (spec.dim()) {
        case 1:
            return m * (1.0 / am + 1.0 / ap);
        case 2:
            return m * 2.0 * kPi / (s * std::sqrt(am * ap));
        case 3: {
            if (h < 1e-12) return m * 4.0 * kPi / (s * s * (1.0 + s * s));
            return m * (kPi / (h * s * s * s)) * std::log1p(4.0 * h * s / am);
        }
    }
    return 0.0;
}

}  // namespace

double k_mu_at(const NoiseSpec& spec, double h, double tol) {
    if (spec.kernel() == KernelKind::ProductFractional && spec.dim() >= 2)
        throw UnsupportedError("k_mu: product kernels are supported in d = 1 only");
    const int d = spec.dim();
    auto head = quad::finite_singular(
        [&](double r) {
            return radial_density(spec, r) * std::pow(r, d - 1.0) * angular_kernel(d, r, h);
        },
        0.0, 1.0, tol);
    auto tail = quad::finite_singular(
        [&](double s) { return tail_integrand(spec, s, h); }, 0.0, 1.0, tol);
    return head.value + tail.value;
}

KMuResult k_mu(const NoiseSpec& spec, const KMuSettings& settings) {
    if (spec.exponent_a() >= 2.0)
        throw DalangError("k_mu: spectral integrability fails (a >= 2)");
    require(settings.grid_points >= 2 && settings.search_radius > 0.0,
            "k_mu: bad grid settings");
    KMuResult out;
    const int n = settings.grid_points;
    const double step = settings.search_radius / (n - 1);
    double best_h = 0.0, best_v = -1.0;
    for (int i = 0; i < n; ++i) {
        const double h = i * step;
        const double v = k_mu_at(spec, h, settings.tol);
        if (v > best_v) {
            best_v = v;
            best_h = h;
        }
    }
    out.coarse_value = best_v;
    // one refinement pass around the coarse argmax
    const double lo = std::max(0.0, best_h - step);
    const double hi = best_h + step;
    for (int i = 0; i <= 8; ++i) {
        const double h = lo + (hi - lo) * i / 8.0;
        const double v = k_mu_at(spec, h, settings.tol);
        if (v > best_v) {
            best_v = v;
            best_h = h;
        }
    }
    out.value = best_v;
    out.eta_at_max = best_h;
    out.quad_error = settings.tol * best_v;
    return out;
}

DalangReport dalang_check(const NoiseSpec& spec) {
    DalangReport rep;
    const double a = spec.exponent_a();
    rep.satisfied = a < 2.0;
    if (!rep.satisfied) {
        rep.note = "spectral integral diverges (the condition requires a < 2; got a = " +
                   std::to_string(a) + ")";
        return rep;
    }
    if (spec.kernel() == KernelKind::ProductFractional && spec.dim() >= 2) {
        rep.note = "condition holds (a < 2); integral not evaluated for product kernels in d >= 2";
        return rep;
    }
    rep.integral = k_mu_at(spec, 0.0);
    rep.integral_computed = true;
    return rep;
}

double k_constant(EquationKind kind, const NoiseSpec& spec, const KMuSettings& settings) {
    switch (spec.kernel()) {
        case KernelKind::SmoothFinite:
            return spec.spectral_mass();
        case KernelKind::Riesz:
        case KernelKind::ProductFractional: {
            const double k = k_mu(spec, settings).value;
            return kind == EquationKind::Wave ? 4.0 * k : k;
        }
        case KernelKind::WhiteSpace:
            return kind == EquationKind::Wave ? kPi : std::sqrt(kPi);
    }
    return 0.0;
}

}  // namespace fm

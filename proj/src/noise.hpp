#pragma once

#include "types.hpp"

#include <span>
#include <vector>

namespace fm {

enum class KernelKind { SmoothFinite, Riesz, ProductFractional, WhiteSpace };

// Noise specification: Hurst index H in (1/2,1) plus one of the four spatial
// covariance kernels
//   smooth-finite : f(x) = e^{-|x|^2/2},   mu(dxi) = (2pi)^{-d/2} e^{-|xi|^2/2} dxi
//   riesz         : f(x) = |x|^{-alpha},   mu(dxi) = c_{alpha,d} |xi|^{alpha-d} dxi
//   product       : f(x) = prod |x_j|^{-alpha_j}, mu = prod c_{alpha_j,1}|xi_j|^{alpha_j-1}
//   white-space   : d=1, f = delta_0,      mu = Lebesgue
// The Riesz normalizing constants c_{alpha,d} are pinned numerically (see
// riesz_constant) rather than transcribed.  spectral_scale multiplies the
// canonical spectral density; it is 1 except for the white-noise
// approximation family, whose spectral density is exactly |xi|^{a-1}.
class NoiseSpec {
public:
    static NoiseSpec smooth_gaussian(double hurst, int dim);
    static NoiseSpec riesz(double hurst, double alpha, int dim);
    static NoiseSpec product_fractional(double hurst, std::vector<double> alphas);
    static NoiseSpec white_space(double hurst);
    // Riesz family approximating spatial white noise as a -> 1: d=1,
    // spectral density |xi|^{a-1} (so the a -> 1 limit is the Lebesgue
    // measure of the white-space case).
    static NoiseSpec riesz_white_family(double hurst, double a);

    KernelKind kernel() const { return kernel_; }
    int dim() const { return dim_; }
    double hurst() const { return hurst_; }
    double alpha_H() const;  // H(2H-1)
    double riesz_alpha() const { return riesz_alpha_; }
    const std::vector<double>& product_alphas() const { return product_alphas_; }
    double spectral_scale() const { return spectral_scale_; }

    // exponent a: 0 / alpha / sum(alpha_j) / 1 in cases (i)-(iv)
    double exponent_a() const;

    // spatial kernel evaluated pointwise; throws UnsupportedError for
    // white-space (delta is not a function)
    double f(std::span<const double> x) const;

    // density of mu at xi (all four cases have densities)
    double spectral_density(std::span<const double> xi) const;

    // mu(R^d) = f(0); finite only in case (i)
    double spectral_mass() const;

    bool is_pointwise_kernel() const { return kernel_ != KernelKind::WhiteSpace; }

private:
    NoiseSpec() = default;
    double hurst_ = 0.75;
    KernelKind kernel_ = KernelKind::SmoothFinite;
    int dim_ = 1;
    double riesz_alpha_ = 0.0;
    std::vector<double> product_alphas_;
    double spectral_scale_ = 1.0;
};

double alpha_h(double hurst);
double rho(EquationKind kind, double hurst, double a);

// Numerically pinned Riesz constant c_{alpha,d}: the density of
// (2pi)^{-d} F(|x|^{-alpha}) is c_{alpha,d}|xi|^{alpha-d}.  Computed once
// per (alpha,d) by a quadrature ratio with Gaussian test functions, cached.
double riesz_constant(double alpha, int dim);

// Residual of the Parseval identity for the Riesz pair with two Gaussian
// test functions g(x)=e^{-|x|^2/(2 w1^2)}, h(x)=e^{-|x|^2/(2 w2^2)}:
//   | int int g h |x-y|^{-alpha} - int Fg conj(Fh) dmu_alpha |.
double riesz_constant_check(double alpha, int dim, double width1 = 1.0, double width2 = 1.4);

struct DalangReport {
    bool satisfied = false;
    double integral = 0.0;  // int mu(dxi)/(1+|xi|^2) when finite and computable
    bool integral_computed = false;
    std::string note;
};
DalangReport dalang_check(const NoiseSpec& spec);

struct KMuSettings {
    double search_radius = 10.0;
    int grid_points = 41;
    double tol = 1e-8;
};

struct KMuResult {
    double value = 0.0;          // sup over the eta grid (refined once around argmax)
    double eta_at_max = 0.0;     // |eta| attaining the reported sup
    double coarse_value = 0.0;   // best value before refinement
    double quad_error = 0.0;
};

// K(mu) = sup_eta int mu(dxi)/(1+|xi-eta|^2), searched over a radial grid
// (all supported measures are rotation invariant, so eta reduces to |eta|).
KMuResult k_mu(const NoiseSpec& spec, const KMuSettings& settings = {});

// Single evaluation of int mu(dxi)/(1+|xi-eta|^2) at |eta| = h.
double k_mu_at(const NoiseSpec& spec, double h, double tol = 1e-8);

// K_w / K_h of the moment bounds: mass, 4K(mu) resp. K(mu), pi resp. sqrt(pi).
double k_constant(EquationKind kind, const NoiseSpec& spec,
                  const KMuSettings& settings = {});

}  // namespace fm

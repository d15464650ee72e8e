#pragma once

#include "green.hpp"
#include "noise.hpp"
#include "rng.hpp"
#include "types.hpp"

#include <span>
#include <string>
#include <vector>

namespace fm {

// Draws a time pair (tj, sj) on [0,t]^2 from the density proportional to
// |tj - sj|^{2H-2}; the exact normalizer is t^{2H} / (H(2H-1)), so the
// chaos coefficient becomes alpha_n = t^{2Hn} E_p[psi_n] and the temporal
// singularity cancels from the Monte Carlo weights.
void sample_time_pair(Rng& rng, double t, double hurst, double& tj, double& sj);
double time_pair_normalizer(double t, double hurst);

// Exact diagonal psi_n for the white-space wave case:
//   psi_n(t,t) = (u0 + t_first v0)^2 pi^n u_1...u_n,  t_first = t - sum u_j.
// bound_form replaces the exact factor by the cruder (u0 + t v0)^2.
double psi_diag_closed(const NoiseSpec& spec, EquationKind kind,
                       std::span<const double> gaps, double t, const InitialData& init,
                       bool bound_form = false);

// Diagonal bound on psi_n(t,t): w^2 K_w^n prod u_j^{2-a} (wave) or
// u0^2 K_h^n prod u_j^{-a/2} (heat).  k_const is the precomputed K_w / K_h.
double psi_diag_bound(EquationKind kind, double k_const, double a,
                      std::span<const double> gaps, double t, const InitialData& init);

// Spectral Monte Carlo estimate of psi_n(t_vec, s_vec).
Estimate psi_fourier_mc(const NoiseSpec& spec, EquationKind kind,
                        std::span<const double> t_vec, std::span<const double> s_vec,
                        double t, const InitialData& init, std::int64_t n_samples,
                        std::uint64_t seed = 1);

// Spatial (path-sampling) Monte Carlo estimate of psi_n(t_vec, s_vec);
// requires a pointwise-evaluable kernel (cases (i)-(iii)).
Estimate psi_spatial_mc(const NoiseSpec& spec, EquationKind kind,
                        std::span<const double> t_vec, std::span<const double> s_vec,
                        double t, const InitialData& init, std::int64_t n_samples,
                        std::uint64_t seed = 1, std::int64_t* resamples = nullptr);

struct ChaosBudget {
    std::int64_t outer = 4000;  // time-pair samples
    int inner = 64;             // psi samples per time draw
    int threads = 1;
    std::uint64_t seed = 1;
};

ChaosTerm alpha_n(const NoiseSpec& spec, EquationKind kind, int n, double t,
                  const InitialData& init, const ChaosBudget& budget);

struct ChaosResult {
    MomentEstimate estimate;
    std::vector<ChaosTerm> terms;  // n = 1..N_trunc; the n = 0 term is w^2
    double w_squared = 0.0;
    bool converged = false;
    double last_term_ratio = 0.0;
    std::string warning;
};

ChaosResult second_moment_chaos(const NoiseSpec& spec, EquationKind kind, double t,
                                const InitialData& init, int n_trunc,
                                const ChaosBudget& budget);

// alpha_{n,a}(t) for the white-noise approximation family (wave, d = 1,
// spectral density |xi|^{a-1}); converges to the white-space alpha_n as
// a -> 1.
ChaosTerm alpha_n_riesz_family(double hurst, double a, int n, double t,
                               const InitialData& init, const ChaosBudget& budget);

}  // namespace fm

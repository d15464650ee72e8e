#pragma once

#include "chaos.hpp"
#include "green.hpp"
#include "noise.hpp"
#include "rng.hpp"
#include "types.hpp"

#include <span>
#include <vector>

namespace fm {

// Planar Poisson configuration on [0,t]^2: k points (T_i, S_i).
struct PointConfiguration {
    double t = 0.0;
    std::vector<double> T, S;
    std::int64_t resamples = 0;  // degenerate draws rejected (ties, T = S)
    int count() const { return static_cast<int>(T.size()); }
};

// T and S coordinates sorted, with the permutations mapping sorted
// positions back to point indices.
struct OrderedGaps {
    double t = 0.0;
    std::vector<double> tau, tau_prime;  // sorted coordinates
    std::vector<int> perm_T, perm_S;     // perm[j] = point index at sorted pos j
    // k+1 gaps partitioning [0,t]: tau_1, tau_2-tau_1, ..., t-tau_k
    std::vector<double> gaps_tau() const;
    std::vector<double> gaps_tau_prime() const;
};

PointConfiguration sample_configuration(double t, Rng& rng);
// fixed point count (one stratum), uniform coordinates
PointConfiguration sample_configuration_k(double t, int k, Rng& rng);

OrderedGaps order_gaps(const PointConfiguration& config);

// One random path started at x: knots at the sorted times, slope Theta per
// gap (wave) or sqrt-gap jumps (heat); position(s) interpolates inside the
// containing gap by the defining formula.
struct FkPath {
    EquationKind kind = EquationKind::Wave;
    int dim = 1;
    double t = 0.0;
    std::vector<double> tau;    // sorted knot times
    std::vector<double> start;  // position at time 0
    std::vector<double> knots;  // dim values per knot
    std::vector<double> theta;  // dim values per gap

    void position(double s, std::span<double> out) const;
};

FkPath build_path(std::span<const double> tau, EquationKind kind, int dim,
                  std::span<const double> x, double t, Rng& rng);

// positions of X^1 at every T_i and X^2 at every S_i, indexed by point
struct PathPositions {
    int dim = 1;
    std::vector<double> x1, x2;  // count*dim, point-indexed
    FkPath path1, path2;
};
PathPositions build_paths(const OrderedGaps& gaps, EquationKind kind, int dim,
                          std::span<const double> x, Rng& rng);

// C(x,y): cone with vertex y, axis toward x, half-angle pi/4
bool cone_contains(std::span<const double> x, std::span<const double> y,
                   std::span<const double> z);

// gamma = P(y + Theta0 in C(0,y)) for the wave Theta0 law; independent of y
Estimate gamma_cone(int dim, std::int64_t n_samples, std::uint64_t seed = 1,
                    std::span<const double> y = {});
// closed-form gamma: 1/2, 1/4, (1 - sqrt(2)/2)/2 in d = 1, 2, 3
double gamma_exact(int dim);

// One Theta-sample of the raw configuration weight (Poisson form, the
// singular temporal factor included).
double fk_weight(const PointConfiguration& config, const OrderedGaps& gaps,
                 const NoiseSpec& spec, EquationKind kind, const InitialData& init,
                 std::span<const double> x, Rng& rng, std::int64_t* resamples = nullptr);

struct FkSettings {
    int k_max = -1;                 // < 0: auto (smallest k with t^{2k}/k! < 1e-10)
    std::int64_t configs = 20000;   // configurations per stratum
    int theta_samples = 16;         // Theta draws averaged per configuration
    int threads = 1;
    std::uint64_t seed = 1;
    double tail_tol = 1e-6;         // acceptable k > k_max tail, relative to w^2
};

// Stratified estimator  E|u|^2 = sum_k (t^{2k}/k!) E_unif[Theta-averaged
// weight | k points]; the k = 0 stratum is exact (w(t,x)^2) and time pairs
// are importance-sampled so the |T-S|^{2H-2} singularity cancels.
MomentEstimate fk_estimate(const NoiseSpec& spec, EquationKind kind, double t,
                           std::span<const double> x, const InitialData& init,
                           const FkSettings& settings);

// Naive unstratified estimator e^{t^2} * weight(Poisson configuration);
// kept only to verify the stratified identity at small t.
MomentEstimate fk_raw_estimate(const NoiseSpec& spec, EquationKind kind, double t,
                               const InitialData& init, std::int64_t samples,
                               int theta_samples, std::uint64_t seed, int threads = 1);

struct WhiteLimitResult {
    std::vector<double> a_values;
    std::vector<MomentEstimate> estimates;
    std::vector<double> successive_diffs;  // |est_{i+1} - est_i|
};

// fk_estimate across the white-noise approximation family Riesz(a), a -> 1
WhiteLimitResult fk_estimate_white_limit(EquationKind kind, double hurst, double t,
                                         std::span<const double> x,
                                         const InitialData& init,
                                         std::span<const double> a_sequence,
                                         const FkSettings& settings);

// reported bound on the discarded k > k_max tail of the stratified sum
double fk_tail_bound(const NoiseSpec& spec, EquationKind kind, double t,
                     const InitialData& init, int k_max);

}  // namespace fm

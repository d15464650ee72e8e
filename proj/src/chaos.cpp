#include "chaos.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fm {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace

double time_pair_normalizer(double t, double hurst) {
    return std::pow(t, 2.0 * hurst) / alpha_h(hurst);
}

void sample_time_pair(Rng& rng, double t, double hurst, double& tj, double& sj) {
    require(t > 0.0, "sample_time_pair: t must be positive");
    const double h2 = 2.0 * hurst;  // in (1, 2]
    // gap density on (0,t): (t - w) w^{2H-2}, CDF
    //   F(w) = [t w^{2H-1}/(2H-1) - w^{2H}/(2H)] / [t^{2H} (1/(2H-1) - 1/(2H))]
    const double norm = std::pow(t, h2) * (1.0 / (h2 - 1.0) - 1.0 / h2);
    const double u = rng.uniform();
    double lo = 0.0, hi = t;
    for (int it = 0; it < 80; ++it) {
        const double w = 0.5 * (lo + hi);
        const double cdf =
            (t * std::pow(w, h2 - 1.0) / (h2 - 1.0) - std::pow(w, h2) / h2) / norm;
        (cdf < u ? lo : hi) = w;
    }
    const double w = 0.5 * (lo + hi);
    const double base = rng.uniform(0.0, t - w);
    if (rng.next_u64() & 1u) {
        tj = base;
        sj = base + w;
    } else {
        sj = base;
        tj = base + w;
    }
}

double psi_diag_closed(const NoiseSpec& spec, EquationKind kind,
                       std::span<const double> gaps, double t, const InitialData& init,
                       bool bound_form) {
    if (kind != EquationKind::Wave || spec.kernel() != KernelKind::WhiteSpace)
        throw UnsupportedError(
            "psi_diag_closed: exact diagonal is available for the white-space wave case "
            "only; use psi_fourier_mc");
    double sum = 0.0, prod = 1.0;
    for (double u : gaps) {
        require(u >= 0.0, "psi_diag_closed: gaps must be nonnegative");
        sum += u;
        prod *= kPi * u;
    }
    require(sum <= t + 1e-12, "psi_diag_closed: gaps must sum to at most t");
    const double t_first = bound_form ? t : t - sum;
    const double w = init.u0 + t_first * init.v0;
    return w * w * prod;
}

double psi_diag_bound(EquationKind kind, double k_const, double a,
                      std::span<const double> gaps, double t, const InitialData& init) {
    const double w = homogeneous_solution(kind, t, init);
    double v = w * w;
    const double p = kind == EquationKind::Wave ? 2.0 - a : -0.5 * a;
    for (double u : gaps) {
        require(u > 0.0, "psi_diag_bound: gaps must be positive");
        v *= k_const * std::pow(u, p);
    }
    return v;
}

// --- shared sampling machinery -------------------------------------------

namespace {

struct SortedTimes {
    std::vector<int> order;   // order[j] = index of the (j+1)-th smallest time
    std::vector<int> rank;    // rank[i] = sorted position of index i
    std::vector<double> gap;  // gap[j] = t_{(j+2)} - t_{(j+1)}, top gap to t
    double first = 0.0;       // smallest time
};

SortedTimes sort_times(std::span<const double> v, double t) {
    const int n = static_cast<int>(v.size());
    SortedTimes s;
    s.order.resize(n);
    std::iota(s.order.begin(), s.order.end(), 0);
    std::stable_sort(s.order.begin(), s.order.end(),
                     [&](int a, int b) { return v[a] < v[b]; });
    s.rank.resize(n);
    for (int j = 0; j < n; ++j) s.rank[s.order[j]] = j;
    s.gap.resize(n);
    for (int j = 0; j < n; ++j) {
        const double hi = j + 1 < n ? v[s.order[j + 1]] : t;
        s.gap[j] = hi - v[s.order[j]];
    }
    s.first = n > 0 ? v[s.order[0]] : t;
    return s;
}

double green_fourier(EquationKind kind, double dt, double r) {
    return kind == EquationKind::Wave ? gw_fourier(dt, r) : gh_fourier(dt, r);
}

double w_factor(EquationKind kind, double first_time, const InitialData& init) {
    return kind == EquationKind::Wave ? init.u0 + first_time * init.v0 : init.u0;
}

double cauchy_pdf(double x, double gamma) {
    return gamma / (kPi * (gamma * gamma + x * x));
}

double sphere_area(int dim) {
    // surface measure of S^{d-1}: 2, 2pi, 4pi
    return 2.0 * std::pow(kPi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

// draws one frequency vector from the importance proposal for mu and
// returns the weight mu(xi) / q(xi); riesz-type kernels use the radial
// mixture  r^{alpha-1} on (0,1] plus r^{alpha-3} on (1, inf)
void sample_riesz_1d(Rng& rng, double alpha, double density_const, double& xi,
                     double& weight) {
    const double mass_in = 1.0 / alpha;
    const double mass_out = 1.0 / (2.0 - alpha);
    const double total = mass_in + mass_out;
    const double u = rng.uniform();
    double r, ratio;  // ratio = r^{alpha-1} / chosen branch density shape
    if (rng.uniform() < mass_in / total) {
        r = std::pow(u, 1.0 / alpha);
        ratio = 1.0;
    } else {
        r = std::pow(1.0 - u, -1.0 / (2.0 - alpha));
        ratio = r * r;
    }
    xi = rng.sign() * r;
    // q(xi) = branch(r) / (2 total); mu density = density_const r^{alpha-1}
    weight = density_const * 2.0 * total * ratio;
}

void sample_frequency(const NoiseSpec& spec, Rng& rng, std::span<double> xi,
                      double& weight) {
    const int d = spec.dim();
    switch (spec.kernel()) {
        case KernelKind::SmoothFinite: {
            for (int j = 0; j < d; ++j) xi[j] = rng.normal();
            weight = spec.spectral_scale();
            return;
        }
        case KernelKind::Riesz: {
            const double alpha = spec.riesz_alpha();
            const double c = spec.spectral_scale() * riesz_constant(alpha, d);
            if (d == 1) {
                sample_riesz_1d(rng, alpha, c, xi[0], weight);
                return;
            }
            const double mass_in = 1.0 / alpha;
            const double mass_out = 1.0 / (2.0 - alpha);
            const double total = mass_in + mass_out;
            const double u = rng.uniform();
            double r, ratio;
            if (rng.uniform() < mass_in / total) {
                r = std::pow(u, 1.0 / alpha);
                ratio = 1.0;
            } else {
                r = std::pow(1.0 - u, -1.0 / (2.0 - alpha));
                ratio = r * r;
            }
            if (d == 3) {
                const double z = rng.uniform(-1.0, 1.0);
                const double phi = rng.uniform(0.0, 2.0 * kPi);
                const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
                xi[0] = r * s * std::cos(phi);
                xi[1] = r * s * std::sin(phi);
                xi[2] = r * z;
            } else {
                const double phi = rng.uniform(0.0, 2.0 * kPi);
                xi[0] = r * std::cos(phi);
                xi[1] = r * std::sin(phi);
            }
            // q has radial shape branch(r)/total over r and uniform direction:
            // q(xi) = branch(r) / (total omega_{d-1} r^{d-1});
            // mu(xi) = c r^{alpha-d}
            weight = c * total * sphere_area(d) * ratio;
            return;
        }
        case KernelKind::ProductFractional: {
            weight = spec.spectral_scale();
            for (int j = 0; j < d; ++j) {
                double wj;
                const double aj = spec.product_alphas()[j];
                sample_riesz_1d(rng, aj, riesz_constant(aj, 1), xi[j], wj);
                weight *= wj;
            }
            return;
        }
        case KernelKind::WhiteSpace:
            throw UnsupportedError("sample_frequency: white-space uses the chain proposal");
    }
}

double norm_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// one Monte Carlo draw of the spectral integrand of psi_n
double psi_fourier_sample(const NoiseSpec& spec, EquationKind kind,
                          std::span<const double> t_vec, std::span<const double> s_vec,
                          const SortedTimes& st, const SortedTimes& ss, double t,
                          const InitialData& init, Rng& rng) {
    const int n = static_cast<int>(t_vec.size());
    const int d = spec.dim();
    const double wfac = w_factor(kind, st.first, init) * w_factor(kind, ss.first, init);

    if (spec.kernel() == KernelKind::WhiteSpace) {
        // d=1: change variables to the t-side partial sums eta_j, which are
        // Cauchy-proposed at scale 1/gap (mu is Lebesgue, Jacobian 1)
        std::vector<double> eta(n), xi(n);
        double value = wfac;
        for (int j = 0; j < n; ++j) {
            const double gamma = 1.0 / std::max(st.gap[j], 1e-3 * t);
            eta[j] = gamma * std::tan(kPi * (rng.uniform() - 0.5));
            value *= green_fourier(kind, st.gap[j], std::abs(eta[j])) /
                     cauchy_pdf(eta[j], gamma);
            xi[st.order[j]] = eta[j] - (j > 0 ? eta[j - 1] : 0.0);
        }
        double part = 0.0;
        for (int j = 0; j < n; ++j) {
            part += xi[ss.order[j]];
            value *= green_fourier(kind, ss.gap[j], std::abs(part));
        }
        return value;
    }

    std::vector<double> xi(n * d);
    double value = wfac;
    for (int i = 0; i < n; ++i) {
        double w = 0.0;
        sample_frequency(spec, rng, std::span<double>(xi.data() + i * d, d), w);
        value *= w;
    }
    std::vector<double> part(d, 0.0);
    for (int j = 0; j < n; ++j) {
        const double* x = xi.data() + st.order[j] * d;
        for (int c = 0; c < d; ++c) part[c] += x[c];
        value *= green_fourier(kind, st.gap[j], norm_of(part));
    }
    std::fill(part.begin(), part.end(), 0.0);
    for (int j = 0; j < n; ++j) {
        const double* x = xi.data() + ss.order[j] * d;
        for (int c = 0; c < d; ++c) part[c] += x[c];
        value *= green_fourier(kind, ss.gap[j], norm_of(part));
    }
    return value;
}

// one Monte Carlo draw of the spatial form of psi_n (cases (i)-(iii))
double psi_spatial_sample(const NoiseSpec& spec, EquationKind kind,
                          std::span<const double> t_vec, std::span<const double> s_vec,
                          const SortedTimes& st, const SortedTimes& ss, double t,
                          const InitialData& init, Rng& rng, std::int64_t* resamples) {
    const int n = static_cast<int>(t_vec.size());
    const int d = spec.dim();
    const ThetaSampler theta(kind, d);

    double value = w_factor(kind, st.first, init) * w_factor(kind, ss.first, init);
    if (kind == EquationKind::Wave) {
        for (int j = 0; j < n; ++j) value *= st.gap[j] * ss.gap[j];
        if (value == 0.0) return 0.0;
    }

    for (int attempt = 0;; ++attempt) {
        // positions at sorted indices, built downward from the top (origin)
        std::vector<double> xpos(n * d), ypos(n * d), th(3);
        for (int j = n - 1; j >= 0; --j) {
            theta.sample(rng, th);
            const double sc = theta.scale(st.gap[j]);
            for (int c = 0; c < d; ++c)
                xpos[st.order[j] * d + c] =
                    (j + 1 < n ? xpos[st.order[j + 1] * d + c] : 0.0) + sc * th[c];
        }
        for (int j = n - 1; j >= 0; --j) {
            theta.sample(rng, th);
            const double sc = theta.scale(ss.gap[j]);
            for (int c = 0; c < d; ++c)
                ypos[ss.order[j] * d + c] =
                    (j + 1 < n ? ypos[ss.order[j + 1] * d + c] : 0.0) + sc * th[c];
        }
        double fprod = 1.0;
        bool singular = false;
        std::vector<double> diff(d);
        for (int i = 0; i < n && !singular; ++i) {
            for (int c = 0; c < d; ++c) diff[c] = xpos[i * d + c] - ypos[i * d + c];
            if (!spec.is_pointwise_kernel()) {
                throw UnsupportedError("psi_spatial_mc: white-space kernel is not pointwise");
            }
            const double fv = spec.f(diff);
            if (!std::isfinite(fv)) {
                singular = true;
                break;
            }
            fprod *= fv;
        }
        if (!singular) return value * fprod;
        if (resamples) ++*resamples;
        if (attempt > 64)
            throw BudgetError("psi_spatial_mc: persistent kernel singularity hits");
    }
}

}  // namespace

Estimate psi_fourier_mc(const NoiseSpec& spec, EquationKind kind,
                        std::span<const double> t_vec, std::span<const double> s_vec,
                        double t, const InitialData& init, std::int64_t n_samples,
                        std::uint64_t seed) {
    require(t_vec.size() == s_vec.size() && !t_vec.empty(), "psi_fourier_mc: bad arguments");
    for (double v : t_vec) require(v >= 0.0 && v <= t, "psi_fourier_mc: times must lie in [0,t]");
    for (double v : s_vec) require(v >= 0.0 && v <= t, "psi_fourier_mc: times must lie in [0,t]");
    const SortedTimes st = sort_times(t_vec, t);
    const SortedTimes ss = sort_times(s_vec, t);
    std::vector<double> buf(n_samples);
    for (std::int64_t i = 0; i < n_samples; ++i) {
        Rng rng(seed, 0x9F0Aull, static_cast<std::uint64_t>(i));
        buf[i] = psi_fourier_sample(spec, kind, t_vec, s_vec, st, ss, t, init, rng);
    }
    const MeanStderr m = reduce_mean(buf);
    return {m.mean, m.stderr_of_mean, m.n};
}

Estimate psi_spatial_mc(const NoiseSpec& spec, EquationKind kind,
                        std::span<const double> t_vec, std::span<const double> s_vec,
                        double t, const InitialData& init, std::int64_t n_samples,
                        std::uint64_t seed, std::int64_t* resamples) {
    require(t_vec.size() == s_vec.size() && !t_vec.empty(), "psi_spatial_mc: bad arguments");
    if (!spec.is_pointwise_kernel())
        throw UnsupportedError("psi_spatial_mc: white-space kernel is not pointwise");
    if (kind == EquationKind::Wave && spec.dim() > 3)
        throw UnsupportedError("psi_spatial_mc: wave paths need d <= 3");
    const SortedTimes st = sort_times(t_vec, t);
    const SortedTimes ss = sort_times(s_vec, t);
    std::vector<double> buf(n_samples);
    std::int64_t res = 0;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        Rng rng(seed, 0x51A7ull, static_cast<std::uint64_t>(i));
        buf[i] = psi_spatial_sample(spec, kind, t_vec, s_vec, st, ss, t, init, rng, &res);
    }
    if (resamples) *resamples = res;
    const MeanStderr m = reduce_mean(buf);
    return {m.mean, m.stderr_of_mean, m.n};
}

ChaosTerm alpha_n(const NoiseSpec& spec, EquationKind kind, int n, double t,
                  const InitialData& init, const ChaosBudget& budget) {
    require(n >= 1, "alpha_n: n must be >= 1");
    if (n > 16 || budget.outer < 2)
        throw BudgetError("alpha_n: budget too small for requested order; "
                          "use n <= 16 and outer >= 2");
    const auto dal = dalang_check(spec);
    if (!dal.satisfied) throw DalangError("alpha_n: " + dal.note);

    // spectral sampling for d=1 singular kernels: pointwise evaluation of
    // |x|^{-a} has infinite variance once a >= 1/2
    const bool fourier = spec.kernel() == KernelKind::WhiteSpace ||
                         (spec.kernel() == KernelKind::Riesz && spec.dim() == 1);
    ChaosTerm term;
    term.n = n;
    term.method = fourier ? Method::FourierMc : Method::SpatialMc;
    term.samples = 0;
    if (t == 0.0) return term;

    const double scale = std::pow(t, 2.0 * spec.hurst() * n);
    std::vector<double> buf(budget.outer);
    parallel_for(budget.outer, budget.threads, [&](std::int64_t i) {
        Rng rng(budget.seed, 0xA1F4ull, static_cast<std::uint64_t>(n),
                static_cast<std::uint64_t>(i));
        std::vector<double> tv(n), sv(n);
        for (int j = 0; j < n; ++j) sample_time_pair(rng, t, spec.hurst(), tv[j], sv[j]);
        const SortedTimes st = sort_times(tv, t);
        const SortedTimes ss = sort_times(sv, t);
        double acc = 0.0;
        for (int m = 0; m < budget.inner; ++m) {
            acc += fourier ? psi_fourier_sample(spec, kind, tv, sv, st, ss, t, init, rng)
                           : psi_spatial_sample(spec, kind, tv, sv, st, ss, t, init, rng,
                                                nullptr);
        }
        buf[i] = acc / budget.inner;
    });
    const MeanStderr m = reduce_mean(buf);
    term.value = scale * m.mean;
    term.stderr_of_mean = scale * m.stderr_of_mean;
    term.samples = budget.outer * budget.inner;
    return term;
}

ChaosResult second_moment_chaos(const NoiseSpec& spec, EquationKind kind, double t,
                                const InitialData& init, int n_trunc,
                                const ChaosBudget& budget) {
    require(n_trunc >= 1, "second_moment_chaos: need N_trunc >= 1");
    ChaosResult out;
    const double w = homogeneous_solution(kind, t, init);
    out.w_squared = w * w;
    double value = w * w;
    double var = 0.0;
    std::int64_t samples = 0;
    double lfact = 0.0;  // log n!
    std::vector<double> contrib;
    for (int n = 1; n <= n_trunc; ++n) {
        lfact += std::log(n);
        ChaosTerm term = t == 0.0 ? ChaosTerm{n, 0.0, 0.0, Method::SpatialMc, 0}
                                  : alpha_n(spec, kind, n, t, init, budget);
        out.terms.push_back(term);
        const double fact = std::exp(-lfact);
        contrib.push_back(term.value * fact);
        value += term.value * fact;
        var += term.stderr_of_mean * fact * term.stderr_of_mean * fact;
        samples += term.samples;
    }
    out.estimate.value = value;
    out.estimate.stderr_of_mean = std::sqrt(var);
    out.estimate.method = Method::Chaos;
    out.estimate.seed = budget.seed;
    out.estimate.samples = samples;
    const int nn = static_cast<int>(contrib.size());
    out.last_term_ratio = value > 0.0 ? contrib.back() / value : 0.0;
    const bool small_tail =
        nn >= 2 ? (contrib[nn - 1] < 1e-3 * value && contrib[nn - 2] < 1e-3 * value)
                : contrib.back() < 1e-3 * value;
    const bool decreasing = nn < 2 || contrib[nn - 1] <= contrib[nn - 2];
    out.converged = small_tail && decreasing;
    if (!decreasing)
        out.warning = "truncation warning: tail terms are not decreasing";
    else if (!small_tail)
        out.warning = "truncation warning: last terms contribute more than 0.1%";
    return out;
}

ChaosTerm alpha_n_riesz_family(double hurst, double a, int n, double t,
                               const InitialData& init, const ChaosBudget& budget) {
    const NoiseSpec spec = NoiseSpec::riesz_white_family(hurst, a);
    return alpha_n(spec, EquationKind::Wave, n, t, init, budget);
}

}  // namespace fm

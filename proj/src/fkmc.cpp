#include "fkmc.hpp"

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

bool has_degenerate_point(const std::vector<double>& T, const std::vector<double>& S,
                          int j) {
    if (T[j] == S[j]) return true;
    for (int i = 0; i < static_cast<int>(T.size()); ++i) {
        if (i == j) continue;
        if (T[i] == T[j] || S[i] == S[j]) return true;
    }
    return false;
}

}  // namespace

namespace {
// k+1 gaps partitioning [0,t]: tau_1, tau_2-tau_1, ..., t-tau_k
std::vector<double> partition_gaps(const std::vector<double>& sorted, double t) {
    std::vector<double> g(sorted.size() + 1);
    double prev = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        g[j] = sorted[j] - prev;
        prev = sorted[j];
    }
    g[sorted.size()] = t - prev;
    return g;
}
}  // namespace

std::vector<double> OrderedGaps::gaps_tau() const { return partition_gaps(tau, t); }

std::vector<double> OrderedGaps::gaps_tau_prime() const {
    return partition_gaps(tau_prime, t);
}

PointConfiguration sample_configuration_k(double t, int k, Rng& rng) {
    require(t > 0.0, "sample_configuration: t must be positive");
    require(k >= 0, "sample_configuration: k must be nonnegative");
    PointConfiguration cfg;
    cfg.t = t;
    cfg.T.resize(k);
    cfg.S.resize(k);
    for (int j = 0; j < k; ++j) {
        cfg.T[j] = rng.uniform(0.0, t);
        cfg.S[j] = rng.uniform(0.0, t);
        while (has_degenerate_point(cfg.T, cfg.S, j)) {
            ++cfg.resamples;
            cfg.T[j] = rng.uniform(0.0, t);
            cfg.S[j] = rng.uniform(0.0, t);
        }
    }
    return cfg;
}

PointConfiguration sample_configuration(double t, Rng& rng) {
    return sample_configuration_k(t, rng.poisson(t * t), rng);
}

OrderedGaps order_gaps(const PointConfiguration& config) {
    const int k = config.count();
    OrderedGaps g;
    g.t = config.t;
    g.perm_T.resize(k);
    g.perm_S.resize(k);
    std::iota(g.perm_T.begin(), g.perm_T.end(), 0);
    std::iota(g.perm_S.begin(), g.perm_S.end(), 0);
    std::sort(g.perm_T.begin(), g.perm_T.end(),
              [&](int a, int b) { return config.T[a] < config.T[b]; });
    std::sort(g.perm_S.begin(), g.perm_S.end(),
              [&](int a, int b) { return config.S[a] < config.S[b]; });
    g.tau.resize(k);
    g.tau_prime.resize(k);
    for (int j = 0; j < k; ++j) {
        g.tau[j] = config.T[g.perm_T[j]];
        g.tau_prime[j] = config.S[g.perm_S[j]];
    }
    for (int j = 1; j < k; ++j)
        if (g.tau[j] == g.tau[j - 1] || g.tau_prime[j] == g.tau_prime[j - 1])
            throw std::logic_error("order_gaps: tie survived configuration rejection");
    return g;
}

void FkPath::position(double s, std::span<double> out) const {
    if (s < 0.0 || s > t) throw DomainError("FkPath::position: query outside [0, t]");
    require(static_cast<int>(out.size()) >= dim, "FkPath::position: output too small");
    // containing gap: tau[i-1] < s <= tau[i] uses theta[i]
    const int k = static_cast<int>(tau.size());
    int i = 0;
    while (i < k && tau[i] < s) ++i;
    const double base_time = i > 0 ? tau[i - 1] : 0.0;
    const double* base = i > 0 ? &knots[(i - 1) * dim] : start.data();
    const double sc = kind == EquationKind::Wave ? s - base_time : std::sqrt(s - base_time);
    for (int c = 0; c < dim; ++c) out[c] = base[c] + sc * theta[i * dim + c];
}

FkPath build_path(std::span<const double> tau, EquationKind kind, int dim,
                  std::span<const double> x, double t, Rng& rng) {
    FkPath p;
    p.kind = kind;
    p.dim = dim;
    p.t = t;
    p.tau.assign(tau.begin(), tau.end());
    p.start.assign(dim, 0.0);
    if (!x.empty()) {
        require(static_cast<int>(x.size()) == dim, "build_path: x has wrong dimension");
        p.start.assign(x.begin(), x.end());
    }
    const int k = static_cast<int>(tau.size());
    const ThetaSampler sampler(kind, dim);
    p.theta.resize((k + 1) * dim);  // one extra draw covers (tau_k, t]
    std::vector<double> th(3);
    for (int i = 0; i <= k; ++i) {
        sampler.sample(rng, th);
        for (int c = 0; c < dim; ++c) p.theta[i * dim + c] = th[c];
    }
    p.knots.resize(k * dim);
    for (int i = 0; i < k; ++i) {
        const double gap = tau[i] - (i > 0 ? tau[i - 1] : 0.0);
        const double sc = sampler.scale(gap);
        const double* base = i > 0 ? &p.knots[(i - 1) * dim] : p.start.data();
        for (int c = 0; c < dim; ++c)
            p.knots[i * dim + c] = base[c] + sc * p.theta[i * dim + c];
    }
    return p;
}

PathPositions build_paths(const OrderedGaps& gaps, EquationKind kind, int dim,
                          std::span<const double> x, Rng& rng) {
    const int k = static_cast<int>(gaps.tau.size());
    PathPositions out;
    out.dim = dim;
    out.path1 = build_path(gaps.tau, kind, dim, x, gaps.t, rng);
    out.path2 = build_path(gaps.tau_prime, kind, dim, x, gaps.t, rng);
    out.x1.resize(k * dim);
    out.x2.resize(k * dim);
    for (int j = 0; j < k; ++j) {
        for (int c = 0; c < dim; ++c) {
            out.x1[gaps.perm_T[j] * dim + c] = out.path1.knots[j * dim + c];
            out.x2[gaps.perm_S[j] * dim + c] = out.path2.knots[j * dim + c];
        }
    }
    return out;
}

bool cone_contains(std::span<const double> x, std::span<const double> y,
                   std::span<const double> z) {
    const std::size_t d = y.size();
    require(x.size() == d && z.size() == d, "cone_contains: dimension mismatch");
    double axis2 = 0.0, v2 = 0.0, dot = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double ax = x[c] - y[c];
        const double v = z[c] - y[c];
        axis2 += ax * ax;
        v2 += v * v;
        dot += ax * v;
    }
    require(axis2 > 0.0, "cone_contains: x must differ from y");
    if (v2 == 0.0) return true;
    // angle <= pi/4  <=>  dot >= cos(pi/4) |axis| |v|
    return dot >= 0.0 && dot * dot >= 0.5 * axis2 * v2;
}

double gamma_exact(int dim) {
    switch (dim) {
        case 1: return 0.5;
        case 2: return 0.25;
        case 3: return 0.5 * (1.0 - std::sqrt(2.0) / 2.0);
    }
    throw DomainError("gamma_exact: dim must be 1, 2, or 3");
}

Estimate gamma_cone(int dim, std::int64_t n_samples, std::uint64_t seed,
                    std::span<const double> y) {
    require(dim >= 1 && dim <= 3, "gamma_cone: dim must be 1, 2, or 3");
    require(n_samples > 1, "gamma_cone: need at least 2 samples");
    std::vector<double> yv(dim, 0.0);
    if (y.empty()) {
        yv[0] = 1.0;
    } else {
        require(static_cast<int>(y.size()) == dim, "gamma_cone: y has wrong dimension");
        yv.assign(y.begin(), y.end());
        double n2 = 0.0;
        for (double v : yv) n2 += v * v;
        require(n2 > 0.0, "gamma_cone: y must be nonzero");
    }
    const std::vector<double> origin(dim, 0.0);
    const ThetaSampler sampler(EquationKind::Wave, dim);
    std::vector<double> buf(n_samples);
    for (std::int64_t i = 0; i < n_samples; ++i) {
        Rng rng(seed, 0xC09Eull, static_cast<std::uint64_t>(i));
        std::vector<double> th(3), z(dim);
        sampler.sample(rng, th);
        for (int c = 0; c < dim; ++c) z[c] = yv[c] + th[c];
        buf[i] = cone_contains(origin, yv, z) ? 1.0 : 0.0;
    }
    const MeanStderr m = reduce_mean(buf);
    return {m.mean, m.stderr_of_mean, m.n};
}

double fk_weight(const PointConfiguration& config, const OrderedGaps& gaps,
                 const NoiseSpec& spec, EquationKind kind, const InitialData& init,
                 std::span<const double> x, Rng& rng, std::int64_t* resamples) {
    const int k = config.count();
    const double t = config.t;
    if (k == 0) {
        const double w = homogeneous_solution(kind, t, init);
        return w * w;
    }
    if (!spec.is_pointwise_kernel())
        throw UnsupportedError(
            "fk_weight: white-space kernel is not pointwise; use the a -> 1 "
            "white-limit route");
    const int d = spec.dim();
    const double ah = spec.alpha_H();
    const double h2 = 2.0 * spec.hurst() - 2.0;

    double fixed = ah;
    for (int j = 1; j < k; ++j) fixed *= ah;
    for (int j = 0; j < k; ++j) fixed *= std::pow(std::abs(config.T[j] - config.S[j]), h2);
    if (kind == EquationKind::Wave) {
        const double wt = init.u0 + (t - gaps.tau.back()) * init.v0;
        const double ws = init.u0 + (t - gaps.tau_prime.back()) * init.v0;
        fixed *= wt * ws;
        // the weight carries only the k leading gaps; the final segments
        // enter through the w factors above
        const auto gt = gaps.gaps_tau(), gs = gaps.gaps_tau_prime();
        for (int j = 0; j < k; ++j) fixed *= gt[j] * gs[j];
    } else {
        fixed *= init.u0 * init.u0;
    }

    for (int attempt = 0;; ++attempt) {
        const PathPositions pos = build_paths(gaps, kind, d, x, rng);
        double fprod = 1.0;
        bool singular = false;
        std::vector<double> diff(d);
        for (int j = 0; j < k; ++j) {
            for (int c = 0; c < d; ++c) diff[c] = pos.x1[j * d + c] - pos.x2[j * d + c];
            const double fv = spec.f(diff);
            if (!std::isfinite(fv)) {
                singular = true;
                break;
            }
            fprod *= fv;
        }
        if (!singular) return fixed * fprod;
        if (resamples) ++*resamples;
        if (attempt > 64) throw BudgetError("fk_weight: persistent kernel singularity hits");
    }
}

double fk_tail_bound(const NoiseSpec& spec, EquationKind kind, double t,
                     const InitialData& init, int k_max) {
    const double a = spec.exponent_a();
    const double h = spec.hurst();
    const double w = homogeneous_solution(kind, t, init);
    const double kc = k_constant(kind, spec);
    double tail = 0.0;
    if (kind == EquationKind::Wave) {
        // alpha_k/k! <= w^2 (K_w t^{2H+2-a})^k / k!
        const double z = kc * std::pow(t, 2.0 * h + 2.0 - a);
        double lterm = (k_max + 1) * std::log(z) - std::lgamma(k_max + 2.0);
        for (int k = k_max + 1; k < k_max + 500; ++k) {
            const double term = w * w * std::exp(lterm);
            tail += term;
            if (term < 1e-18 * (tail + 1e-300)) break;
            lterm += std::log(z) - std::log(k + 1.0);
        }
    } else {
        // alpha_k/k! <= u0^2 t q^k / Gamma(k(1 - a/2) + 2),
        // q = 2H K_h Gamma(1 - a/2) t^{2H - a/2}
        const double b = 1.0 - 0.5 * a;
        const double q = 2.0 * h * kc * std::tgamma(b) * std::pow(t, 2.0 * h - 0.5 * a);
        for (int k = k_max + 1; k < k_max + 500; ++k) {
            const double term =
                init.u0 * init.u0 * t * std::exp(k * std::log(q) - std::lgamma(k * b + 2.0));
            tail += term;
            if (term < 1e-18 * (tail + 1e-300)) break;
        }
    }
    return tail;
}

MomentEstimate fk_estimate(const NoiseSpec& spec, EquationKind kind, double t,
                           std::span<const double> x, const InitialData& init,
                           const FkSettings& settings) {
    require(t > 0.0, "fk_estimate: t must be positive");
    require(settings.configs >= 2 && settings.theta_samples >= 1,
            "fk_estimate: bad sampling budget");
    if (!spec.is_pointwise_kernel())
        throw UnsupportedError(
            "fk_estimate: white-space kernel is not supported directly; use "
            "fk_estimate_white_limit");
    const auto dal = dalang_check(spec);
    if (!dal.satisfied) throw DalangError("fk_estimate: " + dal.note);

    const int d = spec.dim();
    if (!x.empty())
        require(static_cast<int>(x.size()) == d, "fk_estimate: x has wrong dimension");
    const double w0 = homogeneous_solution(kind, t, init);

    int k_max = settings.k_max;
    if (k_max < 0) {
        k_max = 1;
        double lw = 2.0 * std::log(t);  // log of t^{2k}/k! at k = 1
        while (lw >= std::log(1e-10) && k_max < 60) {
            ++k_max;
            lw += 2.0 * std::log(t) - std::log(static_cast<double>(k_max));
        }
        while (k_max < 60 &&
               fk_tail_bound(spec, kind, t, init, k_max) > settings.tail_tol * w0 * w0)
            ++k_max;
    }
    const double tail = fk_tail_bound(spec, kind, t, init, k_max);
    if (tail > settings.tail_tol * w0 * w0) {
        int suggest = k_max;
        while (suggest < 80 &&
               fk_tail_bound(spec, kind, t, init, suggest) > settings.tail_tol * w0 * w0)
            ++suggest;
        throw BudgetError("fk_estimate: k_max too small for the tail tolerance; use k_max >= " +
                          std::to_string(suggest));
    }

    MomentEstimate out;
    out.method = kind == EquationKind::Wave ? Method::FkWave : Method::FkHeat;
    out.seed = settings.seed;
    out.tail_bound = tail;
    out.strata.push_back({0, 1.0, w0 * w0, 0.0, 0, 0});
    double value = w0 * w0;
    double var = 0.0;

    const double h = spec.hurst();
    const double tfac = std::pow(t, 2.0 * h - 2.0);  // per-pair IS weight
    double lpois = 0.0;                              // log t^{2k}/k!

    for (int k = 1; k <= k_max; ++k) {
        lpois += 2.0 * std::log(t) - std::log(static_cast<double>(k));
        const double weight_k = std::exp(lpois);
        std::vector<double> buf(settings.configs);
        std::vector<std::int64_t> res(settings.configs, 0);
        parallel_for(settings.configs, settings.threads, [&](std::int64_t i) {
            Rng rng(settings.seed, 0xFE1Dull, static_cast<std::uint64_t>(k),
                    static_cast<std::uint64_t>(i));
            PointConfiguration cfg;
            cfg.t = t;
            cfg.T.resize(k);
            cfg.S.resize(k);
            for (int j = 0; j < k; ++j) {
                sample_time_pair(rng, t, h, cfg.T[j], cfg.S[j]);
                while (has_degenerate_point(cfg.T, cfg.S, j)) {
                    ++cfg.resamples;
                    sample_time_pair(rng, t, h, cfg.T[j], cfg.S[j]);
                }
            }
            const OrderedGaps gaps = order_gaps(cfg);

            double fixed = 1.0;
            for (int j = 0; j < k; ++j) fixed *= tfac;
            if (kind == EquationKind::Wave) {
                fixed *= (init.u0 + (t - gaps.tau.back()) * init.v0) *
                         (init.u0 + (t - gaps.tau_prime.back()) * init.v0);
                const auto gt = gaps.gaps_tau(), gs = gaps.gaps_tau_prime();
                for (int j = 0; j < k; ++j) fixed *= gt[j] * gs[j];
            } else {
                fixed *= init.u0 * init.u0;
            }

            double acc = 0.0;
            std::vector<double> diff(d);
            for (int m = 0; m < settings.theta_samples; ++m) {
                for (int attempt = 0;; ++attempt) {
                    const PathPositions pos = build_paths(gaps, kind, d, x, rng);
                    double fprod = 1.0;
                    bool singular = false;
                    for (int j = 0; j < k; ++j) {
                        for (int c = 0; c < d; ++c)
                            diff[c] = pos.x1[j * d + c] - pos.x2[j * d + c];
                        const double fv = spec.f(diff);
                        if (!std::isfinite(fv)) {
                            singular = true;
                            break;
                        }
                        fprod *= fv;
                    }
                    if (!singular) {
                        acc += fprod;
                        break;
                    }
                    ++res[i];
                    if (attempt > 64)
                        throw BudgetError("fk_estimate: persistent kernel singularity hits");
                }
            }
            buf[i] = fixed * acc / settings.theta_samples;
            res[i] += cfg.resamples;
        });
        const MeanStderr m = reduce_mean(buf);
        for (std::int64_t r : res) out.resamples += r;
        out.strata.push_back({k, weight_k, m.mean, m.stderr_of_mean, m.n,
                              static_cast<std::int64_t>(settings.theta_samples)});
        value += weight_k * m.mean;
        var += weight_k * weight_k * m.stderr_of_mean * m.stderr_of_mean;
        out.samples += m.n * settings.theta_samples;
    }
    out.value = value;
    out.stderr_of_mean = std::sqrt(var);
    return out;
}

MomentEstimate fk_raw_estimate(const NoiseSpec& spec, EquationKind kind, double t,
                               const InitialData& init, std::int64_t samples,
                               int theta_samples, std::uint64_t seed, int threads) {
    require(t > 0.0 && samples >= 2 && theta_samples >= 1, "fk_raw_estimate: bad arguments");
    std::vector<double> buf(samples);
    std::vector<std::int64_t> res(samples, 0);
    const double boost = std::exp(t * t);
    parallel_for(samples, threads, [&](std::int64_t i) {
        Rng rng(seed, 0xB0B5ull, static_cast<std::uint64_t>(i));
        const PointConfiguration cfg = sample_configuration(t, rng);
        const OrderedGaps gaps = order_gaps(cfg);
        double acc = 0.0;
        for (int m = 0; m < theta_samples; ++m)
            acc += fk_weight(cfg, gaps, spec, kind, init, {}, rng, &res[i]);
        buf[i] = boost * acc / theta_samples;
        res[i] += cfg.resamples;
    });
    const MeanStderr m = reduce_mean(buf);
    MomentEstimate out;
    out.value = m.mean;
    out.stderr_of_mean = m.stderr_of_mean;
    out.samples = samples * theta_samples;
    out.seed = seed;
    out.method = kind == EquationKind::Wave ? Method::FkWave : Method::FkHeat;
    for (std::int64_t r : res) out.resamples += r;
    return out;
}

WhiteLimitResult fk_estimate_white_limit(EquationKind kind, double hurst, double t,
                                         std::span<const double> x,
                                         const InitialData& init,
                                         std::span<const double> a_sequence,
                                         const FkSettings& settings) {
    require(!a_sequence.empty(), "fk_estimate_white_limit: empty a sequence");
    for (std::size_t i = 0; i < a_sequence.size(); ++i) {
        require(a_sequence[i] > 0.5 && a_sequence[i] < 1.0,
                "fk_estimate_white_limit: a values must lie in (1/2, 1)");
        if (i > 0)
            require(a_sequence[i] > a_sequence[i - 1],
                    "fk_estimate_white_limit: a sequence must increase");
    }
    WhiteLimitResult out;
    for (double a : a_sequence) {
        const NoiseSpec spec = NoiseSpec::riesz_white_family(hurst, a);
        out.a_values.push_back(a);
        out.estimates.push_back(fk_estimate(spec, kind, t, x, init, settings));
    }
    for (std::size_t i = 1; i < out.estimates.size(); ++i)
        out.successive_diffs.push_back(
            std::abs(out.estimates[i].value - out.estimates[i - 1].value));
    return out;
}

}  // namespace fm

#include "fracmoment.h"

#include "bounds.hpp"
#include "chaos.hpp"
#include "fkmc.hpp"
#include "noise.hpp"
#include "types.hpp"

#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
fm_status guarded(Fn&& fn) {
    try {
        fn();
        return FM_OK;
    } catch (const fm::DomainError& e) {
        set_error(e.what());
        return FM_ERR_DOMAIN;
    } catch (const fm::DalangError& e) {
        set_error(e.what());
        return FM_ERR_DALANG;
    } catch (const fm::BudgetError& e) {
        set_error(e.what());
        return FM_ERR_BUDGET;
    } catch (const fm::UnsupportedError& e) {
        set_error(e.what());
        return FM_ERR_UNSUPPORTED;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FM_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown failure");
        return FM_ERR_INTERNAL;
    }
}

void put(double* dst, double v) {
    if (dst) *dst = v;
}

}  // namespace

struct fm_problem {
    fm::EquationKind kind;
    fm::NoiseSpec spec;
    fm::InitialData init;
};

extern "C" {

const char* fm_version(void) { return "0.1.0"; }

const char* fm_last_error(void) { return g_last_error.c_str(); }

fm_status fm_problem_create(const char* equation, const char* kernel, double hurst,
                            int dim, const double* alphas, int n_alphas, double u0,
                            double v0, fm_problem** out) {
    return guarded([&] {
        if (!equation || !kernel || !out) throw fm::DomainError("null argument");
        fm::EquationKind kind;
        if (std::strcmp(equation, "wave") == 0)
            kind = fm::EquationKind::Wave;
        else if (std::strcmp(equation, "heat") == 0)
            kind = fm::EquationKind::Heat;
        else
            throw fm::DomainError("equation must be 'wave' or 'heat'");
        if (u0 < 0.0 || v0 < 0.0) throw fm::DomainError("u0 and v0 must be nonnegative");

        fm::NoiseSpec spec = [&] {
            const std::string k = kernel;
            if (k == "smooth") return fm::NoiseSpec::smooth_gaussian(hurst, dim);
            if (k == "riesz") {
                if (n_alphas < 1 || !alphas)
                    throw fm::DomainError("riesz kernel needs one exponent");
                return fm::NoiseSpec::riesz(hurst, alphas[0], dim);
            }
            if (k == "product") {
                if (n_alphas < 1 || !alphas)
                    throw fm::DomainError("product kernel needs exponents");
                if (dim != n_alphas)
                    throw fm::DomainError("product kernel: dim must equal exponent count");
                return fm::NoiseSpec::product_fractional(
                    hurst, std::vector<double>(alphas, alphas + n_alphas));
            }
            if (k == "white") {
                if (dim != 1) throw fm::DomainError("white kernel requires d = 1");
                return fm::NoiseSpec::white_space(hurst);
            }
            if (k == "riesz-white") {
                if (n_alphas < 1 || !alphas)
                    throw fm::DomainError("riesz-white kernel needs the exponent a");
                if (dim != 1) throw fm::DomainError("riesz-white kernel requires d = 1");
                return fm::NoiseSpec::riesz_white_family(hurst, alphas[0]);
            }
            throw fm::DomainError("unknown kernel '" + k + "'");
        }();
        *out = new fm_problem{kind, spec, fm::InitialData{u0, v0}};
    });
}

void fm_problem_free(fm_problem* p) { delete p; }

fm_status fm_constants(const fm_problem* p, int compute_k, double* alpha_h_out,
                       double* a_out, double* rho_val, double* k_equation,
                       double* k_mu_value, int* dalang_ok, double* dalang_integral) {
    return guarded([&] {
        if (!p) throw fm::DomainError("null problem");
        const double a = p->spec.exponent_a();
        put(alpha_h_out, p->spec.alpha_H());
        put(a_out, a);
        const auto dal = fm::dalang_check(p->spec);
        if (dalang_ok) *dalang_ok = dal.satisfied ? 1 : 0;
        put(dalang_integral, dal.integral_computed ? dal.integral : 0.0);
        put(rho_val, dal.satisfied ? fm::rho(p->kind, p->spec.hurst(), a) : 0.0);
        if (compute_k && dal.satisfied) {
            put(k_equation, fm::k_constant(p->kind, p->spec));
            if (k_mu_value) {
                if (p->spec.kernel() == fm::KernelKind::SmoothFinite ||
                    p->spec.kernel() == fm::KernelKind::Riesz ||
                    p->spec.dim() == 1)
                    *k_mu_value = fm::k_mu(p->spec).value;
                else
                    *k_mu_value = 0.0;
            }
        } else {
            put(k_equation, 0.0);
            put(k_mu_value, 0.0);
        }
    });
}

fm_status fm_chaos_estimate(const fm_problem* p, double t, int n_trunc, int64_t outer,
                            int inner, int threads, uint64_t seed, double* value,
                            double* stderr_out, int* converged, double* term_values,
                            double* term_stderrs, int64_t* term_samples) {
    return guarded([&] {
        if (!p) throw fm::DomainError("null problem");
        fm::ChaosBudget budget;
        budget.outer = outer;
        budget.inner = inner;
        budget.threads = threads;
        budget.seed = seed;
        const auto res = fm::second_moment_chaos(p->spec, p->kind, t, p->init, n_trunc,
                                                 budget);
        put(value, res.estimate.value);
        put(stderr_out, res.estimate.stderr_of_mean);
        if (converged) *converged = res.converged ? 1 : 0;
        for (int n = 0; n < n_trunc && n < static_cast<int>(res.terms.size()); ++n) {
            if (term_values) term_values[n] = res.terms[n].value;
            if (term_stderrs) term_stderrs[n] = res.terms[n].stderr_of_mean;
            if (term_samples) term_samples[n] = res.terms[n].samples;
        }
    });
}

fm_status fm_fk_estimate(const fm_problem* p, double t, int k_max, int64_t configs,
                         int theta_samples, int threads, uint64_t seed, double* value,
                         double* stderr_out, double* tail_bound, int64_t* resamples,
                         double* strata, int strata_capacity, int* n_strata) {
    return guarded([&] {
        if (!p) throw fm::DomainError("null problem");
        fm::FkSettings settings;
        settings.k_max = k_max;
        settings.configs = configs;
        settings.theta_samples = theta_samples;
        settings.threads = threads;
        settings.seed = seed;
        const auto est = fm::fk_estimate(p->spec, p->kind, t, {}, p->init, settings);
        put(value, est.value);
        put(stderr_out, est.stderr_of_mean);
        put(tail_bound, est.tail_bound);
        if (resamples) *resamples = est.resamples;
        if (n_strata) *n_strata = static_cast<int>(est.strata.size());
        if (strata) {
            int rows = static_cast<int>(est.strata.size());
            if (rows > strata_capacity) rows = strata_capacity;
            for (int i = 0; i < rows; ++i) {
                const auto& s = est.strata[i];
                strata[i * 6 + 0] = s.k;
                strata[i * 6 + 1] = s.poisson_weight;
                strata[i * 6 + 2] = s.mean;
                strata[i * 6 + 3] = s.stderr_of_mean;
                strata[i * 6 + 4] = static_cast<double>(s.n_configs);
                strata[i * 6 + 5] = static_cast<double>(s.n_theta);
            }
        }
    });
}

fm_status fm_white_limit(const char* equation, double hurst, double t, double u0,
                         double v0, const double* a_seq, int n_a, int64_t configs,
                         int theta_samples, int threads, uint64_t seed, double* values,
                         double* stderrs) {
    return guarded([&] {
        if (!equation || !a_seq || n_a < 1) throw fm::DomainError("bad arguments");
        fm::EquationKind kind;
        if (std::strcmp(equation, "wave") == 0)
            kind = fm::EquationKind::Wave;
        else if (std::strcmp(equation, "heat") == 0)
            kind = fm::EquationKind::Heat;
        else
            throw fm::DomainError("equation must be 'wave' or 'heat'");
        fm::FkSettings settings;
        settings.configs = configs;
        settings.theta_samples = theta_samples;
        settings.threads = threads;
        settings.seed = seed;
        const fm::InitialData init{u0, v0};
        const auto res = fm::fk_estimate_white_limit(
            kind, hurst, t, {}, init, std::span<const double>(a_seq, n_a), settings);
        for (int i = 0; i < n_a; ++i) {
            if (values) values[i] = res.estimates[i].value;
            if (stderrs) stderrs[i] = res.estimates[i].stderr_of_mean;
        }
    });
}

fm_status fm_gamma_cone(int dim, int64_t samples, uint64_t seed, double* value,
                        double* stderr_out) {
    return guarded([&] {
        const auto est = fm::gamma_cone(dim, samples, seed);
        put(value, est.value);
        put(stderr_out, est.stderr_of_mean);
    });
}

fm_status fm_gamma_exact(int dim, double* value) {
    return guarded([&] { put(value, fm::gamma_exact(dim)); });
}

fm_status fm_lower_bounds(const fm_problem* p, double gamma_estimate, double* c_h,
                          double* c2, double* t2) {
    return guarded([&] {
        if (!p) throw fm::DomainError("null problem");
        const auto lc = fm::lower_bound_constants(p->spec, p->kind, gamma_estimate);
        put(c_h, lc.c_h);
        put(c2, lc.c2);
        put(t2, lc.t2);
    });
}

fm_status fm_upper_bound(const fm_problem* p, double p_moment, double t, double c1,
                         double* value) {
    return guarded([&] {
        if (!p) throw fm::DomainError("null problem");
        put(value, fm::upper_moment_bound(p->kind, p->spec, p_moment, t, p->init, c1)
                       .value);
    });
}

fm_status fm_simplex_integral(int n, double h, double t, double* out) {
    return guarded([&] { put(out, fm::simplex_integral(n, h, t)); });
}

fm_status fm_mittag_leffler(double x, double a, double* value, double* log_value) {
    return guarded([&] {
        const auto ml = fm::mittag_leffler_sum(x, a);
        put(value, ml.value);
        put(log_value, ml.log_value);
    });
}

fm_status fm_growth_fit(const double* ts, const double* values, int n, double u0,
                        double* rho_out, double* residual, int* rejected) {
    return guarded([&] {
        if (!ts || !values || n < 1) throw fm::DomainError("bad arguments");
        const auto fit = fm::growth_fit(std::span<const double>(ts, n),
                                        std::span<const double>(values, n), u0);
        put(rho_out, fit.rho);
        put(residual, fit.residual);
        if (rejected) *rejected = fit.rejected ? 1 : 0;
    });
}

}  // extern "C"

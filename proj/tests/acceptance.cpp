// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure.  argv[1] (optional) is the CLI binary path used by the
// determinism criterion; argv[2] (optional) is a scratch directory.

#include "bounds.hpp"
#include "chaos.hpp"
#include "fkmc.hpp"
#include "green.hpp"
#include "noise.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace fm;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

bool cross_validate(const NoiseSpec& spec, EquationKind kind, double t,
                    double stderr_frac, std::string& detail, int n_trunc = 4) {
    ChaosBudget cb;
    cb.outer = 30000;
    cb.inner = 64;
    cb.threads = 8;
    cb.seed = 101;
    const auto chaos = second_moment_chaos(spec, kind, t, {}, n_trunc, cb);
    FkSettings fs_;
    fs_.configs = 60000;
    fs_.theta_samples = 16;
    fs_.threads = 8;
    fs_.seed = 102;
    const auto fk = fk_estimate(spec, kind, t, {}, {}, fs_);
    const double ce = chaos.estimate.stderr_of_mean, fe = fk.stderr_of_mean;
    const double diff = std::fabs(chaos.estimate.value - fk.value);
    const double comb = std::sqrt(ce * ce + fe * fe);
    const bool ok = diff <= 3.0 * comb && ce <= stderr_frac * chaos.estimate.value &&
                    fe <= stderr_frac * fk.value;
    std::ostringstream os;
    os << "t=" << t << " chaos=" << fmt3(chaos.estimate.value) << "+-" << fmt3(ce)
       << " fk=" << fmt3(fk.value) << "+-" << fmt3(fe) << " |diff|=" << fmt3(diff)
       << " (3sigma=" << fmt3(3.0 * comb) << ")";
    detail = os.str();
    return ok;
}

void criterion_1() {
    const NoiseSpec spec = NoiseSpec::smooth_gaussian(0.75, 1);
    std::string d1, d2;
    const bool a = cross_validate(spec, EquationKind::Wave, 0.5, 0.01, d1);
    const bool b = cross_validate(spec, EquationKind::Wave, 1.0, 0.02, d2);
    report(1, a && b, "wave case (i) cross-validation: " + d1 + " ; " + d2);
}

void criterion_2() {
    const NoiseSpec spec = NoiseSpec::riesz(0.75, 0.5, 1);
    std::string d;
    // the heat chaos series decays more slowly, so truncate later
    const bool ok = cross_validate(spec, EquationKind::Heat, 0.5, 0.02, d, 6);
    report(2, ok, "heat case (ii) cross-validation: " + d);
}

void criterion_3() {
    bool ok = true;
    std::ostringstream os;
    // closed diagonal vs fourier MC on random gap vectors
    const NoiseSpec spec = NoiseSpec::white_space(0.75);
    Rng rng(1, 0xACC3ull);
    int agree = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 1 + rep % 3;
        std::vector<double> tv(n);
        for (auto& v : tv) v = rng.uniform(0.0, 1.0);
        std::vector<double> sorted = tv;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> gaps(n);
        for (int j = 0; j < n; ++j)
            gaps[j] = (j + 1 < n ? sorted[j + 1] : 1.0) - sorted[j];
        const double exact =
            psi_diag_closed(spec, EquationKind::Wave, gaps, 1.0, {1.0, 0.5});
        const auto est = psi_fourier_mc(spec, EquationKind::Wave, tv, tv, 1.0,
                                        {1.0, 0.5}, 40000, 2000 + rep);
        if (std::fabs(est.value - exact) <= 3.0 * est.stderr_of_mean) ++agree;
    }
    ok = ok && agree >= 19;  // one 3-sigma miss in 20 tolerated
    os << "diag closed-vs-mc " << agree << "/20";
    // green mass
    const double m1 = gw_mass(2.5);
    // d=2 radial mass at t=1 via r = sin(u), which removes the edge
    // singularity of the density
    const double m2 = oracle::integrate(
        [](double u) {
            const double r = std::sin(u);
            if (r >= 1.0) return std::sin(u);  // endpoint limit
            return gw_density(2, 1.0, r) * 2.0 * kPi * r * std::cos(u);
        },
        0.0, 0.5 * kPi, 1e-12);
    ok = ok && std::fabs(m1 - 2.5) < 1e-8 && std::fabs(m2 - 1.0) < 1e-8;
    os << ", gw_mass d1 err=" << fmt3(std::fabs(m1 - 2.5))
       << " d2 err=" << fmt3(std::fabs(m2 - 1.0));
    // plancherel
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        const double integral = 2.0 * oracle::integrate_half_line([&](double xi) {
            if (xi == 0.0) return t * t;
            const double s = std::sin(t * xi) / xi;
            return s * s;
        }, 1e-11);
        worst = std::max(worst, std::fabs(integral - kPi * t));
    }
    ok = ok && worst < 1e-6;
    os << ", plancherel err=" << fmt3(worst);
    report(3, ok, os.str());
}

void criterion_4() {
    bool ok = true;
    int misses = 0, cells = 0;
    unsigned seed = 900;
    for (int n = 1; n <= 4; ++n)
        for (double h : {-0.4, 0.0, 0.5, 4.0 / 3.0})
            for (double t : {0.5, 1.0}) {
                const auto mc = oracle::simplex_mc(n, h, t, 100000, seed++);
                ++cells;
                if (std::fabs(simplex_integral(n, h, t) - mc.mean) >
                    std::max(3.0 * mc.stderr_of_mean, 1e-12))
                    ++misses;
            }
    ok = ok && misses == 0;
    ok = ok && simplex_integral(2, 0.0, 1.0) == 0.5 && simplex_integral(1, 1.0, 1.0) == 0.5;
    std::ostringstream os;
    os << "simplex MC agreement " << (cells - misses) << "/" << cells
       << ", exact values bit-accurate "
       << (simplex_integral(2, 0.0, 1.0) == 0.5 ? "yes" : "no");
    report(4, ok, os.str());
}

void criterion_5() {
    bool ok = true;
    std::ostringstream os;
    for (double t : {0.5, 1.5}) {
        Rng rng(2, 0xACC5ull, static_cast<std::uint64_t>(t * 10));
        double mean = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) mean += sample_configuration(t, rng).count();
        mean /= n;
        const bool pass = std::fabs(mean - t * t) < 3.0 * std::sqrt(t * t / n);
        ok = ok && pass;
        os << "poisson mean(t=" << t << ")=" << fmt3(mean) << " ";
    }
    {
        Rng rng(3, 0xACC5ull);
        std::vector<double> pooled;
        while (pooled.size() < 8000) {
            const auto cfg = sample_configuration(1.0, rng);
            if (cfg.count() != 2) continue;
            for (double v : cfg.T) pooled.push_back(v);
            for (double v : cfg.S) pooled.push_back(v);
        }
        const double d = oracle::ks_statistic(pooled, [](double x) { return x; });
        ok = ok && d < oracle::ks_critical_001(pooled.size());
        os << "cond-uniform KS=" << fmt3(d);
    }
    {
        Rng rng(4, 0xACC5ull);
        const double t = 1.7;
        ThetaSampler wave(EquationKind::Wave, 1), heat(EquationKind::Heat, 1);
        std::vector<double> ws(10000), hs(10000);
        for (std::size_t i = 0; i < ws.size(); ++i) {
            double v[1];
            wave.sample(rng, v);
            ws[i] = wave.scale(t) * v[0];
            heat.sample(rng, v);
            hs[i] = heat.scale(t) * v[0];
        }
        const double dw = oracle::ks_statistic(ws, [&](double x) {
            return std::clamp(0.5 * (x / t + 1.0), 0.0, 1.0);
        });
        const double dh = oracle::ks_statistic(hs, [&](double x) {
            return 0.5 * std::erfc(-x / std::sqrt(2.0 * t));
        });
        ok = ok && dw < oracle::ks_critical_001(ws.size()) &&
             dh < oracle::ks_critical_001(hs.size());
        os << ", theta scaling KS wave=" << fmt3(dw) << " heat=" << fmt3(dh);
        ThetaSampler s3(EquationKind::Wave, 3);
        double worst = 0.0;
        for (int i = 0; i < 5000; ++i) {
            double v[3];
            s3.sample(rng, v);
            worst = std::max(worst, std::fabs(std::sqrt(v[0] * v[0] + v[1] * v[1] +
                                                        v[2] * v[2]) -
                                              1.0));
        }
        ok = ok && worst < 1e-12;
        os << ", d3 norm err=" << fmt3(worst);
    }
    report(5, ok, os.str());
}

void criterion_6() {
    bool ok = true;
    const auto g1 = gamma_cone(1, 200000, 11);
    const auto g3 = gamma_cone(3, 200000, 12);
    ok = ok && std::fabs(g1.value - 0.5) < 3.0 * g1.stderr_of_mean;
    ok = ok && std::fabs(g3.value - gamma_exact(3)) < 3.0 * g3.stderr_of_mean;
    // cone properties (i)-(iii) on random triples
    Rng rng(5, 0xACC6ull);
    int bad = 0;
    for (int rep = 0; rep < 10000; ++rep) {
        double x[3], y[3], z[3], w[3];
        for (int c = 0; c < 3; ++c) {
            x[c] = rng.uniform(-2.0, 2.0);
            y[c] = rng.uniform(-2.0, 2.0);
            z[c] = rng.uniform(-2.0, 2.0);
            w[c] = rng.uniform(-2.0, 2.0);
        }
        const bool in = cone_contains(x, y, z);
        // (i): delta bounding both legs also bounds |z - x|
        if (in) {
            double dzy = 0, dyx = 0, dzx = 0;
            for (int c = 0; c < 3; ++c) {
                dzy += (z[c] - y[c]) * (z[c] - y[c]);
                dyx += (y[c] - x[c]) * (y[c] - x[c]);
                dzx += (z[c] - x[c]) * (z[c] - x[c]);
            }
            if (std::sqrt(dzx) > std::max(std::sqrt(dzy), std::sqrt(dyx)) + 1e-9) ++bad;
        }
        // (ii): scale invariance of y + z membership
        double yz[3], yrz[3];
        const double r = rng.uniform(0.1, 5.0);
        for (int c = 0; c < 3; ++c) {
            yz[c] = y[c] + z[c];
            yrz[c] = y[c] + r * z[c];
        }
        if (cone_contains(x, y, yz) != cone_contains(x, y, yrz)) ++bad;
        // (iii): shift invariance
        double xs[3], ys[3], zs[3];
        for (int c = 0; c < 3; ++c) {
            xs[c] = x[c] + w[c];
            ys[c] = y[c] + w[c];
            zs[c] = z[c] + w[c];
        }
        if (cone_contains(x, y, z) != cone_contains(xs, ys, zs)) ++bad;
    }
    ok = ok && bad == 0;
    std::ostringstream os;
    os << "gamma d1=" << fmt3(g1.value) << " d3=" << fmt3(g3.value)
       << " (exact " << fmt3(gamma_exact(3)) << "), cone property violations=" << bad;
    report(6, ok, os.str());
}

void criterion_7() {
    ChaosBudget budget;
    budget.outer = 30000;
    budget.inner = 64;
    budget.threads = 8;
    budget.seed = 13;
    const double t = 0.5;
    // case (iv) alpha_1 by quadrature: alpha_H pi B(1/2,3) t^{2H+1}-scaled form
    // evaluated directly as a 1-d integral
    // after u = v^2 the integrand of
    //   2 alpha_H pi int_0^t (t - u)^2 / 2 * u^{2H-2} du   (H = 3/4)
    // collapses to (t - v^2)^2
    const double target =
        0.75 * kPi *
        oracle::integrate([&](double v) { return (t - v * v) * (t - v * v); }, 0.0,
                          std::sqrt(t), 1e-12);
    std::vector<double> gaps;
    bool ok = true;
    double final_gap = 0.0;
    for (double a : {0.8, 0.9, 0.95, 0.99}) {
        const auto term = alpha_n_riesz_family(0.75, a, 1, t, {}, budget);
        gaps.push_back(std::fabs(term.value - target));
    }
    final_gap = gaps.back() / target;
    ok = gaps.back() < gaps.front() && final_gap <= 0.05;
    std::ostringstream os;
    os << "alpha_1 target=" << fmt3(target) << " gaps(a=0.8..0.99)=";
    for (double g : gaps) os << fmt3(g) << " ";
    os << "final rel gap=" << fmt3(final_gap);
    report(7, ok, os.str());
}

void criterion_8() {
    bool ok = true;
    std::ostringstream os;
    // Cauchy-Schwarz on 50 random pairs
    {
        const NoiseSpec spec = NoiseSpec::white_space(0.75);
        Rng rng(6, 0xACC8ull);
        int holds = 0;
        for (int rep = 0; rep < 50; ++rep) {
            const int n = 1 + rep % 2;
            std::vector<double> tv(n), sv(n);
            for (auto& v : tv) v = rng.uniform(0.0, 1.0);
            for (auto& v : sv) v = rng.uniform(0.0, 1.0);
            const auto ts = psi_fourier_mc(spec, EquationKind::Wave, tv, sv, 1.0, {},
                                           15000, 3000 + rep);
            const auto tt = psi_fourier_mc(spec, EquationKind::Wave, tv, tv, 1.0, {},
                                           15000, 3100 + rep);
            const auto ss = psi_fourier_mc(spec, EquationKind::Wave, sv, sv, 1.0, {},
                                           15000, 3200 + rep);
            const double rhs =
                std::sqrt(std::max(0.0, tt.value) * std::max(0.0, ss.value));
            if (ts.value <= rhs + 3.0 * (ts.stderr_of_mean + tt.stderr_of_mean +
                                         ss.stderr_of_mean))
                ++holds;
        }
        ok = ok && holds == 50;
        os << "cauchy-schwarz " << holds << "/50";
    }
    // diagonal bounds per case
    {
        struct Case {
            NoiseSpec spec;
            bool fourier;
        };
        const std::vector<Case> cases = {
            {NoiseSpec::smooth_gaussian(0.75, 1), false},
            {NoiseSpec::riesz(0.75, 0.5, 1), true},
            {NoiseSpec::product_fractional(0.75, {0.45}), false},
            {NoiseSpec::white_space(0.75), true},
        };
        Rng rng(7, 0xACC8ull);
        int holds = 0, total = 0;
        for (const auto& c : cases) {
            const double a = c.spec.exponent_a();
            const double kw = k_constant(EquationKind::Wave, c.spec);
            const double kh = k_constant(EquationKind::Heat, c.spec);
            for (int rep = 0; rep < 50; ++rep) {
                const int n = 1 + rep % 2;
                std::vector<double> tv(n);
                for (auto& v : tv) v = rng.uniform(0.0, 1.0);
                std::vector<double> sorted = tv;
                std::sort(sorted.begin(), sorted.end());
                std::vector<double> gaps(n);
                for (int j = 0; j < n; ++j)
                    gaps[j] = (j + 1 < n ? sorted[j + 1] : 1.0) - sorted[j];
                const InitialData init{1.0, 0.5};
                const auto wave = c.fourier
                                      ? psi_fourier_mc(c.spec, EquationKind::Wave, tv, tv,
                                                       1.0, init, 12000, 4000 + rep)
                                      : psi_spatial_mc(c.spec, EquationKind::Wave, tv, tv,
                                                       1.0, init, 12000, 4000 + rep);
                ++total;
                if (wave.value <= psi_diag_bound(EquationKind::Wave, kw, a, gaps, 1.0,
                                                 init) +
                                      3.0 * wave.stderr_of_mean)
                    ++holds;
                if (c.spec.kernel() == KernelKind::WhiteSpace) continue;
                const auto heat = c.fourier
                                      ? psi_fourier_mc(c.spec, EquationKind::Heat, tv, tv,
                                                       1.0, init, 12000, 4500 + rep)
                                      : psi_spatial_mc(c.spec, EquationKind::Heat, tv, tv,
                                                       1.0, init, 12000, 4500 + rep);
                ++total;
                if (heat.value <= psi_diag_bound(EquationKind::Heat, kh, a, gaps, 1.0,
                                                 init) +
                                      3.0 * heat.stderr_of_mean)
                    ++holds;
            }
        }
        ok = ok && holds == total;
        os << ", diagonal bounds " << holds << "/" << total;
    }
    // Mittag-Leffler fitted bound
    {
        std::vector<double> grid;
        for (double x = 1.0; x <= 100.0; x += 1.0) grid.push_back(x);
        bool mlok = true;
        for (double a : {0.5, 1.0, 2.0, 3.0}) {
            const auto fit = mittag_leffler_bound_fit(a, grid);
            mlok = mlok && fit.verified;
            for (double x : grid) {
                if (x < fit.x0) continue;
                if (mittag_leffler_sum(x, a).log_value >
                    std::log(2.0) + fit.c0 * std::pow(x, 1.0 / a) + 1e-9)
                    mlok = false;
            }
            if (a == 1.0) mlok = mlok && std::fabs(fit.c0 - 1.0) < 1e-12;
        }
        ok = ok && mlok;
        os << ", mittag-leffler fits " << (mlok ? "verified" : "FAILED");
    }
    report(8, ok, os.str());
}

void criterion_9(const char* cli, const char* scratch) {
    if (!cli) {
        report(9, false, "CLI path not supplied");
        return;
    }
    const fs::path base = scratch ? fs::path(scratch) : fs::temp_directory_path();
    const fs::path d1 = base / "fm_acc_t1", d8 = base / "fm_acc_t8";
    fs::remove_all(d1);
    fs::remove_all(d8);
    auto run = [&](int threads, const fs::path& out) {
        std::ostringstream cmd;
        cmd << cli << " estimate --equation wave --kernel smooth --hurst 0.75 --dim 1"
            << " --t 0.5 --seed 77 --outer 2000 --configs 4000 --threads " << threads
            << " --out " << out << " > /dev/null";
        return std::system(cmd.str().c_str());
    };
    const int r1 = run(1, d1), r8 = run(8, d8);
    auto slurp = [](const fs::path& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    const std::string a = slurp(d1 / "estimate.csv"), b = slurp(d8 / "estimate.csv");
    const bool ok = r1 == 0 && r8 == 0 && !a.empty() && a == b;
    report(9, ok, ok ? "estimate.csv identical across 1 and 8 threads"
                     : "estimate.csv differs or CLI failed");
}

void criterion_10() {
    bool ok = true;
    for (double a : {0.0, 0.5, 1.0}) {
        ok = ok && rho(EquationKind::Wave, 0.5, a) == 1.0;
        ok = ok && rho(EquationKind::Heat, 0.5, a) == 1.0;
    }
    const NoiseSpec white = NoiseSpec::white_space(0.75);
    ok = ok && std::fabs(k_constant(EquationKind::Wave, white) - kPi) < 1e-14;
    ok = ok && std::fabs(k_constant(EquationKind::Heat, white) - std::sqrt(kPi)) < 1e-14;
    const auto dal = dalang_check(NoiseSpec::riesz(0.75, 2.5, 3));
    ok = ok && !dal.satisfied && dal.note.find("a < 2") != std::string::npos;
    report(10, ok,
           "rho(H=1/2)=1 grid, K_w=pi, K_h=sqrt(pi), dalang rejects a=2.5 with the a<2 "
           "rule");
}

}  // namespace

int main(int argc, char** argv) {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(argc > 1 ? argv[1] : nullptr, argc > 2 ? argv[2] : nullptr);
    criterion_10();
    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}

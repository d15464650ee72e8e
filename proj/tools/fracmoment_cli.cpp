// Command-line front end for the fracmoment library.  Talks to the core
// exclusively through the C API.

#include "fracmoment.h"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// shortest round-trip decimal representation
std::string fmt(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

struct Config {
    std::string equation = "wave";
    std::string kernel = "smooth";
    double hurst = 0.75;
    int dim = 1;
    std::vector<double> alphas;
    double u0 = 1.0;
    double v0 = 0.0;
    std::vector<double> t_grid = {0.5};
    std::string method = "both";  // chaos | fk | both
    int n_trunc = 4;
    long long outer = 4000;
    int inner = 64;
    int k_max = -1;
    long long configs = 20000;
    int theta_samples = 16;
    std::vector<double> a_list = {0.8, 0.9, 0.95, 0.99};
    unsigned long long seed = 1;
    bool seed_set = false;
    int threads = 1;
    std::string out_dir = ".";
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

int parse_config_file(const std::string& path, Config& cfg, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open config file: " + path;
        return 2;
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            err = path + ":" + std::to_string(lineno) + ": expected key=value";
            return 2;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        try {
            if (key == "equation") cfg.equation = val;
            else if (key == "kernel") cfg.kernel = val;
            else if (key == "hurst") cfg.hurst = std::stod(val);
            else if (key == "dim") cfg.dim = std::stoi(val);
            else if (key == "alpha") cfg.alphas = parse_list(val);
            else if (key == "u0") cfg.u0 = std::stod(val);
            else if (key == "v0") cfg.v0 = std::stod(val);
            else if (key == "t") cfg.t_grid = parse_list(val);
            else if (key == "method") cfg.method = val;
            else if (key == "n_trunc") cfg.n_trunc = std::stoi(val);
            else if (key == "outer") cfg.outer = std::stoll(val);
            else if (key == "inner") cfg.inner = std::stoi(val);
            else if (key == "k_max") cfg.k_max = std::stoi(val);
            else if (key == "configs") cfg.configs = std::stoll(val);
            else if (key == "theta_samples") cfg.theta_samples = std::stoi(val);
            else if (key == "a_list") cfg.a_list = parse_list(val);
            else if (key == "seed") {
                cfg.seed = std::stoull(val);
                cfg.seed_set = true;
            }
            else if (key == "threads") cfg.threads = std::stoi(val);
            else if (key == "out") cfg.out_dir = val;
            else {
                err = path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'";
                return 2;
            }
        } catch (const std::exception&) {
            err = path + ":" + std::to_string(lineno) + ": bad value for '" + key + "'";
            return 2;
        }
    }
    return 0;
}

int status_to_exit(fm_status st) {
    switch (st) {
        case FM_OK: return 0;
        case FM_ERR_DOMAIN: return 2;
        case FM_ERR_UNSUPPORTED: return 2;
        case FM_ERR_DALANG: return 3;
        case FM_ERR_BUDGET: return 4;
        default: return 5;
    }
}

int fail(fm_status st) {
    std::cerr << "error: " << fm_last_error() << "\n";
    return status_to_exit(st);
}

struct Problem {
    fm_problem* p = nullptr;
    ~Problem() { fm_problem_free(p); }
};

fm_status make_problem(const Config& cfg, Problem& pr) {
    return fm_problem_create(cfg.equation.c_str(), cfg.kernel.c_str(), cfg.hurst,
                             cfg.dim, cfg.alphas.empty() ? nullptr : cfg.alphas.data(),
                             static_cast<int>(cfg.alphas.size()), cfg.u0, cfg.v0, &pr.p);
}

std::string config_echo(const Config& cfg) {
    std::ostringstream os;
    os << "equation=" << cfg.equation << "\nkernel=" << cfg.kernel
       << "\nhurst=" << fmt(cfg.hurst) << "\ndim=" << cfg.dim << "\nalpha=";
    for (std::size_t i = 0; i < cfg.alphas.size(); ++i)
        os << (i ? "," : "") << fmt(cfg.alphas[i]);
    os << "\nu0=" << fmt(cfg.u0) << "\nv0=" << fmt(cfg.v0) << "\nt=";
    for (std::size_t i = 0; i < cfg.t_grid.size(); ++i)
        os << (i ? "," : "") << fmt(cfg.t_grid[i]);
    os << "\nmethod=" << cfg.method << "\nn_trunc=" << cfg.n_trunc
       << "\nouter=" << cfg.outer << "\ninner=" << cfg.inner << "\nk_max=" << cfg.k_max
       << "\nconfigs=" << cfg.configs << "\ntheta_samples=" << cfg.theta_samples
       << "\nseed=" << cfg.seed << "\nthreads=" << cfg.threads << "\n";
    return os.str();
}

struct Row {
    std::string method;
    double t, value, stderr_v;
    long long samples;
};

struct RunOutput {
    std::vector<Row> rows;
    std::vector<std::array<double, 6>> strata;            // fk strata, last t
    std::vector<std::array<double, 4>> chaos_terms;        // n, value, stderr, samples
    std::map<std::string, double> constants;
    std::vector<std::pair<std::string, double>> timings;   // phase, seconds
};

fm_status collect_constants(const Config& cfg, const Problem& pr, RunOutput& out,
                            bool compute_k) {
    double ah = 0, a = 0, rho_v = 0, keq = 0, kmu = 0, integral = 0;
    int ok = 0;
    fm_status st = fm_constants(pr.p, compute_k ? 1 : 0, &ah, &a, &rho_v, &keq, &kmu,
                                &ok, &integral);
    if (st != FM_OK) return st;
    out.constants["alpha_H"] = ah;
    out.constants["a"] = a;
    out.constants["rho"] = rho_v;
    out.constants["dalang"] = ok;
    out.constants["dalang_integral"] = integral;
    if (compute_k) {
        out.constants["K"] = keq;
        out.constants["K_mu"] = kmu;
    }
    return FM_OK;
}

fm_status run_point(const Config& cfg, const Problem& pr, double t, RunOutput& out) {
    const bool chaos = cfg.method == "chaos" || cfg.method == "both";
    const bool fk = cfg.method == "fk" || cfg.method == "both";
    const double w = cfg.equation == "wave" ? cfg.u0 + t * cfg.v0 : cfg.u0;
    if (t == 0.0) {
        if (chaos) out.rows.push_back({"chaos", t, w * w, 0.0, 0});
        if (fk) out.rows.push_back({cfg.equation == "wave" ? "fk-wave" : "fk-heat", t,
                                    w * w, 0.0, 0});
        return FM_OK;
    }
    if (chaos) {
        const auto t0 = Clock::now();
        double value = 0, se = 0;
        int conv = 0;
        std::vector<double> tv(cfg.n_trunc), ts(cfg.n_trunc);
        std::vector<int64_t> tn(cfg.n_trunc);
        fm_status st = fm_chaos_estimate(pr.p, t, cfg.n_trunc, cfg.outer, cfg.inner,
                                         cfg.threads, cfg.seed, &value, &se, &conv,
                                         tv.data(), ts.data(), tn.data());
        if (st != FM_OK) return st;
        long long samples = 0;
        out.chaos_terms.clear();
        for (int n = 0; n < cfg.n_trunc; ++n) {
            samples += tn[n];
            out.chaos_terms.push_back({double(n + 1), tv[n], ts[n], double(tn[n])});
        }
        out.rows.push_back({"chaos", t, value, se, samples});
        out.timings.emplace_back("chaos t=" + fmt(t),
                                 std::chrono::duration<double>(Clock::now() - t0).count());
    }
    if (fk) {
        const auto t0 = Clock::now();
        double value = 0, se = 0, tail = 0;
        int64_t resamples = 0;
        int n_strata = 0;
        std::vector<double> strata(6 * 80);
        fm_status st = fm_fk_estimate(pr.p, t, cfg.k_max, cfg.configs, cfg.theta_samples,
                                      cfg.threads, cfg.seed, &value, &se, &tail,
                                      &resamples, strata.data(), 80, &n_strata);
        if (st != FM_OK) return st;
        long long samples = 0;
        out.strata.clear();
        for (int i = 0; i < n_strata; ++i) {
            std::array<double, 6> row;
            for (int c = 0; c < 6; ++c) row[c] = strata[i * 6 + c];
            samples += static_cast<long long>(row[4] * row[5]);
            out.strata.push_back(row);
        }
        out.rows.push_back({cfg.equation == "wave" ? "fk-wave" : "fk-heat", t, value, se,
                            samples});
        out.constants["fk_tail_bound"] = tail;
        out.constants["fk_resamples"] = static_cast<double>(resamples);
        out.timings.emplace_back("fk t=" + fmt(t),
                                 std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return FM_OK;
}

void write_rows_csv(const fs::path& path, const std::vector<Row>& rows) {
    std::ofstream f(path);
    f << "method,t,value,stderr,samples\n";
    for (const auto& r : rows)
        f << r.method << "," << fmt(r.t) << "," << fmt(r.value) << ","
          << fmt(r.stderr_v) << "," << r.samples << "\n";
}

void write_aux_csv(const Config& cfg, const RunOutput& out) {
    const fs::path dir(cfg.out_dir);
    if (!out.strata.empty()) {
        std::ofstream f(dir / "strata.csv");
        f << "k,poisson_weight,stratum_mean,stratum_stderr,n_configs,n_theta\n";
        for (const auto& s : out.strata)
            f << int(s[0]) << "," << fmt(s[1]) << "," << fmt(s[2]) << "," << fmt(s[3])
              << "," << (long long)(s[4]) << "," << (long long)(s[5]) << "\n";
    }
    if (!out.chaos_terms.empty()) {
        std::ofstream f(dir / "chaos_terms.csv");
        f << "n,alpha_n,stderr,method,samples\n";
        for (const auto& c : out.chaos_terms)
            f << int(c[0]) << "," << fmt(c[1]) << "," << fmt(c[2]) << ","
              << "mc" << "," << (long long)(c[3]) << "\n";
    }
}

void write_manifest(const Config& cfg, const RunOutput& out, const std::string& command) {
    std::ofstream f(fs::path(cfg.out_dir) / "manifest.txt");
    f << "tool=fracmoment " << fm_version() << "\ncommand=" << command << "\n\n[config]\n"
      << config_echo(cfg) << "\n[constants]\n";
    for (const auto& [k, v] : out.constants) f << k << "=" << fmt(v) << "\n";
    f << "\n[estimates]\n";
    for (const auto& r : out.rows)
        f << r.method << " t=" << fmt(r.t) << " value=" << fmt(r.value)
          << " stderr=" << fmt(r.stderr_v) << " samples=" << r.samples << "\n";
    f << "\n[timings]\n";
    for (const auto& [phase, sec] : out.timings) f << phase << " " << fmt(sec) << "s\n";
}

void write_svg(const Config& cfg, const std::vector<Row>& rows, double fitted_rho,
               double fitted_intercept, bool have_fit) {
    if (rows.empty()) return;
    const int W = 640, H = 480, M = 60;
    double tmin = 1e300, tmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& r : rows) {
        tmin = std::min(tmin, r.t);
        tmax = std::max(tmax, r.t);
        const double y = std::log(std::max(r.value, 1e-300));
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (tmax <= tmin) tmax = tmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    auto X = [&](double t) { return M + (W - 2 * M) * (t - tmin) / (tmax - tmin); };
    auto Y = [&](double y) { return H - M - (H - 2 * M) * (y - ymin) / (ymax - ymin); };
    std::ofstream f(fs::path(cfg.out_dir) / "plot.svg");
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    f << "<line x1='" << M << "' y1='" << H - M << "' x2='" << W - M << "' y2='" << H - M
      << "' stroke='black'/>\n";
    f << "<line x1='" << M << "' y1='" << M << "' x2='" << M << "' y2='" << H - M
      << "' stroke='black'/>\n";
    f << "<text x='" << W / 2 << "' y='" << H - 15 << "' font-size='12'>t</text>\n";
    f << "<text x='10' y='" << H / 2 << "' font-size='12'>log E|u|^2</text>\n";
    if (have_fit) {
        f << "<path d='";
        for (int i = 0; i <= 100; ++i) {
            const double t = tmin + (tmax - tmin) * i / 100.0;
            const double y = std::exp(fitted_intercept) * std::pow(t, fitted_rho);
            f << (i == 0 ? "M" : "L") << X(t) << " " << Y(y);
        }
        f << "' fill='none' stroke='steelblue' stroke-dasharray='4 3'/>\n";
    }
    for (const auto& r : rows) {
        const double y = std::log(std::max(r.value, 1e-300));
        const double yl = std::log(std::max(r.value - r.stderr_v, 1e-300));
        const double yh = std::log(r.value + r.stderr_v);
        f << "<line x1='" << X(r.t) << "' y1='" << Y(yl) << "' x2='" << X(r.t)
          << "' y2='" << Y(yh) << "' stroke='crimson'/>\n";
        f << "<circle cx='" << X(r.t) << "' cy='" << Y(y) << "' r='3' fill='crimson'/>\n";
    }
    f << "</svg>\n";
}

int require_seed(const Config& cfg) {
    if (!cfg.seed_set) {
        std::cerr << "error: Monte Carlo runs need an explicit seed "
                     "(--seed or seed= in the config)\n";
        return 2;
    }
    return 0;
}

int cmd_estimate(const Config& cfg) {
    if (int rc = require_seed(cfg)) return rc;
    if (cfg.t_grid.size() != 1) {
        std::cerr << "error: estimate expects a single t (use scan for grids)\n";
        return 2;
    }
    for (double t : cfg.t_grid)
        if (t < 0.0) {
            std::cerr << "error: t must be nonnegative\n";
            return 2;
        }
    Problem pr;
    if (auto st = make_problem(cfg, pr); st != FM_OK) return fail(st);
    RunOutput out;
    if (auto st = collect_constants(cfg, pr, out, false); st != FM_OK) return fail(st);
    if (out.constants["dalang"] == 0.0) {
        std::cerr << "error: Dalang condition fails (requires a < 2, got a="
                  << fmt(out.constants["a"]) << ")\n";
        return 3;
    }
    if (auto st = run_point(cfg, pr, cfg.t_grid[0], out); st != FM_OK) return fail(st);
    fs::create_directories(cfg.out_dir);
    write_rows_csv(fs::path(cfg.out_dir) / "estimate.csv", out.rows);
    write_aux_csv(cfg, out);
    write_manifest(cfg, out, "estimate");
    for (const auto& r : out.rows)
        std::cout << r.method << " t=" << fmt(r.t) << " value=" << fmt(r.value)
                  << " stderr=" << fmt(r.stderr_v) << "\n";
    return 0;
}

int cmd_scan(const Config& cfg) {
    if (int rc = require_seed(cfg)) return rc;
    if (cfg.t_grid.size() < 2) {
        std::cerr << "error: scan needs a t grid with at least 2 values\n";
        return 2;
    }
    for (double t : cfg.t_grid)
        if (t <= 0.0) {
            std::cerr << "error: scan grid values must be positive\n";
            return 2;
        }
    Problem pr;
    if (auto st = make_problem(cfg, pr); st != FM_OK) return fail(st);
    RunOutput out;
    if (auto st = collect_constants(cfg, pr, out, false); st != FM_OK) return fail(st);
    if (out.constants["dalang"] == 0.0) {
        std::cerr << "error: Dalang condition fails (requires a < 2, got a="
                  << fmt(out.constants["a"]) << ")\n";
        return 3;
    }
    for (double t : cfg.t_grid)
        if (auto st = run_point(cfg, pr, t, out); st != FM_OK) return fail(st);

    // growth fit on the first method's rows
    std::vector<double> ts, vals;
    const std::string first = out.rows.front().method;
    for (const auto& r : out.rows)
        if (r.method == first) {
            ts.push_back(r.t);
            vals.push_back(r.value);
        }
    double rho_fit = 0, resid = 0;
    int rejected = 1;
    bool have_fit = false;
    double intercept = 0;
    if (ts.size() >= 4) {
        if (fm_growth_fit(ts.data(), vals.data(), static_cast<int>(ts.size()), cfg.u0,
                          &rho_fit, &resid, &rejected) == FM_OK &&
            !rejected) {
            have_fit = true;
            // recover the intercept for the reference curve
            double sx = 0, sy = 0;
            int n = 0;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                const double ratio = vals[i] / (cfg.u0 * cfg.u0);
                if (ratio <= 1.0 + 1e-9) continue;
                sx += std::log(ts[i]);
                sy += std::log(std::log(ratio));
                ++n;
            }
            if (n > 0) intercept = sy / n - rho_fit * sx / n;
        }
    }

    fs::create_directories(cfg.out_dir);
    {
        std::ofstream f(fs::path(cfg.out_dir) / "scan.csv");
        f << "method,t,value,stderr,samples\n";
        for (const auto& r : out.rows)
            f << r.method << "," << fmt(r.t) << "," << fmt(r.value) << ","
              << fmt(r.stderr_v) << "," << r.samples << "\n";
        f << "fit,rho=" << fmt(rho_fit) << ",residual=" << fmt(resid)
          << ",rejected=" << rejected << ",\n";
    }
    write_svg(cfg, out.rows, rho_fit, intercept, have_fit);
    write_manifest(cfg, out, "scan");
    std::cout << "scan: " << out.rows.size() << " rows; fitted rho=" << fmt(rho_fit)
              << " residual=" << fmt(resid) << (rejected ? " (rejected)" : "") << "\n";
    return 0;
}

int cmd_constants(const Config& cfg, long long gamma_samples) {
    Problem pr;
    if (auto st = make_problem(cfg, pr); st != FM_OK) return fail(st);
    RunOutput out;
    if (auto st = collect_constants(cfg, pr, out, true); st != FM_OK) return fail(st);
    // rho and K for both equations
    Config other = cfg;
    other.equation = cfg.equation == "wave" ? "heat" : "wave";
    Problem pr2;
    if (auto st = make_problem(other, pr2); st != FM_OK) return fail(st);
    RunOutput out2;
    const bool dal = out.constants["dalang"] != 0.0;
    if (dal)
        if (auto st = collect_constants(other, pr2, out2, true); st != FM_OK)
            return fail(st);

    std::cout << "alpha_H = " << fmt(out.constants["alpha_H"]) << "\n";
    std::cout << "a = " << fmt(out.constants["a"]) << "\n";
    std::cout << "dalang = " << (dal ? "satisfied" : "violated (requires a < 2)") << "\n";
    if (!dal) return 3;
    const std::string eq1 = cfg.equation, eq2 = other.equation;
    const char* k1 = eq1 == "wave" ? "K_w" : "K_h";
    const char* k2 = eq2 == "wave" ? "K_w" : "K_h";
    std::cout << "rho_" << (eq1 == "wave" ? "w" : "h") << " = "
              << fmt(out.constants["rho"]) << "\n";
    std::cout << "rho_" << (eq2 == "wave" ? "w" : "h") << " = "
              << fmt(out2.constants["rho"]) << "\n";
    std::cout << k1 << " = " << fmt(out.constants["K"]) << "\n";
    std::cout << k2 << " = " << fmt(out2.constants["K"]) << "\n";
    std::cout << "K_mu = " << fmt(out.constants["K_mu"]) << "\n";
    std::cout << "dalang_integral = " << fmt(out.constants["dalang_integral"]) << "\n";
    if (gamma_samples > 0) {
        double g = 0, gse = 0;
        if (auto st = fm_gamma_cone(cfg.dim, gamma_samples, cfg.seed, &g, &gse);
            st != FM_OK)
            return fail(st);
        std::cout << "gamma = " << fmt(g) << " +- " << fmt(gse) << "\n";
        double ch = 0, c2 = 0, t2 = 0;
        if (auto st = fm_lower_bounds(pr.p, g, &ch, &c2, &t2); st != FM_OK)
            return fail(st);
        std::cout << "c_H = " << fmt(ch) << "\nc2 = " << fmt(c2) << "\nt2 = " << fmt(t2)
                  << "\n";
    }
    return 0;
}

int cmd_gamma(int dim, long long samples, unsigned long long seed) {
    double v = 0, se = 0, ex = 0;
    if (auto st = fm_gamma_cone(dim, samples, seed, &v, &se); st != FM_OK)
        return fail(st);
    fm_gamma_exact(dim, &ex);
    std::cout << "gamma(d=" << dim << ") = " << fmt(v) << " +- " << fmt(se)
              << " (closed form " << fmt(ex) << ")\n";
    return 0;
}

int cmd_white_limit(const Config& cfg) {
    if (int rc = require_seed(cfg)) return rc;
    for (double a : cfg.a_list)
        if (a <= 0.5 || a >= 1.0) {
            std::cerr << "error: white-limit a values must lie in (1/2, 1)\n";
            return 2;
        }
    std::vector<double> values(cfg.a_list.size()), stderrs(cfg.a_list.size());
    const auto st = fm_white_limit(cfg.equation.c_str(), cfg.hurst, cfg.t_grid[0],
                                   cfg.u0, cfg.v0, cfg.a_list.data(),
                                   static_cast<int>(cfg.a_list.size()), cfg.configs,
                                   cfg.theta_samples, cfg.threads, cfg.seed,
                                   values.data(), stderrs.data());
    if (st != FM_OK) return fail(st);
    for (std::size_t i = 0; i < cfg.a_list.size(); ++i) {
        std::cout << "a=" << fmt(cfg.a_list[i]) << " value=" << fmt(values[i])
                  << " stderr=" << fmt(stderrs[i]);
        if (i > 0) std::cout << " diff=" << fmt(std::abs(values[i] - values[i - 1]));
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"second-moment estimators for stochastic wave/heat equations "
                 "with fractional noise"};
    app.require_subcommand(1);

    Config cfg;
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value config file");
        sub->add_option("--seed", cfg.seed, "RNG seed")->each([&](const std::string&) {
            cfg.seed_set = true;
        });
        sub->add_option("--threads", cfg.threads, "worker thread count");
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_option("--equation", cfg.equation, "wave | heat");
        sub->add_option("--kernel", cfg.kernel,
                        "smooth | riesz | product | white | riesz-white");
        sub->add_option("--hurst", cfg.hurst, "Hurst index in (1/2, 1)");
        sub->add_option("--dim", cfg.dim, "spatial dimension");
        sub->add_option("--alpha", cfg.alphas, "kernel exponent(s)");
        sub->add_option("--u0", cfg.u0, "initial value");
        sub->add_option("--v0", cfg.v0, "initial velocity (wave)");
        sub->add_option("--t", cfg.t_grid, "time, or grid for scan");
        sub->add_option("--method", cfg.method, "chaos | fk | both");
        sub->add_option("--n-trunc", cfg.n_trunc, "chaos truncation order");
        sub->add_option("--outer", cfg.outer, "chaos outer samples");
        sub->add_option("--inner", cfg.inner, "chaos inner samples");
        sub->add_option("--k-max", cfg.k_max, "fk stratum cap (-1 = auto)");
        sub->add_option("--configs", cfg.configs, "fk configurations per stratum");
        sub->add_option("--theta-samples", cfg.theta_samples, "fk theta draws per config");
        sub->add_option("--a-list", cfg.a_list, "white-limit a sequence");
    };

    auto* est = app.add_subcommand("estimate", "estimate E|u(t,x)|^2 at one time");
    add_common(est);
    auto* scan = app.add_subcommand("scan", "estimate over a t grid and fit growth");
    add_common(scan);
    auto* cst = app.add_subcommand("constants", "print the derived constant table");
    add_common(cst);
    long long gamma_samples = 0;
    cst->add_option("--gamma-samples", gamma_samples,
                    "also estimate the cone probability with this MC budget");
    auto* gam = app.add_subcommand("gamma", "cone probability estimate");
    int gdim = 1;
    long long gsamples = 100000;
    unsigned long long gseed = 1;
    gam->add_option("--dim", gdim, "dimension");
    gam->add_option("--samples", gsamples, "MC samples");
    gam->add_option("--seed", gseed, "RNG seed")->required();
    auto* wl = app.add_subcommand("white-limit", "fk estimates along the a -> 1 family");
    add_common(wl);

    // parse twice so config-file values load first and flags override them
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (!config_path.empty()) {
        std::string err;
        if (int rc = parse_config_file(config_path, cfg, err); rc != 0) {
            std::cerr << "error: " << err << "\n";
            return rc;
        }
        try {
            app.clear();
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
    }

    try {
        if (est->parsed()) return cmd_estimate(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        if (cst->parsed()) return cmd_constants(cfg, gamma_samples);
        if (gam->parsed()) return cmd_gamma(gdim, gsamples, gseed);
        if (wl->parsed()) return cmd_white_limit(cfg);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
    return 2;
}

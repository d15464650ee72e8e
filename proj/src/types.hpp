#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fm {

enum class EquationKind { Wave, Heat };

// Estimation route for a chaos quantity.
enum class Method { FourierMc, SpatialMc, ClosedForm, Quadrature, FkWave, FkHeat, Chaos };

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DalangError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constant initial data: u(0)=u0 (both equations), du/dt(0)=v0 (wave only).
struct InitialData {
    double u0 = 1.0;
    double v0 = 0.0;
};

// Homogeneous-equation solution; x-independent for constant initial data.
inline double homogeneous_solution(EquationKind kind, double t, const InitialData& init) {
    return kind == EquationKind::Wave ? init.u0 + t * init.v0 : init.u0;
}

struct Estimate {
    double value = 0.0;
    double stderr_of_mean = 0.0;
    std::int64_t samples = 0;
};

struct ChaosTerm {
    int n = 0;
    double value = 0.0;
    double stderr_of_mean = 0.0;
    Method method = Method::SpatialMc;
    std::int64_t samples = 0;
};

struct StratumStat {
    int k = 0;
    double poisson_weight = 0.0;  // t^{2k}/k!
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::int64_t n_configs = 0;
    std::int64_t n_theta = 0;
};

struct MomentEstimate {
    double value = 0.0;
    double stderr_of_mean = 0.0;
    std::vector<StratumStat> strata;
    std::uint64_t seed = 0;
    Method method = Method::Chaos;
    std::int64_t samples = 0;
    double tail_bound = 0.0;       // FK only: bound on the discarded k > k_max tail
    std::int64_t resamples = 0;    // degenerate-draw rejections, reported not dropped
};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::FourierMc: return "fourier-mc";
        case Method::SpatialMc: return "spatial-mc";
        case Method::ClosedForm: return "closed-form";
        case Method::Quadrature: return "quadrature";
        case Method::FkWave: return "fk-wave";
        case Method::FkHeat: return "fk-heat";
        case Method::Chaos: return "chaos";
    }
    return "?";
}

}  // namespace fm

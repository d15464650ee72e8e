#include "green.hpp"

#include <cmath>
#include <numbers>

namespace fm {

namespace {
constexpr double kPi = std::numbers::pi;
}

double gw_fourier(double t, double r) {
    if (t < 0.0 || r < 0.0) throw DomainError("gw_fourier: t and r must be nonnegative");
    const double z = t * r;
    if (z < 1e-4) {
        // sin(tr)/r = t (1 - z^2/6 + z^4/120 - ...)
        const double z2 = z * z;
        return t * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0));
    }
    return std::sin(z) / r;
}

double gh_fourier(double t, double r) {
    if (t < 0.0 || r < 0.0) throw DomainError("gh_fourier: t and r must be nonnegative");
    return std::exp(-0.5 * t * r * r);
}

double gw_density(int dim, double t, double r) {
    if (t <= 0.0 || r < 0.0) throw DomainError("gw_density: need t > 0, r >= 0");
    switch (dim) {
        case 1:
            return r <= t ? 0.5 : 0.0;
        case 2:
            return r < t ? 1.0 / (2.0 * kPi * std::sqrt(t * t - r * r)) : 0.0;
        case 3:
            throw UnsupportedError("gw_density: the d = 3 wave kernel is a surface measure");
    }
    throw DomainError("gw_density: dim must be 1, 2, or 3");
}

double gw_mass(double t) {
    if (t < 0.0) throw DomainError("gw_mass: t must be nonnegative");
    return t;
}

ThetaSampler::ThetaSampler(EquationKind kind, int dim) : kind_(kind), dim_(dim) {
    if (dim < 1 || dim > 3) throw DomainError("ThetaSampler: dim must be 1, 2, or 3");
}

double ThetaSampler::scale(double s) const {
    return kind_ == EquationKind::Wave ? s : std::sqrt(s);
}

void ThetaSampler::sample(Rng& rng, std::span<double> out) const {
    if (static_cast<int>(out.size()) < dim_)
        throw DomainError("ThetaSampler: output span too small");
    if (kind_ == EquationKind::Heat) {
        for (int j = 0; j < dim_; ++j) out[j] = rng.normal();
        return;
    }
    switch (dim_) {
        case 1:
            out[0] = rng.uniform(-1.0, 1.0);
            break;
        case 2: {
            // radius CDF 1 - sqrt(1 - r^2) on [0, 1), uniform angle
            const double u = rng.uniform();
            const double r = std::sqrt(u * (2.0 - u));  // sqrt(1 - (1-u)^2)
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            out[0] = r * std::cos(phi);
            out[1] = r * std::sin(phi);
            break;
        }
        case 3: {
            // uniform on the unit sphere
            const double z = rng.uniform(-1.0, 1.0);
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            out[0] = s * std::cos(phi);
            out[1] = s * std::sin(phi);
            out[2] = z;
            break;
        }
    }
}

}  // namespace fm

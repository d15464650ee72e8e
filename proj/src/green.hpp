#pragma once

#include "rng.hpp"
#include "types.hpp"

#include <array>
#include <span>

namespace fm {

// Fourier transform of the Green function at radial frequency r >= 0:
// wave sin(t r)/r (dimension independent), heat exp(-t r^2 / 2).
double gw_fourier(double t, double r);
double gh_fourier(double t, double r);

// Pointwise density of the wave Green function at radius r, dimensions 1
// and 2 (in d = 3 it is a surface measure; throws UnsupportedError).
double gw_density(int dim, double t, double r);

// Total mass int G(t, dx): t for the wave kernel, 1 for the heat kernel.
double gw_mass(double t);

// Sampler for the normalized shape Theta0 of the Green function: the wave
// kernel at time t is t times the law of t*Theta0, the heat kernel is the
// law of sqrt(t)*Theta0 (standard normal).
class ThetaSampler {
public:
    ThetaSampler(EquationKind kind, int dim);

    EquationKind kind() const { return kind_; }
    int dim() const { return dim_; }

    // scale factor applied to Theta0 at elapsed time s
    double scale(double s) const;

    // draws Theta0 into out[0..dim)
    void sample(Rng& rng, std::span<double> out) const;

private:
    EquationKind kind_;
    int dim_;
};

}  // namespace fm

#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <stdexcept>

namespace fm::quad {

inline constexpr double kDefaultTol = 1e-8;

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
};

// Adaptive Gauss-Kronrod on a finite interval (smooth integrands).
template <typename F>
Result finite(F&& f, double a, double b, double tol = kDefaultTol) {
    double err = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 15, tol, &err);
    return {v, err};
}

// tanh-sinh on a finite interval; tolerates integrable endpoint
// singularities like x^{-1/2}.
template <typename F>
Result finite_singular(F&& f, double a, double b, double tol = kDefaultTol) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    double v = integrator.integrate(f, a, b, tol, &err, &l1);
    return {v, err * l1};
}

// exp-sinh on [a, inf) for decaying, non-oscillatory integrands.
template <typename F>
Result half_line(F&& f, double a, double tol = kDefaultTol) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    double v = integrator.integrate(f, a, std::numeric_limits<double>::infinity(),
                                    tol, &err, &l1);
    return {v, err * l1};
}

}  // namespace fm::quad

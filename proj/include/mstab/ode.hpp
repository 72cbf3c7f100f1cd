#pragma once

// Thin wrappers around boost::odeint's Dormand-Prince 5(4) stepper.  All
// integrations in the library go through these two entry points so that the
// tolerance policy lives in one place.

#include <array>
#include <cstddef>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "mstab/errors.hpp"

namespace mstab {

inline constexpr double kOdeTol = 1e-12;

template <std::size_t N>
using OdeState = std::array<double, N>;

// Integrate y' = rhs(y, x) from x0 to x1 in place; lands exactly on x1.
template <std::size_t N, class Rhs>
void integrate_to(Rhs&& rhs, OdeState<N>& y, double x0, double x1,
                  double tol = kOdeTol) {
    namespace ode = boost::numeric::odeint;
    if (x1 == x0) return;
    auto stepper =
        ode::make_controlled(tol, tol, ode::runge_kutta_dopri5<OdeState<N>>());
    const double h0 = (x1 - x0) / 128.0;
    try {
        ode::integrate_adaptive(stepper, std::forward<Rhs>(rhs), y, x0, x1, h0);
    } catch (const std::exception& e) {
        throw NumericalError(std::string("ODE integration failed: ") + e.what());
    }
    for (double v : y)
        if (!std::isfinite(v))
            throw NumericalError("ODE integration produced non-finite state");
}

// Integrate from x0 to x1, invoking obs(y, x) on the n+1 uniform grid points
// x0 + k*(x1-x0)/n (dense-output interpolation between adaptive steps).
// On return y holds the state at x1.
template <std::size_t N, class Rhs, class Obs>
void integrate_sampled(Rhs&& rhs, OdeState<N>& y, double x0, double x1, int n,
                       Obs&& obs, double tol = kOdeTol) {
    namespace ode = boost::numeric::odeint;
    auto stepper =
        ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<OdeState<N>>());
    const double h = (x1 - x0) / n;
    stepper.initialize(y, x0, h);
    obs(y, x0);
    int k = 1;
    OdeState<N> yi;
    while (k <= n) {
        const double target = (k == n) ? x1 : x0 + k * h;
        while (stepper.current_time() < target) {
            // never step (and hence evaluate the rhs) beyond x1
            if (stepper.current_time() + stepper.current_time_step() > x1)
                stepper.initialize(stepper.current_state(), stepper.current_time(),
                                   x1 - stepper.current_time());
            stepper.do_step(rhs);
            if (!std::isfinite(stepper.current_time_step()))
                throw NumericalError("ODE step underflow");
        }
        while (k <= n) {
            const double xk = (k == n) ? x1 : x0 + k * h;
            if (xk > stepper.current_time()) break;
            stepper.calc_state(xk, yi);
            obs(yi, xk);
            ++k;
        }
    }
    stepper.calc_state(x1, y);
}

} // namespace mstab

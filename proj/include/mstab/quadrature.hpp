#pragma once

// Composite-Simpson quadrature on uniform grids, cumulative integrals, and
// Fornberg finite-difference weights for endpoint/interior derivatives of
// sampled functions.

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace mstab {

// Integral over the full grid of n+1 samples with spacing h.  If the panel
// count is odd the last panel is handled with the (equally accurate)
// three-point Newton-Cotes tail.
double simpson(std::span<const double> f, double h);

// Pointwise product integral \int f g dx.
double simpson_product(std::span<const double> f, std::span<const double> g,
                       double h);

// Cumulative integral c[k] = \int_{x0}^{x_k} f dx, fourth order.
std::vector<double> cumulative_integral(std::span<const double> f, double h);

// Fornberg weights: w[j] multiplies f(xs[j]) to approximate the m-th
// derivative at z.  Exact for polynomials of degree xs.size()-1.
std::vector<double> fd_weights(double z, std::span<const double> xs, int m);

// m-th derivative of sampled f (spacing h) at index i, using a centred
// (or one-sided near the ends) stencil of `width` points, width >= m+2.
double fd_derivative(std::span<const double> f, double h, std::size_t i, int m,
                     int width = 7);

} // namespace mstab

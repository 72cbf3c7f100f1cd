#include "mstab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mstab {

double simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size() - 1; // panels
    if (n == 0) return 0.0;
    if (n == 1) return 0.5 * h * (f[0] + f[1]);
    double acc = 0.0;
    std::size_t i = 0;
    // pairwise Simpson panels
    for (; i + 2 <= n - (n % 2); i += 2)
        acc += h / 3.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (n % 2) // odd tail: quadratic through the last three samples
        acc += h / 12.0 * (-f[n - 2] + 8.0 * f[n - 1] + 5.0 * f[n]);
    return acc;
}

double simpson_product(std::span<const double> f, std::span<const double> g,
                       double h) {
    assert(f.size() == g.size());
    std::vector<double> fg(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) fg[i] = f[i] * g[i];
    return simpson(fg, h);
}

std::vector<double> cumulative_integral(std::span<const double> f, double h) {
    const std::size_t n = f.size() - 1;
    std::vector<double> c(n + 1, 0.0);
    if (n == 0) return c;
    if (n == 1) {
        c[1] = 0.5 * h * (f[0] + f[1]);
        return c;
    }
    c[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (std::size_t i = 2; i <= n; ++i) {
        // even index: close a Simpson pair; odd: three-point right panel
        if (i % 2 == 0)
            c[i] = c[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        else
            c[i] = c[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
    return c;
}

// B. Fornberg, "Generation of finite difference formulas on arbitrarily
// spaced grids", Math. Comp. 51 (1988).
std::vector<double> fd_weights(double z, std::span<const double> xs, int m) {
    const int nd = static_cast<int>(xs.size());
    if (nd < m + 1) throw std::invalid_argument("fd_weights: too few nodes");
    std::vector<double> c(static_cast<std::size_t>(nd) * (m + 1), 0.0);
    auto C = [&](int i, int j) -> double& { return c[i * (m + 1) + j]; };
    double c1 = 1.0;
    double c4 = xs[0] - z;
    C(0, 0) = 1.0;
    for (int i = 1; i < nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(nd);
    for (int i = 0; i < nd; ++i) w[i] = C(i, m);
    return w;
}

double fd_derivative(std::span<const double> f, double h, std::size_t i, int m,
                     int width) {
    const std::size_t n = f.size();
    width = std::min<int>(width, static_cast<int>(n));
    // place the stencil as centred as the boundaries allow
    std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(i) - width / 2;
    lo = std::clamp<std::ptrdiff_t>(lo, 0, static_cast<std::ptrdiff_t>(n) - width);
    std::vector<double> xs(width);
    for (int j = 0; j < width; ++j)
        xs[j] = static_cast<double>(lo + j - static_cast<std::ptrdiff_t>(i)) * h;
    const auto w = fd_weights(0.0, xs, m);
    double acc = 0.0;
    for (int j = 0; j < width; ++j) acc += w[j] * f[lo + j];
    return acc;
}

} // namespace mstab

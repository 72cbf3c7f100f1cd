#include "mstab/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mstab {

// Arithmetic-geometric-mean scheme of Abramowitz & Stegun 16.4: build the
// descending Landen ladder a_i, c_i, then recover the amplitude by the
// backward recurrence phi_{i-1} = (phi_i + asin(c_i/a_i sin phi_i))/2.
JacobiTriple eval_jacobi(double u, double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw std::domain_error("eval_jacobi: modulus-squared m outside [0,1]");
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (m < eps) {
        return {std::sin(u), std::cos(u), 1.0};
    }
    if (1.0 - m < eps) {
        const double s = 1.0 / std::cosh(u);
        return {std::tanh(u), s, s};
    }
    constexpr int kMax = 32;
    double a[kMax], c[kMax];
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int n = 0;
    while (std::fabs(c[n]) > eps * a[n]) {
        if (n + 1 == kMax) break;
        const double an = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        a[n + 1] = an;
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int i = n; i > 0; --i)
        phi = 0.5 * (phi + std::asin(std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0)));
    const double sn = std::sin(phi);
    const double cn = std::cos(phi);
    const double dn = std::sqrt(1.0 - m * sn * sn);
    return {sn, cn, dn};
}

double elliptic_K(double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw std::domain_error("elliptic_K: modulus-squared m outside [0,1]");
    if (m == 1.0) return std::numeric_limits<double>::infinity();
    double a = 1.0, b = std::sqrt(1.0 - m);
    while (std::fabs(a - b) > std::numeric_limits<double>::epsilon() * a) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return M_PI / (2.0 * a);
}

} // namespace mstab

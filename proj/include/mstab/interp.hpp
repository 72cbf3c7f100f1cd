#pragma once

// Piecewise two-point quintic Hermite interpolation from samples of
// (f, f', f'') on a uniform grid.  Interpolation error O(h^6), derivative
// O(h^5); used to make wave profiles evaluable between grid nodes.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mstab {

class HermiteInterp {
  public:
    HermiteInterp(std::vector<double> f, std::vector<double> df,
                  std::vector<double> d2f, double length)
        : f_(std::move(f)), df_(std::move(df)), d2f_(std::move(d2f)),
          ell_(length), h_(length / static_cast<double>(f_.size() - 1)) {
        if (f_.size() != df_.size() || f_.size() != d2f_.size() || f_.size() < 2)
            throw std::invalid_argument("HermiteInterp: inconsistent samples");
    }

    double value(double x) const { return eval(x, false); }
    double deriv(double x) const { return eval(x, true); }
    double length() const { return ell_; }

  private:
    double eval(double x, bool want_deriv) const {
        if (x < -1e-12 * ell_ || x > ell_ * (1.0 + 1e-12))
            throw std::domain_error("HermiteInterp: evaluation outside [0, ell]");
        const std::size_t nseg = f_.size() - 2;
        double u = x / h_;
        std::size_t i = static_cast<std::size_t>(std::fmin(std::fmax(u, 0.0),
                                                           static_cast<double>(nseg)));
        const double t = u - static_cast<double>(i);
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        if (!want_deriv) {
            const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
            const double H1 = t - 6 * t3 + 8 * t4 - 3 * t5;
            const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
            const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
            const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
            const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
            return f_[i] * H0 + h_ * df_[i] * H1 + h_ * h_ * d2f_[i] * H2 +
                   f_[i + 1] * H3 + h_ * df_[i + 1] * H4 + h_ * h_ * d2f_[i + 1] * H5;
        }
        const double G0 = (-30 * t2 + 60 * t3 - 30 * t4) / h_;
        const double G1 = (1 - 18 * t2 + 32 * t3 - 15 * t4);
        const double G2 = (t - 4.5 * t2 + 6 * t3 - 2.5 * t4) * h_;
        const double G3 = (30 * t2 - 60 * t3 + 30 * t4) / h_;
        const double G4 = (-12 * t2 + 28 * t3 - 15 * t4);
        const double G5 = (1.5 * t2 - 4 * t3 + 2.5 * t4) * h_;
        return f_[i] * G0 + df_[i] * G1 + d2f_[i] * G2 + f_[i + 1] * G3 +
               df_[i + 1] * G4 + d2f_[i + 1] * G5;
    }

    std::vector<double> f_, df_, d2f_;
    double ell_, h_;
};

} // namespace mstab

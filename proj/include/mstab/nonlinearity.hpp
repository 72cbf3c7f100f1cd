#pragma once

// The nonlinearity f(r), r = phi^2, of the stationary equation
// phi'' + f(phi^2) phi + beta phi = 0, together with f' and an
// antiderivative F (used by the phase-plane energy check).

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace mstab {

struct Nonlinearity {
    enum class Kind { power, cubic_focusing, cubic_defocusing, custom };

    Kind kind = Kind::cubic_focusing;
    double p = 1.0; // exponent for Kind::power
    std::function<double(double)> custom_f, custom_df;

    double value(double r) const {
        switch (kind) {
            case Kind::cubic_focusing: return r;
            case Kind::cubic_defocusing: return -r;
            case Kind::power:
                if (p == 1.0) return r;
                if (p == 2.0) return r * r;
                if (p == 3.0) return r * r * r;
                return std::pow(r, p);
            case Kind::custom: return custom_f(r);
        }
        return 0.0;
    }

    double deriv(double r) const {
        switch (kind) {
            case Kind::cubic_focusing: return 1.0;
            case Kind::cubic_defocusing: return -1.0;
            case Kind::power:
                if (p == 1.0) return 1.0;
                if (p == 2.0) return 2.0 * r;
                if (p == 3.0) return 3.0 * r * r;
                return p * std::pow(r, p - 1.0);
            case Kind::custom: return custom_df(r);
        }
        return 0.0;
    }

    // Antiderivative F with F(0)=0; numeric for custom nonlinearities.
    double anti(double r) const;

    // Verify custom_df against centred differences of custom_f on [0, rmax];
    // throws std::invalid_argument above 1e-6 relative mismatch.
    void check_derivative(double rmax) const;

    static Nonlinearity power_law(double exponent) {
        if (!(exponent > 0)) throw std::invalid_argument("power exponent must be positive");
        Nonlinearity f;
        f.kind = Kind::power;
        f.p = exponent;
        return f;
    }
    static Nonlinearity cubic_focusing() { return Nonlinearity{}; }
    static Nonlinearity cubic_defocusing() {
        Nonlinearity f;
        f.kind = Kind::cubic_defocusing;
        return f;
    }
    static Nonlinearity custom(std::function<double(double)> f,
                               std::function<double(double)> df) {
        Nonlinearity nl;
        nl.kind = Kind::custom;
        nl.custom_f = std::move(f);
        nl.custom_df = std::move(df);
        return nl;
    }
};

} // namespace mstab

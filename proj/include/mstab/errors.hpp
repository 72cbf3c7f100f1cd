#pragma once

#include <stdexcept>
#include <string>

namespace mstab {

struct NumericalError : std::runtime_error {
    double lambda, s;
    NumericalError(const std::string& what, double lambda_ = 0, double s_ = 0)
        : std::runtime_error(what), lambda(lambda_), s(s_) {}
};

struct NoWaveOnBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FredholmViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotACrossing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NongenericTangency : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnresolvedCorner : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mstab

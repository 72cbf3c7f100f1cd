#pragma once

// Standing-wave profiles phi solving phi'' + f(phi^2) phi + beta phi = 0 on
// [0, ell] with Dirichlet or Neumann end conditions, and the linearised
// potential pair g = 2 f'(phi^2) phi^2 + f(phi^2) + beta, h = f(phi^2) + beta.

#include <vector>

#include "mstab/nonlinearity.hpp"
#include "mstab/potentials.hpp"

namespace mstab {

enum class BoundaryKind { dirichlet, neumann };

// Phase-plane orbit descriptor.  The shooting parameter is the free initial
// value (amplitude a0 for Neumann, slope b0 for Dirichlet); [lo, hi] is the
// admissible range scanned for brackets.  `critical_points` is the required
// number of interior zeros of phi' (< 0 disables the filter); ties are broken
// by smallest amplitude.
struct WaveBranch {
    double lo = 1e-3, hi = 10.0;
    int critical_points = -1;
    double a0 = 0.0, b0 = 0.0; // filled in by the solver
};

struct StandingWave {
    double beta = 0.0;
    double ell = 1.0;
    BoundaryKind bc = BoundaryKind::dirichlet;
    Nonlinearity nonlinearity;
    WaveBranch branch;
    std::vector<double> x, phi, dphi; // uniform grid, n+1 samples

    int grid_n() const { return static_cast<int>(x.size()) - 1; }
    double h() const { return ell / grid_n(); }
    double max_abs() const;
    int interior_critical_points() const;

    // Validation of the construction invariants; throws on failure.
    //   - stationary-equation residual < 1e-8 * max|phi| (sup norm)
    //   - end conditions to 1e-10 * max|phi|
    //   - phase-plane energy constant to 1e-8 relative
    void validate() const;
};

// One-parameter shooting on the free initial value.  Throws NoWaveOnBranch
// when no sign change exists in the branch window or the critical-point
// filter rejects every root.
StandingWave solve_standing_wave(const Nonlinearity& f, double beta, double ell,
                                 BoundaryKind bc, const WaveBranch& branch,
                                 int grid_n = 1024);

// Closed-form cubic-focusing profiles (f(r) = r, beta < 0), built from
// Jacobi elliptic functions and cross-checked against the integrator.
//   dnoidal: phi = A dn(Bx|m), Neumann, ell = k_half_periods * K(m)/B
//   cnoidal: phi = A cn(Bx - K(m)|m), Dirichlet, ell = k_half_periods * 2K(m)/B
StandingWave dnoidal_wave(double beta, double m, int k_half_periods,
                          int grid_n = 1024);
StandingWave cnoidal_wave(double beta, double m, int k_half_periods,
                          int grid_n = 1024);

// Period of the dn (resp. cn) orbit at modulus-squared m for cubic focusing.
double dnoidal_period(double beta, double m);
double cnoidal_period(double beta, double m);

PotentialPair linearized_potentials(const StandingWave& w);

} // namespace mstab

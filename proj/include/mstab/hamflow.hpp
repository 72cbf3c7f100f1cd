#pragma once

// The rescaled first-order Hamiltonian system
//
//   d/dx (u, v, r, z) = [[0,0,s,0], [0,0,0,-s],
//                        [-s g(sx), -s lambda, 0, 0],
//                        [-s lambda, s h(sx), 0, 0]] (u, v, r, z)
//
// on [0, ell], where r = u'/s and z = -v'/s preserve the Hamiltonian
// structure.  The fundamental matrix Phi = [[U, X], [V, Y]] starts from
// U(0) = Y(0) = I, V(0) = X(0) = 0; det X(ell) vanishes exactly on the real
// eigenvalue curves.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "mstab/potentials.hpp"

namespace mstab {

using TraceVector = std::array<double, 8>;

struct BoundaryFrame {
    double lambda = 0.0, s = 1.0;
    Eigen::Matrix2d U, V, X, Y;

    Eigen::Matrix4d full() const; // [[U, X], [V, Y]]
    // columns of the 8x4 Lagrangian frame: rescaled traces of the four
    // fundamental solutions (I2 0; U X; 0 -I2; V Y at x = ell)
    std::array<TraceVector, 4> lagrangian_frame() const;
};

// Integrate the 4x4 system over [0, ell]; relative accuracy ~1e-10 on entries.
BoundaryFrame fundamental_matrix(const PotentialPair& p, double lambda, double s);

// Same flow over a subinterval [a, b] (identity data at x = a).
Eigen::Matrix4d flow_matrix(const PotentialPair& p, double lambda, double s,
                            double a, double b);

// Endpoint data of one solution pair (u, v) of the second-order system.
struct EndpointData {
    double u0, v0, du0, dv0; // values and x-derivatives at x = 0
    double ul, vl, dul, dvl; // ... and at x = ell
};

// The rescaled trace (u(0), v(0), u(l), v(l), -u'(0)/s, v'(0)/s, u'(l)/s, -v'(l)/s).
TraceVector rescaled_trace(const EndpointData& e, double s);

// Canonical symplectic form on R^8: omega(a, b) = J a . b with J = [[0,-I4],[I4,0]].
double omega(const TraceVector& a, const TraceVector& b);
Eigen::Matrix<double, 8, 8> symplectic_J();

// A vector-valued function (u, v) sampled on the uniform grid over [0, ell].
struct SampledPair {
    double ell = 1.0;
    std::vector<double> u, v; // n+1 samples each

    int grid_n() const { return static_cast<int>(u.size()) - 1; }
    double h() const { return ell / grid_n(); }
};

// |LHS - RHS| of the Green-type identity
//   <S(N_s - s^2 lambda) a, b> - <a, S(N_s - s^2 lambda) b> = s omega(Tr_s a, Tr_s b);
// derivatives of the sampled inputs by high-order finite differences,
// inner products by composite Simpson.
double greens_residual(const SampledPair& a, const SampledPair& b,
                       const PotentialPair& p, double lambda, double s);

// Gram matrix omega(col_i, col_j) of the Lagrangian frame; vanishes for
// genuinely Lagrangian planes (isotropy check).
Eigen::Matrix4d lagrangian_gram(const BoundaryFrame& f);

} // namespace mstab

#pragma once

// The linearised-operator potential pair: L+ = -d_xx - g(x), L- = -d_xx - h(x)
// on [0, ell] with Dirichlet conditions.

#include <functional>
#include <utility>

namespace mstab {

struct PotentialPair {
    enum class Provenance { from_wave, explicit_ };

    std::function<double(double)> g, h;   // potentials of L+ and L-
    std::function<double(double)> dg, dh; // x-derivatives (crossing forms at lambda0 != 0)
    double ell = 1.0;
    Provenance provenance = Provenance::explicit_;
    // true when g,h are defined beyond [0,ell] (domain stretching s > 1)
    bool extendable = true;

    double sup_norm(int samples = 512) const;
};

PotentialPair constant_pair(double g_plus, double h_minus, double ell);

// Test families from the constant-coefficient catalogue (ell = 1):
//   T1 = (9pi^2, 4pi^2): double kernel at (0,1)
//   T2 = (2pi^2, 4pi^2): simple L- kernel at (0,1)
//   T3 = (2pi^2, pi^2/2): no kernel, one positive real eigenvalue
PotentialPair family_T1();
PotentialPair family_T2();
PotentialPair family_T3();
PotentialPair free_pair(double ell = 1.0);

} // namespace mstab

#pragma once

// Maslov crossing forms, eigenvalue-curve concavities, the corner term, and
// the Maslov-box index bookkeeping.
//
// Conventions: kernel functions are L2-normalised before any form is
// evaluated (signatures are normalisation-invariant; raw values are reported
// for the normalised basis together with the normalisation constants).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mstab/potentials.hpp"
#include "mstab/spectra.hpp"

namespace mstab {

struct FormReport {
    Eigen::MatrixXd mat; // symmetric, size = kernel_dim
    int n_plus = 0, n_minus = 0, n_zero = 0;
    int signature() const { return n_plus - n_minus; }
};

// Crossing form in the s direction.  At lambda0 = 0 the diagonal boundary
// formula (ell/s0^2)[-(u'(ell))^2 + (v'(ell))^2]; otherwise the quadrature
// form (1/s0) <(d_s B_s - 2 s0 lambda0) k_i, S k_j>.
FormReport crossing_form_s(const Crossing& c, const PotentialPair& p);

// Crossing form in the lambda direction: [-s0 <k_i, S k_j>]; exactly zero
// for a simple conjugate point (one kernel component vanishes identically).
FormReport crossing_form_lambda(const Crossing& c);

enum class SignConvention { Lplus_eq, minus_Lminus_eq };

// Dirichlet solution of  L w = rhs  (or -L w = rhs) with L = -d_xx - q on
// [0, ell], by variation of parameters from the identity-initialised
// fundamental pair.  With 0 in Spec(L), rhs must be orthogonal to the kernel
// (Fredholm); the returned solution is the one orthogonal to the kernel.
std::vector<double> solve_inhomogeneous(const std::function<double(double)>& q,
                                        SignConvention conv,
                                        const std::vector<double>& rhs,
                                        double ell);

struct SecondOrderForm {
    FormReport form;                                 // -2 s0^3 <hat, kernel> entries
    std::vector<std::vector<double>> generalized;    // hat-u / hat-v samples
    std::vector<double> vk_integrals;                // <hat,kernel> per element
    bool degenerate = false;                         // an eigenvalue below 1e-8
};

// Second-order lambda crossing form; requires crossing_form_lambda == 0.
SecondOrderForm second_order_form(const Crossing& c, const PotentialPair& p);

// Bundle of all crossing-form data at one crossing; the second-order form is
// present exactly when the first-order lambda form vanishes.
struct CrossingFormReport {
    Crossing at;
    FormReport m_s, m_lambda;
    std::optional<SecondOrderForm> m_lambda2;
};

CrossingFormReport crossing_forms(const Crossing& c, const PotentialPair& p);

struct ConcavityReport {
    double sdot0 = 0.0;                  // always 0 at a conjugate point
    std::vector<double> sddot;           // one or two values
    std::vector<int> s_sharp;            // departure side of s = s0 (+1/-1)
    std::vector<double> vk_integrals;
    bool degenerate = false;             // |sddot| < 1e-7, curve-trace fallback used
    bool isolated = false;               // double kernel with <u1,v2> != 0
    bool sharp_resolved = true;
    double pairing = 0.0;                // <u1,v2> in the double case
};

// Concavity of the eigenvalue curve(s) through a conjugate point (0, s0).
ConcavityReport concavity(const Crossing& c, const PotentialPair& p);

struct CornerTerm {
    int c = 0;
    bool resolved = true;
    int c_min = 0, c_max = 0; // interval when unresolved
    std::string rule;         // which case of the decision table fired
};

// The decision table for the corner contribution at (0, 1): no kernel -> 0;
// simple L+ kernel -> {0,-1} by the departure side; simple L- -> {0,1};
// double with nonzero pairing -> 0; double orthogonal -> three-case table.
CornerTerm correction_term(const std::optional<Crossing>& at_s1,
                           const std::optional<ConcavityReport>& conc);

struct MaslovBoxReport {
    int P = 0, Q = 0;
    int gamma2_index = 0; // Q - P
    int corner_c = 0;
    int gamma3_index = 0; // P - Q - corner
    int lower_bound = 0;  // |P - Q - corner|
    bool corner_resolved = true;
    int corner_min = 0, corner_max = 0;
    std::optional<Crossing> corner_crossing;
    std::optional<ConcavityReport> corner_concavity;
    // per-conjugate-point signature dictionary (s0, signature)
    std::vector<std::pair<double, int>> gamma2_signatures;
    // corner/second-order consistency: c - dim ker(L-) == -n_-(m^(2))
    bool second_order_consistent = true;
};

MaslovBoxReport maslov_box(const PotentialPair& p, int kernel_grid = 2048);

} // namespace mstab

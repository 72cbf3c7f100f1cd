#pragma once

// Real-eigenvalue location via the characteristic determinant det X(ell),
// conjugate points and Morse indices by scalar shooting, zero-set tracing in
// the lambda-s plane, and an independent finite-difference oracle for the
// full (complex) spectrum.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "mstab/hamflow.hpp"
#include "mstab/potentials.hpp"

namespace mstab {

double char_det(const PotentialPair& p, double lambda, double s);

// det X(ell) over a uniform nl x ns grid on [l0,l1] x [s0,s1]; row-major with
// lambda varying fastest.  The _serial variant is the reference
// implementation the OpenMP kernel is tested and benchmarked against.
std::vector<double> detx_grid(const PotentialPair& p, double l0, double l1,
                              int nl, double s0, double s1, int ns);
std::vector<double> detx_grid_serial(const PotentialPair& p, double l0, double l1,
                                     int nl, double s0, double s1, int ns);

enum class KernelSide { Lplus, Lminus, both, coupled };

// One sampled eigenfunction pair of N_s, L2-normalised.
struct KernelFunction {
    std::vector<double> u, v;      // n+1 samples on [0, ell]
    double du0, dv0, dul, dvl;     // endpoint x-derivatives from the ODE state
    double norm_constant;          // L2 norm before normalisation
};

struct Crossing {
    double lambda0 = 0.0, s0 = 1.0;
    double ell = 1.0;
    int kernel_dim = 0;
    KernelSide which_kernel = KernelSide::coupled;
    std::vector<KernelFunction> kernel; // dim 2: [0] = (u1, 0), [1] = (0, v2)
    int grid_n = 0;
};

// Kernel extraction at a claimed crossing: SVD of X(ell), null-vector initial
// data re-integrated with dense output.  kernel_dim = 0 if nothing is there.
Crossing make_crossing(const PotentialPair& p, double lambda0, double s0,
                       int grid_n = 2048, double svd_tol = 1e-8);

struct ScanOptions {
    int steps = 2000;
    double root_tol = 1e-10;    // relative bisection width
    double tangent_dip = 1e-6;  // |det| dip (relative) triggering minimum refinement
    int kernel_grid = 2048;
};

// All roots of lambda -> det X(ell; lambda, s) in [lmin, lmax]: sign-change
// scan plus bisection, even-multiplicity zeros caught by minimum refinement.
std::vector<Crossing> real_eigenvalues(const PotentialPair& p, double s,
                                       double lmin, double lmax,
                                       const ScanOptions& opt = {});

// Conjugate points of the scalar operator -d_xx - q on [0, ell]: all s0 in
// (window_lo, window_hi] with 0 in Spec restricted to [0, s0 ell].
std::vector<double> conjugate_points(const std::function<double(double)>& q,
                                     double ell, double window_lo = 0.0,
                                     double window_hi = 1.0);

// Morse index = number of conjugate points strictly inside (0,1).  A kernel
// at s = 1 (within 1e-8) is excluded and flagged through *boundary_degeneracy.
int morse_index(const std::function<double(double)>& q, double ell,
                bool* boundary_degeneracy = nullptr);

// w(ell) of the Dirichlet shooting solution, normalised by max |w|; the
// operator has a zero Dirichlet eigenvalue iff this vanishes.
double dirichlet_shot(const std::function<double(double)>& q, double ell);

struct CurvePoint {
    double lambda, s;
    bool tangency = false; // |d det/d lambda| under tolerance here
};

struct EigenvalueCurve {
    int branch_id = 0;
    std::vector<CurvePoint> points;
};

struct TraceOptions {
    int nl = 400, ns = 400;
    double tangency_tol = 1e-6;
};

// Zero-set extraction of det X on [lmin,lmax] x [smin,smax] by per-cell sign
// analysis with bisection along grid edges, chained into polyline branches.
std::vector<EigenvalueCurve> trace_curves(const PotentialPair& p, double lmin,
                                          double lmax, double smin, double smax,
                                          const TraceOptions& opt = {});

struct OracleEig {
    std::complex<double> lambda;   // in the lambda normalisation (eig of N_s / s^2)
    double err_estimate;           // |Richardson - fine|; inf when unpaired
    double krein_value;            // <L z, z> / s^2 for the unit-norm eigenvector
    bool extrapolated;             // Richardson-paired between the n and 2n grids
    bool krein_indeterminate;      // |krein| below 1e-6
};

// Second-order central-difference discretisation of N_s with Dirichlet
// elimination on grids n and 2n; eigenvalues Richardson-extrapolated.  The
// block eigenproblem [[0,-A-],[A+,0]] is reduced to the equivalent product
// problem -A+ A- (eigenvalues come in +/- pairs) before the dense solve.
std::vector<OracleEig> fd_spectrum(const PotentialPair& p, double s, int n = 256);

// Negative Dirichlet eigenvalues of the scalar operator -d_xx - q by
// symmetric tridiagonal discretisation (oracle for morse_index).
int fd_negative_count(const std::function<double(double)>& q, double ell,
                      int n = 800);

} // namespace mstab

#pragma once

// Stability verdicts for standing waves and the Krein-index cross-checks.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mstab/maslov.hpp"
#include "mstab/spectra.hpp"
#include "mstab/wave.hpp"

namespace mstab {

enum class KernelCase { Lplus_kernel, Lminus_kernel, no_kernel, double_kernel };
enum class Verdict {
    unstable_real_eigenvalue,
    spectrally_stable_imaginary_axis,
    inconclusive
};

struct StabilityReport {
    int P = 0, Q = 0;
    KernelCase kernel_case = KernelCase::no_kernel;
    int corner_c = 0;
    int lower_bound = 0;
    double vk_integral = 0.0;
    std::vector<double> sddot;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> evidence; // rule identifiers fired, e.g. "Cor2.3"
    std::vector<double> located_real_eigenvalues;
    double lambda_max = 0.0; // scan ceiling used
};

// Rule pipeline: Jones-Grillakis exclusion, the Neumann nonvanishing fast
// path, the P/Q = 1/0 edge cases decided by the curve concavity, otherwise
// inconclusive with the Maslov lower bound.  Every unstable verdict is
// backed by an explicitly located positive real eigenvalue.
StabilityReport stability_report(const StandingWave& w);

// Concavity sign for Neumann waves from the fundamental pair {p, q} of
// L- v = 0: sign of (int p^2 dx) - (p(ell)/q(ell)) ell^2.
struct NeumannConcavity {
    int sign;
    double value;
};
NeumannConcavity neumann_concavity_sign(const StandingWave& w);

// Classical Vakhitov-Kolokolov quantity: (1/2) d/dbeta of the wave mass
// along the Dirichlet-preserving continuation, Richardson-refined central
// differences; cross-checked against the VK-type integral <uhat, phi>.
struct ClassicalVK {
    double half_dmass_dbeta;
    double vk_inner; // <uhat, phi> with L+ uhat = phi
    double relative_mismatch;
};
ClassicalVK classical_vk(const StandingWave& w, double beta_step = 1e-4);

// Correction terms of the general-family mass formula; identically zero for
// boundary-preserving families.
double vk_family_correction(double dphi0_dbeta, double dphil_dbeta,
                            double dphip_l_dbeta, double q_at_ell, int Q,
                            double ell);

struct KreinReport {
    Eigen::MatrixXd D_plus, D_minus;
    int n_minus_Dplus = 0, n_minus_Dminus = 0;
    int corner_c = 0;
    bool identity_c = false; // c == n_-(D+) - n_-(D-)
    int P = 0, Q = 0;
    int k_r = 0, k_c = 0, k_i_minus = 0;
    int rhs = 0; // P + Q - n_-(D-) - n_-(D+)
    bool balance_kks = false;     // k_r + 2 k_c + 2 k_i^- == rhs
    bool balance_gamma3_P = false; // == -Mas(Gamma3) + 2P - 2 n_-(D+)
    bool balance_gamma3_Q = false; // ==  Mas(Gamma3) + 2Q - 2 n_-(D-)
    bool cor_PQ0_checked = false, cor_PQ0 = false; // k_c = k_i^- = 0 when P or Q = 0
    bool cor_kr0_checked = false, cor_kr0 = false; // k_c + k_i^- identities when k_r = 0
    bool dimension_hypothesis_ok = false;          // generalized kernel has dim 2n
};

// Krein comparison at the non-regular crossing (0, 1): D-matrices from the
// generalized eigenvectors, the index identity, and the eigenvalue-count
// balance against the finite-difference oracle.
KreinReport krein_analysis(const PotentialPair& p, int oracle_n = 256,
                           int kernel_grid = 2048);

// Scan ceiling: no real eigenvalues above the sup-norm proxy of ||B_s||.
double lambda_ceiling(const PotentialPair& p);

} // namespace mstab

#include "mstab/hamflow.hpp"

#include <cmath>
#include <stdexcept>

#include "mstab/errors.hpp"
#include "mstab/ode.hpp"
#include "mstab/quadrature.hpp"

namespace mstab {

namespace {

// state layout: column-major 4x4, y[4c + r] = Phi(r, c)
struct FlowRhs {
    const PotentialPair& p;
    double lambda, s;
    void operator()(const OdeState<16>& y, OdeState<16>& dy, double x) const {
        const double gs = s * p.g(s * x);
        const double hs = s * p.h(s * x);
        const double sl = s * lambda;
        for (int c = 0; c < 4; ++c) {
            const double* w = y.data() + 4 * c;
            double* dw = dy.data() + 4 * c;
            dw[0] = s * w[2];
            dw[1] = -s * w[3];
            dw[2] = -gs * w[0] - sl * w[1];
            dw[3] = -sl * w[0] + hs * w[1];
        }
    }
};

OdeState<16> identity_state() {
    OdeState<16> y{};
    y[0] = y[5] = y[10] = y[15] = 1.0;
    return y;
}

Eigen::Matrix4d to_matrix(const OdeState<16>& y) {
    Eigen::Matrix4d M;
    for (int c = 0; c < 4; ++c)
        for (int r = 0; r < 4; ++r) M(r, c) = y[4 * c + r];
    return M;
}

} // namespace

Eigen::Matrix4d BoundaryFrame::full() const {
    Eigen::Matrix4d M;
    M.block<2, 2>(0, 0) = U;
    M.block<2, 2>(0, 2) = X;
    M.block<2, 2>(2, 0) = V;
    M.block<2, 2>(2, 2) = Y;
    return M;
}

// Z(lambda, s) from the identity initial data: rows are (u, v) at 0, (u, v)
// at ell, -(r, z) at 0, (r, z) at ell of the four fundamental solutions.
std::array<TraceVector, 4> BoundaryFrame::lagrangian_frame() const {
    std::array<TraceVector, 4> cols;
    for (int j = 0; j < 4; ++j) {
        TraceVector& t = cols[j];
        const bool right = j >= 2; // column of the (X, Y) block
        const int jj = j % 2;
        t[0] = right ? 0.0 : (jj == 0 ? 1.0 : 0.0);
        t[1] = right ? 0.0 : (jj == 1 ? 1.0 : 0.0);
        t[2] = right ? X(0, jj) : U(0, jj);
        t[3] = right ? X(1, jj) : U(1, jj);
        t[4] = right ? (jj == 0 ? -1.0 : 0.0) : 0.0;
        t[5] = right ? (jj == 1 ? -1.0 : 0.0) : 0.0;
        t[6] = right ? Y(0, jj) : V(0, jj);
        t[7] = right ? Y(1, jj) : V(1, jj);
    }
    return cols;
}

Eigen::Matrix4d flow_matrix(const PotentialPair& p, double lambda, double s,
                            double a, double b) {
    if (!(s > 0)) throw std::domain_error("flow_matrix: s must be positive");
    if (s > 1.0 && !p.extendable)
        throw std::domain_error("flow_matrix: potentials not defined beyond ell");
    OdeState<16> y = identity_state();
    try {
        integrate_to(FlowRhs{p, lambda, s}, y, a, b);
    } catch (NumericalError& e) {
        throw NumericalError(e.what(), lambda, s);
    }
    return to_matrix(y);
}

BoundaryFrame fundamental_matrix(const PotentialPair& p, double lambda, double s) {
    const Eigen::Matrix4d M = flow_matrix(p, lambda, s, 0.0, p.ell);
    BoundaryFrame f;
    f.lambda = lambda;
    f.s = s;
    f.U = M.block<2, 2>(0, 0);
    f.X = M.block<2, 2>(0, 2);
    f.V = M.block<2, 2>(2, 0);
    f.Y = M.block<2, 2>(2, 2);
    return f;
}

TraceVector rescaled_trace(const EndpointData& e, double s) {
    if (s == 0.0) throw std::domain_error("rescaled_trace: s = 0");
    return {e.u0,       e.v0,      e.ul,       e.vl,
            -e.du0 / s, e.dv0 / s, e.dul / s, -e.dvl / s};
}

double omega(const TraceVector& a, const TraceVector& b) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += a[i] * b[4 + i] - a[4 + i] * b[i];
    return acc;
}

Eigen::Matrix<double, 8, 8> symplectic_J() {
    Eigen::Matrix<double, 8, 8> J = Eigen::Matrix<double, 8, 8>::Zero();
    J.block<4, 4>(0, 4) = -Eigen::Matrix4d::Identity();
    J.block<4, 4>(4, 0) = Eigen::Matrix4d::Identity();
    return J;
}

Eigen::Matrix4d lagrangian_gram(const BoundaryFrame& f) {
    const auto cols = f.lagrangian_frame();
    Eigen::Matrix4d G;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G(i, j) = omega(cols[i], cols[j]);
    return G;
}

double greens_residual(const SampledPair& a, const SampledPair& b,
                       const PotentialPair& p, double lambda, double s) {
    const int n = a.grid_n();
    if (b.grid_n() != n || a.ell != b.ell)
        throw std::invalid_argument("greens_residual: mismatched grids");
    const double h = a.h();
    const double s2 = s * s;

    // Ms f = S (N_s - s^2 lambda) f, componentwise on the grid
    auto apply = [&](const SampledPair& f, std::vector<double>& out1,
                     std::vector<double>& out2) {
        out1.resize(n + 1);
        out2.resize(n + 1);
        for (int i = 0; i <= n; ++i) {
            const double x = f.ell * i / n;
            const double d2u = fd_derivative(f.u, h, i, 2, 8);
            const double d2v = fd_derivative(f.v, h, i, 2, 8);
            const double Nu = d2v + s2 * p.h(s * x) * f.v[i] - s2 * lambda * f.u[i];
            const double Nv = -d2u - s2 * p.g(s * x) * f.u[i] - s2 * lambda * f.v[i];
            out1[i] = Nv; // S swaps the components
            out2[i] = Nu;
        }
    };

    std::vector<double> Au, Av, Bu, Bv;
    apply(a, Au, Av);
    apply(b, Bu, Bv);
    const double lhs = simpson_product(Au, b.u, h) + simpson_product(Av, b.v, h) -
                       simpson_product(a.u, Bu, h) - simpson_product(a.v, Bv, h);

    auto trace_of = [&](const SampledPair& f) {
        EndpointData e;
        e.u0 = f.u.front();
        e.v0 = f.v.front();
        e.ul = f.u.back();
        e.vl = f.v.back();
        e.du0 = fd_derivative(f.u, h, 0, 1, 8);
        e.dv0 = fd_derivative(f.v, h, 0, 1, 8);
        e.dul = fd_derivative(f.u, h, n, 1, 8);
        e.dvl = fd_derivative(f.v, h, n, 1, 8);
        return rescaled_trace(e, s);
    };
    const double rhs = s * omega(trace_of(a), trace_of(b));
    return std::fabs(lhs - rhs);
}

} // namespace mstab

#include "mstab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <omp.h>

#include "mstab/errors.hpp"
#include "mstab/ode.hpp"
#include "mstab/quadrature.hpp"

namespace mstab {

namespace {

struct FlowRhs4 {
    const PotentialPair& p;
    double lambda, s;
    void operator()(const OdeState<4>& y, OdeState<4>& dy, double x) const {
        const double gs = s * p.g(s * x);
        const double hs = s * p.h(s * x);
        const double sl = s * lambda;
        dy[0] = s * y[2];
        dy[1] = -s * y[3];
        dy[2] = -gs * y[0] - sl * y[1];
        dy[3] = -sl * y[0] + hs * y[1];
    }
};

struct ScalarRhs {
    const std::function<double(double)>& q;
    void operator()(const OdeState<2>& y, OdeState<2>& dy, double x) const {
        dy[0] = y[1];
        dy[1] = -q(x) * y[0];
    }
};

double scalar_shot(const std::function<double(double)>& q, double ell, double y1) {
    OdeState<2> w{0.0, 1.0};
    integrate_to(ScalarRhs{q}, w, 0.0, y1, 1e-12);
    (void)ell;
    return w[0];
}

double golden_min_absdet(const PotentialPair& p, double s, double a, double b,
                         int iters = 70) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::fabs(char_det(p, x1, s)), f2 = std::fabs(char_det(p, x2, s));
    for (int i = 0; i < iters && (b - a) > 1e-15 * (1.0 + std::fabs(a)); ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = std::fabs(char_det(p, x1, s));
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = std::fabs(char_det(p, x2, s));
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double char_det(const PotentialPair& p, double lambda, double s) {
    const BoundaryFrame f = fundamental_matrix(p, lambda, s);
    return f.X(0, 0) * f.X(1, 1) - f.X(0, 1) * f.X(1, 0);
}

std::vector<double> detx_grid_serial(const PotentialPair& p, double l0, double l1,
                                     int nl, double s0, double s1, int ns) {
    std::vector<double> out(static_cast<std::size_t>(nl) * ns);
    for (int j = 0; j < ns; ++j) {
        const double s = (ns == 1) ? s0 : s0 + (s1 - s0) * j / (ns - 1);
        for (int i = 0; i < nl; ++i) {
            const double l = (nl == 1) ? l0 : l0 + (l1 - l0) * i / (nl - 1);
            out[static_cast<std::size_t>(j) * nl + i] = char_det(p, l, s);
        }
    }
    return out;
}

std::vector<double> detx_grid(const PotentialPair& p, double l0, double l1,
                              int nl, double s0, double s1, int ns) {
    std::vector<double> out(static_cast<std::size_t>(nl) * ns);
    bool failed = false;
    std::string msg;
    // dynamic chunks: integration cost grows with s, static splits unevenly
#pragma omp parallel for collapse(2) schedule(dynamic, 8)
    for (int j = 0; j < ns; ++j) {
        for (int i = 0; i < nl; ++i) {
            try {
                const double s = (ns == 1) ? s0 : s0 + (s1 - s0) * j / (ns - 1);
                const double l = (nl == 1) ? l0 : l0 + (l1 - l0) * i / (nl - 1);
                out[static_cast<std::size_t>(j) * nl + i] = char_det(p, l, s);
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    msg = e.what();
                }
            }
        }
    }
    if (failed) throw NumericalError("detx_grid: " + msg);
    return out;
}

Crossing make_crossing(const PotentialPair& p, double lambda0, double s0,
                       int grid_n, double svd_tol) {
    const BoundaryFrame f = fundamental_matrix(p, lambda0, s0);
    const double flow_scale = f.full().cwiseAbs().maxCoeff();

    Crossing c;
    c.lambda0 = lambda0;
    c.s0 = s0;
    c.ell = p.ell;
    c.grid_n = grid_n;

    std::vector<Eigen::Vector2d> null_vecs;
    bool plus_side = false, minus_side = false;
    if (lambda0 == 0.0) {
        // the system decouples: X(ell) is diagonal, each vanishing entry is
        // one scalar Dirichlet kernel
        if (std::fabs(f.X(0, 0)) < svd_tol * flow_scale) {
            null_vecs.emplace_back(1.0, 0.0);
            plus_side = true;
        }
        if (std::fabs(f.X(1, 1)) < svd_tol * flow_scale) {
            null_vecs.emplace_back(0.0, 1.0);
            minus_side = true;
        }
    } else {
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(f.X, Eigen::ComputeFullV);
        for (int k = 0; k < 2; ++k)
            if (svd.singularValues()(k) < svd_tol * flow_scale)
                null_vecs.push_back(svd.matrixV().col(k));
    }

    c.kernel_dim = static_cast<int>(null_vecs.size());
    if (lambda0 == 0.0) {
        if (c.kernel_dim == 2) c.which_kernel = KernelSide::both;
        else if (plus_side) c.which_kernel = KernelSide::Lplus;
        else if (minus_side) c.which_kernel = KernelSide::Lminus;
    } else {
        c.which_kernel = KernelSide::coupled;
    }

    for (const auto& nv : null_vecs) {
        KernelFunction kf;
        kf.u.reserve(grid_n + 1);
        kf.v.reserve(grid_n + 1);
        OdeState<4> y{0.0, 0.0, nv(0), nv(1)};
        integrate_sampled(FlowRhs4{p, lambda0, s0}, y, 0.0, p.ell, grid_n,
                          [&](const OdeState<4>& yi, double) {
                              kf.u.push_back(yi[0]);
                              kf.v.push_back(yi[1]);
                          });
        kf.du0 = s0 * nv(0);
        kf.dv0 = -s0 * nv(1);
        kf.dul = s0 * y[2];
        kf.dvl = -s0 * y[3];

        const double h = p.ell / grid_n;
        const double nrm = std::sqrt(simpson_product(kf.u, kf.u, h) +
                                     simpson_product(kf.v, kf.v, h));
        kf.norm_constant = nrm;
        for (auto& x : kf.u) x /= nrm;
        for (auto& x : kf.v) x /= nrm;
        kf.du0 /= nrm; kf.dv0 /= nrm; kf.dul /= nrm; kf.dvl /= nrm;
        c.kernel.push_back(std::move(kf));
    }
    return c;
}

std::vector<Crossing> real_eigenvalues(const PotentialPair& p, double s,
                                       double lmin, double lmax,
                                       const ScanOptions& opt) {
    const int n = opt.steps;
    std::vector<double> lam(n + 1), det(n + 1);
    for (int i = 0; i <= n; ++i) lam[i] = lmin + (lmax - lmin) * i / n;
    {
        bool failed = false;
        std::string msg;
#pragma omp parallel for schedule(dynamic, 32)
        for (int i = 0; i <= n; ++i) {
            try {
                det[i] = char_det(p, lam[i], s);
            } catch (const std::exception& e) {
#pragma omp critical
                {
                    failed = true;
                    msg = e.what();
                }
            }
        }
        if (failed) throw NumericalError("real_eigenvalues: " + msg, 0.0, s);
    }
    double scale = 0.0;
    for (double d : det) scale = std::max(scale, std::fabs(d));
    if (scale == 0.0) scale = 1.0;

    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        if (det[i] == 0.0) {
            roots.push_back(lam[i]);
            continue;
        }
        if (std::signbit(det[i]) != std::signbit(det[i + 1])) {
            double a = lam[i], b = lam[i + 1], fa = det[i];
            for (int it = 0;
                 it < 80 && (b - a) > 0.01 * opt.root_tol * (1 + std::fabs(a));
                 ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = char_det(p, mid, s);
                if (fm == 0.0) { a = b = mid; break; }
                if (std::signbit(fm) == std::signbit(fa)) a = mid, fa = fm;
                else b = mid;
            }
            roots.push_back(0.5 * (a + b));
        }
    }
    // even-multiplicity zeros: interior dips of |det| with no sign change
    for (int i = 1; i < n; ++i) {
        if (std::fabs(det[i]) < std::fabs(det[i - 1]) &&
            std::fabs(det[i]) < std::fabs(det[i + 1]) &&
            std::fabs(det[i]) < opt.tangent_dip * scale &&
            std::signbit(det[i - 1]) == std::signbit(det[i + 1]) &&
            std::signbit(det[i - 1]) == std::signbit(det[i])) {
            double lstar = golden_min_absdet(p, s, lam[i - 1], lam[i + 1]);
            // a quartic-order minimum is only locatable to ~eps^(1/4); when 0
            // lies in the bracket and is itself a zero, prefer it exactly
            if (lam[i - 1] <= 0.0 && 0.0 <= lam[i + 1] &&
                std::fabs(lstar) < 1e-3 * std::max(1.0, lmax - lmin) &&
                std::fabs(char_det(p, 0.0, s)) < 1e-8 * scale)
                lstar = 0.0;
            if (std::fabs(char_det(p, lstar, s)) < 1e-8 * scale) roots.push_back(lstar);
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double a, double b) {
                                return std::fabs(a - b) <
                                       1e-9 * (lmax - lmin) + 1e-12;
                            }),
                roots.end());
    // merge artifact pairs around a higher-order zero: at a quartic-order
    // zero the roundoff floor of det splits one root into two nearby ones
    for (std::size_t i = 0; i + 1 < roots.size();) {
        const double a = roots[i], b = roots[i + 1];
        const double mid = 0.5 * (a + b);
        if (b - a < 1e-4 * (lmax - lmin) &&
            std::fabs(char_det(p, mid, s)) < 1e-8 * scale) {
            roots[i] = mid;
            roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        } else {
            ++i;
        }
    }

    std::vector<Crossing> out;
    for (double r : roots) {
        // snap near-zero roots so the decoupled kernel path is taken
        if (std::fabs(r) < 1e-9 * std::max(1.0, lmax - lmin)) r = 0.0;
        Crossing c = make_crossing(p, r, s, opt.kernel_grid);
        if (c.kernel_dim > 0) out.push_back(std::move(c));
    }
    return out;
}

double dirichlet_shot(const std::function<double(double)>& q, double ell) {
    const int n = 512;
    double wmax = 0.0, wend = 0.0;
    OdeState<2> y{0.0, 1.0};
    integrate_sampled(ScalarRhs{q}, y, 0.0, ell, n,
                      [&](const OdeState<2>& yi, double) {
                          wmax = std::max(wmax, std::fabs(yi[0]));
                      });
    wend = y[0];
    return wend / std::max(wmax, 1e-300);
}

std::vector<double> conjugate_points(const std::function<double(double)>& q,
                                     double ell, double window_lo,
                                     double window_hi) {
    // 0 in Spec(L^{s0}) iff the unscaled Dirichlet shooting solution
    // w'' + q w = 0, w(0) = 0 vanishes at y = s0 ell
    const int n = 8192;
    std::vector<double> w(n + 1);
    {
        OdeState<2> y{0.0, 1.0};
        int i = 0;
        integrate_sampled(ScalarRhs{q}, y, 0.0, ell, n,
                          [&](const OdeState<2>& yi, double) { w[i++] = yi[0]; });
    }
    std::vector<double> zeros;
    for (int i = 1; i < n + 1; ++i) {
        if (w[i] == 0.0) {
            zeros.push_back(ell * i / n);
            continue;
        }
        if (w[i - 1] != 0.0 && std::signbit(w[i - 1]) != std::signbit(w[i])) {
            double a = ell * (i - 1) / n, b = ell * i / n;
            double fa = w[i - 1];
            for (int it = 0; it < 80 && (b - a) > 1e-15 * ell; ++it) {
                const double mid = 0.5 * (a + b);
                const double fm = scalar_shot(q, ell, mid);
                if (fm == 0.0) { a = b = mid; break; }
                if (std::signbit(fm) == std::signbit(fa)) a = mid, fa = fm;
                else b = mid;
            }
            zeros.push_back(0.5 * (a + b));
        }
    }
    std::vector<double> out;
    for (double y0 : zeros) {
        const double s0 = y0 / ell;
        if (s0 > window_lo && s0 <= window_hi + 1e-14) out.push_back(s0);
    }
    return out;
}

int morse_index(const std::function<double(double)>& q, double ell,
                bool* boundary_degeneracy) {
    const auto pts = conjugate_points(q, ell, 0.0, 1.0);
    int count = 0;
    bool boundary = false;
    for (double s0 : pts) {
        if (s0 < 1.0 - 1e-8) ++count;
        else boundary = true;
    }
    if (!boundary && std::fabs(dirichlet_shot(q, ell)) < 1e-8) boundary = true;
    if (boundary_degeneracy) *boundary_degeneracy = boundary;
    return count;
}

// ---------------------------------------------------------------------------
// zero-set tracing

namespace {

struct EdgeKey {
    int type; // 0: horizontal (along lambda), 1: vertical (along s)
    int i, j;
    auto operator<=>(const EdgeKey&) const = default;
};

} // namespace

std::vector<EigenvalueCurve> trace_curves(const PotentialPair& p, double lmin,
                                          double lmax, double smin, double smax,
                                          const TraceOptions& opt) {
    const int nl = opt.nl, ns = opt.ns;
    const std::vector<double> d = detx_grid(p, lmin, lmax, nl, smin, smax, ns);
    auto D = [&](int i, int j) { return d[static_cast<std::size_t>(j) * nl + i]; };
    auto L = [&](int i) { return lmin + (lmax - lmin) * i / (nl - 1); };
    auto S = [&](int j) { return smin + (smax - smin) * j / (ns - 1); };
    double scale = 0.0;
    for (double v : d) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return {};

    auto sgn_change = [](double a, double b) {
        return a == 0.0 || std::signbit(a) != std::signbit(b);
    };

    // refine a root along one grid edge by bisection of char_det
    auto refine = [&](double la, double sa, double lb, double sb, double fa) {
        double a = 0.0, b = 1.0;
        for (int it = 0; it < 45; ++it) {
            const double t = 0.5 * (a + b);
            const double fm =
                char_det(p, la + t * (lb - la), sa + t * (sb - sa));
            if (fm == 0.0) { a = b = t; break; }
            if (std::signbit(fm) == std::signbit(fa)) a = t;
            else b = t;
        }
        const double t = 0.5 * (a + b);
        return CurvePoint{la + t * (lb - la), sa + t * (sb - sa), false};
    };

    std::map<EdgeKey, int> edge_point;
    std::vector<CurvePoint> pts;
    auto edge_root = [&](const EdgeKey& k) -> std::optional<int> {
        auto it = edge_point.find(k);
        if (it != edge_point.end()) return it->second;
        double a0, b0, a1, b1, f0;
        if (k.type == 0) {
            if (k.i + 1 >= nl) return std::nullopt;
            f0 = D(k.i, k.j);
            if (!sgn_change(f0, D(k.i + 1, k.j))) return std::nullopt;
            a0 = L(k.i); b0 = S(k.j); a1 = L(k.i + 1); b1 = S(k.j);
        } else {
            if (k.j + 1 >= ns) return std::nullopt;
            f0 = D(k.i, k.j);
            if (!sgn_change(f0, D(k.i, k.j + 1))) return std::nullopt;
            a0 = L(k.i); b0 = S(k.j); a1 = L(k.i); b1 = S(k.j + 1);
        }
        pts.push_back(refine(a0, b0, a1, b1, f0));
        edge_point[k] = static_cast<int>(pts.size()) - 1;
        return static_cast<int>(pts.size()) - 1;
    };

    // per-cell segments between edge intersection points
    std::vector<std::pair<int, int>> segments;
    for (int j = 0; j + 1 < ns; ++j) {
        for (int i = 0; i + 1 < nl; ++i) {
            std::vector<int> on_cell;
            for (const EdgeKey& k : {EdgeKey{0, i, j}, EdgeKey{0, i, j + 1},
                                     EdgeKey{1, i, j}, EdgeKey{1, i + 1, j}}) {
                if (auto idx = edge_root(k)) on_cell.push_back(*idx);
            }
            if (on_cell.size() == 2) {
                segments.emplace_back(on_cell[0], on_cell[1]);
            } else if (on_cell.size() == 4) {
                // saddle cell: orient by the centre sample
                const double c = char_det(p, 0.5 * (L(i) + L(i + 1)),
                                          0.5 * (S(j) + S(j + 1)));
                // edge order above: bottom, top, left, right
                if (sgn_change(D(i, j), c)) {
                    segments.emplace_back(on_cell[0], on_cell[3]); // bottom-right
                    segments.emplace_back(on_cell[1], on_cell[2]); // top-left
                } else {
                    segments.emplace_back(on_cell[0], on_cell[2]); // bottom-left
                    segments.emplace_back(on_cell[1], on_cell[3]); // top-right
                }
            }
        }
    }

    // chain segments into polylines
    std::vector<std::vector<int>> adj(pts.size());
    for (int si = 0; si < static_cast<int>(segments.size()); ++si) {
        adj[segments[si].first].push_back(si);
        adj[segments[si].second].push_back(si);
    }
    std::vector<bool> seg_used(segments.size(), false);
    std::vector<EigenvalueCurve> curves;
    auto walk = [&](int start_pt) {
        EigenvalueCurve curve;
        curve.branch_id = static_cast<int>(curves.size());
        int cur = start_pt;
        curve.points.push_back(pts[cur]);
        bool moved = true;
        while (moved) {
            moved = false;
            for (int si : adj[cur]) {
                if (seg_used[si]) continue;
                seg_used[si] = true;
                cur = (segments[si].first == cur) ? segments[si].second
                                                  : segments[si].first;
                curve.points.push_back(pts[cur]);
                moved = true;
                break;
            }
        }
        if (curve.points.size() > 1) curves.push_back(std::move(curve));
    };
    for (std::size_t pi = 0; pi < pts.size(); ++pi)
        if (adj[pi].size() == 1) {
            bool fresh = std::none_of(adj[pi].begin(), adj[pi].end(),
                                      [&](int si) { return seg_used[si]; });
            if (fresh) walk(static_cast<int>(pi));
        }
    for (std::size_t pi = 0; pi < pts.size(); ++pi) // leftover loops
        for (int si : adj[pi])
            if (!seg_used[si]) walk(static_cast<int>(pi));

    // tangency markers: |d det/d lambda| below tolerance (relative to the
    // grid det scale per unit lambda)
    const double dl = (lmax - lmin) / (nl - 1);
    const double deriv_scale = scale / (lmax - lmin);
    for (auto& curve : curves)
        for (auto& pt : curve.points) {
            const double lp = std::min(pt.lambda + dl, lmax);
            const double lm = std::max(pt.lambda - dl, lmin);
            const double dd =
                (char_det(p, lp, pt.s) - char_det(p, lm, pt.s)) / (lp - lm);
            pt.tangency = std::fabs(dd) < opt.tangency_tol * deriv_scale;
        }
    return curves;
}

// ---------------------------------------------------------------------------
// finite-difference oracle

namespace {

Eigen::MatrixXd scalar_fd_matrix(const std::function<double(double)>& q,
                                 double ell, double s, int n) {
    const int m = n - 1;
    const double h = ell / n;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        const double x = (i + 1) * h;
        A(i, i) = 2.0 / (h * h) - s * s * q(s * x);
        if (i > 0) A(i, i - 1) = -1.0 / (h * h);
        if (i + 1 < m) A(i, i + 1) = -1.0 / (h * h);
    }
    return A;
}

// Sylvester/Sturm count of eigenvalues of a symmetric tridiagonal matrix
// below `shift`, via the LDL^T pivot recurrence.
int tridiag_count_below(const Eigen::MatrixXd& A, double shift) {
    const int m = static_cast<int>(A.rows());
    int count = 0;
    double d_prev = 1.0;
    for (int i = 0; i < m; ++i) {
        const double off2 = (i == 0) ? 0.0 : A(i, i - 1) * A(i, i - 1);
        const double d = A(i, i) - shift - (i == 0 ? 0.0 : off2 / d_prev);
        if (d < 0.0) ++count;
        d_prev = d;
    }
    return count;
}

// A zero Dirichlet eigenvalue of the continuum operator appears on the grid
// shifted by at most ~(mu_k'')^2 h^2/12 with (k pi/ell)^2 bounded by the
// potential scale; count the eigenvalues inside the matching window.
int tridiag_kernel_count(const Eigen::MatrixXd& A, double sup_q, double h) {
    const double delta = (sup_q + 1.0) * (sup_q + 1.0) * h * h / 6.0 + 1e-12;
    return tridiag_count_below(A, delta) - tridiag_count_below(A, -delta);
}

struct RawEig {
    std::complex<double> lambda;
    double krein;
    bool krein_indeterminate;
};

std::vector<RawEig> fd_eigs_one_grid(const PotentialPair& p, double s, int n) {
    const Eigen::MatrixXd Ap = scalar_fd_matrix(p.g, p.ell, s, n);
    const Eigen::MatrixXd Am = scalar_fd_matrix(p.h, p.ell, s, n);
    const Eigen::MatrixXd C = -Ap * Am; // block problem reduced to the v component
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success)
        throw NumericalError("fd_spectrum: eigensolver failed", 0.0, s);

    // kernel modes of the scalar factors become the zero eigenvalues of the
    // block matrix; identify them by Sturm counts so that both grid sizes
    // report exactly the same zeros
    const double h = p.ell / n;
    double supg = 0.0, suph = 0.0;
    for (int i = 0; i <= n; ++i) {
        supg = std::max(supg, s * s * std::fabs(p.g(s * p.ell * i / n)));
        suph = std::max(suph, s * s * std::fabs(p.h(s * p.ell * i / n)));
    }
    const int n_zero_modes =
        tridiag_kernel_count(Ap, supg, h) + tridiag_kernel_count(Am, suph, h);
    std::vector<int> order(C.rows());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
    });

    const double s2 = s * s;
    std::vector<RawEig> out;
    out.reserve(2 * C.rows());
    for (int rank = 0; rank < C.rows(); ++rank) {
        const int k = order[rank];
        if (rank < n_zero_modes) {
            out.push_back({{0.0, 0.0}, 0.0, true});
            out.push_back({{0.0, 0.0}, 0.0, true});
            continue;
        }
        const std::complex<double> mu = es.eigenvalues()(k);
        const Eigen::VectorXcd zv = es.eigenvectors().col(k);
        const std::complex<double> Lam = std::sqrt(mu);
        const Eigen::VectorXcd zu = -(Am * zv) / Lam;
        const double quad = (zu.dot(Ap * zu) + zv.dot(Am * zv)).real();
        const double nrm2 = zu.squaredNorm() + zv.squaredNorm();
        const double kv = quad / (nrm2 * s2);
        const bool indet = std::fabs(kv) < 1e-6;
        out.push_back({Lam / s2, kv, indet});
        out.push_back({-Lam / s2, kv, indet});
    }
    return out;
}

} // namespace

std::vector<OracleEig> fd_spectrum(const PotentialPair& p, double s, int n) {
    if (n < 64) throw std::invalid_argument("fd_spectrum: n >= 64 required");
    const auto coarse = fd_eigs_one_grid(p, s, n);
    const auto fine = fd_eigs_one_grid(p, s, 2 * n);

    std::vector<bool> coarse_used(coarse.size(), false);
    std::vector<OracleEig> out;
    out.reserve(fine.size());

    // pair low-lying fine eigenvalues with their coarse partners
    std::vector<int> order(fine.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(fine[a].lambda) < std::abs(fine[b].lambda);
    });
    for (int fi : order) {
        const std::complex<double> lf = fine[fi].lambda;
        int best = -1;
        double bestd = 0.25 * (1.0 + std::abs(lf));
        for (std::size_t ci = 0; ci < coarse.size(); ++ci) {
            if (coarse_used[ci]) continue;
            const double dist = std::abs(coarse[ci].lambda - lf);
            if (dist < bestd) {
                bestd = dist;
                best = static_cast<int>(ci);
            }
        }
        OracleEig e;
        e.krein_value = fine[fi].krein;
        e.krein_indeterminate = fine[fi].krein_indeterminate;
        if (best >= 0) {
            coarse_used[best] = true;
            const std::complex<double> lr =
                (4.0 * lf - coarse[best].lambda) / 3.0;
            e.lambda = lr;
            e.err_estimate = std::abs(lr - lf);
            e.extrapolated = true;
        } else {
            e.lambda = lf;
            e.err_estimate = std::numeric_limits<double>::infinity();
            e.extrapolated = false;
        }
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const OracleEig& a, const OracleEig& b) {
        if (a.lambda.real() != b.lambda.real())
            return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return out;
}

int fd_negative_count(const std::function<double(double)>& q, double ell, int n) {
    const Eigen::MatrixXd A = scalar_fd_matrix(q, ell, 1.0, n);
    double supq = 0.0;
    for (int i = 0; i <= n; ++i)
        supq = std::max(supq, std::fabs(q(ell * i / n)));
    // strictly negative eigenvalues: a zero eigenvalue drifts on the grid by
    // O(h^2) and must not be miscounted
    const double h = ell / n;
    const double delta = (supq + 1.0) * (supq + 1.0) * h * h / 6.0 + 1e-12;
    return tridiag_count_below(A, -delta);
}

} // namespace mstab

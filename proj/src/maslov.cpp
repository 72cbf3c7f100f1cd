#include "mstab/maslov.hpp"

#include <algorithm>
#include <cmath>

#include "mstab/errors.hpp"
#include "mstab/ode.hpp"
#include "mstab/quadrature.hpp"

namespace mstab {

namespace {

constexpr double kFormZeroTol = 1e-8;
constexpr double kDegenerateSddot = 1e-7;

FormReport classify(Eigen::MatrixXd M) {
    FormReport r;
    r.mat = M;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    for (int i = 0; i < M.rows(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > kFormZeroTol * scale) ++r.n_plus;
        else if (ev < -kFormZeroTol * scale) ++r.n_minus;
        else ++r.n_zero;
    }
    return r;
}

double inner(const std::vector<double>& a, const std::vector<double>& b, double h) {
    return simpson_product(a, b, h);
}

// kernel element side at a conjugate point: true if it lives in the L+ slot
bool is_plus_element(const Crossing& c, int k) {
    if (c.which_kernel == KernelSide::Lplus) return true;
    if (c.which_kernel == KernelSide::Lminus) return false;
    return k == 0; // dim 2 ordering: [0] = (u1, 0), [1] = (0, v2)
}

std::function<double(double)> deriv_or_fd(const std::function<double(double)>& f,
                                          const std::function<double(double)>& df,
                                          double ell) {
    if (df) return df;
    const double step = 1e-6 * ell;
    return [f, step](double x) { return (f(x + step) - f(x - step)) / (2 * step); };
}

} // namespace

FormReport crossing_form_s(const Crossing& c, const PotentialPair& p) {
    if (c.kernel_dim == 0) throw NotACrossing("crossing_form_s: kernel is empty");
    const int n = c.kernel_dim;
    Eigen::MatrixXd M(n, n);

    if (c.lambda0 == 0.0) {
        // boundary formula (ell/s0^2) [-(u'(ell))^2 + (v'(ell))^2], diagonal
        M.setZero();
        const double pref = c.ell / (c.s0 * c.s0);
        for (int k = 0; k < n; ++k) {
            const auto& kf = c.kernel[k];
            M(k, k) = is_plus_element(c, k) ? -pref * kf.dul * kf.dul
                                            : pref * kf.dvl * kf.dvl;
        }
        return classify(M);
    }

    // general-lambda quadrature form
    const auto dg = deriv_or_fd(p.g, p.dg, p.ell);
    const auto dh = deriv_or_fd(p.h, p.dh, p.ell);
    const int gn = c.grid_n;
    const double h = c.ell / gn;
    const double s0 = c.s0;
    std::vector<double> wg(gn + 1), wh(gn + 1);
    for (int i = 0; i <= gn; ++i) {
        const double x = c.ell * i / gn;
        wg[i] = 2.0 * s0 * p.g(s0 * x) + s0 * s0 * dg(s0 * x) * x;
        wh[i] = 2.0 * s0 * p.h(s0 * x) + s0 * s0 * dh(s0 * x) * x;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            std::vector<double> f(gn + 1);
            for (int k = 0; k <= gn; ++k)
                f[k] = wh[k] * c.kernel[i].v[k] * c.kernel[j].v[k] -
                       wg[k] * c.kernel[i].u[k] * c.kernel[j].u[k];
            double mij = simpson(f, h) / s0;
            mij -= 2.0 * c.lambda0 * (inner(c.kernel[i].u, c.kernel[j].v, h) +
                                      inner(c.kernel[i].v, c.kernel[j].u, h));
            M(i, j) = M(j, i) = mij;
        }
    }
    return classify(M);
}

FormReport crossing_form_lambda(const Crossing& c) {
    if (c.kernel_dim == 0) throw NotACrossing("crossing_form_lambda: kernel is empty");
    const int n = c.kernel_dim;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    if (c.lambda0 == 0.0 && n == 1) return classify(M); // exactly zero
    const double h = c.ell / c.grid_n;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const double mij =
                -c.s0 * (inner(c.kernel[i].u, c.kernel[j].v, h) +
                         inner(c.kernel[i].v, c.kernel[j].u, h));
            M(i, j) = M(j, i) = mij;
        }
    return classify(M);
}

std::vector<double> solve_inhomogeneous(const std::function<double(double)>& q,
                                        SignConvention conv,
                                        const std::vector<double>& rhs,
                                        double ell) {
    const int n = static_cast<int>(rhs.size()) - 1;
    const double h = ell / n;

    // identity-initialised fundamental pair of w'' + q w = 0
    std::vector<double> p0(n + 1), q0(n + 1);
    double q0_end_deriv = 0.0, p0_end_deriv = 0.0;
    {
        struct Rhs {
            const std::function<double(double)>& q;
            void operator()(const OdeState<4>& y, OdeState<4>& dy, double x) const {
                const double qq = q(x);
                dy[0] = y[1];
                dy[1] = -qq * y[0];
                dy[2] = y[3];
                dy[3] = -qq * y[2];
            }
        };
        OdeState<4> y{1.0, 0.0, 0.0, 1.0};
        int i = 0;
        integrate_sampled(Rhs{q}, y, 0.0, ell, n, [&](const OdeState<4>& yi, double) {
            p0[i] = yi[0];
            q0[i] = yi[2];
            ++i;
        });
        p0_end_deriv = y[1];
        q0_end_deriv = y[3];
    }
    // Abel: the Wronskian of the identity-initialised pair is 1; renormalise
    // the integration drift away
    const double wron = p0.back() * q0_end_deriv - p0_end_deriv * q0.back();

    // w'' + q w = F
    std::vector<double> F(rhs);
    if (conv == SignConvention::Lplus_eq)
        for (auto& v : F) v = -v;

    const auto pF = [&] {
        std::vector<double> t(n + 1);
        for (int i = 0; i <= n; ++i) t[i] = p0[i] * F[i];
        return cumulative_integral(t, h);
    }();
    const auto qF = [&] {
        std::vector<double> t(n + 1);
        for (int i = 0; i <= n; ++i) t[i] = q0[i] * F[i];
        return cumulative_integral(t, h);
    }();

    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = (q0[i] * pF[i] - p0[i] * qF[i]) / wron;

    double q0max = 0.0;
    for (double v : q0) q0max = std::max(q0max, std::fabs(v));
    const bool has_kernel = std::fabs(q0.back()) < 1e-6 * q0max;

    if (!has_kernel) {
        const double c2 = -w.back() / q0.back();
        for (int i = 0; i <= n; ++i) w[i] += c2 * q0[i];
        return w;
    }

    // Fredholm alternative: q0 spans the kernel
    const double kn2 = inner(q0, q0, h);
    const double proj = inner(rhs, q0, h);
    double rn2 = inner(rhs, rhs, h);
    if (std::fabs(proj) > 1e-8 * std::sqrt(std::max(rn2, 1e-300) * kn2))
        throw FredholmViolation(
            "solve_inhomogeneous: rhs not orthogonal to the kernel");
    const double wk = inner(w, q0, h) / kn2;
    for (int i = 0; i <= n; ++i) w[i] -= wk * q0[i];
    return w;
}

SecondOrderForm second_order_form(const Crossing& c, const PotentialPair& p) {
    const FormReport first = crossing_form_lambda(c);
    if (first.mat.cwiseAbs().maxCoeff() > kFormZeroTol)
        throw PreconditionError(
            "second_order_form: first-order lambda form is not zero");
    const double s0 = c.s0, s2 = s0 * s0;
    const double h = c.ell / c.grid_n;
    const auto qplus = [&p, s2, s0](double x) { return s2 * p.g(s0 * x); };
    const auto qminus = [&p, s2, s0](double x) { return s2 * p.h(s0 * x); };

    SecondOrderForm out;
    const int n = c.kernel_dim;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const auto& kf = c.kernel[k];
        std::vector<double> hat;
        double vk;
        if (is_plus_element(c, k)) {
            // kernel (u, 0): generalized component solves -L-^{s0} vhat = u
            hat = solve_inhomogeneous(qminus, SignConvention::minus_Lminus_eq,
                                      kf.u, c.ell);
            vk = inner(hat, kf.u, h);
        } else {
            // kernel (0, v): L+^{s0} uhat = v
            hat = solve_inhomogeneous(qplus, SignConvention::Lplus_eq, kf.v, c.ell);
            vk = inner(hat, kf.v, h);
        }
        M(k, k) = -2.0 * s0 * s0 * s0 * vk;
        out.generalized.push_back(std::move(hat));
        out.vk_integrals.push_back(vk);
    }
    out.form = classify(M);
    for (int k = 0; k < n; ++k)
        if (std::fabs(M(k, k)) < kFormZeroTol) out.degenerate = true;
    return out;
}

CrossingFormReport crossing_forms(const Crossing& c, const PotentialPair& p) {
    CrossingFormReport rep;
    rep.at = c;
    rep.m_s = crossing_form_s(c, p);
    rep.m_lambda = crossing_form_lambda(c);
    if (rep.m_lambda.mat.cwiseAbs().maxCoeff() <= kFormZeroTol)
        rep.m_lambda2 = second_order_form(c, p);
    return rep;
}

namespace {

// numerically trace the departure side of s = s0 for small lambda > 0:
// +1 if no root of det X in s below s0 nearby (the curve left upward),
// -1 if a root below s0 exists.
int probe_s_sharp(const Crossing& c, const PotentialPair& p, bool* ok) {
    const double s0 = c.s0;
    const double ds = 0.04 * s0;
    *ok = true;
    for (double dl : {1e-3, 1e-2, 5e-2}) {
        const double lam = dl * std::max(1.0, std::fabs(c.lambda0) + 1.0);
        const int m = 60;
        double prev = char_det(p, lam, s0 - ds);
        for (int i = 1; i <= m; ++i) {
            const double s = s0 - ds + ds * i / m;
            const double cur = char_det(p, lam, s);
            if (prev == 0.0 || std::signbit(prev) != std::signbit(cur)) return -1;
            prev = cur;
        }
    }
    return +1;
}

} // namespace

ConcavityReport concavity(const Crossing& c, const PotentialPair& p) {
    if (c.lambda0 != 0.0)
        throw PreconditionError("concavity: defined at conjugate points only");
    if (c.kernel_dim < 1 || c.kernel_dim > 2)
        throw PreconditionError("concavity: kernel dimension must be 1 or 2");

    ConcavityReport rep;
    const double s0 = c.s0;
    const double h = c.ell / c.grid_n;
    const double pref = 2.0 * std::pow(s0, 5) / c.ell;

    if (c.kernel_dim == 2) {
        rep.pairing = inner(c.kernel[0].u, c.kernel[1].v, h);
        if (std::fabs(rep.pairing) > kFormZeroTol) {
            rep.isolated = true; // isolated point of the zero set
            return rep;
        }
    }

    const SecondOrderForm so = second_order_form(c, p);

    if (c.kernel_dim == 1) {
        const auto& kf = c.kernel[0];
        double sddot;
        if (is_plus_element(c, 0))
            sddot = -pref * so.vk_integrals[0] / (kf.dul * kf.dul);
        else
            sddot = pref * so.vk_integrals[0] / (kf.dvl * kf.dvl);
        rep.sddot.push_back(sddot);
        rep.vk_integrals = so.vk_integrals;
    } else {
        const double w1 = so.vk_integrals[0] / (c.kernel[0].dul * c.kernel[0].dul);
        const double w2 = so.vk_integrals[1] / (c.kernel[1].dvl * c.kernel[1].dvl);
        if (std::fabs(w1 + w2) < kFormZeroTol)
            throw NongenericTangency(
                "concavity: curves are tangent beyond quadratic order");
        rep.sddot.push_back(-pref * w1);
        rep.sddot.push_back(pref * w2);
        rep.vk_integrals = so.vk_integrals;
    }

    for (double sd : rep.sddot) {
        if (std::fabs(sd) >= kDegenerateSddot) {
            rep.s_sharp.push_back(sd > 0 ? +1 : -1);
        } else {
            rep.degenerate = true;
            bool ok = false;
            const int sharp = probe_s_sharp(c, p, &ok);
            rep.s_sharp.push_back(sharp);
            rep.sharp_resolved = rep.sharp_resolved && ok;
        }
    }
    return rep;
}

CornerTerm correction_term(const std::optional<Crossing>& at_s1,
                           const std::optional<ConcavityReport>& conc) {
    CornerTerm out;
    if (!at_s1 || at_s1->kernel_dim == 0) {
        out.rule = "no-kernel";
        return out;
    }
    const Crossing& c = *at_s1;
    if (!conc) throw PreconditionError("correction_term: concavity missing");
    const ConcavityReport& r = *conc;

    if (c.kernel_dim == 2 && r.isolated) {
        out.c = 0;
        out.rule = "double-nonorthogonal";
        return out;
    }
    if (!r.sharp_resolved) {
        out.resolved = false;
        if (c.kernel_dim == 1) {
            out.c_min = (c.which_kernel == KernelSide::Lplus) ? -1 : 0;
            out.c_max = (c.which_kernel == KernelSide::Lplus) ? 0 : 1;
        } else {
            out.c_min = -1;
            out.c_max = 1;
        }
        out.rule = "unresolved-departure-side";
        return out;
    }

    if (c.kernel_dim == 1) {
        if (c.which_kernel == KernelSide::Lplus) {
            out.c = (r.s_sharp[0] > 0) ? 0 : -1;
            out.rule = "simple-Lplus";
        } else {
            out.c = (r.s_sharp[0] > 0) ? 0 : 1;
            out.rule = "simple-Lminus";
        }
        return out;
    }
    // double, orthogonal: contributions of the two curves add
    const int s1 = r.s_sharp[0], s2 = r.s_sharp[1];
    if (s1 > 0 && s2 < 0) out.c = 1;
    else if (s1 < 0 && s2 > 0) out.c = -1;
    else out.c = 0;
    out.rule = "double-orthogonal";
    return out;
}

MaslovBoxReport maslov_box(const PotentialPair& p, int kernel_grid) {
    MaslovBoxReport rep;
    rep.P = morse_index(p.g, p.ell);
    rep.Q = morse_index(p.h, p.ell);
    rep.gamma2_index = rep.Q - rep.P;

    // signature dictionary along Gamma_2: conjugate points of L+ carry -1,
    // of L- carry +1, shared ones 0
    const auto cp_plus = conjugate_points(p.g, p.ell, 0.0, 1.0 - 1e-8);
    const auto cp_minus = conjugate_points(p.h, p.ell, 0.0, 1.0 - 1e-8);
    std::vector<double> all;
    all.insert(all.end(), cp_plus.begin(), cp_plus.end());
    all.insert(all.end(), cp_minus.begin(), cp_minus.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-9; }),
              all.end());
    for (double s0 : all) {
        const Crossing c = make_crossing(p, 0.0, s0, kernel_grid);
        if (c.kernel_dim == 0) continue;
        rep.gamma2_signatures.emplace_back(s0, crossing_form_s(c, p).signature());
    }

    // corner analysis at (0, 1)
    const bool kp = std::fabs(dirichlet_shot(p.g, p.ell)) < 1e-6;
    const bool km = std::fabs(dirichlet_shot(p.h, p.ell)) < 1e-6;
    CornerTerm corner;
    if (kp || km) {
        Crossing c1 = make_crossing(p, 0.0, 1.0, kernel_grid);
        if (c1.kernel_dim > 0) {
            ConcavityReport conc = concavity(c1, p);
            corner = correction_term(c1, conc);
            // b = c - dim ker(L-) must equal -n_-(second-order form)
            if (!conc.isolated && corner.resolved) {
                const SecondOrderForm so = second_order_form(c1, p);
                if (!so.degenerate) {
                    const int zminus = (c1.which_kernel == KernelSide::Lminus ||
                                        c1.which_kernel == KernelSide::both)
                                           ? 1
                                           : 0;
                    rep.second_order_consistent =
                        (corner.c - zminus == -so.form.n_minus);
                }
            }
            rep.corner_crossing = std::move(c1);
            rep.corner_concavity = std::move(conc);
        } else {
            corner = correction_term(std::nullopt, std::nullopt);
        }
    } else {
        corner = correction_term(std::nullopt, std::nullopt);
    }

    rep.corner_c = corner.c;
    rep.corner_resolved = corner.resolved;
    rep.corner_min = corner.resolved ? corner.c : corner.c_min;
    rep.corner_max = corner.resolved ? corner.c : corner.c_max;
    rep.gamma3_index = rep.P - rep.Q - rep.corner_c;
    rep.lower_bound = std::abs(rep.gamma3_index);
    return rep;
}

} // namespace mstab

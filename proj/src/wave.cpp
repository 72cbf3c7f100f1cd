#include "mstab/wave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mstab/elliptic.hpp"
#include "mstab/errors.hpp"
#include "mstab/interp.hpp"
#include "mstab/ode.hpp"
#include "mstab/quadrature.hpp"

namespace mstab {

double Nonlinearity::anti(double r) const {
    switch (kind) {
        case Kind::cubic_focusing: return 0.5 * r * r;
        case Kind::cubic_defocusing: return -0.5 * r * r;
        case Kind::power: return std::pow(r, p + 1.0) / (p + 1.0);
        case Kind::custom: break;
    }
    // adaptive-free composite Simpson; validation use only
    const int n = 256;
    std::vector<double> fv(n + 1);
    for (int i = 0; i <= n; ++i) fv[i] = custom_f(r * i / n);
    return simpson(fv, r / n);
}

void Nonlinearity::check_derivative(double rmax) const {
    if (kind != Kind::custom) return;
    const double step = std::max(rmax, 1.0) * 1e-6;
    for (int i = 1; i <= 32; ++i) {
        const double r = rmax * i / 32.0;
        const double fd = (custom_f(r + step) - custom_f(r - step)) / (2 * step);
        const double an = custom_df(r);
        const double scale = std::max({std::fabs(fd), std::fabs(an), 1e-8});
        if (std::fabs(fd - an) > 1e-6 * scale)
            throw std::invalid_argument(
                "custom nonlinearity: f' is not the derivative of f");
    }
}

double PotentialPair::sup_norm(int samples) const {
    double m = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double x = ell * i / samples;
        m = std::max({m, std::fabs(g(x)), std::fabs(h(x))});
    }
    return m;
}

PotentialPair constant_pair(double g_plus, double h_minus, double ell) {
    PotentialPair p;
    p.g = [g_plus](double) { return g_plus; };
    p.h = [h_minus](double) { return h_minus; };
    p.dg = [](double) { return 0.0; };
    p.dh = [](double) { return 0.0; };
    p.ell = ell;
    p.provenance = PotentialPair::Provenance::explicit_;
    p.extendable = true;
    return p;
}

PotentialPair family_T1() { return constant_pair(9 * M_PI * M_PI, 4 * M_PI * M_PI, 1.0); }
PotentialPair family_T2() { return constant_pair(2 * M_PI * M_PI, 4 * M_PI * M_PI, 1.0); }
PotentialPair family_T3() { return constant_pair(2 * M_PI * M_PI, 0.5 * M_PI * M_PI, 1.0); }
PotentialPair free_pair(double ell) { return constant_pair(0.0, 0.0, ell); }

namespace {

// stationary equation as a first-order system (phi, phi')
struct WaveRhs {
    const Nonlinearity& f;
    double beta;
    void operator()(const OdeState<2>& y, OdeState<2>& dy, double) const {
        dy[0] = y[1];
        dy[1] = -f.value(y[0] * y[0]) * y[0] - beta * y[0];
    }
};

StandingWave integrate_wave(const Nonlinearity& f, double beta, double ell,
                            BoundaryKind bc, double a0, double b0, int grid_n) {
    StandingWave w;
    w.beta = beta;
    w.ell = ell;
    w.bc = bc;
    w.nonlinearity = f;
    w.branch.a0 = a0;
    w.branch.b0 = b0;
    w.x.reserve(grid_n + 1);
    w.phi.reserve(grid_n + 1);
    w.dphi.reserve(grid_n + 1);
    OdeState<2> y{a0, b0};
    integrate_sampled(WaveRhs{f, beta}, y, 0.0, ell, grid_n,
                      [&](const OdeState<2>& yi, double xi) {
                          w.x.push_back(xi);
                          w.phi.push_back(yi[0]);
                          w.dphi.push_back(yi[1]);
                      });
    return w;
}

// value of the boundary functional targeted by the shooting
double end_mismatch(const Nonlinearity& f, double beta, double ell,
                    BoundaryKind bc, double param) {
    OdeState<2> y = (bc == BoundaryKind::dirichlet) ? OdeState<2>{0.0, param}
                                                    : OdeState<2>{param, 0.0};
    integrate_to(WaveRhs{f, beta}, y, 0.0, ell, 1e-12);
    return bc == BoundaryKind::dirichlet ? y[0] : y[1];
}

} // namespace

double StandingWave::max_abs() const {
    double m = 0.0;
    for (double v : phi) m = std::max(m, std::fabs(v));
    return m;
}

int StandingWave::interior_critical_points() const {
    double dmax = 0.0;
    for (double v : dphi) dmax = std::max(dmax, std::fabs(v));
    const double tiny = 1e-12 * dmax;
    // count sign changes of phi' across the interval, ignoring the (possibly
    // exact) zeros at samples; each strict change is one interior critical point
    int count = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (double v : dphi) {
        if (std::fabs(v) <= tiny) continue;
        if (have_prev && std::signbit(v) != std::signbit(prev)) ++count;
        prev = v;
        have_prev = true;
    }
    return count;
}

void StandingWave::validate() const {
    const double amp = max_abs();
    if (!(amp > 0)) return; // the zero wave satisfies everything trivially
    const int n = grid_n();
    const double dx = h();

    if (nonlinearity.kind == Nonlinearity::Kind::custom)
        nonlinearity.check_derivative(amp * amp);

    // stationary-equation residual, nondimensionalised by max|phi|
    double resid = 0.0;
    for (int i = 1; i < n; ++i) {
        const double d2 = fd_derivative(dphi, dx, i, 1, 7);
        const double r = phi[i] * phi[i];
        resid = std::max(resid,
                         std::fabs(d2 + nonlinearity.value(r) * phi[i] + beta * phi[i]));
    }
    if (resid > 1e-8 * amp)
        throw NumericalError("standing wave residual exceeds 1e-8 * max|phi|");

    // end conditions
    const double btol = 1e-10 * amp;
    if (bc == BoundaryKind::dirichlet) {
        if (std::fabs(phi.front()) > btol || std::fabs(phi.back()) > btol)
            throw NumericalError("Dirichlet end condition violated");
    } else {
        if (std::fabs(dphi.front()) > btol || std::fabs(dphi.back()) > btol)
            throw NumericalError("Neumann end condition violated");
    }

    // conserved phase-plane energy 1/2 phi'^2 + 1/2 beta phi^2 + 1/2 F(phi^2)
    double emin = std::numeric_limits<double>::infinity(), emax = -emin, scale = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double k = 0.5 * dphi[i] * dphi[i];
        const double v = 0.5 * beta * phi[i] * phi[i] +
                         0.5 * nonlinearity.anti(phi[i] * phi[i]);
        emin = std::min(emin, k + v);
        emax = std::max(emax, k + v);
        scale = std::max(scale, std::fabs(k) + std::fabs(v));
    }
    if (emax - emin > 1e-8 * std::max(scale, 1e-300))
        throw NumericalError("phase-plane energy drifts beyond 1e-8 relative");
}

StandingWave solve_standing_wave(const Nonlinearity& f, double beta, double ell,
                                 BoundaryKind bc, const WaveBranch& branch,
                                 int grid_n) {
    grid_n = std::max(grid_n, 512); // sample-count invariant of the type
    if (branch.lo == 0.0 && branch.hi == 0.0) { // explicit zero wave
        StandingWave w = integrate_wave(f, beta, ell, bc, 0.0, 0.0, grid_n);
        w.branch = branch;
        return w;
    }
    if (f.kind == Nonlinearity::Kind::custom) f.check_derivative(branch.hi * branch.hi);

    const int scan = 200;
    std::vector<double> params, values;
    params.reserve(scan + 1);
    for (int i = 0; i <= scan; ++i) {
        const double param = branch.lo + (branch.hi - branch.lo) * i / scan;
        params.push_back(param);
        double v;
        try {
            v = end_mismatch(f, beta, ell, bc, param);
        } catch (const NumericalError&) {
            v = std::numeric_limits<double>::quiet_NaN();
        }
        values.push_back(v);
    }

    struct Candidate {
        double param, amplitude;
        int critical;
    };
    std::vector<Candidate> found;
    const double param_floor = 1e-12 * (std::fabs(branch.lo) + std::fabs(branch.hi));
    for (int i = 0; i < scan; ++i) {
        if (std::isnan(values[i]) || std::isnan(values[i + 1])) continue;
        if (values[i] == 0.0 || std::signbit(values[i]) == std::signbit(values[i + 1]))
            continue;
        double a = params[i], b = params[i + 1], fa = values[i];
        for (int it = 0; it < 100 && (b - a) > 1e-16 * std::max(1.0, std::fabs(a)); ++it) {
            const double mid = 0.5 * (a + b);
            const double fm = end_mismatch(f, beta, ell, bc, mid);
            if (fm == 0.0) { a = b = mid; break; }
            if (std::signbit(fm) == std::signbit(fa)) a = mid, fa = fm;
            else b = mid;
        }
        const double root = 0.5 * (a + b);
        if (std::fabs(root) <= param_floor) continue; // trivial zero solution
        StandingWave w = (bc == BoundaryKind::dirichlet)
                             ? integrate_wave(f, beta, ell, bc, 0.0, root, 256)
                             : integrate_wave(f, beta, ell, bc, root, 0.0, 256);
        if (w.max_abs() <= 1e-10) continue;
        found.push_back({root, w.max_abs(), w.interior_critical_points()});
    }

    if (branch.critical_points >= 0)
        std::erase_if(found, [&](const Candidate& c) {
            return c.critical != branch.critical_points;
        });
    if (found.empty())
        throw NoWaveOnBranch("no standing wave on the requested branch");
    const auto best = std::min_element(found.begin(), found.end(),
                                       [](const Candidate& a, const Candidate& b) {
                                           return a.amplitude < b.amplitude;
                                       });
    StandingWave w =
        (bc == BoundaryKind::dirichlet)
            ? integrate_wave(f, beta, ell, bc, 0.0, best->param, grid_n)
            : integrate_wave(f, beta, ell, bc, best->param, 0.0, grid_n);
    w.branch = branch;
    w.branch.a0 = (bc == BoundaryKind::dirichlet) ? 0.0 : best->param;
    w.branch.b0 = (bc == BoundaryKind::dirichlet) ? best->param : 0.0;
    w.validate();
    return w;
}

double dnoidal_period(double beta, double m) {
    const double B = std::sqrt(-beta / (2.0 - m));
    return 2.0 * elliptic_K(m) / B;
}

double cnoidal_period(double beta, double m) {
    const double B = std::sqrt(-beta / (2.0 * m - 1.0));
    return 4.0 * elliptic_K(m) / B;
}

namespace {

void crosscheck_against_integrator(const StandingWave& w) {
    OdeState<2> y{w.phi.front(), w.dphi.front()};
    const int n = w.grid_n();
    double worst = 0.0;
    int i = 0;
    integrate_sampled(WaveRhs{w.nonlinearity, w.beta}, y, 0.0, w.ell, n,
                      [&](const OdeState<2>& yi, double) {
                          worst = std::max(worst, std::fabs(yi[0] - w.phi[i]));
                          ++i;
                      });
    if (worst > 1e-9 * std::max(1.0, w.max_abs()))
        throw NumericalError("elliptic closed form disagrees with the integrator");
}

} // namespace

StandingWave dnoidal_wave(double beta, double m, int k_half_periods, int grid_n) {
    grid_n = std::max(grid_n, 512);
    if (!(beta < 0) || !(m > 0) || !(m < 1) || k_half_periods < 1)
        throw std::invalid_argument("dnoidal_wave: need beta<0, m in (0,1), k>=1");
    const double B = std::sqrt(-beta / (2.0 - m));
    const double A = std::sqrt(2.0) * B;
    const double K = elliptic_K(m);
    StandingWave w;
    w.beta = beta;
    w.ell = k_half_periods * K / B;
    w.bc = BoundaryKind::neumann;
    w.nonlinearity = Nonlinearity::cubic_focusing();
    w.branch = WaveBranch{A, A, k_half_periods - 1, A, 0.0};
    for (int i = 0; i <= grid_n; ++i) {
        const double x = w.ell * i / grid_n;
        const auto [sn, cn, dn] = eval_jacobi(B * x, m);
        w.x.push_back(x);
        w.phi.push_back(A * dn);
        w.dphi.push_back(-A * B * m * sn * cn);
    }
    crosscheck_against_integrator(w);
    w.validate();
    return w;
}

StandingWave cnoidal_wave(double beta, double m, int k_half_periods, int grid_n) {
    grid_n = std::max(grid_n, 512);
    if (!(beta < 0) || !(m > 0.5) || !(m < 1) || k_half_periods < 1)
        throw std::invalid_argument("cnoidal_wave: need beta<0, m in (1/2,1), k>=1");
    const double B = std::sqrt(-beta / (2.0 * m - 1.0));
    const double A = std::sqrt(2.0 * m) * B;
    const double K = elliptic_K(m);
    StandingWave w;
    w.beta = beta;
    w.ell = k_half_periods * 2.0 * K / B;
    w.bc = BoundaryKind::dirichlet;
    w.nonlinearity = Nonlinearity::cubic_focusing();
    for (int i = 0; i <= grid_n; ++i) {
        const double x = w.ell * i / grid_n;
        const auto [sn, cn, dn] = eval_jacobi(B * x - K, m);
        w.x.push_back(x);
        w.phi.push_back(A * cn);
        w.dphi.push_back(-A * B * sn * dn);
    }
    w.branch = WaveBranch{w.dphi.front(), w.dphi.front(), k_half_periods, 0.0,
                          w.dphi.front()};
    crosscheck_against_integrator(w);
    w.validate();
    return w;
}

PotentialPair linearized_potentials(const StandingWave& w) {
    const int n = w.grid_n();
    std::vector<double> d2(n + 1);
    for (int i = 0; i <= n; ++i)
        d2[i] = -w.nonlinearity.value(w.phi[i] * w.phi[i]) * w.phi[i] -
                w.beta * w.phi[i];
    auto interp = std::make_shared<HermiteInterp>(w.phi, w.dphi, d2, w.ell);
    const Nonlinearity f = w.nonlinearity;
    const double beta = w.beta;

    PotentialPair p;
    p.ell = w.ell;
    p.provenance = PotentialPair::Provenance::from_wave;
    p.extendable = false;
    p.g = [interp, f, beta](double x) {
        const double r = interp->value(x) * interp->value(x);
        return 2.0 * f.deriv(r) * r + f.value(r) + beta;
    };
    p.h = [interp, f, beta](double x) {
        const double r = interp->value(x) * interp->value(x);
        return f.value(r) + beta;
    };
    // closed-form derivatives where f'' is known; custom falls back to
    // differentiating g, h numerically (see maslov crossing forms)
    if (f.kind != Nonlinearity::Kind::custom) {
        const double q = (f.kind == Nonlinearity::Kind::power) ? f.p : 1.0;
        const double sgn = (f.kind == Nonlinearity::Kind::cubic_defocusing) ? -1.0 : 1.0;
        p.dg = [interp, q, sgn](double x) {
            const double phi = interp->value(x), dphi = interp->deriv(x);
            return sgn * (2.0 * q + 1.0) * 2.0 * q * std::pow(phi * phi, q - 1.0) *
                   phi * dphi;
        };
        p.dh = [interp, q, sgn](double x) {
            const double phi = interp->value(x), dphi = interp->deriv(x);
            return sgn * 2.0 * q * std::pow(phi * phi, q - 1.0) * phi * dphi;
        };
    }
    return p;
}

} // namespace mstab

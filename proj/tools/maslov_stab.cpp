// Command-line driver: configuration-driven wave construction, eigenvalue
// curve sweeps, stability and Krein reports, and the built-in check suite.
//
//   maslov-stab <wave|curves|stability|krein|check> --config <path>
//               [--out <dir>] [--threads N]
//
// Exit codes: 0 ok, 2 config error, 3 numerical error, 4 unresolved corner.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "mstab/errors.hpp"
#include "mstab/json_io.hpp"
#include "mstab/maslov.hpp"
#include "mstab/spectra.hpp"
#include "mstab/stability.hpp"
#include "mstab/wave.hpp"

using nlohmann::json;
using namespace mstab;

namespace {

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

StandingWave build_wave(const json& jw) {
    const std::string kind = jw.at("nonlinearity").at("kind");
    const double beta = jw.at("beta");
    // closed-form elliptic constructors for the cubic catalogue
    if (jw.contains("modulus")) {
        const double m = jw.at("modulus");
        const int k = jw.at("half_periods");
        const int n = jw.value("grid", 1024);
        if (kind != "cubic_focusing")
            throw ConfigError("modulus-based construction needs cubic_focusing");
        const std::string bc = jw.at("bc");
        if (bc == "neumann") return dnoidal_wave(beta, m, k, n);
        if (bc == "dirichlet") return cnoidal_wave(beta, m, k, n);
        throw ConfigError("unknown bc '" + bc + "'");
    }
    Nonlinearity f;
    if (kind == "power") f = Nonlinearity::power_law(jw.at("nonlinearity").at("p"));
    else if (kind == "cubic_focusing") f = Nonlinearity::cubic_focusing();
    else if (kind == "cubic_defocusing") f = Nonlinearity::cubic_defocusing();
    else throw ConfigError("unknown nonlinearity kind '" + kind + "'");

    const double ell = jw.at("ell");
    const std::string bc = jw.at("bc");
    BoundaryKind bk;
    if (bc == "dirichlet") bk = BoundaryKind::dirichlet;
    else if (bc == "neumann") bk = BoundaryKind::neumann;
    else throw ConfigError("unknown bc '" + bc + "'");

    WaveBranch br;
    const auto& jb = jw.at("branch");
    br.lo = jb.at("lo");
    br.hi = jb.at("hi");
    br.critical_points = jb.value("critical_points", -1);
    return solve_standing_wave(f, beta, ell, bk, br, jw.value("grid", 1024));
}

PotentialPair build_problem(const json& cfg) {
    const auto& jp = cfg.at("problem");
    if (jp.contains("potentials")) {
        const auto& pp = jp.at("potentials");
        const std::string kind = pp.value("kind", "constant");
        if (kind == "constant")
            return constant_pair(pp.at("gplus"), pp.at("hminus"), pp.at("ell"));
        throw ConfigError("unknown potentials kind '" + kind + "'");
    }
    if (jp.contains("wave")) return linearized_potentials(build_wave(jp.at("wave")));
    throw ConfigError("problem must contain 'potentials' or 'wave'");
}

struct Windows {
    double lmin, lmax, smin, smax;
    int nl, ns;
};

Windows read_windows(const json& cfg, const PotentialPair& p) {
    Windows w;
    const double lceil = lambda_ceiling(p);
    w.lmin = -lceil;
    w.lmax = lceil;
    w.smin = 0.05;
    w.smax = 1.0;
    w.nl = 400;
    w.ns = 400;
    if (cfg.contains("lambda_window")) {
        w.lmin = cfg.at("lambda_window").at(0);
        w.lmax = cfg.at("lambda_window").at(1);
    }
    if (cfg.contains("s_window")) {
        w.smin = cfg.at("s_window").at(0);
        w.smax = cfg.at("s_window").at(1);
    }
    if (cfg.contains("resolution")) {
        w.nl = cfg.at("resolution").at(0);
        w.ns = cfg.at("resolution").at(1);
    }
    if (w.lmin >= w.lmax || w.smin >= w.smax) throw ConfigError("empty window");
    if (w.nl < 16 || w.ns < 16) throw ConfigError("resolution must be >= 16");
    if (w.smin < 0.05)
        throw ConfigError("s window floor is 0.05 (no real spectrum below)");
    if (w.smax > 1.0 && !p.extendable)
        throw ConfigError("s > 1 needs potentials defined beyond ell");
    return w;
}

std::string out_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

int cmd_wave(const json& cfg, const std::string& out) {
    const auto w = build_wave(cfg.at("problem").at("wave"));
    const std::string path = out_path(out, cfg.value("wave_json", "wave.json"));
    write_file(path, wave_to_json(w).dump(2) + "\n");
    std::printf("wave: ell=%.12g amplitude=%.12g -> %s\n", w.ell, w.max_abs(),
                path.c_str());
    return 0;
}

int cmd_curves(const json& cfg, const std::string& out) {
    const auto p = build_problem(cfg);
    const auto w = read_windows(cfg, p);
    TraceOptions topt;
    topt.nl = w.nl;
    topt.ns = w.ns;
    if (cfg.contains("tolerances")) {
        const auto& jt = cfg.at("tolerances");
        topt.tangency_tol = jt.value("tangency", topt.tangency_tol);
        if (topt.tangency_tol <= 0) throw ConfigError("tolerances must be positive");
    }
    const auto curves = trace_curves(p, w.lmin, w.lmax, w.smin, w.smax, topt);
    const auto grid = detx_grid(p, w.lmin, w.lmax, w.nl, w.smin, w.smax, w.ns);
    write_file(out_path(out, cfg.value("curves_csv", "curves.csv")),
               curves_to_csv(curves));
    if (cfg.contains("curves_json"))
        write_file(out_path(out, cfg.at("curves_json")),
                   curves_to_json(curves).dump(2) + "\n");
    write_file(out_path(out, cfg.value("grid_csv", "grid.csv")),
               grid_to_csv(grid, w.lmin, w.lmax, w.nl, w.smin, w.smax, w.ns));
    std::size_t npts = 0;
    for (const auto& c : curves) npts += c.points.size();
    std::printf("curves: %zu branches, %zu points\n", curves.size(), npts);
    return 0;
}

int cmd_stability(const json& cfg, const std::string& out) {
    const auto w = build_wave(cfg.at("problem").at("wave"));
    const auto rep = stability_report(w);
    const std::string path = out_path(out, cfg.value("report_json", "stability.json"));
    write_file(path, stability_report_to_json(rep).dump(2) + "\n");
    const char* v = rep.verdict == Verdict::unstable_real_eigenvalue
                        ? "unstable_real_eigenvalue"
                    : rep.verdict == Verdict::spectrally_stable_imaginary_axis
                        ? "spectrally_stable_imaginary_axis"
                        : "inconclusive";
    std::printf("stability: %s (P=%d Q=%d c=%d bound=%d) -> %s\n", v, rep.P, rep.Q,
                rep.corner_c, rep.lower_bound, path.c_str());
    return 0;
}

int cmd_krein(const json& cfg, const std::string& out) {
    const auto p = build_problem(cfg);
    const auto rep = krein_analysis(p, cfg.value("oracle_n", 256));
    const std::string path = out_path(out, cfg.value("report_json", "krein.json"));
    write_file(path, krein_report_to_json(rep).dump(2) + "\n");
    if (cfg.value("oracle_csv", "") != "") {
        const auto spec = fd_spectrum(p, 1.0, cfg.value("oracle_n", 256));
        write_file(out_path(out, cfg.at("oracle_csv")), oracle_to_csv(spec));
    }
    std::printf("krein: c=%d n-(D+)=%d n-(D-)=%d identity=%s balance=%s -> %s\n",
                rep.corner_c, rep.n_minus_Dplus, rep.n_minus_Dminus,
                rep.identity_c ? "ok" : "FAIL", rep.balance_kks ? "ok" : "FAIL",
                path.c_str());
    if (!rep.identity_c || !rep.balance_kks) return 3;
    return 0;
}

int cmd_check() {
    int fails = 0;
    auto report = [&](const char* name, bool ok) {
        std::printf("%-58s %s\n", name, ok ? "pass" : "FAIL");
        if (!ok) ++fails;
    };

    // closed-form eigenvalues of the constant catalogue
    {
        const auto p = family_T3();
        const auto cr = real_eigenvalues(p, 1.0, 0.05, 50.0);
        const double lstar = M_PI * M_PI / std::sqrt(2.0);
        report("T3: one positive real eigenvalue at pi^2/sqrt2",
               cr.size() == 1 && std::fabs(cr[0].lambda0 - lstar) < 1e-8 * lstar);
    }
    {
        const auto cr = real_eigenvalues(family_T1(), 1.0, -1.0, 1.0);
        report("T1: double kernel at the origin",
               cr.size() == 1 && cr[0].kernel_dim == 2);
    }
    {
        report("free potentials: empty real spectrum",
               real_eigenvalues(free_pair(1.0), 1.0, 0.1, 60.0).empty());
    }
    // Maslov boxes
    {
        const auto b1 = maslov_box(family_T1());
        const auto b2 = maslov_box(family_T2());
        const auto b3 = maslov_box(family_T3());
        report("T1 box: P=2 Q=1 c=1 bound 0",
               b1.P == 2 && b1.Q == 1 && b1.corner_c == 1 && b1.lower_bound == 0);
        report("T2 box: P=1 Q=1 c=0 bound 0",
               b2.P == 1 && b2.Q == 1 && b2.corner_c == 0 && b2.lower_bound == 0);
        report("T3 box: P=1 Q=0 c=0 bound 1",
               b3.P == 1 && b3.Q == 0 && b3.corner_c == 0 && b3.lower_bound == 1);
        report("box identity Gamma2 + c + Gamma3 = 0",
               b1.gamma2_index + b1.corner_c + b1.gamma3_index == 0 &&
                   b2.gamma2_index + b2.corner_c + b2.gamma3_index == 0 &&
                   b3.gamma2_index + b3.corner_c + b3.gamma3_index == 0);
    }
    // structural invariants (reduced-size versions of the acceptance suite)
    {
        PotentialPair p;
        p.g = [](double x) { return 2.0 + x - 0.5 * x * x; };
        p.h = [](double x) { return -1.0 + 0.3 * x + 0.7 * x * x; };
        p.ell = 1.0;
        bool ok = true;
        for (double lam : {-2.0, 0.0, 3.0})
            for (double s : {0.2, 0.6, 1.0})
                ok = ok && lagrangian_gram(fundamental_matrix(p, lam, s))
                                   .cwiseAbs()
                                   .maxCoeff() < 1e-8;
        report("Lagrangian Gram residual < 1e-8", ok);

        SampledPair a, b;
        a.ell = b.ell = 1.0;
        const int n = 2048;
        for (int i = 0; i <= n; ++i) {
            const double x = static_cast<double>(i) / n;
            a.u.push_back(std::sin(2 * M_PI * x) + 0.1 * x);
            a.v.push_back(std::cos(3.0 * x) - 1.0);
            b.u.push_back(x * (1 - x) * std::exp(x));
            b.v.push_back(std::sin(5.0 * x));
        }
        report("Green identity residual < 1e-8",
               greens_residual(a, b, p, 1.3, 0.8) < 1e-8);
    }
    {
        const auto spec = fd_spectrum(family_T3(), 1.0, 96);
        const double lstar = M_PI * M_PI / std::sqrt(2.0);
        double best = 1e300;
        for (const auto& e : spec)
            if (e.extrapolated)
                best = std::min(best,
                                std::abs(e.lambda - std::complex<double>(lstar, 0.0)));
        report("oracle locates the T3 real pair to 1e-4", best < 1e-4 * lstar);
    }
    {
        // the s-window floor: no real spectrum survives at s = 0.05
        bool ok = true;
        using Family = PotentialPair (*)();
        for (Family fam : {Family{family_T1}, Family{family_T2}, Family{family_T3}})
            ok = ok && real_eigenvalues(fam(), 0.05, 0.5, 120.0).empty();
        report("real spectrum empty at the s-window floor", ok);
    }
    std::printf("check: %s\n", fails == 0 ? "all invariants pass" : "FAILURES");
    return fails == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maslov-index spectral stability toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int threads = 0;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "OpenMP thread count");

    auto* sc_wave = app.add_subcommand("wave", "solve a standing wave and dump it");
    auto* sc_curves = app.add_subcommand("curves", "trace real eigenvalue curves");
    auto* sc_stab = app.add_subcommand("stability", "full stability report");
    auto* sc_krein = app.add_subcommand("krein", "Krein-index cross-checks");
    auto* sc_check = app.add_subcommand("check", "run the built-in invariant suite");
    for (auto* sc : {sc_wave, sc_curves, sc_stab, sc_krein, sc_check})
        sc->fallthrough();

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (sc_check->parsed()) return cmd_check();
        if (config_path.empty()) throw ConfigError("--config is required");
        const json cfg = load_config(config_path);
        if (sc_wave->parsed()) return cmd_wave(cfg, out_dir);
        if (sc_curves->parsed()) return cmd_curves(cfg, out_dir);
        if (sc_stab->parsed()) return cmd_stability(cfg, out_dir);
        if (sc_krein->parsed()) return cmd_krein(cfg, out_dir);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const UnresolvedCorner& e) {
        std::fprintf(stderr, "unresolved corner: %s\n", e.what());
        return 4;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error at (lambda=%g, s=%g): %s\n", e.lambda,
                     e.s, e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}

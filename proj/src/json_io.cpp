#include "mstab/json_io.hpp"

#include <cstdio>
#include <fstream>

#include "mstab/errors.hpp"

namespace mstab {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string bc_name(BoundaryKind bc) {
    return bc == BoundaryKind::dirichlet ? "dirichlet" : "neumann";
}

nlohmann::json nonlinearity_to_json(const Nonlinearity& f) {
    nlohmann::json j;
    switch (f.kind) {
        case Nonlinearity::Kind::power:
            j["kind"] = "power";
            j["p"] = f.p;
            break;
        case Nonlinearity::Kind::cubic_focusing: j["kind"] = "cubic_focusing"; break;
        case Nonlinearity::Kind::cubic_defocusing: j["kind"] = "cubic_defocusing"; break;
        case Nonlinearity::Kind::custom: j["kind"] = "custom"; break;
    }
    return j;
}

Nonlinearity nonlinearity_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind");
    if (kind == "power") return Nonlinearity::power_law(j.at("p").get<double>());
    if (kind == "cubic_focusing") return Nonlinearity::cubic_focusing();
    if (kind == "cubic_defocusing") return Nonlinearity::cubic_defocusing();
    throw ConfigError("nonlinearity kind '" + kind + "' not loadable from JSON");
}

} // namespace

nlohmann::json wave_to_json(const StandingWave& w) {
    nlohmann::json j;
    j["beta"] = w.beta;
    j["ell"] = w.ell;
    j["bc"] = bc_name(w.bc);
    j["nonlinearity"] = nonlinearity_to_json(w.nonlinearity);
    j["branch"] = {{"lo", w.branch.lo},
                   {"hi", w.branch.hi},
                   {"critical_points", w.branch.critical_points},
                   {"a0", w.branch.a0},
                   {"b0", w.branch.b0}};
    nlohmann::json grid = nlohmann::json::array();
    for (std::size_t i = 0; i < w.x.size(); ++i)
        grid.push_back({{"x", w.x[i]}, {"phi", w.phi[i]}, {"dphi", w.dphi[i]}});
    j["grid"] = grid;
    return j;
}

StandingWave wave_from_json(const nlohmann::json& j) {
    StandingWave w;
    w.beta = j.at("beta");
    w.ell = j.at("ell");
    const std::string bc = j.at("bc");
    if (bc == "dirichlet") w.bc = BoundaryKind::dirichlet;
    else if (bc == "neumann") w.bc = BoundaryKind::neumann;
    else throw ConfigError("unknown bc '" + bc + "'");
    w.nonlinearity = nonlinearity_from_json(j.at("nonlinearity"));
    if (j.contains("branch")) {
        const auto& b = j.at("branch");
        w.branch.lo = b.value("lo", 0.0);
        w.branch.hi = b.value("hi", 0.0);
        w.branch.critical_points = b.value("critical_points", -1);
        w.branch.a0 = b.value("a0", 0.0);
        w.branch.b0 = b.value("b0", 0.0);
    }
    for (const auto& row : j.at("grid")) {
        w.x.push_back(row.at("x"));
        w.phi.push_back(row.at("phi"));
        w.dphi.push_back(row.at("dphi"));
    }
    if (w.x.size() < 2) throw ConfigError("wave grid too small");
    return w;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    nlohmann::json data = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    j["data"] = data;
    return j;
}

nlohmann::json form_report_to_json(const FormReport& f) {
    nlohmann::json j;
    j["matrix"] = matrix_to_json(f.mat);
    j["n_plus"] = f.n_plus;
    j["n_minus"] = f.n_minus;
    j["n_zero"] = f.n_zero;
    j["signature"] = f.signature();
    return j;
}

nlohmann::json crossing_forms_to_json(const CrossingFormReport& r) {
    nlohmann::json j;
    j["at"] = {{"lambda0", r.at.lambda0},
               {"s0", r.at.s0},
               {"kernel_dim", r.at.kernel_dim}};
    switch (r.at.which_kernel) {
        case KernelSide::Lplus: j["at"]["which_kernel"] = "Lplus"; break;
        case KernelSide::Lminus: j["at"]["which_kernel"] = "Lminus"; break;
        case KernelSide::both: j["at"]["which_kernel"] = "both"; break;
        case KernelSide::coupled: j["at"]["which_kernel"] = "coupled"; break;
    }
    nlohmann::json norms = nlohmann::json::array();
    for (const auto& k : r.at.kernel) norms.push_back(k.norm_constant);
    j["at"]["kernel_norm_constants"] = norms;
    j["m_s"] = form_report_to_json(r.m_s);
    j["m_lambda"] = form_report_to_json(r.m_lambda);
    if (r.m_lambda2) {
        j["m_lambda2"] = form_report_to_json(r.m_lambda2->form);
        j["m_lambda2"]["vk_integrals"] = r.m_lambda2->vk_integrals;
        j["m_lambda2"]["degenerate"] = r.m_lambda2->degenerate;
    }
    return j;
}

nlohmann::json maslov_box_to_json(const MaslovBoxReport& r) {
    nlohmann::json j;
    j["P"] = r.P;
    j["Q"] = r.Q;
    j["gamma2_index"] = r.gamma2_index;
    j["corner_c"] = r.corner_c;
    j["gamma3_index"] = r.gamma3_index;
    j["lower_bound"] = r.lower_bound;
    j["corner_resolved"] = r.corner_resolved;
    if (!r.corner_resolved) {
        j["corner_min"] = r.corner_min;
        j["corner_max"] = r.corner_max;
    }
    nlohmann::json sigs = nlohmann::json::array();
    for (const auto& [s0, sig] : r.gamma2_signatures)
        sigs.push_back({{"s0", s0}, {"signature", sig}});
    j["gamma2_signatures"] = sigs;
    j["second_order_consistent"] = r.second_order_consistent;
    return j;
}

nlohmann::json stability_report_to_json(const StabilityReport& r) {
    nlohmann::json j;
    j["P"] = r.P;
    j["Q"] = r.Q;
    switch (r.kernel_case) {
        case KernelCase::Lplus_kernel: j["kernel_case"] = "Lplus_kernel"; break;
        case KernelCase::Lminus_kernel: j["kernel_case"] = "Lminus_kernel"; break;
        case KernelCase::no_kernel: j["kernel_case"] = "no_kernel"; break;
        case KernelCase::double_kernel: j["kernel_case"] = "double_kernel"; break;
    }
    j["corner_c"] = r.corner_c;
    j["lower_bound"] = r.lower_bound;
    j["vk_integral"] = r.vk_integral;
    j["sddot"] = r.sddot;
    switch (r.verdict) {
        case Verdict::unstable_real_eigenvalue:
            j["verdict"] = "unstable_real_eigenvalue";
            break;
        case Verdict::spectrally_stable_imaginary_axis:
            j["verdict"] = "spectrally_stable_imaginary_axis";
            break;
        case Verdict::inconclusive: j["verdict"] = "inconclusive"; break;
    }
    j["evidence"] = r.evidence;
    j["located_real_eigenvalues"] = r.located_real_eigenvalues;
    j["lambda_max"] = r.lambda_max;
    return j;
}

nlohmann::json krein_report_to_json(const KreinReport& r) {
    nlohmann::json j;
    j["D_plus"] = matrix_to_json(r.D_plus);
    j["D_minus"] = matrix_to_json(r.D_minus);
    j["n_minus_Dplus"] = r.n_minus_Dplus;
    j["n_minus_Dminus"] = r.n_minus_Dminus;
    j["corner_c"] = r.corner_c;
    j["identity_c"] = r.identity_c;
    j["P"] = r.P;
    j["Q"] = r.Q;
    j["kks_balance"] = {{"k_r", r.k_r},
                        {"k_c", r.k_c},
                        {"k_i_minus", r.k_i_minus},
                        {"rhs", r.rhs},
                        {"holds", r.balance_kks},
                        {"holds_gamma3_P", r.balance_gamma3_P},
                        {"holds_gamma3_Q", r.balance_gamma3_Q}};
    if (r.cor_PQ0_checked) j["cor_PQ0"] = r.cor_PQ0;
    if (r.cor_kr0_checked) j["cor_kr0"] = r.cor_kr0;
    j["dimension_hypothesis_ok"] = r.dimension_hypothesis_ok;
    return j;
}

std::string curves_to_csv(const std::vector<EigenvalueCurve>& curves) {
    std::string out = "branch_id,lambda,s\n";
    for (const auto& c : curves)
        for (const auto& pt : c.points)
            out += std::to_string(c.branch_id) + "," + fmt(pt.lambda) + "," +
                   fmt(pt.s) + "\n";
    return out;
}

nlohmann::json curves_to_json(const std::vector<EigenvalueCurve>& curves) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : curves) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& pt : c.points)
            pts.push_back({{"lambda", pt.lambda}, {"s", pt.s}, {"tangency", pt.tangency}});
        j.push_back({{"branch_id", c.branch_id}, {"points", pts}});
    }
    return j;
}

std::string grid_to_csv(const std::vector<double>& det, double l0, double l1,
                        int nl, double s0, double s1, int ns) {
    std::string out = "lambda,s,detX\n";
    out.reserve(det.size() * 40);
    for (int j = 0; j < ns; ++j) {
        const double s = (ns == 1) ? s0 : s0 + (s1 - s0) * j / (ns - 1);
        for (int i = 0; i < nl; ++i) {
            const double l = (nl == 1) ? l0 : l0 + (l1 - l0) * i / (nl - 1);
            out += fmt(l) + "," + fmt(s) + "," +
                   fmt(det[static_cast<std::size_t>(j) * nl + i]) + "\n";
        }
    }
    return out;
}

std::string oracle_to_csv(const std::vector<OracleEig>& spec) {
    std::string out = "re,im,krein_value\n";
    for (const auto& e : spec)
        out += fmt(e.lambda.real()) + "," + fmt(e.lambda.imag()) + "," +
               fmt(e.krein_value) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file: " + path);
    f << content;
}

} // namespace mstab

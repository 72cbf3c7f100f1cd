#pragma once

// JSON / CSV serialization for waves, curves, oracle spectra and reports.
// All writers are deterministic: fixed iteration orders, %.17g formatting,
// no timestamps.

#include <string>
#include <vector>

#include <json.hpp>

#include "mstab/maslov.hpp"
#include "mstab/spectra.hpp"
#include "mstab/stability.hpp"
#include "mstab/wave.hpp"

namespace mstab {

nlohmann::json wave_to_json(const StandingWave& w);
StandingWave wave_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m); // row-major with dims
nlohmann::json form_report_to_json(const FormReport& f);
nlohmann::json crossing_forms_to_json(const CrossingFormReport& r);
nlohmann::json maslov_box_to_json(const MaslovBoxReport& r);
nlohmann::json stability_report_to_json(const StabilityReport& r);
nlohmann::json krein_report_to_json(const KreinReport& r);

std::string curves_to_csv(const std::vector<EigenvalueCurve>& curves);
nlohmann::json curves_to_json(const std::vector<EigenvalueCurve>& curves);
std::string grid_to_csv(const std::vector<double>& det, double l0, double l1,
                        int nl, double s0, double s1, int ns);
std::string oracle_to_csv(const std::vector<OracleEig>& spec);

void write_file(const std::string& path, const std::string& content);

} // namespace mstab

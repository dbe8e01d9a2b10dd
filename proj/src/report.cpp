#include "modalctl/report.hpp"

#include "modalctl/model_io.hpp"

namespace modalctl {

using nlohmann::json;

json rvector_to_json(const RVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json roots_to_json(const std::vector<RootCluster>& roots) {
    json out = json::array();
    for (const auto& r : roots)
        out.push_back({{"location", complex_to_json(r.location)},
                       {"multiplicity", r.multiplicity},
                       {"residual", r.residual},
                       {"resolved", r.resolved}});
    return out;
}

json exponential_type_to_json(const ExponentialTypeEstimate& est) {
    return {{"omega", est.omega}, {"spread", est.spread}, {"radii", est.radii}, {"per_radius", est.per_radius}};
}

json spectrum_to_json(const ModalSystem& system) {
    json modes = json::array();
    for (const auto& m : system.modes())
        modes.push_back({{"index", m.index()}, {"lambda", complex_to_json(m.lambda())}, {"beta", m.beta()}});
    return modes;
}

json controllability_to_json(const ControllabilityReport& report) {
    json modes = json::array();
    for (const auto& v : report.verdicts)
        modes.push_back({{"mode_index", v.mode_index},
                         {"beta", v.beta},
                         {"rank_found", v.rank_found},
                         {"passes", v.passes},
                         {"margin", v.margin},
                         {"sigma_ratio", v.sigma_ratio}});
    return {{"verdict", report.verdict()},
            {"passed", report.passed},
            {"modes_checked", report.modes_checked},
            {"failing_index", report.failing_index},
            {"sufficiency_horizon", report.sufficiency_horizon},
            {"horizon_note", report.horizon_note},
            {"modes", std::move(modes)}};
}

json independence_to_json(const IndependenceReport& report) {
    json spectra = json::array();
    for (const auto& s : report.spectra) spectra.push_back(rvector_to_json(s));
    json distances = json::array();
    for (Eigen::Index i = 0; i < report.distances.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < report.distances.cols(); ++j) row.push_back(report.distances(i, j));
        distances.push_back(std::move(row));
    }
    json pairs = json::array();
    for (const auto& p : report.pairs)
        pairs.push_back({{"i", p.i},
                         {"j", p.j},
                         {"distance", p.distance},
                         {"above_threshold", p.above_threshold},
                         {"independent", p.independent},
                         {"note", p.note}});
    return {{"horizons", report.horizons},
            {"dims", report.dims},
            {"gramian_spectra", std::move(spectra)},
            {"distances", std::move(distances)},
            {"threshold_time", report.threshold_time},
            {"distance_tol", report.distance_tol},
            {"modes_used", report.modes_used},
            {"pairs", std::move(pairs)},
            {"monotone", report.monotone},
            {"passed", report.passed}};
}

}  // namespace modalctl

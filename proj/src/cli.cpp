#include "modalctl/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modalctl/attainable.hpp"
#include "modalctl/controllability.hpp"
#include "modalctl/errors.hpp"
#include "modalctl/minimality.hpp"
#include "modalctl/model_io.hpp"
#include "modalctl/quasipoly.hpp"
#include "modalctl/report.hpp"

#ifndef MODALCTL_VERSION
#define MODALCTL_VERSION "0.0.0"
#endif

namespace modalctl::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string model;
    std::vector<double> region;
    std::vector<double> horizons;
    int modes = 0;
    int sections = 0;
    std::optional<double> tol;
    double distance_tol = 1e-6;
    bool no_timestamp = false;
    std::string out;
};

struct Outcome {
    json results;
    std::vector<std::string> warnings;
    int exit_code = kExitPass;
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Rect region_of(const Options& opt, const QuasiPolyModel& model) {
    if (!opt.region.empty()) {
        const Rect r{opt.region[0], opt.region[1], opt.region[2], opt.region[3]};
        if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max))
            throw InvalidArgument("--region must satisfy re_min < re_max and im_min < im_max");
        return r;
    }
    if (model.region) return *model.region;
    throw InvalidArgument("quasipoly model has no region; pass --region re_min,re_max,im_min,im_max");
}

double root_tol(const Options& opt) { return opt.tol.value_or(1e-10); }

// Modal view of any model. Quasi-polynomial models need user-supplied
// couplings, one block per root found in the region.
ModalSystem modal_view(const LoadedModel& model, const Options& opt, Outcome& oc) {
    if (model.is_modal()) return std::get<ModalSystem>(model.value);
    const auto& qp = std::get<QuasiPolyModel>(model.value);
    if (qp.couplings.empty())
        throw InvalidArgument(
            "quasipoly model carries no couplings; modal analysis needs one coupling block per root in the region");
    const auto roots = find_roots(qp.q, region_of(opt, qp), 1e-10);
    if (roots.size() != qp.couplings.size())
        throw InvalidArgument("found " + std::to_string(roots.size()) + " root clusters in the region but the model has " +
                              std::to_string(qp.couplings.size()) + " coupling blocks");
    ModalSystem sys = to_modal_system(qp.q, roots, qp.couplings);
    oc.warnings.push_back("estimated omega: minimality interval nu = " + fmt(sys.minimality_interval()) +
                          " derived from a sampled exponential type");
    return sys;
}

ModalSystem truncate(const ModalSystem& sys, const Options& opt, Outcome& oc) {
    std::size_t n = sys.size();
    if (opt.modes > 0) {
        if (static_cast<std::size_t>(opt.modes) > sys.size())
            throw InvalidArgument("--modes " + std::to_string(opt.modes) + " exceeds the " + std::to_string(sys.size()) +
                                  " modes of the model");
        n = static_cast<std::size_t>(opt.modes);
    }
    oc.warnings.push_back("truncation: " + std::to_string(n) + " of " + std::to_string(sys.size()) +
                          " modes analysed; the remaining spectrum is not examined");
    if (sys.interval_estimated() && std::none_of(oc.warnings.begin(), oc.warnings.end(), [](const std::string& w) {
            return w.rfind("estimated omega", 0) == 0;
        }))
        oc.warnings.push_back("estimated omega: minimality interval nu = " + fmt(sys.minimality_interval()) +
                              " is an estimate");
    std::vector<SpectralMode> modes(sys.modes().begin(), sys.modes().begin() + static_cast<std::ptrdiff_t>(n));
    return ModalSystem(std::move(modes), sys.input_dim(), sys.expansion_time(), sys.minimality_interval(),
                       sys.interval_estimated());
}

Outcome cmd_spectrum(const LoadedModel& model, const Options& opt) {
    Outcome oc;
    if (model.is_modal()) {
        const auto& sys = std::get<ModalSystem>(model.value);
        oc.results = {{"source", "modal"},
                      {"modes", spectrum_to_json(sys)},
                      {"minimality_interval", sys.minimality_interval()},
                      {"expansion_time", sys.expansion_time()}};
        if (sys.interval_estimated()) oc.warnings.push_back("estimated omega: minimality interval is an estimate");
        return oc;
    }
    const auto& qp = std::get<QuasiPolyModel>(model.value);
    const Rect region = region_of(opt, qp);
    const auto roots = find_roots(qp.q, region, root_tol(opt));
    const ModalBridgeOptions bridge;
    const auto est = exponential_type(qp.q, bridge.radii, bridge.directions);

    int total = 0;
    bool resolved = true;
    for (const auto& r : roots) {
        total += r.multiplicity;
        resolved = resolved && r.resolved;
    }
    oc.results = {{"source", "quasipoly"},
                  {"region", {region.re_min, region.re_max, region.im_min, region.im_max}},
                  {"tolerance", root_tol(opt)},
                  {"roots", roots_to_json(roots)},
                  {"root_count", total},
                  {"exponential_type", exponential_type_to_json(est)},
                  {"minimality_interval_estimate", std::max(est.omega, 0.0) * (1.0 + bridge.margin)}};
    oc.warnings.push_back("estimated omega: exponential type " + fmt(est.omega) + " from directional sampling (spread " +
                          fmt(est.spread) + ")");
    if (!resolved) {
        oc.warnings.push_back("unresolved root clusters: depth limit reached before isolation");
        oc.exit_code = kExitFail;
    }
    return oc;
}

Outcome cmd_minimality(const LoadedModel& model, const Options& opt) {
    Outcome oc;
    const ModalSystem sys = truncate(modal_view(model, opt, oc), opt, oc);
    const ExponentialFamily fam = family_from_system(sys);
    std::size_t n = fam.size();
    if (opt.sections > 0) {
        if (static_cast<std::size_t>(opt.sections) > fam.size())
            throw InvalidArgument("--sections " + std::to_string(opt.sections) + " exceeds the family size " +
                                  std::to_string(fam.size()));
        n = static_cast<std::size_t>(opt.sections);
    }
    json margins = json::array();
    for (std::size_t k = 1; k <= n; ++k) margins.push_back(minimality_margin(fam, k));
    const double margin = margins.back().get<double>();
    const double threshold = opt.tol.value_or(1e-10);

    json bio;
    bool ok = margin > 0.0;
    try {
        const auto trunc = biorthogonal_truncation(fam, n, threshold);
        bio = {{"computed", true},
               {"residual", trunc.residual},
               {"gram_condition", trunc.gram_condition},
               {"kronecker_residual", kronecker_residual(trunc, 1e-10)}};
    } catch (const IllConditionedFamily& e) {
        bio = {{"computed", false}, {"reason", e.what()}};
        ok = false;
    }
    oc.results = {{"interval_end", fam.interval_end()},
                  {"family_size", fam.size()},
                  {"sections", n},
                  {"margins", std::move(margins)},
                  {"margin", margin},
                  {"statement", finite_section_statement(n, margin)},
                  {"biorthogonal", std::move(bio)},
                  {"passed", ok}};
    oc.warnings.push_back("finite-section evidence: margins cover sections 1.." + std::to_string(n) +
                          ", not the infinite family");
    oc.exit_code = ok ? kExitPass : kExitFail;
    return oc;
}

Outcome cmd_check(const LoadedModel& model, const Options& opt) {
    Outcome oc;
    const ModalSystem sys = truncate(modal_view(model, opt, oc), opt, oc);
    const auto rep = controllability_report(sys, opt.tol.value_or(kDefaultRankTol));
    oc.results = controllability_to_json(rep);
    if (rep.passed)
        oc.warnings.push_back("pass-up-to-N only: verdict covers modes 1.." + std::to_string(rep.modes_checked));
    oc.exit_code = rep.passed ? kExitPass : kExitFail;
    return oc;
}

Outcome cmd_attain(const LoadedModel& model, const Options& opt) {
    Outcome oc;
    const ModalSystem sys = truncate(modal_view(model, opt, oc), opt, oc);
    std::vector<double> horizons = opt.horizons;
    std::sort(horizons.begin(), horizons.end());
    const auto rep = closure_independence_experiment(sys, horizons, sys.size(), opt.tol.value_or(kDefaultSubspaceTol),
                                                     opt.distance_tol);
    oc.results = independence_to_json(rep);
    oc.warnings.push_back("truncation evidence: closure independence is checked on a finite modal truncation only");
    if (std::none_of(rep.pairs.begin(), rep.pairs.end(), [](const PairVerdict& p) { return p.above_threshold; }))
        oc.warnings.push_back("no horizon pair exceeds T + nu = " + fmt(rep.threshold_time) + "; nothing asserted");
    oc.exit_code = rep.passed ? kExitPass : kExitFail;
    return oc;
}

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--model", opt.model, "Model file (JSON)")->required();
    sub->add_option("--region", opt.region, "Search rectangle re_min,re_max,im_min,im_max")
        ->delimiter(',')
        ->expected(4);
    sub->add_option("--modes", opt.modes, "Number of leading modes to analyse (default: all)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol", opt.tol, "Command tolerance (root tol, rank tol or margin threshold)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--no-timestamp", opt.no_timestamp, "Omit the timestamp field");
    sub->add_option("--out", opt.out, "Write the report to this file instead of stdout");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Modal controllability toolkit", "modalctl"};
    app.set_version_flag("--version", std::string(MODALCTL_VERSION));
    app.require_subcommand(1);
    Options opt;

    auto* spectrum = app.add_subcommand("spectrum", "Roots and exponential type of a quasi-polynomial");
    auto* minimality = app.add_subcommand("minimality", "Gram margins and biorthogonal truncation of the exponential family");
    auto* check = app.add_subcommand("check", "Per-mode controllability verdict");
    auto* attain = app.add_subcommand("attain", "Attainable-subspace independence across horizons");
    for (auto* sub : {spectrum, minimality, check, attain}) add_common(sub, opt);
    minimality->add_option("--sections", opt.sections, "Largest section size n (default: whole family)")
        ->check(CLI::PositiveNumber);
    attain->add_option("--horizons", opt.horizons, "Comma-separated horizons t1,t2,...")->delimiter(',')->required();
    attain->add_option("--distance-tol", opt.distance_tol, "Subspace distance tolerance")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitPass;
    } catch (const CLI::CallForVersion&) {
        out << MODALCTL_VERSION << "\n";
        return kExitPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    try {
        const LoadedModel model = load_model(opt.model);
        Outcome oc;
        if (command == "spectrum")
            oc = cmd_spectrum(model, opt);
        else if (command == "minimality")
            oc = cmd_minimality(model, opt);
        else if (command == "check")
            oc = cmd_check(model, opt);
        else
            oc = cmd_attain(model, opt);

        json report = {{"command", command},
                       {"arguments", args},
                       {"toolkit_version", MODALCTL_VERSION},
                       {"input_digest", model.digest},
                       {"model_kind", model.kind},
                       {"schema_version", kSchemaVersion},
                       {"results", std::move(oc.results)},
                       {"warnings", oc.warnings},
                       {"exit_code", oc.exit_code}};
        if (!model.preset.empty()) report["preset"] = model.preset;
        if (!opt.no_timestamp) report["timestamp"] = utc_timestamp();

        const std::string text = report.dump(2) + "\n";
        if (opt.out.empty()) {
            out << text;
        } else {
            std::ofstream f(opt.out, std::ios::binary);
            if (!f) throw InvalidArgument("cannot write report to '" + opt.out + "'");
            f << text;
        }
        return oc.exit_code;
    } catch (const SchemaError& e) {
        err << "model error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitError;
}

}  // namespace modalctl::cli

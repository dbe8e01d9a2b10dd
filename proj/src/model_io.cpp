#include "modalctl/model_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "modalctl/errors.hpp"
#include "modalctl/presets.hpp"

namespace modalctl {

using nlohmann::json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void expect_object(const json& v, const std::string& path) {
    if (!v.is_object()) throw SchemaError(path, "expected an object");
}

void expect_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected an array");
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw SchemaError(at(path, key), "unknown field");
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(at(path, key), "missing required field");
    return *it;
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
    return d;
}

int get_int(const json& v, const std::string& path, int min_value) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    const auto i = v.get<long long>();
    if (i < min_value) throw SchemaError(path, "expected an integer >= " + std::to_string(min_value));
    if (i > 1'000'000'000) throw SchemaError(path, "integer out of range");
    return static_cast<int>(i);
}

bool get_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw SchemaError(path, "expected a boolean");
    return v.get<bool>();
}

Complex get_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected a complex number [re, im]");
    return {get_number(v[0], at(path, 0)), get_number(v[1], at(path, 1))};
}

CMatrix get_matrix(const json& v, const std::string& path) {
    expect_array(v, path);
    if (v.empty()) throw SchemaError(path, "matrix needs at least one row");
    const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
    if (cols == 0) throw SchemaError(at(path, 0), "matrix rows must be non-empty arrays");
    CMatrix m(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string rp = at(path, i);
        expect_array(v[i], rp);
        if (v[i].size() != cols) throw SchemaError(rp, "ragged matrix: expected " + std::to_string(cols) + " columns");
        for (std::size_t j = 0; j < cols; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = get_complex(v[i][j], at(rp, j));
    }
    return m;
}

std::vector<CMatrix> get_matrix_list(const json& v, const std::string& path) {
    expect_array(v, path);
    std::vector<CMatrix> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_matrix(v[i], at(path, i)));
    return out;
}

double param(const json& params, const std::string& key, double fallback, const std::string& path) {
    auto it = params.find(key);
    return it == params.end() ? fallback : get_number(*it, at(path, key));
}

ModalSystem parse_modal(const json& doc, const std::string& path) {
    reject_unknown(doc, path,
                   {"schema_version", "kind", "input_dim", "expansion_time", "minimality_interval", "interval_estimated",
                    "modes"});
    const int r = get_int(require(doc, "input_dim", path), at(path, "input_dim"), 1);
    const double T = get_number(require(doc, "expansion_time", path), at(path, "expansion_time"));
    const double nu = get_number(require(doc, "minimality_interval", path), at(path, "minimality_interval"));
    if (T < 0.0) throw SchemaError(at(path, "expansion_time"), "must be >= 0");
    if (nu < 0.0) throw SchemaError(at(path, "minimality_interval"), "must be >= 0");
    bool estimated = false;
    if (auto it = doc.find("interval_estimated"); it != doc.end()) estimated = get_bool(*it, at(path, "interval_estimated"));

    const json& modes = require(doc, "modes", path);
    const std::string mpath = at(path, "modes");
    expect_array(modes, mpath);
    if (modes.empty()) throw SchemaError(mpath, "at least one mode is required");

    std::vector<SpectralMode> out;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const std::string p = at(mpath, j);
        const json& m = modes[j];
        expect_object(m, p);
        reject_unknown(m, p, {"lambda", "chain_lengths", "input_coupling"});
        const Complex lambda = get_complex(require(m, "lambda", p), at(p, "lambda"));

        const json& chains = require(m, "chain_lengths", p);
        expect_array(chains, at(p, "chain_lengths"));
        if (chains.empty()) throw SchemaError(at(p, "chain_lengths"), "at least one chain is required");
        std::vector<int> lengths;
        int beta = 0;
        for (std::size_t k = 0; k < chains.size(); ++k) {
            lengths.push_back(get_int(chains[k], at(at(p, "chain_lengths"), k), 1));
            beta += lengths.back();
        }

        const std::string cpath = at(p, "input_coupling");
        const CMatrix coupling = get_matrix(require(m, "input_coupling", p), cpath);
        if (coupling.rows() != beta)
            throw SchemaError(cpath, "expected " + std::to_string(beta) + " rows (sum of chain_lengths), got " +
                                         std::to_string(coupling.rows()));
        if (coupling.cols() != r)
            throw SchemaError(cpath, "expected " + std::to_string(r) + " columns (input_dim), got " +
                                         std::to_string(coupling.cols()));
        out.emplace_back(lambda, std::move(lengths), coupling);
    }
    return ModalSystem(std::move(out), r, T, nu, estimated);
}

void parse_quasipoly_extras(const json& doc, const std::string& path, QuasiPolyModel& model) {
    if (auto it = doc.find("region"); it != doc.end()) {
        const std::string p = at(path, "region");
        if (!it->is_array() || it->size() != 4) throw SchemaError(p, "expected [re_min, re_max, im_min, im_max]");
        Rect r{get_number((*it)[0], at(p, 0)), get_number((*it)[1], at(p, 1)), get_number((*it)[2], at(p, 2)),
               get_number((*it)[3], at(p, 3))};
        if (!(r.re_min < r.re_max) || !(r.im_min < r.im_max))
            throw SchemaError(p, "bounds must satisfy re_min < re_max and im_min < im_max");
        model.region = r;
    }
    if (auto it = doc.find("couplings"); it != doc.end()) model.couplings = get_matrix_list(*it, at(path, "couplings"));
}

QuasiPolyModel parse_quasipoly(const json& doc, const std::string& path) {
    reject_unknown(doc, path,
                   {"schema_version", "kind", "dim", "delays", "neutral_coeffs", "retarded_coeffs", "region", "couplings"});
    const int n = get_int(require(doc, "dim", path), at(path, "dim"), 1);

    const json& delays = require(doc, "delays", path);
    expect_array(delays, at(path, "delays"));
    std::vector<double> h;
    for (std::size_t j = 0; j < delays.size(); ++j) h.push_back(get_number(delays[j], at(at(path, "delays"), j)));

    auto a0 = get_matrix_list(require(doc, "neutral_coeffs", path), at(path, "neutral_coeffs"));
    auto a = get_matrix_list(require(doc, "retarded_coeffs", path), at(path, "retarded_coeffs"));
    for (const auto& [list, key] : {std::pair{&a0, "neutral_coeffs"}, std::pair{&a, "retarded_coeffs"}}) {
        if (list->size() != h.size())
            throw SchemaError(at(path, key), "expected one matrix per delay (" + std::to_string(h.size()) + ")");
        for (std::size_t j = 0; j < list->size(); ++j)
            if ((*list)[j].rows() != n || (*list)[j].cols() != n)
                throw SchemaError(at(at(path, key), j), "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    QuasiPolyModel model{QuasiPolynomial(n, std::move(h), std::move(a0), std::move(a)), std::nullopt, {}};
    parse_quasipoly_extras(doc, path, model);
    return model;
}

LoadedModel parse_preset(const json& doc, const std::string& path) {
    reject_unknown(doc, path, {"schema_version", "kind", "preset", "params"});
    const json& name_v = require(doc, "preset", path);
    if (!name_v.is_string()) throw SchemaError(at(path, "preset"), "expected a string");
    const std::string name = name_v.get<std::string>();
    json params = json::object();
    if (auto it = doc.find("params"); it != doc.end()) {
        expect_object(*it, at(path, "params"));
        params = *it;
    }
    const std::string pp = at(path, "params");

    LoadedModel out{"preset", name, ModalSystem({}, 1, 0.0, 0.0), ""};
    if (name == "wave") {
        reject_unknown(params, pp, {"K", "mu", "boundary", "include_zero_mode"});
        const int K = get_int(require(params, "K", pp), at(pp, "K"), 1);
        const double mu = param(params, "mu", 0.5, pp);
        WavePresetOptions opts;
        if (auto it = params.find("boundary"); it != params.end()) {
            const std::string bp = at(pp, "boundary");
            if (!it->is_array() || it->size() != 2) throw SchemaError(bp, "expected [b0, b_pi]");
            opts.boundary = {get_number((*it)[0], at(bp, 0)), get_number((*it)[1], at(bp, 1))};
        }
        if (auto it = params.find("include_zero_mode"); it != params.end())
            opts.include_zero_mode = get_bool(*it, at(pp, "include_zero_mode"));
        out.value = preset_wave(K, mu, opts);
    } else if (name == "ode") {
        reject_unknown(params, pp, {"n", "coupling"});
        const int n = get_int(require(params, "n", pp), at(pp, "n"), 1);
        Complex c = 1.0;
        if (auto it = params.find("coupling"); it != params.end()) c = get_complex(*it, at(pp, "coupling"));
        out.value = preset_finite_ode(n, c);
    } else if (name == "neutral") {
        reject_unknown(params, pp, {"a0", "a", "h", "region", "couplings"});
        QuasiPolyModel model{preset_neutral_scalar(param(params, "a0", 0.5, pp), param(params, "a", 1.0, pp),
                                                   param(params, "h", 1.0, pp)),
                             std::nullopt,
                             {}};
        parse_quasipoly_extras(params, pp, model);
        out.value = std::move(model);
    } else {
        throw SchemaError(at(path, "preset"), "unknown preset '" + name + "' (expected wave, ode or neutral)");
    }
    return out;
}

}  // namespace

LoadedModel parse_model(const json& doc) {
    const std::string root = "$";
    expect_object(doc, root);
    const json& version = require(doc, "schema_version", root);
    if (!version.is_number_integer() || version.get<long long>() != kSchemaVersion)
        throw SchemaError(at(root, "schema_version"), "unsupported schema version (expected " +
                                                          std::to_string(kSchemaVersion) + ")");
    const json& kind_v = require(doc, "kind", root);
    if (!kind_v.is_string()) throw SchemaError(at(root, "kind"), "expected a string");
    const std::string kind = kind_v.get<std::string>();

    if (kind == "modal") return {kind, "", parse_modal(doc, root), ""};
    if (kind == "quasipoly") return {kind, "", parse_quasipoly(doc, root), ""};
    if (kind == "preset") return parse_preset(doc, root);
    throw SchemaError(at(root, "kind"), "unknown kind '" + kind + "' (expected modal, quasipoly or preset)");
}

LoadedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open model file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    json doc;
    try {
        doc = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", std::string("invalid JSON: ") + e.what());
    }
    LoadedModel model = parse_model(doc);
    model.digest = digest_bytes(bytes);
    return model;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json modal_to_json(const ModalSystem& system) {
    json modes = json::array();
    for (const auto& m : system.modes())
        modes.push_back({{"lambda", complex_to_json(m.lambda())},
                         {"chain_lengths", m.chain_lengths()},
                         {"input_coupling", matrix_to_json(m.input_coupling())}});
    return {{"schema_version", kSchemaVersion},
            {"kind", "modal"},
            {"input_dim", system.input_dim()},
            {"expansion_time", system.expansion_time()},
            {"minimality_interval", system.minimality_interval()},
            {"interval_estimated", system.interval_estimated()},
            {"modes", std::move(modes)}};
}

json quasipoly_to_json(const QuasiPolyModel& model) {
    json a0 = json::array(), a = json::array();
    for (const auto& m : model.q.neutral_coeffs()) a0.push_back(matrix_to_json(m));
    for (const auto& m : model.q.retarded_coeffs()) a.push_back(matrix_to_json(m));
    json doc = {{"schema_version", kSchemaVersion}, {"kind", "quasipoly"},     {"dim", model.q.dim()},
                {"delays", model.q.delays()},       {"neutral_coeffs", a0},    {"retarded_coeffs", a}};
    if (model.region)
        doc["region"] = {model.region->re_min, model.region->re_max, model.region->im_min, model.region->im_max};
    if (!model.couplings.empty()) {
        json c = json::array();
        for (const auto& m : model.couplings) c.push_back(matrix_to_json(m));
        doc["couplings"] = std::move(c);
    }
    return doc;
}

std::string digest_bytes(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace modalctl

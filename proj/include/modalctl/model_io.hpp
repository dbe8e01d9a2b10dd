#pragma once

// Versioned JSON model files (schema_version 1).
//
//   {"schema_version": 1, "kind": "modal", "input_dim": r,
//    "expansion_time": T, "minimality_interval": nu,
//    "modes": [{"lambda": [re, im], "chain_lengths": [..],
//               "input_coupling": [[[re, im], ...], ...]}, ...]}
//
//   {"schema_version": 1, "kind": "quasipoly", "dim": n, "delays": [0, ...],
//    "neutral_coeffs": [M_0, ...], "retarded_coeffs": [M_0, ...],
//    "region": [re_min, re_max, im_min, im_max],      (optional)
//    "couplings": [C_root1, ...]}                     (optional)
//
//   {"schema_version": 1, "kind": "preset", "preset": "wave" | "ode" | "neutral",
//    "params": {...}}
//
// Complex numbers are [re, im] pairs, matrices row-major nested arrays.
// Coupling rows follow the chain layout of SpectralMode: the last row of each
// chain block is the adjoint eigenvector row.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "modalctl/quasipoly.hpp"
#include "modalctl/spectral_core.hpp"

namespace modalctl {

inline constexpr int kSchemaVersion = 1;

struct QuasiPolyModel {
    QuasiPolynomial q;
    std::optional<Rect> region;
    std::vector<CMatrix> couplings;  // one block per root in spectral order
};

struct LoadedModel {
    std::string kind;    // "modal", "quasipoly" or "preset"
    std::string preset;  // preset name when kind == "preset"
    std::variant<ModalSystem, QuasiPolyModel> value;
    std::string digest;

    bool is_modal() const { return std::holds_alternative<ModalSystem>(value); }
};

LoadedModel parse_model(const nlohmann::json& doc);
LoadedModel load_model(const std::filesystem::path& path);

nlohmann::json complex_to_json(Complex z);
nlohmann::json matrix_to_json(const CMatrix& m);
nlohmann::json modal_to_json(const ModalSystem& system);
nlohmann::json quasipoly_to_json(const QuasiPolyModel& model);

/// FNV-1a 64-bit digest of raw bytes, as "fnv1a64:<hex>".
std::string digest_bytes(const std::string& bytes);

}  // namespace modalctl

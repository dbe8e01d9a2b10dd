#pragma once

// JSON views of analysis results. Keys are emitted in sorted order by the
// json object type, so equal inputs give byte-identical output.

#include <vector>

#include "json.hpp"
#include "modalctl/attainable.hpp"
#include "modalctl/controllability.hpp"
#include "modalctl/minimality.hpp"
#include "modalctl/quasipoly.hpp"

namespace modalctl {

nlohmann::json roots_to_json(const std::vector<RootCluster>& roots);
nlohmann::json exponential_type_to_json(const ExponentialTypeEstimate& est);
nlohmann::json spectrum_to_json(const ModalSystem& system);
nlohmann::json controllability_to_json(const ControllabilityReport& report);
nlohmann::json independence_to_json(const IndependenceReport& report);
nlohmann::json rvector_to_json(const RVector& v);

}  // namespace modalctl

#pragma once

#include <json.hpp>

#include "depthwork/derivation.hpp"
#include "depthwork/witness.hpp"

namespace depthwork {

using nlohmann::json;

// a letter is either its generator symbol "g<k>" in the ideal's order or
// an array of 1-based images with 0 for undefined
PartialMap map_from_json(const json& j, const Ideal& ideal);
json map_to_json(const PartialMap& f);
std::string symbol_of(const PartialMap& f, const Ideal& ideal);

json derivation_to_json(const Derivation& d);
// throws UsageError on malformed input
Derivation derivation_from_json(const json& j);

json report_to_json(const InvarianceReport& r);

}  // namespace depthwork

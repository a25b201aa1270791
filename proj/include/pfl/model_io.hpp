#pragma once

#include <string>

#include <json.hpp>

#include "pfl/kripke.hpp"

namespace pfl {

/// {"worlds": n, "rel_p": [[i,j],...], "rel_f": [[i,j],...], "valuation": {"i": [...]}}
nlohmann::json to_json(const Model& m);
/// Throws std::invalid_argument on a malformed document or out-of-range world.
Model model_from_json(const nlohmann::json& j);

/// Graphviz rendering: rel_p solid, rel_f dashed, valuation in node labels.
std::string to_dot(const Model& m, std::optional<std::size_t> designated = std::nullopt);

}  // namespace pfl

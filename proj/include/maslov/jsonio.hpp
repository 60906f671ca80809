#pragma once

#include <json.hpp>

#include "maslov/games.hpp"
#include "maslov/tournaments.hpp"
#include "maslov/types.hpp"

namespace maslov {

using Json = nlohmann::ordered_json;

// {"constants": [...], "unnamed": k, "relations": {"R": [[...]]}} with elements as integers
// 1..k or constant names. Adds "arities" always, and "defined" for partial structures.
Json structure_to_json(const Structure& A);
// Relations missing from sig are rejected; without sig the signature is read from the
// document (arities from "arities" or from the first tuple).
Structure structure_from_json(const Json& j, const Signature* sig = nullptr);

// {"vertices": N, "vertex_colours": [...], "arcs": [[u, v, label], ...]}
Json tournament_to_json(const ColourfulView& t);
ColourfulTournament tournament_from_json(const Json& j);

// {"max_grade": G, "members": [structure, ...]}
Json type_set_to_json(const OuterTypeSet& beta);
OuterTypeSet type_set_from_json(const Json& j, const Signature* sig = nullptr);

Json position_to_json(const Position& p);
Position position_from_json(const Json& j, const Signature& sig);
// [{"key": key of the position moved from, "to": position}, ...] in key order
Json strategy_to_json(const StrategyTable& w);
StrategyTable strategy_from_json(const Json& j, const Signature& sig);

}  // namespace maslov

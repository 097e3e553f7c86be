#pragma once

// JSON wire formats. Field names are stable; see schemas/ for the documents
// the CLI outputs are validated against.

#include <utility>

#include <json.hpp>

#include "addrep/bounds.hpp"
#include "addrep/extract.hpp"
#include "addrep/numset.hpp"
#include "addrep/walkgraph.hpp"

namespace addrep {

nlohmann::json to_json(const RepCountWindow& window);

// Trace and pair table travel as one document:
// {x, m, a[], b[], steps[{k, blocks, count}], pairs[{i, j, c, d} |
//  {i, j, violation: true, n}], checks{regime{count, bound, within},
//  threshold, log}}
nlohmann::json to_json(const ExtractionTrace& trace, const RepPairTable& table);
std::pair<ExtractionTrace, RepPairTable> trace_from_json(const nlohmann::json& j);

// {verdict: "even_walk"|"none", walk: [v, e, v, e, ...]|null,
//  components: [{v, e, excess, parity}]}
nlohmann::json to_json(const WalkVerdict& verdict);

nlohmann::json to_json(const BoundReport& report);

nlohmann::json to_json(const VerifyReport& report);

// {vertices: [...], edges: [[u, v], ...]} — the JSON alternative to the
// "V E" text format.
MultiGraph graph_from_json(const nlohmann::json& j);

} // namespace addrep

#pragma once

#include <iosfwd>
#include <string>

#include "memnet/graph.hpp"
#include "memnet/h2.hpp"
#include "memnet/search.hpp"
#include "memnet/simulate.hpp"
#include "memnet/stability.hpp"

namespace memnet {

/// JSON serializers (compact, schema-stable). Numbers use shortest-roundtrip
/// formatting, so repeated runs produce byte-identical output.
std::string to_json(const H2Report& report);
std::string to_json(const SimResult& result);
std::string to_json(const ConsensusRegion& region);
std::string to_json(const DepthSearchResult& result);
std::string to_json(const ParamSearchResult& result);
std::string to_json(const BetaSweep& sweep);
std::string graph_json(const WeightedGraph& g);

/// CSV writers. Headers are fixed; reference values are emitted as '#'
/// comment lines before the header. Doubles are written with 17 significant
/// digits.
void write_csv(const H2Report& report, std::ostream& out);
void write_csv(const ConsensusRegion& region, std::ostream& out);      // alpha,beta,stable
void write_csv(const DepthSearchResult& result, std::ostream& out);    // theta,h2
void write_csv(const ParamSearchResult& result, std::ostream& out);    // alpha,beta,h2,stable
void write_csv(const BetaSweep& sweep, std::ostream& out);             // beta,optimal_theta,h2
void write_disagreement_csv(const std::vector<double>& trajectory, std::ostream& out);  // t,disagreement

}  // namespace memnet

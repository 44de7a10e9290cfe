#pragma once

#include "perco/chain.hpp"
#include "perco/inequalities.hpp"
#include "perco/oracle.hpp"

#include "json.hpp"

#include <string>

namespace perco {

nlohmann::json to_json(const Path& p);
nlohmann::json to_json(const std::vector<Site>& sites);
nlohmann::json to_json(const PathDistribution& d);
nlohmann::json to_json(const DominanceResult& r);
nlohmann::json to_json(const ClaimReport& r);
nlohmann::json to_json(const EstimateReport& e);
nlohmann::json to_json(const InequalityReport& r);
nlohmann::json to_json(const Corollary63Report& r);
nlohmann::json to_json(const ChainEstimateReport& r);

std::string to_csv(const PathDistribution& d);
std::string to_csv(const ClaimReport& r);
std::string to_csv(const InequalityReport& r);
std::string to_csv(const Corollary63Report& r);
std::string to_csv(const ChainEstimateReport& r);

/// Slab picture: level 0 at the top, open units solid, closed dashed, the
/// leftmost open path in blue and the rightmost in red (one purple path when
/// they coincide).
std::string render_svg(const Configuration& config, const std::vector<Site>& a, const std::vector<Site>& b,
                       const Region& region);

}  // namespace perco

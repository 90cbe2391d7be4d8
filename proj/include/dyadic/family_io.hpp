#pragma once

#include "dyadic/grid.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace dyadic {

// Malformed input; `where` is the JSON pointer of the offending element.
class FamilyParseError : public std::runtime_error {
  public:
    FamilyParseError(const std::string& where, const std::string& message)
        : std::runtime_error(where + ": " + message), where_(where) {}
    const std::string& where() const { return where_; }

  private:
    std::string where_;
};

struct Family {
    std::size_t dimension = 0;
    std::vector<GridRep> grids;
};

nlohmann::json grid_to_json(const GridRep& rep);
GridRep grid_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json family_to_json(const Family& family);

// `require_complete` enforces the d+1 grid count needed by certification;
// derived collections (projections) may carry any count.
Family family_from_json(const nlohmann::json& j, bool require_complete = true);

Family load_family(const std::string& path, bool require_complete = true);
void save_family(const Family& family, const std::string& path);

}  // namespace dyadic

#include "dyadic/family_io.hpp"

#include <fstream>

namespace dyadic {

namespace {

std::uint64_t parse_base(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !j.is_number_integer()) {
        throw FamilyParseError(where, "expected an integer base");
    }
    const std::int64_t b = j.get<std::int64_t>();
    if (b < 2) throw FamilyParseError(where, "base must be >= 2");
    return static_cast<std::uint64_t>(b);
}

Rational parse_rational_at(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string()) throw FamilyParseError(where, "expected a rational string \"p/q\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw FamilyParseError(where, e.what());
    }
}

std::vector<std::vector<std::uint32_t>> parse_digit_rows(const nlohmann::json& j,
                                                         std::uint64_t base, std::size_t dim,
                                                         const std::string& where) {
    if (!j.is_array()) throw FamilyParseError(where, "expected an array of digit vectors");
    std::vector<std::vector<std::uint32_t>> rows;
    rows.reserve(j.size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        const std::string rwhere = where + "/" + std::to_string(r);
        const auto& row = j[r];
        if (!row.is_array() || row.size() != dim) {
            throw FamilyParseError(rwhere, "expected a digit vector of length " + std::to_string(dim));
        }
        std::vector<std::uint32_t> digits(dim);
        for (std::size_t s = 0; s < dim; ++s) {
            const std::string dwhere = rwhere + "/" + std::to_string(s);
            if (!row[s].is_number_integer() && !row[s].is_number_unsigned()) {
                throw FamilyParseError(dwhere, "expected an integer digit");
            }
            const std::int64_t v = row[s].get<std::int64_t>();
            if (v < 0 || static_cast<std::uint64_t>(v) >= base) {
                throw FamilyParseError(dwhere, "digit out of range [0, " + std::to_string(base - 1) + "]");
            }
            digits[s] = static_cast<std::uint32_t>(v);
        }
        rows.push_back(std::move(digits));
    }
    return rows;
}

}  // namespace

nlohmann::json grid_to_json(const GridRep& rep) {
    nlohmann::json j;
    j["base"] = rep.base;
    nlohmann::json delta = nlohmann::json::array();
    for (const auto& c : rep.origin) delta.push_back(to_string(c));
    j["delta"] = std::move(delta);
    j["digits"]["preperiod"] = rep.digits.preperiod;
    j["digits"]["period"] = rep.digits.period;
    j["label"] = rep.label;
    return j;
}

GridRep grid_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw FamilyParseError(where, "expected a grid object");
    for (const char* key : {"base", "delta", "digits"}) {
        if (!j.contains(key)) throw FamilyParseError(where, std::string("missing \"") + key + "\"");
    }
    GridRep rep;
    rep.base = parse_base(j["base"], where + "/base");

    const auto& delta = j["delta"];
    if (!delta.is_array() || delta.empty()) {
        throw FamilyParseError(where + "/delta", "expected a nonempty array of rationals");
    }
    for (std::size_t s = 0; s < delta.size(); ++s) {
        rep.origin.push_back(parse_rational_at(delta[s], where + "/delta/" + std::to_string(s)));
    }

    const auto& digits = j["digits"];
    if (!digits.is_object() || !digits.contains("period")) {
        throw FamilyParseError(where + "/digits", "expected {\"preperiod\": ..., \"period\": ...}");
    }
    rep.digits.base = rep.base;
    if (digits.contains("preperiod")) {
        rep.digits.preperiod =
            parse_digit_rows(digits["preperiod"], rep.base, rep.origin.size(), where + "/digits/preperiod");
    }
    rep.digits.period =
        parse_digit_rows(digits["period"], rep.base, rep.origin.size(), where + "/digits/period");
    if (rep.digits.period.empty()) {
        throw FamilyParseError(where + "/digits/period", "period must be nonempty");
    }

    rep.label = j.value("label", std::string());
    return rep;
}

nlohmann::json family_to_json(const Family& family) {
    nlohmann::json j;
    j["dimension"] = family.dimension;
    nlohmann::json grids = nlohmann::json::array();
    for (const auto& g : family.grids) grids.push_back(grid_to_json(g));
    j["grids"] = std::move(grids);
    return j;
}

Family family_from_json(const nlohmann::json& j, bool require_complete) {
    if (!j.is_object()) throw FamilyParseError("", "expected a family object");
    if (!j.contains("dimension")) throw FamilyParseError("/dimension", "missing");
    if (!j.contains("grids")) throw FamilyParseError("/grids", "missing");
    if (!j["dimension"].is_number_integer() && !j["dimension"].is_number_unsigned()) {
        throw FamilyParseError("/dimension", "expected an integer");
    }
    Family family;
    const std::int64_t d = j["dimension"].get<std::int64_t>();
    if (d < 1) throw FamilyParseError("/dimension", "must be >= 1");
    family.dimension = static_cast<std::size_t>(d);

    const auto& grids = j["grids"];
    if (!grids.is_array()) throw FamilyParseError("/grids", "expected an array");
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const std::string where = "/grids/" + std::to_string(i);
        GridRep rep = grid_from_json(grids[i], where);
        if (rep.dimension() != family.dimension) {
            throw FamilyParseError(where + "/delta", "dimension mismatch with family");
        }
        if (rep.label.empty()) rep.label = "G" + std::to_string(i + 1);
        family.grids.push_back(std::move(rep));
    }
    if (require_complete && family.grids.size() != family.dimension + 1) {
        throw FamilyParseError("/grids", "a family for R^" + std::to_string(family.dimension) +
                                             " needs exactly " + std::to_string(family.dimension + 1) +
                                             " grids, got " + std::to_string(family.grids.size()));
    }
    return family;
}

Family load_family(const std::string& path, bool require_complete) {
    std::ifstream in(path);
    if (!in) throw FamilyParseError(path, "cannot open file");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw FamilyParseError(path, e.what());
    }
    return family_from_json(j, require_complete);
}

void save_family(const Family& family, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << family_to_json(family).dump(2) << "\n";
}

}  // namespace dyadic

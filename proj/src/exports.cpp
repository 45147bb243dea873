#include "cml/exports.hpp"

#include "cml/errors.hpp"

namespace cml {

nlohmann::json catalog_to_json(const CircleCatalog& cat) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PeripheralCircle& c : cat.circles) {
        arr.push_back({{"id", c.id},
                       {"role", c.role == CircleRole::Outer ? "outer" : "hole"},
                       {"generation", c.generation},
                       {"anchor", {c.anchor_x().num, c.anchor_x().den, c.anchor_y().num, c.anchor_y().den}},
                       {"side", {c.side().num, c.side().den}}});
    }
    return arr;
}

nlohmann::json grid_to_json(const CellGrid& grid) {
    nlohmann::json j;
    j["schema"] = "grid/1";
    j["family"] = grid.spec.slug();
    j["level"] = grid.level;
    j["side"] = grid.side;
    const uint8_t start = grid.occ.empty() ? 0 : grid.occ.front();
    j["start"] = static_cast<int>(start);
    std::vector<long long> runs;
    uint8_t cur = start;
    long long len = 0;
    for (uint8_t v : grid.occ) {
        if (v == cur) {
            ++len;
        } else {
            runs.push_back(len);
            cur = v;
            len = 1;
        }
    }
    if (len > 0) runs.push_back(len);
    j["runs"] = std::move(runs);
    return j;
}

CellGrid grid_from_json(const nlohmann::json& j) {
    if (j.value("schema", "") != "grid/1") throw ConstraintViolation("not a grid/1 document");
    CellGrid grid;
    grid.level = j.at("level").get<int>();
    grid.side = j.at("side").get<long long>();
    grid.occ.reserve(static_cast<size_t>(grid.side) * grid.side);
    uint8_t cur = static_cast<uint8_t>(j.at("start").get<int>());
    for (long long len : j.at("runs").get<std::vector<long long>>()) {
        grid.occ.insert(grid.occ.end(), static_cast<size_t>(len), cur);
        cur = cur ? 0 : 1;
    }
    if (static_cast<long long>(grid.occ.size()) != grid.side * grid.side)
        throw ConstraintViolation("run lengths do not fill the grid");
    return grid;
}

} // namespace cml

#pragma once

#include <json.hpp>

#include "cml/catalog.hpp"
#include "cml/grid.hpp"

namespace cml {

// array of {id, role, generation, anchor: [num, den, num, den], side: [num, den]}
nlohmann::json catalog_to_json(const CircleCatalog& cat);

// run-length-encoded occupancy bitmap, row-major from the lower-left cell
nlohmann::json grid_to_json(const CellGrid& grid);
CellGrid grid_from_json(const nlohmann::json& j);

} // namespace cml

#pragma once

#include <string>
#include <vector>

#include "cml/catalog.hpp"
#include "cml/grid.hpp"

namespace cml {

// Deterministic SVG: integer coordinates at the level-k scale, occupied cells
// as merged horizontal runs, peripheral circles as outlined rects, optional
// weight heat coloring with a legend. Byte-stable for fixed inputs.
std::string render_svg(const CellGrid& grid, const CircleCatalog& catalog,
                       const std::vector<double>* rho = nullptr);

} // namespace cml

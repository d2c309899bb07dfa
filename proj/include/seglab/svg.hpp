#pragma once

#include <string>
#include <vector>

#include "seglab/grid.hpp"

namespace seglab {

// Cell heatmap of a 2D field with axis box, corner coordinate labels, a
// colorbar legend, and an optional nodal-set overlay drawn as black dots.
// Grids above 120 cells per axis are average-pooled down for output size.
void svg_heatmap(const ScalarField& u, const std::string& title,
                 const std::vector<Pt>& overlay, const std::string& path);

// Line plot of every component of a 1D field set, one colored polyline per
// component, overlay points drawn on the zero line.
void svg_lineplot(const FieldSet& f, const std::string& title,
                  const std::vector<Pt>& overlay, const std::string& path);

}  // namespace seglab

/// @file initial_data.hpp
/// @brief Piecewise-constant initial densities built from simple shapes.
#pragma once

#include <string>
#include <vector>

#include "tissue/grid.hpp"

namespace tissue {

struct Shape {
    enum class Kind { Rect, Disk, Annulus };
    Kind kind = Kind::Rect;
    int tissue = 1;       ///< 1 or 2
    double value = 0.9;   ///< density painted inside the shape
    // Rect: [a, b] x [c, d]. Disk: centre (a, b), radius c. Annulus: centre (a, b), radii c < d.
    double a = 0, b = 0, c = 0, d = 0;

    [[nodiscard]] bool contains(double x, double y) const;
    friend bool operator==(const Shape&, const Shape&) = default;
};

struct InitialDensities {
    ScalarField n1;
    ScalarField n2;
};

/// Later shapes overwrite earlier ones cell by cell (cell-centre membership).
[[nodiscard]] InitialDensities paint(const GridSpec& g, const std::vector<Shape>& shapes);

/// Named shape sets: "fig3" (central tissue 1 between two tissue-2 stripes in
/// the lower half, density 0.9), "fig3-limit" (same geometry, density 1),
/// "concentric" (tissue-1 disk r < 0.3 inside a tissue-2 annulus 0.3 <= r < 0.6),
/// "disk" (single tissue-1 disk r < 0.5). Throws std::invalid_argument for unknown names.
[[nodiscard]] std::vector<Shape> initial_preset(const std::string& name);
[[nodiscard]] std::vector<std::string> initial_preset_names();

}  // namespace tissue

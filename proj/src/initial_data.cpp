#include "tissue/initial_data.hpp"

#include <stdexcept>

namespace tissue {

bool Shape::contains(double x, double y) const {
    switch (kind) {
        case Kind::Rect:
            return x >= a && x <= b && y >= c && y <= d;
        case Kind::Disk:
            return (x - a) * (x - a) + (y - b) * (y - b) < c * c;
        case Kind::Annulus: {
            const double r2 = (x - a) * (x - a) + (y - b) * (y - b);
            return r2 >= c * c && r2 < d * d;
        }
    }
    return false;
}

InitialDensities paint(const GridSpec& g, const std::vector<Shape>& shapes) {
    InitialDensities out{ScalarField(g), ScalarField(g)};
    for (const Shape& s : shapes) {
        if (s.tissue != 1 && s.tissue != 2) throw std::invalid_argument("shape tissue must be 1 or 2");
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (!s.contains(g.xc(i), g.yc(j))) continue;
                (s.tissue == 1 ? out.n1 : out.n2)(i, j) = s.value;
                (s.tissue == 1 ? out.n2 : out.n1)(i, j) = 0.0;
            }
        }
    }
    return out;
}

namespace {

std::vector<Shape> stripes(double value) {
    using K = Shape::Kind;
    return {
        {K::Rect, 1, value, -2.0 / 3.0, 2.0 / 3.0, -1.0, 0.0},
        {K::Rect, 2, value, -1.0, -2.0 / 3.0, -1.0, 0.0},
        {K::Rect, 2, value, 2.0 / 3.0, 1.0, -1.0, 0.0},
    };
}

}  // namespace

std::vector<Shape> initial_preset(const std::string& name) {
    using K = Shape::Kind;
    if (name == "fig3") return stripes(0.9);
    if (name == "fig3-limit") return stripes(1.0);
    if (name == "concentric") {
        return {{K::Disk, 1, 1.0, 0.0, 0.0, 0.3, 0.0}, {K::Annulus, 2, 1.0, 0.0, 0.0, 0.3, 0.6}};
    }
    if (name == "disk") return {{K::Disk, 1, 1.0, 0.0, 0.0, 0.5, 0.0}};
    throw std::invalid_argument("unknown initial preset '" + name + "'");
}

std::vector<std::string> initial_preset_names() { return {"fig3", "fig3-limit", "concentric", "disk"}; }

}  // namespace tissue

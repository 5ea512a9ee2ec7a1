#include "tissue/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tissue::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const ScalarField& f) {
    const GridSpec& g = f.spec();
    os << "# nx ny hx hy x_min y_min\n";
    os << "# " << g.nx << ' ' << g.ny << ' ' << format_double(g.hx()) << ' ' << format_double(g.hy())
       << ' ' << format_double(g.x_min) << ' ' << format_double(g.y_min) << '\n';
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) os << ',';
            os << format_double(f(i, j));
        }
        os << '\n';
    }
}

void write_csv(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(os, f);
}

ScalarField read_csv(std::istream& is) {
    std::string names, dims;
    if (!std::getline(is, names) || !std::getline(is, dims) || dims.empty() || dims[0] != '#') {
        throw std::runtime_error("field csv: missing header");
    }
    std::istringstream hs(dims.substr(1));
    GridSpec g;
    double hx = 0, hy = 0;
    if (!(hs >> g.nx >> g.ny >> hx >> hy >> g.x_min >> g.y_min)) {
        throw std::runtime_error("field csv: malformed header '" + dims + "'");
    }
    g.x_max = g.x_min + g.nx * hx;
    g.y_max = g.y_min + g.ny * hy;
    ScalarField f(g);
    std::string line;
    for (int j = 0; j < g.ny; ++j) {
        if (!std::getline(is, line)) throw std::runtime_error("field csv: too few rows");
        std::istringstream ls(line);
        std::string cell;
        for (int i = 0; i < g.nx; ++i) {
            if (!std::getline(ls, cell, ',')) throw std::runtime_error("field csv: short row " + std::to_string(j));
            try {
                f(i, j) = std::stod(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("field csv: bad number '" + cell + "'");
            }
        }
    }
    return f;
}

ScalarField read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_csv(is);
}

void write_vtk(std::ostream& os, const std::vector<NamedScalar>& scalars, const VectorField* velocity,
               const std::string& velocity_name) {
    if (scalars.empty() && !velocity) throw std::invalid_argument("write_vtk: nothing to write");
    const GridSpec& g = scalars.empty() ? velocity->spec() : scalars.front().field->spec();
    os << "# vtk DataFile Version 3.0\n"
       << "tissue fields\n"
       << "ASCII\n"
       << "DATASET STRUCTURED_POINTS\n"
       << "DIMENSIONS " << g.nx << ' ' << g.ny << " 1\n"
       << "ORIGIN " << format_double(g.xc(0)) << ' ' << format_double(g.yc(0)) << " 0\n"
       << "SPACING " << format_double(g.hx()) << ' ' << format_double(g.hy()) << " 1\n"
       << "POINT_DATA " << g.cell_count() << '\n';
    for (const auto& s : scalars) {
        if (!(s.field->spec() == g)) throw std::invalid_argument("write_vtk: grid mismatch for " + s.name);
        os << "SCALARS " << s.name << " double 1\nLOOKUP_TABLE default\n";
        for (double x : s.field->values()) os << format_double(x) << '\n';
    }
    if (velocity) {
        const CellVelocity c = to_cell_centres(*velocity);
        os << "VECTORS " << velocity_name << " double\n";
        for (std::size_t k = 0; k < g.cell_count(); ++k) {
            os << format_double(c.x.values()[k]) << ' ' << format_double(c.y.values()[k]) << " 0\n";
        }
    }
}

void write_vtk(const std::string& path, const std::vector<NamedScalar>& scalars, const VectorField* velocity,
               const std::string& velocity_name) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_vtk(os, scalars, velocity, velocity_name);
}

}  // namespace tissue::io

/// @file field_io.hpp
/// @brief CSV and legacy-VTK serialization of grid fields.
///
/// CSV layout:
///   # nx ny hx hy x_min y_min
///   # <nx> <ny> <hx> <hy> <x_min> <y_min>
///   then ny rows (j = 0 first) of nx comma-separated values.
/// Numbers are written with 17 significant digits so reading a file back
/// reproduces every value bit for bit.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tissue/grid.hpp"

namespace tissue::io {

void write_csv(std::ostream& os, const ScalarField& f);
void write_csv(const std::string& path, const ScalarField& f);

/// Throws std::runtime_error on malformed input.
ScalarField read_csv(std::istream& is);
ScalarField read_csv(const std::string& path);

struct NamedScalar {
    std::string name;
    const ScalarField* field;
};

/// STRUCTURED_POINTS dataset with one point per cell centre.
/// `velocity` (optional) is written as cell-centred VECTORS.
void write_vtk(std::ostream& os, const std::vector<NamedScalar>& scalars,
               const VectorField* velocity = nullptr, const std::string& velocity_name = "velocity");
void write_vtk(const std::string& path, const std::vector<NamedScalar>& scalars,
               const VectorField* velocity = nullptr, const std::string& velocity_name = "velocity");

/// Shortest round-trip decimal form used across all CSV writers.
std::string format_double(double x);

}  // namespace tissue::io

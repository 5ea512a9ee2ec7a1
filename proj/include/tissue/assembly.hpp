/// @file assembly.hpp
/// @brief Sparse-matrix forms of the grid operators.
///
/// Face unknowns are ordered [u faces | v faces] using VectorField's own
/// indexing, so a VectorField maps to one contiguous vector.
#pragma once

#include "tissue/grid.hpp"
#include "tissue/solver.hpp"

namespace tissue {

enum class FaceComponent { U, V };

[[nodiscard]] std::size_t u_face_count(const GridSpec& g);
[[nodiscard]] std::size_t v_face_count(const GridSpec& g);

/// -Laplacian on one velocity component with homogeneous Dirichlet data.
/// Boundary-normal faces get empty rows; tangential walls use odd ghost reflection.
[[nodiscard]] SparseMatrix face_neg_laplacian(const GridSpec& g, FaceComponent c);

/// Cells x (u faces + v faces) divergence matrix.
[[nodiscard]] SparseMatrix divergence_matrix(const GridSpec& g);

/// Scalar -Laplacian on cells (zero-flux or zero-value ghosts).
[[nodiscard]] SparseMatrix cell_neg_laplacian(const GridSpec& g, BoundaryKind bc);

/// Cells x cells matrix of s -> div(n_face grad s) with zero-flux walls.
/// n is averaged arithmetically onto faces.
[[nodiscard]] SparseMatrix weighted_diffusion(const ScalarField& n);

[[nodiscard]] Vector pack(const VectorField& v);
[[nodiscard]] VectorField unpack(const GridSpec& g, const Eigen::Ref<const Vector>& x);
[[nodiscard]] Vector pack(const ScalarField& s);
[[nodiscard]] ScalarField unpack_scalar(const GridSpec& g, const Eigen::Ref<const Vector>& x);

/// True for faces on the domain boundary (normal velocity pinned to zero).
[[nodiscard]] bool is_boundary_u(const GridSpec& g, int i);
[[nodiscard]] bool is_boundary_v(const GridSpec& g, int j);

}  // namespace tissue

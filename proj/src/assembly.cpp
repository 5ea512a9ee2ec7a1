#include "tissue/assembly.hpp"

#include <vector>

namespace tissue {

using Triplet = Eigen::Triplet<double>;

std::size_t u_face_count(const GridSpec& g) { return std::size_t(g.nx + 1) * std::size_t(g.ny); }
std::size_t v_face_count(const GridSpec& g) { return std::size_t(g.nx) * std::size_t(g.ny + 1); }

bool is_boundary_u(const GridSpec& g, int i) { return i == 0 || i == g.nx; }
bool is_boundary_v(const GridSpec& g, int j) { return j == 0 || j == g.ny; }

SparseMatrix face_neg_laplacian(const GridSpec& g, FaceComponent c) {
    // Work in (along, across) coordinates: "along" is the component direction,
    // whose end faces sit on the wall; "across" walls are handled by ghosts.
    const bool is_u = c == FaceComponent::U;
    const int na = is_u ? g.nx : g.ny;  // cells along the component direction
    const int nc = is_u ? g.ny : g.nx;
    const double ha2 = is_u ? g.hx() * g.hx() : g.hy() * g.hy();
    const double hc2 = is_u ? g.hy() * g.hy() : g.hx() * g.hx();
    auto index = [&](int a, int b) -> int {
        // u(i,j): i along x (a), j across (b). v(i,j): j along y (a), i across (b).
        return is_u ? int(std::size_t(b) * std::size_t(g.nx + 1) + std::size_t(a))
                    : int(std::size_t(a) * std::size_t(g.nx) + std::size_t(b));
    };
    const int n = is_u ? int(u_face_count(g)) : int(v_face_count(g));
    std::vector<Triplet> t;
    t.reserve(std::size_t(n) * 5);
    for (int b = 0; b < nc; ++b) {
        for (int a = 1; a < na; ++a) {
            const int row = index(a, b);
            double diag = 2.0 / ha2 + 2.0 / hc2;
            if (a - 1 > 0) t.emplace_back(row, index(a - 1, b), -1.0 / ha2);
            if (a + 1 < na) t.emplace_back(row, index(a + 1, b), -1.0 / ha2);
            if (b > 0) {
                t.emplace_back(row, index(a, b - 1), -1.0 / hc2);
            } else {
                diag += 1.0 / hc2;
            }
            if (b + 1 < nc) {
                t.emplace_back(row, index(a, b + 1), -1.0 / hc2);
            } else {
                diag += 1.0 / hc2;
            }
            t.emplace_back(row, row, diag);
        }
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SparseMatrix divergence_matrix(const GridSpec& g) {
    const int nu = int(u_face_count(g));
    const double ihx = 1.0 / g.hx(), ihy = 1.0 / g.hy();
    std::vector<Triplet> t;
    t.reserve(g.cell_count() * 4);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = j * g.nx + i;
            const int uw = j * (g.nx + 1) + i;
            t.emplace_back(row, uw, -ihx);
            t.emplace_back(row, uw + 1, ihx);
            const int vs = nu + j * g.nx + i;
            t.emplace_back(row, vs, -ihy);
            t.emplace_back(row, vs + g.nx, ihy);
        }
    }
    SparseMatrix m(int(g.cell_count()), nu + int(v_face_count(g)));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SparseMatrix cell_neg_laplacian(const GridSpec& g, BoundaryKind bc) {
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    const double ghost = bc == BoundaryKind::ZeroFlux ? 1.0 : -1.0;
    std::vector<Triplet> t;
    t.reserve(g.cell_count() * 5);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = j * g.nx + i;
            double diag = 2.0 * ihx2 + 2.0 * ihy2;
            auto nb = [&](bool inside, int col, double w) {
                if (inside) {
                    t.emplace_back(row, col, -w);
                } else {
                    diag -= ghost * w;
                }
            };
            nb(i > 0, row - 1, ihx2);
            nb(i < g.nx - 1, row + 1, ihx2);
            nb(j > 0, row - g.nx, ihy2);
            nb(j < g.ny - 1, row + g.nx, ihy2);
            t.emplace_back(row, row, diag);
        }
    }
    SparseMatrix m(int(g.cell_count()), int(g.cell_count()));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

SparseMatrix weighted_diffusion(const ScalarField& n) {
    const GridSpec& g = n.spec();
    const double ihx2 = 1.0 / (g.hx() * g.hx()), ihy2 = 1.0 / (g.hy() * g.hy());
    std::vector<Triplet> t;
    t.reserve(g.cell_count() * 5);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int row = j * g.nx + i;
            double diag = 0.0;
            auto nb = [&](bool inside, int col, double nface, double w) {
                if (!inside) return;
                t.emplace_back(row, col, nface * w);
                diag -= nface * w;
            };
            const double c = n(i, j);
            nb(i > 0, row - 1, i > 0 ? 0.5 * (c + n(i - 1, j)) : 0.0, ihx2);
            nb(i < g.nx - 1, row + 1, i < g.nx - 1 ? 0.5 * (c + n(i + 1, j)) : 0.0, ihx2);
            nb(j > 0, row - g.nx, j > 0 ? 0.5 * (c + n(i, j - 1)) : 0.0, ihy2);
            nb(j < g.ny - 1, row + g.nx, j < g.ny - 1 ? 0.5 * (c + n(i, j + 1)) : 0.0, ihy2);
            t.emplace_back(row, row, diag);
        }
    }
    SparseMatrix m(int(g.cell_count()), int(g.cell_count()));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Vector pack(const VectorField& v) {
    const auto u = v.u_values();
    const auto w = v.v_values();
    Vector x(Eigen::Index(u.size() + w.size()));
    for (std::size_t k = 0; k < u.size(); ++k) x[Eigen::Index(k)] = u[k];
    for (std::size_t k = 0; k < w.size(); ++k) x[Eigen::Index(u.size() + k)] = w[k];
    return x;
}

VectorField unpack(const GridSpec& g, const Eigen::Ref<const Vector>& x) {
    VectorField v(g);
    auto u = v.u_values();
    auto w = v.v_values();
    for (std::size_t k = 0; k < u.size(); ++k) u[k] = x[Eigen::Index(k)];
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = x[Eigen::Index(u.size() + k)];
    return v;
}

Vector pack(const ScalarField& s) {
    const auto vals = s.values();
    Vector x(Eigen::Index(vals.size()));
    for (std::size_t k = 0; k < vals.size(); ++k) x[Eigen::Index(k)] = vals[k];
    return x;
}

ScalarField unpack_scalar(const GridSpec& g, const Eigen::Ref<const Vector>& x) {
    ScalarField s(g);
    auto vals = s.values();
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = x[Eigen::Index(k)];
    return s;
}

}  // namespace tissue

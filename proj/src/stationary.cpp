#include "tissue/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>

#include "tissue/field_io.hpp"

namespace tissue {

const char* interface_name(InterfaceClass c) {
    switch (c) {
        case InterfaceClass::OneTwo: return "tissue1_tissue2";
        case InterfaceClass::OneOutside: return "tissue1_outside";
        case InterfaceClass::TwoOutside: return "tissue2_outside";
    }
    return "?";
}

const char* quantity_name(JumpQuantity q) {
    switch (q) {
        case JumpQuantity::Pressure: return "pressure";
        case JumpQuantity::VelocityV1: return "v1";
        case JumpQuantity::VelocityV2: return "v2";
        case JumpQuantity::NormalGradientV1: return "beta1_dnu_v1";
        case JumpQuantity::NormalGradientV2: return "beta2_dnu_v2";
    }
    return "?";
}

// ---------------------------------------------------------------- partition

namespace {

bool is_indicator(double x) { return x == 0.0 || x == 1.0; }

}  // namespace

DomainPartition::DomainPartition(ScalarField chi1, ScalarField chi2, bool require_margin)
    : chi1_(std::move(chi1)), chi2_(std::move(chi2)) {
    if (!(chi1_.spec() == chi2_.spec())) throw InvalidPartition("partition: indicator grids differ");
    const GridSpec& g = chi1_.spec();
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double a = chi1_(i, j), b = chi2_(i, j);
            const std::string at = " at cell (" + std::to_string(i) + ", " + std::to_string(j) + ")";
            if (!is_indicator(a) || !is_indicator(b)) throw InvalidPartition("partition: indicator not 0/1" + at);
            if (a * b != 0.0) throw InvalidPartition("partition: tissue regions overlap" + at);
            if (a + b == 0.0) continue;
            (a == 1.0 ? cells1_ : cells2_) += 1;
            if (require_margin && (i < 2 || j < 2 || i >= g.nx - 2 || j >= g.ny - 2)) {
                throw InvalidPartition("partition: tissue within 2 cells of the box boundary" + at);
            }
        }
    }

    const std::size_t nu = u_face_count(g);
    auto add = [&](FaceComponent c, int fi, int fj, int li, int lj, int ri, int rj) {
        const Region l = region(li, lj), r = region(ri, rj);
        if (l == r) return;
        InterfaceFace f;
        f.component = c;
        f.i = fi;
        f.j = fj;
        f.index = c == FaceComponent::U ? std::size_t(fj) * std::size_t(g.nx + 1) + std::size_t(fi)
                                        : nu + std::size_t(fj) * std::size_t(g.nx) + std::size_t(fi);
        // The origin side is tissue 1 when present, otherwise tissue 2.
        const Region origin = (l == Region::One || r == Region::One) ? Region::One : Region::Two;
        const Region other = l == origin ? r : l;
        f.cls = origin == Region::Two ? InterfaceClass::TwoOutside
                : other == Region::Two ? InterfaceClass::OneTwo
                                       : InterfaceClass::OneOutside;
        const bool left_is_origin = l == origin;
        f.a_i = left_is_origin ? li : ri;
        f.a_j = left_is_origin ? lj : rj;
        f.b_i = left_is_origin ? ri : li;
        f.b_j = left_is_origin ? rj : lj;
        const double sgn = left_is_origin ? 1.0 : -1.0;
        if (c == FaceComponent::U) {
            f.nx = sgn;
            f.x = g.xf(fi);
            f.y = g.yc(fj);
        } else {
            f.ny = sgn;
            f.x = g.xc(fi);
            f.y = g.yf(fj);
        }
        faces_.push_back(f);
    };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 1; i < g.nx; ++i) add(FaceComponent::U, i, j, i - 1, j, i, j);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) add(FaceComponent::V, i, j, i, j - 1, i, j);

    auto smoothed = [&](Region r, int i, int j) {
        int count = 0;
        for (int b = -1; b <= 1; ++b)
            for (int a = -1; a <= 1; ++a)
                count += region(std::clamp(i + a, 0, g.nx - 1), std::clamp(j + b, 0, g.ny - 1)) == r;
        return count / 9.0;
    };
    for (auto& f : faces_) {
        const Region r = f.cls == InterfaceClass::TwoOutside ? Region::Two : Region::One;
        double gx = 0.0, gy = 0.0;
        for (auto [ci, cj] : {std::pair{f.a_i, f.a_j}, std::pair{f.b_i, f.b_j}}) {
            gx += smoothed(r, ci + 1, cj) - smoothed(r, ci - 1, cj);
            gy += smoothed(r, ci, cj + 1) - smoothed(r, ci, cj - 1);
        }
        const double norm = std::hypot(gx, gy);
        f.gx = norm > 0.0 ? -gx / norm : f.nx;
        f.gy = norm > 0.0 ? -gy / norm : f.ny;
    }
}

Region DomainPartition::region(int i, int j) const {
    if (chi1_(i, j) == 1.0) return Region::One;
    if (chi2_(i, j) == 1.0) return Region::Two;
    return Region::Outside;
}

std::size_t DomainPartition::cell_count(Region r) const {
    const std::size_t total = std::size_t(spec().nx) * std::size_t(spec().ny);
    switch (r) {
        case Region::One: return cells1_;
        case Region::Two: return cells2_;
        case Region::Outside: return total - cells1_ - cells2_;
    }
    return 0;
}

std::vector<InterfaceFace> DomainPartition::faces(InterfaceClass c) const {
    std::vector<InterfaceFace> out;
    for (const auto& f : faces_)
        if (f.cls == c) out.push_back(f);
    return out;
}

DomainPartition DomainPartition::swapped() const { return DomainPartition(chi2_, chi1_, false); }

DomainPartition partition_from_levels(const ScalarField& level1, const ScalarField& level2, bool require_margin) {
    if (!(level1.spec() == level2.spec())) throw InvalidPartition("partition: level grids differ");
    ScalarField chi1(level1.spec()), chi2(level1.spec());
    const auto a = level1.values();
    const auto b = level2.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const bool in1 = a[k] > 0.5, in2 = b[k] > 0.5;
        if (in1 && (!in2 || a[k] >= b[k])) {
            chi1.values()[k] = 1.0;
        } else if (in2) {
            chi2.values()[k] = 1.0;
        }
    }
    return DomainPartition(std::move(chi1), std::move(chi2), require_margin);
}

// ---------------------------------------------------------------- assembly

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void append(Triplets& t, const SparseMatrix& m, Eigen::Index row0, Eigen::Index col0) {
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) t.emplace_back(row0 + it.row(), col0 + it.col(), it.value());
}

SparseMatrix face_stiffness(const GridSpec& g) {
    const SparseMatrix ku = face_neg_laplacian(g, FaceComponent::U);
    const SparseMatrix kv = face_neg_laplacian(g, FaceComponent::V);
    const Eigen::Index nu = ku.rows(), n = ku.rows() + kv.rows();
    Triplets t;
    append(t, ku, 0, 0);
    append(t, kv, nu, nu);
    SparseMatrix k(n, n);
    k.setFromTriplets(t.begin(), t.end());
    return k;
}

std::vector<bool> interior_faces(const GridSpec& g) {
    std::vector<bool> out;
    out.reserve(u_face_count(g) + v_face_count(g));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i <= g.nx; ++i) out.push_back(!is_boundary_u(g, i));
    for (int j = 0; j <= g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) out.push_back(!is_boundary_v(g, j));
    return out;
}

// D^T diag(w) D over all faces.
SparseMatrix weighted_grad_div(const SparseMatrix& d, const ScalarField& chi, double g) {
    Vector w = pack(chi) / g;
    const SparseMatrix dt = d.transpose();
    return SparseMatrix(dt * w.asDiagonal() * d);
}

// Drop rows/columns of boundary faces.
SparseMatrix interior_block(SparseMatrix m, const std::vector<bool>& interior) {
    m.prune([&](Eigen::Index r, Eigen::Index c, double) { return interior[std::size_t(r)] && interior[std::size_t(c)]; });
    return m;
}

void require_linear_growth(const ModelParams& params) {
    if (params.growth1 || params.growth2) {
        throw std::invalid_argument("stationary system: requires the linear growth laws g_i (p_i* - s)");
    }
}

ScalarField tissue_q(const DomainPartition& part, const ScalarField& q) {
    if (!(q.spec() == part.spec())) throw std::invalid_argument("stationary system: q grid mismatch");
    ScalarField out(part.spec());
    const auto qa = q.values();
    for (std::size_t k = 0; k < qa.size(); ++k) {
        const bool inside = part.chi1().values()[k] + part.chi2().values()[k] > 0.0;
        if (!inside) continue;
        if (!std::isfinite(qa[k])) throw std::invalid_argument("stationary system: q must be finite on the tissues");
        out.values()[k] = qa[k];
    }
    return out;
}

Vector forcing(const ScalarField& potential) {
    VectorField f = gradient(potential);
    f *= -1.0;
    return pack(f);
}

}  // namespace

StationarySystem assemble_weak_form(const DomainPartition& part, const ModelParams& params, const ScalarField& q,
                                    bool single_species) {
    params.validate();
    require_linear_growth(params);
    if (single_species && !part.single_species()) {
        throw std::invalid_argument("single-species system: tissue 2 region must be empty");
    }
    const GridSpec& g = part.spec();
    const ScalarField qt = tissue_q(part, q);
    const std::vector<bool> interior = interior_faces(g);
    const auto n = Eigen::Index(interior.size());
    const SparseMatrix k = face_stiffness(g);
    const SparseMatrix d = divergence_matrix(g);
    SparseMatrix id(n, n);
    id.setIdentity();
    const SparseMatrix w1 = weighted_grad_div(d, part.chi1(), params.g1);
    const SparseMatrix w2 = weighted_grad_div(d, part.chi2(), params.g2);

    SparseMatrix a11 = interior_block(SparseMatrix(params.beta1 * k + id + w1), interior);
    SparseMatrix a22 = interior_block(SparseMatrix(params.beta2 * k + id + w2), interior);

    // Tissue potentials with the constant parts moved to the right-hand side.
    ScalarField pot1(g), pot2(g);
    for (std::size_t c = 0; c < pot1.values().size(); ++c) {
        const double c1 = part.chi1().values()[c], c2 = part.chi2().values()[c], qc = qt.values()[c];
        pot1.values()[c] = params.p1_star * c1 + (params.p2_star + qc) * c2;
        pot2.values()[c] = params.p2_star * c2 + (params.p1_star + qc) * c1;
    }

    StationarySystem sys;
    sys.faces_per_field = std::size_t(n);
    sys.single_species = single_species;
    Triplets t;
    if (single_species) {
        append(t, a11, 0, 0);
        for (Eigen::Index r = 0; r < n; ++r)
            if (!interior[std::size_t(r)]) t.emplace_back(r, r, 1.0);
        sys.matrix.resize(n, n);
        sys.rhs = forcing(pot1);
    } else {
        append(t, a11, 0, 0);
        append(t, interior_block(w2, interior), 0, n);
        append(t, interior_block(w1, interior), n, 0);
        append(t, a22, n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            if (interior[std::size_t(r)]) continue;
            t.emplace_back(r, r, 1.0);
            t.emplace_back(n + r, n + r, 1.0);
        }
        sys.matrix.resize(2 * n, 2 * n);
        sys.rhs.resize(2 * n);
        sys.rhs << forcing(pot1), forcing(pot2);
    }
    sys.matrix.setFromTriplets(t.begin(), t.end());
    sys.matrix.makeCompressed();
    return sys;
}

double gradient_energy(const VectorField& v) {
    const GridSpec& g = v.spec();
    const Vector x = pack(v);
    return x.dot(face_stiffness(g) * x) * g.cell_area();
}

double form_value(const DomainPartition& part, const ModelParams& params, const VectorField& v1,
                  const VectorField& v2) {
    const ScalarField d1 = divergence(v1), d2 = divergence(v2);
    double cross = 0.0;
    const auto c1 = part.chi1().values(), c2 = part.chi2().values();
    for (std::size_t k = 0; k < c1.size(); ++k) {
        const double a = d1.values()[k], b = d2.values()[k];
        cross += c1[k] / params.g1 * (a * a + a * b) + c2[k] / params.g2 * (b * b + a * b);
    }
    cross *= part.spec().cell_area();
    return params.beta1 * gradient_energy(v1) + params.beta2 * gradient_energy(v2) + inner(v1, v1) + inner(v2, v2) +
           cross;
}

// ---------------------------------------------------------------- solve

namespace {

StationarySolution finish(const DomainPartition& part, const ModelParams& params, const ScalarField& qt,
                          VectorField v1, VectorField v2, double residual, bool single) {
    StationarySolution sol;
    const ScalarField d1 = divergence(v1), d2 = divergence(v2);
    sol.p = ScalarField(part.spec());
    for (std::size_t k = 0; k < sol.p.values().size(); ++k) {
        sol.p.values()[k] = (params.p1_star - d1.values()[k] / params.g1) * part.chi1().values()[k] +
                            (params.p2_star - d2.values()[k] / params.g2) * part.chi2().values()[k];
    }
    sol.v1 = std::move(v1);
    sol.v2 = std::move(v2);
    sol.q = qt;
    sol.coercivity = coercivity_check(params);
    sol.residual = residual;
    sol.single_species = single;
    return sol;
}

}  // namespace

StationarySolution solve_stationary(const DomainPartition& part, const ModelParams& params, const ScalarField& q,
                                    const SolverConfig& cfg) {
    cfg.validate();
    const StationarySystem sys = assemble_weak_form(part, params, q);
    const Vector x = solve_lu(sys.matrix, sys.rhs, cfg.rel_tol);
    const auto n = Eigen::Index(sys.faces_per_field);
    const GridSpec& g = part.spec();
    return finish(part, params, tissue_q(part, q), unpack(g, x.head(n)), unpack(g, x.tail(n)),
                  relative_residual(sys.matrix, x, sys.rhs), false);
}

StationarySolution solve_stationary_single(const DomainPartition& part, const ModelParams& params,
                                           const SolverConfig& cfg) {
    cfg.validate();
    const ScalarField zero(part.spec());
    const StationarySystem sys = assemble_weak_form(part, params, zero, true);
    const Vector x = solve_lu(sys.matrix, sys.rhs, cfg.rel_tol);
    return finish(part, params, zero, unpack(part.spec(), x), VectorField(part.spec()),
                  relative_residual(sys.matrix, x, sys.rhs), true);
}

// ---------------------------------------------------------------- traces and jumps

double JumpRecord::jump_norm() const {
    return components == 1 ? std::abs(jump[0]) : std::hypot(jump[0], jump[1]);
}

double JumpRecord::residual_norm() const {
    return components == 1 ? std::abs(residual[0]) : std::hypot(residual[0], residual[1]);
}

JumpSummary JumpTable::summary(InterfaceClass c) const {
    JumpSummary s;
    for (const auto& r : records) {
        if (r.cls != c) continue;
        ++s.faces;
        if (!r.traceable) continue;
        ++s.traced;
        const double j = r.jump_norm(), e = r.residual_norm();
        s.mean_abs_jump += j;
        s.mean_abs_residual += e;
        s.max_abs_jump = std::max(s.max_abs_jump, j);
        s.max_abs_residual = std::max(s.max_abs_residual, e);
    }
    if (s.traced) {
        s.mean_abs_jump /= double(s.traced);
        s.mean_abs_residual /= double(s.traced);
    }
    return s;
}

namespace {

struct Trace {
    double value;
    double dnu;  ///< derivative along the face normal
};

// One-sided traces at an interface face, extrapolated from the cells of each side
// along the normal. Derivatives are taken along the normal on both sides.
class Tracer {
public:
    Tracer(const DomainPartition& part, const InterfaceFace& face, TraceOrder order)
        : part_(part), order_(order) {
        const GridSpec& g = part.spec();
        h_ = face.component == FaceComponent::U ? g.hx() : g.hy();
        di_ = int(face.nx);
        dj_ = int(face.ny);
        a_ok_ = side_ok(face.a_i, face.a_j, -di_, -dj_);
        b_ok_ = side_ok(face.b_i, face.b_j, di_, dj_);
        face_ = face;
    }

    [[nodiscard]] bool ok() const { return a_ok_ && b_ok_; }

    [[nodiscard]] Trace origin(const ScalarField& f) const { return trace(f, face_.a_i, face_.a_j, -di_, -dj_, -1.0); }
    [[nodiscard]] Trace target(const ScalarField& f) const { return trace(f, face_.b_i, face_.b_j, di_, dj_, 1.0); }

private:
    [[nodiscard]] int samples() const { return order_ == TraceOrder::Linear ? 2 : 3; }

    [[nodiscard]] bool side_ok(int i, int j, int si, int sj) const {
        const GridSpec& g = part_.spec();
        const Region r = part_.region(i, j);
        for (int k = 1; k < samples(); ++k) {
            const int ii = i + k * si, jj = j + k * sj;
            if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny || part_.region(ii, jj) != r) return false;
        }
        return true;
    }

    [[nodiscard]] Trace trace(const ScalarField& f, int i, int j, int si, int sj, double sign) const {
        const double f0 = f(i, j), f1 = f(i + si, j + sj);
        if (order_ == TraceOrder::Linear) return {1.5 * f0 - 0.5 * f1, sign * (f1 - f0) / h_};
        const double f2 = f(i + 2 * si, j + 2 * sj);
        return {(15.0 * f0 - 10.0 * f1 + 3.0 * f2) / 8.0, sign * (-2.0 * f0 + 3.0 * f1 - f2) / h_};
    }

    const DomainPartition& part_;
    TraceOrder order_;
    InterfaceFace face_{};
    double h_ = 1.0;
    int di_ = 0, dj_ = 0;
    bool a_ok_ = false, b_ok_ = false;
};

struct CellFields {
    CellVelocity v1, v2;
    ScalarField p, pot1, pot2, q;
};

CellFields cell_fields(const StationarySolution& sol, const DomainPartition& part) {
    CellFields c{to_cell_centres(sol.v1), to_cell_centres(sol.v2), sol.p, sol.p, sol.p, sol.q};
    for (std::size_t k = 0; k < c.p.values().size(); ++k) {
        const double qk = sol.q.values()[k];
        c.pot1.values()[k] += qk * part.chi2().values()[k];
        c.pot2.values()[k] += qk * part.chi1().values()[k];
    }
    return c;
}

JumpRecord make_record(const InterfaceFace& f, JumpQuantity quantity, const CellFields& c, const ModelParams& params,
                       TraceOrder order, const DomainPartition& part) {
    JumpRecord r;
    r.cls = f.cls;
    r.quantity = quantity;
    r.face_index = f.index;
    r.x = f.x;
    r.y = f.y;
    r.nx = f.nx;
    r.ny = f.ny;
    r.components = quantity == JumpQuantity::Pressure ? 1 : 2;
    const Tracer tr(part, f, order);
    r.traceable = tr.ok();
    if (!r.traceable) return r;
    const std::array<double, 2> nu{f.nx, f.ny};
    const std::array<double, 2> n{f.gx, f.gy};
    const double ne = n[0] * nu[0] + n[1] * nu[1];

    switch (quantity) {
        case JumpQuantity::Pressure: {
            const bool two = f.cls == InterfaceClass::TwoOutside;
            const CellVelocity& v = two ? c.v2 : c.v1;
            const double beta = two ? params.beta2 : params.beta1;
            const double flux = beta * ((tr.origin(v.x).dnu - tr.target(v.x).dnu) * n[0] +
                                        (tr.origin(v.y).dnu - tr.target(v.y).dnu) * n[1]) / ne;
            const double qcorr = f.cls == InterfaceClass::OneTwo ? tr.target(c.q).value : 0.0;
            r.left[0] = tr.origin(c.p).value;
            r.right[0] = tr.target(c.p).value;
            r.jump[0] = r.left[0] - r.right[0];
            r.predicted[0] = flux + qcorr;
            r.residual[0] = r.jump[0] - r.predicted[0];
            break;
        }
        case JumpQuantity::VelocityV1:
        case JumpQuantity::VelocityV2: {
            const CellVelocity& v = quantity == JumpQuantity::VelocityV1 ? c.v1 : c.v2;
            const ScalarField* comp[2] = {&v.x, &v.y};
            for (int k = 0; k < 2; ++k) {
                r.left[k] = tr.origin(*comp[k]).value;
                r.right[k] = tr.target(*comp[k]).value;
                r.jump[k] = r.left[k] - r.right[k];
                r.predicted[k] = 0.0;
                r.residual[k] = r.jump[k];
            }
            break;
        }
        case JumpQuantity::NormalGradientV1:
        case JumpQuantity::NormalGradientV2: {
            const bool one = quantity == JumpQuantity::NormalGradientV1;
            const CellVelocity& v = one ? c.v1 : c.v2;
            const ScalarField& pot = one ? c.pot1 : c.pot2;
            const double beta = one ? params.beta1 : params.beta2;
            const double pjump = tr.origin(pot).value - tr.target(pot).value;
            const ScalarField* comp[2] = {&v.x, &v.y};
            for (int k = 0; k < 2; ++k) {
                r.left[k] = beta * tr.origin(*comp[k]).dnu;
                r.right[k] = beta * tr.target(*comp[k]).dnu;
                r.jump[k] = r.left[k] - r.right[k];
                r.predicted[k] = pjump * n[std::size_t(k)] * ne;
                r.residual[k] = r.jump[k] - r.predicted[k];
            }
            break;
        }
    }
    return r;
}

}  // namespace

JumpTable measure_jump(const StationarySolution& sol, const DomainPartition& part, const ModelParams& params,
                       JumpQuantity quantity, TraceOrder order) {
    if (!(sol.p.spec() == part.spec())) throw std::invalid_argument("measure_jump: grid mismatch");
    const CellFields c = cell_fields(sol, part);
    JumpTable t;
    t.records.reserve(part.faces().size());
    for (const auto& f : part.faces()) t.records.push_back(make_record(f, quantity, c, params, order, part));
    return t;
}

void write_jump_csv(std::ostream& os, const JumpTable& table) {
    using io::format_double;
    os << "interface,face_index,x,y,nx,ny,quantity,left_trace,right_trace,jump,predicted_jump,residual\n";
    for (const auto& r : table.records) {
        for (int k = 0; k < r.components; ++k) {
            std::string q = quantity_name(r.quantity);
            if (r.components == 2) q += k == 0 ? "_x" : "_y";
            os << interface_name(r.cls) << ',' << r.face_index << ',' << format_double(r.x) << ','
               << format_double(r.y) << ',' << format_double(r.nx) << ',' << format_double(r.ny) << ',' << q;
            if (r.traceable) {
                const auto i = std::size_t(k);
                os << ',' << format_double(r.left[i]) << ',' << format_double(r.right[i]) << ','
                   << format_double(r.jump[i]) << ',' << format_double(r.predicted[i]) << ','
                   << format_double(r.residual[i]) << '\n';
            } else {
                os << ",,,,,\n";
            }
        }
    }
}

std::vector<TransmissionResidual> verify_transmission(const StationarySolution& sol, const DomainPartition& part,
                                                      const ModelParams& params, TraceOrder order) {
    std::vector<TransmissionResidual> out;
    auto add = [&](InterfaceClass cls, const std::string& name, const JumpTable& t, bool use_jump) {
        TransmissionResidual row;
        row.cls = cls;
        row.condition = name;
        for (const auto& r : t.records) {
            if (r.cls != cls || !r.traceable) continue;
            const double e = use_jump ? r.jump_norm() : r.residual_norm();
            ++row.faces;
            row.max_residual = std::max(row.max_residual, e);
            row.mean_residual += e;
        }
        if (row.faces) row.mean_residual /= double(row.faces);
        out.push_back(row);
    };
    const JumpTable flux1 = measure_jump(sol, part, params, JumpQuantity::NormalGradientV1, order);
    const JumpTable cont1 = measure_jump(sol, part, params, JumpQuantity::VelocityV1, order);
    JumpTable flux2, cont2;
    if (!sol.single_species) {
        flux2 = measure_jump(sol, part, params, JumpQuantity::NormalGradientV2, order);
        cont2 = measure_jump(sol, part, params, JumpQuantity::VelocityV2, order);
    }
    for (InterfaceClass cls : {InterfaceClass::OneTwo, InterfaceClass::OneOutside, InterfaceClass::TwoOutside}) {
        const std::vector<InterfaceFace> faces = part.faces(cls);
        if (faces.empty()) continue;
        add(cls, "flux_v1", flux1, false);
        if (!sol.single_species) add(cls, "flux_v2", flux2, false);
        add(cls, "continuity_v1", cont1, true);
        if (!sol.single_species) add(cls, "continuity_v2", cont2, true);
        if (cls == InterfaceClass::OneTwo && !sol.single_species) {
            TransmissionResidual row;
            row.cls = cls;
            row.condition = "normal_velocity";
            const Vector a = pack(sol.v1), b = pack(sol.v2);
            for (const auto& f : faces) {
                const double e = std::abs(a[Eigen::Index(f.index)] - b[Eigen::Index(f.index)]);
                ++row.faces;
                row.max_residual = std::max(row.max_residual, e);
                row.mean_residual += e;
            }
            row.mean_residual /= double(row.faces);
            out.push_back(row);
        }
    }
    return out;
}

void write_transmission_csv(std::ostream& os, const std::vector<TransmissionResidual>& rows) {
    using io::format_double;
    os << "interface,condition,faces,max_residual,mean_residual\n";
    for (const auto& r : rows) {
        os << interface_name(r.cls) << ',' << r.condition << ',' << r.faces << ',' << format_double(r.max_residual)
           << ',' << format_double(r.mean_residual) << '\n';
    }
}

}  // namespace tissue

/// @file config.hpp
/// @brief Run configuration: a flat `key = value` text with `[section]` headers.
///
/// Grammar (one item per line; `#` starts a comment; blank lines ignored):
///
///   preset = "fig3-esvm"          top level, optional, must come first; later keys override it
///   model = ESVM | VM | L-ESVM | L-VM | STATIONARY | STATIONARY-1SPECIES
///   [grid]     nx, ny, x_min, x_max, y_min, y_max
///   [params]   beta1, beta2, g1, g2, p1_star, p2_star, eps, m, alpha
///   [time]     dt, cfl, t_end, max_halvings, reaction_limit, record_every
///   [velocity] law = dirichlet | gradient, repulsion = true | false
///   [solver]   method = cg | direct, rel_tol, max_iter
///   [initial]  preset = <shape preset>, or repeated
///              shape = rect|disk|annulus <tissue> <value> <a> <b> <c> [<d>]
///   [q]        source = zero | uniform | file, value, path
///   [output]   dir
///   [sweep]    eps, m, alpha, beta1, beta2, g1, g2 = comma-separated lists of equal length
///
/// Values may be quoted with double quotes. Unknown sections or keys are errors.
/// L-models forbid eps, m, alpha; VM forbids m and alpha; stationary models forbid the
/// [time] section and need shape values of 1. Limit models threshold the shapes at 1/2.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tissue/constitutive.hpp"
#include "tissue/dynamics.hpp"
#include "tissue/grid.hpp"
#include "tissue/initial_data.hpp"
#include "tissue/solver.hpp"

namespace tissue {

enum class RunModel { ESVM, VM, LESVM, LVM, Stationary, StationarySingle };

[[nodiscard]] const char* run_model_name(RunModel m);
[[nodiscard]] bool is_limit_model(RunModel m);
[[nodiscard]] bool is_stationary_model(RunModel m);

struct QSource {
    enum class Kind { Zero, Uniform, File };
    Kind kind = Kind::Zero;
    double value = 0.0;
    std::string path;

    friend bool operator==(const QSource&, const QSource&) = default;
};

struct SweepBlock {
    std::vector<double> eps, m, alpha, beta1, beta2, g1, g2;

    [[nodiscard]] bool empty() const;
    /// Common length of the non-empty lists (0 when empty).
    [[nodiscard]] std::size_t rows() const;

    friend bool operator==(const SweepBlock&, const SweepBlock&) = default;
};

struct RunConfig {
    std::string preset;  ///< informational: the preset the config started from
    RunModel model = RunModel::ESVM;
    GridSpec grid{};
    ModelParams params{};
    /// dt is the requested (dynamics) or largest (limit models) step; cfl applies to both.
    double dt = 1e-3;
    double cfl = 0.4;
    double t_end = 0.1;
    int max_halvings = 20;
    double reaction_limit = 0.5;
    int record_every = 10;
    VelocityLaw law = VelocityLaw::DirichletWalls;
    bool repulsion = true;
    SolverConfig solver{};
    std::string initial_preset;  ///< empty when shapes are given inline
    std::vector<Shape> shapes;
    QSource q{};
    std::string out_dir = "out";
    SweepBlock sweep{};

    [[nodiscard]] std::vector<Shape> initial_shapes() const;
    [[nodiscard]] StepControl step_control() const;
    [[nodiscard]] DynamicsOptions dynamics_options() const;
};

[[nodiscard]] bool same_config(const RunConfig& a, const RunConfig& b);

/// All violations found in a config text, in line order.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> errors);
    [[nodiscard]] const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Throws ConfigError listing every problem.
[[nodiscard]] RunConfig parse_config(const std::string& text);

/// Canonical text: every key explicit, parse(serialize(c)) reproduces c.
[[nodiscard]] std::string serialize_config(const RunConfig& c);

/// Hex digest of the canonical text without the preset name and output directory.
[[nodiscard]] std::string config_hash(const RunConfig& c);

[[nodiscard]] std::vector<std::string> preset_names();
/// Throws ConfigError for an unknown name.
[[nodiscard]] RunConfig preset_config(const std::string& name);

}  // namespace tissue

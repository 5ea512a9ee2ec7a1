#include <doctest.h>

#include <algorithm>
#include <string>

#include "tissue/config.hpp"

using namespace tissue;

namespace {

bool mentions(const ConfigError& e, const std::string& what) {
    return std::any_of(e.errors().begin(), e.errors().end(),
                       [&](const std::string& s) { return s.find(what) != std::string::npos; });
}

ConfigError error_of(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected a ConfigError");
    return ConfigError({});
}

const char* kCustom = R"(
model = ESVM
[grid]
nx = 24
ny = 20
x_min = -2
[params]
beta1 = 0.25
beta2 = 0.125
g1 = 1.5
g2 = 2
p1_star = 4
p2_star = 8
eps = 0.05
m = 60
alpha = 5e-4
[time]
dt = 2e-3
t_end = 0.01   # short
record_every = 2
[velocity]
law = gradient
repulsion = false
[initial]
shape = rect 1 0.9 -0.5 0.5 -1 0
shape = disk 2 0.8 0.5 0.5 0.25
shape = annulus 2 0.7 0 0 0.6 0.8
[output]
dir = "runs/custom #1"
[sweep]
eps = 0.1, 0.05
m = 30, 60
alpha = 1e-3, 5e-4
)";

}  // namespace

TEST_CASE("preset reference gives the reference tissue parameters") {
    const RunConfig c = parse_config("preset = \"fig3-esvm\"\n");
    CHECK(c.model == RunModel::ESVM);
    CHECK(c.params.beta1 == 0.5);
    CHECK(c.params.beta2 == 0.1);
    CHECK(c.params.eps == 0.1);
    CHECK(c.params.m == 30.0);
    CHECK(c.params.alpha == 1e-3);
    CHECK(growth_rate(0.0, Tissue::One, c.params) == 5.0);
    CHECK(growth_rate(2.0, Tissue::Two, c.params) == 8.0);
    CHECK(c.initial_preset == "fig3");
    CHECK(c.law == VelocityLaw::DirichletWalls);
    CHECK(c.solver.method == SolverMethod::Direct);

    CHECK(parse_config("preset = fig3-gradient-form").law == VelocityLaw::GradientPotential);
    CHECK(parse_config("preset = fig3-vm").model == RunModel::VM);
    const RunConfig l = parse_config("preset = fig3-lesvm");
    CHECK(l.model == RunModel::LESVM);
    CHECK(l.initial_preset == "fig3-limit");
    CHECK(l.q.kind == QSource::Kind::Zero);
}

TEST_CASE("later keys override the preset") {
    const RunConfig c = parse_config("preset = fig3-esvm\n[grid]\nnx = 64\nny = 64\n[params]\nbeta2 = 0.2\n");
    CHECK(c.grid.nx == 64);
    CHECK(c.params.beta2 == 0.2);
    CHECK(c.params.beta1 == 0.5);
    const ConfigError e = error_of("[grid]\nnx = 64\npreset = fig3-esvm\n");
    CHECK(mentions(e, "unknown key 'grid.preset'"));
    const ConfigError f = error_of("model = VM\npreset = fig3-esvm\n");
    CHECK(mentions(f, "preset must come before"));
}

TEST_CASE("empty input names every required key") {
    const ConfigError e = error_of("");
    for (const char* k : {"model", "grid.nx", "grid.ny", "initial.preset", "params.beta1", "params.beta2",
                          "params.g1", "params.g2", "params.p1_star", "params.p2_star", "time.t_end", "params.eps",
                          "params.m", "params.alpha"}) {
        CHECK_MESSAGE(mentions(e, "'" + std::string(k) + "'"), k);
    }
}

TEST_CASE("model-incompatible keys are rejected by name") {
    CHECK(mentions(error_of("preset = fig3-lesvm\nmodel = L-VM\n[params]\neps = 0.1\n"), "'params.eps'"));
    CHECK(mentions(error_of("preset = fig3-vm\n[params]\nm = 40\n"), "'params.m'"));
    CHECK(mentions(error_of("preset = fig3-lesvm\nmodel = STATIONARY\n[time]\nt_end = 1\n"), "'time.t_end'"));
    CHECK(mentions(error_of("preset = fig3-esvm\n[q]\nsource = uniform\nvalue = 1\n"), "'q.source'"));
    CHECK(mentions(error_of("preset = fig3-lesvm\nmodel = STATIONARY\n[initial]\nshape = rect 1 0.9 -1 1 -1 0\n"), "value 1"));
}

TEST_CASE("every violation is reported") {
    const ConfigError e = error_of("preset = fig3-esvm\n[grid]\nnx = many\ncolour = red\n[oops]\na = 1\n[params]\n"
                                   "beta1 = -1\nm = 0.5\n[time]\ndt = 0\n");
    CHECK(mentions(e, "line 3: grid.nx: expected an integer"));
    CHECK(mentions(e, "line 4: unknown key 'grid.colour'"));
    CHECK(mentions(e, "unknown section [oops]"));
    CHECK(mentions(e, "beta1"));
    CHECK(mentions(e, "m must be > 1"));
    CHECK(mentions(e, "dt"));
    CHECK(e.errors().size() >= 5);
    CHECK(mentions(error_of("preset = fig3-esvm\n[grid]\nnx = 8\nnx = 9\n"), "duplicate key 'grid.nx'"));
    CHECK(mentions(error_of("preset = fig3-esvm\n[sweep]\neps = 0.1, 0.05\nm = 30\n"), "equal lengths"));
    CHECK(mentions(error_of("preset = nope\n"), "unknown preset 'nope'"));
}

TEST_CASE("limit models default to the limit CFL number") {
    const RunConfig c = parse_config("preset = fig3-esvm\nmodel = L-VM\n");
    CHECK(c.cfl == 0.25);
    CHECK(mentions(error_of("preset = fig3-lesvm\n[time]\ncfl = 0.4\n"), "cfl_number"));
}

TEST_CASE("inline configuration parses") {
    const RunConfig c = parse_config(kCustom);
    CHECK(c.grid.nx == 24);
    CHECK(c.grid.x_min == -2.0);
    CHECK(c.params.g2 == 2.0);
    CHECK(c.t_end == 0.01);
    CHECK(c.record_every == 2);
    CHECK_FALSE(c.repulsion);
    CHECK(c.law == VelocityLaw::GradientPotential);
    REQUIRE(c.shapes.size() == 3);
    CHECK(c.shapes[1].kind == Shape::Kind::Disk);
    CHECK(c.shapes[1].c == 0.25);
    CHECK(c.shapes[2].d == 0.8);
    CHECK(c.out_dir == "runs/custom #1");
    CHECK(c.sweep.rows() == 2);
    CHECK(c.sweep.m[1] == 60.0);
}

TEST_CASE("parse and serialize round trip") {
    std::vector<std::string> texts{kCustom};
    for (const auto& name : preset_names()) texts.push_back("preset = " + name + "\n");
    texts.push_back("preset = fig3-lesvm\nmodel = STATIONARY\n[initial]\npreset = concentric\n[q]\nsource = uniform\n"
                    "value = 0.5\n");
    texts.push_back("preset = fig3-lesvm\nmodel = STATIONARY-1SPECIES\n[initial]\npreset = disk\n[q]\n");
    texts.back().resize(texts.back().size() - 4);
    for (const auto& text : texts) {
        const RunConfig a = parse_config(text);
        const std::string s1 = serialize_config(a);
        const RunConfig b = parse_config(s1);
        CHECK(same_config(a, b));
        CHECK(serialize_config(b) == s1);
        CHECK(b.preset == a.preset);
        CHECK(b.shapes == a.shapes);
        CHECK(b.sweep == a.sweep);
        CHECK(b.q == a.q);
    }
}

TEST_CASE("config hash follows the values, not the preset name") {
    const RunConfig a = parse_config("preset = fig3-esvm\n");
    RunConfig b = a;
    b.preset.clear();
    CHECK(config_hash(a) == config_hash(b));
    b.params.beta1 = 0.6;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(parse_config(serialize_config(a))) == config_hash(a));
}

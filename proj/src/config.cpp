#include "tissue/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tissue/field_io.hpp"
#include "tissue/freeboundary.hpp"

namespace tissue {

namespace {

struct ModelName {
    RunModel model;
    const char* name;
};

constexpr ModelName kModels[] = {
    {RunModel::ESVM, "ESVM"},           {RunModel::VM, "VM"},
    {RunModel::LESVM, "L-ESVM"},        {RunModel::LVM, "L-VM"},
    {RunModel::Stationary, "STATIONARY"}, {RunModel::StationarySingle, "STATIONARY-1SPECIES"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::optional<double> to_double(const std::string& s) {
    double x = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return x;
}

std::optional<int> to_int(const std::string& s) {
    int x = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

const char* shape_kind_name(Shape::Kind k) {
    switch (k) {
        case Shape::Kind::Rect: return "rect";
        case Shape::Kind::Disk: return "disk";
        case Shape::Kind::Annulus: return "annulus";
    }
    return "?";
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + io::format_double(v[k]);
    return out;
}

// The parser state: the config being built and the keys set explicitly by the text.
class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    RunConfig run() {
        std::istringstream is(text_);
        std::string raw;
        int line_no = 0;
        std::string section;
        bool any_key = false;
        while (std::getline(is, raw)) {
            ++line_no;
            line_ = line_no;
            std::string line = raw;
            // '#' outside quotes starts a comment.
            bool quoted = false;
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (line[k] == '"') quoted = !quoted;
                if (line[k] == '#' && !quoted) {
                    line.resize(k);
                    break;
                }
            }
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') {
                    error("malformed section header '" + line + "'");
                    continue;
                }
                section = trim(line.substr(1, line.size() - 2));
                if (!known_section(section)) error("unknown section [" + section + "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                error("expected 'key = value', got '" + line + "'");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = unquote(trim(line.substr(eq + 1)));
            if (section.empty() && key == "preset") {
                if (any_key) error("preset must come before any other key");
                load_preset(value);
            } else {
                assign(section, key, value);
            }
            any_key = true;
        }
        finish();
        if (!errors_.empty()) throw ConfigError(errors_);
        return c_;
    }

private:
    const std::string& text_;
    RunConfig c_{};
    std::set<std::string> set_;       // keys set by the text or the preset
    std::set<std::string> explicit_;  // keys set by the text
    std::vector<std::string> errors_;
    int line_ = 0;
    bool has_shapes_ = false;

    void error(const std::string& what) { errors_.push_back("line " + std::to_string(line_) + ": " + what); }
    void global_error(const std::string& what) { errors_.push_back(what); }

    static bool known_section(const std::string& s) {
        static const std::set<std::string> names{"grid", "params", "time", "velocity", "solver",
                                                 "initial", "q", "output", "sweep"};
        return names.count(s) > 0;
    }

    void load_preset(const std::string& name) {
        try {
            c_ = preset_config(name);
        } catch (const ConfigError&) {
            error("unknown preset '" + name + "'");
            return;
        }
        for (const char* k : {"model", "grid.nx", "grid.ny", "time.t_end", "params.beta1", "params.beta2", "params.g1",
                              "params.g2", "params.p1_star", "params.p2_star", "params.eps", "params.m",
                              "params.alpha", "initial.preset"}) {
            set_.insert(k);
        }
    }

    void number(const std::string& full, const std::string& v, double& out) {
        if (auto x = to_double(v)) {
            out = *x;
        } else {
            error(full + ": expected a number, got '" + v + "'");
        }
    }

    void integer(const std::string& full, const std::string& v, int& out) {
        if (auto x = to_int(v)) {
            out = *x;
        } else {
            error(full + ": expected an integer, got '" + v + "'");
        }
    }

    void list(const std::string& full, const std::string& v, std::vector<double>& out) {
        out.clear();
        for (const std::string& item : split(v, ',')) {
            if (auto x = to_double(item)) {
                out.push_back(*x);
            } else {
                error(full + ": expected a number, got '" + item + "'");
            }
        }
        if (out.empty()) error(full + ": empty list");
    }

    void assign(const std::string& section, const std::string& key, const std::string& v) {
        const std::string full = section.empty() ? key : section + "." + key;
        if (!section.empty() && !known_section(section)) return;  // already reported
        bool ok = true;
        auto& p = c_.params;
        if (section.empty() && key == "model") {
            const auto it = std::find_if(std::begin(kModels), std::end(kModels),
                                         [&](const ModelName& m) { return v == m.name; });
            if (it == std::end(kModels)) {
                error("model: unknown model '" + v + "'");
            } else {
                c_.model = it->model;
            }
        } else if (section == "grid") {
            if (key == "nx") integer(full, v, c_.grid.nx);
            else if (key == "ny") integer(full, v, c_.grid.ny);
            else if (key == "x_min") number(full, v, c_.grid.x_min);
            else if (key == "x_max") number(full, v, c_.grid.x_max);
            else if (key == "y_min") number(full, v, c_.grid.y_min);
            else if (key == "y_max") number(full, v, c_.grid.y_max);
            else ok = false;
        } else if (section == "params") {
            if (key == "beta1") number(full, v, p.beta1);
            else if (key == "beta2") number(full, v, p.beta2);
            else if (key == "g1") number(full, v, p.g1);
            else if (key == "g2") number(full, v, p.g2);
            else if (key == "p1_star") number(full, v, p.p1_star);
            else if (key == "p2_star") number(full, v, p.p2_star);
            else if (key == "eps") number(full, v, p.eps);
            else if (key == "m") number(full, v, p.m);
            else if (key == "alpha") number(full, v, p.alpha);
            else ok = false;
        } else if (section == "time") {
            if (key == "dt") number(full, v, c_.dt);
            else if (key == "cfl") number(full, v, c_.cfl);
            else if (key == "t_end") number(full, v, c_.t_end);
            else if (key == "max_halvings") integer(full, v, c_.max_halvings);
            else if (key == "reaction_limit") number(full, v, c_.reaction_limit);
            else if (key == "record_every") integer(full, v, c_.record_every);
            else ok = false;
        } else if (section == "velocity") {
            if (key == "law") {
                if (v == "dirichlet") c_.law = VelocityLaw::DirichletWalls;
                else if (v == "gradient") c_.law = VelocityLaw::GradientPotential;
                else error("velocity.law: expected dirichlet or gradient, got '" + v + "'");
            } else if (key == "repulsion") {
                if (v == "true") c_.repulsion = true;
                else if (v == "false") c_.repulsion = false;
                else error("velocity.repulsion: expected true or false, got '" + v + "'");
            } else {
                ok = false;
            }
        } else if (section == "solver") {
            if (key == "method") {
                if (v == "cg") c_.solver.method = SolverMethod::ConjugateGradient;
                else if (v == "direct") c_.solver.method = SolverMethod::Direct;
                else error("solver.method: expected cg or direct, got '" + v + "'");
            } else if (key == "rel_tol") {
                number(full, v, c_.solver.rel_tol);
            } else if (key == "max_iter") {
                integer(full, v, c_.solver.max_iter);
            } else {
                ok = false;
            }
        } else if (section == "initial") {
            if (key == "preset") {
                c_.initial_preset = v;
                c_.shapes.clear();
                has_shapes_ = false;
            } else if (key == "shape") {
                if (!has_shapes_) c_.shapes.clear();
                has_shapes_ = true;
                c_.initial_preset.clear();
                parse_shape(v);
            } else {
                ok = false;
            }
        } else if (section == "q") {
            if (key == "source") {
                if (v == "zero") c_.q.kind = QSource::Kind::Zero;
                else if (v == "uniform") c_.q.kind = QSource::Kind::Uniform;
                else if (v == "file") c_.q.kind = QSource::Kind::File;
                else error("q.source: expected zero, uniform or file, got '" + v + "'");
            } else if (key == "value") {
                number(full, v, c_.q.value);
            } else if (key == "path") {
                c_.q.path = v;
            } else {
                ok = false;
            }
        } else if (section == "output") {
            if (key == "dir") c_.out_dir = v;
            else ok = false;
        } else if (section == "sweep") {
            auto& s = c_.sweep;
            if (key == "eps") list(full, v, s.eps);
            else if (key == "m") list(full, v, s.m);
            else if (key == "alpha") list(full, v, s.alpha);
            else if (key == "beta1") list(full, v, s.beta1);
            else if (key == "beta2") list(full, v, s.beta2);
            else if (key == "g1") list(full, v, s.g1);
            else if (key == "g2") list(full, v, s.g2);
            else ok = false;
        } else {
            ok = false;
        }
        if (!ok) {
            error("unknown key '" + full + "'");
            return;
        }
        if (full != "initial.shape" && explicit_.count(full)) error("duplicate key '" + full + "'");
        set_.insert(full);
        explicit_.insert(full);
        if (full == "initial.shape") set_.insert("initial.preset");
    }

    void parse_shape(const std::string& v) {
        const std::vector<std::string> w = words(v);
        Shape s;
        std::size_t need = 0;
        if (!w.empty() && w[0] == "rect") {
            s.kind = Shape::Kind::Rect;
            need = 7;
        } else if (!w.empty() && w[0] == "disk") {
            s.kind = Shape::Kind::Disk;
            need = 6;
        } else if (!w.empty() && w[0] == "annulus") {
            s.kind = Shape::Kind::Annulus;
            need = 7;
        } else {
            error("initial.shape: expected rect, disk or annulus");
            return;
        }
        if (w.size() != need) {
            error("initial.shape: " + w[0] + " takes " + std::to_string(need - 1) + " values");
            return;
        }
        const auto tissue = to_int(w[1]);
        if (!tissue || (*tissue != 1 && *tissue != 2)) {
            error("initial.shape: tissue must be 1 or 2");
            return;
        }
        s.tissue = *tissue;
        double* slots[] = {&s.value, &s.a, &s.b, &s.c, &s.d};
        for (std::size_t k = 2; k < need; ++k) {
            const auto x = to_double(w[k]);
            if (!x) {
                error("initial.shape: expected a number, got '" + w[k] + "'");
                return;
            }
            *slots[k - 2] = *x;
        }
        c_.shapes.push_back(s);
    }

    void require(const std::string& key) {
        if (!set_.count(key)) global_error("missing required key '" + key + "'");
    }

    void forbid(const std::string& key, const std::string& why) {
        if (explicit_.count(key)) global_error("key '" + key + "' is not allowed " + why);
    }

    void finish() {
        line_ = 0;
        const RunModel m = c_.model;
        const std::string for_model = std::string("for model ") + run_model_name(m);
        require("model");
        require("grid.nx");
        require("grid.ny");
        require("initial.preset");
        for (const char* k : {"params.beta1", "params.beta2", "params.g1", "params.g2", "params.p1_star",
                              "params.p2_star"}) {
            require(k);
        }
        if (!is_stationary_model(m)) require("time.t_end");
        if (m == RunModel::ESVM) {
            require("params.eps");
            require("params.m");
            require("params.alpha");
        }
        if (m == RunModel::VM) require("params.eps");

        if (is_limit_model(m) || is_stationary_model(m)) {
            for (const char* k : {"params.eps", "params.m", "params.alpha", "sweep.eps", "sweep.m", "sweep.alpha"})
                forbid(k, for_model);
        }
        if (m == RunModel::VM) {
            for (const char* k : {"params.m", "params.alpha", "sweep.m", "sweep.alpha"}) forbid(k, for_model);
        }
        if (is_stationary_model(m)) {
            for (const char* k : {"time.dt", "time.cfl", "time.t_end", "time.max_halvings", "time.reaction_limit",
                                  "time.record_every"}) {
                forbid(k, for_model);
            }
        }
        if (is_limit_model(m) || is_stationary_model(m)) {
            for (const char* k : {"velocity.law", "velocity.repulsion", "sweep.beta1", "sweep.beta2", "sweep.g1",
                                  "sweep.g2"}) {
                forbid(k, for_model);
            }
            if (!explicit_.count("time.cfl") && is_limit_model(m)) c_.cfl = 0.25;
        }
        if (m == RunModel::ESVM || m == RunModel::VM || m == RunModel::LVM || m == RunModel::StationarySingle) {
            for (const char* k : {"q.source", "q.value", "q.path"}) forbid(k, for_model);
        }

        // Values.
        auto check = [&](const std::function<void()>& f) {
            try {
                f();
            } catch (const std::invalid_argument& e) {
                global_error(e.what());
            }
        };
        check([&] { c_.grid.validate(); });
        check([&] { c_.params.validate(); });
        check([&] { c_.solver.validate(); });
        if (!is_stationary_model(m)) {
            if (is_limit_model(m)) {
                check([&] {
                    LimitControl lc;
                    lc.cfl_number = c_.cfl;
                    lc.max_dt = c_.dt;
                    lc.t_end = c_.t_end;
                    lc.validate();
                });
            } else {
                check([&] { c_.step_control().validate(); });
            }
            if (c_.record_every < 1) global_error("time.record_every must be >= 1");
        }
        if (!c_.initial_preset.empty()) {
            check([&] { (void)initial_preset(c_.initial_preset); });
        }
        if (is_stationary_model(m)) {
            for (const Shape& s : c_.initial_shapes()) {
                if (s.value != 1.0) {
                    global_error(std::string("initial shapes must have value 1 ") + for_model);
                    break;
                }
            }
        }
        if (m == RunModel::StationarySingle) {
            for (const Shape& s : c_.initial_shapes())
                if (s.tissue == 2) global_error("STATIONARY-1SPECIES takes tissue-1 shapes only");
        }
        if (c_.q.kind == QSource::Kind::Uniform && !(c_.q.value >= 0.0))
            global_error("q.value must be >= 0");
        if (c_.q.kind == QSource::Kind::File && c_.q.path.empty()) global_error("q.path is required for source = file");
        if (!c_.sweep.empty()) {
            std::size_t len = 0;
            bool mismatch = false;
            for (const auto* l : {&c_.sweep.eps, &c_.sweep.m, &c_.sweep.alpha, &c_.sweep.beta1, &c_.sweep.beta2,
                                  &c_.sweep.g1, &c_.sweep.g2}) {
                if (l->empty()) continue;
                if (len && l->size() != len) mismatch = true;
                len = l->size();
            }
            if (mismatch) global_error("sweep lists must have equal lengths");
        }
        if (c_.out_dir.empty()) global_error("output.dir must not be empty");
    }
};

}  // namespace

const char* run_model_name(RunModel m) {
    for (const auto& e : kModels)
        if (e.model == m) return e.name;
    return "?";
}

bool is_limit_model(RunModel m) { return m == RunModel::LESVM || m == RunModel::LVM; }
bool is_stationary_model(RunModel m) { return m == RunModel::Stationary || m == RunModel::StationarySingle; }

bool SweepBlock::empty() const { return rows() == 0; }

std::size_t SweepBlock::rows() const {
    std::size_t n = 0;
    for (const auto* l : {&eps, &m, &alpha, &beta1, &beta2, &g1, &g2}) n = std::max(n, l->size());
    return n;
}

std::vector<Shape> RunConfig::initial_shapes() const {
    return initial_preset.empty() ? shapes : tissue::initial_preset(initial_preset);
}

StepControl RunConfig::step_control() const {
    StepControl s;
    s.dt = dt;
    s.cfl_number = cfl;
    s.t_end = t_end;
    s.model = model == RunModel::VM ? Model::VM : Model::ESVM;
    s.max_halvings = max_halvings;
    s.reaction_limit = reaction_limit;
    return s;
}

DynamicsOptions RunConfig::dynamics_options() const {
    DynamicsOptions o;
    o.repulsion = repulsion;
    o.law = law;
    o.solver = solver;
    return o;
}

bool same_config(const RunConfig& a, const RunConfig& b) { return serialize_config(a) == serialize_config(b); }

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::invalid_argument([&] {
          std::string s = "invalid configuration:";
          for (const auto& e : errors) s += "\n  " + e;
          return s;
      }()),
      errors_(std::move(errors)) {}

RunConfig parse_config(const std::string& text) { return Parser(text).run(); }

std::string serialize_config(const RunConfig& c) {
    using io::format_double;
    std::ostringstream os;
    const RunModel m = c.model;
    if (!c.preset.empty()) os << "preset = \"" << c.preset << "\"\n";
    os << "model = " << run_model_name(m) << "\n\n";
    os << "[grid]\nnx = " << c.grid.nx << "\nny = " << c.grid.ny << "\nx_min = " << format_double(c.grid.x_min)
       << "\nx_max = " << format_double(c.grid.x_max) << "\ny_min = " << format_double(c.grid.y_min)
       << "\ny_max = " << format_double(c.grid.y_max) << "\n\n";
    const ModelParams& p = c.params;
    os << "[params]\nbeta1 = " << format_double(p.beta1) << "\nbeta2 = " << format_double(p.beta2)
       << "\ng1 = " << format_double(p.g1) << "\ng2 = " << format_double(p.g2)
       << "\np1_star = " << format_double(p.p1_star) << "\np2_star = " << format_double(p.p2_star) << '\n';
    if (m == RunModel::ESVM || m == RunModel::VM) os << "eps = " << format_double(p.eps) << '\n';
    if (m == RunModel::ESVM) os << "m = " << format_double(p.m) << "\nalpha = " << format_double(p.alpha) << '\n';
    os << '\n';
    if (!is_stationary_model(m)) {
        os << "[time]\ndt = " << format_double(c.dt) << "\ncfl = " << format_double(c.cfl)
           << "\nt_end = " << format_double(c.t_end) << "\nmax_halvings = " << c.max_halvings
           << "\nreaction_limit = " << format_double(c.reaction_limit) << "\nrecord_every = " << c.record_every
           << "\n\n";
    }
    if (m == RunModel::ESVM || m == RunModel::VM) {
        os << "[velocity]\nlaw = " << (c.law == VelocityLaw::DirichletWalls ? "dirichlet" : "gradient")
           << "\nrepulsion = " << (c.repulsion ? "true" : "false") << "\n\n";
    }
    os << "[solver]\nmethod = " << (c.solver.method == SolverMethod::Direct ? "direct" : "cg")
       << "\nrel_tol = " << format_double(c.solver.rel_tol) << "\nmax_iter = " << c.solver.max_iter << "\n\n";
    os << "[initial]\n";
    if (!c.initial_preset.empty()) {
        os << "preset = \"" << c.initial_preset << "\"\n";
    } else {
        for (const Shape& s : c.shapes) {
            os << "shape = " << shape_kind_name(s.kind) << ' ' << s.tissue << ' ' << format_double(s.value) << ' '
               << format_double(s.a) << ' ' << format_double(s.b) << ' ' << format_double(s.c);
            if (s.kind != Shape::Kind::Disk) os << ' ' << format_double(s.d);
            os << '\n';
        }
    }
    os << '\n';
    if (m == RunModel::LESVM || m == RunModel::Stationary) {
        os << "[q]\nsource = "
           << (c.q.kind == QSource::Kind::Zero ? "zero" : c.q.kind == QSource::Kind::Uniform ? "uniform" : "file")
           << '\n';
        if (c.q.kind == QSource::Kind::Uniform) os << "value = " << format_double(c.q.value) << '\n';
        if (c.q.kind == QSource::Kind::File) os << "path = \"" << c.q.path << "\"\n";
        os << '\n';
    }
    os << "[output]\ndir = \"" << c.out_dir << "\"\n";
    if (!c.sweep.empty()) {
        os << "\n[sweep]\n";
        const std::pair<const char*, const std::vector<double>*> lists[] = {
            {"eps", &c.sweep.eps},     {"m", &c.sweep.m},   {"alpha", &c.sweep.alpha}, {"beta1", &c.sweep.beta1},
            {"beta2", &c.sweep.beta2}, {"g1", &c.sweep.g1}, {"g2", &c.sweep.g2}};
        for (const auto& [name, l] : lists)
            if (!l->empty()) os << name << " = " << join(*l) << '\n';
    }
    return os.str();
}

std::string config_hash(const RunConfig& c) {
    // The preset line only names where the values came from, the output directory
    // only where the results go.
    RunConfig bare = c;
    bare.preset.clear();
    bare.out_dir.clear();
    std::ostringstream os;
    os << std::hex << std::hash<std::string>{}(serialize_config(bare));
    return os.str();
}

std::vector<std::string> preset_names() { return {"fig3-esvm", "fig3-vm", "fig3-lesvm", "fig3-gradient-form"}; }

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    c.params = tissular_params();
    c.grid.nx = c.grid.ny = 128;
    c.dt = 1e-3;
    c.t_end = 0.1;
    c.record_every = 10;
    c.solver.method = SolverMethod::Direct;
    c.initial_preset = "fig3";
    c.out_dir = "out/" + name;
    if (name == "fig3-esvm") {
        c.model = RunModel::ESVM;
    } else if (name == "fig3-vm") {
        c.model = RunModel::VM;
    } else if (name == "fig3-gradient-form") {
        c.model = RunModel::ESVM;
        c.law = VelocityLaw::GradientPotential;
    } else if (name == "fig3-lesvm") {
        c.model = RunModel::LESVM;
        c.initial_preset = "fig3-limit";
        c.cfl = 0.25;
        c.dt = 1e-2;
        c.record_every = 1;
        c.q = QSource{};
    } else {
        throw ConfigError({"unknown preset '" + name + "'"});
    }
    return c;
}

}  // namespace tissue

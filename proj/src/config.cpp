#include "fluctsel/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fluctsel/errors.hpp"

namespace fluctsel {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw std::invalid_argument("expected a number, got an empty value");
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw std::invalid_argument("expected a number, got '" + t + "'");
    }
    return v;
}

std::size_t to_size(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("expected a non-negative integer, got '" + t + "'");
    }
    return static_cast<std::size_t>(std::stoull(t));
}

std::vector<double> to_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item));
    if (out.empty()) throw std::invalid_argument("expected a comma-separated list of numbers");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s;
}

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::optional<std::string>(const RunConfig&)> get;
};

#define FS_NUM(sec, key)                                                               \
    {#sec "." #key,                                                                    \
     Field{[](RunConfig& c, const std::string& v) { c.sec.key = to_double(v); },       \
           [](const RunConfig& c) -> std::optional<std::string> { return fmt(c.sec.key); }}}
#define FS_SIZE(sec, key)                                                                        \
    {#sec "." #key,                                                                              \
     Field{[](RunConfig& c, const std::string& v) { c.sec.key = to_size(v); },                   \
           [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.sec.key); }}}
#define FS_STR(sec, key)                                                              \
    {#sec "." #key,                                                                   \
     Field{[](RunConfig& c, const std::string& v) { c.sec.key = trim(v); },           \
           [](const RunConfig& c) -> std::optional<std::string> { return c.sec.key; }}}
#define FS_OPT(sec, key)                                                                    \
    {#sec "." #key,                                                                         \
     Field{[](RunConfig& c, const std::string& v) { c.sec.key = to_double(v); },            \
           [](const RunConfig& c) -> std::optional<std::string> {                           \
               if (!c.sec.key) return std::nullopt;                                         \
               return fmt(*c.sec.key);                                                      \
           }}}
#define FS_LIST(sec, key)                                                                 \
    {#sec "." #key,                                                                       \
     Field{[](RunConfig& c, const std::string& v) { c.sec.key = to_list(v); },            \
           [](const RunConfig& c) -> std::optional<std::string> { return fmt_list(c.sec.key); }}}

// Ordered as emitted.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table{
        FS_STR(model, kind),       FS_NUM(model, r),          FS_NUM(model, g),
        FS_NUM(model, c),          FS_NUM(model, b),          FS_NUM(model, g0),
        FS_NUM(model, g1),         FS_STR(model, file),       FS_NUM(model, x_lo),
        FS_NUM(model, x_hi),       FS_NUM(model, shift),      FS_NUM(grid, x_lo),
        FS_NUM(grid, x_hi),        FS_SIZE(grid, nx),         FS_NUM(grid, dt),
        FS_STR(grid, scheme),      FS_OPT(solver, eps),       FS_OPT(solver, sigma),
        FS_NUM(solver, orbit_tol), FS_SIZE(solver, max_periods), FS_NUM(solver, eigen_tol),
        FS_SIZE(solver, min_steps_per_period), FS_STR(experiment, tag),
        FS_NUM(experiment, t_end), FS_LIST(experiment, eps_list), FS_LIST(experiment, radii),
        FS_OPT(experiment, tau),   FS_NUM(experiment, n0_variance), FS_STR(output, dir),
    };
    return table;
}

#undef FS_NUM
#undef FS_SIZE
#undef FS_STR
#undef FS_OPT
#undef FS_LIST

const Field* find_field(const std::string& name) {
    for (const auto& [key, f] : fields()) {
        if (key == name) return &f;
    }
    return nullptr;
}

bool known_section(const std::string& s) {
    return s == "model" || s == "grid" || s == "solver" || s == "experiment" || s == "output";
}

struct Problem {
    std::string key;
    std::string message;
};

std::optional<Problem> check(const RunConfig& c) {
    const auto& m = c.model;
    if (m.kind != "oscillating_optimum" && m.kind != "oscillating_pressure" && m.kind != "tabulated") {
        return Problem{"model.kind", "unknown model kind '" + m.kind +
                                         "' (oscillating_optimum, oscillating_pressure, tabulated)"};
    }
    if (m.kind == "oscillating_optimum") {
        if (!(m.g > 0.0)) return Problem{"model.g", "model.g must be positive"};
        if (!(m.b > 0.0)) return Problem{"model.b", "model.b must be positive"};
        if (!(m.c >= 0.0)) return Problem{"model.c", "model.c must be non-negative"};
    }
    if (m.kind == "oscillating_pressure" && !(m.g0 - std::abs(m.g1) > 0.0)) {
        return Problem{"model.g1", "g0 + g1 cos(2 pi t) must stay positive (|g1| < g0)"};
    }
    if (m.kind == "tabulated") {
        if (m.file.empty()) return Problem{"model.file", "tabulated model needs model.file"};
        if (!(m.x_lo < m.x_hi)) return Problem{"model.x_hi", "model.x_lo must be below model.x_hi"};
    }
    const auto& g = c.grid;
    if (!(g.x_lo < g.x_hi)) return Problem{"grid.x_hi", "grid.x_lo must be below grid.x_hi"};
    if (g.nx < 16) return Problem{"grid.nx", "grid.nx must be >= 16"};
    if (!(g.dt > 0.0)) return Problem{"grid.dt", "grid.dt must be positive"};
    if (g.scheme != "backward_euler" && g.scheme != "crank_nicolson") {
        return Problem{"grid.scheme", "grid.scheme must be backward_euler or crank_nicolson"};
    }
    const auto& s = c.solver;
    if (s.eps && s.sigma) return Problem{"solver.sigma", "give either solver.eps or solver.sigma"};
    if (s.eps && !(*s.eps >= 0.0)) return Problem{"solver.eps", "solver.eps must be >= 0"};
    if (s.sigma && !(*s.sigma >= 0.0)) return Problem{"solver.sigma", "solver.sigma must be >= 0"};
    if (!(s.orbit_tol > 0.0)) return Problem{"solver.orbit_tol", "solver.orbit_tol must be positive"};
    if (s.max_periods == 0) return Problem{"solver.max_periods", "solver.max_periods must be positive"};
    if (!(s.eigen_tol > 0.0)) return Problem{"solver.eigen_tol", "solver.eigen_tol must be positive"};
    if (s.min_steps_per_period == 0) {
        return Problem{"solver.min_steps_per_period", "solver.min_steps_per_period must be positive"};
    }
    const auto& e = c.experiment;
    if (!e.tag.empty()) {
        bool known = false;
        for (const auto& t : experiment_tags()) known = known || t == e.tag;
        if (!known) return Problem{"experiment.tag", "unknown experiment tag '" + e.tag + "'"};
    }
    if (!(e.t_end >= 0.0)) return Problem{"experiment.t_end", "experiment.t_end must be >= 0"};
    for (double v : e.eps_list) {
        if (!(v > 0.0)) return Problem{"experiment.eps_list", "experiment.eps_list entries must be positive"};
    }
    for (std::size_t i = 0; i < e.radii.size(); ++i) {
        if (!(e.radii[i] > 0.0) || (i > 0 && !(e.radii[i] > e.radii[i - 1]))) {
            return Problem{"experiment.radii", "experiment.radii must be positive and increasing"};
        }
    }
    if (!(e.n0_variance > 0.0)) {
        return Problem{"experiment.n0_variance", "experiment.n0_variance must be positive"};
    }
    if (c.output.dir.empty()) return Problem{"output.dir", "output.dir must not be empty"};
    return std::nullopt;
}

void set_value(RunConfig& c, const std::string& name, const std::string& value,
               const std::string& where) {
    const Field* f = find_field(name);
    if (!f) throw ValidationError(where + ": unknown key '" + name + "'");
    try {
        f->set(c, value);
    } catch (const std::invalid_argument& e) {
        throw ValidationError(where + ": " + name + ": " + e.what());
    } catch (const std::out_of_range&) {
        throw ValidationError(where + ": " + name + ": value out of range");
    }
}

RunConfig parse_json(const std::string& text, const std::string& origin) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(origin + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ValidationError(origin + ": top level must be an object");
    RunConfig c;
    for (const auto& [section, body] : doc.items()) {
        if (!known_section(section)) throw ValidationError(origin + ": unknown section '" + section + "'");
        if (!body.is_object()) throw ValidationError(origin + ": section '" + section + "' must be an object");
        for (const auto& [key, value] : body.items()) {
            std::string v;
            if (value.is_string()) {
                v = value.get<std::string>();
            } else if (value.is_number()) {
                v = value.is_number_integer() ? std::to_string(value.get<long long>()) : fmt(value.get<double>());
            } else if (value.is_array()) {
                for (std::size_t i = 0; i < value.size(); ++i) {
                    if (!value[i].is_number()) {
                        throw ValidationError(origin + ": " + section + "." + key + ": expected numbers");
                    }
                    v += (i ? "," : "") + fmt(value[i].get<double>());
                }
            } else {
                throw ValidationError(origin + ": " + section + "." + key + ": unsupported value type");
            }
            set_value(c, section + "." + key, v, origin);
        }
    }
    if (auto p = check(c)) throw ValidationError(origin + ": " + p->message);
    return c;
}

}  // namespace

double SolverConfig::diffusion() const {
    if (sigma) return *sigma;
    const double e = eps.value_or(0.05);
    return e * e;
}

double SolverConfig::epsilon() const {
    if (sigma) return std::sqrt(*sigma);
    return eps.value_or(0.05);
}

const std::vector<std::string>& experiment_tags() {
    static const std::vector<std::string> tags{
        "sigma0-convergence", "periodic-orbit", "floquet-sweep", "epsilon-limit",
        "moments",            "example1",       "example2",      "fitness-compare"};
    return tags;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json(text, origin);

    RunConfig c;
    std::map<std::string, int> lines;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ValidationError(where + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_section(section)) {
                throw ValidationError(where + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
        if (section.empty()) throw ValidationError(where + ": key outside of a section");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const auto hash = value.find(" #");
        if (hash != std::string::npos) value = trim(value.substr(0, hash));
        const std::string name = section + "." + key;
        if (lines.count(name)) {
            throw ValidationError(where + ": duplicate key '" + name + "' (first on line " +
                                  std::to_string(lines[name]) + ")");
        }
        set_value(c, name, value, where);
        lines[name] = lineno;
    }
    if (auto p = check(c)) {
        const auto it = lines.find(p->key);
        const std::string where =
            it != lines.end() ? origin + ":" + std::to_string(it->second) : origin;
        throw ValidationError(where + ": " + p->message);
    }
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read configuration file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void apply_override(RunConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ValidationError("override '" + assignment + "': expected section.key=value");
    }
    const std::string name = trim(assignment.substr(0, eq));
    RunConfig next = config;
    set_value(next, name, assignment.substr(eq + 1), "override '" + assignment + "'");
    if (auto p = check(next)) throw ValidationError("override '" + assignment + "': " + p->message);
    config = std::move(next);
}

void validate(const RunConfig& config) {
    if (auto p = check(config)) throw ValidationError(p->message);
}

std::string emit_config(const RunConfig& config) {
    std::ostringstream out;
    std::string section;
    for (const auto& [name, f] : fields()) {
        const auto dot = name.find('.');
        const std::string sec = name.substr(0, dot);
        if (sec != section) {
            out << (section.empty() ? "" : "\n") << "[" << sec << "]\n";
            section = sec;
        }
        if (auto v = f.get(config)) {
            // Empty strings are the defaults and cannot be written as values.
            if (v->empty()) continue;
            out << name.substr(dot + 1) << " = " << *v << "\n";
        }
    }
    return out.str();
}

EnvironmentModel build_model(const ModelConfig& m) {
    EnvironmentModel model = [&] {
        if (m.kind == "oscillating_optimum") return make_oscillating_optimum(m.r, m.g, m.c, m.b);
        if (m.kind == "oscillating_pressure") return make_cosine_pressure(m.r, m.g0, m.g1);
        if (m.kind == "tabulated") return load_tabulated(m.file, {m.x_lo, m.x_hi});
        throw ValidationError("unknown model kind '" + m.kind + "'");
    }();
    return m.shift != 0.0 ? model.shifted(m.shift) : model;
}

SimulationGrid build_grid(const RunConfig& c) {
    return make_grid(c.grid.x_lo, c.grid.x_hi, c.grid.nx, c.grid.dt, c.solver.diffusion(),
                     parse_time_scheme(c.grid.scheme));
}

}  // namespace fluctsel

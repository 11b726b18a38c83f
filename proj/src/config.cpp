#include "triosc/config.hpp"

#include "triosc/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace triosc {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

std::optional<double> to_number(const std::string& s) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    if (b != e && *b == '+') ++b;
    const auto r = std::from_chars(b, e, v);
    if (r.ec != std::errc{} || r.ptr != e || s.empty()) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    int line{0};
    bool used{false};
};

class Table {
public:
    explicit Table(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void error(int line, const std::string& key, const std::string& msg) const {
        fail(ErrorKind::config, fmt::format("{}:{}: {}: {}", source_, line, key, msg));
    }

    void add(const std::string& section, const std::string& key, const std::string& value, int line) {
        const std::string full = section + "." + key;
        if (entries_.count(full)) error(line, full, "duplicate key");
        entries_[full] = {value, line, false};
    }

    Entry* find(const std::string& full) {
        const auto it = entries_.find(full);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::optional<double> number(const std::string& full) {
        Entry* e = find(full);
        if (!e) return std::nullopt;
        const auto v = to_number(e->value);
        if (!v) error(e->line, full, fmt::format("expected a number, got '{}'", e->value));
        return v;
    }

    std::optional<int> integer(const std::string& full) {
        Entry* e = find(full);
        if (!e) return std::nullopt;
        const auto v = to_number(e->value);
        if (!v || *v != std::floor(*v) || std::abs(*v) > 2e9) {
            error(e->line, full, fmt::format("expected an integer, got '{}'", e->value));
        }
        return static_cast<int>(*v);
    }

    std::optional<bool> boolean(const std::string& full) {
        Entry* e = find(full);
        if (!e) return std::nullopt;
        if (e->value == "true") return true;
        if (e->value == "false") return false;
        error(e->line, full, fmt::format("expected true or false, got '{}'", e->value));
    }

    std::optional<std::string> text(const std::string& full) {
        Entry* e = find(full);
        if (!e) return std::nullopt;
        return e->value;
    }

    std::optional<ParameterCurve> curve(const std::string& full) {
        Entry* e = find(full);
        if (!e) return std::nullopt;
        try {
            return parse_curve(e->value);
        } catch (const Error& err) {
            error(e->line, full, err.what());
        }
    }

    int line_of(const std::string& full) const {
        const auto it = entries_.find(full);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_) {
            if (!e.used) error(e.line, key, "unknown key");
        }
    }

    const std::string& source() const { return source_; }

private:
    std::string source_;
    std::map<std::string, Entry> entries_;
};

const std::set<std::string> known_sections{"oscillator.1", "oscillator.2", "oscillator.3", "couplings",
                                           "constants",    "grid",         "tolerances",   "pipelines",
                                           "output"};

double require_param(const std::map<std::string, double>& m, const std::string& key, const std::string& kind) {
    const auto it = m.find(key);
    if (it == m.end()) fail(ErrorKind::config, fmt::format("{} curve needs '{}'", kind, key));
    return it->second;
}

std::vector<double> number_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split(s, ';')) {
        const auto v = to_number(item);
        if (!v) fail(ErrorKind::config, fmt::format("'{}' holds a non-numeric entry '{}'", key, item));
        out.push_back(*v);
    }
    return out;
}

}  // namespace

ParameterCurve parse_curve(const std::string& raw) {
    const std::string spec = trim(raw);
    if (const auto v = to_number(spec)) return ParameterCurve::constant(*v);

    std::map<std::string, std::string> fields;
    for (const auto& part : split(spec, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) fail(ErrorKind::config, fmt::format("malformed curve field '{}'", part));
        const std::string k = trim(part.substr(0, eq));
        if (fields.count(k)) fail(ErrorKind::config, fmt::format("curve field '{}' given twice", k));
        fields[k] = trim(part.substr(eq + 1));
    }
    const auto kind_it = fields.find("kind");
    if (kind_it == fields.end()) fail(ErrorKind::config, "curve spec needs kind=...");
    const std::string kind = kind_it->second;
    fields.erase(kind_it);

    if (kind == "tabulated") {
        std::set<std::string> allowed{"t", "y"};
        for (const auto& [k, v] : fields) {
            if (!allowed.count(k)) fail(ErrorKind::config, fmt::format("tabulated curve has no field '{}'", k));
        }
        if (!fields.count("t") || !fields.count("y")) fail(ErrorKind::config, "tabulated curve needs t=... and y=...");
        return ParameterCurve::tabulated(number_list(fields["t"], "t"), number_list(fields["y"], "y"));
    }

    std::map<std::string, double> nums;
    for (const auto& [k, v] : fields) {
        const auto n = to_number(v);
        if (!n) fail(ErrorKind::config, fmt::format("curve field '{}' is not a number: '{}'", k, v));
        nums[k] = *n;
    }
    auto only = [&](std::initializer_list<const char*> keys) {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [k, v] : nums) {
            if (!allowed.count(k)) fail(ErrorKind::config, fmt::format("{} curve has no field '{}'", kind, k));
        }
    };
    if (kind == "constant") {
        only({"c"});
        return ParameterCurve::constant(require_param(nums, "c", kind));
    }
    if (kind == "linear") {
        only({"c0", "slope"});
        return ParameterCurve::linear(require_param(nums, "c0", kind), require_param(nums, "slope", kind));
    }
    if (kind == "exponential") {
        only({"c0", "rate"});
        return ParameterCurve::exponential(require_param(nums, "c0", kind), require_param(nums, "rate", kind));
    }
    if (kind == "sinusoid") {
        only({"offset", "amp", "freq", "phase"});
        const double phase = nums.count("phase") ? nums["phase"] : 0.0;
        return ParameterCurve::sinusoid(require_param(nums, "offset", kind), require_param(nums, "amp", kind),
                                        require_param(nums, "freq", kind), phase);
    }
    fail(ErrorKind::config, fmt::format("unknown curve kind '{}'", kind));
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& source) {
    Table table(source);
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') table.error(line, s, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!known_sections.count(section)) table.error(line, section, "unknown section");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) table.error(line, s, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty()) table.error(line, key, "key outside any section");
        if (key.empty()) table.error(line, key, "empty key");
        if (value.empty()) table.error(line, key, "empty value");
        table.add(section, key, value, line);
    }

    ScenarioConfig cfg;
    SystemParameters& p = cfg.params;
    for (int j = 0; j < 3; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        const std::string sec = fmt::format("oscillator.{}.", j + 1);
        const auto m = table.curve(sec + "m");
        const auto w = table.curve(sec + "omega");
        if (!m) fail(ErrorKind::config, fmt::format("{}: missing required key {}m", source, sec));
        if (!w) fail(ErrorKind::config, fmt::format("{}: missing required key {}omega", source, sec));
        p.m[sj] = *m;
        p.omega[sj] = *w;
        if (auto b = table.curve(sec + "b")) p.b[sj] = *b;
        if (auto a = table.number(sec + "alpha0")) p.alpha0[sj] = *a;
        if (auto o = table.number(sec + "Omega")) p.Omega[sj] = *o;
        p.rho0[sj] = table.number(sec + "rho0");
        p.rhodot0[sj] = table.number(sec + "rhodot0");
        cfg.x0[sj] = table.number(sec + "x0");
        cfg.p0[sj] = table.number(sec + "p0");
    }
    if (auto v = table.number("couplings.d12")) p.d0[pair12] = *v;
    if (auto v = table.number("couplings.d13")) p.d0[pair13] = *v;
    if (auto v = table.number("couplings.d23")) p.d0[pair23] = *v;
    if (auto mode = table.text("couplings.mode")) {
        if (*mode == "derived") {
            p.coupling_mode = CouplingMode::derived;
        } else if (*mode == "frozen") {
            p.coupling_mode = CouplingMode::frozen;
        } else {
            table.error(table.line_of("couplings.mode"), "couplings.mode", "expected derived or frozen");
        }
    }
    if (auto v = table.number("constants.hbar")) p.hbar = *v;
    if (auto v = table.number("constants.M")) p.M = *v;

    p.grid = {0.0, 20.0 * 3.141592653589793, 2048};
    if (auto v = table.number("grid.t0")) p.grid.t0 = *v;
    if (auto v = table.number("grid.t1")) p.grid.t1 = *v;
    if (auto v = table.integer("grid.N")) p.grid.intervals = *v;
    if (auto v = table.integer("grid.quadrature")) cfg.quadrature_order = *v;
    if (auto v = table.integer("grid.spatial_points")) cfg.spatial.points = *v;
    if (auto v = table.number("grid.extent")) cfg.spatial.extent = *v;
    if (auto v = table.integer("grid.n_max")) cfg.n_max = *v;
    if (auto v = table.integer("grid.mode_level")) cfg.mode_level = *v;

    Tolerances& t = cfg.tolerances;
    const std::pair<const char*, double*> tol_keys[] = {
        {"admissibility", &t.admissibility}, {"coupling", &t.coupling},     {"ermakov", &t.ermakov},
        {"g_form", &t.g_form},               {"identity", &t.identity},     {"lvn", &t.lvn},
        {"drift", &t.drift},                 {"gamma", &t.gamma},           {"offdiag", &t.offdiag},
        {"eigenvalues", &t.eigenvalues}, {"formula", &t.formula},     {"gram", &t.gram},             {"expectation", &t.expectation},
        {"grid_residual", &t.grid_residual}, {"ladder", &t.ladder},         {"commutator", &t.commutator},
        {"step", &t.step},
    };
    for (const auto& [name, slot] : tol_keys) {
        const std::string key = std::string("tolerances.") + name;
        if (auto v = table.number(key)) {
            if (!(*v > 0.0)) table.error(table.line_of(key), key, "tolerances must be > 0");
            *slot = *v;
        }
    }

    if (auto v = table.boolean("pipelines.validate")) cfg.pipelines.validate = *v;
    if (auto v = table.boolean("pipelines.evolve")) cfg.pipelines.evolve = *v;
    if (auto v = table.boolean("pipelines.spectrum")) cfg.pipelines.spectrum = *v;
    if (auto v = table.boolean("pipelines.eigen")) cfg.pipelines.eigen = *v;
    if (auto v = table.integer("pipelines.trajectories")) cfg.trajectories = *v;
    if (auto v = table.integer("pipelines.seed")) {
        if (*v < 0) table.error(table.line_of("pipelines.seed"), "pipelines.seed", "seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = table.text("output.dir")) cfg.output_dir = *v;
    if (auto v = table.boolean("output.wavefunction_slice")) cfg.wavefunction_slice = *v;

    table.reject_unused();

    const Pipelines& pl = cfg.pipelines;
    if (!pl.validate && !pl.evolve && !pl.spectrum && !pl.eigen) {
        fail(ErrorKind::config, fmt::format("{}: at least one pipeline must be enabled", source));
    }
    if (cfg.trajectories < 1) fail(ErrorKind::config, fmt::format("{}: trajectories must be >= 1", source));
    if (cfg.mode_level < 0 || cfg.mode_level > cfg.n_max) {
        fail(ErrorKind::config, fmt::format("{}: mode_level must lie in [0, n_max]", source));
    }
    p.validate();
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::config, fmt::format("cannot read config file '{}'", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace triosc

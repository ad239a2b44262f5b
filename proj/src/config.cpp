#include "crocco/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "crocco/expr.hpp"

namespace crocco {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct KeyValues {
    std::map<std::string, std::string> kv;
    std::set<std::string> consumed;

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string take(const std::string& k, const std::string& dflt) {
        consumed.insert(k);
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }

    double take_double(const std::string& k, double dflt) {
        const std::string v = take(k, "");
        if (v.empty()) return dflt;
        try {
            std::size_t used;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (...) {
            throw ConfigError("config key '" + k + "': expected a number, got '" +
                              v + "'");
        }
    }
    int take_int(const std::string& k, int dflt) {
        const std::string v = take(k, "");
        if (v.empty()) return dflt;
        try {
            std::size_t used;
            const int n = std::stoi(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return n;
        } catch (...) {
            throw ConfigError("config key '" + k +
                              "': expected an integer, got '" + v + "'");
        }
    }
    bool take_bool(const std::string& k, bool dflt) {
        const std::string v = take(k, "");
        if (v.empty()) return dflt;
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("config key '" + k + "': expected a boolean, got '" +
                          v + "'");
    }

    void reject_unknown(const std::string& section) const {
        for (const auto& [k, v] : kv)
            if (!consumed.count(k))
                throw ConfigError("unknown config key '" +
                                  (section.empty() ? k : section + "." + k) +
                                  "'");
    }
};

std::map<std::string, KeyValues> split_sections(const std::string& text) {
    std::map<std::string, KeyValues> sections;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            current = trim(line.substr(1, line.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        auto& kvs = sections[current].kv;
        if (kvs.count(key))
            throw ConfigError("config key '" + key + "' given twice");
        kvs[key] = val;
    }
    return sections;
}

Field2 field2_from_expr(const std::string& src) {
    Expr e = Expr::parse(src);
    Field2 f;
    f.v = [e](double x, double y) { return e.eval(0.0, x, y, 0.0); };
    return f;
}

Field3 field3_from_expr(const std::string& src) {
    Expr e = Expr::parse(src);
    Field3 f;
    f.v = [e](double t, double x, double y) { return e.eval(t, x, y, 0.0); };
    return f;
}

Scenario scenario_from_section(KeyValues& sc) {
    Scenario s;
    s.name = "custom";
    s.note = "user-defined fields";
    const std::string dom = sc.take("domain", "0,1,0,1");
    {
        std::vector<double> v;
        std::istringstream ds(dom);
        std::string tok;
        while (std::getline(ds, tok, ',')) v.push_back(std::stod(trim(tok)));
        if (v.size() != 4)
            throw ConfigError("scenario.domain: expected x0,x1,y0,y1");
        s.domain = Domain2D::rectangle(v[0], v[1], v[2], v[3]);
    }
    const std::string k_csv = sc.take("k_csv", "");
    if (!k_csv.empty())
        s.k = load_k_csv(k_csv);
    else
        s.k = field2_from_expr(sc.take("k", "0"));
    s.U = field3_from_expr(sc.take("U", "1"));
    s.p_x = field3_from_expr(sc.take("p_x", "0"));
    s.p_y = field3_from_expr(sc.take("p_y", "0"));
    {
        Expr w0 = Expr::parse(sc.take("W0", "1-z"));
        s.W0.v = [w0](double x, double y, double z) {
            return w0.eval(0.0, x, y, z);
        };
        Expr w1 = Expr::parse(sc.take("W1", "1-z"));
        s.W1.v = [w1](double t, double x, double y, double z) {
            return w1.eval(t, x, y, z);
        };
    }
    s.f_cutoff_fraction = sc.take_double("f_cutoff_fraction", 0.25);
    s.validate_h2 = sc.take_bool("validate_h2", true);
    return s;
}

RunMode parse_mode(const std::string& m) {
    if (m == "full") return RunMode::Full;
    if (m == "porous-only") return RunMode::PorousOnly;
    if (m == "transport-only") return RunMode::TransportOnly;
    throw ConfigError("mode: expected full | porous-only | transport-only, "
                      "got '" +
                      m + "'");
}

}  // namespace

Field2 load_k_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("k_csv: cannot open '" + path + "'");
    std::vector<double> xs, ys, ks;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0])))
            continue;  // header or blank
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ls, tok, ',')) row.push_back(std::stod(trim(tok)));
        if (row.size() != 3)
            throw ConfigError("k_csv: expected x,y,k rows in '" + path + "'");
        xs.push_back(row[0]);
        ys.push_back(row[1]);
        ks.push_back(row[2]);
    }
    if (xs.empty()) throw ConfigError("k_csv: no data rows in '" + path + "'");

    auto uniq = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end(),
                            [](double a, double b) {
                                return std::fabs(a - b) < 1e-14;
                            }),
                v.end());
        return v;
    };
    const std::vector<double> ux = uniq(xs), uy = uniq(ys);
    if (ux.size() * uy.size() != xs.size())
        throw ConfigError("k_csv: data must cover a full tensor grid");
    std::vector<double> table(ux.size() * uy.size(), 0.0);
    auto find_idx = [](const std::vector<double>& v, double q) {
        const auto it = std::lower_bound(v.begin(), v.end(), q - 1e-14);
        return static_cast<std::size_t>(it - v.begin());
    };
    for (std::size_t r = 0; r < xs.size(); ++r)
        table[find_idx(ux, xs[r]) * uy.size() + find_idx(uy, ys[r])] = ks[r];

    Field2 f;
    f.v = [ux, uy, table](double x, double y) {
        auto cell = [](const std::vector<double>& v, double q) {
            if (q <= v.front()) return std::size_t{0};
            if (q >= v.back()) return v.size() - 2;
            const auto it = std::upper_bound(v.begin(), v.end(), q);
            return static_cast<std::size_t>(it - v.begin()) - 1;
        };
        const std::size_t i = cell(ux, x), j = cell(uy, y);
        const double fx =
            std::clamp((x - ux[i]) / (ux[i + 1] - ux[i]), 0.0, 1.0);
        const double fy =
            std::clamp((y - uy[j]) / (uy[j + 1] - uy[j]), 0.0, 1.0);
        const std::size_t ny = uy.size();
        return (1 - fx) * (1 - fy) * table[i * ny + j] +
               fx * (1 - fy) * table[(i + 1) * ny + j] +
               (1 - fx) * fy * table[i * ny + j + 1] +
               fx * fy * table[(i + 1) * ny + j + 1];
    };
    return f;
}

ParsedRun parse_config_text(const std::string& text) {
    ParsedRun out;
    out.config_text = text;
    auto sections = split_sections(text);

    static const std::set<std::string> known_sections = {
        "", "grid", "time", "porous", "transport", "run", "verify", "output",
        "scenario"};
    for (const auto& [name, kv] : sections)
        if (!known_sections.count(name))
            throw ConfigError("unknown config section '[" + name + "]'");

    KeyValues& top = sections[""];
    const std::string preset = top.take("scenario", "");
    if (preset.empty())
        throw ConfigError("missing required key 'scenario' (a preset name or "
                          "'custom')");
    if (preset == "custom") {
        if (!sections.count("scenario"))
            throw ConfigError("scenario = custom requires a [scenario] section");
        out.scenario = scenario_from_section(sections["scenario"]);
    } else {
        out.scenario = make_scenario(preset);
        if (sections.count("scenario"))
            throw ConfigError("[scenario] section is only valid with "
                              "scenario = custom");
    }

    RunConfig& c = out.config;
    const std::string mode = top.take("mode", "");
    if (!mode.empty()) {
        c.mode = parse_mode(mode);
        c.mode_from_scenario = false;
    }
    c.workers = top.take_int("workers", 0);
    if (c.workers < 0) throw ConfigError("workers must be >= 0");
    top.reject_unknown("");

    KeyValues& grid = sections["grid"];
    const double x0 = grid.take_double("x0", out.scenario.domain.x_min());
    const double x1 = grid.take_double("x1", out.scenario.domain.x_max());
    const double y0 = grid.take_double("y0", out.scenario.domain.y_min());
    const double y1 = grid.take_double("y1", out.scenario.domain.y_max());
    if (x0 != out.scenario.domain.x_min() || x1 != out.scenario.domain.x_max() ||
        y0 != out.scenario.domain.y_min() || y1 != out.scenario.domain.y_max())
        out.scenario.domain = Domain2D::rectangle(x0, x1, y0, y1);
    c.grid.nx = grid.take_int("nx", 16);
    c.grid.ny = grid.take_int("ny", 16);
    c.grid.nz = grid.take_int("nz", 32);
    grid.reject_unknown("grid");

    KeyValues& time = sections["time"];
    c.grid.T = time.take_double("T", 1.0);
    c.grid.n_split = time.take_int("n_split", 8);
    time.reject_unknown("time");
    if (c.grid.n_split % 2 != 0)
        throw ConfigError("time.n_split = " + std::to_string(c.grid.n_split) +
                          " is odd: the splitting requires an even count so "
                          "the run ends after a completed porous/transport "
                          "pair");
    c.grid.validate();

    KeyValues& por = sections["porous"];
    c.porous.epsilon = por.take_double("epsilon", 1e-6);
    if (c.porous.epsilon <= 0.0)
        throw ConfigError("porous.epsilon must be strictly positive (the "
                          "regularized parabolic problem requires epsilon > 0)");
    c.porous.inner_steps = por.take_int("inner_steps", 8);
    if (c.porous.inner_steps < 1)
        throw ConfigError("porous.inner_steps must be >= 1");
    const std::string scheme = por.take("scheme", "backward");
    if (scheme == "backward")
        c.porous.scheme = PorousParams::Scheme::BackwardEuler;
    else if (scheme == "trapezoid")
        c.porous.scheme = PorousParams::Scheme::Trapezoid;
    else
        throw ConfigError("porous.scheme: expected backward | trapezoid");
    c.porous.newton_tol = por.take_double("newton_tol", 1e-10);
    c.porous.newton_max_iter = por.take_int("newton_max_iter", 25);
    c.porous.bisection_retries = por.take_int("bisection_retries", 4);
    if (c.porous.newton_tol <= 0.0 || c.porous.newton_max_iter < 1 ||
        c.porous.bisection_retries < 0)
        throw ConfigError("porous: tolerances and iteration counts must be "
                          "positive");
    por.reject_unknown("porous");

    KeyValues& tr = sections["transport"];
    c.transport.ode_substeps = tr.take_int("ode_substeps", 8);
    if (c.transport.ode_substeps < 1)
        throw ConfigError("transport.ode_substeps must be >= 1");
    c.damping_factor = tr.take_double("damping_factor", 0.0);
    if (c.damping_factor != 0.0 && c.damping_factor != 1.0 &&
        c.damping_factor != 2.0)
        throw ConfigError("transport.damping_factor must be 1 or 2 (or left "
                          "unset for the rate factor)");
    tr.reject_unknown("transport");

    KeyValues& rn = sections["run"];
    c.rate_factor = rn.take_double("rate_factor", 0.0);
    if (c.rate_factor < 0.0)
        throw ConfigError("run.rate_factor must be positive");
    c.keep_every = rn.take_int("keep_every", 1);
    if (c.keep_every < 1) throw ConfigError("run.keep_every must be >= 1");
    rn.reject_unknown("run");

    KeyValues& vr = sections["verify"];
    c.verify.bounds = vr.take_bool("bounds", true);
    c.verify.bv = vr.take_bool("bv", true);
    c.verify.step_checks = vr.take_bool("step_checks", true);
    c.verify.weak_residual = vr.take_bool("weak_residual", false);
    c.verify.beta = vr.take_double("beta", 0.0);
    c.verify.beta_tilde = vr.take_double("beta_tilde", 0.0);
    c.verify.test_functions = vr.take_int("test_functions", 12);
    c.verify.bound_tol = vr.take_double("bound_tol", 1e-10);
    if (c.verify.test_functions < 1 || c.verify.bound_tol <= 0.0)
        throw ConfigError("verify: counts and tolerances must be positive");
    vr.reject_unknown("verify");

    KeyValues& outp = sections["output"];
    out.output.dir = outp.take("dir", "out");
    out.output.write_slices = outp.take_bool("write_slices", true);
    out.output.write_report = outp.take_bool("write_report", true);
    out.output.write_physical = outp.take_bool("write_physical", false);
    const std::string probes = outp.take("probes", "0.5,0.5");
    {
        out.output.probes.clear();
        std::istringstream ps(probes);
        std::string tok;
        std::vector<double> v;
        while (std::getline(ps, tok, ',')) v.push_back(std::stod(trim(tok)));
        if (v.size() % 2 != 0)
            throw ConfigError("output.probes: expected x,y pairs");
        for (std::size_t p = 0; p + 1 < v.size(); p += 2)
            out.output.probes.push_back({v[p], v[p + 1]});
    }
    outp.reject_unknown("output");

    return out;
}

ParsedRun parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace crocco

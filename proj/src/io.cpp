#include "crocco/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace crocco {

namespace {

/// Fixed 17-significant-digit scientific notation for reproducible output.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    return out;
}

}  // namespace

void write_slices_csv(const std::string& path, const SolutionHistory& hist,
                      const Grid& grid) {
    std::ofstream out = open_out(path);
    out << "t,xi,eta,zeta,W\n";
    for (const auto& s : hist.slices)
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j) {
                if (!grid.column_active(i, j)) continue;
                for (int m = 0; m <= grid.nz(); ++m)
                    out << fmt(s.t) << ',' << fmt(grid.x(i)) << ','
                        << fmt(grid.y(j)) << ',' << fmt(grid.zeta(m)) << ','
                        << fmt(s.w[grid.index(i, j, m)]) << '\n';
            }
    if (!out) throw IoError("write failed: " + path);
}

std::vector<Slice> read_slices_csv(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<Slice> slices;
    std::size_t active_nodes = 0;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j)
            if (grid.column_active(i, j)) active_nodes += grid.n_znodes();

    std::size_t filled = 0;
    int ci = 0, cj = 0, cm = 0;
    auto advance_node = [&] {
        do {
            if (++cm > grid.nz()) {
                cm = 0;
                if (++cj > grid.ny()) {
                    cj = 0;
                    ++ci;
                }
            }
        } while (ci <= grid.nx() && !grid.column_active(ci, cj));
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double t, x, y, z, w;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &t, &x, &y, &z,
                        &w) != 5)
            throw IoError("malformed slice row: " + line);
        if (filled % active_nodes == 0) {
            slices.emplace_back();
            slices.back().t = t;
            slices.back().w.assign(grid.n_nodes(), 0.0);
            ci = cj = 0;
            cm = -1;
        }
        advance_node();
        if (ci > grid.nx())
            throw IoError("slice file does not match the grid: " + path);
        slices.back().w[grid.index(ci, cj, cm)] = w;
        ++filled;
    }
    if (filled % active_nodes != 0)
        throw IoError("truncated slice file: " + path);
    return slices;
}

nlohmann::json report_to_json(const RunReport& r) {
    nlohmann::json j;
    j["config"] = {{"scenario", r.scenario},
                   {"mode", r.mode},
                   {"nx", r.nx},
                   {"ny", r.ny},
                   {"nz", r.nz},
                   {"n_split", r.n_split},
                   {"T", r.T},
                   {"rate_factor", r.rate_factor},
                   {"damping_factor", r.damping_factor},
                   {"epsilon", r.epsilon},
                   {"workers", r.workers},
                   {"w1_extension", r.w1_extension}};
    j["validation"] = {{"burgers_residual", r.validation.burgers},
                       {"h2_momentum", r.validation.h2.momentum},
                       {"h2_pressure", r.validation.h2.pressure},
                       {"h2_checked", r.validation.h2_checked},
                       {"u_min", r.validation.u_min},
                       {"px_max", r.validation.px_max},
                       {"c0", r.validation.c0.c0},
                       {"tol_burgers", r.validation.tol_burgers},
                       {"tol_h2", r.validation.tol_h2},
                       {"failure", r.validation.failure}};
    j["constants"] = {{"theta0", r.barriers.theta0},
                      {"C1", r.barriers.C1},
                      {"M1", r.barriers.M1},
                      {"beta", r.barriers.beta},
                      {"theta_tilde0", r.theta_tilde0},
                      {"C_tilde1", r.c_tilde1},
                      {"M_tilde1", r.m_tilde1},
                      {"beta_tilde", r.beta_tilde},
                      {"beta_tilde_realized", r.beta_tilde_realized},
                      {"M_tilde1_realized", r.m_tilde1_realized},
                      {"C_tilde0_realized", r.c_tilde0_realized},
                      {"b_sup", r.b_sup},
                      {"b_W1inf", r.b_w1inf},
                      {"bv_growth_M", r.bv_growth_M},
                      {"bv_growth_finite", r.bv_growth_finite}};
    j["slices"] = nlohmann::json::array();
    for (const auto& s : r.slices)
        j["slices"].push_back({{"t", s.t},
                               {"provenance", s.provenance},
                               {"ratio_lo", s.ratio_lo},
                               {"ratio_hi", s.ratio_hi},
                               {"lower_margin", s.lower_margin},
                               {"upper_margin", s.upper_margin},
                               {"env_lo", s.env_lo},
                               {"env_hi", s.env_hi},
                               {"max_wz", s.max_wz},
                               {"tv_zeta", s.bv.tv_zeta},
                               {"v_h", s.bv.v_h},
                               {"tv_total", s.bv.tv_total},
                               {"floored", s.bv.floored}});
    j["intervals"] = nlohmann::json::array();
    for (const auto& iv : r.intervals)
        j["intervals"].push_back({{"index", iv.index},
                                  {"kind", iv.kind},
                                  {"zeta_var_violation", iv.zeta_var_violation},
                                  {"zeta_var_gap", iv.zeta_var_gap},
                                  {"zeta_var_pass", iv.zeta_var_pass},
                                  {"c_vh", iv.c_vh},
                                  {"c_tvz", iv.c_tvz}});
    j["transport"] = {{"q1_nodes", r.q1_nodes},
                      {"q2_nodes", r.q2_nodes},
                      {"max_k_deviation", r.max_k_deviation},
                      {"max_collinearity", r.max_collinearity}};
    if (r.weak_computed) {
        j["weak_residual"] = {{"family_max", r.weak.family_max},
                              {"cutoff_sensitivity", r.weak.cutoff_sensitivity}};
        j["weak_residual"]["entries"] = nlohmann::json::array();
        for (const auto& e : r.weak.entries)
            j["weak_residual"]["entries"].push_back(
                {{"name", e.name},
                 {"residual", e.residual},
                 {"cutoff_sensitivity", e.cutoff_sensitivity},
                 {"wall_flux_term", e.wall_flux_term}});
    }
    j["solver"] = {{"newton_iterations", r.newton_iterations},
                   {"bisections", r.bisections}};
    j["timings_s"] = {{"porous", r.wall_porous_s},
                      {"transport", r.wall_transport_s},
                      {"verify", r.wall_verify_s},
                      {"total", r.wall_total_s}};
    j["result"] = {{"bounds_pass", r.bounds_pass},
                   {"step_checks_pass", r.step_checks_pass},
                   {"failure", r.failure},
                   {"verification_passed", r.verification_passed()}};
    return j;
}

void write_report_json(const std::string& path, const RunReport& report) {
    std::ofstream out = open_out(path);
    out << report_to_json(report).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_probe_csv(const std::string& path, const Slice& slice,
                     const Grid& grid, Point2 probe, double env_lo,
                     double env_hi) {
    // nearest grid column to the probe
    int bi = 0, bj = 0;
    double best = 1e300;
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            const double d = std::hypot(grid.x(i) - probe.x, grid.y(j) - probe.y);
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    std::ofstream out = open_out(path);
    out << "zeta,W,lower_barrier,upper_barrier\n";
    for (int m = 0; m <= grid.nz(); ++m) {
        const double z = grid.zeta(m);
        out << fmt(z) << ',' << fmt(slice.w[grid.index(bi, bj, m)]) << ','
            << fmt(env_lo * barrier_phi(z)) << ',' << fmt(env_hi * (1.0 - z))
            << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_physical_csv(const std::string& path, const PhysicalSlice& phys,
                        const Grid& grid) {
    std::ofstream out = open_out(path);
    out << "xi,eta,z,u,v,w\n";
    for (int i = 0; i <= grid.nx(); ++i)
        for (int j = 0; j <= grid.ny(); ++j) {
            if (!grid.column_active(i, j)) continue;
            for (std::size_t jz = 0; jz < phys.z.size(); ++jz) {
                const std::size_t id = phys.index(grid, i, j, (int)jz);
                out << fmt(grid.x(i)) << ',' << fmt(grid.y(j)) << ','
                    << fmt(phys.z[jz]) << ',' << fmt(phys.u[id]) << ','
                    << fmt(phys.v[id]) << ',' << fmt(phys.w[id]) << '\n';
            }
        }
    if (!out) throw IoError("write failed: " + path);
}

void write_outputs(const ParsedRun& parsed, const SolutionHistory& hist,
                   const Grid& grid, const RunReport& report) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(parsed.output.dir, ec);
    if (ec) throw IoError("cannot create output directory: " + parsed.output.dir);
    const std::string dir = parsed.output.dir + "/";

    {
        std::ofstream echo = open_out(dir + "config.echo");
        echo << parsed.config_text;
    }
    if (parsed.output.write_slices)
        write_slices_csv(dir + "slices.csv", hist, grid);
    if (parsed.output.write_report)
        write_report_json(dir + "report.json", report);
    if (!hist.slices.empty() && !report.slices.empty()) {
        const auto& last = hist.slices.back();
        const auto& rec = report.slices.back();
        for (std::size_t p = 0; p < parsed.output.probes.size(); ++p)
            write_probe_csv(dir + "probe_" + std::to_string(p) + ".csv", last,
                            grid, parsed.output.probes[p], rec.env_lo,
                            rec.env_hi);
        if (parsed.output.write_physical) {
            const PhysicalSlice phys = reconstruct_physical(
                last, grid, parsed.scenario.k, parsed.scenario.U);
            write_physical_csv(dir + "physical.csv", phys, grid);
        }
    }
}

}  // namespace crocco

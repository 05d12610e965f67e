#include "lagtori/harness.hpp"

#include "lagtori/frames.hpp"
#include "lagtori/hmk_family.hpp"
#include "lagtori/homogeneous.hpp"
#include "lagtori/nv_flow.hpp"
#include "lagtori/pfld.hpp"
#include "lagtori/tzitzeica.hpp"

#include "json.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace lagtori {

namespace {

using json = nlohmann::ordered_json;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string hex64(std::uint64_t h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

struct Check {
    std::string name;
    double value;
    double limit;
    char relation;  // '<' value below limit, '>' value above limit, 'b' boolean (value != 0)
    bool pass;
};

class Report {
public:
    explicit Report(const RunConfig& cfg) : cfg_(cfg) {}

    json data = json::object();

    void below(const std::string& name, double value, double default_tol) {
        const double tol = cfg_.tol ? *cfg_.tol : default_tol;
        checks_.push_back({name, value, tol, '<', std::isfinite(value) && std::abs(value) < tol});
    }
    void above(const std::string& name, double value, double threshold) {
        checks_.push_back({name, value, threshold, '>', std::isfinite(value) && value > threshold});
    }
    void require(const std::string& name, bool ok) { checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, 'b', ok}); }

    bool passed() const {
        return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
    }

    json to_json() const {
        json j;
        j["header"] = {{"tool", "lagtori"},
                       {"version", kVersion},
                       {"config_hash", hex64(config_hash(cfg_))},
                       {"seed", cfg_.seed}};
        j["subcommand"] = cfg_.subcommand;
        j["status"] = passed() ? "pass" : "fail";
        for (auto& [k, v] : data.items()) j[k] = v;
        json cs = json::array(), failures = json::array();
        for (const auto& c : checks_) {
            json e = {{"name", c.name}, {"value", c.value}};
            if (c.relation == '<') e["tol"] = c.limit;
            if (c.relation == '>') e["above"] = c.limit;
            e["pass"] = c.pass;
            cs.push_back(e);
            if (!c.pass) failures.push_back(c.name);
        }
        j["checks"] = cs;
        j["failures"] = failures;
        return j;
    }

    std::string to_text() const {
        std::ostringstream os;
        os << header_line(cfg_) << '\n';
        for (auto& [k, v] : data.items()) os << k << ' ' << (v.is_number_float() ? num(v.get<double>()) : v.dump()) << '\n';
        for (const auto& c : checks_) {
            os << "check " << c.name << ' ';
            if (c.relation == 'b') os << (c.pass ? "true" : "false");
            else os << num(c.value) << ' ' << c.relation << ' ' << num(c.limit);
            os << (c.pass ? " pass" : " FAIL") << '\n';
        }
        os << "status " << (passed() ? "pass" : "fail") << '\n';
        return os.str();
    }

private:
    const RunConfig& cfg_;
    std::vector<Check> checks_;
};

struct Csv {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os, const RunConfig& cfg) const {
        os << header_line(cfg) << '\n';
        for (size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << num(r[i]);
            os << '\n';
        }
    }
    json to_json() const {
        json a = json::array();
        for (const auto& r : rows) {
            json o;
            for (size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
            a.push_back(o);
        }
        return a;
    }
};

// Writes `text` to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, std::ostream& fallback, const std::string& text) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << text;
}

std::string render(const Report& r, bool as_json) { return as_json ? r.to_json().dump(2) + "\n" : r.to_text(); }

RealField load_field(const std::string& path) {
    try {
        return read_pfld_real(path);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

SeedShape parse_shape(const std::string& s) { return s == "cross" ? SeedShape::cross : SeedShape::plane; }

// ---------------------------------------------------------------- homogeneous

int energy_homogeneous(const RunConfig& cfg, std::ostream& out) {
    const TorusTriple t = TorusTriple::normalized(cfg.r1, cfg.r2, cfg.r3, 1e-4);
    const HomogeneousInvariants inv = invariants(t);
    const EnergySplit split = decompose(t);
    const double closed = energy_closed(t), quad = energy_quadrature(t);

    Report r(cfg);
    r.data["triple"] = {t.r1, t.r2, t.r3};
    r.data["energy"] = closed;
    r.data["energy_quadrature"] = quad;
    r.data["area"] = split.area;
    r.data["willmore"] = split.willmore;
    r.data["V"] = inv.potential_V;
    r.data["beta"] = {inv.beta_x, inv.beta_y};
    r.data["lattice"] = {{inv.lattice.e1.x(), inv.lattice.e1.y()}, {inv.lattice.e2.x(), inv.lattice.e2.y()}};
    r.below("quadrature_vs_closed", std::abs(quad - closed) / closed, 1e-10);
    r.below("decomposition", std::abs(split.area + split.willmore / 8.0 - closed) / closed, 1e-12);
    r.above("energy_minus_clifford", closed - clifford_energy(), -1e-12 * closed);
    emit(cfg.out, out, render(r, true));
    return r.passed() ? exit_pass : exit_check_fail;
}

int scan_simplex_cmd(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    Csv csv{{"r1", "r2", "r3", "energy"}, {}};
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& row : scan_simplex(cfg.grid)) {
        csv.rows.push_back({row.r1, row.r2, row.r3, row.energy});
        lowest = std::min(lowest, row.energy);
    }
    Report r(cfg);
    r.data["rows"] = int(csv.rows.size());
    r.data["min_energy"] = lowest;
    r.above("min_energy_minus_clifford", lowest - clifford_energy(), -1e-12 * clifford_energy());
    if (cfg.json) {
        r.data["table"] = csv.to_json();
        emit(cfg.out, out, render(r, true));
    } else {
        std::ostringstream os;
        csv.write(os, cfg);
        emit(cfg.out, out, os.str());
        if (!r.passed()) err << render(r, true);
    }
    return r.passed() ? exit_pass : exit_check_fail;
}

// ---------------------------------------------------------------- hmk

json hmk_json(const HMKReport& h) {
    json j;
    j["m"] = h.m;
    j["n"] = h.n;
    j["k"] = h.k;
    j["p"] = h.p;
    j["r"] = h.r;
    j["area"] = h.area;
    j["willmore"] = h.willmore;
    j["energy"] = h.energy;
    j["energy_single"] = h.energy_single;
    j["bound_chain"] = h.bound_chain;
    j["margin"] = h.margin;
    j["chain_holds"] = h.chain_holds;
    j["failure"] = h.failure;
    j["topology"] = "unclassified";
    return j;
}

int energy_hmk(const RunConfig& cfg, std::ostream& out) {
    const HMKReport h = audit_bound(HMKTriple(cfg.m, cfg.n, cfg.k));
    Report r(cfg);
    const json hj = hmk_json(h);
    for (auto& [k, v] : hj.items()) r.data[k] = v;
    r.require("bound_chain", h.chain_holds);
    r.above("margin", h.margin, 0.0);
    emit(cfg.out, out, render(r, true));
    return r.passed() ? exit_pass : exit_check_fail;
}

int scan_hmk(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto reports = scan(cfg.m_max, cfg.n_max, cfg.k_min);
    Csv csv{{"m", "n", "k", "p", "r", "area", "willmore", "energy", "bound3", "margin"}, {}};
    double min_margin = std::numeric_limits<double>::infinity();
    bool chains = true;
    for (const auto& h : reports) {
        csv.rows.push_back({double(h.m), double(h.n), double(h.k), double(h.p), double(h.r), h.area, h.willmore, h.energy,
                            h.bound_chain[2], h.margin});
        min_margin = std::min(min_margin, h.margin);
        chains = chains && h.chain_holds;
    }
    Report r(cfg);
    r.data["rows"] = int(reports.size());
    r.data["min_margin"] = min_margin;
    r.require("bound_chain", chains);
    r.above("min_margin", min_margin, 0.0);
    if (cfg.json) {
        r.data["table"] = csv.to_json();
        emit(cfg.out, out, render(r, true));
    } else {
        std::ostringstream os;
        // integer columns print without exponent through %.17g
        csv.write(os, cfg);
        emit(cfg.out, out, os.str());
        if (!r.passed()) err << render(r, true);
    }
    return r.passed() ? exit_pass : exit_check_fail;
}

// ---------------------------------------------------------------- frames

struct Stat {
    double max = 0.0, sum = 0.0;
    int count = 0;
    void add(double x) {
        max = std::max(max, x);
        sum += x;
        ++count;
    }
    json to_json() const { return {{"max", max}, {"mean", count ? sum / count : 0.0}}; }
};

template <LiftSampler L>
void sample_frames(const L& lift, double x_period, const RunConfig& cfg, std::map<std::string, Stat>& stats) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = scaled_step(lift, cfg.h);
    for (int i = 0; i < cfg.points; ++i) {
        const double x = x_period * u(rng), y = u(rng);
        const FrameSample s = build_frame(lift, x, y);
        const double scale = std::max(1.0, s.A.norm() + s.B.norm());
        stats["su3"].add(std::max({(s.R * s.R.adjoint() - Eigen::Matrix3cd::Identity()).norm(),
                                   std::abs(s.R.determinant() - 1.0), (s.A + s.A.adjoint()).norm() / scale,
                                   (s.B + s.B.adjoint()).norm() / scale, std::abs(s.A.trace()) / scale,
                                   std::abs(s.B.trace()) / scale}));
        const auto ode = check_frame_odes(lift, x, y, h);
        stats["frame_odes"].add(std::max(ode.rx, ode.ry));
        stats["schrodinger"].add(check_schrodinger(lift, x, y).relative);
        const auto c = check_compatibility(lift, x, y, h);
        stats["compat_f"].add(c.eq_f);
        stats["compat_g"].add(c.eq_g);
        stats["compat_v"].add(c.eq_v);
        stats["zero_curvature"].add(c.zero_curvature);
    }
}

int verify_frames(const RunConfig& cfg, std::ostream& out) {
    std::map<std::string, Stat> stats;
    Report r(cfg);
    r.data["family"] = cfg.family;
    if (cfg.family == "homogeneous") {
        const TorusTriple t = cfg.params.empty() ? TorusTriple::clifford()
                                                 : TorusTriple::normalized(cfg.params[0], cfg.params[1], cfg.params[2], 1e-4);
        r.data["params"] = {t.r1, t.r2, t.r3};
        sample_frames(HomogeneousLift(t), 1.0, cfg, stats);
    } else {
        const HMKTriple t = cfg.params.empty() ? HMKTriple(2, 1, -1)
                                               : HMKTriple(int(cfg.params[0]), int(cfg.params[1]), int(cfg.params[2]));
        r.data["params"] = {t.m, t.n, t.k};
        HMKLift lift(t);
        sample_frames(lift, lift.xi_period(), cfg, stats);
    }
    r.data["points"] = cfg.points;
    r.data["h"] = cfg.h;
    json res;
    for (auto& [k, s] : stats) res[k] = s.to_json();
    r.data["residuals"] = res;
    const std::vector<std::pair<std::string, double>> limits = {{"su3", 1e-10},           {"frame_odes", 1e-7},
                                                                {"schrodinger", 1e-9},    {"compat_f", 1e-7},
                                                                {"compat_g", 1e-7},       {"compat_v", 1e-7},
                                                                {"zero_curvature", 1e-7}};
    for (const auto& [name, tol] : limits) r.below(name, stats[name].max, tol);
    emit(cfg.out, out, render(r, true));
    return r.passed() ? exit_pass : exit_check_fail;
}

// ---------------------------------------------------------------- tzitzeica

json solution_json(const TzitzeicaSolution& s) {
    return {{"L1", s.L1},
            {"L2", s.L2},
            {"mode", {s.mode.j, s.mode.l}},
            {"amplitude", s.amplitude},
            {"residual", s.residual_norm},
            {"iterations", s.iterations},
            {"status", to_string(s.status)},
            {"nontrivial", s.nontrivial()}};
}

int solve_tzitzeica(const RunConfig& cfg, std::ostream& out) {
    NewtonOptions opt;
    if (cfg.tol) opt.tol = *cfg.tol;
    const BranchMode mode{cfg.mode_j, cfg.mode_l};
    TzitzeicaSolution s = solve_newton(seed_field(Grid::square(cfg.grid, cfg.L), mode, cfg.eps, parse_shape(cfg.shape)), opt);
    s.mode = mode;
    write_pfld(cfg.out, s.v);

    Report r(cfg);
    r.data["grid"] = cfg.grid;
    const json sj = solution_json(s);
    for (auto& [k, v] : sj.items()) r.data[k] = v;
    r.data["field"] = cfg.out;
    r.require("converged", s.ok());
    r.below("residual", s.residual_norm, opt.tol * 1.0000001);
    out << render(r, cfg.json);
    return r.passed() ? exit_pass : exit_check_fail;
}

int continue_tzitzeica(const RunConfig& cfg, std::ostream& out) {
    ContinuationOptions opt;
    opt.grid = cfg.grid;
    opt.eps = cfg.eps;
    opt.shape = parse_shape(cfg.shape);
    if (cfg.tol) opt.newton.tol = *cfg.tol;
    const Branch br = continue_branch({cfg.mode_j, cfg.mode_l}, cfg.L_start, cfg.L_end, cfg.steps, opt);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    Csv csv{{"index", "L", "amplitude", "residual", "iterations"}, {}};
    double worst = 0.0;
    for (size_t i = 0; i < br.solutions.size(); ++i) {
        const auto& s = br.solutions[i];
        char name[32];
        std::snprintf(name, sizeof name, "v_%03zu.pfld", i);
        write_pfld((fs::path(cfg.out_dir) / name).string(), s.v);
        csv.rows.push_back({double(i), s.L1, s.amplitude, s.residual_norm, double(s.iterations)});
        worst = std::max(worst, s.residual_norm);
    }
    {
        std::ofstream f(fs::path(cfg.out_dir) / "branch.csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write branch.csv in " + cfg.out_dir);
        csv.write(f, cfg);
    }

    Report r(cfg);
    r.data["mode"] = {cfg.mode_j, cfg.mode_l};
    r.data["grid"] = cfg.grid;
    r.data["solutions"] = int(br.solutions.size());
    r.data["truncated"] = br.truncated;
    r.data["flag"] = br.flag;
    r.data["max_residual"] = worst;
    r.require("complete", !br.truncated && int(br.solutions.size()) == cfg.steps);
    r.below("max_residual", worst, 1e-10);
    emit(cfg.out, out, render(r, cfg.json));
    return r.passed() ? exit_pass : exit_check_fail;
}

// ---------------------------------------------------------------- nv

int verify_eigen(const RunConfig& cfg, std::ostream& out) {
    const RealField v = load_field(cfg.in);
    const EigenPair e = eigenfunctions_s(v);
    Report r(cfg);
    r.data["grid"] = {v.grid.n1, v.grid.n2};
    r.data["periods"] = {v.grid.L1, v.grid.L2};
    r.data["tzitzeica_residual"] = sup_norm(residual(v));
    r.data["s1_sup"] = sup_norm(e.s1);
    r.data["s2_sup"] = sup_norm(e.s2);
    r.below("s1_eigen", check_eigen(v, e.s1), 1e-6);
    r.below("s2_eigen", check_eigen(v, e.s2), 1e-6);
    emit(cfg.out, out, render(r, true));
    return r.passed() ? exit_pass : exit_check_fail;
}

int verify_nv(const RunConfig& cfg, std::ostream& out) {
    const RealField v = load_field(cfg.in);
    const DeformationData d = deformation_data(v);
    const VelocityForms forms = v_dot_forms(v);
    const SystemResiduals sys = system_residuals(v, d, forms.from_frame);
    const AreaExactness area = area_form_exactness(v, d);
    const NV2Check nv2 = nv2_check(v);
    const L5Residuals l5 = l5_residuals(v);
    const L3Residuals l3 = l3_residuals(v);

    Report r(cfg);
    r.data["grid"] = {v.grid.n1, v.grid.n2};
    r.data["periods"] = {v.grid.L1, v.grid.L2};
    r.data["tzitzeica_residual"] = sup_norm(residual(v));
    r.data["diagnostics"] = {{"eq11_w3_printed", l5.eq11_w3_printed},
                             {"eq12_printed_u1", l5.eq12_printed_u1},
                             {"nv2_imaginary", nv2.imaginary}};

    const auto sv = sys.values();
    const char* names[] = {"eq5", "eq6", "eq7", "eq8", "eq9", "eq10"};
    for (int i = 0; i < 6; ++i) r.below(names[i], sv[i], 1e-6);
    r.below("v_dot_forms", forms.disagreement, 1e-8);
    r.below("exactness", area.exactness, 1e-6);
    r.below("area_rate", area.area_rate, 1e-8);
    r.below("nv2", nv2.printed, 1e-6);
    r.below("nv2_corrected", nv2.corrected, 1e-6);
    r.below("eq11_u3", l5.eq11_u3, 1e-6);
    r.below("eq11_w3", l5.eq11_w3, 1e-6);
    r.below("eq12", l5.eq12, 1e-6);
    r.below("eq13", l5.eq13, 1e-6);
    r.below("convention_lock", l5.convention_lock, 1e-6);
    r.below("example1_u", l3.example1_u, 1e-6);
    r.below("example1_w", l3.example1_w, 1e-6);
    r.below("theorem4_z", l3.theorem4_z, 1e-6);
    r.below("theorem4_zbar", l3.theorem4_zbar, 1e-6);
    emit(cfg.out, out, render(r, true));
    return r.passed() ? exit_pass : exit_check_fail;
}

int flow_nv(const RunConfig& cfg, std::ostream& out) {
    const RealField v = load_field(cfg.in);
    FlowOptions opt;
    opt.scheme = cfg.scheme == "rk4" ? FlowScheme::rk4 : FlowScheme::implicit_midpoint;
    opt.record_every = cfg.record_every;
    const FlowResult fr = flow_integrate(v, cfg.dt, cfg.steps, opt);

    Csv csv{{"t", "area", "tz_residual", "eq5", "eq7", "eq8", "eq9", "eq10", "nv2_mismatch"}, {}};
    for (const auto& s : fr.states) {
        const auto& g = s.diagnostics;
        csv.rows.push_back({s.t, g.area, g.tzitzeica_residual, g.eq_residuals[0], g.eq_residuals[1], g.eq_residuals[2],
                            g.eq_residuals[3], g.eq_residuals[4], g.nv2_mismatch});
    }
    if (!cfg.out_csv.empty()) {
        std::ofstream f(cfg.out_csv, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + cfg.out_csv + " for writing");
        csv.write(f, cfg);
    }

    Report r(cfg);
    r.data["scheme"] = to_string(opt.scheme);
    r.data["dt"] = cfg.dt;
    r.data["steps"] = cfg.steps;
    r.data["steps_taken"] = fr.steps_taken;
    r.data["t_final"] = fr.states.empty() ? 0.0 : fr.states.back().t;
    r.data["truncated"] = fr.truncated;
    r.data["flag"] = fr.flag;
    r.data["relative_area_drift"] = fr.relative_area_drift();
    r.data["max_tzitzeica_residual"] = fr.max_tzitzeica_residual();
    r.require("completed", !fr.truncated);
    r.below("relative_area_drift", fr.relative_area_drift(), 1e-8);
    r.below("max_tzitzeica_residual", fr.max_tzitzeica_residual(), 1e-6);
    emit(cfg.out, out, render(r, cfg.json));
    return r.passed() ? exit_pass : exit_check_fail;
}

void need(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s = {"energy-homogeneous", "scan-simplex",       "energy-hmk",   "scan-hmk",
                                               "verify-frames",      "solve-tzitzeica",    "continue-tzitzeica",
                                               "verify-eigen",       "verify-nv",          "flow-nv"};
    return s;
}

void validate(const RunConfig& c) {
    const auto& subs = subcommands();
    need(std::find(subs.begin(), subs.end(), c.subcommand) != subs.end(), "unknown subcommand '" + c.subcommand + "'");
    if (c.tol) need(*c.tol > 0 && std::isfinite(*c.tol), "--tol must be positive");
    const std::string& s = c.subcommand;
    if (s == "energy-homogeneous") {
        need(c.r1 > 0 && c.r2 > 0 && c.r3 > 0, "TorusTriple: every r_i must be positive");
    } else if (s == "scan-simplex") {
        need(c.grid >= 3, "--grid must be at least 3");
    } else if (s == "energy-hmk") {
        need(c.m >= c.n && c.n > 0 && c.k < 0, "HMKTriple: requires m >= n > 0 > k");
    } else if (s == "scan-hmk") {
        need(c.m_max >= 1 && c.n_max >= 1 && c.k_min <= -1, "scan-hmk: requires m-max >= 1, n-max >= 1, k-min <= -1");
    } else if (s == "verify-frames") {
        need(c.family == "homogeneous" || c.family == "hmk", "--family must be homogeneous or hmk");
        need(c.params.empty() || c.params.size() == 3, "--params takes three values");
        if (c.family == "hmk" && !c.params.empty()) {
            for (double p : c.params) need(p == std::round(p), "HMKTriple: m, n, k must be integers");
            need(c.params[0] >= c.params[1] && c.params[1] > 0 && c.params[2] < 0, "HMKTriple: requires m >= n > 0 > k");
        }
        if (c.family == "homogeneous" && !c.params.empty())
            need(c.params[0] > 0 && c.params[1] > 0 && c.params[2] > 0, "TorusTriple: every r_i must be positive");
        need(c.points >= 1, "--points must be positive");
        need(c.h > 0, "--step must be positive");
    } else if (s == "solve-tzitzeica" || s == "continue-tzitzeica") {
        need(c.grid >= 32 && c.grid % 2 == 0, "--grid must be even and at least 32");
        need(c.mode_j >= 0 && c.mode_l >= 0 && (c.mode_j || c.mode_l), "--mode must be j,l with j, l >= 0, not 0,0");
        need(c.shape == "plane" || c.shape == "cross", "--shape must be plane or cross");
        if (c.tol) need(*c.tol >= 1e-12, "Newton tolerance must be >= 1e-12");
        if (s == "solve-tzitzeica") {
            need(c.L > 0, "--L must be positive");
            need(!c.out.empty(), "--out file.pfld is required");
        } else {
            need(c.L_start > 0 && c.L_end > 0, "--L-start and --L-end must be positive");
            need(c.steps >= 1, "--steps must be >= 1");
            need(!c.out_dir.empty(), "--out-dir is required");
        }
    } else {
        need(!c.in.empty(), "--in is required");
        if (s == "flow-nv") {
            need(c.dt > 0, "--dt must be positive");
            need(c.steps >= 0, "--steps must be non-negative");
            need(c.record_every >= 1, "--record-every must be positive");
            need(c.scheme == "midpoint" || c.scheme == "rk4", "--scheme must be midpoint or rk4");
        }
    }
}

std::string canonical_config(const RunConfig& c) {
    std::ostringstream os;
    os << "subcommand=" << c.subcommand << '\n';
    os << "tol=" << (c.tol ? num(*c.tol) : "default") << '\n';
    os << "seed=" << c.seed << '\n';
    const std::string& s = c.subcommand;
    if (s == "energy-homogeneous") os << "r=" << num(c.r1) << ',' << num(c.r2) << ',' << num(c.r3) << '\n';
    if (s == "scan-simplex") os << "grid=" << c.grid << '\n';
    if (s == "energy-hmk") os << "mnk=" << c.m << ',' << c.n << ',' << c.k << '\n';
    if (s == "scan-hmk") os << "range=" << c.m_max << ',' << c.n_max << ',' << c.k_min << '\n';
    if (s == "verify-frames") {
        os << "family=" << c.family << "\nparams=";
        for (double p : c.params) os << num(p) << ',';
        os << "\npoints=" << c.points << "\nh=" << num(c.h) << '\n';
    }
    if (s == "solve-tzitzeica" || s == "continue-tzitzeica") {
        os << "grid=" << c.grid << "\nmode=" << c.mode_j << ',' << c.mode_l << "\neps=" << num(c.eps)
           << "\nshape=" << c.shape << '\n';
        if (s == "solve-tzitzeica") os << "L=" << num(c.L) << '\n';
        else os << "L=" << num(c.L_start) << ',' << num(c.L_end) << "\nsteps=" << c.steps << '\n';
    }
    if (s == "verify-eigen" || s == "verify-nv" || s == "flow-nv") os << "in=" << c.in << '\n';
    if (s == "flow-nv")
        os << "dt=" << num(c.dt) << "\nsteps=" << c.steps << "\nscheme=" << c.scheme << "\nrecord_every=" << c.record_every
           << '\n';
    return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : canonical_config(cfg)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string header_line(const RunConfig& cfg) {
    return std::string("# lagtori ") + kVersion + " config=" + hex64(config_hash(cfg)) + " seed=" + std::to_string(cfg.seed);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
    using Cmd = std::function<int()>;
    const std::map<std::string, Cmd> table = {
        {"energy-homogeneous", [&] { return energy_homogeneous(cfg, out); }},
        {"scan-simplex", [&] { return scan_simplex_cmd(cfg, out, err); }},
        {"energy-hmk", [&] { return energy_hmk(cfg, out); }},
        {"scan-hmk", [&] { return scan_hmk(cfg, out, err); }},
        {"verify-frames", [&] { return verify_frames(cfg, out); }},
        {"solve-tzitzeica", [&] { return solve_tzitzeica(cfg, out); }},
        {"continue-tzitzeica", [&] { return continue_tzitzeica(cfg, out); }},
        {"verify-eigen", [&] { return verify_eigen(cfg, out); }},
        {"verify-nv", [&] { return verify_nv(cfg, out); }},
        {"flow-nv", [&] { return flow_nv(cfg, out); }},
    };
    try {
        return table.at(cfg.subcommand)();
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        json j = {{"header", {{"tool", "lagtori"}, {"version", kVersion}, {"config_hash", hex64(config_hash(cfg))}, {"seed", cfg.seed}}},
                  {"subcommand", cfg.subcommand},
                  {"status", "fail"},
                  {"error", e.what()}};
        err << j.dump(2) << '\n';
        return exit_check_fail;
    }
}

}  // namespace lagtori

#include "lagtori/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

bool parse_mode(const std::string& s, lagtori::RunConfig& cfg) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) return false;
    try {
        size_t a = 0, b = 0;
        cfg.mode_j = std::stoi(s.substr(0, comma), &a);
        cfg.mode_l = std::stoi(s.substr(comma + 1), &b);
        return a == comma && b == s.size() - comma - 1;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    lagtori::RunConfig cfg;
    double tol = 0.0;
    std::string mode = "1,0";

    CLI::App app{"Numerical experiments on Lagrangian tori and the Tzitzeica equation"};
    app.set_version_flag("--version", lagtori::kVersion);
    app.require_subcommand(1);
    app.fallthrough();
    auto* tol_opt = app.add_option("--tol", tol, "Override every check tolerance");
    app.add_option("--seed", cfg.seed, "Seed for random sampling");
    app.add_option("--out", cfg.out, "Output path (stdout when omitted)");
    app.add_flag("--json", cfg.json, "Emit the report as JSON");

    auto* eh = app.add_subcommand("energy-homogeneous", "Energy of a homogeneous torus");
    eh->add_option("--r1", cfg.r1)->required();
    eh->add_option("--r2", cfg.r2)->required();
    eh->add_option("--r3", cfg.r3)->required();

    auto* ss = app.add_subcommand("scan-simplex", "Energy over a grid of the simplex");
    ss->add_option("--grid", cfg.grid)->required();

    auto* ek = app.add_subcommand("energy-hmk", "Energy and bound chain of one Sigma_{m,n,k}");
    ek->add_option("--m", cfg.m)->required();
    ek->add_option("--n", cfg.n)->required();
    ek->add_option("--k", cfg.k)->required();

    auto* sk = app.add_subcommand("scan-hmk", "Bound chain over a range of (m, n, k)");
    sk->add_option("--m-max", cfg.m_max)->required();
    sk->add_option("--n-max", cfg.n_max)->required();
    sk->add_option("--k-min", cfg.k_min)->required();

    auto* vf = app.add_subcommand("verify-frames", "Frame, Schrodinger and compatibility residuals");
    vf->add_option("--family", cfg.family)->required()->check(CLI::IsMember({"homogeneous", "hmk"}));
    vf->add_option("--params", cfg.params, "r1 r2 r3 or m n k")->expected(3);
    vf->add_option("--points", cfg.points);
    vf->add_option("--step", cfg.h, "Finite-difference step at unit frequency");

    auto* st = app.add_subcommand("solve-tzitzeica", "Newton solve from a seeded mode");
    st->add_option("--L", cfg.L)->required();
    st->add_option("--grid", cfg.grid)->default_val(64);
    st->add_option("--mode", mode, "j,l")->default_val("1,0");
    st->add_option("--eps", cfg.eps)->default_val(0.3);
    st->add_option("--shape", cfg.shape)->default_val("plane");

    auto* ct = app.add_subcommand("continue-tzitzeica", "Natural-parameter continuation in the period");
    ct->add_option("--mode", mode, "j,l")->default_val("1,0");
    ct->add_option("--L-start", cfg.L_start)->required();
    ct->add_option("--L-end", cfg.L_end)->required();
    ct->add_option("--steps", cfg.steps)->required();
    ct->add_option("--out-dir", cfg.out_dir)->required();
    ct->add_option("--grid", cfg.grid)->default_val(64);
    ct->add_option("--eps", cfg.eps)->default_val(0.3);
    ct->add_option("--shape", cfg.shape)->default_val("plane");

    auto* ve = app.add_subcommand("verify-eigen", "Eigenfunction relation for s1 and s2");
    ve->add_option("--in", cfg.in)->required();

    auto* vn = app.add_subcommand("verify-nv", "Deformation system, area form and hierarchy relations");
    vn->add_option("--in", cfg.in)->required();

    auto* fl = app.add_subcommand("flow-nv", "Integrate the second flow");
    fl->add_option("--in", cfg.in)->required();
    fl->add_option("--dt", cfg.dt)->default_val(1e-4);
    fl->add_option("--steps", cfg.steps)->required();
    fl->add_option("--out-csv", cfg.out_csv);
    fl->add_option("--scheme", cfg.scheme)->default_val("midpoint");
    fl->add_option("--record-every", cfg.record_every)->default_val(100);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : lagtori::exit_usage;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (*tol_opt) cfg.tol = tol;
    if (!parse_mode(mode, cfg)) {
        std::cerr << "usage error: --mode must be j,l\n";
        return lagtori::exit_usage;
    }
    return lagtori::run(cfg, std::cout, std::cerr);
}

// aglv: anisotropic Ginzburg-Landau vortex toolkit.
//
// Subcommands: boundary, radial, solve, pohozaev, construct, delta0, sweep,
// diagnostics. Exit codes: 0 success, 1 validation error, 2 solver
// non-convergence, 3 partial sweep failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "agl/analysis.hpp"
#include "agl/boundary.hpp"
#include "agl/comparison.hpp"
#include "agl/energy.hpp"
#include "agl/io_util.hpp"
#include "agl/radial.hpp"
#include "agl/solver.hpp"
#include "agl/stress.hpp"

namespace {

using namespace agl;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitPartialSweep = 3;

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

struct GlobalFlags {
    int threads = 1;
    unsigned seed = 0;
    double tol = 0.0;  // 0: keep per-command defaults
};

int run_boundary(int d, const std::string& sign_s, double delta, int M, double tol,
                 const std::string& out_phase, const std::string& out_summary) {
    if (d > -1) throw std::invalid_argument("d must be <= -1");
    const Sign sign = sign_from_string(sign_s);
    const auto t0 = now_seconds();
    const CircleMinimizeResult r = minimize_circle(d, sign, delta, M, tol);
    const double elapsed = now_seconds() - t0;

    const double pi_d2 = M_PI * d * d;
    nlohmann::json j;
    j["d"] = d;
    j["sign"] = sign_s;
    j["delta"] = delta;
    j["M"] = M;
    j["C"] = r.energy.value;
    j["margin_below_pi_d2"] = pi_d2 - r.energy.value;
    j["el_residual"] = r.energy.el_residual;
    j["start_values"] = r.start_values;
    j["start_disagreement"] = r.start_disagreement;
    j["iterations"] = r.iterations;
    j["elapsed_seconds"] = elapsed;
    std::cout << j.dump(2) << "\n";
    if (!out_phase.empty()) write_phase_csv(r.phase, delta, r.energy.value, out_phase);
    if (!out_summary.empty()) atomic_write(out_summary, j.dump(2) + "\n");
    return kExitOk;
}

int run_radial(int d, double r_max, int N, double tol, const std::string& out) {
    const RadialProfile p = solve_radial_profile(d, r_max, N, tol);
    nlohmann::json j;
    j["d"] = d;
    j["R_max"] = r_max;
    j["N"] = N;
    j["eta_at_1"] = p.eta_at(1.0);
    j["residual_sup"] = p.residual_sup;
    j["boundary_defect"] = p.boundary_defect;
    j["far_field_gap"] = p.far_field_gap;
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) write_profile_csv(p, tol, out);
    return kExitOk;
}

SolveConfig config_from_map(const std::map<std::string, std::string>& kv) {
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument(std::string("config missing key ") + key);
        return it->second;
    };
    auto get_or = [&](const char* key, const std::string& fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    SolveConfig cfg;
    cfg.cls = SymmetryClass(std::stoi(need("d")), sign_from_string(need("sign")));
    cfg.delta = std::stod(need("delta"));
    cfg.R = std::stod(need("R"));
    cfg.Nr = std::stoi(need("Nr"));
    cfg.Ntheta = std::stoi(need("Ntheta"));
    cfg.tol = std::stod(get_or("tol", "1e-6"));
    cfg.max_iters = std::stoi(get_or("max_iters", "50000"));
    cfg.symmetrize_every = std::stoi(get_or("symmetrize_every", "25"));
    const std::string init = get_or("init", "radial");
    if (init == "radial") {
        cfg.init = SolveConfig::Init::radial;
    } else if (init.rfind("construction", 0) == 0) {
        cfg.init = SolveConfig::Init::construction;
        const auto colon = init.find(':');
        cfg.construction_N = colon == std::string::npos ? 0 : std::stoi(init.substr(colon + 1));
    } else if (init == "file") {
        cfg.init = SolveConfig::Init::file;
        cfg.init_file = need("init_file");
    } else {
        throw std::invalid_argument("unknown init mode: " + init);
    }
    return cfg;
}

int run_solve(const std::string& config_path, double tol_override) {
    const auto kv = parse_config(read_file(config_path));
    SolveConfig cfg = config_from_map(kv);
    if (tol_override > 0.0) cfg.tol = tol_override;
    const std::string out_field =
        kv.count("out_field") ? kv.at("out_field") : std::string("field.csv");
    const std::string out_summary =
        kv.count("out_summary") ? kv.at("out_summary") : std::string("summary.json");

    const auto t0 = now_seconds();
    SolveResult res;
    try {
        res = minimize_2d(cfg);
    } catch (SolveFailure& f) {
        std::cerr << "solve failed: " << f.what() << "\n";
        write_field_csv(f.best.field, out_field);
        atomic_write(out_summary, result_summary_json(cfg, f.best, now_seconds() - t0));
        return kExitSolver;
    }
    write_field_csv(res.field, out_field);
    const std::string summary = result_summary_json(cfg, res, now_seconds() - t0);
    atomic_write(out_summary, summary);
    std::cout << summary;
    return res.converged ? kExitOk : kExitSolver;
}

int run_pohozaev(const std::string& field_path, double delta, const std::string& center_s,
                 double radius, int order) {
    const Field2D f = read_field_csv(field_path);
    const auto parts = parse_double_list(center_s);
    if (parts.size() != 2) throw std::invalid_argument("center must be x,y");
    const PohozaevReport rep = pohozaev(f, delta, Vec2{parts[0], parts[1]}, radius, order);
    nlohmann::json j;
    j["center"] = {rep.center.x, rep.center.y};
    j["radius"] = rep.radius;
    j["quadrature_order"] = rep.quadrature_order;
    j["identity1"] = {{"lhs", rep.lhs1},
                      {"rhs", rep.rhs1},
                      {"residual", rep.residual1},
                      {"relative", rep.relative1}};
    j["identity2"] = {{"lhs", rep.lhs2},
                      {"rhs", rep.rhs2},
                      {"residual", rep.residual2},
                      {"relative", rep.relative2}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_construct(int d, int N, double epsilon, int Nr, int Ntheta, const std::string& out) {
    const auto spec = ComparisonMapSpec::make(d, N, epsilon);
    const Field2D f = construct_comparison(spec, Nr, Ntheta);
    nlohmann::json j;
    j["d"] = d;
    j["N"] = N;
    j["epsilon"] = epsilon;
    j["rho"] = spec.rho;
    j["total_degree"] = spec.total_degree();
    j["winding_at_0.45"] = winding_number(FieldSampler(f, false).circle(0.45, 1024));
    j["equivariance_residual"] = equivariance_residual(SymmetryClass(d, Sign::plus), f);
    std::cout << j.dump(2) << "\n";
    if (!out.empty()) write_field_csv(f, out);
    return kExitOk;
}

int run_delta0(int dmin, int dmax, const std::string& out) {
    if (dmin > dmax || dmax > -1) throw std::invalid_argument("need dmin <= dmax <= -1");
    std::vector<int> ds;
    for (int d = dmax; d >= dmin; --d) ds.push_back(d);
    const std::string csv = threshold_table_csv(ds);
    std::cout << csv;
    if (!out.empty()) atomic_write(out, csv);
    return kExitOk;
}

int run_diagnostics(const std::string& field_path, double delta, const std::string& radii_s,
                    const std::string& out) {
    const Field2D f = read_field_csv(field_path);
    const auto radii = parse_double_list(radii_s);
    if (radii.empty()) throw std::invalid_argument("no radii given");
    const auto rows = circle_diagnostics(f, delta, radii);
    const std::string csv = diagnostics_csv(rows);
    std::cout << csv;
    if (!out.empty()) atomic_write(out, csv);
    return kExitOk;
}

struct SweepRow {
    int d = 0;
    Sign sign = Sign::plus;
    double delta = 0.0, R = 0.0;
    bool attempted = false;
    bool ok = false;
    std::string status = "skipped";
    double e_total = 0.0, w_mass = 0.0, nonrad = 0.0;
    int winding = 0;
    bool winding_defined = false;
};

int run_sweep(const std::string& spec_path, int threads) {
    const auto kv = parse_config(read_file(spec_path));
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument(std::string("sweep missing key ") + key);
        return it->second;
    };
    const std::vector<int> d_list = parse_int_list(need("d_list"));
    std::vector<Sign> sign_list;
    for (const auto& s : split(need("sign_list"), ','))
        if (!s.empty()) sign_list.push_back(sign_from_string(s));
    const std::vector<double> delta_list = parse_double_list(need("delta_list"));
    const std::vector<double> R_list = parse_double_list(need("R_list"));
    const int Nr = std::stoi(need("Nr"));
    const int Ntheta = std::stoi(need("Ntheta"));
    const std::string output_dir = need("output_dir");
    const double tol = kv.count("tol") ? std::stod(kv.at("tol")) : 1e-6;
    const int max_iters = kv.count("max_iters") ? std::stoi(kv.at("max_iters")) : 50000;
    if (d_list.empty() || sign_list.empty() || delta_list.empty() || R_list.empty())
        throw std::invalid_argument("sweep lists must be nonempty");
    for (double delta : delta_list)
        if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("sweep deltas must be in [0,1)");

    std::filesystem::create_directories(output_dir);

    // One continuation chain per (d, sign, R); chains are independent.
    struct Chain {
        int d;
        Sign sign;
        double R;
    };
    std::vector<Chain> chains;
    for (int d : d_list)
        for (Sign s : sign_list)
            for (double R : R_list) chains.push_back({d, s, R});

    std::map<std::string, SweepRow> rows;
    auto row_key = [](int d, Sign s, double delta, double R) {
        std::ostringstream k;
        k << d << "|" << to_string(s) << "|" << fmt_double(delta) << "|" << fmt_double(R);
        return k.str();
    };
    for (int d : d_list)
        for (Sign s : sign_list)
            for (double delta : delta_list)
                for (double R : R_list) {
                    SweepRow row;
                    row.d = d;
                    row.sign = s;
                    row.delta = delta;
                    row.R = R;
                    rows[row_key(d, s, delta, R)] = row;
                }

    std::mutex rows_mutex;
    auto run_chain = [&](const Chain& chain) {
        SolveConfig base;
        base.cls = SymmetryClass(chain.d, chain.sign);
        base.R = chain.R;
        base.Nr = Nr;
        base.Ntheta = Ntheta;
        base.tol = tol;
        base.max_iters = max_iters;
        const Field2D* warm = nullptr;
        Field2D warm_store = Field2D::disk(1.0, 1, 1);
        bool broken = false;
        std::string broken_msg;
        for (double delta : delta_list) {
            SweepRow local;
            local.d = chain.d;
            local.sign = chain.sign;
            local.delta = delta;
            local.R = chain.R;
            local.attempted = true;
            if (broken) {
                local.status = "skipped: " + broken_msg;
            } else {
                SolveConfig cfg = base;
                cfg.delta = delta;
                try {
                    SolveResult res = minimize_2d(cfg, warm);
                    if (!res.converged) throw SolveFailure("not converged", std::move(res));
                    local.ok = true;
                    local.status = "ok";
                    local.e_total = res.breakdown.total;
                    local.w_mass = 2.0 * res.breakdown.potential;
                    const double rprobe = chain.R > 2.0 ? 1.0 : chain.R / 2.0;
                    local.nonrad = nonradiality(res.field, rprobe);
                    try {
                        local.winding = degree_at_infinity(res.field);
                        local.winding_defined = true;
                    } catch (const std::exception&) {
                        local.winding_defined = false;
                    }
                    std::ostringstream dir;
                    dir << output_dir << "/d" << chain.d << "_" << to_string(chain.sign)
                        << "_delta" << fmt_double(delta) << "_R" << fmt_double(chain.R);
                    write_field_csv(res.field, dir.str() + "/field.csv");
                    atomic_write(dir.str() + "/summary.json",
                                 result_summary_json(cfg, res, 0.0));
                    warm_store = std::move(res.field);
                    warm = &warm_store;
                } catch (const std::exception& e) {
                    local.status = std::string("failed: ") + e.what();
                    broken = true;
                    broken_msg = "continuation broken at delta=" + fmt_double(delta);
                }
            }
            std::lock_guard<std::mutex> lock(rows_mutex);
            rows[row_key(chain.d, chain.sign, delta, chain.R)] = local;
        }
    };

    if (threads <= 1) {
        for (const auto& chain : chains) run_chain(chain);
    } else {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        const int nworkers = std::min<size_t>(threads, chains.size());
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (size_t k = next.fetch_add(1); k < chains.size(); k = next.fetch_add(1))
                    run_chain(chains[k]);
            });
        for (auto& t : pool) t.join();
    }

    std::ostringstream csv;
    csv << "d,sign,delta,R,E_total,W_mass,winding,delta0,in_threshold_region,nonradiality,status\n";
    bool any_failed = false;
    for (int d : d_list)
        for (Sign s : sign_list)
            for (double delta : delta_list)
                for (double R : R_list) {
                    const SweepRow& row = rows.at(row_key(d, s, delta, R));
                    const ThresholdRecord rec = delta0(d);
                    std::string status = row.status;
                    for (auto& ch : status)
                        if (ch == ',') ch = ';';
                    csv << d << "," << to_string(s) << "," << fmt_double(delta) << ","
                        << fmt_double(R) << ",";
                    if (row.ok)
                        csv << fmt_double(row.e_total) << "," << fmt_double(row.w_mass) << ",";
                    else
                        csv << ",,";
                    if (row.ok && row.winding_defined)
                        csv << row.winding;
                    csv << "," << fmt_double(rec.delta0) << ","
                        << (delta < rec.delta0 ? 1 : 0) << ",";
                    if (row.ok) csv << fmt_double(row.nonrad);
                    csv << "," << status << "\n";
                    if (!row.ok) any_failed = true;
                }
    atomic_write(output_dir + "/aggregate.csv", csv.str());
    std::cout << csv.str();
    return any_failed ? kExitPartialSweep : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic Ginzburg-Landau vortex toolkit"};
    app.require_subcommand(1);

    GlobalFlags flags;
    app.add_option("--threads", flags.threads, "worker threads for sweeps")
        ->envname("AGLV_THREADS");
    app.add_option("--seed", flags.seed, "seed for randomized harnesses")->envname("AGLV_SEED");
    app.add_option("--tol", flags.tol, "override solver tolerance")->envname("AGLV_TOL");

    // boundary
    auto* cmd_boundary = app.add_subcommand("boundary", "circle problem minimizer");
    int b_d = -1, b_M = 256;
    std::string b_sign = "plus", b_out_phase, b_out_summary;
    double b_delta = 0.0, b_tol = 1e-10;
    cmd_boundary->add_option("-d,--degree", b_d, "degree d <= -1")->required();
    cmd_boundary->add_option("--sign", b_sign, "plus or minus");
    cmd_boundary->add_option("--delta", b_delta, "anisotropy in (-1,1)");
    cmd_boundary->add_option("-M,--samples", b_M, "phase samples (multiple of 4n)");
    cmd_boundary->add_option("--tol", b_tol, "EL residual tolerance");
    cmd_boundary->add_option("--out-phase", b_out_phase, "phase CSV path");
    cmd_boundary->add_option("--out-summary", b_out_summary, "summary JSON path");

    // radial
    auto* cmd_radial = app.add_subcommand("radial", "radial profile solver");
    int r_d = -1, r_N = 4096;
    double r_rmax = 40.0, r_tol = 1e-10;
    std::string r_out;
    cmd_radial->add_option("-d,--degree", r_d, "degree (d <= -1 or d = 1)")->required();
    cmd_radial->add_option("--rmax", r_rmax, "truncation radius");
    cmd_radial->add_option("-N,--segments", r_N, "radial segments");
    cmd_radial->add_option("--tol", r_tol, "Newton residual tolerance");
    cmd_radial->add_option("--out", r_out, "profile CSV path");

    // solve
    auto* cmd_solve = app.add_subcommand("solve", "2D equivariant minimizer");
    std::string s_config;
    cmd_solve->add_option("--config", s_config, "key = value config file")->required();

    // pohozaev
    auto* cmd_poh = app.add_subcommand("pohozaev", "disk identities on a saved field");
    std::string p_field, p_center = "0,0";
    double p_delta = 0.0, p_radius = 1.0;
    int p_order = 512;
    cmd_poh->add_option("--field", p_field, "field CSV")->required();
    cmd_poh->add_option("--delta", p_delta, "anisotropy")->required();
    cmd_poh->add_option("--center", p_center, "disk center x,y");
    cmd_poh->add_option("--radius", p_radius, "disk radius")->required();
    cmd_poh->add_option("--order", p_order, "circle quadrature points");

    // construct
    auto* cmd_con = app.add_subcommand("construct", "multi-vortex comparison map");
    int c_d = -1, c_N = 0, c_Nr = 256, c_Nt = 256;
    double c_eps = 1e-2;
    std::string c_out;
    cmd_con->add_option("-d,--degree", c_d, "origin degree d <= -1")->required();
    cmd_con->add_option("-N,--rings", c_N, "satellite rings");
    cmd_con->add_option("--epsilon", c_eps, "core scale");
    cmd_con->add_option("--Nr", c_Nr, "radial nodes");
    cmd_con->add_option("--Ntheta", c_Nt, "angular nodes");
    cmd_con->add_option("--out", c_out, "field CSV path");

    // delta0
    auto* cmd_d0 = app.add_subcommand("delta0", "degree threshold table");
    int d0_min = -3, d0_max = -1;
    std::string d0_out;
    cmd_d0->add_option("--dmin", d0_min, "most negative degree");
    cmd_d0->add_option("--dmax", d0_max, "least negative degree");
    cmd_d0->add_option("--out", d0_out, "table CSV path");

    // sweep
    auto* cmd_sw = app.add_subcommand("sweep", "(d, delta, R) sweep harness");
    std::string sw_spec;
    cmd_sw->add_option("--spec", sw_spec, "sweep spec file")->required();

    // diagnostics
    auto* cmd_diag = app.add_subcommand("diagnostics", "circle diagnostics of a saved field");
    std::string dg_field, dg_radii, dg_out;
    double dg_delta = 0.0;
    cmd_diag->add_option("--field", dg_field, "field CSV")->required();
    cmd_diag->add_option("--delta", dg_delta, "anisotropy")->required();
    cmd_diag->add_option("--radii", dg_radii, "comma-separated radii")->required();
    cmd_diag->add_option("--out", dg_out, "diagnostics CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (cmd_boundary->parsed())
            return run_boundary(b_d, b_sign, b_delta, b_M, flags.tol > 0 ? flags.tol : b_tol,
                                b_out_phase, b_out_summary);
        if (cmd_radial->parsed())
            return run_radial(r_d, r_rmax, r_N, flags.tol > 0 ? flags.tol : r_tol, r_out);
        if (cmd_solve->parsed()) return run_solve(s_config, flags.tol);
        if (cmd_poh->parsed()) return run_pohozaev(p_field, p_delta, p_center, p_radius, p_order);
        if (cmd_con->parsed()) return run_construct(c_d, c_N, c_eps, c_Nr, c_Nt, c_out);
        if (cmd_d0->parsed()) return run_delta0(d0_min, d0_max, d0_out);
        if (cmd_sw->parsed()) return run_sweep(sw_spec, flags.threads);
        if (cmd_diag->parsed()) return run_diagnostics(dg_field, dg_delta, dg_radii, dg_out);
    } catch (const SolveFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const CircleSolveFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}

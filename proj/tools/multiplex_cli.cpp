// Command-line front end: simulate | analytic | compare | selfcheck.
//
// Exit codes: 0 pass, 1 check failure, 2 usage or config error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "multiplex/analytics.hpp"
#include "multiplex/graph.hpp"
#include "multiplex/io.hpp"
#include "multiplex/params.hpp"
#include "multiplex/selfcheck.hpp"
#include "multiplex/stats.hpp"
#include "multiplex/version.hpp"

namespace fs = std::filesystem;
using namespace multiplex;

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("MULTIPLEX_OUT_DIR")) return env;
    return "out";
}

ModelParams load_config(const std::string& path) {
    return params_from_config_text(read_file(path));
}

void apply_overrides(ModelParams& params, std::optional<std::uint64_t> t_max,
                     std::optional<std::uint64_t> seed) {
    if (t_max) params.t_max = *t_max;
    if (seed) params.rng_seed = *seed;
    params.validate();
}

struct SimulateArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> t_max;
    std::optional<std::uint64_t> seed;
    std::uint32_t replicas = 1;
};

int run_simulate(const SimulateArgs& args) {
    ModelParams params = load_config(args.config_path);
    apply_overrides(params, args.t_max, args.seed);

    const fs::path out(args.out_dir);
    fs::create_directories(out);

    RunManifest manifest;
    manifest.config = params_to_json(params);
    manifest.rng_seed = params.rng_seed;
    manifest.created_utc = utc_timestamp();

    if (args.replicas <= 1) {
        MultiplexGraph graph = grow(params);
        emit_output(manifest, out, "edges.tsv", edges_tsv(graph));
        emit_output(manifest, out, "nodes.csv", nodes_csv(graph));
    } else {
        std::vector<MultiplexGraph> graphs(args.replicas);
        std::vector<std::thread> workers;
        workers.reserve(args.replicas);
        for (std::uint32_t i = 0; i < args.replicas; ++i) {
            workers.emplace_back([&, i] {
                ModelParams rp = params;
                rp.rng_seed = replica_seed(params.rng_seed, i);
                graphs[i] = grow(rp);
            });
        }
        for (auto& w : workers) w.join();
        // deterministic order: outputs appended by replica index
        char name[32];
        for (std::uint32_t i = 0; i < args.replicas; ++i) {
            std::snprintf(name, sizeof(name), "rep%03u", i);
            fs::create_directories(out / name);
            emit_output(manifest, out, std::string(name) + "/edges.tsv",
                        edges_tsv(graphs[i]));
            emit_output(manifest, out, std::string(name) + "/nodes.csv",
                        nodes_csv(graphs[i]));
        }
    }
    write_file(out / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
    std::cout << "simulate: wrote " << manifest.outputs.size() << " outputs to "
              << out.string() << "\n";
    return 0;
}

struct AnalyticArgs {
    std::string config_path;
    std::string out_dir;
    std::vector<double> thetas;
    int q_max = 1000;
    int joint_k = 50;
    int joint_ell = 50;
};

int run_analytic(const AnalyticArgs& args) {
    ModelParams params = load_config(args.config_path);
    const fs::path out(args.out_dir);
    fs::create_directories(out);

    std::vector<double> thetas = args.thetas;
    if (thetas.empty()) thetas = params.fitness.support(1e-6);

    std::vector<JointDistributionTable> marginals, joints;
    marginals.reserve(thetas.size());
    joints.reserve(thetas.size());
    for (double theta : thetas) {
        marginals.push_back(closed_form_marginal_table(args.q_max, theta, params));
        joints.push_back(closed_form_joint_table(args.joint_k, args.joint_ell, theta, params));
    }

    RunManifest manifest;
    manifest.config = params_to_json(params);
    manifest.rng_seed = params.rng_seed;
    manifest.created_utc = utc_timestamp();
    emit_output(manifest, out, "analytic_marginal.csv", marginal_table_csv(marginals));
    emit_output(manifest, out, "analytic_joint.csv", joint_table_csv(joints));
    write_file(out / "manifest.json", manifest_to_json(manifest).dump(2) + "\n");
    std::cout << "analytic: wrote tables for " << thetas.size() << " fitness values to "
              << out.string() << "\n";
    return 0;
}

struct CompareArgs {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> t_max;
    std::optional<std::uint64_t> seed;
    CompareOptions options;
};

void print_report(const ComparisonReport& r) {
    std::printf("nodes: %llu total, %llu compared after censoring (%s)\n",
                static_cast<unsigned long long>(r.nodes_total),
                static_cast<unsigned long long>(r.nodes_compared),
                r.options.censor.enabled ? "on" : "off");
    std::printf("TV distance per fitness value (q_cap=%d, tol=%.3g, min nodes=%llu):\n",
                r.options.q_cap, r.options.tv_tol,
                static_cast<unsigned long long>(r.options.tv_min_nodes));
    if (r.tv_rows.empty()) {
        std::printf("  (no fitness value reached the node threshold; not evaluable)\n");
    }
    for (const auto& row : r.tv_rows) {
        std::printf("  theta=%-6g n=%-7llu tv=%.4f  %s\n", row.theta,
                    static_cast<unsigned long long>(row.nodes), row.tv,
                    row.pass ? "pass" : "FAIL");
    }
    if (r.tail.evaluated) {
        std::printf("tail: alpha=%.4f +- %.4f (n=%llu, q_min=%u), expected %.4f  %s\n",
                    r.tail.alpha, r.tail.stderr_,
                    static_cast<unsigned long long>(r.tail.n_tail),
                    r.options.tail_q_min, r.tail.expected,
                    r.tail.pass ? "pass" : "FAIL");
    } else {
        std::printf("tail: not evaluable (%s)\n", r.tail.note.c_str());
    }
    if (r.slope.evaluated) {
        std::printf("mean vs fitness: slope=%.5f intercept=%.4f, expected slope %.5f  %s\n",
                    r.slope.slope, r.slope.intercept, r.slope.expected_slope,
                    r.slope.pass ? "pass" : "FAIL");
    } else {
        std::printf("mean vs fitness: not evaluable (%s)\n", r.slope.note.c_str());
    }
    std::printf("overall mean degree: %.5f, expected %.5f  %s\n", r.overall_mean.mean,
                r.overall_mean.expected, r.overall_mean.pass ? "pass" : "FAIL");
}

int run_compare(const CompareArgs& args) {
    ModelParams params = load_config(args.config_path);
    apply_overrides(params, args.t_max, args.seed);
    const fs::path out(args.out_dir);
    fs::create_directories(out);

    MultiplexGraph graph = grow(params);
    ComparisonReport report = compare_against_theory(graph, params, args.options);

    nlohmann::json j = report_to_json(report);
    j["config"] = params_to_json(params);
    j["version"] = kVersion;
    write_file(out / "report.json", j.dump(2) + "\n");
    print_report(report);

    if (!report.fully_evaluated()) {
        std::printf("note: some checks were not evaluable at this sample size\n");
    }
    return report.all_evaluated_pass() ? 0 : 1;
}

int run_selfcheck(long terms) {
    std::vector<CheckRow> rows = identity_grid_checks(terms);
    std::vector<CheckRow> oracle = oracle_grid_checks();
    rows.insert(rows.end(), oracle.begin(), oracle.end());
    rows.push_back(stirling_row_check());

    bool all_pass = true;
    std::printf("%-40s %12s %10s  %s\n", "check", "deviation", "tolerance", "status");
    for (const auto& row : rows) {
        all_pass = all_pass && row.pass();
        std::printf("%-40s %12.3e %10.0e  %s\n", row.name.c_str(), row.deviation,
                    row.tolerance, row.pass() ? "pass" : "FAIL");
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-layer fitness/preferential-attachment multiplex toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* cmd_sim = app.add_subcommand("simulate", "grow a network and export it");
    cmd_sim->add_option("--config", sim.config_path, "experiment config JSON")->required();
    cmd_sim->add_option("--out", sim.out_dir, "output directory")
        ->default_val(default_out_dir());
    cmd_sim->add_option("--t-max", sim.t_max, "override t_max");
    cmd_sim->add_option("--seed", sim.seed, "override rng_seed");
    cmd_sim->add_option("--replicas", sim.replicas, "independent seeded replicas")
        ->default_val(1u);

    AnalyticArgs ana;
    auto* cmd_ana = app.add_subcommand("analytic", "evaluate closed-form tables");
    cmd_ana->add_option("--config", ana.config_path, "experiment config JSON")->required();
    cmd_ana->add_option("--out", ana.out_dir, "output directory")
        ->default_val(default_out_dir());
    cmd_ana->add_option("--theta", ana.thetas,
                        "fitness values (default: distribution support)");
    cmd_ana->add_option("--q-max", ana.q_max, "largest q in the marginal table")
        ->default_val(1000);
    cmd_ana->add_option("--joint-k", ana.joint_k, "joint table k bound")->default_val(50);
    cmd_ana->add_option("--joint-ell", ana.joint_ell, "joint table ell bound")
        ->default_val(50);

    CompareArgs cmp;
    auto* cmd_cmp = app.add_subcommand("compare", "simulate and compare against theory");
    cmd_cmp->add_option("--config", cmp.config_path, "experiment config JSON")->required();
    cmd_cmp->add_option("--out", cmp.out_dir, "output directory")
        ->default_val(default_out_dir());
    cmd_cmp->add_option("--t-max", cmp.t_max, "override t_max");
    cmd_cmp->add_option("--seed", cmp.seed, "override rng_seed");
    cmd_cmp->add_flag("--censor,!--no-censor", cmp.options.censor.enabled,
                      "exclude nodes born in the final 10% of steps from "
                      "conditional-distribution comparisons (default on)");
    cmd_cmp->add_option("--q-cap", cmp.options.q_cap, "TV truncation")->default_val(200);
    cmd_cmp->add_option("--tv-tol", cmp.options.tv_tol)->default_val(0.05);
    cmd_cmp->add_option("--tv-min-nodes", cmp.options.tv_min_nodes)->default_val(1000);
    cmd_cmp->add_option("--tail-qmin", cmp.options.tail_q_min)->default_val(50);
    cmd_cmp->add_option("--tail-tol", cmp.options.tail_tol)->default_val(0.3);
    cmd_cmp->add_option("--slope-tol", cmp.options.slope_rel_tol)->default_val(0.05);
    cmd_cmp->add_option("--intercept-tol", cmp.options.intercept_tol)->default_val(0.2);
    cmd_cmp->add_option("--mean-tol", cmp.options.mean_rel_tol)->default_val(0.005);

    long selfcheck_terms = 1'000'000;
    auto* cmd_self = app.add_subcommand("selfcheck", "identity and oracle grids");
    cmd_self->add_option("--terms", selfcheck_terms, "series terms per identity")
        ->default_val(1'000'000);

    try {
        app.parse(argc, argv);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_ana->parsed()) return run_analytic(ana);
        if (cmd_cmp->parsed()) return run_compare(cmp);
        return run_selfcheck(selfcheck_terms);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits 0; usage errors exit 2
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

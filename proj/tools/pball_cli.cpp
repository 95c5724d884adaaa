// pball: constants, identities, reduced energy, direct solves, scaling
// studies, and expansion verification for the critical bi-Laplacian problem
// on a pierced ball. Prints a JSON document to stdout and writes the same
// document (plus any CSV tables) under --out.
//
// Exit codes: 0 success, 1 computation failure, 2 usage or config error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pball/harness.hpp"
#include "pball/jsonio.hpp"

namespace {

void print_error_record(const std::string& kind, const std::string& message) {
    pball::JsonWriter w;
    w.begin_object();
    w.key("error").value(message);
    w.key("kind").value(kind);
    w.end_object();
    std::cout << w.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the critical bi-Laplacian problem on a pierced ball"};
    app.require_subcommand(1);
    app.fallthrough(true);

    pball::RunConfig cfg;
    std::string config_path;
    std::vector<double> eps_values;
    std::vector<std::string> tol_overrides;

    app.add_option("--dim", cfg.dim, "spatial dimension N (>= 5)");
    app.add_option("--eps", eps_values, "explicit eps values, strictly decreasing");
    app.add_option("--eps-start", cfg.eps_start, "first eps of the geometric schedule");
    app.add_option("--eps-ratio", cfg.eps_ratio, "ratio of the geometric schedule");
    app.add_option("--eps-count", cfg.eps_count, "length of the geometric schedule");
    app.add_option("--nodes", cfg.nodes, "grid intervals for solves");
    app.add_option("--verify-nodes", cfg.verify_nodes, "grid intervals for the verifier");
    app.add_option("--quad-points", cfg.quad_points, "Gauss points per quadrature panel");
    app.add_option("--tol", tol_overrides, "tolerance overrides, name=value (newton, slope)");
    app.add_option("--threads", cfg.threads, "max OpenMP threads (0 = default, 1 = serial)");
    app.add_option("--config", config_path, "JSON config file (flags override it)");
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--seed", cfg.seed, "seed echoed into outputs");

    auto* c_constants = app.add_subcommand("constants", "dimension constants and d*");
    auto* c_identities = app.add_subcommand("identities", "Green representation identities");
    auto* c_psi = app.add_subcommand("psi", "reduced energy critical point");
    auto* c_solve = app.add_subcommand("solve", "single nonlinear solve at --eps");
    auto* c_scaling = app.add_subcommand("scaling", "continuation study and log-log fit");
    auto* c_verify = app.add_subcommand("verify-expansion", "projection remainder bounds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) {
            // flags override file values: re-apply any flag the user passed
            pball::RunConfig from_file = pball::apply_config_file(cfg, config_path);
            if (app.count("--dim") == 0) cfg.dim = from_file.dim;
            if (app.count("--eps") == 0) cfg.eps_list = from_file.eps_list;
            if (app.count("--eps-start") == 0) cfg.eps_start = from_file.eps_start;
            if (app.count("--eps-ratio") == 0) cfg.eps_ratio = from_file.eps_ratio;
            if (app.count("--eps-count") == 0) cfg.eps_count = from_file.eps_count;
            if (app.count("--nodes") == 0) cfg.nodes = from_file.nodes;
            if (app.count("--verify-nodes") == 0) cfg.verify_nodes = from_file.verify_nodes;
            if (app.count("--quad-points") == 0) cfg.quad_points = from_file.quad_points;
            if (app.count("--threads") == 0) cfg.threads = from_file.threads;
            if (app.count("--seed") == 0) cfg.seed = from_file.seed;
            if (app.count("--out") == 0) cfg.out_dir = from_file.out_dir;
            cfg.tolerances = from_file.tolerances;
        }
        if (app.count("--eps") > 0) cfg.eps_list = eps_values;
        for (const std::string& entry : tol_overrides) {
            const auto pos = entry.find('=');
            if (pos == std::string::npos)
                throw pball::ConfigError("tol: expected name=value, got '" + entry + "'");
            cfg.tolerances[entry.substr(0, pos)] = std::stod(entry.substr(pos + 1));
        }

        std::string doc;
        if (c_constants->parsed()) doc = pball::run_constants(cfg);
        else if (c_identities->parsed()) doc = pball::run_identities(cfg);
        else if (c_psi->parsed()) doc = pball::run_psi(cfg);
        else if (c_solve->parsed()) doc = pball::run_solve(cfg);
        else if (c_scaling->parsed()) doc = pball::run_scaling(cfg).summary;
        else if (c_verify->parsed()) doc = pball::run_verify_expansion(cfg);
        std::cout << doc;
        return 0;
    } catch (const pball::ConfigError& e) {
        print_error_record("config", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        print_error_record("config", e.what());
        return 2;
    } catch (const std::exception& e) {
        print_error_record("computation", e.what());
        return 1;
    }
}

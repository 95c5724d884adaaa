#include "pball/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "pball/energy.hpp"
#include "pball/expansion.hpp"
#include "pball/green.hpp"
#include "pball/jsonio.hpp"
#include "pball/navier.hpp"
#include "pball/quadrature.hpp"

namespace pball {

void RunConfig::validate() const {
    if (dim < 5) throw ConfigError("dim: N >= 5 required");
    if (nodes < 64) throw ConfigError("nodes: at least 64 grid intervals required");
    if (verify_nodes < 64) throw ConfigError("verify_nodes: at least 64 grid intervals required");
    if (quad_points < 8) throw ConfigError("quad_points: at least 8 Gauss points required");
    if (eps_list.empty()) {
        if (!(eps_start > 0.0 && eps_start < 1.0))
            throw ConfigError("eps_start: must lie in (0, 1)");
        if (!(eps_ratio > 0.0 && eps_ratio < 1.0))
            throw ConfigError("eps_ratio: must lie in (0, 1)");
        if (eps_count < 1) throw ConfigError("eps_count: must be positive");
    } else {
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            if (!(eps_list[i] > 0.0 && eps_list[i] < 1.0))
                throw ConfigError("eps: values must lie in (0, 1)");
            if (i > 0 && eps_list[i] >= eps_list[i - 1])
                throw ConfigError("eps: values must be strictly decreasing");
        }
    }
    for (const auto& [name, v] : tolerances)
        if (!(v > 0.0)) throw ConfigError("tol: " + name + " must be positive");
    if (threads < 0) throw ConfigError("threads: must be >= 0");
}

std::vector<double> RunConfig::schedule() const {
    if (!eps_list.empty()) return eps_list;
    std::vector<double> out;
    double e = eps_start;
    for (int k = 0; k < eps_count; ++k) {
        out.push_back(e);
        e *= eps_ratio;
    }
    return out;
}

double RunConfig::tol(const std::string& name) const {
    auto it = tolerances.find(name);
    if (it == tolerances.end()) throw ConfigError("tol: unknown tolerance '" + name + "'");
    return it->second;
}

RunConfig apply_config_file(RunConfig base, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }
    if (j.contains("dim")) base.dim = j["dim"].get<int>();
    if (j.contains("eps")) base.eps_list = j["eps"].get<std::vector<double>>();
    if (j.contains("eps_start")) base.eps_start = j["eps_start"].get<double>();
    if (j.contains("eps_ratio")) base.eps_ratio = j["eps_ratio"].get<double>();
    if (j.contains("eps_count")) base.eps_count = j["eps_count"].get<int>();
    if (j.contains("nodes")) base.nodes = j["nodes"].get<std::size_t>();
    if (j.contains("verify_nodes")) base.verify_nodes = j["verify_nodes"].get<std::size_t>();
    if (j.contains("quad_points")) base.quad_points = j["quad_points"].get<std::size_t>();
    if (j.contains("threads")) base.threads = j["threads"].get<int>();
    if (j.contains("seed")) base.seed = j["seed"].get<long long>();
    if (j.contains("out")) base.out_dir = j["out"].get<std::string>();
    if (j.contains("tol"))
        for (const auto& [k, v] : j["tol"].items()) base.tolerances[k] = v.get<double>();
    return base;
}

void write_text_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path p = std::filesystem::path(dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
}

// ---------------------------------------------------------------------------

namespace {

void echo_config(JsonWriter& w, const RunConfig& cfg) {
    w.key("config").begin_object();
    w.key("dim").value(cfg.dim);
    w.key("eps").begin_array();
    for (double e : cfg.schedule()) w.value(e);
    w.end_array();
    w.key("nodes").value(cfg.nodes);
    w.key("verify_nodes").value(cfg.verify_nodes);
    w.key("quad_points").value(cfg.quad_points);
    w.key("tol").begin_object();
    for (const auto& [k, v] : cfg.tolerances) w.key(k).value(v);
    w.end_object();
    w.key("threads").value(cfg.threads);
    w.key("seed").value(cfg.seed);
    w.key("out").value(cfg.out_dir);
    w.end_object();
}

QuadratureRule quad_rule(const RunConfig& cfg) {
    QuadratureRule rule;
    rule.points_per_panel = cfg.quad_points;
    return rule;
}

struct ModelBundle {
    Dimension dim;
    EnergyConstants constants;
    double h00;
    PsiModel psi;
    CriticalPoint critical;
};

ModelBundle build_model(const RunConfig& cfg) {
    const Dimension dim(cfg.dim);
    EnergyConstants constants = compute_energy_constants(dim, quad_rule(cfg));
    const double h00 = regular_part_ball_center(dim);
    PsiModel psi(dim, constants, h00);
    CriticalPoint critical = psi_critical_point(psi);
    return {dim, std::move(constants), h00, std::move(psi), critical};
}

} // namespace

std::string run_constants(const RunConfig& cfg) {
    cfg.validate();
    threading::set_max_threads(cfg.threads);
    const ModelBundle m = build_model(cfg);

    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.dim);
    w.key("p").value(m.dim.p());
    w.key("sigma").value(m.dim.sigma().value());
    w.key("sigma_exact").value(m.dim.sigma().str());
    w.key("kappa").value(m.dim.kappa().value());
    w.key("kappa_exact").value(m.dim.kappa().str());
    w.key("alphaN").value(m.dim.alpha());
    w.key("sphere_measure").value(m.dim.sphere_measure());
    w.key("kN_measured").value(m.constants.kN);
    w.key("kN_analytic").value(m.dim.biharmonic_normalization());
    w.key("aN").value(m.constants.aN);
    w.key("bN").value(m.constants.bN);
    w.key("cN").value(m.constants.cN);
    w.key("H00").value(m.h00);
    w.key("d_star").value(m.critical.d_star);
    w.key("energy_leading_constant").value(energy_leading_constant(m.psi));
    w.key("self_convergence").begin_object();
    w.key("aN").value(m.constants.aN_quad.error_estimate);
    w.key("cN").value(m.constants.cN_quad.error_estimate);
    w.key("kN").value(m.constants.kN_quad.error_estimate);
    w.end_object();
    echo_config(w, cfg);
    w.end_object();

    const std::string doc = w.str();
    write_text_file(cfg.out_dir, "constants.json", doc);
    return doc;
}

std::string run_identities(const RunConfig& cfg) {
    cfg.validate();
    threading::set_max_threads(cfg.threads);
    const Dimension dim(cfg.dim);
    const QuadratureRule rule = quad_rule(cfg);
    const double kn = measure_biharmonic_normalization(dim, rule).value;
    const std::vector<double> offsets = {0.0, 0.3, 1.0};

    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.dim);
    w.key("kN_measured").value(kn);
    w.key("kN_analytic").value(dim.biharmonic_normalization());
    w.key("kN_rel_deviation")
        .value(std::fabs(kn - dim.biharmonic_normalization()) / dim.biharmonic_normalization());
    w.key("identities").begin_array();
    for (double t : offsets) {
        Point tau(static_cast<std::size_t>(cfg.dim), 0.0);
        tau[0] = t;
        const IdentityReport r1 = representation_identity_biharmonic(dim, tau, kn, rule);
        const IdentityReport r2 = representation_identity_harmonic(dim, tau, rule);
        w.begin_object();
        w.key("tau").value(t);
        w.key("biharmonic_integral").value(r1.integral);
        w.key("biharmonic_reference").value(r1.reference);
        w.key("biharmonic_residual").value(r1.rel_residual);
        w.key("harmonic_integral").value(r2.integral);
        w.key("harmonic_reference").value(r2.reference);
        w.key("harmonic_residual").value(r2.rel_residual);
        w.end_object();
    }
    w.end_array();
    echo_config(w, cfg);
    w.end_object();

    const std::string doc = w.str();
    write_text_file(cfg.out_dir, "identities.json", doc);
    return doc;
}

std::string run_psi(const RunConfig& cfg) {
    cfg.validate();
    threading::set_max_threads(cfg.threads);
    const ModelBundle m = build_model(cfg);

    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.dim);
    w.key("H00").value(m.h00);
    w.key("d_star").value(m.critical.d_star);
    w.key("psi_at_critical").value(psi_eval(m.psi, m.critical.d_star, m.critical.tau_star));
    w.key("gradient_residual").value(m.critical.gradient_residual);
    w.key("d_second_derivative").value(m.critical.d_second_derivative);
    w.key("tau_eigenvalue").value(m.critical.tau_eigenvalue);
    w.key("signature").value(m.critical.saddle ? "saddle" : "not-saddle");
    echo_config(w, cfg);
    w.end_object();

    const std::string doc = w.str();
    write_text_file(cfg.out_dir, "psi.json", doc);
    return doc;
}

std::string run_solve(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.eps_list.empty()) throw ConfigError("eps: solve requires an explicit --eps value");
    threading::set_max_threads(cfg.threads);
    const double eps = cfg.eps_list.front();

    const ModelBundle m = build_model(cfg);
    const AnnulusDomain dom(m.dim, eps, 1.0);
    const RadialGrid grid(eps, 1.0, cfg.nodes);
    const double mu = m.critical.d_star * stable_pow(eps, m.dim.sigma().value());
    NewtonConfig ncfg;
    ncfg.tolerance = cfg.tol("newton");
    const SolveReport rep = solve_from_predictor(m.dim, dom, grid, mu, ncfg);

    std::string csv = "r,u,w\n";
    for (std::size_t i = 0; i < rep.u.size(); ++i) {
        csv += format_double(rep.u.grid.node(i));
        csv += ',';
        csv += format_double(rep.u.values[i]);
        csv += ',';
        csv += format_double(rep.w.values[i]);
        csv += '\n';
    }
    write_text_file(cfg.out_dir, "solution.csv", csv);

    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.dim);
    w.key("eps").value(eps);
    w.key("converged").value(rep.converged);
    w.key("trivial").value(rep.trivial);
    w.key("positivity_violated").value(rep.positivity_violated);
    w.key("newton_iterations").value(rep.newton_iterations);
    w.key("final_residual").value(rep.final_residual);
    w.key("mu_estimate").value(rep.mu_estimate);
    w.key("d_estimate").value(rep.d_estimate);
    w.key("energy").value(rep.converged ? energy_eval(m.dim, rep.u) : 0.0);
    w.key("solution_csv").value("solution.csv");
    echo_config(w, cfg);
    w.end_object();

    const std::string doc = w.str();
    write_text_file(cfg.out_dir, "solve.json", doc);
    if (!rep.converged) throw std::runtime_error("solve: Newton iteration did not converge");
    return doc;
}

ScalingOutputs run_scaling(const RunConfig& cfg) {
    cfg.validate();
    threading::set_max_threads(cfg.threads);
    const std::vector<double> schedule = cfg.schedule();
    if (schedule.empty()) throw ConfigError("eps: empty schedule");

    const ModelBundle m = build_model(cfg);
    ContinuationConfig ccfg;
    ccfg.intervals = cfg.nodes;
    ccfg.d_start = m.critical.d_star;
    ccfg.newton.tolerance = cfg.tol("newton");
    const std::vector<SolveReport> reports = continuation_in_eps(m.dim, schedule, ccfg);

    ScalingOutputs out;
    std::string csv = "eps,mu,d_eps,newton_iters,residual,energy\n";
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const SolveReport& r = reports[k];
        if (!r.converged) {
            out.failure_index = static_cast<int>(k);
            break;
        }
        pairs.emplace_back(r.eps, r.mu_estimate);
        csv += format_double(r.eps);
        csv += ',';
        csv += format_double(r.mu_estimate);
        csv += ',';
        csv += format_double(r.d_estimate);
        csv += ',';
        csv += std::to_string(r.newton_iterations);
        csv += ',';
        csv += format_double(r.final_residual);
        csv += ',';
        csv += format_double(energy_eval(m.dim, r.u));
        csv += '\n';
    }
    out.csv = csv;
    write_text_file(cfg.out_dir, "scaling.csv", csv);

    const double sigma = m.dim.sigma().value();
    const double slope_tol = cfg.tol("slope");
    double slope = 0.0, rel_err = 1.0;
    bool fit_ok = false;
    if (pairs.size() >= 4) {
        const ScalingFit fit = fit_scaling(m.dim, pairs);
        slope = fit.slope;
        rel_err = std::fabs(slope - sigma) / sigma;
        fit_ok = true;
    }
    out.pass = fit_ok && out.failure_index < 0 && rel_err <= slope_tol;

    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.dim);
    w.key("points_converged").value(pairs.size());
    if (out.failure_index >= 0)
        w.key("failure_index").value(out.failure_index);
    else
        w.key("failure_index").null();
    w.key("slope").value(slope);
    w.key("sigma").value(sigma);
    w.key("rel_slope_error").value(rel_err);
    w.key("slope_tol").value(slope_tol);
    w.key("d_star").value(m.critical.d_star);
    if (!pairs.empty())
        w.key("d_last").value(pairs.back().second / stable_pow(pairs.back().first, sigma));
    else
        w.key("d_last").null();
    w.key("pass").value(out.pass);
    w.key("csv").value("scaling.csv");
    echo_config(w, cfg);
    w.end_object();
    out.summary = w.str();
    write_text_file(cfg.out_dir, "scaling_summary.json", out.summary);

    if (out.failure_index >= 0)
        throw std::runtime_error("scaling: solver failed at schedule index " +
                                 std::to_string(out.failure_index));
    return out;
}

std::string run_verify_expansion(const RunConfig& cfg) {
    cfg.validate();
    const std::vector<double> eps = cfg.schedule();
    if (eps.size() < 3) throw ConfigError("eps: verify-expansion needs at least 3 eps values");
    threading::set_max_threads(cfg.threads);

    const ModelBundle m = build_model(cfg);
    const ExpansionSweep sweep = verify_expansion(m.dim, eps, m.critical.d_star, cfg.verify_nodes);

    const double kappa = m.dim.kappa().value();
    const bool ratios_ok = sweep.ratio_slope_R >= -0.1 && sweep.ratio_slope_dR >= -0.1;
    const bool e_ok = std::fabs(sweep.e_slope - kappa) <= 0.10 * kappa;

    JsonWriter w;
    w.begin_object();
    w.key("N").value(cfg.dim);
    w.key("d").value(m.critical.d_star);
    w.key("reports").begin_array();
    for (const auto& r : sweep.reports) {
        w.begin_object();
        w.key("eps").value(r.eps);
        w.key("tau").value(r.tau);
        w.key("sup_ratio_R").value(r.sup_ratio_R);
        w.key("sup_ratio_dR").value(r.sup_ratio_dR);
        w.key("sup_ratio_R_sharp").value(r.sup_ratio_R_sharp);
        w.key("sup_ratio_dR_sharp").value(r.sup_ratio_dR_sharp);
        w.key("E_starstar").value(r.e_starstar);
        w.key("rhat_hole").value(r.rhat_hole);
        w.key("rhat_outer").value(r.rhat_outer);
        w.key("intervals").value(r.intervals);
        w.end_object();
    }
    w.end_array();
    w.key("ratio_slope_R").value(sweep.ratio_slope_R);
    w.key("ratio_slope_dR").value(sweep.ratio_slope_dR);
    w.key("ratio_slope_R_sharp").value(sweep.ratio_slope_R_sharp);
    w.key("ratio_slope_dR_sharp").value(sweep.ratio_slope_dR_sharp);
    w.key("E_slope").value(sweep.e_slope);
    w.key("kappa").value(kappa);
    w.key("ratios_bounded").value(ratios_ok);
    w.key("E_slope_ok").value(e_ok);
    w.key("pass").value(ratios_ok && e_ok);
    echo_config(w, cfg);
    w.end_object();

    const std::string doc = w.str();
    write_text_file(cfg.out_dir, "verify_expansion.json", doc);
    return doc;
}

} // namespace pball

#ifndef PBALL_HARNESS_HPP
#define PBALL_HARNESS_HPP

// Deterministic front end behind the CLI: a validated run configuration and
// one function per subcommand, each returning the JSON document it also
// writes under the output directory. Identical configurations produce
// byte-identical documents (fixed summation orders, ordered keys, %.17g).

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pball {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    int dim = 5;
    std::vector<double> eps_list;       // explicit eps values, decreasing
    double eps_start = 0.2;             // generator used when eps_list is empty
    double eps_ratio = 0.7;
    int eps_count = 16;
    std::size_t nodes = 600;            // grid intervals for solves
    std::size_t verify_nodes = 1200;    // grid intervals for the expansion verifier
    std::size_t quad_points = 64;       // Gauss points per quadrature panel
    std::map<std::string, double> tolerances = {
        {"newton", 1e-9},
        {"slope", 0.10},
    };
    int threads = 0;
    long long seed = 12345;             // echoed; used only by noise-injection tests
    std::string out_dir = "out";

    /// Field-level validation; throws ConfigError naming the offending field.
    void validate() const;

    /// eps_list when given, otherwise the geometric schedule
    /// eps_start * eps_ratio^k, k = 0..eps_count-1.
    std::vector<double> schedule() const;

    double tol(const std::string& name) const;
};

/// Overlay values found in a JSON config file onto `base`.
RunConfig apply_config_file(RunConfig base, const std::string& path);

std::string run_constants(const RunConfig& cfg);
std::string run_identities(const RunConfig& cfg);
std::string run_psi(const RunConfig& cfg);
std::string run_solve(const RunConfig& cfg);

struct ScalingOutputs {
    std::string csv;
    std::string summary;
    bool pass = false;
    int failure_index = -1; // first failing schedule position, -1 if none
};
ScalingOutputs run_scaling(const RunConfig& cfg);

std::string run_verify_expansion(const RunConfig& cfg);

void write_text_file(const std::string& dir, const std::string& name, const std::string& content);

} // namespace pball

#endif // PBALL_HARNESS_HPP

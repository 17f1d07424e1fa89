#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linagg/erm.hpp"
#include "linagg/experiments.hpp"

namespace linagg {

struct DictionaryConfig {
    std::string kind = "fourier";
    int dim = 5;
    int level = -2;
    int degree = 0;
    std::string domain = "0_2pi";
};

struct ProblemConfig {
    /// in_model, fourier_series or piecewise
    std::string target = "fourier_series";
    std::vector<double> coeffs;
    double decay = 2.0;
    double amplitude = 1.0;
    int truncation = 201;
    std::string shape = "step";
    /// constant or heteroscedastic
    std::string noise_level = "constant";
    double sigma = 1.0;
    std::string noise = "uniform";
    double dof = 2.5;
};

struct GridConfig {
    std::vector<long long> n{2000};
    std::vector<int> D{21};
    int replicates = 200;
    std::vector<double> epsilons{0.1, 0.2, 0.35, 0.5};
    std::vector<double> x{1.0, 2.0, 4.0};
    double alpha = 3.0;
    std::optional<double> nu;
};

struct SmallBallConfig {
    double kappa0 = 0.5;
    int directions = 512;
};

struct FejerConfig {
    int l = 8;
    double kappa0 = 0.5;
    std::optional<double> epsilon;
};

struct ErmConfig {
    long long n = 2000;
    std::optional<double> nu;
    bool dump_data = false;
};

struct BoundsConfig {
    double beta0 = 1.0;
    double kappa0 = 1.0;
    double sigma = 1.0;
    int D = 1;
    long long n = 1;
    double x = 1.0;
    std::optional<double> omega0_fail;
    double Cm_sq = 1.0;
    std::optional<double> epsilon;
    double nu = 1.0;
    double L1 = 1.0;
    double L2 = 1.0;
    double sigmaF_sq = 1.0;
    double b = 1.0;
    double mean_sup = 0.0;
    double mean_sq = 1.0;
    double kappa_n = 0.5;
};

/// Constants left unspecified by the theory; configurable, never asserted.
struct ConstantsConfig {
    std::optional<double> A0;
    double A_minus = 1.0;
    double A_plus = 1.0;
    double A1_minus = 1.0;
    std::optional<double> L_nu;
};

struct RunConfig {
    std::string subcommand;
    std::string action;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output;
    DictionaryConfig dictionary;
    ProblemConfig problem;
    GridConfig grid;
    SmallBallConfig smallball;
    FejerConfig fejer;
    ErmConfig erm;
    BoundsConfig bounds;
    ConstantsConfig constants;
    /// key -> "default", "file" or "flag"
    std::map<std::string, std::string> provenance;
};

/// All dotted keys accepted in config files, in serialization order.
std::vector<std::string> config_keys();

/// Sets key from its textual inputs (one entry per list element).
/// Returns an error message, empty on success.
std::string set_config_value(RunConfig& cfg, const std::string& key,
                             const std::vector<std::string>& inputs, const std::string& source);

/// TOML-style text of a single key's value, nullopt for unset optionals.
std::optional<std::string> config_value_text(const RunConfig& cfg, const std::string& key);

/// Reads key = value lines with [section] headers into cfg. Unknown keys and
/// malformed values are collected into errors.
void apply_config_text(RunConfig& cfg, const std::string& text, std::vector<std::string>& errors);

/// Parses and validates; throws ConfigError listing every problem.
RunConfig parse_config(const std::string& text);

/// Every invariant violation, one message per field.
std::vector<std::string> validate(const RunConfig& cfg);

/// Human-editable text that parse_config reads back to the same values.
std::string serialize(const RunConfig& cfg);

/// Values (as JSON-ready strings) plus provenance.
std::map<std::string, std::string> config_echo(const RunConfig& cfg);

DictionarySpec dictionary_spec(const RunConfig& cfg);
RegressionProblem make_problem(const RunConfig& cfg);
/// Product of grid.n and grid.D.
std::vector<GridPoint> make_grid(const RunConfig& cfg);

}  // namespace linagg

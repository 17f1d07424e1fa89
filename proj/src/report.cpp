#include "linagg/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace linagg {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON has no inf/nan; emit null for them.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json list(const std::vector<double>& v) {
    Json a = Json::array();
    for (double e : v) a.push_back(num(e));
    return a;
}

}  // namespace

std::string records_csv(const ExperimentReport& report) {
    std::string out = "grid_index,replicate,seed,n,D,solved,excess_risk,opnorm,lambda_opnorm,F_norm_sq\n";
    for (const auto& r : report.records) {
        out += std::to_string(r.grid_index) + "," + std::to_string(r.replicate) + "," +
               std::to_string(r.seed) + "," + std::to_string(r.n) + "," + std::to_string(r.D) + "," +
               (r.solved ? "1" : "0") + "," + fmt(r.excess_risk) + "," + fmt(r.opnorm) + "," +
               fmt(r.lambda_opnorm) + "," + fmt(r.F_norm_sq) + "\n";
    }
    return out;
}

std::string beta0_csv(const Beta0ScalingReport& report) {
    std::string out = SmallBallEstimate::csv_header() + ",fejer_probability,fejer_bound,asymptote\n";
    for (const auto& row : report.rows) {
        out += row.estimate.csv_row() + "," +
               (row.fejer_probability ? fmt(*row.fejer_probability) : "") + "," +
               (row.fejer_bound ? fmt(*row.fejer_bound) : "") + "," +
               (row.asymptote ? fmt(*row.asymptote) : "") + "\n";
    }
    return out;
}

Json to_json(const OracleReport& o) {
    return {{"Cm_sq", num(o.Cm_sq)},
            {"sigma_sq_mean", num(o.sigma_sq_mean)},
            {"approx_err_sq", num(o.approx_err_sq)},
            {"Cm_sq_varform", num(o.Cm_sq_varform)}};
}

Json to_json(const ErmFit& f) {
    Json j{{"solved", f.solved},
           {"n", f.n},
           {"excess_risk", num(f.excess_risk)},
           {"gram_perturbation_opnorm", num(f.gram_perturbation_opnorm)},
           {"min_eigenvalue", num(f.min_eigenvalue)},
           {"F_norm_sq", num(f.F_norm_sq)},
           {"beta_hat", list({f.beta_hat.data(), f.beta_hat.data() + f.beta_hat.size()})},
           {"beta_m", list({f.beta_m.data(), f.beta_m.data() + f.beta_m.size()})}};
    j["lambda_opnorm"] = f.lambda_opnorm ? num(*f.lambda_opnorm) : Json(nullptr);
    return j;
}

Json to_json(const SmallBallEstimate& e) {
    return {{"kind", to_string(e.kind)},
            {"D", e.dim},
            {"kappa0", num(e.kappa0)},
            {"beta0_upper", num(e.beta0_upper)},
            {"beta0_lower", num(e.beta0_lower)},
            {"probed_directions", e.probed_directions},
            {"worst_direction_tag", e.worst_tag},
            {"V0_upper", num(e.v0_upper())},
            {"V0_lower", num(e.v0_lower())}};
}

Json to_json(const LinearFit& f) {
    return {{"slope", num(f.slope)},
            {"intercept", num(f.intercept)},
            {"slope_se", num(f.slope_se)},
            {"degenerate", f.degenerate}};
}

Json to_json(const GridSummary& s) {
    return {{"n", s.point.n},
            {"D", s.point.D},
            {"solved", s.solved},
            {"unsolved", s.unsolved},
            {"center", num(s.center)},
            {"mean", num(s.mean)},
            {"median", num(s.median)},
            {"q05", num(s.q05)},
            {"q95", num(s.q95)},
            {"mean_ratio", num(s.mean_ratio)},
            {"median_ratio", num(s.median_ratio)},
            {"half_width", num(s.half_width)},
            {"mean_F_norm_sq", num(s.mean_F_norm_sq)},
            {"median_opnorm", num(s.median_opnorm)},
            {"median_lambda_opnorm", num(s.median_lambda_opnorm)},
            {"coverage", list(s.coverage)}};
}

Json to_json(const ExperimentReport& r) {
    Json oracles = Json::array();
    for (const auto& o : r.oracles) {
        Json j = to_json(o.oracle);
        j["n"] = o.point.n;
        j["D"] = o.point.D;
        j["center"] = num(o.center);
        oracles.push_back(std::move(j));
    }
    Json summaries = Json::array();
    for (const auto& s : r.summaries) summaries.push_back(to_json(s));
    return {{"campaign", r.campaign},
            {"master_seed", r.master_seed},
            {"replicates", r.replicates},
            {"epsilon_grid", list(r.epsilon_grid)},
            {"oracles", oracles},
            {"summaries", summaries},
            {"notes", r.notes}};
}

Json to_json(const RateSweepReport& r) {
    Json j = to_json(r.base);
    j["rate"] = {{"n", r.n},
                 {"dims", r.dims},
                 {"mean_excess", list(r.mean_excess)},
                 {"measured_fit", to_json(r.measured)},
                 {"corollary_envelope", list(r.corollary_envelope)},
                 {"corollary_fit", to_json(r.corollary_fit)},
                 {"measured_envelope", list(r.measured_envelope)},
                 {"measured_envelope_fit", to_json(r.measured_envelope_fit)},
                 {"kappa0", r.kappa0},
                 {"x", r.x},
                 {"degenerate", r.degenerate}};
    return j;
}

Json to_json(const Beta0ScalingReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        Json j = to_json(row.estimate);
        j["fejer_probability"] = row.fejer_probability ? num(*row.fejer_probability) : Json(nullptr);
        j["fejer_bound"] = row.fejer_bound ? num(*row.fejer_bound) : Json(nullptr);
        j["asymptote"] = row.asymptote ? num(*row.asymptote) : Json(nullptr);
        rows.push_back(std::move(j));
    }
    return {{"kind", to_string(r.kind)},
            {"kappa0", r.kappa0},
            {"rows", rows},
            {"upper_fit", to_json(r.upper_fit)},
            {"lower_fit", to_json(r.lower_fit)},
            {"fejer_fit", r.fejer_fit ? to_json(*r.fejer_fit) : Json(nullptr)}};
}

Json to_json(const OpnormScalingReport& r) {
    Json j = to_json(r.base);
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"n", row.point.n},
                        {"D", row.point.D},
                        {"median_opnorm", num(row.median_opnorm)},
                        {"median_lambda_opnorm", num(row.median_lambda_opnorm)},
                        {"lemma1_envelope", num(row.lemma1_envelope)},
                        {"lemma1_violations", row.lemma1_violations},
                        {"expected_violations", num(row.expected_violations)},
                        {"lemma3_envelope", num(row.lemma3_envelope)},
                        {"max_lambda_ratio", num(row.max_lambda_ratio)}});
    }
    Json vs_n = Json::array();
    for (const auto& [D, f] : r.slope_vs_n) vs_n.push_back({{"D", D}, {"fit", to_json(f)}});
    Json vs_D = Json::array();
    for (const auto& [n, f] : r.slope_vs_D) vs_D.push_back({{"n", n}, {"fit", to_json(f)}});
    j["opnorm"] = {{"alpha", r.alpha}, {"u", r.u}, {"nu", r.nu}, {"rows", rows},
                   {"slope_vs_n", vs_n}, {"slope_vs_D", vs_D}};
    return j;
}

Json to_json(const TailCoverageReport& r) {
    Json j = to_json(r.base);
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"x", row.x},
                        {"bousquet_radius", num(row.bousquet_radius)},
                        {"klein_rio_radius", num(row.klein_rio_radius)},
                        {"upper_frequency", num(row.upper_frequency)},
                        {"lower_frequency", num(row.lower_frequency)},
                        {"allowed", num(row.allowed)},
                        {"vacuous", row.vacuous},
                        {"pass", row.pass}});
    }
    j["tails"] = {{"sigmaF_sq", num(r.sigmaF_sq)},
                  {"b", num(r.b)},
                  {"epsilon", num(r.epsilon)},
                  {"mean_F", num(r.mean_F)},
                  {"mean_F_sq", num(r.mean_F_sq)},
                  {"predicted_F_sq", num(r.predicted_F_sq)},
                  {"moment_ratio", num(r.moment_ratio)},
                  {"moment_pass", r.moment_pass},
                  {"rows", rows},
                  {"pass", r.pass}};
    return j;
}

Json to_json(const TheoremABound& b) {
    return {{"risk_bound", num(b.risk_bound)},
            {"failure_prob", num(b.failure_prob)},
            {"n_min", num(b.n_min)},
            {"valid", b.valid}};
}

Json to_json(const Interval& i) {
    return {{"low", num(i.low)}, {"high", num(i.high)}, {"in_dimension_window", i.in_dimension_window}};
}

Json to_json(const LambdaClassBound& b) {
    return {{"beta0", num(b.beta0)},
            {"kappa0", num(b.kappa0)},
            {"prefactor", num(b.prefactor)},
            {"risk_bound", num(b.risk_bound)},
            {"window", {num(b.window_low), num(b.window_high)}},
            {"L_nu", num(b.L_nu)},
            {"failure_prob", num(b.failure_prob)},
            {"valid", b.valid}};
}

Json to_json(const TailRadii& r) {
    return {{"bousquet", num(r.bousquet)}, {"klein_rio", num(r.klein_rio)}};
}

Json to_json(const RioBound& r) { return {{"lower", num(r.lower)}, {"valid", r.valid}}; }

Json metadata(std::uint64_t master_seed) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return {{"schema_version", kSchemaVersion},
            {"generator", "linagg"},
            {"timestamp", buf},
            {"master_seed", master_seed},
            {"seed_derivation", "splitmix64(splitmix64(splitmix64(master) ^ grid_index) ^ replicate)"}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::filesystem::path report_path(const std::string& prefix, const std::string& campaign,
                                  std::uint64_t seed, const std::string& extension) {
    return prefix + campaign + "-" + std::to_string(seed) + "." + extension;
}

}  // namespace linagg

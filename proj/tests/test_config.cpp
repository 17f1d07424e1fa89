#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "linagg/cli.hpp"
#include "linagg/config.hpp"
#include "linagg/error.hpp"

using namespace linagg;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("parse_config: minimal Fourier erm config fills defaults") {
    const auto cfg = parse_config("subcommand = \"erm\"\n[dictionary]\nkind = \"fourier\"\ndim = 9\n");
    CHECK(cfg.subcommand == "erm");
    CHECK(cfg.dictionary.dim == 9);
    CHECK(cfg.erm.n == 2000);
    CHECK(cfg.problem.noise == "uniform");
    CHECK(cfg.provenance.at("dictionary.dim") == "file");
    CHECK(cfg.provenance.count("erm.n") == 0);
}

TEST_CASE("parse_config: errors name every invalid field") {
    try {
        parse_config("[dictionary]\ndim = 4\nbogus = 1\n[grid]\nreplicates = 0\n[problem]\nsigma = \"x\"\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string all;
        for (const auto& m : e.errors()) all += m + "\n";
        CHECK(all.find("dictionary.bogus") != std::string::npos);
        CHECK(all.find("Fourier dimension must be odd") != std::string::npos);
        CHECK(all.find("grid.replicates") != std::string::npos);
        CHECK(all.find("problem.sigma") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("[problem]\nnoise = \"cauchy\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("subcommand = \"bounds\"\naction = \"everything\"\n"), ConfigError);
}

TEST_CASE("serialize: round trip is lossless") {
    RunConfig cfg;
    cfg.subcommand = "campaign";
    cfg.action = "concentration";
    cfg.seed = 18446744073709551615ULL;
    cfg.output = "out/\"quoted\"";
    cfg.dictionary.kind = "histogram";
    cfg.dictionary.dim = 16;
    cfg.dictionary.domain = "0_1";
    cfg.problem.target = "in_model";
    cfg.problem.coeffs = {0.1, -1e-300, 1.0 / 3.0};
    cfg.problem.sigma = 0.1 + 0.2;
    cfg.grid.n = {100, 20000};
    cfg.grid.D = {4, 8, 16};
    cfg.grid.nu = 1.5;
    cfg.grid.epsilons = {};
    cfg.fejer.epsilon = 0.25;
    cfg.erm.dump_data = true;
    cfg.constants.A0 = 2.0;
    const std::string text = serialize(cfg);
    const RunConfig back = parse_config(text);
    CHECK(serialize(back) == text);
    CHECK(back.seed == cfg.seed);
    CHECK(back.output == cfg.output);
    CHECK(back.problem.coeffs == cfg.problem.coeffs);
    CHECK(back.problem.sigma == cfg.problem.sigma);
    CHECK(back.grid.nu == cfg.grid.nu);
    CHECK(back.grid.epsilons.empty());
    CHECK(back.constants.A0 == cfg.constants.A0);
    CHECK_FALSE(back.constants.L_nu.has_value());
    CHECK(back.erm.dump_data);
    for (const auto& key : config_keys()) CHECK(config_value_text(back, key) == config_value_text(cfg, key));
}

TEST_CASE("make_problem and make_grid") {
    RunConfig cfg;
    cfg.problem.target = "in_model";
    cfg.problem.coeffs = {1.0, 2.0};
    const auto p = make_problem(cfg);
    CHECK(p.dictionary().dim() == 5);
    CHECK(std::get<InModelTarget>(p.target()).coeffs.size() == 5);
    cfg.grid.n = {10, 20};
    cfg.grid.D = {3, 5, 7};
    CHECK(make_grid(cfg).size() == 6);
    cfg.dictionary.kind = "histogram";
    CHECK(dictionary_spec(cfg).domain == Domain::unit());
}

TEST_CASE("cli: bounds theorem-a example") {
    const auto r = run({"bounds", "theorem-a", "--beta0", "0.125", "--kappa0", "0.9", "--sigma", "1", "--D", "8",
                        "--n", "10000", "--x", "10"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double pre = 16.0 / (0.125 * 0.81);
    CHECK(j["result"]["risk_bound"].get<double>() == doctest::Approx(pre * pre * 8 * 10 / 10000.0));
    CHECK(j["result"]["n_min"].get<double>() == doctest::Approx(81920000.0));
    CHECK(j["config"]["provenance"]["bounds.beta0"] == "flag");
    CHECK(j["unspecified_constants"]["label"] == "unspecified-constant");
    CHECK(j["metadata"]["schema_version"] == 1);
}

TEST_CASE("cli: fejer row") {
    const auto r = run({"fejer", "--l", "64", "--kappa0", "0.5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out)["result"];
    CHECK(j["l2_norm_squared"].get<double>() == doctest::Approx(1.0 + 2.0 * 63 * 64 * 127 / 6.0 / 4096.0));
    CHECK(j["smallball_probability"].get<double>() <= j["smallball_bound"].get<double>());
}

TEST_CASE("cli: flag beats file, provenance echoed") {
    const std::string path = "cli_flag_vs_file.toml";
    {
        std::ofstream f(path);
        f << "[dictionary]\ndim = 7\n[erm]\nn = 300\n";
    }
    const auto r = run({"erm", "--config", path, "--dim", "9", "--set", "problem.sigma=0.25"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out)["config"];
    CHECK(j["values"]["dictionary.dim"] == 9);
    CHECK(j["provenance"]["dictionary.dim"] == "flag");
    CHECK(j["values"]["erm.n"] == 300);
    CHECK(j["provenance"]["erm.n"] == "file");
    CHECK(j["values"]["problem.sigma"] == 0.25);
    CHECK(j["provenance"]["problem.noise"] == "default");
    std::remove(path.c_str());
}

TEST_CASE("cli: errors and help") {
    const auto even = run({"erm", "--dim", "4"});
    CHECK(even.code == 1);
    CHECK(even.err.find("Fourier dimension must be odd") != std::string::npos);
    CHECK(run({"erm", "--no-such-flag"}).code == 1);
    CHECK(run({"--config", "/nonexistent/dir/c.toml", "erm"}).err.find("/nonexistent/dir/c.toml") != std::string::npos);
    CHECK(run({}).code == 1);
    const auto help = run({"campaign", "tails", "--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("Claim:") != std::string::npos);
    const auto manifest = run({"manifest"});
    CHECK(manifest.code == 0);
    CHECK(nlohmann::json::parse(manifest.out).size() >= 15);
}

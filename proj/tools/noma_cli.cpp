// Command-line front end for the NOMA toolkit. Flags only select and
// override parameters; defaults and validation live with the command
// implementations, so a bare subcommand reproduces the stock experiment.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "noma/cli.hpp"

namespace {

nlohmann::json read_json_input(const std::string& path) {
  if (path == "-") {
    std::stringstream buffer;
    buffer << std::cin.rdbuf();
    return nlohmann::json::parse(buffer.str());
  }
  std::ifstream in(path);
  if (!in) {
    throw CLI::ValidationError("--input", "cannot open " + path);
  }
  return nlohmann::json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOMA toolkit: downlink power allocation, cluster beamforming, "
               "uplink SIC rates, and NOMA-ALOHA random access"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  noma::RunConfig config;
  std::string format;
  app.add_option("--seed", config.seed, "RNG seed (default 12345)");
  app.add_option("-o,--output", config.output_path,
                 "output path; '-' writes to stdout (default)");
  app.add_option("--format", format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // fig1
  auto* fig1 = app.add_subcommand(
      "fig1", "two-user rate-region boundary with the min-power solution marked");
  std::vector<double> fig1_gains, fig1_targets;
  double fig1_pt = 10.0;
  int fig1_grid = 101;
  auto* o_f1_gains = fig1->add_option("--gains", fig1_gains, "channel gains, strongest first")->expected(2);
  auto* o_f1_pt = fig1->add_option("--total-power", fig1_pt, "power budget (default 10)");
  auto* o_f1_grid = fig1->add_option("--grid", fig1_grid, "boundary grid points (default 101)");
  auto* o_f1_targets = fig1->add_option("--targets", fig1_targets, "per-user rate targets")->expected(2);

  // fig3
  auto* fig3 = app.add_subcommand(
      "fig3", "mean ZF-NOMA vs OMA transmit power over antenna counts");
  std::vector<int> fig3_antennas;
  int fig3_trials = 500, fig3_clusters = 3;
  double fig3_g1 = 10.0, fig3_g2 = 6.0, fig3_ds = 0.5, fig3_dw = 1.0, fig3_exp = 2.0;
  auto* o_f3_l = fig3->add_option("--antennas", fig3_antennas, "antenna counts (default 4 6 8)");
  auto* o_f3_t = fig3->add_option("--trials", fig3_trials, "Monte Carlo trials per count (default 500)");
  auto* o_f3_g1 = fig3->add_option("--g1-db", fig3_g1, "strong-user target SINR in dB (default 10)");
  auto* o_f3_g2 = fig3->add_option("--g2-db", fig3_g2, "weak-user target SINR in dB (default 6)");
  auto* o_f3_m = fig3->add_option("--clusters", fig3_clusters, "cluster count (default 3)");
  auto* o_f3_ds = fig3->add_option("--strong-distance", fig3_ds, "strong-user distance (default 0.5)");
  auto* o_f3_dw = fig3->add_option("--weak-distance", fig3_dw, "weak-user distance (default 1.0)");
  auto* o_f3_e = fig3->add_option("--exponent", fig3_exp, "path-loss exponent (default 2)");

  // fig4
  auto* fig4 = app.add_subcommand(
      "fig4", "analytic ALOHA and 2-level NOMA-ALOHA throughput curves");
  int fig4_users = 10, fig4_grid = 101;
  auto* o_f4_k = fig4->add_option("--users", fig4_users, "user count (default 10)");
  auto* o_f4_g = fig4->add_option("--grid", fig4_grid, "access-probability grid points (default 101)");

  // fig6
  auto* fig6 = app.add_subcommand(
      "fig6", "simulated multichannel NOMA-ALOHA throughput curve");
  int fig6_users = 200, fig6_levels = 4, fig6_b = 6, fig6_trials = 10000, fig6_grid = 101;
  std::string fig6_model = "independent_subchannel";
  auto* o_f6_k = fig6->add_option("--users", fig6_users, "user count (default 200)");
  auto* o_f6_l = fig6->add_option("--levels", fig6_levels, "power levels (default 4)");
  auto* o_f6_b = fig6->add_option("--subcarriers", fig6_b, "subcarriers (default 6)");
  auto* o_f6_t = fig6->add_option("--trials", fig6_trials, "trials per grid point (default 10000)");
  auto* o_f6_m = fig6->add_option("--model", fig6_model, "decoding model")
                     ->check(CLI::IsMember({"independent_subchannel", "sic_blocking"}));
  auto* o_f6_g = fig6->add_option("--grid", fig6_grid, "access-probability grid points (default 101)");

  // uplink
  auto* uplink = app.add_subcommand(
      "uplink", "per-user SIC rates for an uplink scenario (JSON in, JSON out)");
  std::string uplink_input;
  uplink->add_option("--input", uplink_input,
                     "scenario JSON {gains, powers, order}; '-' reads stdin")
      ->required();

  // alloc
  auto* alloc = app.add_subcommand(
      "alloc", "closed-form minimum-power allocation for rate targets");
  std::vector<double> alloc_gains, alloc_targets;
  double alloc_cap = 0.0;
  alloc->add_option("--gains", alloc_gains, "channel gains, strongest first")->required();
  alloc->add_option("--targets", alloc_targets, "per-user rate targets")->required();
  auto* o_cap = alloc->add_option("--cap", alloc_cap, "optional total-power cap");

  // selfcheck
  auto* selfcheck = app.add_subcommand(
      "selfcheck", "run the built-in worked-example assertions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : noma::kExitUsage;
  }

  nlohmann::json& p = config.params;
  try {
    if (*fig1) {
      config.command = noma::Command::fig1;
      if (*o_f1_gains) p["gains"] = fig1_gains;
      if (*o_f1_pt) p["total_power"] = fig1_pt;
      if (*o_f1_grid) p["grid"] = fig1_grid;
      if (*o_f1_targets) p["targets"] = fig1_targets;
    } else if (*fig3) {
      config.command = noma::Command::fig3;
      if (*o_f3_l) p["antennas"] = fig3_antennas;
      if (*o_f3_t) p["trials"] = fig3_trials;
      if (*o_f3_g1) p["g1_db"] = fig3_g1;
      if (*o_f3_g2) p["g2_db"] = fig3_g2;
      if (*o_f3_m) p["clusters"] = fig3_clusters;
      if (*o_f3_ds) p["strong_distance"] = fig3_ds;
      if (*o_f3_dw) p["weak_distance"] = fig3_dw;
      if (*o_f3_e) p["path_loss_exponent"] = fig3_exp;
    } else if (*fig4) {
      config.command = noma::Command::fig4;
      if (*o_f4_k) p["users"] = fig4_users;
      if (*o_f4_g) p["grid"] = fig4_grid;
    } else if (*fig6) {
      config.command = noma::Command::fig6;
      if (*o_f6_k) p["users"] = fig6_users;
      if (*o_f6_l) p["levels"] = fig6_levels;
      if (*o_f6_b) p["subcarriers"] = fig6_b;
      if (*o_f6_t) p["trials"] = fig6_trials;
      if (*o_f6_m) p["model"] = fig6_model;
      if (*o_f6_g) p["grid"] = fig6_grid;
    } else if (*uplink) {
      config.command = noma::Command::uplink;
      config.format = noma::OutputFormat::json;
      p["scenario"] = read_json_input(uplink_input);
    } else if (*alloc) {
      config.command = noma::Command::alloc;
      config.format = noma::OutputFormat::json;
      p["gains"] = alloc_gains;
      p["targets"] = alloc_targets;
      if (*o_cap) p["cap"] = alloc_cap;
    } else if (*selfcheck) {
      config.command = noma::Command::selfcheck;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid JSON input: " << e.what() << "\n";
    return noma::kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return noma::kExitUsage;
  }

  if (format == "csv") config.format = noma::OutputFormat::csv;
  if (format == "json") config.format = noma::OutputFormat::json;

  return noma::run(config);
}

#pragma once

// Command execution behind the command-line front end. Each command maps
// to one module operation and emits CSV (with a '#' metadata preamble)
// or JSON ({"meta": ..., "data": ...}); numeric output uses shortest
// round-trip formatting, and nothing time- or machine-dependent enters
// the artifact, so equal configurations produce byte-identical files.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "noma/beamforming.hpp"
#include "noma/channel.hpp"
#include "noma/common.hpp"
#include "noma/downlink_rates.hpp"
#include "noma/power_allocation.hpp"
#include "noma/random_access.hpp"
#include "noma/uplink_sic.hpp"

namespace noma {

enum class Command { fig1, fig3, fig4, fig6, uplink, alloc, selfcheck };
enum class OutputFormat { csv, json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;       // unexpected failure
inline constexpr int kExitUsage = 2;       // invalid configuration
inline constexpr int kExitInfeasible = 3;  // infeasible problem instance

struct RunConfig {
  Command command = Command::selfcheck;
  nlohmann::json params = nlohmann::json::object();
  std::string output_path = "-";  // "-" = standard output
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 12345;
};

/// Shortest decimal that parses back to the same double.
inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

struct Artifact {
  std::vector<std::pair<std::string, nlohmann::json>> meta;
  std::vector<std::string> columns;
  std::vector<nlohmann::json> rows;             // arrays matching columns
  std::optional<nlohmann::json> json_data;      // overrides the table in JSON mode
  int exit_status = kExitOk;
};

inline std::string cell_to_csv(const nlohmann::json& cell) {
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_number_float()) return fmt_double(cell.get<double>());
  return cell.dump();
}

inline void emit(const Artifact& art, const RunConfig& config, std::ostream& out) {
  if (config.format == OutputFormat::csv) {
    for (const auto& [key, value] : art.meta) {
      out << "# " << key << ": "
          << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
    for (std::size_t i = 0; i < art.columns.size(); ++i) {
      out << (i ? "," : "") << art.columns[i];
    }
    if (!art.columns.empty()) out << "\n";
    for (const nlohmann::json& row : art.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << cell_to_csv(row.at(i));
      }
      out << "\n";
    }
  } else {
    nlohmann::json j;
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [key, value] : art.meta) meta[key] = value;
    j["meta"] = std::move(meta);
    if (art.json_data) {
      j["data"] = *art.json_data;
    } else {
      j["data"] = nlohmann::json{{"columns", art.columns}, {"rows", art.rows}};
    }
    out << j.dump(2) << "\n";
  }
}

template <typename T>
inline T param_or(const nlohmann::json& params, const std::string& key, T fallback) {
  if (!params.contains(key)) return fallback;
  return params.at(key).get<T>();
}

template <typename T>
inline T param_required(const nlohmann::json& params, const std::string& key) {
  if (!params.contains(key)) {
    throw std::invalid_argument("missing required parameter: " + key);
  }
  return params.at(key).get<T>();
}

inline void base_meta(Artifact& art, const std::string& command,
                      const RunConfig& config) {
  art.meta.emplace_back("command", command);
  art.meta.emplace_back("version", NOMA_VERSION);
  art.meta.emplace_back("seed", config.seed);
}

inline Artifact run_fig1(const RunConfig& config) {
  const auto gains = param_or<std::vector<double>>(config.params, "gains", {1.0, 0.25});
  const double total_power = param_or<double>(config.params, "total_power", 10.0);
  const int grid = param_or<int>(config.params, "grid", 101);
  const auto targets = param_or<std::vector<double>>(config.params, "targets", {2.0, 1.0});

  const auto boundary = rate_region_boundary(gains, total_power, grid);
  const PowerSolution sol = min_power_allocation(gains, RateTargets(targets));
  const DownlinkScenario at_solution(gains, sol.powers);
  const double r1 = achievable_rate(at_solution, 1, 1);
  const double r2 = achievable_rate(at_solution, 2, 2);

  Artifact art;
  base_meta(art, "fig1", config);
  art.meta.emplace_back("gains", gains);
  art.meta.emplace_back("total_power", total_power);
  art.meta.emplace_back("grid", grid);
  art.meta.emplace_back("targets", targets);
  art.meta.emplace_back("solution_powers", sol.powers);
  art.meta.emplace_back("solution_total", sol.total);
  art.meta.emplace_back("solution_point", std::vector<double>{r1, r2});
  art.columns = {"R1", "R2"};
  for (const auto& [b1, b2] : boundary) {
    art.rows.push_back(nlohmann::json::array({b1, b2}));
  }
  art.json_data = nlohmann::json{
      {"boundary", art.rows},
      {"solution",
       {{"powers", sol.powers}, {"total", sol.total}, {"R1", r1}, {"R2", r2}}}};
  return art;
}

inline Artifact run_fig3(const RunConfig& config) {
  const auto antennas = param_or<std::vector<int>>(config.params, "antennas", {4, 6, 8});
  const int trials = param_or<int>(config.params, "trials", 500);
  const double g1_db = param_or<double>(config.params, "g1_db", 10.0);
  const double g2_db = param_or<double>(config.params, "g2_db", 6.0);
  const int clusters = param_or<int>(config.params, "clusters", 3);
  const double strong_distance = param_or<double>(config.params, "strong_distance", 0.5);
  const double weak_distance = param_or<double>(config.params, "weak_distance", 1.0);
  const double exponent = param_or<double>(config.params, "path_loss_exponent", 2.0);
  if (clusters < 1) throw std::invalid_argument("fig3: clusters must be >= 1");

  FadingSpec spec;
  spec.antenna_count = 1;  // per-row antenna counts are applied by the experiment
  spec.path_loss_exponent = exponent;
  spec.seed = config.seed;
  for (int c = 0; c < clusters; ++c) {
    spec.user_distances.push_back(strong_distance);
    spec.user_distances.push_back(weak_distance);
  }
  const auto rows =
      fig3_experiment(antennas, trials, spec, db_to_linear(g1_db), db_to_linear(g2_db));

  Artifact art;
  base_meta(art, "fig3", config);
  art.meta.emplace_back("antennas", antennas);
  art.meta.emplace_back("trials", trials);
  art.meta.emplace_back("g1_db", g1_db);
  art.meta.emplace_back("g2_db", g2_db);
  art.meta.emplace_back("clusters", clusters);
  art.meta.emplace_back("strong_distance", strong_distance);
  art.meta.emplace_back("weak_distance", weak_distance);
  art.meta.emplace_back("path_loss_exponent", exponent);
  art.columns = {"L", "noma_mean_power", "oma_mean_power", "infeasible_rate"};
  for (const Fig3Row& r : rows) {
    art.rows.push_back(nlohmann::json::array(
        {r.antennas, r.noma_mean_power, r.oma_mean_power, r.infeasible_rate}));
  }
  return art;
}

inline Artifact run_fig4(const RunConfig& config) {
  const int users = param_or<int>(config.params, "users", 10);
  const int grid = param_or<int>(config.params, "grid", 101);
  if (users < 2) throw std::invalid_argument("fig4: users must be >= 2");
  if (grid < 2) throw std::invalid_argument("fig4: grid must be >= 2");

  std::vector<double> pa(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) pa[static_cast<std::size_t>(i)] = static_cast<double>(i) / (grid - 1);

  RaConfig aloha_cfg;
  aloha_cfg.users = users;
  aloha_cfg.power_levels = 1;
  RaConfig noma_cfg = aloha_cfg;
  noma_cfg.power_levels = 2;
  const auto aloha_peak = refined_analytic_peak(aloha_cfg);
  const auto noma_peak = refined_analytic_peak(noma_cfg);

  Artifact art;
  base_meta(art, "fig4", config);
  art.meta.emplace_back("users", users);
  art.meta.emplace_back("grid", grid);
  art.meta.emplace_back("aloha_refined_peak", std::vector<double>{aloha_peak.first, aloha_peak.second});
  art.meta.emplace_back("noma_refined_peak", std::vector<double>{noma_peak.first, noma_peak.second});
  art.columns = {"p_a", "aloha_T", "noma_T"};
  for (double p : pa) {
    art.rows.push_back(nlohmann::json::array(
        {p, aloha_throughput(users, p), noma_aloha_throughput_2level(users, p)}));
  }
  return art;
}

inline Artifact run_fig6(const RunConfig& config) {
  RaConfig ra;
  ra.users = param_or<int>(config.params, "users", 200);
  ra.power_levels = param_or<int>(config.params, "levels", 4);
  ra.subcarriers = param_or<int>(config.params, "subcarriers", 6);
  ra.trials = param_or<int>(config.params, "trials", 10000);
  ra.decoding_model = decoding_model_from_string(
      param_or<std::string>(config.params, "model", "independent_subchannel"));
  ra.seed = config.seed;
  const int grid = param_or<int>(config.params, "grid", 101);
  if (grid < 2) throw std::invalid_argument("fig6: grid must be >= 2");

  Artifact art;
  base_meta(art, "fig6", config);
  art.meta.emplace_back("users", ra.users);
  art.meta.emplace_back("levels", ra.power_levels);
  art.meta.emplace_back("subcarriers", ra.subcarriers);
  art.meta.emplace_back("trials", ra.trials);
  art.meta.emplace_back("model", to_string(ra.decoding_model));
  art.meta.emplace_back("grid", grid);
  art.columns = {"p_a", "mean_T", "stderr", "model"};
  double peak_p = 0.0, peak_t = -1.0;
  for (int i = 0; i < grid; ++i) {
    const double p = static_cast<double>(i) / (grid - 1);
    ra.access_prob = p;
    const SimResult r = simulate_multichannel(ra);
    if (r.mean > peak_t) {
      peak_t = r.mean;
      peak_p = p;
    }
    art.rows.push_back(nlohmann::json::array(
        {p, r.mean, r.std_error, to_string(ra.decoding_model)}));
  }
  art.meta.emplace_back("peak", std::vector<double>{peak_p, peak_t});
  return art;
}

inline Artifact run_uplink(const RunConfig& config) {
  const nlohmann::json scenario_json =
      param_required<nlohmann::json>(config.params, "scenario");
  const UplinkScenario scenario = uplink_scenario_from_json(scenario_json);
  const double total = total_mutual_information(scenario);
  const std::vector<double> rates = sic_rates(scenario);

  Artifact art;
  base_meta(art, "uplink", config);
  art.meta.emplace_back("scenario", scenario_json);
  art.columns = {"user", "sic_rate"};
  for (std::size_t k = 0; k < rates.size(); ++k) {
    art.rows.push_back(nlohmann::json::array({k, rates[k]}));
  }
  nlohmann::json data{{"total_mutual_information", total},
                      {"sic_rates", rates},
                      {"order", scenario.order}};
  if (scenario_json.contains("rates")) {
    data["feasible"] = feasible_rate_tuple(
        scenario, scenario_json.at("rates").get<std::vector<double>>());
  }
  art.json_data = std::move(data);
  return art;
}

inline Artifact run_alloc(const RunConfig& config) {
  const auto gains = param_required<std::vector<double>>(config.params, "gains");
  const auto targets = param_required<std::vector<double>>(config.params, "targets");
  std::optional<double> cap;
  if (config.params.contains("cap")) cap = config.params.at("cap").get<double>();
  const PowerSolution sol = min_power_allocation(gains, RateTargets(targets), cap);

  Artifact art;
  base_meta(art, "alloc", config);
  art.meta.emplace_back("gains", gains);
  art.meta.emplace_back("targets", targets);
  if (cap) art.meta.emplace_back("cap", *cap);
  art.meta.emplace_back("total", sol.total);
  art.columns = {"user", "power"};
  for (std::size_t k = 0; k < sol.powers.size(); ++k) {
    art.rows.push_back(nlohmann::json::array({k + 1, sol.powers[k]}));
  }
  art.json_data = nlohmann::json{{"powers", sol.powers}, {"total", sol.total}};
  return art;
}

inline Artifact run_selfcheck(const RunConfig& config) {
  Artifact art;
  base_meta(art, "selfcheck", config);
  art.columns = {"check", "status"};
  bool all_ok = true;
  const auto record = [&](const std::string& name, bool ok) {
    art.rows.push_back(nlohmann::json::array({name, ok ? "pass" : "FAIL"}));
    all_ok = all_ok && ok;
  };
  const auto close = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };

  {
    const PowerSolution sol =
        min_power_allocation({1.0, 0.25}, RateTargets({2.0, 1.0}));
    record("min_power worked example P*=(3 7) total 10",
           close(sol.powers[0], 3.0, 1e-12) && close(sol.powers[1], 7.0, 1e-12) &&
               close(sol.total, 10.0, 1e-12));
    const DownlinkScenario s({1.0, 0.25}, sol.powers);
    record("achievable rates C11=2 C22=1 at the solution",
           close(achievable_rate(s, 1, 1), 2.0, 1e-12) &&
               close(achievable_rate(s, 2, 2), 1.0, 1e-12));
  }
  record("max sum rate log2(11)",
         close(max_sum_rate_allocation({1.0, 0.25}, 10.0).sum_rate,
               std::log2(11.0), 1e-12));
  {
    const auto boundary = rate_region_boundary({1.0, 0.25}, 10.0, 101);
    const auto& [r1, r2] = boundary[30];  // P1 = 3 on the default grid
    record("solution point (2 1) on the P_T=10 boundary",
           close(r1, 2.0, 1e-9) && close(r2, 1.0, 1e-9));
  }
  record("dB conversion 10 dB -> 10 and 6 dB -> 3.98107",
         close(db_to_linear(10.0), 10.0, 1e-12) &&
             close(db_to_linear(6.0), 3.9810717055349722, 1e-9));
  record("ALOHA peak approaches 1/e",
         std::abs(aloha_throughput(1000, 0.001) - std::exp(-1.0)) < 1e-3);
  {
    bool dominated = true;
    for (int i = 0; i <= 100; ++i) {
      const double p = i / 100.0;
      if (noma_aloha_throughput_2level(10, p) < aloha_throughput(10, p)) {
        dominated = false;
        break;
      }
    }
    record("2-level NOMA-ALOHA dominates ALOHA on the default grid",
           dominated &&
               close(noma_aloha_throughput_2level(10, 0.1), 0.48427561125, 1e-9) &&
               noma_aloha_throughput_2level(10, 0.1) >
                   aloha_throughput(10, 0.1) + 0.05);
  }
  {
    const UplinkScenario s({1.0, 1.0}, {4.0, 4.0}, {1, 0});
    const auto rates = sic_rates(s);
    record("uplink chain rule: rates telescope to log2(9)",
           close(rates[0] + rates[1], total_mutual_information(s), 1e-12) &&
               close(rates[0], std::log2(5.0), 1e-12));
  }
  {
    FadingSpec spec;
    spec.antenna_count = 1;
    spec.user_distances = {0.5, 1.0, 0.5, 1.0, 0.5, 1.0};
    spec.path_loss_exponent = 2.0;
    spec.seed = config.seed;
    const auto rows = fig3_experiment({4}, 30, spec, db_to_linear(10.0),
                                      db_to_linear(6.0));
    record("ZF-NOMA beamforming needs less power than OMA",
           rows[0].noma_mean_power <= rows[0].oma_mean_power);
  }

  art.meta.emplace_back("result", all_ok ? "pass" : "FAIL");
  art.exit_status = all_ok ? kExitOk : kExitError;
  return art;
}

inline Artifact dispatch(const RunConfig& config) {
  switch (config.command) {
    case Command::fig1: return run_fig1(config);
    case Command::fig3: return run_fig3(config);
    case Command::fig4: return run_fig4(config);
    case Command::fig6: return run_fig6(config);
    case Command::uplink: return run_uplink(config);
    case Command::alloc: return run_alloc(config);
    case Command::selfcheck: return run_selfcheck(config);
  }
  throw std::invalid_argument("unknown command");
}

}  // namespace detail

/// Execute a command and write its artifact; returns the process exit
/// status (0 ok, 2 usage error, 3 infeasible instance, 1 otherwise).
inline int run(const RunConfig& config, std::ostream& diagnostics = std::cerr) {
  try {
    const detail::Artifact art = detail::dispatch(config);
    if (config.output_path == "-") {
      detail::emit(art, config, std::cout);
    } else {
      std::ofstream out(config.output_path);
      if (!out) {
        diagnostics << "error: cannot open output file " << config.output_path << "\n";
        return kExitError;
      }
      detail::emit(art, config, out);
    }
    if (art.exit_status != kExitOk) {
      diagnostics << "selfcheck failed\n";
    }
    return art.exit_status;
  } catch (const InfeasibleError& e) {
    diagnostics << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const nlohmann::json::exception& e) {
    diagnostics << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    diagnostics << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    diagnostics << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace noma

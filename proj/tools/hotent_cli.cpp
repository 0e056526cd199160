#include "hotent/errors.hpp"
#include "hotent/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using hotent::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_with_overrides(const std::string& path, const std::vector<std::string>& sets, std::optional<int> truncation) {
  json doc = hotent::load_document(path);
  for (const auto& s : sets) {
    auto [k, v] = hotent::parse_assignment(s);
    hotent::apply_override(doc, k, v);
  }
  if (truncation) doc["truncation"] = *truncation;
  return doc;
}

void print_summary(const hotent::RunResult& r, const std::string& out_dir) {
  for (const auto& c : r.curves) {
    const json& s = c.manifest["summary"];
    std::cout << c.name << ": peak E_N " << s["peak_EN"].get<double>() << ", final n1 " << s["final_n1"].get<double>()
              << ", final n2 " << s["final_n2"].get<double>() << ", t_end " << s["t_end"].get<double>() << '\n';
    for (const auto& w : c.manifest["warnings"]) std::cerr << "warning (" << c.name << "): " << w.get<std::string>() << '\n';
    if (c.manifest.contains("convergence")) {
      const json& cv = c.manifest["convergence"];
      std::cout << "  convergence N=" << cv["n_low"] << " vs " << cv["n_high"] << ": dev_EN " << cv["dev_EN"]
                << " dev_n1 " << cv["dev_n1"] << " dev_n2 " << cv["dev_n2"]
                << (cv["converged"].get<bool>() ? "  ok" : "  NOT CONVERGED") << '\n';
    }
  }
  if (!out_dir.empty()) std::cout << "wrote " << out_dir << "/manifest.json\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hot-bath entanglement of two resonators: scenario runner"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  std::optional<int> truncation;

  auto* run = app.add_subcommand("run", "integrate every curve of a scenario and write CSV plus manifest");
  std::string out_dir;
  bool convergence = false;
  run->add_option("-c,--config", config, "scenario config (JSON) or a previous manifest")->required();
  run->add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
  run->add_option("-N,--truncation", truncation, "Fock truncation per resonator");
  run->add_option("--set", sets, "override a config value, key.path=value");
  run->add_flag("--check-convergence", convergence, "repeat at N+2 and report deviations");

  auto* sweep = app.add_subcommand("sweep", "peak and late E_N along one parameter axis");
  std::string axis;
  std::vector<std::string> values;
  std::string sweep_out;
  sweep->add_option("-c,--config", config, "scenario config")->required();
  sweep->add_option("--axis", axis, "T_h, T_i, alpha or N")->required();
  sweep->add_option("--values", values, "axis values (numbers or quantity strings)")->required();
  sweep->add_option("-o,--out", sweep_out, "CSV file (default stdout)");
  sweep->add_option("--set", sets, "override a config value, key.path=value");

  auto* check = app.add_subcommand("check", "validate a config and print the term audit");
  check->add_option("-c,--config", config, "scenario config")->required();
  check->add_option("--set", sets, "override a config value, key.path=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const json doc = load_with_overrides(config, sets, truncation);
      hotent::RunOptions opts;
      if (!out_dir.empty()) opts.output_dir = out_dir;
      opts.convergence = convergence;
      const auto result = hotent::run_scenario(doc, opts);
      print_summary(result, out_dir.empty() ? result.curves.front().config.output_dir : out_dir);
    } else if (*sweep) {
      const json doc = load_with_overrides(config, sets, std::nullopt);
      std::vector<json> vals;
      for (const auto& v : values) vals.push_back(hotent::parse_assignment("v=" + v).second);
      const auto rows = hotent::run_sweep(doc, axis, vals);
      if (sweep_out.empty()) {
        hotent::write_sweep_csv(std::cout, axis, rows);
      } else {
        std::ofstream f(sweep_out);
        if (!f) throw hotent::Error("cannot write " + sweep_out);
        hotent::write_sweep_csv(f, axis, rows);
      }
    } else if (*check) {
      const json doc = load_with_overrides(config, sets, std::nullopt);
      std::cout << hotent::check_scenario(doc).dump(2) << '\n';
    }
  } catch (const hotent::ConfigError& e) {
    const int line = hotent::locate_key_line(read_text(config), e.key_path());
    std::cerr << "config error: " << config;
    if (line > 0) std::cerr << ':' << line;
    std::cerr << ": " << e.what() << '\n';
    return 2;
  } catch (const hotent::InvalidConfiguration& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hotent::StiffnessError& e) {
    std::cerr << "integration failed at t = " << e.time_reached() << ": " << e.what() << '\n';
    return 3;
  } catch (const hotent::IntegrationQualityError& e) {
    std::cerr << "integration failed at t = " << e.time_reached() << ": " << e.what() << '\n';
    return 3;
  } catch (const hotent::TruncationWarning& e) {
    std::cerr << "truncation too small: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

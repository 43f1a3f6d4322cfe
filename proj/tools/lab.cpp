// lab <experiment> --config <file> [--out <dir>] [--seed N] [--tol X]
//
// Exit status: 0 when every check passes, 2 on a tolerance failure, 1 when
// the configuration or its inputs fail validation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "teich/lab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Batch experiments on boxes, currents and earthquakes"};
  std::string experiment, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::vector<std::string> names;
  for (const auto& [name, fn] : teich::lab::experiments()) names.push_back(name);
  app.add_option("experiment", experiment, "Experiment name")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON configuration file")->required();
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Seed (overrides the config)");
  app.add_option("--tol", tol, "Main tolerance (overrides the config and default)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    std::ifstream in(config_path);
    if (!in) throw teich::Error(teich::ErrorCode::InvalidInput, "cannot open " + config_path);
    nlohmann::json cfg = nlohmann::json::parse(in);
    if (!cfg.is_object()) throw teich::Error(teich::ErrorCode::InvalidInput, "config must be a JSON object");
    if (cfg.contains("experiment") && cfg.at("experiment") != experiment)
      throw teich::Error(teich::ErrorCode::InvalidInput, "config is for experiment " + cfg.at("experiment").dump());
    auto opt = teich::lab::options_from(cfg, seed, tol);
    auto outcome = teich::lab::experiments().at(experiment)(cfg, opt);

    std::filesystem::create_directories(out_dir);
    for (const auto& t : outcome.tables) t.write((std::filesystem::path(out_dir) / (t.name + ".csv")).string());
    std::cout << experiment << ": passed=" << outcome.passed << " failed=" << outcome.failed;
    for (const auto& n : outcome.notes) std::cout << ' ' << n;
    std::cout << " status=" << (outcome.ok() ? "PASS" : "FAIL") << '\n';
    for (const auto& t : outcome.timings) std::cerr << experiment << ": " << t << '\n';
    return outcome.ok() ? 0 : 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "lab: invalid JSON: " << e.what() << '\n';
  } catch (const teich::Error& e) {
    std::cerr << "lab: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "lab: " << e.what() << '\n';
  }
  return 1;
}

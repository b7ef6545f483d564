#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcext/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"qcext: extension of quasi-cocycles from hyperbolically embedded subgroups"};
  app.require_subcommand(1, 1);
  std::string config_path, out_path;
  std::uint64_t seed = 0;
  for (const auto& name : qcext::cli::subcommands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--seed", seed, "overrides the seed in the configuration");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_flag("--print-default-config", "print the default configuration and exit");
  }
  CLI11_PARSE(app, argc, argv);

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (sub->count("--print-default-config")) {
    std::cout << qcext::cli::default_config(name).dump(2) << "\n";
    return 0;
  }
  nlohmann::json config;
  if (config_path.empty()) {
    config = qcext::cli::default_config(name);
  } else {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot read " << config_path << "\n";
      return qcext::cli::kSchema;
    }
    try {
      config = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "schema error: " << e.what() << "\n";
      return qcext::cli::kSchema;
    }
  }
  std::optional<std::uint64_t> seed_override;
  if (sub->count("--seed")) seed_override = seed;

  const auto outcome = qcext::cli::run(name, config, seed_override);
  if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
  if (outcome.report.is_null()) return outcome.exit_code;
  const std::string text = outcome.report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    out << text;
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return qcext::cli::kAssertion;
    }
  }
  return outcome.exit_code;
}

// Command-line runner for the anv experiment suite.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "anv/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"anv: archimedean analytic-newvector laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv";
  std::string seed, tolerance;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--seed", seed, "64-bit RNG seed");
  app.add_option("--out", out_path, "output report path (default stdout)");
  app.add_option("--format", format, "csv | json | svg")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--tolerance", tolerance, "override the command's primary tolerance");
  app.add_option("--set", sets, "extra key=value overrides")->take_all();

  static const char* kCommands[] = {"gamma",          "conductor",      "k-volume",
                                    "folner",         "whittaker-eval", "decompose",
                                    "m-vanishing",    "plancherel-roundtrip",
                                    "newvector-decay", "newvector-defect",
                                    "subconductor",   "toy",            "padic-heart"};
  for (const char* c : kCommands) app.add_subcommand(c, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  anv::cli::ExperimentConfig cfg;
  cfg.command = app.get_subcommands().at(0)->get_name();
  cfg.format = format;
  cfg.out_path = out_path;
  try {
    if (!config_path.empty()) cfg.params = anv::Config::parse_file(config_path);
    for (const auto& kv : sets) {
      auto c = anv::Config::parse_text(kv);
      for (const auto& [k, v] : c.kv) cfg.params.kv[k] = v;
    }
    if (!seed.empty()) cfg.params.kv["seed"] = seed;
    if (!tolerance.empty()) cfg.params.kv["tolerance"] = tolerance;

    anv::Report rep = anv::cli::run(cfg);
    if (out_path.empty())
      std::cout << rep.full_text();
    else
      rep.write(out_path);
    if (rep.exit_code != 0) std::cerr << rep.failure_record(cfg.command) << "\n";
    return rep.exit_code;
  } catch (const anv::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

#include <clocale>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "oscchain/experiments.hpp"

namespace {
int default_threads() {
  if (const char* env = std::getenv("OSCCHAIN_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw oscchain::ConfigError("cannot open output file: " + path);
  out << text;
}
}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");

  CLI::App app{"Transfer-matrix toolkit for 1D anharmonic oscillator chains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  int threads = default_threads();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "model/experiment config file")
        ->required();
    cmd->add_option("--out", out_path, "output CSV path ('-' for stdout)");
    cmd->add_option("--threads", threads, "worker threads");
  };

  CLI::App* spectrum = app.add_subcommand("spectrum", "lowest energy levels");
  CLI::App* ambiguity =
      app.add_subcommand("ambiguity", "derivative discretization gap vs eps");
  CLI::App* correlate = app.add_subcommand("correlate", "two-point tables");
  CLI::App* oracle =
      app.add_subcommand("oracle-check", "brute-force cross validation");
  for (CLI::App* cmd : {spectrum, ambiguity, correlate, oracle}) add_common(cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    const oscchain::RunConfig config = oscchain::parse_config_file(config_path);
    oscchain::ExperimentResult result;
    if (spectrum->parsed()) result = oscchain::run_spectrum(config, threads);
    else if (ambiguity->parsed()) result = oscchain::run_ambiguity(config, threads);
    else if (correlate->parsed()) result = oscchain::run_correlate(config, threads);
    else result = oscchain::run_oracle_check(config, threads);

    write_output(out_path, result.csv);
    if (!result.pass) {
      std::cerr << "oscchain: acceptance failure (see discrepancy table)\n";
      return 4;
    }
    return 0;
  } catch (const oscchain::BudgetError& e) {
    std::cerr << "oscchain: " << e.what() << '\n';
    return 3;
  } catch (const oscchain::IllConditionedError& e) {
    std::cerr << "oscchain: " << e.what() << '\n';
    return 3;
  } catch (const oscchain::CouplingError& e) {
    std::cerr << "oscchain: " << e.what() << '\n';
    return 3;
  } catch (const oscchain::Error& e) {
    std::cerr << "oscchain: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "oscchain: " << e.what() << '\n';
    return 2;
  }
}

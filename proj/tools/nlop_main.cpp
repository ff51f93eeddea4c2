#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "nlop/config.hpp"
#include "nlop/scenario.hpp"

namespace {

void usage(std::FILE* out) {
  std::fprintf(out,
               "usage: nlop <scenario> --config <file> [--out DIR] [--seed N] [--jobs K]\n"
               "       nlop solve --config <file> --out <dir> [--seed N]\n"
               "       nlop list\n"
               "\n"
               "Runs a registered scenario (or the generic solve driver) and writes\n"
               "CSV/JSON/SVG artifacts plus a summary.json into the output directory.\n"
               "The default output root is $NLOP_OUT, or ./out; each scenario writes\n"
               "into <root>/<scenario>. Exit status: 0 all contracts passed, 1 a\n"
               "contract failed, 2 usage error.\n");
}

void print_outcome(const nlop::ScenarioOutcome& o) {
  for (const auto& c : o.contracts)
    std::printf("  [%s] %-45s measured %.6g  %s  %.6g\n", c.passed ? "pass" : "FAIL",
                c.name.c_str(), c.measured, c.relation.c_str(), c.bound);
  std::printf("%s: %s (%d contracts, %.1fs)\n", o.name.c_str(),
              o.passed ? "PASS" : "FAIL", static_cast<int>(o.contracts.size()),
              o.elapsed_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) {
    usage(stderr);
    return 2;
  }
  std::string command = args[0];
  if (command == "--help" || command == "-h" || command == "help") {
    usage(stdout);
    return 0;
  }
  if (command == "list") {
    for (const auto& s : nlop::list_scenarios())
      std::printf("%-22s %s\n", s.name.c_str(), s.summary.c_str());
    return 0;
  }
  if (command != "solve" && !nlop::is_scenario(command)) {
    std::fprintf(stderr, "nlop: unknown scenario '%s'\n\n", command.c_str());
    usage(stderr);
    return 2;
  }

  std::string config_path, out_dir;
  std::uint64_t seed = 1;
  for (std::size_t i = 1; i < args.size(); ++i) {
    auto need_value = [&](const char* flag) -> std::string {
      if (i + 1 >= args.size()) {
        std::fprintf(stderr, "nlop: %s requires a value\n", flag);
        std::exit(2);
      }
      return args[++i];
    };
    if (args[i] == "--config")
      config_path = need_value("--config");
    else if (args[i] == "--out")
      out_dir = need_value("--out");
    else if (args[i] == "--seed")
      seed = std::stoull(need_value("--seed"));
    else if (args[i] == "--jobs")
      (void)need_value("--jobs");  // accepted; the pipeline is single-threaded
    else {
      std::fprintf(stderr, "nlop: unknown option '%s'\n\n", args[i].c_str());
      usage(stderr);
      return 2;
    }
  }
  if (config_path.empty()) {
    std::fprintf(stderr, "nlop: --config is required\n\n");
    usage(stderr);
    return 2;
  }
  if (out_dir.empty()) {
    const char* env = std::getenv("NLOP_OUT");
    std::filesystem::path root = env && *env ? env : "out";
    out_dir = (root / std::filesystem::path(command)).string();
  }

  try {
    nlop::Config cfg = nlop::Config::parse_file(config_path);
    nlop::ScenarioOutcome outcome = command == "solve"
                                        ? nlop::run_solve(cfg, out_dir, seed)
                                        : nlop::run_scenario(command, cfg, out_dir, seed);
    print_outcome(outcome);
    return outcome.passed ? 0 : 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nlop: %s\n", e.what());
    return 1;
  }
}

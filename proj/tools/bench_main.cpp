// Benchmark comparing the serial reference check driver against the
// OpenMP-parallel kernel on one operation.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "finicheck/check.hpp"
#include "finicheck/parser.hpp"
#include "finicheck/resolve.hpp"

using namespace finicheck;

int main(int argc, char** argv) {
  CLI::App app{"finicheck-bench - serial vs parallel check driver"};
  std::string spec_path;
  std::vector<std::string> consts;
  std::string operation;
  std::vector<int> workers{1, 2, 4};
  int repeats = 3;
  app.add_option("spec", spec_path, "specification file")->required();
  app.add_option("--const", consts, "constant binding NAME=VALUE");
  app.add_option("--op", operation, "operation to benchmark")->required();
  app.add_option("--workers", workers, "worker counts to try");
  app.add_option("--repeats", repeats, "runs per configuration");
  CLI11_PARSE(app, argc, argv);

  std::vector<ConstBinding> bindings;
  for (const auto& text : consts) {
    auto eq = text.find('=');
    bindings.push_back(
        ConstBinding{text.substr(0, eq), std::stoll(text.substr(eq + 1))});
  }
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) {
    std::cerr << "cannot open " << spec_path << "\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto source = std::make_shared<SourceFile>(spec_path, buffer.str());
  auto spec = resolve(parse_source(*source), bindings, source);

  std::cout << "operation: " << operation << "\n";
  long long serial_ms = 0;
  for (int w : workers) {
    CheckConfig cfg;
    cfg.operation = operation;
    cfg.silent = true;
    cfg.workers = w;
    long long best = -1;
    RunReport last;
    for (int r = 0; r < repeats; ++r) {
      last = run_operation(*spec, cfg);
      if (best < 0 || last.duration_ms < best) best = last.duration_ms;
    }
    if (w == 1) serial_ms = best;
    std::cout << "workers=" << w << "  best=" << best << " ms"
              << "  checked=" << last.checked
              << "  inadmissible=" << last.inadmissible
              << "  failures=" << last.failures.size();
    if (w > 1 && best > 0)
      std::cout << "  speedup=" << static_cast<double>(serial_ms) / best;
    std::cout << "\n";
  }
  return 0;
}

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "finicheck/check.hpp"
#include "finicheck/errors.hpp"
#include "finicheck/parser.hpp"
#include "finicheck/printer.hpp"
#include "finicheck/resolve.hpp"
#include "finicheck/vcg.hpp"
#include "finicheck/viz.hpp"

namespace {

using namespace finicheck;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string spec_path;
  std::vector<std::string> consts;
  std::string operation;
  std::string mode = "det";
  bool silent = false;
  bool fail_fast = false;
  bool vcg = false;
  std::string vcg_json_path;
  std::string check_vc;
  std::string trace_path;
  std::string tree_path;
  std::string format = "dot";
  uint64_t max_layer_nodes = 500;
  std::string report_json_path;
  int workers = 1;
  long long timeout_ms = 0;
  bool no_prune = false;
  bool ascii = false;
  uint64_t input_index = 0;
};

bool parse_const(const std::string& text, ConstBinding& out) {
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  out.name = text.substr(0, eq);
  try {
    size_t used = 0;
    out.value = std::stoll(text.substr(eq + 1), &used);
    if (used != text.size() - eq - 1) return false;
  } catch (...) {
    return false;
  }
  return out.value >= 0;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

int fail_usage(const std::string& message) {
  std::cerr << "finicheck: " << message << "\n";
  return kExitUsage;
}

int run(const Options& opt) {
  std::vector<ConstBinding> bindings;
  for (const auto& text : opt.consts) {
    ConstBinding b;
    if (!parse_const(text, b))
      return fail_usage("malformed --const argument '" + text +
                        "' (expected NAME=VALUE with a non-negative value)");
    bindings.push_back(std::move(b));
  }

  std::ifstream in(opt.spec_path, std::ios::binary);
  if (!in) return fail_usage("cannot open '" + opt.spec_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();

  auto source = std::make_shared<SourceFile>(opt.spec_path, buffer.str());
  std::shared_ptr<const TypedSpec> spec;
  try {
    spec = resolve(parse_source(*source), bindings, source);
  } catch (const SpanError& e) {
    std::cerr << format_error_at(*source, e.span(), e.what()) << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "finicheck: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!opt.operation.empty() && !spec->find_operation(opt.operation))
    return fail_usage("no operation named '" + opt.operation + "'");

  CheckConfig base;
  base.mode = opt.mode == "nondet" ? EvalMode::Nondet : EvalMode::Det;
  base.silent = opt.silent;
  base.fail_fast = opt.fail_fast;
  base.workers = opt.workers;
  base.timeout_ms = opt.timeout_ms;
  base.ascii = opt.ascii;

  // ----- verification-condition tasks -----
  if (opt.vcg || !opt.vcg_json_path.empty() || !opt.check_vc.empty()) {
    if (!opt.operation.empty()) {
      const OpInfo* op = spec->find_operation(opt.operation);
      if (op->decl->kind != DeclKind::Proc)
        return fail_usage("verification conditions are generated for "
                          "procedures; '" + opt.operation + "' is not one");
    }
    std::vector<VerificationCondition> vcs;
    try {
      vcs = generate_all_vcs(*spec, opt.operation);
    } catch (const SpanError& e) {
      std::cerr << format_error_at(*source, e.span(), e.what()) << "\n";
      return kExitUsage;
    }
    if (opt.vcg) {
      for (const auto& vc : vcs) {
        std::cout << vc.id << "  [" << vc_category_name(vc.category) << "]  "
                  << vc_category_question(vc.category, vc.callee) << "\n";
      }
    }
    if (!opt.vcg_json_path.empty()) {
      if (!write_file(opt.vcg_json_path, vcs_to_json(vcs)))
        return fail_usage("cannot write '" + opt.vcg_json_path + "'");
    }
    if (!opt.check_vc.empty()) {
      std::vector<VerificationCondition> selected;
      if (opt.check_vc == "all") {
        selected = std::move(vcs);
      } else {
        for (auto& vc : vcs)
          if (vc.id == opt.check_vc) selected.push_back(std::move(vc));
        if (selected.empty())
          return fail_usage("no verification condition named '" +
                            opt.check_vc + "'");
      }
      std::vector<VcCheckOutcome> outcomes;
      try {
        outcomes = check_vcs(selected, *spec, base);
      } catch (const SpanError& e) {
        std::cerr << format_error_at(*source, e.span(), e.what()) << "\n";
        return kExitUsage;
      }
      int invalid = 0;
      for (size_t i = 0; i < outcomes.size(); ++i) {
        const auto& out = outcomes[i];
        std::cout << "Checking " << out.id << " ["
                  << vc_category_question(selected[i].category,
                                          selected[i].callee)
                  << "]\n";
        std::cout << format_report(out.report, opt.ascii);
        std::cout << (out.status == VcStatus::Valid ? "VALID " : "INVALID ")
                  << out.id << "\n\n";
        if (out.status != VcStatus::Valid) ++invalid;
      }
      if (invalid > 0) {
        std::cout << invalid << " of " << outcomes.size()
                  << " verification conditions are invalid.\n";
        return kExitCheckFailed;
      }
      std::cout << "All " << outcomes.size()
                << " verification conditions are valid.\n";
    }
    return kExitOk;
  }

  // ----- visualization exports -----
  if (!opt.trace_path.empty() || !opt.tree_path.empty()) {
    if (opt.operation.empty())
      return fail_usage("--trace and --tree require --op");
    if (!opt.trace_path.empty() && !opt.tree_path.empty())
      return fail_usage("--trace and --tree are mutually exclusive");
    const OpInfo* op = spec->find_operation(opt.operation);
    try {
      if (!opt.trace_path.empty()) {
        if (op->decl->kind != DeclKind::Proc)
          return fail_usage("--trace requires a procedure");
        uint64_t total = input_space_size(*op);
        if (opt.input_index >= total)
          return fail_usage("--input is out of range (the operation has " +
                            std::to_string(total) + " inputs)");
        std::vector<Value> args = input_tuple(*op, opt.input_index);
        Interp probe(*spec, EvalMode::Det);
        if (!probe.requires_holds(*op, args))
          return fail_usage("input " + std::to_string(opt.input_index) +
                            " is inadmissible");
        TraceGraph g = build_trace(*spec, opt.operation, args);
        std::string text = opt.format == "json" ? emit_json(g) : emit_dot(g);
        if (!write_file(opt.trace_path, text))
          return fail_usage("cannot write '" + opt.trace_path + "'");
        std::cout << "Trace of " << g.title << " written to " << opt.trace_path
                  << ".\n";
      } else {
        EvalTree t = record_eval_tree(*spec, opt.operation, !opt.no_prune,
                                      opt.max_layer_nodes);
        std::string text = opt.format == "json" ? emit_json(t) : emit_dot(t);
        if (!write_file(opt.tree_path, text))
          return fail_usage("cannot write '" + opt.tree_path + "'");
        std::cout << "Evaluation tree of " << opt.operation << " written to "
                  << opt.tree_path << ".\n";
      }
    } catch (const RuntimeException& e) {
      std::cerr << "finicheck: run failed: " << e.what() << "\n";
      return kExitCheckFailed;
    } catch (const std::invalid_argument& e) {
      return fail_usage(e.what());
    }
    return kExitOk;
  }

  // ----- exhaustive checking -----
  std::vector<std::string> to_run;
  if (!opt.operation.empty()) {
    to_run.push_back(opt.operation);
  } else {
    to_run = spec->operation_order;
  }

  bool any_failed = false;
  std::string json_array = "[\n";
  bool first_json = true;
  for (const auto& name : to_run) {
    CheckConfig cfg = base;
    cfg.operation = name;
    RunReport report;
    try {
      report = run_operation(*spec, cfg);
    } catch (const CarrierOverflowError& e) {
      std::cerr << "finicheck: " << name << ": " << e.what() << "\n";
      return kExitUsage;
    }
    std::cout << format_report(report, opt.ascii);
    if (to_run.size() > 1) std::cout << "\n";
    if (!report.ok()) any_failed = true;
    if (!opt.report_json_path.empty()) {
      if (!first_json) json_array += ",\n";
      json_array += report_to_json(report);
      first_json = false;
    }
  }
  if (!opt.report_json_path.empty()) {
    json_array += "\n]\n";
    if (!write_file(opt.report_json_path, json_array))
      return fail_usage("cannot write '" + opt.report_json_path + "'");
  }
  return any_failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "finicheck - exhaustive checker for finite-domain specifications"};
  Options opt;
  app.add_option("spec", opt.spec_path, "specification file")->required();
  app.add_option("--const", opt.consts,
                 "bind a model constant, e.g. --const N=20 (repeatable)");
  app.add_option("--op", opt.operation, "operation to check (default: all)");
  app.add_option("--mode", opt.mode, "evaluation mode")
      ->check(CLI::IsMember({"det", "nondet"}));
  app.add_flag("--silent", opt.silent, "suppress per-input output");
  app.add_flag("--fail-fast", opt.fail_fast, "abort at the first failure");
  app.add_flag("--vcg", opt.vcg, "print the generated verification conditions");
  app.add_option("--vcg-json", opt.vcg_json_path,
                 "write the verification conditions as JSON");
  app.add_option("--check-vc", opt.check_vc,
                 "check one verification condition by id, or 'all'");
  app.add_option("--trace", opt.trace_path,
                 "export the execution trace of one input (requires --op)");
  app.add_option("--tree", opt.tree_path,
                 "export the formula evaluation tree (requires --op)");
  app.add_option("--format", opt.format, "export format")
      ->check(CLI::IsMember({"dot", "json"}));
  app.add_option("--max-layer-nodes", opt.max_layer_nodes,
                 "cap on children per node in tree exports (default 500)");
  app.add_option("--report-json", opt.report_json_path,
                 "write the run reports as JSON");
  app.add_option("--workers", opt.workers, "parallel workers (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--timeout", opt.timeout_ms, "per-input timeout in ms");
  app.add_flag("--no-prune", opt.no_prune, "keep all evaluated tree children");
  app.add_flag("--ascii", opt.ascii, "transliterate math symbols in output");
  app.add_option("--input", opt.input_index,
                 "input index for --trace (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  return run(opt);
}

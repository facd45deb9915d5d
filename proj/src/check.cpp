#include "finicheck/check.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <json.hpp>

#include "finicheck/errors.hpp"

namespace finicheck {

namespace {

constexpr size_t kMaxOutcomesShown = 16;

enum : uint8_t { kChecked = 0, kInadmissible = 1, kFailed = 2 };

struct InputOutcome {
  uint8_t status = kChecked;
  std::string line;
  std::optional<RuntimeError> error;
};

std::string format_input(const std::string& name,
                         const std::vector<Value>& args, bool ascii) {
  std::string s = name + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) s += ",";
    s += args[i].to_string(ascii);
  }
  return s + ")";
}

/// Runs one input tuple with all annotation checks; never throws.
InputOutcome check_one(Interp& interp, const OpInfo& op,
                       const std::vector<Value>& args,
                       const CheckConfig& cfg) {
  InputOutcome out;
  interp.reset_deadline(std::chrono::milliseconds(cfg.timeout_ms));
  try {
    if (!interp.requires_holds(op, args)) {
      out.status = kInadmissible;
      if (!cfg.silent)
        out.line = format_input(op.decl->name, args, cfg.ascii) +
                   ": inadmissible";
      return out;
    }
    const bool is_theorem = op.decl->kind == DeclKind::Theorem;
    std::vector<std::string> rendered;
    bool truth_failure = false;
    interp.call_stream(
        op.decl->name, args,
        [&](const Value& v) {
          if (is_theorem && !v.as_bool()) {
            truth_failure = true;
            return false;
          }
          if (rendered.size() <= kMaxOutcomesShown)
            rendered.push_back(v.to_string(cfg.ascii));
          return cfg.mode == EvalMode::Nondet;  // det needs one outcome only
        },
        op.decl->span);
    if (truth_failure) {
      RuntimeError err;
      err.kind = RuntimeErrorKind::AssertionViolation;
      err.span = op.decl->body_expr ? op.decl->body_expr->span : op.decl->span;
      err.message = "theorem '" + op.decl->name + "' is not true";
      for (size_t i = 0; i < args.size(); ++i)
        err.environment.emplace_back(op.decl->params[i].name, args[i]);
      out.status = kFailed;
      out.error = std::move(err);
      return out;
    }
    if (!cfg.silent) {
      std::string line = format_input(op.decl->name, args, cfg.ascii) + " = ";
      for (size_t i = 0; i < rendered.size(); ++i) {
        if (i) line += ", ";
        if (i == kMaxOutcomesShown) {
          line += "...";
          break;
        }
        line += rendered[i];
      }
      out.line = std::move(line);
    }
    return out;
  } catch (const RuntimeException& ex) {
    out.status = kFailed;
    out.error = ex.error();
    return out;
  } catch (const CarrierOverflowError& ex) {
    out.status = kFailed;
    RuntimeError err;
    err.kind = RuntimeErrorKind::Overflow;
    err.span = op.decl->span;
    err.message = ex.what();
    out.error = std::move(err);
    return out;
  }
}

}  // namespace

uint64_t input_space_size(const OpInfo& op) {
  uint64_t total = 1;
  for (const auto& den : op.param_dens) {
    uint64_t n = carrier_size(*den);
    uint64_t r;
    if (__builtin_mul_overflow(total, n, &r))
      throw CarrierOverflowError("input space exceeds 64-bit capacity");
    total = r;
  }
  return total;
}

std::vector<Value> input_tuple(const OpInfo& op, uint64_t index) {
  std::vector<Value> args;
  args.reserve(op.param_dens.size());
  for (const auto& den : op.param_dens) {
    uint64_t n = carrier_size(*den);
    args.push_back(carrier_value_at(*den, index % n));
    index /= n;
  }
  return args;
}

RunReport run_operation(const TypedSpec& spec, const CheckConfig& cfg) {
  const OpInfo* op = spec.find_operation(cfg.operation);
  if (!op)
    throw std::invalid_argument("unknown operation '" + cfg.operation + "'");

  RunReport report;
  report.operation = cfg.operation;
  for (const auto& den : op->param_dens)
    report.param_symbols.push_back(den_symbol(*den, cfg.ascii));
  report.total_inputs = input_space_size(*op);

  const uint64_t total = report.total_inputs;
  std::vector<uint8_t> statuses(total, kChecked);
  std::vector<std::string> lines;
  if (!cfg.silent) lines.resize(total);
  std::vector<Failure> failures;

  auto started = std::chrono::steady_clock::now();

#ifdef _OPENMP
  const bool parallel = cfg.workers > 1 && !cfg.fail_fast && total > 1;
#else
  const bool parallel = false;
#endif

  if (!parallel) {
    // serial reference driver
    Interp interp(spec, cfg.mode);
    for (uint64_t k = 0; k < total; ++k) {
      std::vector<Value> args = input_tuple(*op, k);
      InputOutcome one = check_one(interp, *op, args, cfg);
      statuses[k] = one.status;
      if (!cfg.silent) lines[k] = std::move(one.line);
      report.processed = k + 1;
      if (one.status == kFailed) {
        failures.push_back(Failure{k, std::move(args), std::move(*one.error)});
        if (cfg.fail_fast) {
          report.aborted = true;
          break;
        }
      }
    }
  } else {
#ifdef _OPENMP
    // parallel kernel: one input tuple per task, results merged back into
    // canonical order
    std::vector<std::vector<Failure>> worker_failures(
        static_cast<size_t>(cfg.workers));
#pragma omp parallel num_threads(cfg.workers)
    {
      Interp interp(spec, cfg.mode);
      const size_t wid = static_cast<size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 64)
      for (long long k = 0; k < static_cast<long long>(total); ++k) {
        std::vector<Value> args = input_tuple(*op, static_cast<uint64_t>(k));
        InputOutcome one = check_one(interp, *op, args, cfg);
        statuses[static_cast<size_t>(k)] = one.status;
        if (!cfg.silent) lines[static_cast<size_t>(k)] = std::move(one.line);
        if (one.status == kFailed)
          worker_failures[wid].push_back(Failure{static_cast<uint64_t>(k),
                                                 std::move(args),
                                                 std::move(*one.error)});
      }
    }
    report.processed = total;
    for (auto& wf : worker_failures)
      for (auto& f : wf) failures.push_back(std::move(f));
    std::sort(failures.begin(), failures.end(),
              [](const Failure& a, const Failure& b) {
                return a.input_index < b.input_index;
              });
#endif
  }

  for (uint64_t k = 0; k < report.processed; ++k) {
    if (statuses[k] == kChecked)
      ++report.checked;
    else if (statuses[k] == kInadmissible)
      ++report.inadmissible;
  }
  report.failures = std::move(failures);
  if (!cfg.silent) {
    lines.resize(report.processed);
    report.output_lines = std::move(lines);
  }
  report.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  return report;
}

std::string format_report(const RunReport& r, bool ascii) {
  std::ostringstream out;
  out << "Executing " << r.operation << "(";
  for (size_t i = 0; i < r.param_symbols.size(); ++i) {
    if (i) out << ",";
    out << r.param_symbols[i];
  }
  out << ") with all " << r.total_inputs << " inputs.\n";
  for (const auto& line : r.output_lines)
    if (!line.empty()) out << line << "\n";
  for (const auto& f : r.failures) {
    out << "ERROR in execution of " << r.operation << "(";
    for (size_t i = 0; i < f.input.size(); ++i) {
      if (i) out << ",";
      out << f.input[i].to_string(ascii);
    }
    out << "): " << runtime_error_kind_name(f.error.kind) << ": "
        << f.error.message << "\n";
    for (const auto& [name, value] : f.error.environment)
      out << "  " << name << " = " << value.to_string(ascii) << "\n";
  }
  if (r.aborted) {
    out << "Execution aborted after " << r.processed << " of "
        << r.total_inputs << " inputs (" << r.duration_ms << " ms, "
        << r.checked << " checked, " << r.inadmissible << " inadmissible, "
        << r.failures.size() << " failed).\n";
  } else if (r.failures.empty()) {
    out << "Execution completed for ALL inputs (" << r.duration_ms << " ms, "
        << r.checked << " checked, " << r.inadmissible << " inadmissible).\n";
  } else {
    out << "Execution completed for ALL inputs (" << r.duration_ms << " ms, "
        << r.checked << " checked, " << r.inadmissible << " inadmissible, "
        << r.failures.size() << " failed).\n";
  }
  return out.str();
}

std::string report_to_json(const RunReport& r) {
  nlohmann::json j;
  j["operation"] = r.operation;
  j["total_inputs"] = r.total_inputs;
  j["processed"] = r.processed;
  j["checked"] = r.checked;
  j["inadmissible"] = r.inadmissible;
  j["duration_ms"] = r.duration_ms;
  j["aborted"] = r.aborted;
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : r.failures) {
    nlohmann::json jf;
    jf["input_index"] = f.input_index;
    nlohmann::json input = nlohmann::json::array();
    for (const auto& v : f.input) input.push_back(v.to_string());
    jf["input"] = input;
    jf["kind"] = runtime_error_kind_name(f.error.kind);
    jf["message"] = f.error.message;
    jf["span"] = {{"begin", f.error.span.begin}, {"end", f.error.span.end}};
    nlohmann::json env = nlohmann::json::object();
    for (const auto& [name, value] : f.error.environment)
      env[name] = value.to_string();
    jf["environment"] = env;
    if (f.error.invariant_index >= 0)
      jf["invariant_index"] = f.error.invariant_index;
    if (f.error.iteration >= 0) jf["iteration"] = f.error.iteration;
    failures.push_back(std::move(jf));
  }
  j["failures"] = std::move(failures);
  return j.dump(2);
}

}  // namespace finicheck

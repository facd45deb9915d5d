#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "finicheck/check.hpp"
#include "finicheck/eval.hpp"
#include "finicheck/parser.hpp"
#include "finicheck/printer.hpp"
#include "finicheck/resolve.hpp"

namespace testutil {

using namespace finicheck;

inline std::string corpus_path(const std::string& name) {
  return std::string(FINICHECK_CORPUS_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::shared_ptr<SourceFile> source_of(const std::string& text,
                                             const std::string& name = "test") {
  return std::make_shared<SourceFile>(name, text);
}

inline std::shared_ptr<const TypedSpec> typed_of(
    const std::string& text, std::vector<ConstBinding> consts = {}) {
  auto src = source_of(text);
  return resolve(parse_source(*src), consts, src);
}

inline std::shared_ptr<const TypedSpec> typed_corpus(
    const std::string& name, std::vector<ConstBinding> consts = {}) {
  auto src = source_of(read_file(corpus_path(name)), name);
  return resolve(parse_source(*src), consts, src);
}

inline ExprPtr expr_of(const std::string& text) {
  SourceFile src("expr", text);
  return parse_expression(src);
}

/// Evaluates a closed expression inside a minimal spec context.
inline Value eval_in(const TypedSpec& spec, const std::string& text) {
  SourceFile src("expr", text);
  ExprPtr e = expr_of(text);
  // typecheck through a throwaway theorem so binder denotations exist;
  // "e = e" is boolean for every expression type
  auto decl = std::make_shared<Decl>();
  decl->kind = DeclKind::Theorem;
  decl->name = "_probe";
  decl->body_expr = mk_binary(BinaryOp::Eq, e, e, e->span);
  auto extended = std::make_shared<Spec>();
  extended->decls = spec.spec->decls;
  extended->decls.push_back(decl);
  auto typed = resolve(extended, spec.bindings, spec.source);
  Interp interp(*typed, EvalMode::Det);
  Frame frame;
  return interp.eval_det(*e, frame);
}

inline std::vector<ConstBinding> n_of(long long n) {
  return {ConstBinding{"N", n}};
}

inline std::vector<ConstBinding> nm_of(long long n, long long m) {
  return {ConstBinding{"N", n}, ConstBinding{"M", m}};
}

}  // namespace testutil

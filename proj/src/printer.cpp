#include "finicheck/printer.hpp"

#include <sstream>

namespace finicheck {

namespace {

struct Printer {
  explicit Printer(const PrintOptions& o) : opts(o) {}
  const PrintOptions& opts;
  std::ostringstream out;

  const char* sym(const char* unicode, const char* ascii) const {
    return opts.ascii ? ascii : unicode;
  }

  const char* binop(BinaryOp op) const {
    switch (op) {
      case BinaryOp::Add: return "+";
      case BinaryOp::Sub: return "-";
      case BinaryOp::Mul: return sym("⋅", "*");
      case BinaryOp::Quot: return "/";
      case BinaryOp::Rem: return "%";
      case BinaryOp::Eq: return "=";
      case BinaryOp::Ne: return sym("≠", "!=");
      case BinaryOp::Lt: return "<";
      case BinaryOp::Le: return sym("≤", "<=");
      case BinaryOp::Gt: return ">";
      case BinaryOp::Ge: return sym("≥", ">=");
      case BinaryOp::And: return sym("∧", "and");
      case BinaryOp::Or: return sym("∨", "or");
      case BinaryOp::Implies: return sym("⇒", "implies");
      case BinaryOp::Iff: return sym("⇔", "iff");
      case BinaryOp::MemberOf: return sym("∈", "isin");
    }
    return "?";
  }

  static bool is_atom(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        return e.int_value >= 0;
      case ExprKind::BoolLit:
      case ExprKind::VarRef:
      case ExprKind::Call:
      case ExprKind::ArrayIndex:
      case ExprKind::TupleProj:
      case ExprKind::TupleLit:
      case ExprKind::SetLit:
        return true;
      default:
        return false;
    }
  }

  void operand(const Expr& e) {
    if (is_atom(e)) {
      expr(e);
    } else {
      out << "(";
      expr(e);
      out << ")";
    }
  }

  /// Bodies of binding forms are always parenthesized, mirroring the
  /// fully-parenthesized output shape of generated theorems.
  void body(const Expr& e) {
    out << "(";
    expr(e);
    out << ")";
  }

  void expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::IntLit:
        out << e.int_value;
        return;
      case ExprKind::BoolLit:
        out << (e.bool_value ? "true" : "false");
        return;
      case ExprKind::VarRef:
        out << e.name;
        return;
      case ExprKind::Unary:
        out << (e.unary_op == UnaryOp::Not ? sym("¬", "not ") : "-");
        operand(*e.children[0]);
        return;
      case ExprKind::Binary:
        operand(*e.children[0]);
        out << " " << binop(e.binary_op) << " ";
        operand(*e.children[1]);
        return;
      case ExprKind::Forall:
      case ExprKind::Exists: {
        out << "(" << (e.kind == ExprKind::Forall ? sym("∀", "forall ")
                                                  : sym("∃", "exists "));
        for (size_t i = 0; i < e.binders.size(); ++i) {
          if (i) out << ", ";
          out << e.binders[i].name << ":";
          type(*e.binders[i].type);
        }
        out << ". ";
        body(*e.children[0]);
        out << ")";
        return;
      }
      case ExprKind::Choose: {
        out << "(choose " << e.binders[0].name << ":";
        type(*e.binders[0].type);
        out << " with ";
        body(*e.children[0]);
        out << ")";
        return;
      }
      case ExprKind::Let:
      case ExprKind::LetPar: {
        out << (e.kind == ExprKind::Let ? "let " : "letpar ");
        for (size_t i = 0; i < e.bindings.size(); ++i) {
          if (i) out << ", ";
          out << e.bindings[i].name << " = ";
          expr(*e.bindings[i].value);
        }
        out << " in ";
        body(*e.children[0]);
        return;
      }
      case ExprKind::IfElse:
        out << "if ";
        expr(*e.children[0]);
        out << " then ";
        expr(*e.children[1]);
        out << " else ";
        expr(*e.children[2]);
        return;
      case ExprKind::Call: {
        out << e.name << "(";
        for (size_t i = 0; i < e.children.size(); ++i) {
          if (i) out << ", ";
          expr(*e.children[i]);
        }
        out << ")";
        return;
      }
      case ExprKind::ArrayIndex:
        operand(*e.children[0]);
        out << "[";
        expr(*e.children[1]);
        out << "]";
        return;
      case ExprKind::ArrayUpdate:
        operand(*e.children[0]);
        out << " with [";
        expr(*e.children[1]);
        out << "] = ";
        operand(*e.children[2]);
        return;
      case ExprKind::TupleProj:
        operand(*e.children[0]);
        out << "." << e.proj_index;
        return;
      case ExprKind::TupleLit: {
        out << sym("⟨", "<<");
        for (size_t i = 0; i < e.children.size(); ++i) {
          if (i) out << ", ";
          expr(*e.children[i]);
        }
        out << sym("⟩", ">>");
        return;
      }
      case ExprKind::SetLit: {
        out << "{";
        for (size_t i = 0; i < e.children.size(); ++i) {
          if (i) out << ", ";
          expr(*e.children[i]);
        }
        out << "}";
        return;
      }
    }
  }

  void type(const TypeExpr& t) {
    switch (t.kind) {
      case TypeExprKind::Bool:
        out << "Bool";
        return;
      case TypeExprKind::Nat:
        out << sym("ℕ", "Nat") << "[";
        expr(*t.bounds[0]);
        out << "]";
        return;
      case TypeExprKind::NatUnbounded:
        out << sym("ℕ", "Nat");
        return;
      case TypeExprKind::IntRange:
        out << sym("ℤ", "Int") << "[";
        expr(*t.bounds[0]);
        out << ",";
        expr(*t.bounds[1]);
        out << "]";
        return;
      case TypeExprKind::Array:
        out << "Array[";
        expr(*t.bounds[0]);
        out << ", ";
        type(*t.args[0]);
        out << "]";
        return;
      case TypeExprKind::Set:
        out << "Set[";
        type(*t.args[0]);
        out << "]";
        return;
      case TypeExprKind::Tuple:
        out << "Tuple[";
        for (size_t i = 0; i < t.args.size(); ++i) {
          if (i) out << ", ";
          type(*t.args[i]);
        }
        out << "]";
        return;
      case TypeExprKind::Name:
        out << t.name;
        return;
    }
  }

  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out << "  ";
  }

  void command(const Command& c, int depth) {
    switch (c.kind) {
      case CmdKind::VarDecl:
        indent(depth);
        out << "var " << c.var_name << ":";
        type(*c.var_type);
        out << " " << sym("≔", ":=") << " ";
        expr(*c.init);
        out << ";\n";
        return;
      case CmdKind::Assign:
        indent(depth);
        out << c.target;
        for (const auto& idx : c.indices) {
          out << "[";
          expr(*idx);
          out << "]";
        }
        out << " " << sym("≔", ":=") << " ";
        expr(*c.value);
        out << ";\n";
        return;
      case CmdKind::If:
        indent(depth);
        out << "if ";
        expr(*c.cond);
        out << " then {\n";
        command_items(*c.then_cmd, depth + 1);
        indent(depth);
        out << "}";
        if (c.else_cmd) {
          out << " else {\n";
          command_items(*c.else_cmd, depth + 1);
          indent(depth);
          out << "}";
        }
        out << "\n";
        return;
      case CmdKind::While:
        indent(depth);
        out << "while ";
        expr(*c.cond);
        out << " do\n";
        annotations(c, depth + 1);
        indent(depth);
        out << "{\n";
        command_items(*c.body, depth + 1);
        indent(depth);
        out << "}\n";
        return;
      case CmdKind::For:
        indent(depth);
        out << "for var " << c.for_init->var_name << ":";
        type(*c.for_init->var_type);
        out << " " << sym("≔", ":=") << " ";
        expr(*c.for_init->init);
        out << "; ";
        expr(*c.cond);
        out << "; " << c.for_update->target;
        for (const auto& idx : c.for_update->indices) {
          out << "[";
          expr(*idx);
          out << "]";
        }
        out << " " << sym("≔", ":=") << " ";
        expr(*c.for_update->value);
        out << " do\n";
        annotations(c, depth + 1);
        indent(depth);
        out << "{\n";
        command_items(*c.body, depth + 1);
        indent(depth);
        out << "}\n";
        return;
      case CmdKind::Seq:
        indent(depth);
        out << "{\n";
        command_items(c, depth + 1);
        indent(depth);
        out << "}\n";
        return;
      case CmdKind::Assert:
        indent(depth);
        out << "assert ";
        expr(*c.formula);
        out << ";\n";
        return;
      case CmdKind::Call: {
        indent(depth);
        out << c.callee << "(";
        for (size_t i = 0; i < c.args.size(); ++i) {
          if (i) out << ", ";
          expr(*c.args[i]);
        }
        out << ");\n";
        return;
      }
      case CmdKind::Return:
        indent(depth);
        out << "return ";
        expr(*c.ret);
        out << ";\n";
        return;
    }
  }

  /// Prints a command inside braces that were already emitted. A Seq is
  /// flattened into its items so that printing does not add scope nesting.
  void command_items(const Command& c, int depth) {
    if (c.kind == CmdKind::Seq) {
      for (const auto& item : c.commands) command(*item, depth);
    } else {
      command(c, depth);
    }
  }

  void annotations(const Command& c, int depth) {
    for (const auto& inv : c.invariants) {
      indent(depth);
      out << "invariant ";
      expr(*inv);
      out << ";\n";
    }
    if (c.decreases) {
      indent(depth);
      out << "decreases ";
      expr(*c.decreases);
      out << ";\n";
    }
  }

  void params(const Decl& d) {
    out << "(";
    for (size_t i = 0; i < d.params.size(); ++i) {
      if (i) out << ", ";
      out << d.params[i].name << ":";
      type(*d.params[i].type);
    }
    out << ")";
  }

  void requires_clauses(const Decl& d, const char* sep) {
    for (const auto& r : d.requires_) {
      out << sep << "requires ";
      expr(*r);
      out << ";";
    }
  }

  void decl(const Decl& d) {
    switch (d.kind) {
      case DeclKind::Val:
        out << "val " << d.name;
        if (d.val_type) {
          out << ": ";
          type(*d.val_type);
        }
        if (d.val_value) {
          out << " = ";
          expr(*d.val_value);
        }
        out << ";\n";
        return;
      case DeclKind::Type:
        out << "type " << d.name << " = ";
        type(*d.type_rhs);
        out << ";\n";
        return;
      case DeclKind::Pred:
        out << "pred " << d.name;
        params(d);
        out << " " << sym("⇔", "iff") << " ";
        expr(*d.body_expr);
        out << ";\n";
        return;
      case DeclKind::Fun:
        out << "fun " << d.name;
        params(d);
        out << ": ";
        type(*d.result_type);
        requires_clauses(d, "\n  ");
        out << "\n= ";
        expr(*d.body_expr);
        out << ";\n";
        return;
      case DeclKind::Theorem:
        out << "theorem " << d.name;
        params(d);
        requires_clauses(d, "\n  ");
        out << "\n " << sym("⇔", "iff") << " ";
        expr(*d.body_expr);
        out << ";\n";
        return;
      case DeclKind::Proc:
        out << "proc " << d.name;
        params(d);
        out << ": ";
        type(*d.result_type);
        requires_clauses(d, "\n  ");
        for (const auto& e : d.ensures_) {
          out << "\n  ensures ";
          expr(*e);
          out << ";";
        }
        out << "\n{\n";
        command_items(*d.body_cmd, 1);
        indent(1);
        out << "return ";
        expr(*d.return_expr);
        out << ";\n}\n";
        return;
    }
  }
};

}  // namespace

std::string pretty_print(const Expr& e, const PrintOptions& opts) {
  Printer p(opts);
  p.expr(e);
  return p.out.str();
}

std::string pretty_print(const TypeExpr& t, const PrintOptions& opts) {
  Printer p(opts);
  p.type(t);
  return p.out.str();
}

std::string pretty_print(const Command& c, const PrintOptions& opts) {
  Printer p(opts);
  p.command(c, 0);
  return p.out.str();
}

std::string pretty_print(const Decl& d, const PrintOptions& opts) {
  Printer p(opts);
  p.decl(d);
  return p.out.str();
}

std::string pretty_print(const Spec& s, const PrintOptions& opts) {
  Printer p(opts);
  for (size_t i = 0; i < s.decls.size(); ++i) {
    if (i) p.out << "\n";
    p.decl(*s.decls[i]);
  }
  return p.out.str();
}

}  // namespace finicheck

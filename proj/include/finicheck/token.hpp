#pragma once

#include <string>
#include <vector>

#include "finicheck/source.hpp"

namespace finicheck {

enum class TokenKind {
  // literals and names
  Ident,
  IntLit,
  // keywords
  KwVal, KwType, KwPred, KwFun, KwProc, KwTheorem,
  KwRequires, KwEnsures, KwInvariant, KwDecreases,
  KwVar, KwWhile, KwDo, KwIf, KwThen, KwElse, KwFor, KwReturn, KwAssert,
  KwLet, KwLetPar, KwIn, KwChoose, KwWith,
  KwTrue, KwFalse,
  KwNat, KwInt, KwBool, KwArray, KwSet, KwTuple,
  // operators (Unicode and ASCII aliases share one kind)
  Forall, Exists, Not, And, Or, Implies, Iff,
  Eq, Neq, Lt, Le, Gt, Ge,
  Plus, Minus, Times, Quot, Rem,
  Assign, MemberOf,
  // punctuation
  LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  LTupleBracket, RTupleBracket,
  Colon, Semicolon, Comma, Dot,
  EndOfFile,
};

const char* token_kind_name(TokenKind k);

struct Token {
  TokenKind kind;
  std::string lexeme;  // UTF-8 source text of the token
  Span span;
};

/// Splits UTF-8 source into tokens. Unicode operators and their ASCII
/// aliases produce the same token kind. Throws LexError on characters
/// outside the accepted alphabet.
std::vector<Token> tokenize(const SourceFile& src);

}  // namespace finicheck

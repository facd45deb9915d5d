#include "finicheck/token.hpp"

#include <unordered_map>

#include "finicheck/errors.hpp"

namespace finicheck {

const char* token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::IntLit: return "integer literal";
    case TokenKind::KwVal: return "'val'";
    case TokenKind::KwType: return "'type'";
    case TokenKind::KwPred: return "'pred'";
    case TokenKind::KwFun: return "'fun'";
    case TokenKind::KwProc: return "'proc'";
    case TokenKind::KwTheorem: return "'theorem'";
    case TokenKind::KwRequires: return "'requires'";
    case TokenKind::KwEnsures: return "'ensures'";
    case TokenKind::KwInvariant: return "'invariant'";
    case TokenKind::KwDecreases: return "'decreases'";
    case TokenKind::KwVar: return "'var'";
    case TokenKind::KwWhile: return "'while'";
    case TokenKind::KwDo: return "'do'";
    case TokenKind::KwIf: return "'if'";
    case TokenKind::KwThen: return "'then'";
    case TokenKind::KwElse: return "'else'";
    case TokenKind::KwFor: return "'for'";
    case TokenKind::KwReturn: return "'return'";
    case TokenKind::KwAssert: return "'assert'";
    case TokenKind::KwLet: return "'let'";
    case TokenKind::KwLetPar: return "'letpar'";
    case TokenKind::KwIn: return "'in'";
    case TokenKind::KwChoose: return "'choose'";
    case TokenKind::KwWith: return "'with'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::KwNat: return "'ℕ'";
    case TokenKind::KwInt: return "'ℤ'";
    case TokenKind::KwBool: return "'Bool'";
    case TokenKind::KwArray: return "'Array'";
    case TokenKind::KwSet: return "'Set'";
    case TokenKind::KwTuple: return "'Tuple'";
    case TokenKind::Forall: return "'∀'";
    case TokenKind::Exists: return "'∃'";
    case TokenKind::Not: return "'¬'";
    case TokenKind::And: return "'∧'";
    case TokenKind::Or: return "'∨'";
    case TokenKind::Implies: return "'⇒'";
    case TokenKind::Iff: return "'⇔'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Neq: return "'≠'";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'≤'";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'≥'";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Times: return "'⋅'";
    case TokenKind::Quot: return "'/'";
    case TokenKind::Rem: return "'%'";
    case TokenKind::Assign: return "'≔'";
    case TokenKind::MemberOf: return "'∈'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::LTupleBracket: return "'⟨'";
    case TokenKind::RTupleBracket: return "'⟩'";
    case TokenKind::Colon: return "':'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::EndOfFile: return "end of file";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string, TokenKind> table = {
      {"val", TokenKind::KwVal},
      {"type", TokenKind::KwType},
      {"pred", TokenKind::KwPred},
      {"fun", TokenKind::KwFun},
      {"proc", TokenKind::KwProc},
      {"theorem", TokenKind::KwTheorem},
      {"requires", TokenKind::KwRequires},
      {"ensures", TokenKind::KwEnsures},
      {"invariant", TokenKind::KwInvariant},
      {"decreases", TokenKind::KwDecreases},
      {"var", TokenKind::KwVar},
      {"while", TokenKind::KwWhile},
      {"do", TokenKind::KwDo},
      {"if", TokenKind::KwIf},
      {"then", TokenKind::KwThen},
      {"else", TokenKind::KwElse},
      {"for", TokenKind::KwFor},
      {"return", TokenKind::KwReturn},
      {"assert", TokenKind::KwAssert},
      {"let", TokenKind::KwLet},
      {"letpar", TokenKind::KwLetPar},
      {"in", TokenKind::KwIn},
      {"choose", TokenKind::KwChoose},
      {"with", TokenKind::KwWith},
      {"true", TokenKind::KwTrue},
      {"false", TokenKind::KwFalse},
      // ASCII aliases for Unicode operators
      {"forall", TokenKind::Forall},
      {"exists", TokenKind::Exists},
      {"not", TokenKind::Not},
      {"and", TokenKind::And},
      {"or", TokenKind::Or},
      {"implies", TokenKind::Implies},
      {"iff", TokenKind::Iff},
      {"isin", TokenKind::MemberOf},
      // ASCII aliases for type symbols
      {"Nat", TokenKind::KwNat},
      {"Int", TokenKind::KwInt},
      {"Bool", TokenKind::KwBool},
      {"Array", TokenKind::KwArray},
      {"Set", TokenKind::KwSet},
      {"Tuple", TokenKind::KwTuple},
  };
  return table;
}

bool is_ident_start(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'_';
}

bool is_ident_cont(char32_t c) {
  return is_ident_start(c) || (c >= U'0' && c <= U'9');
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

class Lexer {
public:
  explicit Lexer(const SourceFile& src) : src_(src), chars_(src.chars()) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_trivia();
      if (at_end()) break;
      tokens.push_back(next_token());
    }
    tokens.push_back(Token{TokenKind::EndOfFile, "",
                           Span{pos(), pos()}});
    return tokens;
  }

private:
  const SourceFile& src_;
  const std::vector<char32_t>& chars_;
  uint32_t i_ = 0;

  bool at_end() const { return i_ >= chars_.size(); }
  uint32_t pos() const { return i_; }
  char32_t cur() const { return chars_[i_]; }
  char32_t peek(uint32_t off = 1) const {
    return i_ + off < chars_.size() ? chars_[i_ + off] : 0;
  }

  void skip_trivia() {
    while (!at_end()) {
      char32_t c = cur();
      if (c == U' ' || c == U'\t' || c == U'\r' || c == U'\n') {
        ++i_;
      } else if (c == U'/' && peek() == U'/') {
        while (!at_end() && cur() != U'\n') ++i_;
      } else if (c == U'/' && peek() == U'*') {
        uint32_t start = i_;
        i_ += 2;
        while (!at_end() && !(cur() == U'*' && peek() == U'/')) ++i_;
        if (at_end())
          throw LexError("unterminated block comment", Span{start, i_});
        i_ += 2;
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, uint32_t start) {
    Span span{start, i_};
    return Token{kind, src_.slice(span), span};
  }

  Token next_token() {
    uint32_t start = i_;
    char32_t c = cur();

    if (is_ident_start(c)) {
      while (!at_end() && is_ident_cont(cur())) ++i_;
      Span span{start, i_};
      std::string text = src_.slice(span);
      auto it = keyword_table().find(text);
      TokenKind kind = it != keyword_table().end() ? it->second : TokenKind::Ident;
      return Token{kind, text, span};
    }

    if (is_digit(c)) {
      while (!at_end() && is_digit(cur())) ++i_;
      return make(TokenKind::IntLit, start);
    }

    ++i_;
    switch (c) {
      // Unicode operators
      case U'∀': return make(TokenKind::Forall, start);   // ∀
      case U'∃': return make(TokenKind::Exists, start);   // ∃
      case U'¬': return make(TokenKind::Not, start);      // ¬
      case U'∧': return make(TokenKind::And, start);      // ∧
      case U'∨': return make(TokenKind::Or, start);       // ∨
      case U'⇒': return make(TokenKind::Implies, start);  // ⇒
      case U'⇔': return make(TokenKind::Iff, start);      // ⇔
      case U'≠': return make(TokenKind::Neq, start);      // ≠
      case U'≤': return make(TokenKind::Le, start);       // ≤
      case U'≥': return make(TokenKind::Ge, start);       // ≥
      case U'≔': return make(TokenKind::Assign, start);   // ≔
      case U'⋅': return make(TokenKind::Times, start);    // ⋅
      case U'−': return make(TokenKind::Minus, start);    // −
      case U'∈': return make(TokenKind::MemberOf, start); // ∈
      case U'ℕ': return make(TokenKind::KwNat, start);    // ℕ
      case U'ℤ': return make(TokenKind::KwInt, start);    // ℤ
      case U'⟨': return make(TokenKind::LTupleBracket, start);  // ⟨
      case U'⟩': return make(TokenKind::RTupleBracket, start);  // ⟩

      // ASCII operators and digraph aliases
      case U'=': return make(TokenKind::Eq, start);
      case U'+': return make(TokenKind::Plus, start);
      case U'-': return make(TokenKind::Minus, start);
      case U'*': return make(TokenKind::Times, start);
      case U'/': return make(TokenKind::Quot, start);
      case U'%': return make(TokenKind::Rem, start);
      case U'(': return make(TokenKind::LParen, start);
      case U')': return make(TokenKind::RParen, start);
      case U'[': return make(TokenKind::LBracket, start);
      case U']': return make(TokenKind::RBracket, start);
      case U'{': return make(TokenKind::LBrace, start);
      case U'}': return make(TokenKind::RBrace, start);
      case U';': return make(TokenKind::Semicolon, start);
      case U',': return make(TokenKind::Comma, start);
      case U'.': return make(TokenKind::Dot, start);
      case U'<':
        if (!at_end() && cur() == U'=') { ++i_; return make(TokenKind::Le, start); }
        if (!at_end() && cur() == U'<') { ++i_; return make(TokenKind::LTupleBracket, start); }
        return make(TokenKind::Lt, start);
      case U'>':
        if (!at_end() && cur() == U'=') { ++i_; return make(TokenKind::Ge, start); }
        if (!at_end() && cur() == U'>') { ++i_; return make(TokenKind::RTupleBracket, start); }
        return make(TokenKind::Gt, start);
      case U'!':
        if (!at_end() && cur() == U'=') { ++i_; return make(TokenKind::Neq, start); }
        throw LexError("unexpected character '!'", Span{start, i_});
      case U'~':
        if (!at_end() && cur() == U'=') { ++i_; return make(TokenKind::Neq, start); }
        throw LexError("unexpected character '~'", Span{start, i_});
      case U':':
        if (!at_end() && cur() == U'=') { ++i_; return make(TokenKind::Assign, start); }
        return make(TokenKind::Colon, start);
      default:
        throw LexError("unexpected character '" + encode_utf8(c) + "'",
                       Span{start, i_});
    }
  }
};

}  // namespace

std::vector<Token> tokenize(const SourceFile& src) {
  return Lexer(src).run();
}

}  // namespace finicheck

// Copyright 2026 The IRPS Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "irps/dsl/text.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace irps::dsl {
namespace {

enum class Tok { kLParen, kRParen, kLBracket, kRBracket, kAtom, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> Tokenize(std::string_view s) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == ';') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (c == '(' || c == ')' || c == '[' || c == ']') {
      t.kind = c == '(' ? Tok::kLParen
               : c == ')' ? Tok::kRParen
               : c == '[' ? Tok::kLBracket
                          : Tok::kRBracket;
      t.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(t));
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) &&
           s[j] != '(' && s[j] != ')' && s[j] != '[' && s[j] != ']' && s[j] != ';') {
      ++j;
    }
    t.kind = Tok::kAtom;
    t.text = std::string(s.substr(i, j - i));
    for (char ch : t.text) {
      if (static_cast<unsigned char>(ch) < 0x20 || static_cast<unsigned char>(ch) > 0x7e) {
        throw ParseError(line, col, "unexpected character in token '" + t.text + "'");
      }
    }
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::kEnd;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

std::optional<double> ParseNumber(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::optional<IndexVar> ParseIndexVar(const std::string& s) {
  for (IndexVar v : {IndexVar::kA, IndexVar::kAOpp, IndexVar::kPrevA,
                     IndexVar::kPrevAOpp, IndexVar::kFree}) {
    if (IndexVarName(v) == s) return v;
  }
  return std::nullopt;
}

bool IsIdentifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
          c == '.')) {
      return false;
    }
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Tokenize(text)) {}

  Program ParseProgram() {
    Expect(Tok::kLParen, "'('");
    ExpectKeyword("program");
    Program p;
    p.name = ExpectIdentifier("program name");
    Expect(Tok::kLParen, "'('");
    ExpectKeyword("params");
    p.param_count = ExpectInt("parameter count");
    Expect(Tok::kRParen, "')'");
    while (true) {
      const Token& open = Peek();
      if (open.kind != Tok::kLParen) Fail(open, "expected '(state' or '(policy'");
      const Token& kw = Peek(1);
      if (kw.kind == Tok::kAtom && kw.text == "state") {
        p.states.push_back(ParseState());
      } else if (kw.kind == Tok::kAtom && kw.text == "policy") {
        Next();
        Next();
        p.policy = ParseExprInner();
        Expect(Tok::kRParen, "')' after policy");
        break;
      } else {
        Fail(kw, "expected 'state' or 'policy'");
      }
    }
    Expect(Tok::kRParen, "')' closing program");
    if (Peek().kind != Tok::kEnd) Fail(Peek(), "trailing input after program");
    return p;
  }

  Expr ParseSingleExpr() {
    Expr e = ParseExprInner();
    if (Peek().kind != Tok::kEnd) Fail(Peek(), "trailing input after expression");
    return e;
  }

 private:
  [[noreturn]] void Fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.column,
                     t.kind == Tok::kEnd ? msg + " (found end of input)"
                                         : msg + " (found '" + t.text + "')");
  }

  const Token& Peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& Next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  const Token& Expect(Tok kind, const std::string& what) {
    if (Peek().kind != kind) Fail(Peek(), "expected " + what);
    return Next();
  }

  void ExpectKeyword(const std::string& kw) {
    if (Peek().kind != Tok::kAtom || Peek().text != kw) Fail(Peek(), "expected '" + kw + "'");
    Next();
  }

  std::string ExpectIdentifier(const std::string& what) {
    const Token& t = Peek();
    if (t.kind != Tok::kAtom || !IsIdentifier(t.text)) Fail(t, "expected " + what);
    return Next().text;
  }

  int ExpectInt(const std::string& what) {
    const Token& t = Peek();
    int v = 0;
    if (t.kind != Tok::kAtom) Fail(t, "expected " + what);
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      Fail(t, "expected integer " + what);
    }
    Next();
    return v;
  }

  double ExpectNumber(const std::string& what) {
    const Token& t = Peek();
    if (t.kind != Tok::kAtom) Fail(t, "expected " + what);
    auto v = ParseNumber(t.text);
    if (!v) Fail(t, "expected " + what);
    Next();
    return *v;
  }

  IndexVar ExpectIndex() {
    const Token& t = Peek();
    if (t.kind != Tok::kAtom) Fail(t, "expected index variable");
    auto v = ParseIndexVar(t.text);
    if (!v) Fail(t, "expected index variable (a, a_opp, prev_a, prev_a_opp, _)");
    Next();
    return *v;
  }

  StateDecl ParseState() {
    Expect(Tok::kLParen, "'('");
    ExpectKeyword("state");
    StateDecl s;
    s.name = ExpectIdentifier("state name");
    Expect(Tok::kLParen, "'(shape'");
    ExpectKeyword("shape");
    while (Peek().kind == Tok::kAtom) {
      const Token& t = Peek();
      if (t.text != "3") Fail(t, "every state axis has size 3");
      Next();
      ++s.rank;
    }
    Expect(Tok::kRParen, "')' closing shape");
    Expect(Tok::kLParen, "'(init'");
    ExpectKeyword("init");
    s.init = ExpectNumber("initial value");
    Expect(Tok::kRParen, "')' closing init");
    Expect(Tok::kLParen, "'(at'");
    ExpectKeyword("at");
    while (Peek().kind == Tok::kAtom) s.at.push_back(ExpectIndex());
    Expect(Tok::kRParen, "')' closing at");
    s.update = ParseExprInner();
    Expect(Tok::kRParen, "')' closing state");
    return s;
  }

  Expr ParseLeaf(const Token& t) {
    if (auto v = ParseNumber(t.text)) return Const(*v);
    if (t.text == "r") return Reward();
    if (t.text == "cfr") return CfReward();
    for (auto [prefix, tf] : {std::pair{"param", ParamTransform::kRaw},
                              std::pair{"unit", ParamTransform::kUnit},
                              std::pair{"pos", ParamTransform::kPositive}}) {
      const std::string_view pre(prefix);
      if (t.text.size() > pre.size() && t.text.compare(0, pre.size(), pre) == 0) {
        const std::string digits = t.text.substr(pre.size());
        int k = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc() && ptr == digits.data() + digits.size() &&
            std::isdigit(static_cast<unsigned char>(digits[0]))) {
          return Param(k, tf);
        }
      }
    }
    if (ParseIndexVar(t.text)) {
      Fail(t, "index variables may only appear in slice, onehot or at");
    }
    Fail(t, "unknown operand");
  }

  Expr ParseExprInner() {
    const Token& t = Peek();
    if (t.kind == Tok::kAtom) {
      Next();
      return ParseLeaf(t);
    }
    if (t.kind == Tok::kLBracket) {
      Next();
      double x = ExpectNumber("vector component");
      double y = ExpectNumber("vector component");
      double z = ExpectNumber("vector component");
      Expect(Tok::kRBracket, "']' after three components");
      return Vec(x, y, z);
    }
    if (t.kind != Tok::kLParen) Fail(t, "expected expression");
    Next();
    const Token& head = Peek();
    if (head.kind != Tok::kAtom) Fail(head, "expected operator");
    const std::string name = Next().text;
    if (name == "slice") {
      Expr e = Slice(ExpectIdentifier("state name"));
      while (Peek().kind == Tok::kAtom) e.indices.push_back(ExpectIndex());
      Expect(Tok::kRParen, "')' closing slice");
      return e;
    }
    if (name == "onehot") {
      Expr e = Onehot(ExpectIndex());
      Expect(Tok::kRParen, "')' closing onehot");
      return e;
    }
    std::optional<Op> op;
    for (Op candidate : {Op::kAdd, Op::kSub, Op::kMul, Op::kDiv, Op::kEma, Op::kDecay,
                         Op::kCounter, Op::kSoftmax, Op::kSum}) {
      if (OpName(candidate) == name) op = candidate;
    }
    if (!op) Fail(head, "unknown operator");
    Expr e;
    e.op = *op;
    for (int i = 0; i < Arity(*op); ++i) e.args.push_back(ParseExprInner());
    if (Peek().kind != Tok::kRParen) {
      Fail(Peek(), "'" + name + "' takes " + std::to_string(Arity(*op)) +
                       " argument(s); expected ')'");
    }
    Next();
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void WriteExpr(const Expr& e, std::ostringstream& out) {
  switch (e.op) {
    case Op::kConst:
      out << FormatNumber(e.value);
      return;
    case Op::kVector:
      out << '[' << FormatNumber(e.vec[0]) << ' ' << FormatNumber(e.vec[1]) << ' '
          << FormatNumber(e.vec[2]) << ']';
      return;
    case Op::kParam:
      out << (e.transform == ParamTransform::kUnit       ? "unit"
              : e.transform == ParamTransform::kPositive ? "pos"
                                                         : "param")
          << e.param;
      return;
    case Op::kReward:
      out << "r";
      return;
    case Op::kCfReward:
      out << "cfr";
      return;
    case Op::kSlice:
      out << "(slice " << e.state;
      for (IndexVar v : e.indices) out << ' ' << IndexVarName(v);
      out << ')';
      return;
    case Op::kOnehot:
      out << "(onehot " << IndexVarName(e.indices.at(0)) << ')';
      return;
    default:
      break;
  }
  out << '(' << OpName(e.op);
  for (const Expr& a : e.args) {
    out << ' ';
    WriteExpr(a, out);
  }
  out << ')';
}

}  // namespace

std::string FormatNumber(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Program Parse(std::string_view text) { return Parser(text).ParseProgram(); }

Expr ParseExpr(std::string_view text) { return Parser(text).ParseSingleExpr(); }

Program ParseFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open program file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Parse(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path.string() + ": " + e.what());
  }
}

std::string SerializeExpr(const Expr& expr) {
  std::ostringstream out;
  WriteExpr(expr, out);
  return out.str();
}

std::string Serialize(const Program& p) {
  std::ostringstream out;
  out << "(program " << p.name << "\n  (params " << p.param_count << ")";
  for (const StateDecl& s : p.states) {
    out << "\n  (state " << s.name << " (shape";
    for (int i = 0; i < s.rank; ++i) out << " 3";
    out << ") (init " << FormatNumber(s.init) << ") (at";
    for (IndexVar v : s.at) out << ' ' << IndexVarName(v);
    out << ")\n    ";
    WriteExpr(s.update, out);
    out << ")";
  }
  out << "\n  (policy ";
  WriteExpr(p.policy, out);
  out << "))\n";
  return out.str();
}

}  // namespace irps::dsl

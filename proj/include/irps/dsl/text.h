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

// S-expression text format for programs.
//
//   program  := "(" "program" NAME "(" "params" INT ")" state* policy ")"
//   state    := "(" "state" NAME "(" "shape" "3"* ")" "(" "init" NUMBER ")"
//                   "(" "at" index* ")" expr ")"
//   policy   := "(" "policy" expr ")"
//   expr     := NUMBER | "[" NUMBER NUMBER NUMBER "]" | "r" | "cfr"
//             | "param"K | "unit"K | "pos"K
//             | "(" "slice" NAME index* ")" | "(" "onehot" index ")"
//             | "(" OP expr+ ")"
//   OP       := add | sub | mul | div | ema | decay | counter | softmax | sum
//   index    := a | a_opp | prev_a | prev_a_opp | _
//
// ';' starts a comment that runs to the end of the line. Serialize() emits
// the canonical form: one top-level clause per line, expressions on a single
// line, numbers in shortest round-trip notation.

#ifndef IRPS_DSL_TEXT_H_
#define IRPS_DSL_TEXT_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "irps/dsl/ast.h"
#include "irps/error.h"

namespace irps::dsl {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

Program Parse(std::string_view text);
Program ParseFile(const std::filesystem::path& path);
// Parses a single expression (no surrounding program).
Expr ParseExpr(std::string_view text);

std::string Serialize(const Program& program);
std::string SerializeExpr(const Expr& expr);
std::string FormatNumber(double v);

}  // namespace irps::dsl

#endif  // IRPS_DSL_TEXT_H_

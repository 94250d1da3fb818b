#pragma once

// The .qcp protocol description language.
//
//   protocol NAME {
//     n INT;
//     epr INT;                      # or: schmidt [REAL, ...];
//     alice reg a[2];
//     bob reg b[1];
//     alice {
//       if x[0] apply X on [a[0]];
//       apply mat 1 [0, 1, 1, 0] on [a[1]];
//       send [a];
//     }
//     outputs [a[0], b[0]];
//   }
//
// `epr E` and `schmidt` declare the shared registers ea (Alice) and eb (Bob)
// of E qubits each. A reference is either reg[i] or a whole register.
// Complex literals are written a+bi with decimal components; `#` starts a
// comment that runs to the end of the line.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcomm/model.hpp"

namespace qcomm::dsl {

/// 1-based source position. Positions never take part in AST equality, so
/// a reparsed printout compares equal to the original.
struct SourcePos {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, std::string message, std::string token);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::string& token() const { return token_; }

 private:
  int line_;
  int column_;
  std::string message_;
  std::string token_;
};

struct QubitRef {
  std::string reg;
  std::optional<int> index;  // empty: the whole register
  SourcePos pos;
  bool operator==(const QubitRef&) const = default;
};

struct GateSpec {
  std::string name;              // vocabulary name or "mat"
  int k = 0;                     // qubit count of a mat literal
  std::vector<Complex> entries;  // row-major, 4^k entries
  SourcePos pos;
  bool operator==(const GateSpec&) const = default;
};

struct ApplyStmt {
  std::optional<int> inputBit;
  GateSpec gate;
  std::vector<QubitRef> targets;
  SourcePos pos;
  bool operator==(const ApplyStmt&) const = default;
};

struct SendStmt {
  std::vector<QubitRef> qubits;
  SourcePos pos;
  bool operator==(const SendStmt&) const = default;
};

using Stmt = std::variant<ApplyStmt, SendStmt>;

struct RoundAst {
  model::Party actor = model::Party::Alice;
  std::vector<Stmt> stmts;
  SourcePos pos;
  bool operator==(const RoundAst&) const = default;
};

struct RegisterDecl {
  model::Party owner = model::Party::Alice;
  std::string name;
  int size = 0;
  SourcePos pos;
  bool operator==(const RegisterDecl&) const = default;
};

struct ProtocolAst {
  std::string name;
  int n = 0;
  bool epr = true;              // header form: epr E, or schmidt [...]
  int E = 0;
  std::vector<double> schmidt;  // only for the schmidt form
  std::vector<RegisterDecl> registers;
  std::vector<RoundAst> rounds;
  std::vector<QubitRef> outputs;
  SourcePos outputsPos;
  bool operator==(const ProtocolAst&) const = default;
};

/// Throws ParseError at the first lexical or syntactic problem, including
/// duplicate or undeclared registers and out-of-range indices.
ProtocolAst parse(std::string_view text);

/// Canonical text: two-space indentation, one statement per line, shortest
/// round-trip numbers, no comments.
std::string print(const ProtocolAst& ast);

/// Checks the model rules and builds the protocol. Throws ValidationError
/// whose message starts with "line:column: " when a position is known.
model::Protocol validate(const ProtocolAst& ast);

/// The AST of a programmatic protocol. Gates whose matrix differs from the
/// named vocabulary entry are written as mat literals.
ProtocolAst toAst(const model::Protocol& p);

/// validate(parse(text)).
model::Protocol load(std::string_view text);
model::Protocol loadFile(const std::string& path);

/// Shortest decimal text that reads back to exactly the same double.
std::string formatReal(double v);
std::string formatComplex(Complex z);

}  // namespace qcomm::dsl

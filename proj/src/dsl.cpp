#include "qcomm/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qcomm/gates.hpp"

namespace qcomm::dsl {

using model::Party;

ParseError::ParseError(int line, int column, std::string message, std::string token)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message +
            (token.empty() ? "" : " near '" + token + "'")),
      line_(line),
      column_(column),
      message_(std::move(message)),
      token_(std::move(token)) {}

namespace {

enum class Tok { Ident, Number, Imag, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  int endLine = 1;
  int endCol = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    std::size_t j = i;
    if (isIdentStart(c)) {
      while (j < src.size() && isIdentChar(src[j])) ++j;
      t.kind = Tok::Ident;
    } else if (isDigit(c) || (c == '.' && i + 1 < src.size() && isDigit(src[i + 1]))) {
      // Greedy: digits, dots and exponents, then check the whole run parses.
      while (j < src.size()) {
        const char d = src[j];
        if (isDigit(d) || d == '.') {
          ++j;
        } else if ((d == 'e' || d == 'E') && j + 1 < src.size() &&
                   (isDigit(src[j + 1]) || ((src[j + 1] == '+' || src[j + 1] == '-') && j + 2 < src.size() &&
                                            isDigit(src[j + 2])))) {
          j += 2;
        } else {
          break;
        }
      }
      std::string_view digits = src.substr(i, j - i);
      double value = 0.0;
      const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), value);
      if (res.ec != std::errc() || res.ptr != digits.data() + digits.size()) {
        throw ParseError(t.line, t.col, "malformed number", std::string(digits));
      }
      t.kind = Tok::Number;
      if (j < src.size() && src[j] == 'i' && (j + 1 >= src.size() || !isIdentChar(src[j + 1]))) {
        ++j;
        t.kind = Tok::Imag;
      }
      if (j < src.size() && isIdentChar(src[j])) {
        std::size_t k = j;
        while (k < src.size() && isIdentChar(src[k])) ++k;
        throw ParseError(t.line, t.col, "malformed number", std::string(src.substr(i, k - i)));
      }
    } else if (std::string_view("{}[];,+-").find(c) != std::string_view::npos) {
      j = i + 1;
      t.kind = Tok::Punct;
    } else {
      throw ParseError(t.line, t.col, "unexpected character", std::string(1, c));
    }
    t.text = std::string(src.substr(i, j - i));
    advance(j - i);
    endLine = line;
    endCol = col;
    out.push_back(std::move(t));
  }
  // End of input sits just past the last token.
  out.push_back(Token{Tok::End, "", endLine, endCol});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ProtocolAst parseProtocol() {
    ProtocolAst ast;
    keyword("protocol");
    ast.name = ident("protocol name").text;
    punct("{");
    keyword("n");
    ast.n = integer("message length");
    punct(";");
    const Token& form = peek();
    if (isKeyword(form, "epr")) {
      next();
      ast.epr = true;
      ast.E = integer("number of EPR pairs");
      if (ast.E > tol::kMaxQubits) fail(form, "too many shared qubits");
    } else if (isKeyword(form, "schmidt")) {
      next();
      ast.epr = false;
      punct("[");
      const Token& first = peek();
      ast.schmidt.push_back(signedReal());
      while (isPunct(peek(), ",")) {
        next();
        ast.schmidt.push_back(signedReal());
      }
      punct("]");
      const auto size = ast.schmidt.size();
      if ((size & (size - 1)) != 0 || size > (std::size_t{1} << tol::kMaxQubits)) {
        fail(first, "Schmidt list length " + std::to_string(size) + " is not a power of two");
      }
      ast.E = linalg::qubitCount(static_cast<Eigen::Index>(size));
    } else {
      fail(form, "expected 'epr' or 'schmidt'");
    }
    punct(";");
    if (ast.E > 0) {
      sizes_["ea"] = ast.E;
      sizes_["eb"] = ast.E;
    }
    while (isKeyword(peek(), "alice") || isKeyword(peek(), "bob")) {
      if (isKeyword(peek(1), "reg")) {
        ast.registers.push_back(declaration());
      } else {
        break;
      }
    }
    while (isKeyword(peek(), "alice") || isKeyword(peek(), "bob")) ast.rounds.push_back(round());
    if (!isKeyword(peek(), "outputs")) fail(peek(), "expected a round or 'outputs'");
    ast.outputsPos = pos(next());
    ast.outputs = qlist();
    punct(";");
    punct("}");
    if (peek().kind != Tok::End) fail(peek(), "unexpected text after the protocol");
    return ast;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::map<std::string, int> sizes_;

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(at_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[at_];
    if (at_ + 1 < toks_.size()) ++at_;
    return t;
  }
  static SourcePos pos(const Token& t) { return SourcePos{t.line, t.col}; }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw ParseError(t.line, t.col, message, t.kind == Tok::End ? "end of input" : t.text);
  }

  static bool isKeyword(const Token& t, std::string_view word) { return t.kind == Tok::Ident && t.text == word; }
  static bool isPunct(const Token& t, std::string_view p) { return t.kind == Tok::Punct && t.text == p; }

  void keyword(std::string_view word) {
    if (!isKeyword(peek(), word)) fail(peek(), "expected '" + std::string(word) + "'");
    next();
  }
  void punct(std::string_view p) {
    if (!isPunct(peek(), p)) fail(peek(), "expected '" + std::string(p) + "'");
    next();
  }
  const Token& ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail(peek(), "expected " + what);
    return next();
  }
  int integer(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos) {
      fail(t, "expected " + what + " (non-negative integer)");
    }
    int value = 0;
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (res.ec != std::errc()) fail(t, "integer out of range");
    next();
    return value;
  }
  double number(const Token& t) {
    double v = 0.0;
    const std::size_t len = t.text.size() - (t.kind == Tok::Imag ? 1 : 0);
    std::from_chars(t.text.data(), t.text.data() + len, v);
    return v;
  }
  double signedReal() {
    double sign = 1.0;
    if (isPunct(peek(), "+") || isPunct(peek(), "-")) sign = next().text == "-" ? -1.0 : 1.0;
    if (peek().kind != Tok::Number) fail(peek(), "expected a real number");
    return sign * number(next());
  }
  Complex complexLiteral() {
    double sign = 1.0;
    if (isPunct(peek(), "+") || isPunct(peek(), "-")) sign = next().text == "-" ? -1.0 : 1.0;
    const Token& first = peek();
    if (first.kind == Tok::Imag) return {0.0, sign * number(next())};
    if (first.kind != Tok::Number) fail(first, "expected a complex number");
    const double re = sign * number(next());
    if ((isPunct(peek(), "+") || isPunct(peek(), "-")) && peek(1).kind == Tok::Imag) {
      const double s = next().text == "-" ? -1.0 : 1.0;
      return {re, s * number(next())};
    }
    return {re, 0.0};
  }

  RegisterDecl declaration() {
    RegisterDecl d;
    d.owner = next().text == "alice" ? Party::Alice : Party::Bob;
    keyword("reg");
    const Token& name = ident("register name");
    d.name = name.text;
    d.pos = pos(name);
    if (sizes_.count(d.name)) fail(name, "duplicate register '" + d.name + "'");
    punct("[");
    const Token& sizeTok = peek();
    d.size = integer("register size");
    if (d.size < 1 || d.size > tol::kMaxQubits) fail(sizeTok, "register size must be 1.." + std::to_string(tol::kMaxQubits));
    punct("]");
    punct(";");
    sizes_[d.name] = d.size;
    return d;
  }

  QubitRef ref() {
    const Token& name = ident("register name");
    QubitRef r;
    r.reg = name.text;
    r.pos = pos(name);
    const auto it = sizes_.find(r.reg);
    if (it == sizes_.end()) fail(name, "undeclared register '" + r.reg + "'");
    if (isPunct(peek(), "[")) {
      next();
      const Token& idx = peek();
      r.index = integer("qubit index");
      if (*r.index >= it->second) {
        fail(idx, "index " + std::to_string(*r.index) + " out of range for '" + r.reg + "'");
      }
      punct("]");
    }
    return r;
  }

  std::vector<QubitRef> qlist() {
    punct("[");
    std::vector<QubitRef> refs;
    if (!isPunct(peek(), "]")) {
      refs.push_back(ref());
      while (isPunct(peek(), ",")) {
        next();
        refs.push_back(ref());
      }
    }
    punct("]");
    return refs;
  }

  GateSpec gateSpec() {
    const Token& name = ident("gate name");
    GateSpec g;
    g.name = name.text;
    g.pos = pos(name);
    if (g.name == "mat") {
      const Token& kTok = peek();
      g.k = integer("matrix qubit count");
      if (g.k < 1 || g.k > tol::kRandomUnitaryCap) fail(kTok, "mat qubit count must be 1.." + std::to_string(tol::kRandomUnitaryCap));
      const Token& open = peek();
      punct("[");
      if (!isPunct(peek(), "]")) {
        g.entries.push_back(complexLiteral());
        while (isPunct(peek(), ",")) {
          next();
          g.entries.push_back(complexLiteral());
        }
      }
      punct("]");
      const std::size_t expected = std::size_t{1} << (2 * g.k);
      if (g.entries.size() != expected) {
        fail(open, "mat " + std::to_string(g.k) + " needs " + std::to_string(expected) + " entries, got " +
                       std::to_string(g.entries.size()));
      }
    } else if (!gates::byName(g.name)) {
      fail(name, "unknown gate '" + g.name + "'");
    }
    return g;
  }

  Stmt statement() {
    const Token& start = peek();
    if (isKeyword(start, "send")) {
      next();
      SendStmt s{qlist(), pos(start)};
      punct(";");
      return s;
    }
    ApplyStmt a;
    a.pos = pos(start);
    if (isKeyword(start, "if")) {
      next();
      keyword("x");
      punct("[");
      a.inputBit = integer("input bit index");
      punct("]");
    }
    keyword("apply");
    a.gate = gateSpec();
    keyword("on");
    a.targets = qlist();
    punct(";");
    return a;
  }

  RoundAst round() {
    const Token& actor = next();
    RoundAst r;
    r.actor = actor.text == "alice" ? Party::Alice : Party::Bob;
    r.pos = pos(actor);
    punct("{");
    while (!isPunct(peek(), "}")) {
      const Token& t = peek();
      if (!isKeyword(t, "if") && !isKeyword(t, "apply") && !isKeyword(t, "send")) {
        fail(t, "expected 'apply', 'if', 'send' or '}'");
      }
      r.stmts.push_back(statement());
    }
    punct("}");
    return r;
  }
};

std::string refText(const QubitRef& r) {
  return r.index ? r.reg + "[" + std::to_string(*r.index) + "]" : r.reg;
}

std::string qlistText(const std::vector<QubitRef>& refs) {
  std::string s = "[";
  for (std::size_t i = 0; i < refs.size(); ++i) s += (i ? ", " : "") + refText(refs[i]);
  return s + "]";
}

std::string at(const SourcePos& p) {
  if (p.line <= 0) return "";
  return std::to_string(p.line) + ":" + std::to_string(p.column) + ": ";
}

[[noreturn]] void invalid(const SourcePos& p, const std::string& message) { throw ValidationError(at(p) + message); }

}  // namespace

std::string formatReal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string formatComplex(Complex z) {
  if (z.imag() == 0.0) return formatReal(z.real());
  if (z.real() == 0.0) return formatReal(z.imag()) + "i";
  const std::string im = formatReal(std::abs(z.imag()));
  return formatReal(z.real()) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

ProtocolAst parse(std::string_view text) { return Parser(lex(text)).parseProtocol(); }

std::string print(const ProtocolAst& ast) {
  std::ostringstream out;
  out << "protocol " << ast.name << " {\n";
  out << "  n " << ast.n << ";\n";
  if (ast.epr) {
    out << "  epr " << ast.E << ";\n";
  } else {
    out << "  schmidt [";
    for (std::size_t i = 0; i < ast.schmidt.size(); ++i) out << (i ? ", " : "") << formatReal(ast.schmidt[i]);
    out << "];\n";
  }
  for (const auto& d : ast.registers) {
    out << "  " << model::name(d.owner) << " reg " << d.name << "[" << d.size << "];\n";
  }
  for (const auto& r : ast.rounds) {
    out << "  " << model::name(r.actor) << " {\n";
    for (const auto& stmt : r.stmts) {
      out << "    ";
      if (const auto* s = std::get_if<SendStmt>(&stmt)) {
        out << "send " << qlistText(s->qubits) << ";\n";
        continue;
      }
      const auto& a = std::get<ApplyStmt>(stmt);
      if (a.inputBit) out << "if x[" << *a.inputBit << "] ";
      out << "apply " << a.gate.name;
      if (a.gate.name == "mat") {
        out << " " << a.gate.k << " [";
        for (std::size_t i = 0; i < a.gate.entries.size(); ++i) out << (i ? ", " : "") << formatComplex(a.gate.entries[i]);
        out << "]";
      }
      out << " on " << qlistText(a.targets) << ";\n";
    }
    out << "  }\n";
  }
  out << "  outputs " << qlistText(ast.outputs) << ";\n";
  out << "}\n";
  return out.str();
}

model::Protocol validate(const ProtocolAst& ast) {
  std::vector<double> lambda = ast.schmidt;
  if (ast.epr) lambda.assign(static_cast<std::size_t>(linalg::dimOf(ast.E)), 1.0 / static_cast<double>(linalg::dimOf(ast.E)));
  model::Protocol p = model::makeProtocol(ast.name, ast.n, lambda);
  for (const auto& d : ast.registers) {
    try {
      p.addRegister(d.name, d.owner, d.size);
    } catch (const Error& e) {
      invalid(d.pos, e.what());
    }
  }
  if (p.qubitCount() > 64) invalid(SourcePos{}, "too many qubits");

  auto expand = [&](const std::vector<QubitRef>& refs) {
    std::vector<int> qubits;
    std::set<int> seen;
    for (const auto& r : refs) {
      const auto* reg = p.findRegister(r.reg);
      if (reg == nullptr) invalid(r.pos, "undeclared register '" + r.reg + "'");
      const int lo = r.index ? *r.index : 0;
      const int hi = r.index ? *r.index + 1 : reg->size;
      if (hi > reg->size) invalid(r.pos, "index out of range for '" + r.reg + "'");
      for (int i = lo; i < hi; ++i) {
        if (!seen.insert(reg->first + i).second) invalid(r.pos, "qubit " + p.qubitName(reg->first + i) + " listed twice");
        qubits.push_back(reg->first + i);
      }
    }
    return qubits;
  };

  model::Ledger ledger = model::initialLedger(p);
  for (const auto& ra : ast.rounds) {
    model::Round round{ra.actor, {}, {}};
    bool sent = false;
    for (const auto& stmt : ra.stmts) {
      if (const auto* s = std::get_if<SendStmt>(&stmt)) {
        for (int q : expand(s->qubits)) round.send.push_back(q);
        sent = true;
        continue;
      }
      const auto& a = std::get<ApplyStmt>(stmt);
      if (sent) invalid(a.pos, "apply after send in the same round");
      model::GateOp op;
      op.name = a.gate.name;
      op.inputBit = a.inputBit;
      op.targets = expand(a.targets);
      if (a.gate.name == "mat") {
        const Eigen::Index d = linalg::dimOf(a.gate.k);
        op.matrix.resize(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
          for (Eigen::Index c = 0; c < d; ++c) op.matrix(r, c) = a.gate.entries[static_cast<std::size_t>(r * d + c)];
        }
        const double defect = linalg::unitarityDefect(op.matrix);
        if (defect > tol::kUnitary) invalid(a.gate.pos, "matrix literal is not unitary (defect " + formatReal(defect) + ")");
      } else {
        const auto m = gates::byName(a.gate.name);
        if (!m) invalid(a.gate.pos, "unknown gate '" + a.gate.name + "'");
        op.matrix = *m;
      }
      const int arity = linalg::qubitCount(op.matrix.rows());
      if (static_cast<int>(op.targets.size()) != arity) {
        invalid(a.pos, a.gate.name + " acts on " + std::to_string(arity) + " qubits, got " +
                           std::to_string(op.targets.size()));
      }
      if (a.inputBit && *a.inputBit >= ast.n) {
        invalid(a.pos, "input bit x[" + std::to_string(*a.inputBit) + "] out of range for n = " + std::to_string(ast.n));
      }
      round.ops.push_back(std::move(op));
    }
    try {
      ledger = model::advanceLedger(ledger, round, ast.n);
    } catch (const ValidationError& e) {
      invalid(ra.pos, e.what());
    }
    p.rounds.push_back(std::move(round));
  }

  p.outputs = expand(ast.outputs);
  if (static_cast<int>(p.outputs.size()) != ast.n) {
    invalid(ast.outputsPos, "expected " + std::to_string(ast.n) + " outputs, got " + std::to_string(p.outputs.size()));
  }
  for (int q : p.outputs) {
    if (ledger.owner[static_cast<std::size_t>(q)] != Party::Bob) {
      invalid(ast.outputsPos, "output " + p.qubitName(q) + " is not held by Bob at the end");
    }
  }
  return p;
}

ProtocolAst toAst(const model::Protocol& p) {
  ProtocolAst ast;
  ast.name = p.name;
  ast.n = p.n;
  ast.E = p.E;
  const double uniform = 1.0 / static_cast<double>(p.schmidt.size());
  ast.epr = std::all_of(p.schmidt.begin(), p.schmidt.end(), [&](double l) { return l == uniform; });
  if (!ast.epr) ast.schmidt = p.schmidt;
  for (const auto& r : p.registers) {
    if (p.E > 0 && (r.name == "ea" || r.name == "eb")) continue;
    ast.registers.push_back(RegisterDecl{r.owner, r.name, r.size, {}});
  }
  auto refOf = [&](int q) {
    for (const auto& r : p.registers) {
      if (q >= r.first && q < r.first + r.size) return QubitRef{r.name, q - r.first, {}};
    }
    throw DimensionError("qubit " + std::to_string(q) + " belongs to no register");
  };
  auto refsOf = [&](const std::vector<int>& qs) {
    std::vector<QubitRef> refs;
    for (int q : qs) refs.push_back(refOf(q));
    return refs;
  };
  for (const auto& round : p.rounds) {
    RoundAst ra;
    ra.actor = round.actor;
    for (const auto& op : round.ops) {
      ApplyStmt a;
      a.inputBit = op.inputBit;
      a.targets = refsOf(op.targets);
      const auto named = gates::byName(op.name);
      if (named && named->rows() == op.matrix.rows() && *named == op.matrix) {
        a.gate.name = op.name;
      } else {
        a.gate.name = "mat";
        a.gate.k = linalg::qubitCount(op.matrix.rows());
        for (Eigen::Index r = 0; r < op.matrix.rows(); ++r) {
          for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) a.gate.entries.push_back(op.matrix(r, c));
        }
      }
      ra.stmts.emplace_back(std::move(a));
    }
    if (!round.send.empty()) ra.stmts.emplace_back(SendStmt{refsOf(round.send), {}});
    ast.rounds.push_back(std::move(ra));
  }
  ast.outputs = refsOf(p.outputs);
  return ast;
}

model::Protocol load(std::string_view text) { return validate(parse(text)); }

model::Protocol loadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load(buf.str());
}

}  // namespace qcomm::dsl

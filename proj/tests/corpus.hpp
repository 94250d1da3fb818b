#pragma once

// Sources of the golden .qcp corpus and of the single-token mutations used
// for error-position tests. The files under tests/data are produced by
// qcomm_make_corpus from these definitions; the DSL tests regenerate them in
// memory and compare.

#include <string>
#include <utility>
#include <vector>

#include "qcomm/dsl.hpp"
#include "qcomm/ip.hpp"
#include "qcomm/protocols.hpp"

namespace qcomm::testing {

struct CorpusEntry {
  std::string file;
  std::string text;  // canonical printout
};

inline std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  auto add = [&](const std::string& file, const model::Protocol& p) { out.push_back({file, dsl::print(dsl::toAst(p))}); };
  out.push_back({"minimal.qcp", dsl::print(dsl::parse("protocol minimal { n 0; epr 0; outputs []; }"))});
  for (int m = 1; m <= 3; ++m) add("superdense_m" + std::to_string(m) + ".qcp", protocols::superdense(m));
  add("superdense_m1_guess1.qcp", protocols::superdensePlusGuess(1, 1));
  add("ip_trivial_n2_transmission.qcp", ip::reduceIpToTransmission(ip::trivialIpProtocol(2)).transmission);
  add("ip_noisy_n2_transmission.qcp", ip::reduceIpToTransmission(ip::noisyIpProtocol(2, 0.1)).transmission);
  for (std::uint64_t seed : {1, 2, 3}) add("random_" + std::to_string(seed) + ".qcp", protocols::randomProtocol(seed));
  protocols::RandomOptions skew;
  skew.nonUniformSchmidt = true;
  skew.maxE = 1;
  add("random_schmidt_4.qcp", protocols::randomProtocol(4, skew));
  return out;
}

struct Mutation {
  std::string file;      // name of the mutated file
  std::string base;      // corpus file it starts from
  std::string find;      // text to replace (first occurrence after `after`)
  std::string replace;
  std::string after;     // anchor searched first; empty means the start
  int offset = 0;        // expected error column offset from the replacement start
};

inline std::vector<Mutation> mutations() {
  return {
      {"dollar.qcp", "superdense_m1.qcp", "send", "$send", "", 0},
      {"misspelled_apply.qcp", "superdense_m1.qcp", "apply CNOT", "aply CNOT", "", 0},
      {"unknown_gate.qcp", "superdense_m2.qcp", "CNOT", "CNOTT", "", 0},
      {"comma_for_semicolon.qcp", "superdense_m1.qcp", "n 2;", "n 2,", "", 3},
      {"paren_round.qcp", "superdense_m1.qcp", "alice {", "alice (", "", 6},
      {"undeclared_register.qcp", "superdense_m1.qcp", "eb[0]]", "ec[0]]", "outputs", 0},
      {"index_out_of_range.qcp", "superdense_m2.qcp", "ea[1]", "ea[7]", "bob {", 3},
      {"malformed_number.qcp", "random_1.qcp", "[", "[1.2.3, ", "apply mat", 1},
      {"duplicate_register.qcp", "ip_trivial_n2_transmission.qcp", "reg y[", "reg a[", "", 4},
      {"input_bit_y.qcp", "superdense_m1.qcp", "if x[0]", "if y[0]", "", 3},
      {"missing_close_brace.qcp", "superdense_m1_guess1.qcp", "}\n", "", "outputs", -1},
  };
}

/// 1-based line and column of byte offset `at` in text.
inline std::pair<int, int> positionOf(const std::string& text, std::size_t at) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i < at; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

struct MutatedFile {
  std::string file;
  std::string text;
  int line = 0;
  int column = 0;
};

inline MutatedFile applyMutation(const Mutation& m, const std::string& base) {
  const std::size_t anchor = m.after.empty() ? 0 : base.find(m.after);
  const std::size_t at = base.find(m.find, anchor);
  if (anchor == std::string::npos || at == std::string::npos) return {m.file, "", 0, 0};
  MutatedFile out{m.file, base.substr(0, at) + m.replace + base.substr(at + m.find.size()), 0, 0};
  std::size_t errorAt = at + static_cast<std::size_t>(std::max(0, m.offset));
  if (m.offset < 0) {
    // Removed text at the end: the error sits just past the last character.
    errorAt = out.text.find_last_not_of(" \n") + 1;
  }
  std::tie(out.line, out.column) = positionOf(out.text, errorAt);
  return out;
}

}  // namespace qcomm::testing

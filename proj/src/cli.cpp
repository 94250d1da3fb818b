#include "qcomm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qcomm/certificate.hpp"
#include "qcomm/coding.hpp"
#include "qcomm/dsl.hpp"
#include "qcomm/ip.hpp"
#include "qcomm/protocols.hpp"

namespace qcomm::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  std::uint64_t seed = 0;
  int capQubits = tol::kMaxQubits;
  bool json = false;
  bool csv = false;
  std::string outPath;

  std::string file;
  std::string input;
  std::string demo;
  int n = 2;
  int t = 1;
  double eps = 0.0;
  int m = 1;
  int rounds = 3;
};

struct Report {
  std::string command;
  std::string protocolName;
  int n = 0;
  int E = 0;
  std::optional<int> mA;
  std::optional<int> mB;
  double successExact = 0.0;
  std::optional<double> boundRhs;
  std::optional<double> margin;
  std::optional<double> traceIdentityResidual;
  std::optional<double> reconstructionResidual;
  std::string timestamp;
  std::uint64_t seed = 0;
};

template <typename T>
Json orNull(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json toJson(const Report& r) {
  Json j;
  j["command"] = r.command;
  j["protocolName"] = r.protocolName;
  j["n"] = r.n;
  j["E"] = r.E;
  j["m_A"] = orNull(r.mA);
  j["m_B"] = orNull(r.mB);
  j["successExact"] = r.successExact;
  j["boundRhs"] = orNull(r.boundRhs);
  j["margin"] = orNull(r.margin);
  j["traceIdentityResidual"] = orNull(r.traceIdentityResidual);
  j["reconstructionResidual"] = orNull(r.reconstructionResidual);
  j["timestamp"] = r.timestamp;
  j["seed"] = r.seed;
  j["toolVersion"] = kToolVersion;
  return j;
}

std::string csvValue(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return dsl::formatReal(v.get<double>());
  return v.dump();
}

void writeCsv(std::ostream& out, const std::vector<Json>& rows) {
  if (rows.empty()) return;
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << "\n";
  for (const auto& row : rows) {
    first = true;
    for (const auto& [key, value] : row.items()) {
      out << (first ? "" : ",") << csvValue(value);
      first = false;
    }
    out << "\n";
  }
}

std::string systemClock() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string bitsOf(model::Message x, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += model::messageBit(x, i, n) ? '1' : '0';
  return s;
}

model::Message parseBits(const std::string& bits, int n) {
  if (static_cast<int>(bits.size()) != n) {
    throw ValidationError("--input has " + std::to_string(bits.size()) + " bits, protocol expects n = " + std::to_string(n));
  }
  model::Message x = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("--input must contain only 0 and 1");
    x = (x << 1) | (c == '1' ? 1U : 0U);
  }
  return x;
}

struct CertSummary {
  double traceResidual = 0.0;
  double reconstructionResidual = 0.0;
  std::vector<Json> perMessage;
};

CertSummary certifyMessages(const model::Protocol& p, const std::vector<model::Message>& messages, int cap) {
  CertSummary s;
  cert::CertifyOptions opt;
  opt.capQubits = cap;
  for (model::Message x : messages) {
    const auto r = cert::certifyProtocol(p, x, opt);
    s.traceResidual = std::max(s.traceResidual, r.traceResidual);
    s.reconstructionResidual = std::max(s.reconstructionResidual, r.residual);
    Json row;
    row["x"] = bitsOf(x, p.n);
    row["traceIdentity"] = r.certificate.traceIdentity();
    row["traceIdentityResidual"] = r.traceResidual;
    row["reconstructionResidual"] = r.residual;
    s.perMessage.push_back(std::move(row));
  }
  return s;
}

std::vector<model::Message> allMessages(int n) {
  if (n > 16) throw CapExceeded("n = " + std::to_string(n) + " too large to enumerate");
  std::vector<model::Message> xs(std::size_t{1} << n);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = i;
  return xs;
}

Report protocolReport(const std::string& command, const model::Protocol& p, const Options& o) {
  const auto ledger = model::finalLedger(p);
  Report r;
  r.command = command;
  r.protocolName = p.name;
  r.n = p.n;
  r.E = p.E;
  r.mA = ledger.mA;
  r.mB = ledger.mB;
  r.seed = o.seed;
  r.boundRhs = coding::boundRhs(p.n, ledger.mA);
  return r;
}

class Runner {
 public:
  Runner(const Options& o, std::ostream& out, std::ostream& err, std::string timestamp)
      : o_(o), out_(out), err_(err), timestamp_(std::move(timestamp)) {}

  int run() {
    const auto p = dsl::loadFile(o_.file);
    const auto x = parseBits(o_.input, p.n);
    auto report = protocolReport("run", p, o_);
    const auto state = model::runProtocol(p, x, o_.capQubits);
    const auto dist = model::outputDistribution(state, p.outputs);
    report.successExact = model::successProbability(p, o_.capQubits);
    report.margin = *report.boundRhs - report.successExact;
    const auto c = certifyMessages(p, {x}, o_.capQubits);
    report.traceIdentityResidual = c.traceResidual;
    report.reconstructionResidual = c.reconstructionResidual;
    report.timestamp = timestamp_;

    const int k = static_cast<int>(p.outputs.size());
    if (o_.csv) {
      std::vector<Json> rows;
      for (model::Message y = 0; y < dist.size(); ++y) {
        Json row;
        row["outcome"] = bitsOf(y, k);
        row["probability"] = dist[y];
        rows.push_back(std::move(row));
      }
      writeCsv(out_, rows);
    } else {
      Json j = toJson(report);
      j["input"] = o_.input;
      Json d = Json::object();
      for (model::Message y = 0; y < dist.size(); ++y) d[bitsOf(y, k)] = dist[y];
      j["distribution"] = d;
      j["successForInput"] = k == p.n ? dist[x] : 0.0;
      out_ << j.dump(2) << "\n";
    }
    return kOk;
  }

  int certify() {
    const auto p = dsl::loadFile(o_.file);
    auto report = protocolReport("certify", p, o_);
    const auto c = certifyMessages(p, allMessages(p.n), o_.capQubits);
    report.successExact = model::successProbability(p, o_.capQubits);
    report.margin = *report.boundRhs - report.successExact;
    report.traceIdentityResidual = c.traceResidual;
    report.reconstructionResidual = c.reconstructionResidual;
    report.timestamp = timestamp_;
    if (o_.csv) {
      writeCsv(out_, c.perMessage);
    } else {
      Json j = toJson(report);
      j["perMessage"] = c.perMessage;
      out_ << j.dump(2) << "\n";
    }
    if (c.traceResidual > tol::kCertificate || c.reconstructionResidual > tol::kCertificate) {
      err_ << "certificate residual exceeds " << tol::kCertificate << "\n";
      return kInvariantViolation;
    }
    return kOk;
  }

  int bound() {
    const auto p = dsl::loadFile(o_.file);
    if (p.n < 1) throw ValidationError("bound needs n >= 1");
    auto report = protocolReport("bound", p, o_);
    report.successExact = model::successProbability(p, o_.capQubits);
    report.margin = *report.boundRhs - report.successExact;
    const auto c = certifyMessages(p, allMessages(p.n), o_.capQubits);
    report.traceIdentityResidual = c.traceResidual;
    report.reconstructionResidual = c.reconstructionResidual;
    report.timestamp = timestamp_;
    emit(report);
    if (*report.margin < -tol::kBound) {
      err_ << "bound violated: margin " << *report.margin << "\n";
      return kInvariantViolation;
    }
    return kOk;
  }

  int demo() {
    Json row;
    Report report;
    report.command = "demo " + o_.demo;
    report.seed = o_.seed;
    report.timestamp = timestamp_;
    auto fill = [&](const model::Protocol& p, double success) {
      const auto rep = protocolReport(report.command, p, o_);
      report.protocolName = rep.protocolName;
      report.n = rep.n;
      report.E = rep.E;
      report.mA = rep.mA;
      report.mB = rep.mB;
      report.boundRhs = rep.boundRhs;
      report.successExact = success;
      report.margin = *report.boundRhs - success;
      const auto c = certifyMessages(p, allMessages(p.n), o_.capQubits);
      report.traceIdentityResidual = c.traceResidual;
      report.reconstructionResidual = c.reconstructionResidual;
    };
    row["demo"] = o_.demo;
    if (o_.demo == "superdense") {
      if (o_.m < 1) throw ValidationError("--m must be at least 1");
      const auto p = protocols::superdense(o_.m);
      fill(p, model::successProbability(p, o_.capQubits));
      row["n"] = p.n;
      row["t"] = nullptr;
      row["eps"] = nullptr;
      row["bits"] = p.n;
      row["qubits"] = o_.m;
      row["success"] = report.successExact;
      row["boundRhs"] = *report.boundRhs;
      row["margin"] = *report.margin;
      row["lowerBound"] = 0.5 * (p.n + std::log2(report.successExact));
    } else if (o_.demo == "ip-classical" || o_.demo == "ip-quantum") {
      const bool quantum = o_.demo == "ip-quantum";
      const auto r = quantum ? ip::quantumIpProtocol(o_.n, o_.t, o_.capQubits) : ip::classicalIpProtocol(o_.n, o_.t);
      report.protocolName = std::string(quantum ? "ip_quantum" : "ip_classical") + "_n" + std::to_string(o_.n) + "_t" +
                            std::to_string(o_.t);
      report.n = o_.n;
      report.E = quantum ? r.quantumQubits : 0;
      if (quantum) {
        report.mA = r.quantumQubits;
        report.mB = 0;
      }
      report.successExact = quantum ? r.quantumSuccess : r.successExact;
      row["n"] = o_.n;
      row["t"] = o_.t;
      row["eps"] = r.epsilonTarget;
      row["bits"] = r.classicalBits;
      row["qubits"] = quantum ? Json(r.quantumQubits) : Json(nullptr);
      row["success"] = report.successExact;
      row["boundRhs"] = nullptr;
      row["margin"] = nullptr;
      row["lowerBound"] = r.lowerBoundQubits;
    } else if (o_.demo == "ip-reduction") {
      if (o_.n < 1 || o_.n > 3) throw ValidationError("--n must be 1..3 for ip-reduction");
      if (!(o_.eps >= 0.0) || o_.eps >= 0.5) throw ValidationError("--eps must lie in [0, 1/2)");
      const auto source = o_.eps == 0.0 ? ip::trivialIpProtocol(o_.n) : ip::noisyIpProtocol(o_.n, o_.eps);
      const auto r = ip::reduceIpToTransmission(source, {}, o_.capQubits);
      fill(r.transmission, r.recoveryProbability);
      row["n"] = o_.n;
      row["t"] = nullptr;
      row["eps"] = o_.eps;
      row["bits"] = o_.n;
      row["qubits"] = *report.mA;
      row["success"] = r.recoveryProbability;
      row["boundRhs"] = *report.boundRhs;
      row["margin"] = *report.margin;
      row["lowerBound"] = 0.5 * (o_.n + 2.0 * std::log2(1.0 - 2.0 * o_.eps));
    } else {
      throw ValidationError("unknown demo '" + o_.demo + "'");
    }
    if (o_.json) {
      Json j = toJson(report);
      j["demo"] = row;
      out_ << j.dump(2) << "\n";
    } else {
      writeCsv(out_, {row});
    }
    if (report.margin && *report.margin < -tol::kBound) return kInvariantViolation;
    if (report.reconstructionResidual && (*report.reconstructionResidual > tol::kCertificate ||
                                          *report.traceIdentityResidual > tol::kCertificate)) {
      return kInvariantViolation;
    }
    return kOk;
  }

  int random() {
    protocols::RandomOptions opt;
    opt.n = o_.n;
    opt.rounds = o_.rounds;
    opt.maxQubits = std::min(opt.maxQubits, o_.capQubits);
    if (opt.n < 1 || opt.n > 4) throw ValidationError("--n must be 1..4 for random");
    if (opt.rounds < 1 || opt.rounds > 6) throw ValidationError("--rounds must be 1..6");
    out_ << dsl::print(dsl::toAst(protocols::randomProtocol(o_.seed, opt)));
    return kOk;
  }

 private:
  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  std::string timestamp_;

  void emit(const Report& r) {
    if (o_.csv) {
      writeCsv(out_, {toJson(r)});
    } else {
      out_ << toJson(r).dump(2) << "\n";
    }
  }
};

}  // namespace

Environment processEnvironment() {
  Environment env;
  if (const char* cap = std::getenv("QCP_CAP_QUBITS")) env.capQubits = cap;
  return env;
}

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  Options o;
  if (env.capQubits) {
    try {
      std::size_t used = 0;
      o.capQubits = std::stoi(*env.capQubits, &used);
      if (used != env.capQubits->size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      err << "QCP_CAP_QUBITS must be an integer\n";
      return kInputError;
    }
  }

  CLI::App app{"Exact simulator and verifier for entanglement-assisted two-party quantum communication", "qcp"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "Seed for generated protocols (default 0)");
  app.add_option("--cap-qubits", o.capQubits, "Largest joint state in qubits (default 12, env QCP_CAP_QUBITS)");
  auto* jsonFlag = app.add_flag("--json", o.json, "JSON output");
  app.add_flag("--csv", o.csv, "CSV output")->excludes(jsonFlag);
  app.add_option("--out", o.outPath, "Write output to a file instead of stdout");

  auto* run = app.add_subcommand("run", "Run a protocol on one input and print Bob's output distribution");
  run->add_option("file", o.file, ".qcp file")->required();
  run->add_option("--input", o.input, "Alice's input bits, x[0] first")->required();
  auto* certify = app.add_subcommand("certify", "Build the (Lambda, phi) certificate for every input");
  certify->add_option("file", o.file, ".qcp file")->required();
  auto* bound = app.add_subcommand("bound", "Compare the exact success probability with 2^(2 m_A) / 2^n");
  bound->add_option("file", o.file, ".qcp file")->required();
  auto* demo = app.add_subcommand("demo", "Run a built-in construction");
  demo->add_option("name", o.demo, "superdense | ip-classical | ip-quantum | ip-reduction")
      ->required()
      ->check(CLI::IsMember({"superdense", "ip-classical", "ip-quantum", "ip-reduction"}));
  demo->add_option("--n", o.n, "Message length");
  demo->add_option("--t", o.t, "Suffix length of the public-coin IP protocol");
  demo->add_option("--eps", o.eps, "Error of the IP protocol fed to the reduction");
  demo->add_option("--m", o.m, "Number of EPR pairs for superdense coding");
  auto* random = app.add_subcommand("random", "Print a random protocol as .qcp text (uses --seed)");
  random->add_option("--n", o.n, "Message length");
  random->add_option("--rounds", o.rounds, "Rounds before Bob's decoding round");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  if (o.capQubits < 1 || o.capQubits > tol::kMaxQubits) {
    err << "--cap-qubits must be 1.." << tol::kMaxQubits << "\n";
    return kInputError;
  }
  if (!o.json && !o.csv) {
    o.csv = demo->parsed();
    o.json = !o.csv;
  }

  std::ostringstream buffer;
  const std::string timestamp = env.clock ? env.clock() : systemClock();
  Runner runner(o, buffer, err, timestamp);
  int code = kOk;
  try {
    if (run->parsed()) code = runner.run();
    if (certify->parsed()) code = runner.certify();
    if (bound->parsed()) code = runner.bound();
    if (demo->parsed()) code = runner.demo();
    if (random->parsed()) code = runner.random();
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kCapExceeded;
  } catch (const InvariantViolation& e) {
    err << "error: " << e.what() << "\n";
    return kInvariantViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (o.outPath.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.outPath, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << o.outPath << "'\n";
      return kInputError;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace qcomm::cli

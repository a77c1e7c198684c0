#pragma once

// Run configuration and machine-readable reports (JSON and CSV).

#include "torusrep/probe.hpp"
#include "torusrep/weyl.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace torusrep {

struct RunConfig {
  int n = 2;
  std::string module = "natural";
  TwistParam lambda = TwistParam::zero(2);
  std::optional<int> k;
  Window window = Window::defaults(2);
  std::uint64_t seed = 1;
  std::vector<std::string> suites;
  /// Not part of the echoed configuration: results do not depend on it.
  int workers = 1;
  bool timings = false;

  void validate() const {
    if (n < 2 || n > kMaxRank) throw std::invalid_argument("config: n out of range");
    if (lambda.rank() != n) throw std::invalid_argument("config: lambda must have n entries");
    FinModule::parse(module, n);
    window.validate();
    if (k && (*k < 0 || *k > n)) throw std::invalid_argument("config: k out of range");
    if (workers < 1) throw std::invalid_argument("config: workers must be positive");
  }
};

enum class SuiteStatus { Pass, Fail, EvidencePass };

inline std::string to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::Pass: return "pass";
    case SuiteStatus::Fail: return "fail";
    case SuiteStatus::EvidencePass: return "evidence-pass";
  }
  return "?";
}

inline SuiteStatus parse_status(const std::string& s) {
  if (s == "pass") return SuiteStatus::Pass;
  if (s == "fail") return SuiteStatus::Fail;
  if (s == "evidence-pass") return SuiteStatus::EvidencePass;
  throw std::invalid_argument("unknown status '" + s + "'");
}

struct SuiteResult {
  std::string name;
  SuiteStatus status = SuiteStatus::Pass;
  std::map<std::string, CounterValue> counters;
  std::optional<long long> timeMs;
  std::string logDigest;
  std::vector<std::string> failures;

  friend bool operator==(const SuiteResult&, const SuiteResult&) = default;
};

struct Report {
  RunConfig config;
  std::vector<SuiteResult> suites;

  bool any_failed() const {
    for (const auto& s : suites)
      if (s.status == SuiteStatus::Fail) return true;
    return false;
  }
};

inline bool same_config_echo(const RunConfig& a, const RunConfig& b) {
  return a.n == b.n && a.module == b.module && a.lambda == b.lambda && a.k == b.k && a.window == b.window &&
         a.seed == b.seed && a.suites == b.suites;
}

inline bool operator==(const Report& a, const Report& b) {
  return same_config_echo(a.config, b.config) && a.suites == b.suites;
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json lam = nlohmann::json::array();
  for (const auto& x : c.lambda.lambda) lam.push_back(x.to_string());
  return nlohmann::json{{"n", c.n},
                        {"module", c.module},
                        {"lambda", lam},
                        {"k", c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr)},
                        {"window", {{"B", c.window.B}, {"R", c.window.R}, {"L", c.window.L}, {"margin", c.window.margin}}},
                        {"seed", c.seed},
                        {"suites", c.suites}};
}

inline nlohmann::json to_json(const SuiteResult& s) {
  nlohmann::json counters = nlohmann::json::object();
  for (const auto& [k, v] : s.counters) {
    if (auto p = std::get_if<long long>(&v)) counters[k] = *p;
    else counters[k] = std::get<std::string>(v);
  }
  return nlohmann::json{{"name", s.name},
                        {"status", to_string(s.status)},
                        {"counters", counters},
                        {"timeMs", s.timeMs ? nlohmann::json(*s.timeMs) : nlohmann::json(nullptr)},
                        {"logDigest", s.logDigest},
                        {"failures", s.failures}};
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json suites = nlohmann::json::array();
  for (const auto& s : r.suites) suites.push_back(to_json(s));
  return nlohmann::json{{"config", to_json(r.config)}, {"suites", suites}};
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  const auto& c = j.at("config");
  r.config.n = c.at("n").get<int>();
  r.config.module = c.at("module").get<std::string>();
  RatVec lam;
  for (const auto& x : c.at("lambda")) lam.push_back(Rational::parse(x.get<std::string>()));
  r.config.lambda = TwistParam(std::move(lam));
  if (!c.at("k").is_null()) r.config.k = c.at("k").get<int>();
  const auto& w = c.at("window");
  r.config.window = Window{w.at("B").get<int>(), w.at("R").get<int>(), w.at("L").get<int>(), w.at("margin").get<int>()};
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.suites = c.at("suites").get<std::vector<std::string>>();
  for (const auto& s : j.at("suites")) {
    SuiteResult res;
    res.name = s.at("name").get<std::string>();
    res.status = parse_status(s.at("status").get<std::string>());
    for (const auto& [k, v] : s.at("counters").items()) {
      if (v.is_string()) res.counters[k] = v.get<std::string>();
      else res.counters[k] = v.get<long long>();
    }
    if (!s.at("timeMs").is_null()) res.timeMs = s.at("timeMs").get<long long>();
    res.logDigest = s.at("logDigest").get<std::string>();
    res.failures = s.at("failures").get<std::vector<std::string>>();
    r.suites.push_back(std::move(res));
  }
  return r;
}

inline std::string report_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Header plus one row per suite; counters are flattened as key=value;...
inline std::string report_csv(const Report& r) {
  std::ostringstream os;
  os << "name,status,timeMs,logDigest,counters\n";
  for (const auto& s : r.suites) {
    std::string counters;
    for (const auto& [k, v] : s.counters) {
      if (!counters.empty()) counters += ";";
      counters += k + "=";
      if (auto p = std::get_if<long long>(&v)) counters += std::to_string(*p);
      else counters += std::get<std::string>(v);
    }
    os << csv_quote(s.name) << "," << to_string(s.status) << "," << (s.timeMs ? std::to_string(*s.timeMs) : "")
       << "," << s.logDigest << "," << csv_quote(counters) << "\n";
  }
  return os.str();
}

/// Writes the report to path ("-" for standard output is handled by the caller).
inline void emit_report(const Report& r, const std::string& format, const std::string& path) {
  std::string body;
  if (format == "json") body = report_json(r);
  else if (format == "csv") body = report_csv(r);
  else throw std::invalid_argument("emit_report: unknown format '" + format + "'");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_report: cannot open '" + path + "'");
  out << body;
  if (!out) throw std::runtime_error("emit_report: write failed for '" + path + "'");
}

}  // namespace torusrep

// torusrep: run verification suites for tensor modules over the torus Lie algebras.

#include "torusrep/torusrep.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace torusrep;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification suites for tensor modules F(P,V) over W_n and S_n"};
  int n = 2;
  std::string module = "natural";
  std::string lambda;
  std::optional<int> k;
  std::string window;
  std::uint64_t seed = 1;
  std::string suites = "identities";
  std::string out = "-";
  std::string format = "json";
  int workers = 1;
  bool timings = false;

  app.add_option("--n", n, "rank n >= 2");
  app.add_option("--module", module, "trivial | natural | ext:k | sym:m | adjoint");
  app.add_option("--lambda", lambda, "twist as p/q,... (default 0)");
  app.add_option("--k", k, "exterior level");
  app.add_option("--window", window, "B,R,L,margin (default depends on n)");
  app.add_option("--seed", seed, "PRNG seed");
  app.add_option("--suite", suites, "comma-separated suite names")->default_str("identities");
  app.add_option("--out", out, "output path, - for stdout");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", workers, "worker threads for closure runs")->check(CLI::PositiveNumber);
  app.add_flag("--timings", timings, "record wall time per suite");
  CLI11_PARSE(app, argc, argv);

  Report report;
  try {
    RunConfig cfg;
    cfg.n = n;
    cfg.module = module;
    cfg.lambda = lambda.empty() ? TwistParam::zero(n) : TwistParam::parse(lambda);
    cfg.k = k;
    cfg.window = window.empty() ? Window::defaults(n) : Window::parse(window);
    cfg.seed = seed;
    cfg.suites = split_list(suites);
    cfg.workers = workers;
    cfg.timings = timings;
    report = run_suite(cfg);
  } catch (const std::exception& e) {
    std::cerr << "torusrep: " << e.what() << "\n";
    return 2;
  }

  try {
    if (out == "-") std::cout << (format == "json" ? report_json(report) : report_csv(report));
    else emit_report(report, format, out);
  } catch (const std::exception& e) {
    std::cerr << "torusrep: " << e.what() << "\n";
    return 2;
  }
  for (const auto& s : report.suites)
    for (const auto& f : s.failures) std::cerr << s.name << ": " << f << "\n";
  return report.any_failed() ? 1 : 0;
}

// crgen: command-line front end for the common-randomness toolkit.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or invalid
// configuration, 3 I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crgen/bounds.hpp"
#include "crgen/inequalities.hpp"
#include "crgen/protocols.hpp"
#include "crgen/strategy_io.hpp"

namespace {

using namespace crgen;

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 1;
};

// "x" or "lo:hi:count", endpoints inclusive.
GridSpec parse_grid(const std::string& spec) {
  GridSpec g;
  const auto c1 = spec.find(':');
  try {
    if (c1 == std::string::npos) {
      std::size_t used = 0;
      g.lo = std::stod(spec, &used);
      if (used != spec.size()) throw std::invalid_argument(spec);
      g.hi = g.lo;
      g.count = 1;
      return g;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument(spec);
    g.lo = std::stod(spec.substr(0, c1));
    g.hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const long long count = std::stoll(spec.substr(c2 + 1));
    if (count < 1) throw std::invalid_argument(spec);
    g.count = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad grid '" + spec + "' (want a value or lo:hi:count)");
  }
  return g;
}

// Relative --out paths land in $CRGEN_OUTPUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("CRGEN_OUTPUT_DIR");
  if (!dir || !*dir || path.front() == '/') return path;
  std::string full(dir);
  if (full.back() != '/') full += '/';
  return full + path;
}

// Empty path means stdout.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw std::ios_base::failure("failed while writing '" + path + "'");
}

std::string witness_to_json(const ComplexMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += "[" + format_g12(std::real(m(i, j))) + "," + format_g12(std::imag(m(i, j))) + "]";
    }
    out += "]";
  }
  return out + "]";
}

int run_bounds(const std::string& model_name, const std::string& rho_spec,
               const std::string& gamma_spec, double k, const std::string& format,
               const std::string& out_path) {
  const BoundModel model = bound_model_from_name(model_name);
  const GridSpec rho = parse_grid(rho_spec);
  const GridSpec gamma = parse_grid(gamma_spec);
  const BoundCurve curve =
      evaluate_bound_curve(model, linear_grid(rho.lo, rho.hi, rho.count),
                           linear_grid(gamma.lo, gamma.hi, gamma.count), k);
  emit(resolve_out(out_path), format == "json" ? curve_to_json(curve) : curve_to_csv(curve));
  return 0;
}

int run_verify(const std::string& suite_arg, long trials, std::uint64_t seed, double tolerance,
               double tamper, const std::string& format, const std::string& out_path) {
  SuiteConfig cfg;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.tolerance = tolerance;
  cfg.tamper = tamper;

  std::vector<SuiteResult> results;
  if (suite_arg == "all") {
    results = run_all_suites(cfg);
  } else {
    const Suite table[] = {Suite::hypercontractivity, Suite::holder,       Suite::partial_trace,
                           Suite::spectral_power,     Suite::epr_channel,  Suite::trace_identity};
    bool found = false;
    for (Suite s : table)
      if (suite_name(s) == suite_arg) {
        results.push_back(run_suite(s, cfg));
        found = true;
      }
    if (!found) throw std::invalid_argument("unknown suite '" + suite_arg + "'");
  }

  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.pass(cfg.tolerance);

  std::string report;
  if (format == "json") {
    report = "{\n  \"seed\": " + std::to_string(seed) + ",\n  \"trials\": " +
             std::to_string(trials) + ",\n  \"tolerance\": " + format_g12(tolerance) +
             ",\n  \"suites\": [\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      report += "    {\"suite\": \"" + r.name + "\", \"trials\": " + std::to_string(r.trials) +
                ", \"min_slack\": " + format_g12(r.min_slack) + ", \"worst\": \"" +
                r.worst.to_string() + "\", \"status\": \"" +
                (r.pass(cfg.tolerance) ? "PASS" : "FAIL") + "\"";
      if (!r.pass(cfg.tolerance) && r.witness)
        report += ", \"witness\": " + witness_to_json(*r.witness);
      report += "}";
      report += (i + 1 < results.size()) ? ",\n" : "\n";
    }
    report += "  ],\n  \"overall\": \"" + std::string(all_pass ? "PASS" : "FAIL") + "\"\n}\n";
  } else {
    report = "suite,trials,min_slack,worst,status\n";
    for (const auto& r : results)
      report += r.name + "," + std::to_string(r.trials) + "," + format_g12(r.min_slack) + ",\"" +
                r.worst.to_string() + "\"," + (r.pass(cfg.tolerance) ? "PASS" : "FAIL") + "\n";
    report += std::string("overall,,,,") + (all_pass ? "PASS" : "FAIL") + "\n";
  }
  emit(resolve_out(out_path), report);

  if (!all_pass) {
    for (const auto& r : results) {
      if (r.pass(cfg.tolerance) || !r.witness) continue;
      std::cerr << "violation witness for " << r.name << " (" << r.worst.to_string()
                << "): " << witness_to_json(*r.witness) << "\n";
    }
    return 1;
  }
  return 0;
}

int run_protocol(const std::string& file, double rho, const std::string& format) {
  const StrategyFile s = load_strategy(file);
  const ProtocolReport r = evaluate_strategy(s, rho);
  if (format == "json") {
    std::cout << "{\"model\": \"" << r.model << "\", \"n\": " << r.n << ", \"t\": " << r.t
              << ", \"rho\": " << format_g12(rho) << ", \"success\": " << format_g12(r.success)
              << ", \"min_entropy\": " << format_g12(r.min_entropy)
              << ", \"bound\": " << format_g12(r.bound) << "}\n";
  } else {
    std::cout << "model=" << r.model << "\n"
              << "n=" << r.n << "\n"
              << "t=" << r.t << "\n"
              << "rho=" << format_g12(rho) << "\n"
              << "success=" << format_g12(r.success) << "\n"
              << "min_entropy=" << format_g12(r.min_entropy) << "\n"
              << "bound=" << format_g12(r.bound) << "\n";
  }
  return 0;
}

int run_optimize(double rho, std::size_t n, std::size_t k, int iters, int restarts,
                 std::uint64_t seed, const std::string& format, const std::string& out_path) {
  const SeesawResult res = seesaw_best_of(rho, n, k, iters, restarts, seed);
  const double cap = bound_free(rho, static_cast<double>(k));

  std::string saved = resolve_out(out_path);
  if (!saved.empty())
    save_strategy(make_free_strategy(res.alice, res.bob, n), saved);

  if (format == "json") {
    std::cout << "{\"rho\": " << format_g12(rho) << ", \"n\": " << n << ", \"k\": " << k
              << ", \"value\": " << format_g12(res.value) << ", \"bound\": " << format_g12(cap)
              << ", \"iterations\": " << res.iterations << "}\n";
  } else {
    std::cout << "rho=" << format_g12(rho) << "\n"
              << "n=" << n << "\n"
              << "k=" << k << "\n"
              << "value=" << format_g12(res.value) << "\n"
              << "bound=" << format_g12(cap) << "\n"
              << "iterations=" << res.iterations << "\n";
    if (!saved.empty()) std::cout << "strategy=" << saved << "\n";
  }

  if (res.value > cap + 1e-8) {
    std::cerr << "error: optimized value " << format_g12(res.value)
              << " exceeds the no-communication bound " << format_g12(cap) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for common randomness from noisy EPR pairs"};
  app.require_subcommand(1);

  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate bound curves to CSV or JSON");
  std::string model = "free", rho_spec, gamma_spec = "0.05", format = "csv", out_path;
  double k = 1.0;
  bounds_cmd->add_option("--model", model, "free|classical|quantum|capacity|superdense")
      ->required();
  bounds_cmd->add_option("--rho", rho_spec, "value or lo:hi:count")->required();
  bounds_cmd->add_option("--gamma", gamma_spec, "value or lo:hi:count (default 0.05)");
  bounds_cmd->add_option("--k", k, "output min-entropy k (default 1)");
  bounds_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  bounds_cmd->add_option("--out", out_path, "output file (default stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Run randomized inequality suites");
  std::string suite = "all", vformat = "csv", vout;
  long trials = 10;
  std::uint64_t seed = 1;
  double tolerance = 1e-9, tamper = 0.0;
  verify_cmd->add_option("--suite", suite,
                         "hypercontractivity|holder|partial-trace|spectral-power|"
                         "epr-channel|trace-identity|all");
  verify_cmd->add_option("--trials", trials, "draws per parameter cell (default 10)");
  verify_cmd->add_option("--seed", seed, "base seed (default 1)");
  verify_cmd->add_option("--tolerance", tolerance, "slack tolerance (default 1e-9)");
  verify_cmd->add_option("--tamper", tamper)->group("");  // test hook, hidden
  verify_cmd->add_option("--format", vformat)->check(CLI::IsMember({"csv", "json"}));
  verify_cmd->add_option("--out", vout, "report file (default stdout)");

  auto* protocol_cmd = app.add_subcommand("protocol", "Evaluate a strategy file");
  std::string file, pformat = "text";
  double prho = 0.0;
  protocol_cmd->add_option("--file", file, "strategy JSON file")->required();
  protocol_cmd->add_option("--rho", prho, "isotropic parameter")->required();
  protocol_cmd->add_option("--format", pformat)->check(CLI::IsMember({"text", "json"}));

  auto* optimize_cmd = app.add_subcommand("optimize", "Seesaw search for free strategies");
  double orho = 0.0;
  std::size_t on = 1, ok = 1;
  int iters = 40, restarts = 8;
  std::uint64_t oseed = 1;
  std::string oformat = "text", oout;
  optimize_cmd->add_option("--rho", orho, "isotropic parameter")->required();
  optimize_cmd->add_option("--n", on, "qubit pairs (1..3)")->required();
  optimize_cmd->add_option("--k", ok, "output min-entropy bits (1..n)")->required();
  optimize_cmd->add_option("--iters", iters, "seesaw sweeps per start (default 40)");
  optimize_cmd->add_option("--restarts", restarts, "random restarts (default 8)");
  optimize_cmd->add_option("--seed", oseed, "base seed (default 1)");
  optimize_cmd->add_option("--format", oformat)->check(CLI::IsMember({"text", "json"}));
  optimize_cmd->add_option("--out", oout, "write the optimized strategy here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bounds_cmd->parsed())
      return run_bounds(model, rho_spec, gamma_spec, k, format, out_path);
    if (verify_cmd->parsed())
      return run_verify(suite, trials, seed, tolerance, tamper, vformat, vout);
    if (protocol_cmd->parsed()) return run_protocol(file, prho, pformat);
    if (optimize_cmd->parsed())
      return run_optimize(orho, on, ok, iters, restarts, oseed, oformat, oout);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

// kmlab command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmlab/kmlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Options {
  int n = 2;
  std::uint64_t seed = 42;
  int points = 20;
  std::vector<std::string> tols;
  std::vector<std::string> suites;
  std::string out;
  std::string format = "json";
  double t1 = 10.0;
  double dt = 1e-3;
  int kmax = 4;
  std::string space = "u";
  std::string init = "random";
  bool origin = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(kml_status s) {
  if (s != KML_OK) throw UsageError(kml_last_error());
}

struct InitState {
  std::vector<double> u, q, p;
};

std::vector<double> read_array(const nlohmann::json& doc, const char* key, const std::string& path) {
  const auto& a = doc.at(key);
  if (!a.is_array()) throw UsageError(path + ": \"" + key + "\" must be an array");
  std::vector<double> v;
  for (const auto& e : a) {
    if (!e.is_number()) throw UsageError(path + ": \"" + key + "\" must contain numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

InitState read_init(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open init file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw UsageError(path + ": expected a JSON object");
  InitState s;
  if (doc.contains("u")) {
    if (doc.contains("q") || doc.contains("p")) throw UsageError(path + ": give either u or q/p, not both");
    s.u = read_array(doc, "u", path);
  } else if (doc.contains("q") && doc.contains("p")) {
    s.q = read_array(doc, "q", path);
    s.p = read_array(doc, "p", path);
    if (s.q.size() != s.p.size()) throw UsageError(path + ": q and p differ in length");
  } else {
    throw UsageError(path + ": expected {\"u\": [...]} or {\"q\": [...], \"p\": [...]}");
  }
  return s;
}

kml_run_options* build_options(const Options& o) {
  kml_run_options* opts = nullptr;
  check(kml_run_options_create(&opts));
  check(kml_run_options_set_n(opts, o.n));
  check(kml_run_options_set_seed(opts, o.seed));
  check(kml_run_options_set_points(opts, o.points));
  for (const std::string& t : o.tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--tol expects name=value, got " + t);
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument(t);
    } catch (const std::exception&) {
      throw UsageError("--tol value is not a number: " + t);
    }
    check(kml_run_options_set_tolerance(opts, t.substr(0, eq).c_str(), value));
  }
  for (const std::string& s : o.suites) check(kml_run_options_add_suite(opts, s.c_str()));
  check(kml_run_options_set_t1(opts, o.t1));
  check(kml_run_options_set_dt(opts, o.dt));
  check(kml_run_options_set_kmax(opts, o.kmax));
  check(kml_run_options_set_space(opts, o.space == "phase" ? KML_SPACE_PHASE : KML_SPACE_U));
  check(kml_run_options_set_format(opts, o.format == "csv" ? KML_FORMAT_CSV : KML_FORMAT_JSON));
  check(kml_run_options_set_origin(opts, o.origin ? 1 : 0));
  if (o.init != "random") {
    const InitState s = read_init(o.init);
    if (!s.u.empty())
      check(kml_run_options_set_init_u(opts, s.u.data(), s.u.size()));
    else
      check(kml_run_options_set_init_phase(opts, s.q.data(), s.p.data(), s.q.size()));
  }
  return opts;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  f << text;
}

int execute(const std::string& command, const Options& o) {
  kml_run_options* opts = build_options(o);
  kml_result* result = nullptr;
  kml_status s = KML_OK;
  if (command == "verify") s = kml_run_verify(opts, &result);
  else if (command == "integrate") s = kml_run_integrate(opts, &result);
  else if (command == "hierarchy") s = kml_run_hierarchy(opts, &result);
  else s = kml_run_spectrum(opts, &result);
  kml_run_options_destroy(opts);
  if (s == KML_ERR_INTEGRATION_FAILURE) {
    std::cerr << "kmlab: " << kml_last_error() << '\n';
    return kExitFailed;
  }
  check(s);

  write_text(o.out, kml_result_text(result));
  // integrate: the summary record is always the last line on stdout.
  const std::string summary = kml_result_summary(result);
  if (!summary.empty()) {
    std::fwrite(summary.data(), 1, summary.size(), stdout);
    std::fputc('\n', stdout);
  }
  const bool passed = kml_result_passed(result) != 0;
  kml_result_destroy(result);
  return passed ? kExitOk : kExitFailed;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--n", o.n, "lattice parameter, N = 2n-1 sites");
  sub->add_option("--seed", o.seed, "PRNG seed");
  sub->add_option("--points", o.points, "number of sample points");
  sub->add_option("--tol", o.tols, "override a tolerance, name=value (repeatable)");
  sub->add_option("--out", o.out, "output path (default stdout)");
  sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--kmax", o.kmax, "highest invariant / hierarchy order");
  sub->add_option("--init", o.init, "initial-state JSON file, or 'random'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kmlab: KM lattice verification laboratory"};
  app.set_version_flag("--version", std::string(kml_version()));
  app.require_subcommand(1, 1);
  Options o;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, o);
  verify->add_option("--suite", o.suites, "suite name or 'all' (repeatable)");

  CLI::App* integ = app.add_subcommand("integrate", "integrate a trajectory with drift monitoring");
  add_common(integ, o);
  integ->add_option("--t1", o.t1, "final time");
  integ->add_option("--dt", o.dt, "RK4 step");
  integ->add_option("--space", o.space, "u or phase")->check(CLI::IsMember({"u", "phase"}));

  CLI::App* hier = app.add_subcommand("hierarchy", "dump the recursion hierarchy at a point");
  add_common(hier, o);
  hier->add_flag("--origin", o.origin, "evaluate at q = p = 0");

  CLI::App* spec = app.add_subcommand("spectrum", "eigenvalues of L with Newton-identity check");
  add_common(spec, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "integrate" && o.format == "json" && !integ->count("--format")) o.format = "csv";
  try {
    return execute(command, o);
  } catch (const UsageError& e) {
    std::cerr << "kmlab: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "kmlab: " << e.what() << '\n';
    return kExitUsage;
  }
}

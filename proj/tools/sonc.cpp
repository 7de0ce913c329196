// Command-line front end: certify | bound | schedule | enumerate | verify.
// Exit codes: 0 success, 1 usage/parse error, 2 not certified / infeasible
// level / verification failure, 3 indeterminate (iteration limit).

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "sonc/json_io.hpp"

namespace {

using sonc::Json;

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

sonc::Poly load_poly(const std::string& path) {
  Json j = load_json_file(path);
  if (j.contains("f")) return sonc::poly_from_json(j.at("f"));
  return sonc::poly_from_json(j);
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

struct Output {
  bool no_meta = false;
  std::string report_path;  // empty: stdout
  std::string cert_path;    // certificate sidecar, when requested

  void emit(Json report, const char* command) const {
    Json full;
    full["schema_version"] = 1;
    full["command"] = command;
    if (!no_meta) {
      full["meta"] = Json{{"generator", "sonc 0.1.0"}, {"timestamp", iso_timestamp()}};
    }
    for (auto& [key, value] : report.items()) full[key] = std::move(value);
    std::string text = full.dump(2) + "\n";
    if (report_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(report_path);
      if (!out) throw std::runtime_error("cannot write " + report_path);
      out << text;
    }
  }

  void emit_certificate(const sonc::SoncDecomposition& dec) const {
    if (cert_path.empty()) return;
    std::ofstream out(cert_path);
    if (!out) throw std::runtime_error("cannot write " + cert_path);
    out << sonc::decomposition_to_json(dec).dump(2) << "\n";
  }
};

sonc::EnumStrategy parse_strategy(const std::string& name) {
  if (name == "full") return sonc::EnumStrategy::Full;
  if (name == "low_dim" || name == "low") return sonc::EnumStrategy::LowDim;
  if (name == "support" || name == "support_adapted") return sonc::EnumStrategy::SupportAdapted;
  throw CLI::ValidationError("--strategy", "unknown strategy '" + name + "'");
}

void dump_rep(const std::string& path, const sonc::AssembledRep& assembled) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << sonc::rep_to_json(assembled.rep).dump(2) << "\n";
}

int run_enumerate(int n, int deg, const std::string& strategy_name, const std::string& input,
                  const Output& output) {
  sonc::EnumStrategy strategy = parse_strategy(strategy_name);
  std::optional<sonc::Poly> f;
  if (strategy == sonc::EnumStrategy::SupportAdapted) {
    if (input.empty())
      throw std::runtime_error("support-adapted enumeration needs --input <poly.json>");
    f = load_poly(input);
  }
  auto supports = sonc::enumerate_circuits(n, deg, strategy, f ? &*f : nullptr);

  std::vector<int> by_r(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& s : supports) ++by_r[static_cast<std::size_t>(s.r())];
  Json counts;
  for (int r = 0; r <= n; ++r) counts["r" + std::to_string(r)] = by_r[static_cast<std::size_t>(r)];
  counts["total"] = static_cast<int>(supports.size());

  Json report;
  report["n"] = n;
  report["deg"] = deg;
  report["strategy"] = strategy_name;
  report["counts"] = std::move(counts);
  Json list = Json::array();
  for (const auto& s : supports) list.push_back(sonc::circuit_support_to_json(s));
  report["supports"] = std::move(list);
  output.emit(std::move(report), "enumerate");
  return 0;
}

int run_certify(const std::string& input, int deg, const std::string& strategy_name, double tol,
                const std::string& rep_path, const Output& output) {
  sonc::Poly f = load_poly(input);
  if (deg <= 0) deg = f.degree() + (f.degree() % 2);
  sonc::EnumStrategy strategy = parse_strategy(strategy_name);
  auto circuits = sonc::enumerate_circuits(f.dim(), deg, strategy,
                                           strategy == sonc::EnumStrategy::SupportAdapted ? &f
                                                                                          : nullptr);

  if (!rep_path.empty()) {
    sonc::AssemblyInput ai;
    ai.f = &f;
    ai.products = {sonc::Poly::constant(f.dim(), sonc::Rational(1))};
    ai.circuits = circuits;
    ai.eta_degree = deg;
    ai.match_constant = true;
    dump_rep(rep_path, sonc::assemble_rep(ai));
  }

  sonc::SolveOptions options;
  options.tol = tol;
  auto result = sonc::sonc_certify(f, circuits, options);

  Json report;
  report["input"] = input;
  report["deg"] = deg;
  report["strategy"] = strategy_name;
  int code = 0;
  switch (result.status) {
    case sonc::CertifyStatus::Certified:
      report["certified"] = true;
      report["certificate"] = sonc::decomposition_to_json(*result.decomposition);
      output.emit_certificate(*result.decomposition);
      code = 0;
      break;
    case sonc::CertifyStatus::NotCertified:
      report["certified"] = false;
      code = 2;
      break;
    case sonc::CertifyStatus::Indeterminate:
      report["certified"] = "unknown";
      code = 3;
      break;
  }
  output.emit(std::move(report), "certify");
  return code;
}

int run_bound(const std::string& input, int d, int q, double tol, bool full_circuits,
              const std::string& rep_path, const Output& output) {
  sonc::Problem problem = sonc::problem_from_json(load_json_file(input));
  sonc::HierarchyOptions options;
  options.solve.tol = tol;
  options.full_circuits = full_circuits;

  if (!rep_path.empty()) {
    auto products = sonc::constraint_products(problem, q, options.product_cap);
    auto circuits = sonc::hierarchy_circuits(problem.f, products, d, options.enumeration,
                                             options.full_circuits);
    dump_rep(rep_path, sonc::assemble_hierarchy_rep(problem, d, q, circuits));
  }

  sonc::BoundResult result = sonc::sonc_bound(problem, d, q, options);
  Json report;
  report["input"] = input;
  report["result"] = sonc::bound_result_to_json(result);
  int code;
  if (result.status == sonc::SolveStatus::Optimal) {
    code = 0;
    if (result.certificate) output.emit_certificate(*result.certificate);
  } else if (result.status == sonc::SolveStatus::Infeasible) {
    code = 2;
  } else {
    code = 3;
  }
  output.emit(std::move(report), "bound");
  return code;
}

int run_schedule(const std::string& input, int d_max, int q_max, double tol,
                 const Output& output) {
  sonc::Problem problem = sonc::problem_from_json(load_json_file(input));
  sonc::HierarchyOptions options;
  options.solve.tol = tol;
  auto results = sonc::bound_schedule(problem, d_max, q_max, options);

  std::printf("%4s %4s %14s %s\n", "d", "q", "bound", "status");
  for (const auto& r : results) {
    if (!r.error.empty())
      std::printf("%4d %4d %14s %s\n", r.d, r.q, "-", r.error.c_str());
    else if (r.status == sonc::SolveStatus::Optimal)
      std::printf("%4d %4d %14.9f %s\n", r.d, r.q, r.value, to_string(r.status));
    else
      std::printf("%4d %4d %14s %s\n", r.d, r.q,
                  r.status == sonc::SolveStatus::Infeasible ? "-inf" : "-", to_string(r.status));
  }

  Json report;
  report["input"] = input;
  Json cells = Json::array();
  for (const auto& r : results) cells.push_back(sonc::bound_result_to_json(r));
  report["cells"] = std::move(cells);
  output.emit(std::move(report), "schedule");
  return 0;
}

int run_verify(const std::string& cert_path, const std::string& against, bool exact, double tol,
               const Output& output) {
  Json cj = load_json_file(cert_path);
  if (cj.contains("certificate")) cj = cj.at("certificate");
  sonc::SoncDecomposition dec = sonc::decomposition_from_json(cj);
  sonc::Poly f = load_poly(against);
  bool ok = sonc::verify_decomposition(
      f, dec, exact ? sonc::VerifyMode::Exact : sonc::VerifyMode::Float, tol);
  Json report;
  report["certificate"] = cert_path;
  report["against"] = against;
  report["mode"] = exact ? "exact" : "float";
  report["verified"] = ok;
  output.emit(std::move(report), "verify");
  return ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonnegativity certificates and optimization bounds from sums of nonnegative "
               "circuit polynomials"};
  app.require_subcommand(1);

  Output output;
  app.add_flag("--no-meta", output.no_meta, "omit timestamp metadata from reports");
  app.add_option("--report", output.report_path, "write the JSON report to a file");

  auto* enumerate = app.add_subcommand("enumerate", "list circuit supports in a simplex");
  int en_n = 2, en_deg = 4;
  std::string en_strategy = "full", en_input;
  enumerate->add_option("--n", en_n, "number of variables")->required();
  enumerate->add_option("--deg", en_deg, "simplex edge length 2d")->required();
  enumerate->add_option("--strategy", en_strategy, "full | low_dim | support");
  enumerate->add_option("--input", en_input, "polynomial JSON for support-adapted enumeration");

  auto* certify = app.add_subcommand("certify", "SONC nonnegativity certificate for a polynomial");
  std::string ce_input, ce_strategy = "support", ce_rep;
  int ce_deg = 0;
  double ce_tol = 1e-8;
  certify->add_option("input", ce_input, "polynomial JSON file")->required();
  certify->add_option("--deg", ce_deg, "circuit simplex degree (default: deg f rounded up)");
  certify->add_option("--strategy", ce_strategy, "support | full | low_dim");
  certify->add_option("--tol", ce_tol, "solver tolerance")->check(CLI::Range(1e-14, 1e-2));
  certify->add_option("--dump-rep", ce_rep, "write the assembled REP as JSON");
  certify->add_option("--out", output.cert_path, "write the certificate JSON to a file");

  auto* bound = app.add_subcommand("bound", "lower bound at hierarchy level (d, q)");
  std::string bd_input, bd_rep;
  int bd_d = 1, bd_q = 0;
  double bd_tol = 1e-9;
  bool bd_full = false;
  bound->add_option("input", bd_input, "problem JSON file")->required();
  bound->add_option("--d", bd_d, "degree level (2d circuit simplex)")->required()
      ->check(CLI::PositiveNumber);
  bound->add_option("--q", bd_q, "constraint product level")->check(CLI::NonNegativeNumber);
  bound->add_option("--tol", bd_tol, "solver tolerance")->check(CLI::Range(1e-14, 1e-2));
  bound->add_flag("--full-circuits", bd_full, "use every admissible circuit support");
  bound->add_option("--dump-rep", bd_rep, "write the assembled REP as JSON");
  bound->add_option("--out", output.cert_path, "write the certificate JSON to a file");

  auto* schedule = app.add_subcommand("schedule", "table of bounds up to (d_max, q_max)");
  std::string sc_input;
  int sc_dmax = 2, sc_qmax = 1;
  double sc_tol = 1e-9;
  schedule->add_option("input", sc_input, "problem JSON file")->required();
  schedule->add_option("--dmax", sc_dmax, "maximum d")->required()->check(CLI::PositiveNumber);
  schedule->add_option("--qmax", sc_qmax, "maximum q")->required()->check(CLI::NonNegativeNumber);
  schedule->add_option("--tol", sc_tol, "solver tolerance")->check(CLI::Range(1e-14, 1e-2));

  auto* verify = app.add_subcommand("verify", "re-verify a certificate against a polynomial");
  std::string vf_cert, vf_against;
  bool vf_exact = false;
  double vf_tol = 1e-6;
  verify->add_option("certificate", vf_cert, "certificate JSON file")->required();
  verify->add_option("--against", vf_against, "polynomial JSON file")->required();
  verify->add_flag("--exact", vf_exact, "exact rational verification");
  verify->add_option("--tol", vf_tol, "float-mode coefficient tolerance");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (enumerate->parsed()) return run_enumerate(en_n, en_deg, en_strategy, en_input, output);
    if (certify->parsed()) return run_certify(ce_input, ce_deg, ce_strategy, ce_tol, ce_rep, output);
    if (bound->parsed()) return run_bound(bd_input, bd_d, bd_q, bd_tol, bd_full, bd_rep, output);
    if (schedule->parsed()) return run_schedule(sc_input, sc_dmax, sc_qmax, sc_tol, output);
    if (verify->parsed()) return run_verify(vf_cert, vf_against, vf_exact, vf_tol, output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

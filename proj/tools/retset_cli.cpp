// Batch front-end: parses JSON instance files, dispatches subcommands, and
// writes JSON/CSV reports with full provenance.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "retset/json_io.hpp"
#include "retset/version.hpp"

namespace {

using retset::json_io::json;

constexpr int kExitOk = 0;
constexpr int kExitUser = 2;
constexpr int kExitResource = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw retset::ValidationError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw retset::ValidationError("cannot write file: " + path);
  out << content;
}

json parse_json_file(const std::string& path, std::string* raw_out) {
  std::string raw = read_file(path);
  if (raw_out != nullptr) *raw_out = raw;
  try {
    return json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw retset::ValidationError(path + ": " + e.what());
  }
}

json provenance(const std::string& subcommand, const std::string& instance_raw,
                std::uint64_t seed, json params) {
  json out;
  out["tool"] = "retset";
  out["version"] = retset::kVersion;
  out["subcommand"] = subcommand;
  out["instance_hash"] = retset::json_io::content_hash(instance_raw);
  out["seed"] = seed;
  out["params"] = std::move(params);
  return out;
}

void emit(const std::string& out_path, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

std::vector<long long> parse_checkpoints(const std::string& csv) {
  std::vector<long long> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  return out;
}

std::vector<long long> ns_from_instance(const json& inst) {
  if (!inst.contains("ns") || !inst["ns"].is_array()) {
    throw retset::ValidationError("instance needs an 'ns' array");
  }
  std::vector<long long> ns;
  for (const auto& v : inst["ns"]) ns.push_back(v.get<long long>());
  return ns;
}

// ---------------------------------------------------------------------------

int cmd_return_set(const std::string& instance_path, const std::string& out_path,
                   const std::string& mode_flag, std::uint64_t seed,
                   long long max_m) {
  std::string raw;
  json inst = parse_json_file(instance_path, &raw);
  auto ti = retset::json_io::parse_torus_instance(inst);
  if (max_m >= 0) ti.M = max_m;
  if (mode_flag == "exact") ti.mode = retset::torus::ScanMode::exact;
  if (mode_flag == "montecarlo") ti.mode = retset::torus::ScanMode::montecarlo;

  retset::torus::ReturnSetOptions opts;
  opts.seed = seed;
  auto res = retset::torus::return_set(ti.F, ti.phi, ti.alpha, ti.V, ti.M,
                                       ti.mode, opts);
  json report = retset::json_io::dump_return_result(res, ti.M);
  report["field"] = retset::json_io::dump_field(ti.F);
  report["provenance"] = provenance(
      "return-set", raw, seed,
      json{{"M", ti.M}, {"mode", retset::torus::to_string(ti.mode)}});
  emit(out_path, report);
  return kExitOk;
}

int cmd_orbit(const std::string& instance_path, const std::string& out_path,
              long long max_m) {
  std::string raw;
  json inst = parse_json_file(instance_path, &raw);
  auto ti = retset::json_io::parse_torus_instance(inst);
  const long long steps = max_m >= 0 ? max_m : std::min<long long>(ti.M, 32);
  retset::WorkBudget budget{1ull << 28};
  auto rows = retset::torus::orbit(ti.F, ti.phi, ti.alpha, ti.V, steps, &budget);
  json out;
  json jrows = json::array();
  for (const auto& r : rows) {
    jrows.push_back(json{{"n", r.n}, {"coords", r.coords},
                         {"in_variety", r.in_variety}});
  }
  out["orbit"] = jrows;
  out["provenance"] = provenance("orbit", raw, 0, json{{"steps", steps}});
  emit(out_path, out);
  return kExitOk;
}

int cmd_decompose(const std::string& instance_path, const std::string& out_path,
                  long long a_max, const std::string& window) {
  std::string raw;
  json inst = parse_json_file(instance_path, &raw);
  auto ns = ns_from_instance(inst);
  long long M = inst.contains("M") ? inst["M"].get<long long>()
                                   : (ns.empty() ? 0 : ns.back());
  retset::structure::DecomposeParams params =
      retset::json_io::parse_decompose_params(inst);
  if (a_max > 0) params.a_max = a_max;
  if (!window.empty()) {
    params.window_fraction = retset::json_io::parse_mpq(json(window), "window");
  }
  auto dec = retset::structure::decompose(ns, M, params);
  json report = retset::json_io::dump_decomposition(dec);
  report["provenance"] = provenance(
      "decompose", raw, 0,
      json{{"a_max", params.a_max},
           {"window_fraction", retset::json_io::dump_mpq(params.window_fraction)}});
  emit(out_path, report);
  return kExitOk;
}

int cmd_certify(const std::string& instance_path, const std::string& out_path,
                const std::string& csv_path, const std::string& checkpoints_flag,
                int d_flag, double tolerance) {
  std::string raw;
  json inst = parse_json_file(instance_path, &raw);
  auto ns = ns_from_instance(inst);
  int d = d_flag >= 0 ? d_flag
                      : (inst.contains("d") ? inst["d"].get<int>() : 1);
  std::vector<long long> checkpoints;
  if (!checkpoints_flag.empty()) {
    checkpoints = parse_checkpoints(checkpoints_flag);
  } else if (inst.contains("checkpoints")) {
    for (const auto& v : inst["checkpoints"]) checkpoints.push_back(v.get<long long>());
  } else {
    throw retset::ValidationError("no checkpoints given (flag or instance field)");
  }
  auto rep = retset::structure::certify_bound(ns, d, checkpoints, tolerance);
  json report = retset::json_io::dump_certify(rep);
  report["provenance"] = provenance(
      "certify", raw, 0, json{{"d", d}, {"growth_tolerance", tolerance}});
  emit(out_path, report);
  if (!csv_path.empty()) {
    write_file(csv_path, retset::json_io::profile_csv(rep));
  }
  return kExitOk;
}

int cmd_solve(const std::string& instance_path, const std::string& out_path,
              long long max_m, long long k_max) {
  std::string raw;
  json inst = parse_json_file(instance_path, &raw);
  const std::string solver =
      inst.contains("solver") ? inst["solver"].get<std::string>() : "bounded";
  json report;
  if (solver == "digit") {
    auto u = retset::json_io::parse_linrec(inst["u"], "instance.u");
    mpz_class q = retset::json_io::parse_mpz(inst["q"], "instance.q");
    std::vector<mpz_class> cs;
    for (const auto& c : inst["cs"]) {
      cs.push_back(retset::json_io::parse_mpz(c, "instance.cs"));
    }
    long long M = max_m >= 0 ? max_m : inst["M"].get<long long>();
    auto sols = retset::polyexp::solve_digit_partition(u, q, cs, M);
    report = retset::json_io::dump_solution_set(sols);
    report["provenance"] =
        provenance("solve", raw, 0, json{{"solver", "digit"}, {"M", M}});
  } else if (solver == "bounded") {
    auto eq = retset::json_io::parse_equation(inst.contains("eq") ? inst["eq"] : inst,
                                              "instance");
    long long M = max_m >= 0 ? max_m : inst["M"].get<long long>();
    long long K = k_max >= 0
                      ? k_max
                      : (inst.contains("K_max") ? inst["K_max"].get<long long>() : 64);
    auto sols = retset::polyexp::solve_bounded(eq, M, K);
    report = retset::json_io::dump_solution_set(sols);
    report["provenance"] = provenance(
        "solve", raw, 0, json{{"solver", "bounded"}, {"M", M}, {"K_max", K}});
  } else {
    throw retset::ValidationError("unknown solver kind: " + solver);
  }
  emit(out_path, report);
  return kExitOk;
}

int cmd_reduce(const std::string& instance_path, const std::string& out_path,
               const std::string& csv_path, long long max_m,
               const std::string& checkpoints_flag) {
  std::string raw;
  json inst = parse_json_file(instance_path, &raw);
  auto eq = retset::json_io::parse_equation(inst.contains("eq") ? inst["eq"] : inst,
                                            "instance");
  long long M = max_m >= 0 ? max_m
                           : (inst.contains("M") ? inst["M"].get<long long>() : 4096);
  auto red = retset::polyexp::laurent_reduce(eq);
  json report = retset::json_io::dump_reduction(red);

  std::vector<long long> all_ns;
  json solves = json::array();
  for (std::size_t bi = 0; bi < red.branches.size(); ++bi) {
    for (const auto& rq : red.branches[bi].reduced) {
      auto srep = retset::polyexp::solve_reduced(rq, M);
      json sj = retset::json_io::dump_reduced_report(srep);
      sj["branch"] = bi;
      solves.push_back(sj);
      for (long long n : srep.sols.ns()) all_ns.push_back(n);
    }
  }
  std::sort(all_ns.begin(), all_ns.end());
  all_ns.erase(std::unique(all_ns.begin(), all_ns.end()), all_ns.end());
  report["reduced_solves"] = solves;
  report["union_ns"] = all_ns;

  std::vector<long long> checkpoints;
  if (!checkpoints_flag.empty()) checkpoints = parse_checkpoints(checkpoints_flag);
  if (!checkpoints.empty()) {
    int d = eq.dim_v >= 0 ? eq.dim_v : eq.m();
    auto rows = retset::polyexp::count_profile(all_ns, checkpoints, d);
    report["profile"] = retset::json_io::dump_profile(rows);
    if (!csv_path.empty()) {
      write_file(csv_path, retset::json_io::profile_csv(rows));
    }
  }
  report["provenance"] = provenance("reduce", raw, 0, json{{"M", M}});
  emit(out_path, report);
  return kExitOk;
}

int cmd_digits(long long p, int m, long long max_n, bool ones_only,
               const std::string& out_path) {
  auto count = retset::structure::count_nonzero_digits(
      static_cast<unsigned long long>(p), m, max_n, ones_only);
  if (out_path.empty()) {
    std::cout << count.get_str() << "\n";
  } else {
    json report;
    report["count"] = retset::json_io::dump_mpz(count);
    report["provenance"] = provenance(
        "digits", "", 0,
        json{{"p", p}, {"m", m}, {"max", max_n}, {"ones_only", ones_only}});
    emit(out_path, report);
  }
  return kExitOk;
}

// Embedded oracle-equivalence suite: quick randomized cross-checks of the
// main dual routes.
int cmd_selftest() {
  using namespace retset;
  std::mt19937_64 rng(12345);
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // Field axioms on random extension fields.
  {
    bool ok = true;
    for (int it = 0; it < 100 && ok; ++it) {
      const std::uint64_t ps[] = {2, 3, 5, 7};
      ffield::Fq F = ffield::make_extension(ps[rng() % 4], 1 + rng() % 3, rng());
      auto a = F.sample(rng), b = F.sample(rng), c = F.sample(rng);
      ok = ok && F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c));
      ok = ok && F.add(a, b) == F.add(b, a);
      if (!F.is_zero(a)) ok = ok && F.is_one(F.mul(a, F.inv(a)));
    }
    check(ok, "field axioms (randomized)");
  }
  // Digit partition vs bounded enumeration.
  {
    bool ok = true;
    for (int it = 0; it < 20 && ok; ++it) {
      const long long q = 5 + static_cast<long long>(rng() % 12);
      std::vector<mpz_class> cs;
      long long cs_budget = (q - 1) / 2;
      const int m = 1 + static_cast<int>(rng() % 2);
      mpz_class csum = 0;
      for (int i = 0; i < m; ++i) {
        long long ci = 1 + static_cast<long long>(rng() % 2);
        if (csum.get_si() + ci > cs_budget) ci = 1;
        if (csum.get_si() + ci > cs_budget) break;
        cs.push_back(mpz_class(static_cast<long>(ci)));
        csum += static_cast<long>(ci);
      }
      if (cs.empty()) continue;
      recseq::LinRec u = recseq::make_linrec(
          {recseq::LinRecTerm{qpoly::identity(), mpz_class(1)}});
      auto digit = polyexp::solve_digit_partition(u, mpz_class(static_cast<long>(q)), cs, 500);
      polyexp::PolyExpEquation eq;
      eq.lhs = u;
      for (const auto& c : cs) {
        eq.rhs.push_back(polyexp::RhsUnknown{
            1, {polyexp::Coupling{mpq_class(c), mpz_class(static_cast<long>(q))}}});
      }
      auto bounded = polyexp::solve_bounded(eq, 500, 8);
      ok = digit.ns() == bounded.ns();
    }
    check(ok, "digit partition == bounded enumeration");
  }
  // Lattice brute force.
  {
    bool ok = true;
    for (int it = 0; it < 20 && ok; ++it) {
      mpz_class mu(2 + static_cast<long>(rng() % 7));
      mpz_class lam(2 + static_cast<long>(rng() % 7));
      long long a = 1 + static_cast<long long>(rng() % 2);
      auto lat = mullat::g_sigma({mu}, {{lam, a}});
      for (long long f0 = -6; f0 <= 6 && ok; ++f0) {
        for (long long f1 = -6; f1 <= 6 && ok; ++f1) {
          mpq_class lhs = 1, rhs = 1;
          mpz_class t;
          mpz_pow_ui(t.get_mpz_t(), mu.get_mpz_t(), std::abs(f0));
          lhs = f0 >= 0 ? mpq_class(t) : mpq_class(1) / mpq_class(t);
          mpz_pow_ui(t.get_mpz_t(), lam.get_mpz_t(), std::abs(a * f1));
          rhs = f1 >= 0 ? mpq_class(t) : mpq_class(1) / mpq_class(t);
          const bool satisfies = lhs == rhs;
          const bool in_lattice = mullat::lattice_contains(
              lat, {mpz_class(static_cast<long>(f0)), mpz_class(static_cast<long>(f1))});
          ok = (satisfies == in_lattice);
        }
      }
    }
    check(ok, "relation lattice == brute-force search");
  }
  // Decompose partitions its input.
  {
    bool ok = true;
    for (int it = 0; it < 20 && ok; ++it) {
      std::set<long long> s;
      const long long M = 200 + static_cast<long long>(rng() % 200);
      const long long a = 1 + static_cast<long long>(rng() % 5);
      const long long b = static_cast<long long>(rng() % a);
      for (long long n = b; n <= M; n += a) s.insert(n);
      for (int j = 0; j < 10; ++j) s.insert(static_cast<long long>(rng() % (M + 1)));
      std::vector<long long> in(s.begin(), s.end());
      auto dec = structure::decompose(in, M, {});
      std::set<long long> rebuilt(dec.sparse.begin(), dec.sparse.end());
      for (const auto& pr : dec.progressions) {
        for (long long n = pr.onset; n <= M; n += pr.a) rebuilt.insert(n);
      }
      ok = rebuilt == s;
    }
    check(ok, "decompose partitions its input");
  }
  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"return-set workbench for torus self-maps over F_p(t)"};
  app.require_subcommand(1);

  std::string instance, out, csv, mode = "", window, checkpoints;
  std::uint64_t seed = 0;
  long long max_m = -1, k_max = -1, a_max = -1;
  int d_flag = -1;
  double tolerance = 2.0;

  auto* c_return = app.add_subcommand("return-set", "compute S(Phi, alpha; V)");
  c_return->add_option("--instance", instance)->required();
  c_return->add_option("--out", out);
  c_return->add_option("--mode", mode)->check(CLI::IsMember({"exact", "montecarlo"}));
  c_return->add_option("--seed", seed);
  c_return->add_option("--max-m", max_m);

  auto* c_orbit = app.add_subcommand("orbit", "print the first orbit points");
  c_orbit->add_option("--instance", instance)->required();
  c_orbit->add_option("--out", out);
  c_orbit->add_option("--max-m", max_m);

  auto* c_dec = app.add_subcommand("decompose", "progressions + sparse residual");
  c_dec->add_option("--instance", instance)->required();
  c_dec->add_option("--out", out);
  c_dec->add_option("--a-max", a_max);
  c_dec->add_option("--window", window);

  auto* c_cert = app.add_subcommand("certify", "counting-bound certification");
  c_cert->add_option("--instance", instance)->required();
  c_cert->add_option("--out", out);
  c_cert->add_option("--csv", csv);
  c_cert->add_option("--checkpoints", checkpoints);
  c_cert->add_option("--d", d_flag);
  c_cert->add_option("--tolerance", tolerance);

  auto* c_solve = app.add_subcommand("solve", "digit-partition or bounded solver");
  c_solve->add_option("--instance", instance)->required();
  c_solve->add_option("--out", out);
  c_solve->add_option("--max-m", max_m);
  c_solve->add_option("--k-max", k_max);

  auto* c_red = app.add_subcommand("reduce", "subsum reduction pipeline");
  c_red->add_option("--instance", instance)->required();
  c_red->add_option("--out", out);
  c_red->add_option("--csv", csv);
  c_red->add_option("--max-m", max_m);
  c_red->add_option("--checkpoints", checkpoints);

  long long dig_p = 2, dig_max = 0;
  int dig_m = 1;
  bool ones_only = false;
  auto* c_dig = app.add_subcommand("digits", "count n with m nonzero base-p digits");
  c_dig->add_option("--p", dig_p)->required();
  c_dig->add_option("--m", dig_m)->required();
  c_dig->add_option("--max", dig_max)->required();
  c_dig->add_flag("--ones-only", ones_only);
  c_dig->add_option("--out", out);

  app.add_subcommand("selftest", "run the embedded oracle-equivalence suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUser;
  }

  try {
    if (c_return->parsed()) return cmd_return_set(instance, out, mode, seed, max_m);
    if (c_orbit->parsed()) return cmd_orbit(instance, out, max_m);
    if (c_dec->parsed()) return cmd_decompose(instance, out, a_max, window);
    if (c_cert->parsed()) {
      return cmd_certify(instance, out, csv, checkpoints, d_flag, tolerance);
    }
    if (c_solve->parsed()) return cmd_solve(instance, out, max_m, k_max);
    if (c_red->parsed()) return cmd_reduce(instance, out, csv, max_m, checkpoints);
    if (c_dig->parsed()) return cmd_digits(dig_p, dig_m, dig_max, ones_only, out);
    return cmd_selftest();
  } catch (const retset::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const retset::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUser;
  }
}

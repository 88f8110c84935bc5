#include "retset/json_io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>

namespace retset::json_io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

long long get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected an integer");
  return v.get<long long>();
}

long long get_int_field(const json& v, const char* key, const std::string& where) {
  if (!v.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return get_int(v[key], where + "." + key);
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

}  // namespace

mpq_class parse_mpq(const json& v, const std::string& where) {
  if (v.is_number_integer()) return mpq_class(static_cast<long>(v.get<long long>()));
  if (v.is_string()) {
    mpq_class q;
    if (q.set_str(v.get<std::string>(), 10) != 0) {
      fail(where, "malformed rational '" + v.get<std::string>() + "'");
    }
    q.canonicalize();
    return q;
  }
  fail(where, "expected an integer or a \"num/den\" string");
}

mpz_class parse_mpz(const json& v, const std::string& where) {
  if (v.is_number_integer()) return mpz_class(static_cast<long>(v.get<long long>()));
  if (v.is_string()) {
    mpz_class z;
    if (z.set_str(v.get<std::string>(), 10) != 0) {
      fail(where, "malformed integer '" + v.get<std::string>() + "'");
    }
    return z;
  }
  fail(where, "expected an integer or a decimal string");
}

json dump_mpq(const mpq_class& v) {
  if (v.get_den() == 1 && v.get_num().fits_slong_p()) {
    return v.get_num().get_si();
  }
  return v.get_str();
}

json dump_mpz(const mpz_class& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

ffield::FqElem parse_elem(const ffield::Fq& F, const json& v,
                          const std::string& where) {
  if (v.is_number_integer()) return F.from_int(v.get<long long>());
  if (v.is_array()) {
    std::vector<long long> coeffs;
    for (const auto& x : v) coeffs.push_back(get_int(x, where));
    return F.from_coeffs(coeffs);
  }
  fail(where, "expected a residue or a coefficient array");
}

json dump_elem(const ffield::Fq& F, const ffield::FqElem& e) {
  if (F.degree() == 1) return static_cast<long long>(e.v[0]);
  json arr = json::array();
  for (auto x : e.v) arr.push_back(static_cast<long long>(x));
  return arr;
}

ffield::Poly parse_poly(const ffield::Fq& F, const json& v,
                        const std::string& where) {
  if (v.is_number_integer()) {
    return ffield::p_const(F, F.from_int(v.get<long long>()));
  }
  if (!v.is_array()) fail(where, "expected a coefficient array");
  std::vector<ffield::FqElem> coeffs;
  for (std::size_t i = 0; i < v.size(); ++i) {
    coeffs.push_back(parse_elem(F, v[i], where + "[" + std::to_string(i) + "]"));
  }
  return ffield::p_from_coeffs(F, coeffs);
}

json dump_poly(const ffield::Fq& F, const ffield::Poly& p) {
  json arr = json::array();
  for (std::size_t i = 0; i < p.len; ++i) {
    arr.push_back(dump_elem(F, ffield::p_coeff(F, p, i)));
  }
  return arr;
}

ffield::RationalFunction parse_ratfun(const ffield::Fq& F, const json& v,
                                      const std::string& where) {
  if (v.is_number_integer() || v.is_array()) {
    return ffield::rf_from_poly(F, parse_poly(F, v, where));
  }
  if (!v.is_object()) fail(where, "expected a rational function object");
  if (!v.contains("num")) fail(where, "missing field 'num'");
  ffield::Poly num = parse_poly(F, v["num"], where + ".num");
  ffield::Poly den = v.contains("den") ? parse_poly(F, v["den"], where + ".den")
                                       : ffield::p_one(F);
  return ffield::rf_make(F, std::move(num), std::move(den));
}

json dump_ratfun(const ffield::Fq& F, const ffield::RationalFunction& r) {
  json out;
  out["num"] = dump_poly(F, r.num);
  out["den"] = dump_poly(F, r.den);
  return out;
}

json dump_field(const ffield::Fq& F) {
  json out;
  out["p"] = static_cast<long long>(F.p());
  out["d"] = F.degree();
  json mod = json::array();
  for (auto c : F.modulus().c) mod.push_back(static_cast<long long>(c));
  out["modulus"] = mod;
  return out;
}

namespace {

torus::TorusPoint parse_point(const ffield::Fq& F, const json& v, int N,
                              const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != N) {
    fail(where, "expected an array of " + std::to_string(N) + " coordinates");
  }
  // Monomial form when every coordinate is {"c":..., "e":...}.
  bool all_monomial = true;
  for (const auto& c : v) {
    if (!(c.is_object() && c.contains("c") && c.contains("e"))) {
      all_monomial = false;
      break;
    }
  }
  if (all_monomial) {
    std::vector<torus::MonomialCoord> coords;
    for (std::size_t i = 0; i < v.size(); ++i) {
      torus::MonomialCoord mc;
      mc.c = parse_elem(F, v[i]["c"], where + "[" + std::to_string(i) + "].c");
      mc.e = parse_mpz(v[i]["e"], where + "[" + std::to_string(i) + "].e");
      coords.push_back(std::move(mc));
    }
    return torus::TorusPoint::monomial(std::move(coords));
  }
  std::vector<ffield::RationalFunction> coords;
  for (std::size_t i = 0; i < v.size(); ++i) {
    coords.push_back(parse_ratfun(F, v[i], where + "[" + std::to_string(i) + "]"));
  }
  return torus::TorusPoint::general(std::move(coords));
}

}  // namespace

TorusInstance parse_torus_instance(const json& v) {
  const std::string where = "instance";
  const long long p = get_int_field(v, "p", where);
  const long long d = v.contains("ext_degree") ? get_int(v["ext_degree"], where)
                                               : 1;
  const long long fseed = v.contains("ext_seed") ? get_int(v["ext_seed"], where) : 0;
  if (p < 2) fail(where, "characteristic must be at least 2");
  if (d < 1) fail(where, "ext_degree must be at least 1");
  ffield::Fq F = ffield::make_extension(static_cast<std::uint64_t>(p),
                                        static_cast<unsigned>(d),
                                        static_cast<std::uint64_t>(fseed));

  const int N = static_cast<int>(get_int_field(v, "N", where));
  if (N < 1 || N > 16) fail(where, "N must lie in [1, 16]");

  torus::TorusMap phi;
  phi.N = N;
  if (!v.contains("A") || !v["A"].is_array()) fail(where, "missing matrix A");
  for (const auto& row : v["A"]) {
    std::vector<long long> r;
    for (const auto& x : row) r.push_back(get_int(x, where + ".A"));
    phi.A.push_back(std::move(r));
  }
  if (!v.contains("beta")) fail(where, "missing translation beta");
  phi.beta = parse_point(F, v["beta"], N, where + ".beta");

  if (!v.contains("alpha")) fail(where, "missing start point alpha");
  torus::TorusPoint alpha = parse_point(F, v["alpha"], N, where + ".alpha");

  if (!v.contains("variety") || !v["variety"].is_object()) {
    fail(where, "missing variety");
  }
  const json& vv = v["variety"];
  torus::LaurentVariety V;
  V.N = N;
  V.dim_hint = static_cast<int>(get_int_field(vv, "dim", where + ".variety"));
  if (!vv.contains("polys") || !vv["polys"].is_array()) {
    fail(where + ".variety", "missing polys");
  }
  for (const auto& pj : vv["polys"]) {
    torus::LaurentPoly poly;
    const json& terms = pj.is_object() && pj.contains("terms") ? pj["terms"] : pj;
    if (!terms.is_array()) fail(where + ".variety.polys", "expected term arrays");
    for (const auto& tj : terms) {
      torus::LaurentTerm term;
      if (!tj.contains("coeff") || !tj.contains("exponents")) {
        fail(where + ".variety.polys", "terms need 'coeff' and 'exponents'");
      }
      term.coeff = parse_ratfun(F, tj["coeff"], where + ".variety.coeff");
      for (const auto& e : tj["exponents"]) {
        term.exponents.push_back(get_int(e, where + ".variety.exponents"));
      }
      poly.terms.push_back(std::move(term));
    }
    V.polys.push_back(std::move(poly));
  }

  const long long M = get_int_field(v, "M", where);
  torus::ScanMode mode = torus::ScanMode::exact;
  if (v.contains("mode")) {
    const std::string m = v["mode"].get<std::string>();
    if (m == "exact") {
      mode = torus::ScanMode::exact;
    } else if (m == "montecarlo") {
      mode = torus::ScanMode::montecarlo;
    } else {
      fail(where, "mode must be 'exact' or 'montecarlo'");
    }
  }
  return TorusInstance{std::move(F), std::move(phi), std::move(alpha),
                       std::move(V), M, mode};
}

json dump_return_result(const torus::ReturnSetResult& r, long long M) {
  json out;
  out["ns"] = r.ns;
  out["M"] = M;
  out["mode"] = torus::to_string(r.mode);
  out["representation"] = torus::to_string(r.representation);
  out["error_bound"] = r.error_bound;
  if (r.mode == torus::ScanMode::montecarlo) {
    out["per_trial_ratio"] = r.per_trial_ratio;
    out["trials"] = r.trials;
    out["spec_field_degree"] = r.spec_field_degree;
  }
  return out;
}

recseq::LinRec parse_linrec(const json& v, const std::string& where) {
  if (!v.is_object() || !v.contains("terms") || !v["terms"].is_array()) {
    fail(where, "expected {terms: [...]}");
  }
  std::vector<recseq::LinRecTerm> terms;
  for (std::size_t i = 0; i < v["terms"].size(); ++i) {
    const json& tj = v["terms"][i];
    const std::string twhere = where + ".terms[" + std::to_string(i) + "]";
    recseq::LinRecTerm t;
    if (!tj.contains("q_coeffs") || !tj["q_coeffs"].is_array()) {
      fail(twhere, "missing q_coeffs array");
    }
    for (const auto& c : tj["q_coeffs"]) {
      t.q.c.push_back(parse_mpq(c, twhere + ".q_coeffs"));
    }
    t.q = qpoly::normalize(std::move(t.q));
    if (!tj.contains("mu")) fail(twhere, "missing mu");
    t.mu = parse_mpz(tj["mu"], twhere + ".mu");
    terms.push_back(std::move(t));
  }
  return recseq::make_linrec(std::move(terms));
}

json dump_linrec(const recseq::LinRec& u) {
  json terms = json::array();
  for (const auto& t : u.terms) {
    json tj;
    json qc = json::array();
    for (const auto& c : t.q.c) qc.push_back(dump_mpq(c));
    tj["q_coeffs"] = qc;
    tj["mu"] = dump_mpz(t.mu);
    terms.push_back(tj);
  }
  json out;
  out["terms"] = terms;
  return out;
}

polyexp::PolyExpEquation parse_equation(const json& v, const std::string& where) {
  polyexp::PolyExpEquation eq;
  if (!v.contains("lhs")) fail(where, "missing lhs");
  eq.lhs = parse_linrec(v["lhs"], where + ".lhs");
  if (!v.contains("rhs") || !v["rhs"].is_array()) fail(where, "missing rhs array");
  for (std::size_t i = 0; i < v["rhs"].size(); ++i) {
    const json& rj = v["rhs"][i];
    const std::string rwhere = where + ".rhs[" + std::to_string(i) + "]";
    polyexp::RhsUnknown u;
    u.a = get_int_field(rj, "a", rwhere);
    if (rj.contains("terms")) {
      for (const auto& tj : rj["terms"]) {
        polyexp::Coupling c;
        c.c = parse_mpq(tj["c"], rwhere + ".terms.c");
        c.lambda = parse_mpz(tj["lambda"], rwhere + ".terms.lambda");
        u.terms.push_back(std::move(c));
      }
    } else {
      polyexp::Coupling c;
      if (!rj.contains("c") || !rj.contains("lambda")) {
        fail(rwhere, "need either 'terms' or 'c'/'lambda'");
      }
      c.c = parse_mpq(rj["c"], rwhere + ".c");
      c.lambda = parse_mpz(rj["lambda"], rwhere + ".lambda");
      u.terms.push_back(std::move(c));
    }
    eq.rhs.push_back(std::move(u));
  }
  if (v.contains("meta") && v["meta"].contains("dimV")) {
    eq.dim_v = static_cast<int>(get_int(v["meta"]["dimV"], where + ".meta.dimV"));
  }
  polyexp::validate(eq);
  return eq;
}

json dump_equation(const polyexp::PolyExpEquation& eq) {
  json out;
  out["lhs"] = dump_linrec(eq.lhs);
  json rhs = json::array();
  for (const auto& u : eq.rhs) {
    json uj;
    uj["a"] = u.a;
    if (u.terms.size() == 1) {
      uj["c"] = dump_mpq(u.terms[0].c);
      uj["lambda"] = dump_mpz(u.terms[0].lambda);
    } else {
      json terms = json::array();
      for (const auto& t : u.terms) {
        json tj;
        tj["c"] = dump_mpq(t.c);
        tj["lambda"] = dump_mpz(t.lambda);
        terms.push_back(tj);
      }
      uj["terms"] = terms;
    }
    rhs.push_back(uj);
  }
  out["rhs"] = rhs;
  if (eq.dim_v >= 0) out["meta"] = json{{"dimV", eq.dim_v}};
  return out;
}

json dump_solution_set(const polyexp::SolutionSet& s) {
  json out;
  json sols = json::array();
  for (const auto& sol : s.solutions) {
    json sj;
    sj["n"] = sol.n;
    sj["k"] = sol.k;
    sols.push_back(sj);
  }
  out["solutions"] = sols;
  out["complete_up_to"] = json{{"M", s.complete_up_to_m}, {"K_max", s.complete_up_to_k}};
  out["classification"] = polyexp::to_string(s.classification);
  return out;
}

json dump_reduced_equation(const polyexp::ReducedEquation& rq) {
  json out;
  json qc = json::array();
  for (const auto& c : rq.Q.c) qc.push_back(dump_mpq(c));
  out["Q_coeffs"] = qc;
  json terms = json::array();
  for (const auto& t : rq.terms) {
    json tj;
    tj["d"] = dump_mpq(t.d);
    tj["base"] = dump_mpz(t.base);
    tj["unknown"] = t.unknown;
    tj["B"] = dump_mpz(t.B);
    terms.push_back(tj);
  }
  out["terms"] = terms;
  out["allow_negative"] = rq.allow_negative;
  out["E"] = rq.E;
  out["residues"] = rq.residues;
  out["b"] = dump_mpz(rq.b);
  out["n_stride"] = rq.n_stride;
  out["n_offset"] = rq.n_offset;
  return out;
}

json dump_reduction(const polyexp::Reduction& red) {
  json out;
  out["classification"] = polyexp::to_string(red.classification);
  json branches = json::array();
  for (const auto& br : red.branches) {
    json bj;
    bj["sigma1"] = br.sigma1;
    json s2 = json::array();
    for (const auto& [i, j] : br.sigma2) s2.push_back(json::array({i, j}));
    bj["sigma2"] = s2;
    bj["kind"] = polyexp::to_string(br.kind);
    json basis = json::array();
    for (const auto& vec : br.lattice.basis) {
      json row = json::array();
      for (const auto& x : vec) row.push_back(dump_mpz(x));
      basis.push_back(row);
    }
    bj["lattice"] = json{{"dim", br.lattice.dim}, {"basis", basis}};
    if (!br.reduced.empty()) {
      json rs = json::array();
      for (const auto& rq : br.reduced) rs.push_back(dump_reduced_equation(rq));
      bj["reduced"] = rs;
    }
    if (!br.note.empty()) bj["note"] = br.note;
    branches.push_back(bj);
  }
  out["branches"] = branches;
  return out;
}

json dump_reduced_report(const polyexp::ReducedSolveReport& rep) {
  json out;
  out["solve"] = dump_solution_set(rep.sols);
  out["g_bound"] = rep.g_bound;
  out["fitted"] = json{{"a1", rep.fitted.a1}, {"a2", rep.fitted.a2},
                       {"points", rep.fitted.points}};
  return out;
}

json dump_profile(const std::vector<polyexp::ProfileRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back(json{{"M", r.M}, {"count", r.count}, {"ratio", r.ratio}});
  }
  return out;
}

structure::DecomposeParams parse_decompose_params(const json& v) {
  structure::DecomposeParams params;
  if (v.contains("a_max")) params.a_max = get_int(v["a_max"], "a_max");
  if (v.contains("window_fraction")) {
    params.window_fraction = parse_mpq(v["window_fraction"], "window_fraction");
  }
  if (v.contains("min_members")) {
    params.min_members = static_cast<int>(get_int(v["min_members"], "min_members"));
  }
  return params;
}

json dump_decomposition(const structure::ReturnSetDecomposition& d) {
  json out;
  out["M"] = d.M;
  json progs = json::array();
  for (const auto& p : d.progressions) {
    progs.push_back(json{{"a", p.a}, {"b", p.b}, {"onset", p.onset}});
  }
  out["progressions"] = progs;
  out["singletons"] = d.singletons;
  out["sparse"] = d.sparse;
  out["provenance"] =
      json{{"a_max", d.provenance.a_max},
           {"window_fraction", dump_mpq(d.provenance.window_fraction)},
           {"min_members", d.provenance.min_members}};
  return out;
}

structure::PForm parse_pform(const json& v, const std::string& where) {
  structure::PForm f;
  f.m = static_cast<int>(get_int_field(v, "m", where));
  f.p = static_cast<unsigned long long>(get_int_field(v, "p", where));
  if (!v.contains("c") || !v["c"].is_array()) fail(where, "missing c array");
  for (const auto& c : v["c"]) f.c.push_back(parse_mpq(c, where + ".c"));
  if (!v.contains("a") || !v["a"].is_array()) fail(where, "missing a array");
  for (const auto& a : v["a"]) f.a.push_back(get_int(a, where + ".a"));
  structure::validate(f);
  return f;
}

json dump_certify(const structure::CertifyReport& rep) {
  json out;
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back(json{{"M", r.M}, {"count", r.count}, {"ratio", r.ratio},
                        {"A_min", r.a_min}});
  }
  out["rows"] = rows;
  out["verdict"] = structure::to_string(rep.verdict);
  out["growth_tolerance"] = rep.growth_tolerance;
  return out;
}

std::string profile_csv(const structure::CertifyReport& rep) {
  std::string out = "M,count,ratio,A_min\n";
  for (const auto& r : rep.rows) {
    out += std::to_string(r.M) + "," + std::to_string(r.count) + "," +
           fmt_double(r.ratio) + "," + fmt_double(r.a_min) + "\n";
  }
  return out;
}

std::string profile_csv(const std::vector<polyexp::ProfileRow>& rows) {
  std::string out = "M,count,ratio,A_min\n";
  double a_min = 0.0;
  for (const auto& r : rows) {
    a_min = std::max(a_min, r.ratio);
    out += std::to_string(r.M) + "," + std::to_string(r.count) + "," +
           fmt_double(r.ratio) + "," + fmt_double(a_min) + "\n";
  }
  return out;
}

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

}  // namespace retset::json_io

#pragma once

// JSON schemas for instances and reports, plus CSV profile output. All
// serialization is deterministic: ordered keys, no timestamps.

#include <json.hpp>

#include <string>
#include <vector>

#include "retset/errors.hpp"
#include "retset/ffield.hpp"
#include "retset/polyexp.hpp"
#include "retset/recseq.hpp"
#include "retset/structure.hpp"
#include "retset/torus.hpp"

namespace retset::json_io {

using json = nlohmann::ordered_json;

// Numbers may be JSON integers or "num/den" strings.
mpq_class parse_mpq(const json& v, const std::string& where);
mpz_class parse_mpz(const json& v, const std::string& where);
json dump_mpq(const mpq_class& v);
json dump_mpz(const mpz_class& v);

// Field elements: plain residue when d == 1, coefficient array otherwise.
ffield::FqElem parse_elem(const ffield::Fq& F, const json& v,
                          const std::string& where);
json dump_elem(const ffield::Fq& F, const ffield::FqElem& e);

// Polynomials over F_q are coefficient arrays; rational functions are
// {"num": [...], "den": [...]} with den defaulting to 1, or a bare constant.
ffield::Poly parse_poly(const ffield::Fq& F, const json& v,
                        const std::string& where);
json dump_poly(const ffield::Fq& F, const ffield::Poly& p);
ffield::RationalFunction parse_ratfun(const ffield::Fq& F, const json& v,
                                      const std::string& where);
json dump_ratfun(const ffield::Fq& F, const ffield::RationalFunction& r);

json dump_field(const ffield::Fq& F);  // {p, d, modulus}

struct TorusInstance {
  ffield::Fq F;
  torus::TorusMap phi;
  torus::TorusPoint alpha;
  torus::LaurentVariety V;
  long long M = 0;
  torus::ScanMode mode = torus::ScanMode::exact;
};

TorusInstance parse_torus_instance(const json& v);
json dump_return_result(const torus::ReturnSetResult& r, long long M);

recseq::LinRec parse_linrec(const json& v, const std::string& where);
json dump_linrec(const recseq::LinRec& u);

polyexp::PolyExpEquation parse_equation(const json& v, const std::string& where);
json dump_equation(const polyexp::PolyExpEquation& eq);
json dump_solution_set(const polyexp::SolutionSet& s);
json dump_reduction(const polyexp::Reduction& red);
json dump_reduced_equation(const polyexp::ReducedEquation& rq);
json dump_reduced_report(const polyexp::ReducedSolveReport& rep);
json dump_profile(const std::vector<polyexp::ProfileRow>& rows);

structure::DecomposeParams parse_decompose_params(const json& v);
json dump_decomposition(const structure::ReturnSetDecomposition& d);
structure::PForm parse_pform(const json& v, const std::string& where);
json dump_certify(const structure::CertifyReport& rep);

// CSV with header "M,count,ratio,A_min"; ratio/A_min use %.12g, '.' decimal.
std::string profile_csv(const structure::CertifyReport& rep);
std::string profile_csv(const std::vector<polyexp::ProfileRow>& rows);

// FNV-1a 64 over raw bytes, as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace retset::json_io

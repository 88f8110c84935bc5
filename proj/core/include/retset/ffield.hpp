#pragma once

// Exact arithmetic in F_p, its extensions F_{p^d}, the polynomial ring
// F_q[t] and the rational function field F_q(t).
//
// An extension field is F_p[x]/(modulus); elements are fixed-width
// little-endian coefficient vectors of length d. Polynomials over F_q are
// stored flat (d words per coefficient slot) so the orbit scans never
// allocate per coefficient.

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "retset/errors.hpp"

namespace retset::ffield {

bool is_prime_u64(std::uint64_t n);

// ---------------------------------------------------------------------------
// Polynomials over the prime field F_p (modulus representation, embeddings).
// Little-endian, normalized: no trailing zeros, zero polynomial is empty.

struct FpPoly {
  std::vector<std::uint64_t> c;

  bool operator==(const FpPoly&) const = default;
  bool is_zero() const { return c.empty(); }
  long long deg() const { return static_cast<long long>(c.size()) - 1; }
};

FpPoly fp_normalize(FpPoly a);
FpPoly fp_add(std::uint64_t p, const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(std::uint64_t p, const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(std::uint64_t p, const FpPoly& a, const FpPoly& b);
// Requires b != 0. Returns (quotient, remainder).
std::pair<FpPoly, FpPoly> fp_divrem(std::uint64_t p, const FpPoly& a,
                                    const FpPoly& b);
FpPoly fp_mod(std::uint64_t p, const FpPoly& a, const FpPoly& b);
FpPoly fp_gcd(std::uint64_t p, FpPoly a, FpPoly b);  // monic
FpPoly fp_monic(std::uint64_t p, FpPoly a);
// t^(p^k) mod m, by k rounds of p-th powering.
FpPoly fp_pow_t_pk(std::uint64_t p, unsigned k, const FpPoly& m);
bool fp_rabin_irreducible(std::uint64_t p, const FpPoly& m);
std::string fp_to_string(const FpPoly& a);

// ---------------------------------------------------------------------------
// The field F_q, q = p^d.

struct FqElem {
  // Width-d little-endian coefficients over F_p; all-zero means 0.
  std::vector<std::uint64_t> v;

  bool operator==(const FqElem&) const = default;
};

class Fq {
 public:
  explicit Fq(std::uint64_t p);          // prime field, modulus t
  Fq(std::uint64_t p, FpPoly modulus);   // modulus monic irreducible

  std::uint64_t p() const { return p_; }
  unsigned degree() const { return d_; }
  const FpPoly& modulus() const { return modulus_; }
  const mpz_class& order() const { return order_; }

  FqElem zero() const;
  FqElem one() const;
  FqElem from_int(long long v) const;
  FqElem from_coeffs(const std::vector<long long>& coeffs) const;
  // The residue class of x (the extension generator); equals 0 when d == 1.
  FqElem gen() const;

  bool is_zero(const FqElem& a) const;
  bool is_one(const FqElem& a) const;
  FqElem add(const FqElem& a, const FqElem& b) const;
  FqElem sub(const FqElem& a, const FqElem& b) const;
  FqElem neg(const FqElem& a) const;
  FqElem mul(const FqElem& a, const FqElem& b) const;
  FqElem inv(const FqElem& a) const;  // throws ValidationError on 0
  FqElem div(const FqElem& a, const FqElem& b) const;
  // a^e; e < 0 requires a != 0.
  FqElem pow(const FqElem& a, const mpz_class& e) const;
  // a^(e mod (q-1)) for a != 0; the right notion for huge monomial exponents.
  FqElem pow_mod_order(const FqElem& a, const mpz_class& e) const;
  // a^(p^e)
  FqElem frobenius(const FqElem& a, std::uint64_t e) const;
  FqElem sample(std::mt19937_64& rng) const;
  std::string to_string(const FqElem& a) const;

  // Flat-span kernel: each argument points at d consecutive words.
  void span_clear(std::uint64_t* dst) const;
  void span_set(std::uint64_t* dst, const std::uint64_t* src) const;
  bool span_is_zero(const std::uint64_t* a) const;
  void span_add(const std::uint64_t* a, const std::uint64_t* b,
                std::uint64_t* out) const;
  void span_sub(const std::uint64_t* a, const std::uint64_t* b,
                std::uint64_t* out) const;
  void span_neg(const std::uint64_t* a, std::uint64_t* out) const;
  // out = a*b; scratch must hold 2d words; out may not alias a or b.
  void span_mul(const std::uint64_t* a, const std::uint64_t* b,
                std::uint64_t* out, std::uint64_t* scratch) const;
  // acc += a*b; scratch must hold 3d words.
  void span_addmul(std::uint64_t* acc, const std::uint64_t* a,
                   const std::uint64_t* b, std::uint64_t* scratch) const;

 private:
  std::uint64_t p_;
  unsigned d_;
  FpPoly modulus_;  // monic, degree d_
  mpz_class order_;
};

// Deterministic seeded construction of F_{p^d}: scans seeded pseudo-random
// monic candidates under the Rabin irreducibility test. d == 1 yields the
// canonical modulus t.
Fq make_extension(std::uint64_t p, unsigned d, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Dense polynomials over F_q in the transcendental t.

struct Poly {
  std::vector<std::uint64_t> flat;  // len * F.degree() words
  std::size_t len = 0;              // coefficient slots; 0 means zero poly

  bool operator==(const Poly&) const = default;
  bool is_zero() const { return len == 0; }
  long long deg() const { return static_cast<long long>(len) - 1; }
};

Poly p_zero();
Poly p_one(const Fq& F);
Poly p_t(const Fq& F);
Poly p_const(const Fq& F, const FqElem& c);
Poly p_from_coeffs(const Fq& F, const std::vector<FqElem>& coeffs);
FqElem p_coeff(const Fq& F, const Poly& a, std::size_t i);
FqElem p_lead(const Fq& F, const Poly& a);
void p_normalize(const Fq& F, Poly& a);
Poly p_add(const Fq& F, const Poly& a, const Poly& b);
Poly p_sub(const Fq& F, const Poly& a, const Poly& b);
Poly p_neg(const Fq& F, const Poly& a);
Poly p_mul(const Fq& F, const Poly& a, const Poly& b,
           WorkBudget* budget = nullptr);
Poly p_mul_scalar(const Fq& F, const Poly& a, const FqElem& s);
Poly p_shift(const Fq& F, const Poly& a, std::size_t k);  // * t^k
std::pair<Poly, Poly> p_divrem(const Fq& F, const Poly& a, const Poly& b,
                               WorkBudget* budget = nullptr);
Poly p_mod(const Fq& F, const Poly& a, const Poly& b,
           WorkBudget* budget = nullptr);
Poly p_gcd(const Fq& F, Poly a, Poly b, WorkBudget* budget = nullptr);
Poly p_monic(const Fq& F, Poly a);
Poly p_pow(const Fq& F, const Poly& a, unsigned long e,
           WorkBudget* budget = nullptr);
Poly p_powmod(const Fq& F, Poly base, const mpz_class& e, const Poly& mod,
              WorkBudget* budget = nullptr);
FqElem p_eval(const Fq& F, const Poly& a, const FqElem& x);
std::string p_to_string(const Fq& F, const Poly& a);

// ---------------------------------------------------------------------------
// K = F_q(t). Canonical form: den monic, gcd(num, den) = 1, zero is 0/1.

struct RationalFunction {
  Poly num;
  Poly den;

  bool operator==(const RationalFunction&) const = default;
  bool is_zero() const { return num.is_zero(); }
};

RationalFunction rf_make(const Fq& F, Poly num, Poly den,
                         WorkBudget* budget = nullptr);
RationalFunction rf_zero(const Fq& F);
RationalFunction rf_one(const Fq& F);
RationalFunction rf_t(const Fq& F);
RationalFunction rf_from_elem(const Fq& F, const FqElem& c);
RationalFunction rf_from_poly(const Fq& F, Poly num);
bool rf_is_one(const Fq& F, const RationalFunction& a);
RationalFunction rf_add(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget = nullptr);
RationalFunction rf_sub(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget = nullptr);
RationalFunction rf_mul(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget = nullptr);
RationalFunction rf_div(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget = nullptr);
RationalFunction rf_inv(const Fq& F, const RationalFunction& a);
RationalFunction rf_neg(const Fq& F, const RationalFunction& a);
RationalFunction rf_pow(const Fq& F, const RationalFunction& a, long long e,
                        WorkBudget* budget = nullptr);
// (num/den)^(p^e): coefficientwise p^e-th powers with exponent stride p^e.
// Throws ResourceError if the dense result would exceed max_coeffs slots.
RationalFunction rf_frobenius(const Fq& F, const RationalFunction& a,
                              std::uint64_t e, std::size_t max_coeffs);
// deg num + deg den; 0 for the zero function.
long long rf_deg_bound(const RationalFunction& a);
std::string rf_to_string(const Fq& F, const RationalFunction& a);

// x^(p^e) dispatcher matching the field op naming.
FqElem frobenius(const Fq& F, const FqElem& a, std::uint64_t e);
RationalFunction frobenius(const Fq& F, const RationalFunction& a,
                           std::uint64_t e, std::size_t max_coeffs = 1u << 22);

// ---------------------------------------------------------------------------
// Subfield embeddings and specialization support.

// A root in `target` of a monic polynomial f over F_p that splits there
// (deg f must divide target.degree()). Cantor-Zassenhaus equal-degree
// splitting; deterministic for a fixed rng state.
FqElem find_root(const Fq& target, const FpPoly& f_over_fp,
                 std::mt19937_64& rng);

// Image in `dst` of an element of `src` = F_p[x]/(m), given a root of m in
// dst. src.degree() must divide dst.degree().
FqElem embed(const Fq& src, const Fq& dst, const FqElem& a,
             const FqElem& gen_image);

// Evaluate a rational function at t = tau with coefficients embedded via
// gen_image. Throws BadSpecialization when the denominator vanishes.
FqElem rf_specialize(const Fq& src, const RationalFunction& a, const Fq& dst,
                     const FqElem& tau, const FqElem& gen_image);

}  // namespace retset::ffield

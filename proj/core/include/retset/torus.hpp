#pragma once

// The algebraic torus G_m^N over F_q(t): regular self-maps (monomial action
// composed with a translation), points in three representations, Laurent
// subvarieties, and exact or Monte Carlo return-set scans.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "retset/errors.hpp"
#include "retset/ffield.hpp"

namespace retset::torus {

// c * t^e with c a nonzero constant and e an arbitrary integer.
struct MonomialCoord {
  ffield::FqElem c;
  mpz_class e;

  bool operator==(const MonomialCoord&) const = default;
};

enum class Rep { monomial, general, specialized };
std::string to_string(Rep r);

struct TorusPoint {
  Rep rep = Rep::general;
  std::vector<MonomialCoord> mono;                 // rep == monomial
  std::vector<ffield::RationalFunction> gen;       // rep == general
  std::vector<ffield::FqElem> spec;                // rep == specialized

  int dim() const;
  static TorusPoint monomial(std::vector<MonomialCoord> coords);
  static TorusPoint general(std::vector<ffield::RationalFunction> coords);
  static TorusPoint specialized(std::vector<ffield::FqElem> coords);
};

// Coordinate i maps to prod_j x_j^{A[i][j]} * beta_i.
struct TorusMap {
  int N = 0;
  std::vector<std::vector<long long>> A;
  TorusPoint beta;
};

// det(A) != 0 and beta on the torus; throws ValidationError otherwise.
void validate(const ffield::Fq& F, const TorusMap& phi);
void validate_point(const ffield::Fq& F, const TorusPoint& P, int N);
mpz_class det(const std::vector<std::vector<long long>>& A);

struct LaurentTerm {
  ffield::RationalFunction coeff;    // nonzero
  std::vector<long long> exponents;  // length N, negative allowed
};

struct LaurentPoly {
  std::vector<LaurentTerm> terms;  // nonempty
};

struct LaurentVariety {
  int N = 0;
  std::vector<LaurentPoly> polys;  // each nonzero
  int dim_hint = 0;                // declared dim V
};

void validate(const ffield::Fq& F, const LaurentVariety& V);

// ---------------------------------------------------------------------------

TorusPoint apply_map(const ffield::Fq& F, const TorusMap& phi,
                     const TorusPoint& P, WorkBudget* budget = nullptr);

bool on_variety(const ffield::Fq& F, const LaurentVariety& V,
                const TorusPoint& P, WorkBudget* budget = nullptr);

// Conversion helpers. A general coordinate is monomial-representable when
// num = c*t^a and den = t^b.
std::optional<MonomialCoord> to_monomial(const ffield::Fq& F,
                                         const ffield::RationalFunction& x);
ffield::RationalFunction to_general(const ffield::Fq& F, const MonomialCoord& c);
TorusPoint point_to_general(const ffield::Fq& F, const TorusPoint& P);
std::optional<TorusPoint> point_to_monomial(const ffield::Fq& F,
                                            const TorusPoint& P);

// ---------------------------------------------------------------------------
// Specialization t -> tau into a finite field extension.

struct Specialization {
  const ffield::Fq* src = nullptr;
  const ffield::Fq* dst = nullptr;
  ffield::FqElem tau;
  ffield::FqElem gen_image;  // image of the coefficient-field generator
};

ffield::FqElem specialize(const Specialization& S,
                          const ffield::RationalFunction& x);
ffield::FqElem specialize(const Specialization& S, const MonomialCoord& x);
TorusPoint specialize(const Specialization& S, const TorusPoint& P);
TorusMap specialize(const Specialization& S, const TorusMap& phi);

struct SpecializedTerm {
  ffield::FqElem coeff;
  std::vector<long long> exponents;
};

struct SpecializedVariety {
  int N = 0;
  std::vector<std::vector<SpecializedTerm>> polys;
};

SpecializedVariety specialize(const Specialization& S, const LaurentVariety& V);

bool on_variety_specialized(const ffield::Fq& dst, const SpecializedVariety& V,
                            const TorusPoint& P);

// ---------------------------------------------------------------------------
// Return sets

enum class ScanMode { exact, montecarlo };
std::string to_string(ScanMode m);

struct ReturnSetOptions {
  // Coefficient operations allowed per step (membership test plus map
  // application) in exact general mode.
  std::uint64_t exact_step_budget = 1ull << 22;
  int mc_trials = 3;
  // Per-trial false positive probability target: degree / field size.
  double mc_per_trial_error = 9.5367431640625e-07;  // 2^-20
  unsigned mc_max_field_degree = 512;
  int mc_max_retries = 24;
  std::uint64_t seed = 0;
};

struct ReturnSetResult {
  std::vector<long long> ns;  // sorted, duplicate-free, within [0, M]
  ScanMode mode = ScanMode::exact;
  Rep representation = Rep::general;
  // Monte Carlo only: per-candidate false positive bound (all trials) and
  // the per-trial degree/field-size ratio.
  double error_bound = 0.0;
  double per_trial_ratio = 0.0;
  int trials = 0;
  unsigned spec_field_degree = 0;
  std::uint64_t seed = 0;
};

// The set {0 <= n <= M : Phi^n(alpha) in V}. Exact mode scans with monomial
// exponent tracking when possible, dense rational arithmetic otherwise
// (ResourceError recommending montecarlo when the step budget trips).
// Monte Carlo mode runs independent Schwartz-Zippel specializations with
// one-sided error: no false negatives, and a candidate is accepted only if
// it passes every trial.
ReturnSetResult return_set(const ffield::Fq& F, const TorusMap& phi,
                           const TorusPoint& alpha, const LaurentVariety& V,
                           long long M, ScanMode mode,
                           const ReturnSetOptions& opts = {});

// Degree bound of the membership polynomial maximized over steps 0..M;
// drives the Monte Carlo field-size choice.
mpz_class projected_membership_degree(const ffield::Fq& F, const TorusMap& phi,
                                      const TorusPoint& alpha,
                                      const LaurentVariety& V, long long M);

struct OrbitRow {
  long long n = 0;
  std::vector<std::string> coords;
  bool in_variety = false;
};

std::vector<OrbitRow> orbit(const ffield::Fq& F, const TorusMap& phi,
                            const TorusPoint& alpha, const LaurentVariety& V,
                            long long steps, WorkBudget* budget = nullptr);

}  // namespace retset::torus

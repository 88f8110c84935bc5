#pragma once

// Polynomial-exponential Diophantine solvers and the subsum reduction
// pipeline: digit-partition solving, bounded enumeration, relation-lattice
// classification into finiteness / Case 1 / Case 2 branches, reduced-form
// solving with exponent bounds, and counting profiles.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "retset/errors.hpp"
#include "retset/mullat.hpp"
#include "retset/qpoly.hpp"
#include "retset/recseq.hpp"

namespace retset::polyexp {

struct Coupling {
  mpq_class c;        // nonzero
  mpz_class lambda;   // |lambda| > 1

  bool operator==(const Coupling&) const = default;
};

// One unknown k_i with its coupled terms sum_j c_{i,j} lambda_j^{a_i k_i}.
struct RhsUnknown {
  long long a = 1;  // a_i >= 1
  std::vector<Coupling> terms;

  bool operator==(const RhsUnknown&) const = default;
};

struct PolyExpEquation {
  recseq::LinRec lhs;
  std::vector<RhsUnknown> rhs;  // unknowns k_1..k_m, m >= 1
  int dim_v = -1;               // metadata: m <= dim V when nonnegative

  int m() const { return static_cast<int>(rhs.size()); }
};

void validate(const PolyExpEquation& eq);

enum class Classification { finite, case1, case2, mixed };
std::string to_string(Classification c);

struct Solution {
  long long n = 0;
  std::vector<long long> k;  // witness exponents (g-vector for reduced forms)

  bool operator==(const Solution&) const = default;
};

struct SolutionSet {
  std::vector<Solution> solutions;  // sorted by (n, k)
  long long complete_up_to_m = 0;
  long long complete_up_to_k = 0;
  Classification classification = Classification::finite;

  std::vector<long long> ns() const;
};

// All n <= M with u_n = sum_i cs_i * q^{k_i} for some k in N_0^m, with the
// lexicographically smallest witness per n. Requires sum(cs) < q/2 (no
// base-q carries), so u_n matches iff its base-q digit vector is exactly
// covered by an assignment of the cs to digit positions.
SolutionSet solve_digit_partition(const recseq::LinRec& u, const mpz_class& q,
                                  const std::vector<mpz_class>& cs, long long M);

struct BoundedOptions {
  std::uint64_t node_budget = 1ull << 26;
};

// Every (n <= M, k with all k_i <= K_max) solving the equation exactly.
// Strictly positive instances use two-sided window peeling on the largest
// term; mixed-sign instances fall back to pruned box enumeration with an
// exact solve of the last unknown.
SolutionSet solve_bounded(const PolyExpEquation& eq, long long M, long long K_max,
                          const BoundedOptions& opts = {});

// ---------------------------------------------------------------------------
// Subsum reduction

struct ReducedTerm {
  mpq_class d;       // nonzero
  mpz_class base;    // |base| >= 2
  int unknown = 0;   // provenance: which original k_i fed this term
  mpz_class B;       // exponent stride B_i (Case 2) or a_i (Case 1)
};

struct ReducedEquation {
  qpoly::QPoly Q;                 // non-constant
  std::vector<ReducedTerm> terms;
  bool allow_negative = false;    // Case 2: g_i = B_i K_i - b n can be < 0
  int E = 1;
  std::vector<int> residues;      // chosen k_i residues mod E (Case 2)
  mpz_class b = 0;                // mu = lambda^b (Case 2)
  // The branch may live on a refined progression n = stride*h + offset.
  long long n_stride = 1;
  long long n_offset = 0;
};

enum class BranchKind {
  finite_trivial_lattice,   // G trivial: finitely many solutions
  finite_multiple_lhs,      // |Sigma_1| >= 2 forces a trivial lattice
  finite_empty_rhs,         // Q(n) mu^n = 0 has finitely many solutions
  case1,
  case2,
};
std::string to_string(BranchKind k);

struct ReductionBranch {
  std::vector<int> sigma1;                    // LHS term indices (0-based)
  std::vector<std::pair<int, int>> sigma2;    // (unknown, coupling) indices
  BranchKind kind;
  mullat::ExponentLattice lattice;
  std::vector<ReducedEquation> reduced;       // one per residue class
  std::string note;
};

struct Reduction {
  std::vector<ReductionBranch> branches;
  Classification classification = Classification::finite;
};

// Enumerates all subsums containing the designated non-constant LHS term and
// classifies each via its relation lattice. Requires a non-degenerate LHS
// whose unit roots equal 1 and at least one non-constant coefficient
// polynomial.
Reduction laurent_reduce(const PolyExpEquation& eq);

struct FittedBound {
  double a1 = 0.0;  // max|g_i| <= a1*log(n) + a2 over solutions with n >= 2
  double a2 = 0.0;
  int points = 0;
};

struct ReducedSolveReport {
  SolutionSet sols;      // witnesses are g-vectors
  long long g_bound = 0; // enumeration bound used
  FittedBound fitted;
};

// Enumerates g with |g_i| <= G(M) (instance-derived bound) and solves
// Q(n) = sum d_i base_i^{g_i} for n in [0, M] by head scan plus monotone
// bracketing.
ReducedSolveReport solve_reduced(const ReducedEquation& req, long long M);

struct ProfileRow {
  long long M = 0;
  long long count = 0;
  double ratio = 0.0;  // count / (1 + log M)^d
};

std::vector<ProfileRow> count_profile(const std::vector<long long>& ns,
                                      const std::vector<long long>& checkpoints,
                                      int d);

}  // namespace retset::polyexp

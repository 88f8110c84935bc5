#pragma once

// Return-set structure analysis: windowed arithmetic-progression detection,
// sparse-residual isolation, counting-bound certification, p-power solution
// forms, and base-p digit combinatorics.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "retset/errors.hpp"

namespace retset::structure {

struct DetectedProgression {
  long long a = 1;      // stride >= 1
  long long b = 0;      // residue, 0 <= b < a
  long long onset = 0;  // least member from which the progression is unbroken

  bool operator==(const DetectedProgression&) const = default;
};

struct DecomposeParams {
  long long a_max = 64;
  mpq_class window_fraction = mpq_class(1, 2);  // in (0, 1)
  int min_members = 3;
};

struct ReturnSetDecomposition {
  long long M = 0;
  std::vector<DetectedProgression> progressions;
  std::vector<long long> singletons;  // degenerate a = 0 progressions
  std::vector<long long> sparse;      // sorted leftover
  DecomposeParams provenance;
};

// Greedy windowed detection: accept (a, b) when every n = b (mod a) inside
// [window_fraction*M, M] lies in the remaining set and the window holds at
// least min_members of them; smaller strides win ties. Accepted members from
// the onset are removed; the leftover is the sparse part.
ReturnSetDecomposition decompose(const std::vector<long long>& S, long long M,
                                 const DecomposeParams& params = {});

enum class Verdict { consistent, inconsistent };
std::string to_string(Verdict v);

struct CertifyRow {
  long long M = 0;
  long long count = 0;
  double ratio = 0.0;  // count / (1 + log M)^d
  double a_min = 0.0;  // running max of ratio
};

struct CertifyReport {
  std::vector<CertifyRow> rows;
  Verdict verdict = Verdict::consistent;
  double growth_tolerance = 2.0;
};

// A_min(M) = max_{M' <= M} count(M')/(1 + log M')^d over the checkpoints;
// consistent iff A_min(last)/A_min(first) <= growth_tolerance.
CertifyReport certify_bound(const std::vector<long long>& sparse, int d,
                            const std::vector<long long>& checkpoints,
                            double growth_tolerance = 2.0);

struct PForm {
  int m = 1;
  std::vector<mpq_class> c;        // length m
  std::vector<long long> a;        // length m, nonnegative
  unsigned long long p = 2;        // prime
};

void validate(const PForm& f);

struct PFormValue {
  long long value = 0;
  std::vector<long long> witness;  // k vector generating the value
};

// All distinct values sum_j c_j p^(a_j k_j) in [0, M], sorted, each with one
// recorded witness. Throws ValidationError when a generated value is not an
// integer.
std::vector<PFormValue> pform_generate(const PForm& f, long long M);

struct PFormMatch {
  bool matched = false;
  std::vector<long long> sym_difference;  // sorted
};

PFormMatch pform_match(const std::vector<long long>& sparse, const PForm& f,
                       long long M);

// Count of n in [1, M] with exactly m nonzero base-p digits (each equal to 1
// when ones_only), by digit dynamic programming.
mpz_class count_nonzero_digits(unsigned long long p, int m, long long M,
                               bool ones_only);

}  // namespace retset::structure

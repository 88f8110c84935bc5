#pragma once

// Linear recurrence sequences over the rationals in exponential-polynomial
// form sum_r Q_r(n) mu_r^n with nonzero integer characteristic roots mu_r.

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "retset/qpoly.hpp"

namespace retset::recseq {

struct LinRecTerm {
  qpoly::QPoly q;  // nonzero
  mpz_class mu;    // nonzero integer

  bool operator==(const LinRecTerm&) const = default;
};

// Canonical: terms sorted by root, roots pairwise distinct, no zero Q.
// An empty term list is the zero sequence.
struct LinRec {
  std::vector<LinRecTerm> terms;

  bool operator==(const LinRec&) const = default;
  bool is_zero() const { return terms.empty(); }
};

// Merges duplicate roots, drops zero polynomials, rejects zero or
// non-integer roots.
LinRec make_linrec(std::vector<LinRecTerm> terms);

mpq_class eval(const LinRec& u, long long n);

struct DegeneracyReport {
  // No ratio of two distinct characteristic roots is a root of unity.
  bool ratios_ok = true;
  // Every root that is a root of unity equals 1 (i.e. -1 is not a root).
  bool unit_roots_one = true;

  bool ok() const { return ratios_ok && unit_roots_one; }
};

DegeneracyReport is_nondegenerate(const LinRec& u);

struct Progression {
  long long a = 1;
  long long b = 0;

  bool operator==(const Progression&) const = default;
};

// Refines u along arithmetic progressions n = a*k + b so that each returned
// subsequence is non-degenerate with every unit root equal to 1. For integer
// roots a stride of 2 always suffices.
std::vector<std::pair<Progression, LinRec>> nondegenerate_split(const LinRec& u);

// From recurrence-coefficient form: char_poly is the monic characteristic
// polynomial (little-endian integer coefficients, leading 1), initial the
// first deg values. Supported only when the characteristic polynomial splits
// into distinct nonzero integer roots; otherwise throws UnsupportedInstance.
LinRec from_recurrence(const std::vector<mpz_class>& char_poly,
                       const std::vector<mpq_class>& initial);

std::string to_string(const LinRec& u);

}  // namespace retset::recseq

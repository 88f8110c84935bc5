#pragma once

// Multiplicative relation lattices among nonzero rationals: exact integer
// kernels of prime-exponent matrices with a sign row, the relation subgroup
// of coupled root/eigenvalue systems, and common-base extraction.

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "retset/errors.hpp"

namespace retset::mullat {

// The two rationals are multiplicatively independent; no common base exists.
class NotDependentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Dependence holds but no exact rational base does (negative value that is
// not an odd power). Callers refine along a parity progression and retry.
class NotRepresentableError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct Factorization {
  int sign = 1;                           // sign of the rational
  std::map<mpz_class, long long> exps;    // prime -> exponent (den negative)
};

Factorization factor_integer(const mpz_class& n);  // n != 0
Factorization factor_rational(const mpq_class& x); // x != 0

// Largest b with |n| = w^b (n with |n| >= 2); returns (w, b), w not a
// perfect power.
std::pair<mpz_class, long long> primitive_power(const mpz_class& n);

struct ExponentLattice {
  int dim = 0;
  std::vector<std::vector<mpz_class>> basis;  // linearly independent rows

  int rank() const { return static_cast<int>(basis.size()); }
  bool trivial() const { return basis.empty(); }
};

// Basis of { e : prod x_i^{e_i} = 1 }, via prime factorization plus a sign
// row handled over Z/2.
ExponentLattice relations_lattice(const std::vector<mpq_class>& xs);

// Hermite-style canonical basis; two lattices are equal iff their canonical
// forms coincide.
std::vector<std::vector<mpz_class>> lattice_canonical(
    std::vector<std::vector<mpz_class>> basis);

// Is v in the lattice spanned by basis (integer combination)?
bool lattice_contains(const ExponentLattice& lat, const std::vector<mpz_class>& v);

struct GPair {
  int unknown = 0;      // which exponent variable f_i the pair constrains
  mpz_class lambda;     // |lambda| > 1
  long long a = 1;      // a >= 1
};

// Lattice of tuples (f_0, f_1, ..., f_m) with mu_r^{f_0} = lambda^{a f_i}
// for every root mu_r and every pair. `m` is the number of distinct
// unknowns; pairs reference unknowns 1..m.
ExponentLattice g_sigma(const std::vector<mpz_class>& mus,
                        const std::vector<GPair>& pairs, int m);

// Convenience: one pair per unknown, in order.
ExponentLattice g_sigma(const std::vector<mpz_class>& mus,
                        const std::vector<std::pair<mpz_class, long long>>& pairs);

struct CommonBasePair {
  int zeta = 1;      // sign, zeta^E = 1
  mpz_class b_i;     // lambda_j^{a_i} = zeta * lambda^{b_i}
  mpz_class B_i;     // E * b_i
};

struct CommonBase {
  mpz_class lambda;  // |lambda| > 1; mu = lambda^b exactly
  mpz_class b;
  std::vector<CommonBasePair> pairs;
  int E = 1;         // 1 or 2 over the rationals
};

// Common multiplicative base of mu and the lambda^a values. mu must not be
// 0 or +-1. Throws NotDependentError when some pair is multiplicatively
// independent of mu, NotRepresentableError when mu < 0 is not an odd power.
CommonBase common_base(const mpz_class& mu,
                       const std::vector<std::pair<mpz_class, long long>>& pairs);

}  // namespace retset::mullat

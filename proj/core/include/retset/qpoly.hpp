#pragma once

// Dense univariate polynomials with rational coefficients. Small utility
// shared by the recurrence and Diophantine modules.

#include <gmpxx.h>

#include <string>
#include <vector>

namespace retset::qpoly {

struct QPoly {
  std::vector<mpq_class> c;  // little-endian, normalized (no zero tail)

  bool operator==(const QPoly&) const = default;
  bool is_zero() const { return c.empty(); }
  long long deg() const { return static_cast<long long>(c.size()) - 1; }
};

QPoly normalize(QPoly a);
QPoly constant(const mpq_class& v);
QPoly identity();  // Q(x) = x
QPoly add(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const mpq_class& s);
QPoly mul(const QPoly& a, const QPoly& b);
// Q(s*x + t)
QPoly compose_affine(const QPoly& a, const mpq_class& s, const mpq_class& t);
mpq_class eval(const QPoly& a, const mpq_class& x);
mpq_class eval(const QPoly& a, long long x);
mpq_class lead(const QPoly& a);
mpq_class max_abs_coeff(const QPoly& a);
std::string to_string(const QPoly& a);

}  // namespace retset::qpoly

#include "retset/recseq.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "retset/errors.hpp"

namespace retset::qpoly {

QPoly normalize(QPoly a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  for (auto& x : a.c) x.canonicalize();
  return a;
}

QPoly constant(const mpq_class& v) {
  QPoly r;
  if (v != 0) r.c = {v};
  return r;
}

QPoly identity() {
  QPoly r;
  r.c = {mpq_class(0), mpq_class(1)};
  return r;
}

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  return normalize(std::move(r));
}

QPoly scale(const QPoly& a, const mpq_class& s) {
  if (s == 0) return {};
  QPoly r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  QPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return normalize(std::move(r));
}

QPoly compose_affine(const QPoly& a, const mpq_class& s, const mpq_class& t) {
  // Horner in (s*x + t).
  QPoly lin;
  lin.c = {t, s};
  lin = normalize(std::move(lin));
  QPoly acc;
  for (std::size_t i = a.c.size(); i-- > 0;) {
    acc = add(mul(acc, lin), constant(a.c[i]));
  }
  return acc;
}

mpq_class eval(const QPoly& a, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t i = a.c.size(); i-- > 0;) acc = acc * x + a.c[i];
  return acc;
}

mpq_class eval(const QPoly& a, long long x) {
  return eval(a, mpq_class(static_cast<long>(x)));
}

mpq_class lead(const QPoly& a) { return a.is_zero() ? mpq_class(0) : a.c.back(); }

mpq_class max_abs_coeff(const QPoly& a) {
  mpq_class best = 0;
  for (const auto& x : a.c) best = std::max(best, mpq_class(abs(x)));
  return best;
}

std::string to_string(const QPoly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = a.c.size(); i-- > 0;) {
    if (a.c[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << a.c[i];
    } else {
      if (a.c[i] != 1) os << "(" << a.c[i] << ")*";
      os << "n";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace retset::qpoly

namespace retset::recseq {

LinRec make_linrec(std::vector<LinRecTerm> terms) {
  std::map<mpz_class, qpoly::QPoly> by_root;
  for (auto& t : terms) {
    if (t.mu == 0) throw ValidationError("linear recurrence root must be nonzero");
    auto it = by_root.find(t.mu);
    qpoly::QPoly q = qpoly::normalize(std::move(t.q));
    if (it == by_root.end()) {
      by_root.emplace(t.mu, std::move(q));
    } else {
      it->second = qpoly::add(it->second, q);
    }
  }
  LinRec u;
  for (auto& [mu, q] : by_root) {
    if (q.is_zero()) continue;
    u.terms.push_back(LinRecTerm{std::move(q), mu});
  }
  return u;
}

mpq_class eval(const LinRec& u, long long n) {
  if (n < 0) throw ValidationError("linear recurrence evaluated at negative index");
  mpq_class acc = 0;
  for (const auto& t : u.terms) {
    mpz_class power;
    mpz_pow_ui(power.get_mpz_t(), t.mu.get_mpz_t(),
               static_cast<unsigned long>(n));
    acc += qpoly::eval(t.q, n) * mpq_class(power);
  }
  return acc;
}

DegeneracyReport is_nondegenerate(const LinRec& u) {
  DegeneracyReport rep;
  for (const auto& t : u.terms) {
    if (t.mu == -1) rep.unit_roots_one = false;
  }
  // Integer roots: mu/mu' is a root of unity iff |mu| == |mu'|, and roots
  // are pairwise distinct, so equal absolute values means mu = -mu'.
  for (std::size_t i = 0; i < u.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < u.terms.size(); ++j) {
      if (abs(u.terms[i].mu) == abs(u.terms[j].mu)) rep.ratios_ok = false;
    }
  }
  return rep;
}

std::vector<std::pair<Progression, LinRec>> nondegenerate_split(const LinRec& u) {
  if (is_nondegenerate(u).ok()) {
    return {{Progression{1, 0}, u}};
  }
  // Stride 2 kills both failure modes over the integers: paired roots
  // (mu, -mu) merge into mu^2 and the unit root -1 becomes 1.
  std::vector<std::pair<Progression, LinRec>> out;
  for (long long b = 0; b < 2; ++b) {
    std::vector<LinRecTerm> terms;
    for (const auto& t : u.terms) {
      mpz_class mu2 = t.mu * t.mu;
      mpz_class mub;  // mu^b
      mpz_pow_ui(mub.get_mpz_t(), t.mu.get_mpz_t(), static_cast<unsigned long>(b));
      qpoly::QPoly q =
          qpoly::compose_affine(t.q, mpq_class(2), mpq_class(static_cast<long>(b)));
      q = qpoly::scale(q, mpq_class(mub));
      terms.push_back(LinRecTerm{std::move(q), std::move(mu2)});
    }
    out.emplace_back(Progression{2, b}, make_linrec(std::move(terms)));
  }
  return out;
}

LinRec from_recurrence(const std::vector<mpz_class>& char_poly,
                       const std::vector<mpq_class>& initial) {
  if (char_poly.size() < 2 || char_poly.back() != 1) {
    throw ValidationError("characteristic polynomial must be monic of degree >= 1");
  }
  const std::size_t k = char_poly.size() - 1;
  if (initial.size() != k) {
    throw ValidationError("need exactly deg(char_poly) initial values");
  }
  if (char_poly[0] == 0) {
    throw UnsupportedInstance("characteristic polynomial has root 0");
  }
  // Distinct integer roots, found by divisor search on the constant term.
  std::vector<mpz_class> work(char_poly);
  std::vector<mpz_class> roots;
  mpz_class c0 = abs(work[0]);
  std::vector<mpz_class> divisors;
  for (mpz_class d = 1; d * d <= c0; ++d) {
    if (c0 % d == 0) {
      divisors.push_back(d);
      divisors.push_back(c0 / d);
    }
  }
  auto try_root = [&](const mpz_class& r) -> bool {
    // Synthetic division; succeeds when the remainder vanishes.
    std::vector<mpz_class> quo(work.size() - 1);
    mpz_class carry = 0;
    for (std::size_t i = work.size(); i-- > 1;) {
      carry = work[i] + carry;
      quo[i - 1] = carry;
      carry *= r;
    }
    if (work[0] + carry != 0) return false;
    work = std::move(quo);
    return true;
  };
  while (work.size() > 1) {
    bool found = false;
    mpz_class cur = abs(work[0]);
    for (const mpz_class& d : divisors) {
      if (d == 0 || cur % d != 0) continue;
      for (int sign : {1, -1}) {
        mpz_class r = d * sign;
        if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
        if (try_root(r)) {
          roots.push_back(r);
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) {
      throw UnsupportedInstance(
          "characteristic polynomial does not split into distinct integer roots");
    }
  }
  if (roots.size() != k) {
    throw UnsupportedInstance("characteristic polynomial has repeated roots");
  }
  // Distinct roots: u_n = sum c_r mu_r^n; solve the Vandermonde system.
  std::vector<std::vector<mpq_class>> m(k, std::vector<mpq_class>(k + 1));
  for (std::size_t row = 0; row < k; ++row) {
    for (std::size_t col = 0; col < k; ++col) {
      mpz_class power;
      mpz_pow_ui(power.get_mpz_t(), roots[col].get_mpz_t(),
                 static_cast<unsigned long>(row));
      m[row][col] = mpq_class(power);
    }
    m[row][k] = initial[row];
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && m[piv][col] == 0) ++piv;
    if (piv == k) throw UnsupportedInstance("singular Vandermonde system");
    std::swap(m[piv], m[col]);
    for (std::size_t row = 0; row < k; ++row) {
      if (row == col || m[row][col] == 0) continue;
      mpq_class f = m[row][col] / m[col][col];
      for (std::size_t j = col; j <= k; ++j) m[row][j] -= f * m[col][j];
    }
  }
  std::vector<LinRecTerm> terms;
  for (std::size_t col = 0; col < k; ++col) {
    mpq_class c = m[col][k] / m[col][col];
    if (c == 0) continue;
    terms.push_back(LinRecTerm{qpoly::constant(c), roots[col]});
  }
  return make_linrec(std::move(terms));
}

std::string to_string(const LinRec& u) {
  if (u.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : u.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << qpoly::to_string(t.q) << ")*" << t.mu.get_str() << "^n";
  }
  return os.str();
}

}  // namespace retset::recseq

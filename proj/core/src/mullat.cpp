#include "retset/mullat.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace retset::mullat {

namespace {

constexpr unsigned long kTrialBound = 1000000;

const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<bool> sieve(kTrialBound + 1, true);
    std::vector<unsigned long> out;
    for (unsigned long i = 2; i <= kTrialBound; ++i) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (unsigned long j = i * i; j <= kTrialBound; j += i) sieve[j] = false;
    }
    return out;
  }();
  return primes;
}

mpz_class pollard_rho(const mpz_class& n, unsigned long c) {
  mpz_class x = 2, y = 2, d = 1;
  while (d == 1) {
    x = (x * x + c) % n;
    y = (y * y + c) % n;
    y = (y * y + c) % n;
    mpz_class diff = x > y ? x - y : y - x;
    if (diff == 0) return 0;
    mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
  }
  return d == n ? 0 : d;
}

void factor_into(mpz_class n, std::map<mpz_class, long long>& out) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
    out[n] += 1;
    return;
  }
  for (unsigned long c = 1;; ++c) {
    if (c > 64) throw ResourceError("factorization did not converge");
    mpz_class d = pollard_rho(n, c);
    if (d != 0) {
      factor_into(d, out);
      factor_into(n / d, out);
      return;
    }
  }
}

}  // namespace

Factorization factor_integer(const mpz_class& n) {
  if (n == 0) throw ValidationError("cannot factor zero");
  Factorization f;
  mpz_class m = n;
  if (m < 0) {
    f.sign = -1;
    m = -m;
  }
  for (unsigned long p : small_primes()) {
    if (m == 1) break;
    if (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      long long e = 0;
      while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
        m /= static_cast<unsigned long>(p);
        ++e;
      }
      f.exps[mpz_class(p)] = e;
    }
    if (mpz_class(p) * mpz_class(p) > m) break;
  }
  if (m > 1) factor_into(m, f.exps);
  return f;
}

Factorization factor_rational(const mpq_class& x) {
  if (x == 0) throw ValidationError("cannot factor zero");
  Factorization fn = factor_integer(mpz_class(x.get_num()));
  Factorization fd = factor_integer(mpz_class(x.get_den()));
  Factorization f = fn;
  f.sign = fn.sign * fd.sign;
  for (const auto& [p, e] : fd.exps) {
    f.exps[p] -= e;
    if (f.exps[p] == 0) f.exps.erase(p);
  }
  return f;
}

std::pair<mpz_class, long long> primitive_power(const mpz_class& n) {
  mpz_class m = abs(n);
  if (m < 2) throw ValidationError("primitive_power needs |n| >= 2");
  const unsigned long maxb = mpz_sizeinbase(m.get_mpz_t(), 2);
  for (unsigned long b = maxb; b >= 2; --b) {
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), m.get_mpz_t(), b) != 0) {
      return {root, static_cast<long long>(b)};
    }
  }
  return {m, 1};
}

// ---------------------------------------------------------------------------
// Integer kernels

namespace {

// Kernel lattice of the integer matrix `rows` (each row a linear functional
// on Z^ncols), by unimodular column reduction.
std::vector<std::vector<mpz_class>> integer_kernel(
    const std::vector<std::vector<mpz_class>>& rows, int ncols) {
  // Column-major working copies of the matrix and the transform U.
  std::vector<std::vector<mpz_class>> mcol(ncols,
                                           std::vector<mpz_class>(rows.size(), 0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < ncols; ++c) mcol[c][r] = rows[r][c];
  }
  std::vector<std::vector<mpz_class>> ucol(ncols,
                                           std::vector<mpz_class>(ncols, 0));
  for (int c = 0; c < ncols; ++c) ucol[c][c] = 1;
  std::vector<bool> active(ncols, true);

  auto col_axpy = [&](int dst, int src, const mpz_class& q) {
    // col_dst -= q * col_src
    for (std::size_t r = 0; r < rows.size(); ++r) mcol[dst][r] -= q * mcol[src][r];
    for (int r = 0; r < ncols; ++r) ucol[dst][r] -= q * ucol[src][r];
  };

  for (std::size_t r = 0; r < rows.size(); ++r) {
    while (true) {
      int pivot = -1;
      for (int c = 0; c < ncols; ++c) {
        if (!active[c] || mcol[c][r] == 0) continue;
        if (pivot == -1 || abs(mcol[c][r]) < abs(mcol[pivot][r])) pivot = c;
      }
      if (pivot == -1) break;
      bool clean = true;
      for (int c = 0; c < ncols; ++c) {
        if (c == pivot || !active[c] || mcol[c][r] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), mcol[c][r].get_mpz_t(),
                   mcol[pivot][r].get_mpz_t());
        col_axpy(c, pivot, q);
        if (mcol[c][r] != 0) clean = false;
      }
      if (clean) {
        active[pivot] = false;
        break;
      }
    }
  }

  std::vector<std::vector<mpz_class>> kernel;
  for (int c = 0; c < ncols; ++c) {
    if (active[c]) kernel.push_back(ucol[c]);
  }
  return kernel;
}

// Restrict a lattice basis to the sublattice where sum(v[i]*parity[i]) is
// even.
std::vector<std::vector<mpz_class>> refine_mod2(
    std::vector<std::vector<mpz_class>> basis, const std::vector<int>& parity) {
  auto odd = [&](const std::vector<mpz_class>& v) {
    mpz_class s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (parity[i] & 1) s += v[i];
    }
    return mpz_odd_p(s.get_mpz_t()) != 0;
  };
  int first_odd = -1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (odd(basis[i])) {
      first_odd = static_cast<int>(i);
      break;
    }
  }
  if (first_odd == -1) return basis;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (static_cast<int>(i) == first_odd || !odd(basis[i])) continue;
    for (std::size_t j = 0; j < basis[i].size(); ++j) {
      basis[i][j] -= basis[first_odd][j];
    }
  }
  for (auto& x : basis[first_odd]) x *= 2;
  return basis;
}

}  // namespace

std::vector<std::vector<mpz_class>> lattice_canonical(
    std::vector<std::vector<mpz_class>> basis) {
  if (basis.empty()) return basis;
  const std::size_t n = basis[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < basis.size(); ++col) {
    // Euclidean reduction within the column.
    while (true) {
      int pivot = -1;
      for (std::size_t r = row; r < basis.size(); ++r) {
        if (basis[r][col] == 0) continue;
        if (pivot == -1 || abs(basis[r][col]) < abs(basis[pivot][col]))
          pivot = static_cast<int>(r);
      }
      if (pivot == -1) break;
      std::swap(basis[row], basis[pivot]);
      bool clean = true;
      for (std::size_t r = row + 1; r < basis.size(); ++r) {
        if (basis[r][col] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), basis[r][col].get_mpz_t(),
                   basis[row][col].get_mpz_t());
        for (std::size_t j = 0; j < n; ++j) basis[r][j] -= q * basis[row][j];
        if (basis[r][col] != 0) clean = false;
      }
      if (clean) break;
    }
    if (basis[row][col] == 0) continue;
    if (basis[row][col] < 0) {
      for (auto& x : basis[row]) x = -x;
    }
    // Reduce rows above the pivot into canonical range.
    for (std::size_t r = 0; r < row; ++r) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), basis[r][col].get_mpz_t(),
                 basis[row][col].get_mpz_t());
      if (q != 0) {
        for (std::size_t j = 0; j < n; ++j) basis[r][j] -= q * basis[row][j];
      }
    }
    ++row;
  }
  basis.resize(row);
  return basis;
}

bool lattice_contains(const ExponentLattice& lat, const std::vector<mpz_class>& v) {
  bool all_zero = std::all_of(v.begin(), v.end(),
                              [](const mpz_class& x) { return x == 0; });
  if (all_zero) return true;
  if (lat.basis.empty()) return false;
  // Reduce v against the canonical echelon form.
  auto canon = lattice_canonical(lat.basis);
  std::vector<mpz_class> w = v;
  const std::size_t n = w.size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n; ++col) {
    if (row < canon.size() && canon[row][col] != 0) {
      if (w[col] % canon[row][col] != 0) return false;
      mpz_class q = w[col] / canon[row][col];
      for (std::size_t j = 0; j < n; ++j) w[j] -= q * canon[row][j];
      ++row;
    } else if (w[col] != 0) {
      return false;
    }
  }
  return std::all_of(w.begin(), w.end(),
                     [](const mpz_class& x) { return x == 0; });
}

namespace {

void verify_exact(const ExponentLattice& lat,
                  const std::vector<mpq_class>& xs) {
  for (const auto& vec : lat.basis) {
    mpq_class prod = 1;
    bool skip = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (abs(vec[i]) > 4096) {
        skip = true;
        break;
      }
      mpq_class base = xs[i];
      long long e = static_cast<long long>(vec[i].get_si());
      mpq_class term;
      if (e >= 0) {
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(),
                   static_cast<unsigned long>(e));
        mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(),
                   static_cast<unsigned long>(e));
        term = mpq_class(num) / mpq_class(den);
      } else {
        mpz_class num, den;
        mpz_pow_ui(num.get_mpz_t(), base.get_den().get_mpz_t(),
                   static_cast<unsigned long>(-e));
        mpz_pow_ui(den.get_mpz_t(), base.get_num().get_mpz_t(),
                   static_cast<unsigned long>(-e));
        term = mpq_class(num) / mpq_class(den);
      }
      term.canonicalize();
      prod *= term;
    }
    if (!skip && prod != 1) {
      throw ValidationError("internal: lattice basis vector violates its relation");
    }
  }
}

}  // namespace

ExponentLattice relations_lattice(const std::vector<mpq_class>& xs) {
  const int k = static_cast<int>(xs.size());
  std::vector<Factorization> fs;
  fs.reserve(xs.size());
  for (const auto& x : xs) {
    if (x == 0) throw ValidationError("relations_lattice: inputs must be nonzero");
    fs.push_back(factor_rational(x));
  }
  // One row per prime appearing anywhere.
  std::vector<mpz_class> primes;
  for (const auto& f : fs) {
    for (const auto& [p, e] : f.exps) {
      if (std::find(primes.begin(), primes.end(), p) == primes.end())
        primes.push_back(p);
    }
  }
  std::sort(primes.begin(), primes.end());
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& p : primes) {
    std::vector<mpz_class> row(k, 0);
    for (int i = 0; i < k; ++i) {
      auto it = fs[i].exps.find(p);
      if (it != fs[i].exps.end()) row[i] = static_cast<long>(it->second);
    }
    rows.push_back(std::move(row));
  }
  auto basis = integer_kernel(rows, k);
  std::vector<int> parity(k, 0);
  for (int i = 0; i < k; ++i) parity[i] = fs[i].sign < 0 ? 1 : 0;
  basis = refine_mod2(std::move(basis), parity);
  ExponentLattice lat;
  lat.dim = k;
  lat.basis = lattice_canonical(std::move(basis));
  verify_exact(lat, xs);
  return lat;
}

ExponentLattice g_sigma(const std::vector<mpz_class>& mus,
                        const std::vector<GPair>& pairs, int m) {
  for (const auto& mu : mus) {
    if (mu == 0) throw ValidationError("g_sigma: roots must be nonzero");
  }
  for (const auto& pr : pairs) {
    if (abs(pr.lambda) <= 1) {
      throw ValidationError("g_sigma: each lambda must have |lambda| > 1");
    }
    if (pr.a < 1) throw ValidationError("g_sigma: exponents a_i must be >= 1");
    if (pr.unknown < 1 || pr.unknown > m) {
      throw ValidationError("g_sigma: pair references an unknown out of range");
    }
  }
  const int ncols = 1 + m;
  std::vector<Factorization> mu_f;
  for (const auto& mu : mus) mu_f.push_back(factor_integer(mu));
  std::vector<Factorization> lam_f;
  for (const auto& pr : pairs) lam_f.push_back(factor_integer(pr.lambda));

  std::vector<std::vector<mpz_class>> rows;
  std::vector<std::vector<int>> parity_rows;
  for (std::size_t r = 0; r < mus.size(); ++r) {
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      // mu_r^{f_0} = lambda^{a f_i}: valuation rows per prime + a sign row.
      std::vector<mpz_class> primes;
      for (const auto& [p, e] : mu_f[r].exps) primes.push_back(p);
      for (const auto& [p, e] : lam_f[q].exps) {
        if (std::find(primes.begin(), primes.end(), p) == primes.end())
          primes.push_back(p);
      }
      std::sort(primes.begin(), primes.end());
      for (const auto& p : primes) {
        std::vector<mpz_class> row(ncols, 0);
        auto it = mu_f[r].exps.find(p);
        if (it != mu_f[r].exps.end()) row[0] = static_cast<long>(it->second);
        auto jt = lam_f[q].exps.find(p);
        if (jt != lam_f[q].exps.end()) {
          row[pairs[q].unknown] =
              mpz_class(static_cast<long>(-jt->second)) * static_cast<long>(pairs[q].a);
        }
        rows.push_back(std::move(row));
      }
      std::vector<int> prow(ncols, 0);
      prow[0] = mu_f[r].sign < 0 ? 1 : 0;
      prow[pairs[q].unknown] =
          (lam_f[q].sign < 0 && (pairs[q].a & 1)) ? 1 : 0;
      if (prow[0] != 0 || prow[pairs[q].unknown] != 0) {
        parity_rows.push_back(std::move(prow));
      }
    }
  }
  // With no pairs at all the conditions are vacuous except that distinct
  // roots must share mu_r^{f_0}: encode mu_r / mu_1 relations.
  if (pairs.empty() && mus.size() >= 2) {
    for (std::size_t r = 1; r < mus.size(); ++r) {
      std::vector<mpz_class> primes;
      for (const auto& [p, e] : mu_f[0].exps) primes.push_back(p);
      for (const auto& [p, e] : mu_f[r].exps) {
        if (std::find(primes.begin(), primes.end(), p) == primes.end())
          primes.push_back(p);
      }
      for (const auto& p : primes) {
        std::vector<mpz_class> row(ncols, 0);
        long long e0 = 0, er = 0;
        if (auto it = mu_f[0].exps.find(p); it != mu_f[0].exps.end()) e0 = it->second;
        if (auto it = mu_f[r].exps.find(p); it != mu_f[r].exps.end()) er = it->second;
        row[0] = static_cast<long>(e0 - er);
        rows.push_back(std::move(row));
      }
      std::vector<int> prow(ncols, 0);
      prow[0] = (mu_f[0].sign < 0) != (mu_f[r].sign < 0) ? 1 : 0;
      if (prow[0] != 0) parity_rows.push_back(std::move(prow));
    }
  }

  auto basis = integer_kernel(rows, ncols);
  for (const auto& prow : parity_rows) {
    basis = refine_mod2(std::move(basis), prow);
  }
  ExponentLattice lat;
  lat.dim = ncols;
  lat.basis = lattice_canonical(std::move(basis));

  // Exact verification of every basis vector against every relation.
  for (const auto& vec : lat.basis) {
    for (std::size_t r = 0; r < mus.size(); ++r) {
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        if (abs(vec[0]) > 512 || abs(vec[pairs[q].unknown]) > 512) continue;
        mpq_class lhs = 1, rhs = 1;
        long long f0 = vec[0].get_si();
        long long fi = vec[pairs[q].unknown].get_si();
        auto qpow = [](const mpz_class& base, long long e) {
          mpz_class pw;
          mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(),
                     static_cast<unsigned long>(e < 0 ? -e : e));
          mpq_class r(pw);
          if (e < 0) r = 1 / r;
          return r;
        };
        lhs = qpow(mus[r], f0);
        rhs = qpow(pairs[q].lambda, pairs[q].a * fi);
        if (lhs != rhs) {
          throw ValidationError("internal: g_sigma basis violates relation");
        }
      }
    }
  }
  return lat;
}

ExponentLattice g_sigma(const std::vector<mpz_class>& mus,
                        const std::vector<std::pair<mpz_class, long long>>& pairs) {
  std::vector<GPair> gp;
  int idx = 0;
  for (const auto& [lam, a] : pairs) {
    gp.push_back(GPair{++idx, lam, a});
  }
  return g_sigma(mus, gp, idx);
}

CommonBase common_base(const mpz_class& mu,
                       const std::vector<std::pair<mpz_class, long long>>& pairs) {
  if (mu == 0 || abs(mu) == 1) {
    throw ValidationError("common_base: mu must satisfy |mu| >= 2");
  }
  auto [w, e0] = primitive_power(mu);
  CommonBase cb;
  if (mu > 0) {
    cb.lambda = w;
    cb.b = static_cast<long>(e0);
  } else if (e0 % 2 == 1) {
    cb.lambda = -w;
    cb.b = static_cast<long>(e0);
  } else {
    throw NotRepresentableError(
        "common_base: negative mu is not an odd power of its primitive base");
  }
  for (const auto& [lam, a] : pairs) {
    if (abs(lam) <= 1) throw ValidationError("common_base: |lambda| must exceed 1");
    if (a < 1) throw ValidationError("common_base: a must be >= 1");
    mpz_class value;
    mpz_pow_ui(value.get_mpz_t(), lam.get_mpz_t(), static_cast<unsigned long>(a));
    auto [wv, ev] = primitive_power(value);
    if (wv != w) {
      throw NotDependentError(
          "common_base: value is multiplicatively independent of mu");
    }
    CommonBasePair p;
    p.b_i = static_cast<long>(ev);
    int value_sign = value < 0 ? -1 : 1;
    if (cb.lambda > 0) {
      p.zeta = value_sign;
    } else {
      // lambda = -w: lambda^{b_i} = (-1)^{b_i} w^{b_i}.
      int pow_sign = (ev % 2 == 0) ? 1 : -1;
      p.zeta = value_sign * pow_sign;
    }
    cb.pairs.push_back(std::move(p));
  }
  cb.E = 1;
  for (const auto& p : cb.pairs) {
    if (p.zeta == -1) cb.E = 2;
  }
  for (auto& p : cb.pairs) p.B_i = p.b_i * cb.E;

  // Round-trip checks: lambda^b = mu and zeta*lambda^{b_i} = lambda_j^{a_i}.
  mpz_class lb;
  mpz_pow_ui(lb.get_mpz_t(), cb.lambda.get_mpz_t(),
             static_cast<unsigned long>(cb.b.get_ui()));
  if (lb != mu) throw ValidationError("internal: common_base round trip failed (mu)");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    mpz_class value, lbi;
    mpz_pow_ui(value.get_mpz_t(), pairs[i].first.get_mpz_t(),
               static_cast<unsigned long>(pairs[i].second));
    mpz_pow_ui(lbi.get_mpz_t(), cb.lambda.get_mpz_t(),
               static_cast<unsigned long>(cb.pairs[i].b_i.get_ui()));
    if (cb.pairs[i].zeta * lbi != value) {
      throw ValidationError("internal: common_base round trip failed (pair)");
    }
  }
  return cb;
}

}  // namespace retset::mullat

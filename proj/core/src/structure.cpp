#include "retset/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "retset/ffield.hpp"

namespace retset::structure {

std::string to_string(Verdict v) {
  return v == Verdict::consistent ? "consistent" : "inconsistent";
}

ReturnSetDecomposition decompose(const std::vector<long long>& S, long long M,
                                 const DecomposeParams& params) {
  if (M < 0) throw ValidationError("decompose: M must be nonnegative");
  if (params.a_max < 1) throw ValidationError("decompose: a_max must be >= 1");
  if (params.window_fraction <= 0 || params.window_fraction >= 1) {
    throw ValidationError("decompose: window_fraction must lie in (0, 1)");
  }
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (S[i] < 0 || S[i] > M) {
      throw ValidationError("decompose: set members must lie in [0, M]");
    }
    if (i > 0 && S[i] <= S[i - 1]) {
      throw ValidationError("decompose: input must be sorted and duplicate-free");
    }
  }

  std::set<long long> remaining(S.begin(), S.end());
  // ceil(window_fraction * M)
  mpq_class wq = params.window_fraction * mpq_class(static_cast<long>(M));
  mpz_class wlo_z;
  mpz_cdiv_q(wlo_z.get_mpz_t(), wq.get_num().get_mpz_t(), wq.get_den().get_mpz_t());
  const long long window_lo = wlo_z.get_si();

  ReturnSetDecomposition out;
  out.M = M;
  out.provenance = params;

  for (long long a = 1; a <= params.a_max; ++a) {
    for (long long b = 0; b < a; ++b) {
      // Every member of the progression in the window must be present.
      long long first = b;
      if (first < window_lo) first += ((window_lo - b + a - 1) / a) * a;
      long long members = 0;
      bool full = true;
      for (long long n = first; n <= M; n += a) {
        if (remaining.count(n) == 0) {
          full = false;
          break;
        }
        ++members;
      }
      if (!full || members < params.min_members) continue;
      // Onset: walk down from the window floor while unbroken.
      long long onset = first;
      for (long long n = first - a; n >= b; n -= a) {
        if (remaining.count(n) == 0) break;
        onset = n;
      }
      for (long long n = onset; n <= M; n += a) remaining.erase(n);
      out.progressions.push_back(DetectedProgression{a, b, onset});
    }
  }
  out.sparse.assign(remaining.begin(), remaining.end());
  return out;
}

CertifyReport certify_bound(const std::vector<long long>& sparse, int d,
                            const std::vector<long long>& checkpoints,
                            double growth_tolerance) {
  if (d < 0) throw ValidationError("certify_bound: d must be nonnegative");
  if (checkpoints.size() < 3) {
    throw ValidationError("certify_bound: need at least 3 checkpoints");
  }
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1) {
      throw ValidationError("certify_bound: checkpoints must be >= 1");
    }
    if (i > 0 && checkpoints[i] <= checkpoints[i - 1]) {
      throw ValidationError("certify_bound: checkpoints must be ascending");
    }
  }
  std::vector<long long> sorted = sparse;
  std::sort(sorted.begin(), sorted.end());

  CertifyReport rep;
  rep.growth_tolerance = growth_tolerance;
  double a_min = 0.0;
  for (long long M : checkpoints) {
    CertifyRow row;
    row.M = M;
    row.count = static_cast<long long>(
        std::upper_bound(sorted.begin(), sorted.end(), M) - sorted.begin());
    row.ratio = static_cast<double>(row.count) /
                std::pow(1.0 + std::log(static_cast<double>(M)), d);
    a_min = std::max(a_min, row.ratio);
    row.a_min = a_min;
    rep.rows.push_back(row);
  }
  const double first = rep.rows.front().a_min;
  const double last = rep.rows.back().a_min;
  if (last == 0.0) {
    rep.verdict = Verdict::consistent;
  } else if (first == 0.0) {
    rep.verdict = Verdict::inconsistent;
  } else {
    rep.verdict = (last / first <= growth_tolerance) ? Verdict::consistent
                                                     : Verdict::inconsistent;
  }
  return rep;
}

void validate(const PForm& f) {
  if (f.m < 1) throw ValidationError("p-form needs m >= 1");
  if (static_cast<int>(f.c.size()) != f.m || static_cast<int>(f.a.size()) != f.m) {
    throw ValidationError("p-form component lengths must equal m");
  }
  if (!ffield::is_prime_u64(f.p)) throw ValidationError("p-form base must be prime");
  for (int j = 0; j < f.m; ++j) {
    if (f.c[j] == 0) throw ValidationError("p-form coefficients must be nonzero");
    if (f.a[j] < 0) throw ValidationError("p-form exponents must be nonnegative");
  }
}

std::vector<PFormValue> pform_generate(const PForm& f, long long M) {
  validate(f);
  if (M < 0) throw ValidationError("pform_generate: M must be nonnegative");
  // Per-term cap: |c_j| p^{a_j k_j} <= M + sum |c_j'|.
  mpq_class tail = 0;
  for (const auto& cj : f.c) tail += abs(cj);
  const mpq_class cap = mpq_class(static_cast<long>(M)) + tail;

  std::vector<std::vector<mpq_class>> term_values(f.m);
  for (int j = 0; j < f.m; ++j) {
    if (f.a[j] == 0) {
      term_values[j].push_back(f.c[j]);  // p^{0*k} = 1 for every k
      continue;
    }
    mpz_class stride;
    mpz_ui_pow_ui(stride.get_mpz_t(), f.p, static_cast<unsigned long>(f.a[j]));
    mpq_class val = f.c[j];
    while (abs(val) <= cap) {
      term_values[j].push_back(val);
      val *= mpq_class(stride);
      if (term_values[j].size() > 4096) {
        throw ResourceError("pform_generate: term enumeration too large");
      }
    }
    if (term_values[j].empty()) term_values[j].push_back(f.c[j]);
  }

  std::map<long long, std::vector<long long>> found;
  std::vector<long long> k(f.m, 0);
  auto dfs = [&](auto&& self, int j, const mpq_class& acc) -> void {
    if (j == f.m) {
      if (acc.get_den() != 1) {
        throw ValidationError("p-form generated a non-integral value: " +
                              acc.get_str());
      }
      if (acc < 0 || acc > static_cast<long>(M)) return;
      long long v = mpz_class(acc.get_num()).get_si();
      if (found.find(v) == found.end()) found.emplace(v, k);
      return;
    }
    for (std::size_t idx = 0; idx < term_values[j].size(); ++idx) {
      k[j] = static_cast<long long>(idx);
      self(self, j + 1, acc + term_values[j][idx]);
    }
    k[j] = 0;
  };
  dfs(dfs, 0, mpq_class(0));

  std::vector<PFormValue> out;
  out.reserve(found.size());
  for (const auto& [v, wit] : found) out.push_back(PFormValue{v, wit});
  return out;
}

PFormMatch pform_match(const std::vector<long long>& sparse, const PForm& f,
                       long long M) {
  std::vector<long long> lhs;
  for (long long n : sparse) {
    if (n >= 0 && n <= M) lhs.push_back(n);
  }
  std::sort(lhs.begin(), lhs.end());
  lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
  std::vector<long long> rhs;
  for (const auto& pv : pform_generate(f, M)) rhs.push_back(pv.value);

  PFormMatch out;
  std::set_symmetric_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                std::back_inserter(out.sym_difference));
  out.matched = out.sym_difference.empty();
  return out;
}

mpz_class count_nonzero_digits(unsigned long long p, int m, long long M,
                               bool ones_only) {
  if (!ffield::is_prime_u64(p)) {
    throw ValidationError("count_nonzero_digits: p must be prime");
  }
  if (m < 1) throw ValidationError("count_nonzero_digits: m must be >= 1");
  if (M < 1) return 0;

  std::vector<int> digits;  // most significant first
  {
    long long rest = M;
    while (rest > 0) {
      digits.push_back(static_cast<int>(rest % static_cast<long long>(p)));
      rest /= static_cast<long long>(p);
    }
    std::reverse(digits.begin(), digits.end());
  }
  const int L = static_cast<int>(digits.size());

  // Free suffix: r positions, j nonzero digits still needed.
  auto free_count = [&](int r, int j) -> mpz_class {
    if (j < 0 || j > r) return 0;
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(r),
                 static_cast<unsigned long>(j));
    if (!ones_only && p > 2) {
      mpz_class choices;
      mpz_ui_pow_ui(choices.get_mpz_t(), p - 1, static_cast<unsigned long>(j));
      binom *= choices;
    }
    return binom;
  };

  mpz_class total = 0;
  int used = 0;
  bool tight_alive = true;
  for (int i = 0; i < L && tight_alive; ++i) {
    const int limit = digits[i];
    const int max_digit = ones_only ? 1 : static_cast<int>(p - 1);
    for (int x = 0; x <= std::min(limit - 1, max_digit); ++x) {
      const int used2 = used + (x != 0 ? 1 : 0);
      if (used2 > m) continue;
      total += free_count(L - i - 1, m - used2);
    }
    if (digits[i] != 0) {
      if (ones_only && digits[i] > 1) {
        tight_alive = false;
        break;
      }
      ++used;
      if (used > m) {
        tight_alive = false;
        break;
      }
    }
  }
  if (tight_alive && used == m) total += 1;  // M itself
  return total;
}

}  // namespace retset::structure

#include "retset/polyexp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstring>
#include <map>
#include <numeric>
#include <sstream>

namespace retset::polyexp {

namespace {

mpq_class mpq_pow_signed(const mpz_class& base, long long e) {
  mpz_class pw;
  mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(),
             static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return mpq_class(pw);
  mpq_class r(1);
  r /= mpq_class(pw);
  return r;
}

mpq_class mpq_abs(const mpq_class& x) { return x < 0 ? mpq_class(-x) : x; }

}  // namespace

void validate(const PolyExpEquation& eq) {
  if (eq.rhs.empty()) throw ValidationError("equation needs at least one unknown");
  for (const auto& u : eq.rhs) {
    if (u.a < 1) throw ValidationError("exponent multiplier a_i must be >= 1");
    if (u.terms.empty()) throw ValidationError("unknown with no coupled terms");
    for (const auto& t : u.terms) {
      if (t.c == 0) throw ValidationError("coupling coefficient must be nonzero");
      if (abs(t.lambda) <= 1) {
        throw ValidationError("coupling base must satisfy |lambda| > 1");
      }
    }
  }
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::finite: return "finite";
    case Classification::case1: return "case1";
    case Classification::case2: return "case2";
    case Classification::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(BranchKind k) {
  switch (k) {
    case BranchKind::finite_trivial_lattice: return "finite-trivial-lattice";
    case BranchKind::finite_multiple_lhs: return "finite-multiple-lhs";
    case BranchKind::finite_empty_rhs: return "finite-empty-rhs";
    case BranchKind::case1: return "case1";
    case BranchKind::case2: return "case2";
  }
  return "?";
}

std::vector<long long> SolutionSet::ns() const {
  std::vector<long long> out;
  out.reserve(solutions.size());
  for (const auto& s : solutions) out.push_back(s.n);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void sort_solutions(std::vector<Solution>& sols) {
  std::sort(sols.begin(), sols.end(), [](const Solution& a, const Solution& b) {
    if (a.n != b.n) return a.n < b.n;
    return a.k < b.k;
  });
  sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
}

// Best-effort structural classification; falls back to `finite` when the
// reduction pipeline rejects the instance.
Classification classify_or_finite(const PolyExpEquation& eq) {
  try {
    return laurent_reduce(eq).classification;
  } catch (const std::exception&) {
    return Classification::finite;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Digit partition solver

SolutionSet solve_digit_partition(const recseq::LinRec& u, const mpz_class& q,
                                  const std::vector<mpz_class>& cs, long long M) {
  if (q < 2) throw ValidationError("base q must be >= 2");
  if (cs.empty()) throw ValidationError("need at least one coefficient");
  mpz_class csum = 0;
  for (const auto& c : cs) {
    if (c <= 0) throw ValidationError("coefficients must be positive");
    csum += c;
  }
  if (2 * csum >= q) {
    throw ValidationError("digit solver requires sum(c_i) < q/2");
  }
  if (M < 0) throw ValidationError("M must be nonnegative");

  const int m = static_cast<int>(cs.size());
  SolutionSet out;
  out.complete_up_to_m = M;
  out.complete_up_to_k = -1;  // unbounded in k

  const bool q_small = q.fits_sint_p() && q.get_si() <= 62;
  const int qi = q_small ? static_cast<int>(q.get_si()) : 0;

  std::vector<std::pair<long long, long long>> nz;  // (position, digit)
  for (long long n = 0; n <= M; ++n) {
    mpq_class vq = recseq::eval(u, n);
    if (vq.get_den() != 1) {
      throw UnsupportedInstance("sequence value is not an integer at n=" +
                                std::to_string(n));
    }
    mpz_class v(vq.get_num());
    if (v <= 0) continue;

    // Base-q digits; only the nonzero ones matter, and there can be at most
    // m of them in a representable value.
    nz.clear();
    bool too_many = false;
    if (q_small) {
      char* str = mpz_get_str(nullptr, qi, v.get_mpz_t());
      const std::size_t len = std::strlen(str);
      for (std::size_t i = 0; i < len; ++i) {
        const char ch = str[i];
        int dig = ch <= '9' ? ch - '0' : ch - 'a' + 10;
        if (dig != 0) {
          nz.emplace_back(static_cast<long long>(len - 1 - i), dig);
          if (static_cast<int>(nz.size()) > m) {
            too_many = true;
            break;
          }
        }
      }
      void (*freefunc)(void*, std::size_t);
      mp_get_memory_functions(nullptr, nullptr, &freefunc);
      freefunc(str, len + 1);
    } else {
      mpz_class rest = v;
      long long pos = 0;
      while (rest > 0 && !too_many) {
        mpz_class dig = rest % q;
        rest /= q;
        if (dig != 0) {
          nz.emplace_back(pos, dig.get_si());
          if (static_cast<int>(nz.size()) > m) too_many = true;
        }
        ++pos;
      }
    }
    if (too_many) continue;

    mpz_class digit_sum = 0;
    for (const auto& [pos, dig] : nz) digit_sum += static_cast<long>(dig);
    if (digit_sum != csum) continue;  // no carries, so sums must agree

    // Assign indices in order, trying smaller positions first: the first
    // complete assignment is the lexicographically smallest witness.
    std::vector<long long> rem(nz.size());
    for (std::size_t i = 0; i < nz.size(); ++i) rem[i] = nz[i].second;
    std::vector<long long> witness(m, -1);
    auto dfs = [&](auto&& self, int idx) -> bool {
      if (idx == m) {
        for (long long r : rem) {
          if (r != 0) return false;
        }
        return true;
      }
      const long long ci = cs[idx].get_si();
      for (std::size_t pslot = 0; pslot < nz.size(); ++pslot) {
        if (rem[pslot] < ci) continue;
        rem[pslot] -= ci;
        witness[idx] = nz[pslot].first;
        if (self(self, idx + 1)) return true;
        rem[pslot] += ci;
        witness[idx] = -1;
      }
      return false;
    };
    // Positions ascending within nz: nz is built most-significant-first for
    // the string path, so sort ascending before searching.
    std::sort(nz.begin(), nz.end());
    for (std::size_t i = 0; i < nz.size(); ++i) rem[i] = nz[i].second;
    if (dfs(dfs, 0)) {
      out.solutions.push_back(Solution{n, witness});
      // Exactness check on insert.
      mpq_class total = 0;
      for (int i = 0; i < m; ++i) {
        total += mpq_class(cs[i]) * mpq_pow_signed(q, witness[i]);
      }
      if (total != vq) {
        throw ValidationError("internal: digit witness fails exact verification");
      }
    }
  }
  sort_solutions(out.solutions);

  PolyExpEquation equiv;
  equiv.lhs = u;
  for (const auto& c : cs) {
    equiv.rhs.push_back(RhsUnknown{1, {Coupling{mpq_class(c), q}}});
  }
  out.classification = classify_or_finite(equiv);
  return out;
}

// ---------------------------------------------------------------------------
// Bounded solver

namespace {

// Cached per-unknown term values T_i(k) = sum_j c_ij lambda_j^(a_i k).
class TermTable {
 public:
  explicit TermTable(const RhsUnknown& u) {
    for (const auto& t : u.terms) {
      mpz_class big;
      mpz_pow_ui(big.get_mpz_t(), t.lambda.get_mpz_t(),
                 static_cast<unsigned long>(u.a));
      bases_.push_back(big);
      coeffs_.push_back(t.c);
      powers_.push_back({mpz_class(1)});
    }
  }

  mpq_class value(long long k) {
    mpq_class acc = 0;
    for (std::size_t j = 0; j < bases_.size(); ++j) {
      acc += coeffs_[j] * mpq_class(power(j, k));
    }
    return acc;
  }

  mpq_class magnitude_majorant(long long k) {
    mpq_class acc = 0;
    for (std::size_t j = 0; j < bases_.size(); ++j) {
      acc += mpq_abs(coeffs_[j]) * mpq_class(abs(power(j, k)));
    }
    return acc;
  }

  bool strictly_positive() const {
    for (std::size_t j = 0; j < bases_.size(); ++j) {
      if (coeffs_[j] <= 0 || bases_[j] <= 0) return false;
    }
    return true;
  }

  // With a single coupling, |T(k)| = |c| |base|^k is strictly increasing.
  bool single_coupling() const { return bases_.size() == 1; }

 private:
  const mpz_class& power(std::size_t j, long long k) {
    auto& tab = powers_[j];
    while (static_cast<long long>(tab.size()) <= k) {
      tab.push_back(tab.back() * bases_[j]);
    }
    return tab[static_cast<std::size_t>(k)];
  }

  std::vector<mpz_class> bases_;
  std::vector<mpq_class> coeffs_;
  std::vector<std::vector<mpz_class>> powers_;
};

struct ValueCap {
  bool has = false;
  mpq_class cap;
  bool strict = false;
};

// Smallest k in [0, hi] with T(k) >= lo, or -1. T strictly increasing.
long long k_first_ge(TermTable& T, const mpq_class& lo, long long hi) {
  if (T.value(hi) < lo) return -1;
  long long a = 0, b = hi;
  while (a < b) {
    long long mid = a + (b - a) / 2;
    if (T.value(mid) >= lo) {
      b = mid;
    } else {
      a = mid + 1;
    }
  }
  return a;
}

// Largest k in [0, hi] with T(k) <= cap (or < cap when strict), or -1.
long long k_last_le(TermTable& T, const mpq_class& cap, bool strict, long long hi) {
  auto ok = [&](long long k) {
    mpq_class v = T.value(k);
    return strict ? v < cap : v <= cap;
  };
  if (!ok(0)) return -1;
  long long a = 0, b = hi;
  while (a < b) {
    long long mid = a + (b - a + 1) / 2;
    if (ok(mid)) {
      a = mid;
    } else {
      b = mid - 1;
    }
  }
  return a;
}

class PositivePeeler {
 public:
  PositivePeeler(std::vector<TermTable>& tables, long long k_max,
                 WorkBudget& nodes, std::vector<Solution>& out)
      : tables_(tables), k_max_(k_max), nodes_(nodes), out_(&out) {}

  void solve(long long n, const mpq_class& v) {
    n_ = n;
    assign_.assign(tables_.size(), -1);
    caps_.assign(tables_.size(), ValueCap{});
    std::vector<int> remaining(tables_.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    recurse(v, remaining);
  }

 private:
  void recurse(const mpq_class& v, const std::vector<int>& remaining) {
    nodes_.charge(1);
    if (remaining.empty()) return;  // handled by the size-1 case below
    if (v <= 0) return;
    if (remaining.size() == 1) {
      const int i = remaining[0];
      long long hi = cap_to_k(i, k_max_);
      if (hi < 0) return;
      long long k = k_first_ge(tables_[i], v, hi);
      if (k < 0) return;
      if (tables_[i].value(k) == v) {
        assign_[i] = k;
        record();
        assign_[i] = -1;
      }
      return;
    }
    const mpq_class r(static_cast<long>(remaining.size()));
    for (int istar : remaining) {
      mpq_class lo = v / r;
      mpq_class hi_val = v;
      for (int j : remaining) {
        if (j != istar) hi_val -= tables_[j].value(0);
      }
      if (hi_val < lo) continue;
      long long hi_k = cap_to_k(istar, k_max_);
      if (hi_k < 0) continue;
      long long k_hi = k_last_le(tables_[istar], hi_val, false, hi_k);
      if (k_hi < 0) continue;
      long long k_lo = k_first_ge(tables_[istar], lo, k_hi);
      if (k_lo < 0) continue;
      std::vector<int> rest;
      for (int j : remaining) {
        if (j != istar) rest.push_back(j);
      }
      for (long long k = k_hi; k >= k_lo; --k) {
        nodes_.charge(1);
        const mpq_class t = tables_[istar].value(k);
        assign_[istar] = k;
        std::vector<ValueCap> saved = caps_;
        bool feasible = true;
        for (int j : rest) {
          // istar is the first index attaining the maximum value.
          const bool strict = j < istar;
          if (!tighten(j, t, strict)) {
            feasible = false;
            break;
          }
        }
        if (feasible) recurse(v - t, rest);
        caps_ = std::move(saved);
        assign_[istar] = -1;
      }
    }
  }

  bool tighten(int j, const mpq_class& cap, bool strict) {
    ValueCap& c = caps_[j];
    if (!c.has || cap < c.cap || (cap == c.cap && strict && !c.strict)) {
      c = ValueCap{true, cap, strict};
    }
    // Feasible iff the smallest value T_j(0) fits under the cap.
    mpq_class v0 = tables_[j].value(0);
    return c.strict ? v0 < c.cap : v0 <= c.cap;
  }

  long long cap_to_k(int i, long long k_max) {
    const ValueCap& c = caps_[i];
    if (!c.has) return k_max;
    return k_last_le(tables_[i], c.cap, c.strict, k_max);
  }

  void record() {
    Solution s;
    s.n = n_;
    s.k.assign(assign_.begin(), assign_.end());
    out_->push_back(std::move(s));
  }

  std::vector<TermTable>& tables_;
  long long k_max_;
  WorkBudget& nodes_;
  std::vector<Solution>* out_;
  long long n_ = 0;
  std::vector<long long> assign_;
  std::vector<ValueCap> caps_;
};

// Mixed-sign fallback: box enumeration over [0, K_max]^m with the per-term
// magnitude prune |T_i(k_i)| <= |u_n| + sum of the other unknowns' largest
// magnitudes. Sound for any sign pattern; budget-guarded. Single-coupling
// unknowns additionally stop early because their magnitude is strictly
// increasing.
class GeneralEnumerator {
 public:
  GeneralEnumerator(std::vector<TermTable>& tables, long long k_max,
                    WorkBudget& nodes, std::vector<Solution>& out)
      : tables_(tables), k_max_(k_max), nodes_(nodes), out_(&out) {}

  void solve(long long n, const mpq_class& v) {
    n_ = n;
    assign_.assign(tables_.size(), -1);
    std::vector<mpq_class> maxmag(tables_.size());
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      maxmag[i] = tables_[i].magnitude_majorant(k_max_);
    }
    bounds_.assign(tables_.size(), 0);
    for (std::size_t i = 0; i < tables_.size(); ++i) {
      bounds_[i] = mpq_abs(v);
      for (std::size_t j = 0; j < tables_.size(); ++j) {
        if (j != i) bounds_[i] += maxmag[j];
      }
    }
    recurse(0, v);
  }

 private:
  void recurse(std::size_t idx, const mpq_class& v) {
    nodes_.charge(1);
    const bool last = idx + 1 == tables_.size();
    const bool single = tables_[idx].single_coupling();
    const mpq_class& bound = last ? mpq_abs(v) : bounds_[idx];
    for (long long k = 0; k <= k_max_; ++k) {
      nodes_.charge(1);
      mpq_class t = tables_[idx].value(k);
      if (mpq_abs(t) > bound) {
        if (single) break;
        continue;
      }
      if (last) {
        if (t == v) {
          assign_[idx] = k;
          Solution s;
          s.n = n_;
          s.k.assign(assign_.begin(), assign_.end());
          out_->push_back(std::move(s));
          assign_[idx] = -1;
        }
      } else {
        assign_[idx] = k;
        recurse(idx + 1, v - t);
        assign_[idx] = -1;
      }
    }
  }

  std::vector<TermTable>& tables_;
  long long k_max_;
  WorkBudget& nodes_;
  std::vector<Solution>* out_;
  long long n_ = 0;
  std::vector<long long> assign_;
  std::vector<mpq_class> bounds_;
};

}  // namespace

SolutionSet solve_bounded(const PolyExpEquation& eq, long long M, long long K_max,
                          const BoundedOptions& opts) {
  validate(eq);
  if (M < 0 || K_max < 0) throw ValidationError("M and K_max must be nonnegative");
  if (eq.m() > 8) throw ResourceError("too many unknowns for bounded enumeration");

  std::vector<TermTable> tables;
  tables.reserve(eq.rhs.size());
  bool all_positive = true;
  for (const auto& u : eq.rhs) {
    tables.emplace_back(u);
    if (!tables.back().strictly_positive()) all_positive = false;
  }

  SolutionSet out;
  out.complete_up_to_m = M;
  out.complete_up_to_k = K_max;

  WorkBudget nodes{opts.node_budget};
  // Incremental root powers for the LHS.
  std::vector<mpq_class> pw(eq.lhs.terms.size(), mpq_class(1));
  std::vector<Solution> sols;
  for (long long n = 0; n <= M; ++n) {
    mpq_class v = 0;
    for (std::size_t r = 0; r < eq.lhs.terms.size(); ++r) {
      v += qpoly::eval(eq.lhs.terms[r].q, n) * pw[r];
    }
    if (all_positive) {
      PositivePeeler peeler(tables, K_max, nodes, sols);
      peeler.solve(n, v);
    } else {
      GeneralEnumerator gen(tables, K_max, nodes, sols);
      gen.solve(n, v);
    }
    for (std::size_t r = 0; r < eq.lhs.terms.size(); ++r) {
      pw[r] *= mpq_class(eq.lhs.terms[r].mu);
    }
  }
  // Exactness check on insert.
  for (const auto& s : sols) {
    mpq_class lhs = recseq::eval(eq.lhs, s.n);
    mpq_class rhs = 0;
    for (std::size_t i = 0; i < eq.rhs.size(); ++i) {
      for (const auto& t : eq.rhs[i].terms) {
        rhs += t.c * mpq_pow_signed(t.lambda, eq.rhs[i].a * s.k[i]);
      }
    }
    if (lhs != rhs) {
      throw ValidationError("internal: bounded solution fails exact verification");
    }
  }
  out.solutions = std::move(sols);
  sort_solutions(out.solutions);
  out.classification = classify_or_finite(eq);
  return out;
}

// ---------------------------------------------------------------------------
// Reduction pipeline

namespace {

struct FlatPair {
  int unknown;   // 0-based original unknown index
  int coupling;  // index within that unknown
};

}  // namespace

Reduction laurent_reduce(const PolyExpEquation& eq) {
  validate(eq);
  const auto& lhs = eq.lhs;
  if (lhs.is_zero()) throw ValidationError("zero LHS");
  auto rep = recseq::is_nondegenerate(lhs);
  if (!rep.ok()) {
    throw ValidationError(
        "LHS is degenerate or has a unit root != 1; apply nondegenerate_split "
        "first");
  }
  const int s = static_cast<int>(lhs.terms.size());
  int designated = -1;
  for (int r = 0; r < s; ++r) {
    if (lhs.terms[r].q.deg() >= 1) {
      designated = r;
      break;
    }
  }
  if (designated == -1) {
    throw UnsupportedInstance(
        "all LHS coefficient polynomials are constant: the solution set is a "
        "finite union of arithmetic progressions (classical regime); use the "
        "bounded solver and progression detection instead");
  }
  std::vector<FlatPair> all_pairs;
  for (int i = 0; i < eq.m(); ++i) {
    for (int j = 0; j < static_cast<int>(eq.rhs[i].terms.size()); ++j) {
      all_pairs.push_back(FlatPair{i, j});
    }
  }
  if (s > 10 || all_pairs.size() > 10) {
    throw ResourceError("too many subsum branches to enumerate");
  }

  Reduction red;
  bool any_case1 = false, any_case2 = false;

  const int others = s - 1;
  for (unsigned long mask1 = 0; mask1 < (1ul << others); ++mask1) {
    std::vector<int> sigma1{designated};
    {
      int bit = 0;
      for (int r = 0; r < s; ++r) {
        if (r == designated) continue;
        if (mask1 & (1ul << bit)) sigma1.push_back(r);
        ++bit;
      }
    }
    std::sort(sigma1.begin(), sigma1.end());
    for (unsigned long mask2 = 0; mask2 < (1ul << all_pairs.size()); ++mask2) {
      std::vector<std::pair<int, int>> sigma2;
      for (std::size_t t = 0; t < all_pairs.size(); ++t) {
        if (mask2 & (1ul << t)) {
          sigma2.emplace_back(all_pairs[t].unknown, all_pairs[t].coupling);
        }
      }
      ReductionBranch br;
      br.sigma1 = sigma1;
      br.sigma2 = sigma2;

      if (sigma2.empty()) {
        br.kind = BranchKind::finite_empty_rhs;
        br.note =
            "vanishing RHS subsum: a nonzero non-degenerate "
            "exponential-polynomial has finitely many zeros";
        br.lattice.dim = 1;
        red.branches.push_back(std::move(br));
        continue;
      }

      // Distinct unknowns of sigma2, in order of first appearance.
      std::vector<int> unknowns;
      for (const auto& [i, j] : sigma2) {
        if (std::find(unknowns.begin(), unknowns.end(), i) == unknowns.end()) {
          unknowns.push_back(i);
        }
      }
      const int m1 = static_cast<int>(unknowns.size());

      std::vector<mpz_class> mus;
      for (int r : sigma1) mus.push_back(lhs.terms[r].mu);
      std::vector<mullat::GPair> gpairs;
      for (const auto& [i, j] : sigma2) {
        int slot = static_cast<int>(std::find(unknowns.begin(), unknowns.end(), i) -
                                    unknowns.begin()) + 1;
        gpairs.push_back(
            mullat::GPair{slot, eq.rhs[i].terms[j].lambda, eq.rhs[i].a});
      }
      br.lattice = mullat::g_sigma(mus, gpairs, m1);

      if (sigma1.size() >= 2) {
        br.kind = BranchKind::finite_multiple_lhs;
        br.note = "two or more LHS roots force a trivial relation lattice";
        if (!br.lattice.trivial()) {
          throw ValidationError(
              "internal: nontrivial lattice for a multi-root subsum of a "
              "non-degenerate sequence");
        }
        red.branches.push_back(std::move(br));
        continue;
      }
      if (br.lattice.trivial()) {
        br.kind = BranchKind::finite_trivial_lattice;
        br.note = "trivial relation lattice: finitely many solutions";
        red.branches.push_back(std::move(br));
        continue;
      }

      const mpz_class& mu = lhs.terms[designated].mu;
      const qpoly::QPoly& Q = lhs.terms[designated].q;

      if (mu == 1) {
        br.kind = BranchKind::case1;
        any_case1 = true;
        ReducedEquation rq;
        rq.Q = Q;
        for (const auto& [i, j] : sigma2) {
          mpz_class base;
          mpz_pow_ui(base.get_mpz_t(), eq.rhs[i].terms[j].lambda.get_mpz_t(),
                     static_cast<unsigned long>(eq.rhs[i].a));
          int slot = static_cast<int>(
              std::find(unknowns.begin(), unknowns.end(), i) - unknowns.begin());
          rq.terms.push_back(ReducedTerm{eq.rhs[i].terms[j].c, base, slot,
                                         mpz_class(static_cast<long>(eq.rhs[i].a))});
        }
        rq.allow_negative = false;
        br.reduced.push_back(std::move(rq));
        red.branches.push_back(std::move(br));
        continue;
      }
      if (mu == -1) {
        throw ValidationError("internal: unit root -1 survived the precondition");
      }

      // Case 2.
      br.kind = BranchKind::case2;
      any_case2 = true;
      std::vector<std::pair<mpz_class, long long>> cb_pairs;
      for (const auto& [i, j] : sigma2) {
        cb_pairs.emplace_back(eq.rhs[i].terms[j].lambda, eq.rhs[i].a);
      }
      struct SubCase {
        qpoly::QPoly Q;
        mpz_class mu;
        long long stride, offset;
      };
      std::vector<SubCase> subcases;
      bool parity_split = false;
      try {
        (void)mullat::common_base(mu, cb_pairs);
        subcases.push_back(SubCase{Q, mu, 1, 0});
      } catch (const mullat::NotRepresentableError&) {
        // mu < 0 and not an odd power: refine n along parity classes, where
        // the root becomes mu^2 > 0.
        parity_split = true;
        for (long long rho = 0; rho < 2; ++rho) {
          qpoly::QPoly q2 = qpoly::compose_affine(
              Q, mpq_class(2), mpq_class(static_cast<long>(rho)));
          if (rho == 1) q2 = qpoly::scale(q2, mpq_class(mu));
          subcases.push_back(SubCase{std::move(q2), mu * mu, 2, rho});
        }
      }
      if (parity_split) {
        br.note = "negative root refined along parity classes before the "
                  "common-base reduction";
      }
      for (const auto& sc : subcases) {
        mullat::CommonBase cb = mullat::common_base(sc.mu, cb_pairs);
        const int E = cb.E;
        std::vector<int> residues(m1, 0);
        while (true) {
          ReducedEquation rq;
          rq.Q = sc.Q;
          rq.allow_negative = true;
          rq.E = E;
          rq.residues = residues;
          rq.b = cb.b;
          rq.n_stride = sc.stride;
          rq.n_offset = sc.offset;
          for (std::size_t t = 0; t < sigma2.size(); ++t) {
            const auto& [i, j] = sigma2[t];
            int slot = static_cast<int>(
                std::find(unknowns.begin(), unknowns.end(), i) - unknowns.begin());
            const int r_i = residues[slot];
            // c * zeta^{r} * lambda^{b_i r}
            mpq_class d = eq.rhs[i].terms[j].c;
            if (cb.pairs[t].zeta == -1 && (r_i & 1)) d = -d;
            d *= mpq_pow_signed(cb.lambda, cb.pairs[t].b_i.get_si() * r_i);
            rq.terms.push_back(ReducedTerm{d, cb.lambda, slot, cb.pairs[t].B_i});
          }
          br.reduced.push_back(std::move(rq));
          // Next residue assignment.
          int pos = 0;
          while (pos < m1) {
            if (++residues[pos] < E) break;
            residues[pos] = 0;
            ++pos;
          }
          if (pos == m1) break;
        }
      }
      red.branches.push_back(std::move(br));
    }
  }

  if (any_case1 && any_case2) {
    red.classification = Classification::mixed;
  } else if (any_case1) {
    red.classification = Classification::case1;
  } else if (any_case2) {
    red.classification = Classification::case2;
  } else {
    red.classification = Classification::finite;
  }
  return red;
}

// ---------------------------------------------------------------------------
// Reduced-form solver

namespace {

// All h in [lo, hi] with Q(h) = v, by direct scan of the non-monotone head
// and bracketing on the monotone tail.
void solve_poly_eq(const qpoly::QPoly& Q, const mpq_class& v, long long lo,
                   long long hi, std::vector<long long>& out) {
  if (hi < lo) return;
  const long long deg = Q.deg();
  if (deg <= 0) return;
  if (deg == 1) {
    mpq_class h = (v - Q.c[0]) / Q.c[1];
    if (h.get_den() == 1 && h >= static_cast<long>(lo) && h <= static_cast<long>(hi)) {
      out.push_back(h.get_num().get_si());
    }
    return;
  }
  // Cauchy bound on the roots of Q': beyond it Q is strictly monotone.
  mpq_class lead = Q.c[deg] * static_cast<long>(deg);
  mpq_class maxr = 0;
  for (long long i = 1; i < deg; ++i) {
    mpq_class cand = mpq_abs(Q.c[i] * static_cast<long>(i)) / mpq_abs(lead);
    maxr = std::max(maxr, cand);
  }
  long long head_end = 2 + static_cast<long long>(std::ceil(maxr.get_d()));
  head_end = std::min(head_end, hi);
  for (long long h = lo; h <= head_end; ++h) {
    if (qpoly::eval(Q, h) == v) out.push_back(h);
  }
  if (head_end >= hi) return;
  const bool increasing = Q.c[deg] > 0;
  long long a = head_end + 1, b = hi;
  auto le_target = [&](long long h) {
    mpq_class y = qpoly::eval(Q, h);
    return increasing ? y <= v : y >= v;
  };
  if (!le_target(a)) return;
  while (a < b) {
    long long mid = a + (b - a + 1) / 2;
    if (le_target(mid)) {
      a = mid;
    } else {
      b = mid - 1;
    }
  }
  if (qpoly::eval(Q, a) == v && a > head_end) out.push_back(a);
}

FittedBound fit_log_bound(const std::vector<std::pair<double, double>>& pts) {
  FittedBound fb;
  fb.points = static_cast<int>(pts.size());
  if (pts.empty()) return fb;
  if (pts.size() == 1) {
    fb.a1 = 0.0;
    fb.a2 = std::max(0.0, pts[0].second);
    return fb;
  }
  // Least max-residual line over candidate slopes from support pairs,
  // lifted so the bound holds at every point.
  std::vector<double> slopes{0.0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double dx = pts[j].first - pts[i].first;
      if (std::abs(dx) < 1e-12) continue;
      double sl = (pts[j].second - pts[i].second) / dx;
      if (sl >= 0) slopes.push_back(sl);
    }
  }
  double best_res = -1, best_a1 = 0, best_a2 = 0;
  for (double a1 : slopes) {
    double a2 = 0;
    for (const auto& [x, y] : pts) a2 = std::max(a2, y - a1 * x);
    double res = 0;
    for (const auto& [x, y] : pts) res = std::max(res, a1 * x + a2 - y);
    if (best_res < 0 || res < best_res ||
        (res == best_res && a1 < best_a1)) {
      best_res = res;
      best_a1 = a1;
      best_a2 = a2;
    }
  }
  fb.a1 = best_a1;
  fb.a2 = std::max(0.0, best_a2);
  return fb;
}

}  // namespace

ReducedSolveReport solve_reduced(const ReducedEquation& req, long long M) {
  if (req.Q.deg() < 1) {
    throw ValidationError("solve_reduced: Q must be non-constant");
  }
  if (req.terms.empty()) throw ValidationError("solve_reduced: no RHS terms");
  for (const auto& t : req.terms) {
    if (abs(t.base) < 2) throw ValidationError("solve_reduced: |base| must be >= 2");
    if (t.d == 0) throw ValidationError("solve_reduced: zero term coefficient");
  }
  if (M < 0) throw ValidationError("solve_reduced: M must be nonnegative");
  ReducedSolveReport rep;
  if (M < req.n_offset) {
    rep.sols.complete_up_to_m = M;
    return rep;
  }
  const long long H = (M - req.n_offset) / req.n_stride;
  const int mt = static_cast<int>(req.terms.size());
  if (mt > 4) throw ResourceError("solve_reduced: too many terms to enumerate");

  // Instance-derived exponent bound: |g_i| <= G where
  // G = ceil(log_base(m * max|d| * maxcoef(Q) * (M+1)^deg)) + 2.
  double min_log_base = 1e300;
  for (const auto& t : req.terms) {
    min_log_base = std::min(min_log_base, std::log(std::abs(t.base.get_d())));
  }
  double maxd = 0;
  for (const auto& t : req.terms) maxd = std::max(maxd, std::abs(t.d.get_d()));
  double maxc = qpoly::max_abs_coeff(req.Q).get_d();
  double target = std::log(static_cast<double>(mt)) + std::log(maxd) +
                  std::log(maxc) +
                  static_cast<double>(req.Q.deg()) * std::log(static_cast<double>(M) + 1.0);
  long long G = static_cast<long long>(std::ceil(target / min_log_base)) + 2;
  G = std::max(G, 2ll);
  if (G > 512) throw ResourceError("solve_reduced: exponent bound too large");
  rep.g_bound = G;

  const long long g_lo = req.allow_negative ? -G : 0;
  double combos = std::pow(static_cast<double>(G - g_lo + 1), mt);
  if (combos > 6.0e7) throw ResourceError("solve_reduced: enumeration too large");

  // Power tables per term.
  std::vector<std::vector<mpq_class>> pw(mt);
  for (int t = 0; t < mt; ++t) {
    pw[t].resize(static_cast<std::size_t>(G - g_lo + 1));
    for (long long g = g_lo; g <= G; ++g) {
      pw[t][static_cast<std::size_t>(g - g_lo)] = mpq_pow_signed(req.terms[t].base, g);
    }
  }

  std::vector<long long> g(mt, g_lo);
  std::vector<long long> hs;
  std::vector<Solution> sols;
  while (true) {
    mpq_class v = 0;
    for (int t = 0; t < mt; ++t) {
      v += req.terms[t].d * pw[t][static_cast<std::size_t>(g[t] - g_lo)];
    }
    hs.clear();
    solve_poly_eq(req.Q, v, 0, H, hs);
    for (long long h : hs) {
      Solution s;
      s.n = req.n_stride * h + req.n_offset;
      s.k = g;
      sols.push_back(std::move(s));
    }
    int pos = 0;
    while (pos < mt) {
      if (++g[pos] <= G) break;
      g[pos] = g_lo;
      ++pos;
    }
    if (pos == mt) break;
  }
  sort_solutions(sols);
  rep.sols.solutions = std::move(sols);
  rep.sols.complete_up_to_m = M;
  rep.sols.complete_up_to_k = G;
  rep.sols.classification =
      req.allow_negative ? Classification::case2 : Classification::case1;

  std::vector<std::pair<double, double>> pts;
  for (const auto& s : rep.sols.solutions) {
    if (s.n < 2) continue;
    long long gy = 0;
    for (long long gi : s.k) gy = std::max(gy, gi < 0 ? -gi : gi);
    pts.emplace_back(std::log(static_cast<double>(s.n)), static_cast<double>(gy));
  }
  rep.fitted = fit_log_bound(pts);
  return rep;
}

std::vector<ProfileRow> count_profile(const std::vector<long long>& ns,
                                      const std::vector<long long>& checkpoints,
                                      int d) {
  if (d < 0) throw ValidationError("count_profile: d must be nonnegative");
  for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i) {
    if (checkpoints[i] >= checkpoints[i + 1]) {
      throw ValidationError("count_profile: checkpoints must be ascending");
    }
  }
  std::vector<long long> sorted = ns;
  std::sort(sorted.begin(), sorted.end());
  std::vector<ProfileRow> rows;
  for (long long M : checkpoints) {
    if (M < 1) throw ValidationError("count_profile: checkpoints must be >= 1");
    ProfileRow row;
    row.M = M;
    row.count = static_cast<long long>(
        std::upper_bound(sorted.begin(), sorted.end(), M) - sorted.begin());
    row.ratio = static_cast<double>(row.count) /
                std::pow(1.0 + std::log(static_cast<double>(M)), d);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace retset::polyexp

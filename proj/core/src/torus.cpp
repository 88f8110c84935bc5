#include "retset/torus.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace retset::torus {

using ffield::Fq;
using ffield::FqElem;
using ffield::Poly;
using ffield::RationalFunction;

std::string to_string(Rep r) {
  switch (r) {
    case Rep::monomial: return "monomial";
    case Rep::general: return "general";
    case Rep::specialized: return "specialized";
  }
  return "?";
}

std::string to_string(ScanMode m) {
  return m == ScanMode::exact ? "exact" : "montecarlo";
}

int TorusPoint::dim() const {
  switch (rep) {
    case Rep::monomial: return static_cast<int>(mono.size());
    case Rep::general: return static_cast<int>(gen.size());
    case Rep::specialized: return static_cast<int>(spec.size());
  }
  return 0;
}

TorusPoint TorusPoint::monomial(std::vector<MonomialCoord> coords) {
  TorusPoint P;
  P.rep = Rep::monomial;
  P.mono = std::move(coords);
  return P;
}

TorusPoint TorusPoint::general(std::vector<RationalFunction> coords) {
  TorusPoint P;
  P.rep = Rep::general;
  P.gen = std::move(coords);
  return P;
}

TorusPoint TorusPoint::specialized(std::vector<FqElem> coords) {
  TorusPoint P;
  P.rep = Rep::specialized;
  P.spec = std::move(coords);
  return P;
}

mpz_class det(const std::vector<std::vector<long long>>& A) {
  // Fraction-free Bareiss elimination.
  const int n = static_cast<int>(A.size());
  std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i][j] = static_cast<long>(A[i][j]);
  }
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k][k] == 0) {
      int swap_row = -1;
      for (int i = k + 1; i < n; ++i) {
        if (m[i][k] != 0) {
          swap_row = i;
          break;
        }
      }
      if (swap_row == -1) return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

void validate_point(const Fq& F, const TorusPoint& P, int N) {
  if (P.dim() != N) throw ValidationError("point dimension mismatch");
  switch (P.rep) {
    case Rep::monomial:
      for (const auto& c : P.mono) {
        if (F.is_zero(c.c)) throw ValidationError("torus point has a zero coordinate");
      }
      break;
    case Rep::general:
      for (const auto& c : P.gen) {
        if (c.is_zero()) throw ValidationError("torus point has a zero coordinate");
      }
      break;
    case Rep::specialized:
      for (const auto& c : P.spec) {
        if (F.is_zero(c)) throw ValidationError("torus point has a zero coordinate");
      }
      break;
  }
}

void validate(const Fq& F, const TorusMap& phi) {
  if (phi.N <= 0) throw ValidationError("map dimension must be positive");
  if (static_cast<int>(phi.A.size()) != phi.N) {
    throw ValidationError("matrix A must be N x N");
  }
  for (const auto& row : phi.A) {
    if (static_cast<int>(row.size()) != phi.N) {
      throw ValidationError("matrix A must be N x N");
    }
  }
  if (det(phi.A) == 0) {
    throw ValidationError("monomial action must be dominant: det(A) != 0");
  }
  validate_point(F, phi.beta, phi.N);
}

void validate(const Fq& F, const LaurentVariety& V) {
  if (V.N <= 0) throw ValidationError("variety dimension must be positive");
  if (V.dim_hint < 0 || V.dim_hint > V.N) {
    throw ValidationError("declared dim V must lie in [0, N]");
  }
  if (V.polys.empty()) throw ValidationError("variety needs defining polynomials");
  for (const auto& poly : V.polys) {
    if (poly.terms.empty()) {
      throw ValidationError("defining Laurent polynomial must be nonzero");
    }
    for (const auto& term : poly.terms) {
      if (term.coeff.is_zero()) {
        throw ValidationError("Laurent term coefficient must be nonzero");
      }
      if (static_cast<int>(term.exponents.size()) != V.N) {
        throw ValidationError("Laurent term exponent vector has wrong length");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Conversions

std::optional<MonomialCoord> to_monomial(const Fq& F, const RationalFunction& x) {
  if (x.is_zero()) return std::nullopt;
  // num = c * t^a: exactly one nonzero slot.
  long long a = -1;
  for (std::size_t i = 0; i < x.num.len; ++i) {
    if (!F.is_zero(ffield::p_coeff(F, x.num, i))) {
      if (a != -1) return std::nullopt;
      a = static_cast<long long>(i);
    }
  }
  // den = t^b (monic single slot at the top).
  for (std::size_t i = 0; i + 1 < x.den.len; ++i) {
    if (!F.is_zero(ffield::p_coeff(F, x.den, i))) return std::nullopt;
  }
  MonomialCoord mc;
  mc.c = ffield::p_coeff(F, x.num, static_cast<std::size_t>(a));
  mc.e = static_cast<long>(a - x.den.deg());
  return mc;
}

RationalFunction to_general(const Fq& F, const MonomialCoord& c) {
  constexpr long long kDenseCap = 1ll << 22;
  if (abs(c.e) > static_cast<long>(kDenseCap)) {
    throw ResourceError("monomial exponent too large for a dense conversion");
  }
  const long long e = c.e.get_si();
  Poly num = ffield::p_const(F, c.c);
  Poly den = ffield::p_one(F);
  if (e >= 0) {
    num = ffield::p_shift(F, num, static_cast<std::size_t>(e));
  } else {
    den = ffield::p_shift(F, den, static_cast<std::size_t>(-e));
  }
  return RationalFunction{std::move(num), std::move(den)};
}

TorusPoint point_to_general(const Fq& F, const TorusPoint& P) {
  if (P.rep == Rep::general) return P;
  if (P.rep != Rep::monomial) {
    throw ValidationError("cannot lift a specialized point back to K");
  }
  std::vector<RationalFunction> coords;
  coords.reserve(P.mono.size());
  for (const auto& c : P.mono) coords.push_back(to_general(F, c));
  return TorusPoint::general(std::move(coords));
}

std::optional<TorusPoint> point_to_monomial(const Fq& F, const TorusPoint& P) {
  if (P.rep == Rep::monomial) return P;
  if (P.rep != Rep::general) return std::nullopt;
  std::vector<MonomialCoord> coords;
  coords.reserve(P.gen.size());
  for (const auto& x : P.gen) {
    auto mc = to_monomial(F, x);
    if (!mc) return std::nullopt;
    coords.push_back(std::move(*mc));
  }
  return TorusPoint::monomial(std::move(coords));
}

// ---------------------------------------------------------------------------
// Map application

TorusPoint apply_map(const Fq& F, const TorusMap& phi, const TorusPoint& P,
                     WorkBudget* budget) {
  if (P.dim() != phi.N) throw ValidationError("point/map dimension mismatch");
  switch (P.rep) {
    case Rep::monomial: {
      auto beta = point_to_monomial(F, phi.beta);
      if (!beta) {
        throw ValidationError(
            "translation is not monomial; representations are incompatible");
      }
      std::vector<MonomialCoord> out(phi.N);
      for (int i = 0; i < phi.N; ++i) {
        FqElem c = beta->mono[i].c;
        mpz_class e = beta->mono[i].e;
        for (int j = 0; j < phi.N; ++j) {
          const long long a = phi.A[i][j];
          if (a == 0) continue;
          c = F.mul(c, F.pow(P.mono[j].c, mpz_class(static_cast<long>(a))));
          e += P.mono[j].e * static_cast<long>(a);
        }
        if (F.is_zero(c)) {
          throw ValidationError("internal: zero coordinate from a torus map");
        }
        out[i] = MonomialCoord{std::move(c), std::move(e)};
      }
      return TorusPoint::monomial(std::move(out));
    }
    case Rep::general: {
      TorusPoint beta = point_to_general(F, phi.beta);
      std::vector<RationalFunction> out(phi.N);
      for (int i = 0; i < phi.N; ++i) {
        RationalFunction acc = beta.gen[i];
        for (int j = 0; j < phi.N; ++j) {
          const long long a = phi.A[i][j];
          if (a == 0) continue;
          acc = ffield::rf_mul(F, acc, ffield::rf_pow(F, P.gen[j], a, budget),
                               budget);
        }
        if (acc.is_zero()) {
          throw ValidationError("internal: zero coordinate from a torus map");
        }
        out[i] = std::move(acc);
      }
      return TorusPoint::general(std::move(out));
    }
    case Rep::specialized: {
      if (phi.beta.rep != Rep::specialized) {
        throw ValidationError("specialized scan requires a specialized translation");
      }
      std::vector<FqElem> out(phi.N);
      for (int i = 0; i < phi.N; ++i) {
        FqElem c = phi.beta.spec[i];
        for (int j = 0; j < phi.N; ++j) {
          const long long a = phi.A[i][j];
          if (a == 0) continue;
          if (F.is_zero(P.spec[j])) {
            throw BadSpecialization("zero coordinate under specialization");
          }
          c = F.mul(c, F.pow(P.spec[j], mpz_class(static_cast<long>(a))));
        }
        if (F.is_zero(c)) {
          throw BadSpecialization("zero coordinate under specialization");
        }
        out[i] = std::move(c);
      }
      return TorusPoint::specialized(std::move(out));
    }
  }
  throw ValidationError("unknown representation");
}

// ---------------------------------------------------------------------------
// Membership

namespace {

bool laurent_vanishes_general(const Fq& F, const LaurentPoly& poly,
                              const std::vector<RationalFunction>& x,
                              WorkBudget* budget) {
  RationalFunction acc = ffield::rf_zero(F);
  for (const auto& term : poly.terms) {
    RationalFunction val = term.coeff;
    for (std::size_t i = 0; i < term.exponents.size(); ++i) {
      if (term.exponents[i] == 0) continue;
      val = ffield::rf_mul(F, val, ffield::rf_pow(F, x[i], term.exponents[i], budget),
                           budget);
    }
    acc = ffield::rf_add(F, acc, val, budget);
  }
  return acc.is_zero();
}

// Monomial-point membership: each term contributes R_j(t) * t^{E_j} with a
// rational coefficient and a (possibly huge) integer exponent. After
// clearing denominators, terms whose supports do not overlap cannot cancel,
// so the sum vanishes iff every overlap cluster sums to zero.
bool laurent_vanishes_monomial(const Fq& F, const LaurentPoly& poly,
                               const std::vector<MonomialCoord>& x,
                               WorkBudget* budget) {
  struct Entry {
    mpz_class E;
    RationalFunction R;
  };
  std::vector<Entry> entries;
  for (const auto& term : poly.terms) {
    FqElem gamma = F.one();
    mpz_class E = 0;
    for (std::size_t i = 0; i < term.exponents.size(); ++i) {
      const long long v = term.exponents[i];
      if (v == 0) continue;
      gamma = F.mul(gamma, F.pow(x[i].c, mpz_class(static_cast<long>(v))));
      E += x[i].e * static_cast<long>(v);
    }
    RationalFunction R =
        ffield::rf_mul(F, term.coeff, ffield::rf_from_elem(F, gamma), budget);
    entries.push_back(Entry{std::move(E), std::move(R)});
  }
  // Common denominator.
  Poly D = ffield::p_one(F);
  for (const auto& e : entries) {
    Poly g = ffield::p_gcd(F, D, e.R.den, budget);
    D = ffield::p_mul(F, ffield::p_divrem(F, D, g, budget).first, e.R.den, budget);
  }
  struct Cleared {
    mpz_class E;
    Poly P;
  };
  std::vector<Cleared> cleared;
  for (const auto& e : entries) {
    Poly scale = ffield::p_divrem(F, D, e.R.den, budget).first;
    cleared.push_back(Cleared{e.E, ffield::p_mul(F, e.R.num, scale, budget)});
  }
  std::sort(cleared.begin(), cleared.end(),
            [](const Cleared& a, const Cleared& b) { return a.E < b.E; });
  std::size_t i = 0;
  while (i < cleared.size()) {
    // Grow the overlap cluster.
    mpz_class base = cleared[i].E;
    mpz_class reach = cleared[i].E + static_cast<long>(cleared[i].P.deg());
    std::size_t j = i + 1;
    while (j < cleared.size() && cleared[j].E <= reach) {
      reach = std::max(
          reach, mpz_class(cleared[j].E + static_cast<long>(cleared[j].P.deg())));
      ++j;
    }
    mpz_class span = reach - base;
    if (span > (1 << 22)) {
      throw ResourceError("monomial membership cluster span too large");
    }
    Poly sum;
    for (std::size_t k = i; k < j; ++k) {
      const std::size_t shift = mpz_class(cleared[k].E - base).get_ui();
      sum = ffield::p_add(F, sum, ffield::p_shift(F, cleared[k].P, shift));
      charge(budget, cleared[k].P.len + shift);
    }
    if (!sum.is_zero()) return false;
    i = j;
  }
  return true;
}

}  // namespace

bool on_variety(const Fq& F, const LaurentVariety& V, const TorusPoint& P,
                WorkBudget* budget) {
  if (P.dim() != V.N) throw ValidationError("point/variety dimension mismatch");
  switch (P.rep) {
    case Rep::general:
      for (const auto& poly : V.polys) {
        if (!laurent_vanishes_general(F, poly, P.gen, budget)) return false;
      }
      return true;
    case Rep::monomial:
      for (const auto& poly : V.polys) {
        if (!laurent_vanishes_monomial(F, poly, P.mono, budget)) return false;
      }
      return true;
    case Rep::specialized:
      throw ValidationError(
          "specialized membership needs the specialized variety; use "
          "on_variety_specialized");
  }
  return false;
}

// ---------------------------------------------------------------------------
// Specialization

ffield::FqElem specialize(const Specialization& S, const RationalFunction& x) {
  return ffield::rf_specialize(*S.src, x, *S.dst, S.tau, S.gen_image);
}

ffield::FqElem specialize(const Specialization& S, const MonomialCoord& x) {
  const FqElem c = ffield::embed(*S.src, *S.dst, x.c, S.gen_image);
  if (S.dst->is_zero(S.tau)) {
    throw BadSpecialization("specialization point is zero");
  }
  return S.dst->mul(c, S.dst->pow_mod_order(S.tau, x.e));
}

TorusPoint specialize(const Specialization& S, const TorusPoint& P) {
  std::vector<FqElem> out;
  switch (P.rep) {
    case Rep::monomial:
      for (const auto& c : P.mono) out.push_back(specialize(S, c));
      break;
    case Rep::general:
      for (const auto& c : P.gen) out.push_back(specialize(S, c));
      break;
    case Rep::specialized:
      out = P.spec;
      break;
  }
  for (const auto& c : out) {
    if (S.dst->is_zero(c)) {
      throw BadSpecialization("coordinate vanishes at the specialization point");
    }
  }
  return TorusPoint::specialized(std::move(out));
}

TorusMap specialize(const Specialization& S, const TorusMap& phi) {
  TorusMap out;
  out.N = phi.N;
  out.A = phi.A;
  out.beta = specialize(S, phi.beta);
  return out;
}

SpecializedVariety specialize(const Specialization& S, const LaurentVariety& V) {
  SpecializedVariety out;
  out.N = V.N;
  for (const auto& poly : V.polys) {
    std::vector<SpecializedTerm> terms;
    for (const auto& term : poly.terms) {
      SpecializedTerm st;
      st.coeff = specialize(S, term.coeff);
      st.exponents = term.exponents;
      terms.push_back(std::move(st));
    }
    out.polys.push_back(std::move(terms));
  }
  return out;
}

bool on_variety_specialized(const Fq& dst, const SpecializedVariety& V,
                            const TorusPoint& P) {
  if (P.rep != Rep::specialized || P.dim() != V.N) {
    throw ValidationError("on_variety_specialized needs a specialized point");
  }
  for (const auto& poly : V.polys) {
    FqElem acc = dst.zero();
    for (const auto& term : poly) {
      FqElem val = term.coeff;
      for (std::size_t i = 0; i < term.exponents.size(); ++i) {
        const long long e = term.exponents[i];
        if (e == 0) continue;
        if (dst.is_zero(P.spec[i])) {
          if (e < 0) throw BadSpecialization("negative power of a vanished coordinate");
          val = dst.zero();
          break;
        }
        val = dst.mul(val, dst.pow(P.spec[i], mpz_class(static_cast<long>(e))));
      }
      acc = dst.add(acc, val);
    }
    if (!dst.is_zero(acc)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Degree projection

mpz_class projected_membership_degree(const Fq& F, const TorusMap& phi,
                                      const TorusPoint& alpha,
                                      const LaurentVariety& V, long long M) {
  const int N = phi.N;
  std::vector<mpz_class> B(N, 0);
  const TorusPoint alpha_g = point_to_general(F, alpha);
  for (int i = 0; i < N; ++i) {
    B[i] = static_cast<long>(ffield::rf_deg_bound(alpha_g.gen[i]));
  }
  std::vector<mpz_class> Bbeta(N, 0);
  const TorusPoint beta_g = point_to_general(F, phi.beta);
  for (int i = 0; i < N; ++i) {
    Bbeta[i] = static_cast<long>(ffield::rf_deg_bound(beta_g.gen[i]));
  }

  std::vector<mpz_class> coeff_deg;
  std::vector<std::vector<long long>> exps;
  for (const auto& poly : V.polys) {
    for (const auto& term : poly.terms) {
      coeff_deg.push_back(static_cast<long>(ffield::rf_deg_bound(term.coeff)));
      exps.push_back(term.exponents);
    }
  }

  auto membership_bound = [&](const std::vector<mpz_class>& deg) {
    mpz_class total = 0;
    for (std::size_t t = 0; t < exps.size(); ++t) {
      mpz_class term = coeff_deg[t];
      for (int i = 0; i < N; ++i) {
        long long v = exps[t][i];
        term += deg[i] * static_cast<long>(v < 0 ? -v : v);
      }
      total += term;
    }
    return total;
  };

  mpz_class best = membership_bound(B);
  for (long long n = 0; n < M; ++n) {
    std::vector<mpz_class> next(N, 0);
    for (int i = 0; i < N; ++i) {
      mpz_class acc = Bbeta[i];
      for (int j = 0; j < N; ++j) {
        long long a = phi.A[i][j];
        acc += B[j] * static_cast<long>(a < 0 ? -a : a);
      }
      next[i] = acc;
    }
    B = std::move(next);
    best = std::max(best, membership_bound(B));
    if (mpz_sizeinbase(best.get_mpz_t(), 2) > 100000) {
      throw ResourceError(
          "projected degree beyond any feasible Monte Carlo field size");
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Return sets

namespace {

std::vector<long long> exact_scan(const Fq& F, const TorusMap& phi,
                                  TorusPoint P, const LaurentVariety& V,
                                  long long M, const ReturnSetOptions& opts) {
  std::vector<long long> ns;
  for (long long n = 0; n <= M; ++n) {
    WorkBudget budget{opts.exact_step_budget};
    try {
      if (on_variety(F, V, P, &budget)) ns.push_back(n);
      if (n < M) P = apply_map(F, phi, P, &budget);
    } catch (const ResourceError& e) {
      throw ResourceError(std::string(e.what()) +
                          " at step n=" + std::to_string(n) +
                          "; montecarlo mode is recommended for this instance");
    }
  }
  return ns;
}

std::vector<long long> specialized_scan(const Fq& T, const TorusMap& phi_s,
                                        TorusPoint P,
                                        const SpecializedVariety& V_s,
                                        long long M) {
  std::vector<long long> ns;
  for (long long n = 0; n <= M; ++n) {
    if (on_variety_specialized(T, V_s, P)) ns.push_back(n);
    if (n < M) P = apply_map(T, phi_s, P);
  }
  return ns;
}

}  // namespace

ReturnSetResult return_set(const Fq& F, const TorusMap& phi,
                           const TorusPoint& alpha, const LaurentVariety& V,
                           long long M, ScanMode mode,
                           const ReturnSetOptions& opts) {
  validate(F, phi);
  validate(F, V);
  validate_point(F, alpha, phi.N);
  if (V.N != phi.N) throw ValidationError("variety/map dimension mismatch");
  if (M < 0) throw ValidationError("M must be nonnegative");

  ReturnSetResult res;
  res.seed = opts.seed;

  // Monomial exponent tracking is exact and cheap whenever both alpha and
  // beta are monomial, so it serves either mode.
  auto alpha_m = point_to_monomial(F, alpha);
  auto beta_m = point_to_monomial(F, phi.beta);
  if (alpha_m && beta_m) {
    res.mode = ScanMode::exact;
    res.representation = Rep::monomial;
    res.ns = exact_scan(F, phi, *alpha_m, V, M, opts);
    return res;
  }

  if (mode == ScanMode::exact) {
    res.mode = ScanMode::exact;
    res.representation = Rep::general;
    res.ns = exact_scan(F, phi, point_to_general(F, alpha), V, M, opts);
    return res;
  }

  // Monte Carlo: pick the field so that degree/size <= the per-trial target.
  // Bit length is a safe stand-in for log2 of a huge bound.
  const mpz_class D = projected_membership_degree(F, phi, alpha, V, M);
  const double log2_D =
      D <= 1 ? 0.0 : static_cast<double>(mpz_sizeinbase(D.get_mpz_t(), 2));
  const double log2_p = std::log2(static_cast<double>(F.p()));
  const double bits_needed = log2_D - std::log2(opts.mc_per_trial_error);
  unsigned d_needed = static_cast<unsigned>(std::ceil(bits_needed / log2_p)) + 1;
  const unsigned d0 = F.degree();
  unsigned d_field = ((d_needed + d0 - 1) / d0) * d0;
  if (d_field > opts.mc_max_field_degree) {
    throw ResourceError(
        "montecarlo specialization would need an extension of degree " +
        std::to_string(d_field) + "; beyond the configured cap");
  }

  std::mt19937_64 rng(opts.seed * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull);
  const Fq T = ffield::make_extension(F.p(), d_field, opts.seed);
  FqElem gen_image = T.zero();
  if (d0 > 1) gen_image = ffield::find_root(T, F.modulus(), rng);

  const TorusPoint alpha_src = alpha;
  std::vector<std::vector<long long>> trial_sets;
  int retries = 0;
  while (static_cast<int>(trial_sets.size()) < opts.mc_trials) {
    Specialization S;
    S.src = &F;
    S.dst = &T;
    S.gen_image = gen_image;
    S.tau = T.sample(rng);
    try {
      TorusMap phi_s = specialize(S, phi);
      TorusPoint alpha_s = specialize(S, alpha_src);
      SpecializedVariety V_s = specialize(S, V);
      trial_sets.push_back(specialized_scan(T, phi_s, alpha_s, V_s, M));
    } catch (const BadSpecialization&) {
      if (++retries > opts.mc_max_retries) {
        throw ResourceError("montecarlo: too many bad specialization points");
      }
    }
  }
  // Accept n only if every trial accepted it.
  std::vector<long long> ns = trial_sets[0];
  for (std::size_t t = 1; t < trial_sets.size(); ++t) {
    std::vector<long long> keep;
    std::set_intersection(ns.begin(), ns.end(), trial_sets[t].begin(),
                          trial_sets[t].end(), std::back_inserter(keep));
    ns = std::move(keep);
  }
  res.mode = ScanMode::montecarlo;
  res.representation = Rep::specialized;
  res.ns = std::move(ns);
  res.trials = opts.mc_trials;
  res.spec_field_degree = d_field;
  res.per_trial_ratio = std::exp2(log2_D - d_field * log2_p);
  res.error_bound = std::pow(res.per_trial_ratio, opts.mc_trials);
  return res;
}

std::vector<OrbitRow> orbit(const Fq& F, const TorusMap& phi,
                            const TorusPoint& alpha, const LaurentVariety& V,
                            long long steps, WorkBudget* budget) {
  validate(F, phi);
  validate(F, V);
  validate_point(F, alpha, phi.N);
  std::vector<OrbitRow> rows;
  TorusPoint P = alpha;
  auto alpha_m = point_to_monomial(F, alpha);
  auto beta_m = point_to_monomial(F, phi.beta);
  if (alpha_m && beta_m) P = *alpha_m;
  for (long long n = 0; n <= steps; ++n) {
    OrbitRow row;
    row.n = n;
    if (P.rep == Rep::monomial) {
      for (const auto& c : P.mono) {
        row.coords.push_back("(" + F.to_string(c.c) + ")*t^" + c.e.get_str());
      }
    } else {
      for (const auto& c : P.gen) {
        row.coords.push_back(ffield::rf_to_string(F, c));
      }
    }
    row.in_variety = on_variety(F, V, P, budget);
    rows.push_back(std::move(row));
    if (n < steps) P = apply_map(F, phi, P, budget);
  }
  return rows;
}

}  // namespace retset::torus

#include "retset/ffield.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace retset::ffield {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  if (s >= p || s < a) s -= p;
  return s;
}

u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

u64 mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>((u128)a * b % p);
}

u64 powmod_u64(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  if (a % p == 0) throw ValidationError("division by zero in F_p");
  return powmod_u64(a % p, p - 2, p);
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod_u64(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// FpPoly

FpPoly fp_normalize(FpPoly a) {
  while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
  return a;
}

FpPoly fp_add(u64 p, const FpPoly& a, const FpPoly& b) {
  FpPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    u64 x = i < a.c.size() ? a.c[i] : 0;
    u64 y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = addmod(x, y, p);
  }
  return fp_normalize(std::move(r));
}

FpPoly fp_sub(u64 p, const FpPoly& a, const FpPoly& b) {
  FpPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    u64 x = i < a.c.size() ? a.c[i] : 0;
    u64 y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = submod(x, y, p);
  }
  return fp_normalize(std::move(r));
}

FpPoly fp_mul(u64 p, const FpPoly& a, const FpPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  FpPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      r.c[i + j] = addmod(r.c[i + j], mulmod(a.c[i], b.c[j], p), p);
    }
  }
  return fp_normalize(std::move(r));
}

std::pair<FpPoly, FpPoly> fp_divrem(u64 p, const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw ValidationError("polynomial division by zero");
  if (a.c.size() < b.c.size()) return {{}, a};
  FpPoly rem = a;
  FpPoly quo;
  quo.c.assign(a.c.size() - b.c.size() + 1, 0);
  const u64 lead_inv = invmod(b.c.back(), p);
  for (std::size_t i = a.c.size(); i-- >= b.c.size();) {
    if (i >= rem.c.size() || rem.c[i] == 0) {
      if (i == 0) break;
      continue;
    }
    const u64 q = mulmod(rem.c[i], lead_inv, p);
    quo.c[i - b.c.size() + 1] = q;
    const std::size_t off = i - (b.c.size() - 1);
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      rem.c[off + j] = submod(rem.c[off + j], mulmod(q, b.c[j], p), p);
    }
    if (i == 0) break;
  }
  return {fp_normalize(std::move(quo)), fp_normalize(std::move(rem))};
}

FpPoly fp_mod(u64 p, const FpPoly& a, const FpPoly& b) {
  return fp_divrem(p, a, b).second;
}

FpPoly fp_monic(u64 p, FpPoly a) {
  if (a.is_zero()) return a;
  const u64 s = invmod(a.c.back(), p);
  if (s != 1) {
    for (auto& x : a.c) x = mulmod(x, s, p);
  }
  return a;
}

FpPoly fp_gcd(u64 p, FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = fp_mod(p, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return fp_monic(p, std::move(a));
}

FpPoly fp_pow_t_pk(u64 p, unsigned k, const FpPoly& m) {
  FpPoly x;
  x.c = {0, 1};
  x = fp_mod(p, x, m);
  mpz_class pe = p;
  for (unsigned round = 0; round < k; ++round) {
    // x <- x^p mod m by square-and-multiply over the exponent p.
    FpPoly acc;
    acc.c = {1};
    FpPoly base = x;
    u64 e = p;
    while (e > 0) {
      if (e & 1) acc = fp_mod(p, fp_mul(p, acc, base), m);
      e >>= 1;
      if (e > 0) base = fp_mod(p, fp_mul(p, base, base), m);
    }
    x = std::move(acc);
  }
  return x;
}

bool fp_rabin_irreducible(u64 p, const FpPoly& m) {
  const long long d = m.deg();
  if (d < 1) return false;
  if (d == 1) return true;
  // t^(p^d) == t (mod m)
  FpPoly t;
  t.c = {0, 1};
  FpPoly top = fp_pow_t_pk(p, static_cast<unsigned>(d), m);
  if (fp_sub(p, top, fp_mod(p, t, m)) != FpPoly{}) return false;
  // gcd(t^(p^(d/r)) - t, m) == 1 for each prime r | d
  long long dd = d;
  std::vector<long long> prime_divs;
  for (long long r = 2; r * r <= dd; ++r) {
    if (dd % r == 0) {
      prime_divs.push_back(r);
      while (dd % r == 0) dd /= r;
    }
  }
  if (dd > 1) prime_divs.push_back(dd);
  for (long long r : prime_divs) {
    FpPoly mid = fp_pow_t_pk(p, static_cast<unsigned>(d / r), m);
    FpPoly g = fp_gcd(p, fp_sub(p, mid, fp_mod(p, t, m)), m);
    if (g.deg() != 0) return false;
  }
  return true;
}

std::string fp_to_string(const FpPoly& a) {
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
      if (a.c[i] != 1) os << a.c[i] << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Fq

Fq::Fq(u64 p) : Fq(p, FpPoly{{0, 1}}) {}

Fq::Fq(u64 p, FpPoly modulus) : p_(p), modulus_(fp_normalize(std::move(modulus))) {
  if (!is_prime_u64(p_)) {
    throw ValidationError("field characteristic must be prime, got " +
                          std::to_string(p_));
  }
  if (p_ >= (1ull << 31)) {
    throw ValidationError("characteristic too large for the residue kernel");
  }
  if (modulus_.deg() < 1) throw ValidationError("modulus must be non-constant");
  modulus_ = fp_monic(p_, std::move(modulus_));
  for (auto& x : modulus_.c) x %= p_;
  d_ = static_cast<unsigned>(modulus_.deg());
  mpz_ui_pow_ui(order_.get_mpz_t(), static_cast<unsigned long>(p_), d_);
}

FqElem Fq::zero() const { return FqElem{std::vector<u64>(d_, 0)}; }

FqElem Fq::one() const {
  FqElem e = zero();
  e.v[0] = 1 % p_;
  return e;
}

FqElem Fq::from_int(long long v) const {
  long long r = v % static_cast<long long>(p_);
  if (r < 0) r += static_cast<long long>(p_);
  FqElem e = zero();
  e.v[0] = static_cast<u64>(r);
  return e;
}

FqElem Fq::from_coeffs(const std::vector<long long>& coeffs) const {
  FpPoly raw;
  raw.c.reserve(coeffs.size());
  for (long long v : coeffs) {
    long long r = v % static_cast<long long>(p_);
    if (r < 0) r += static_cast<long long>(p_);
    raw.c.push_back(static_cast<u64>(r));
  }
  raw = fp_mod(p_, fp_normalize(std::move(raw)), modulus_);
  FqElem e = zero();
  for (std::size_t i = 0; i < raw.c.size(); ++i) e.v[i] = raw.c[i];
  return e;
}

FqElem Fq::gen() const {
  FqElem e = zero();
  if (d_ >= 2) {
    e.v[1] = 1;
  }
  return e;
}

bool Fq::is_zero(const FqElem& a) const { return span_is_zero(a.v.data()); }

bool Fq::is_one(const FqElem& a) const { return a == one(); }

FqElem Fq::add(const FqElem& a, const FqElem& b) const {
  FqElem r = zero();
  span_add(a.v.data(), b.v.data(), r.v.data());
  return r;
}

FqElem Fq::sub(const FqElem& a, const FqElem& b) const {
  FqElem r = zero();
  span_sub(a.v.data(), b.v.data(), r.v.data());
  return r;
}

FqElem Fq::neg(const FqElem& a) const {
  FqElem r = zero();
  span_neg(a.v.data(), r.v.data());
  return r;
}

FqElem Fq::mul(const FqElem& a, const FqElem& b) const {
  FqElem r = zero();
  std::vector<u64> scratch(2 * d_, 0);
  span_mul(a.v.data(), b.v.data(), r.v.data(), scratch.data());
  return r;
}

FqElem Fq::inv(const FqElem& a) const {
  if (is_zero(a)) throw ValidationError("inversion of zero field element");
  // Extended Euclid for (a, modulus) over F_p[x].
  FpPoly r0 = modulus_;
  FpPoly r1 = fp_normalize(FpPoly{a.v});
  FpPoly s0{};           // 0
  FpPoly s1{{1}};        // 1
  while (!r1.is_zero()) {
    auto [q, r2] = fp_divrem(p_, r0, r1);
    FpPoly s2 = fp_sub(p_, s0, fp_mul(p_, q, s1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r0 = gcd = nonzero constant (modulus irreducible)
  if (r0.deg() != 0) throw ValidationError("element not invertible: reducible modulus?");
  const u64 scale = invmod(r0.c[0], p_);
  FqElem out = zero();
  for (std::size_t i = 0; i < s0.c.size(); ++i) out.v[i] = mulmod(s0.c[i], scale, p_);
  return out;
}

FqElem Fq::div(const FqElem& a, const FqElem& b) const { return mul(a, inv(b)); }

FqElem Fq::pow(const FqElem& a, const mpz_class& e) const {
  if (sgn(e) == 0) return one();
  FqElem base = a;
  mpz_class exp = e;
  if (sgn(exp) < 0) {
    base = inv(base);
    exp = -exp;
  }
  if (is_zero(base)) return zero();
  FqElem acc = one();
  const std::size_t bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    acc = mul(acc, acc);
    if (mpz_tstbit(exp.get_mpz_t(), i)) acc = mul(acc, base);
  }
  return acc;
}

FqElem Fq::pow_mod_order(const FqElem& a, const mpz_class& e) const {
  if (is_zero(a)) {
    if (sgn(e) < 0) throw ValidationError("negative power of zero");
    return sgn(e) == 0 ? one() : zero();
  }
  mpz_class m = order_ - 1;
  mpz_class r = e % m;
  if (sgn(r) < 0) r += m;
  return pow(a, r);
}

FqElem Fq::frobenius(const FqElem& a, std::uint64_t e) const {
  if (is_zero(a)) return a;
  const std::uint64_t steps = e % d_;
  FqElem r = a;
  const mpz_class pz(static_cast<unsigned long>(p_));
  for (std::uint64_t i = 0; i < steps; ++i) r = pow(r, pz);
  return r;
}

FqElem Fq::sample(std::mt19937_64& rng) const {
  FqElem e = zero();
  for (unsigned i = 0; i < d_; ++i) e.v[i] = rng() % p_;
  return e;
}

std::string Fq::to_string(const FqElem& a) const {
  if (d_ == 1) return std::to_string(a.v[0]);
  return fp_to_string(fp_normalize(FpPoly{a.v}));
}

void Fq::span_clear(u64* dst) const { std::fill(dst, dst + d_, 0); }

void Fq::span_set(u64* dst, const u64* src) const {
  std::copy(src, src + d_, dst);
}

bool Fq::span_is_zero(const u64* a) const {
  for (unsigned i = 0; i < d_; ++i) {
    if (a[i] != 0) return false;
  }
  return true;
}

void Fq::span_add(const u64* a, const u64* b, u64* out) const {
  for (unsigned i = 0; i < d_; ++i) out[i] = addmod(a[i], b[i], p_);
}

void Fq::span_sub(const u64* a, const u64* b, u64* out) const {
  for (unsigned i = 0; i < d_; ++i) out[i] = submod(a[i], b[i], p_);
}

void Fq::span_neg(const u64* a, u64* out) const {
  for (unsigned i = 0; i < d_; ++i) out[i] = a[i] == 0 ? 0 : p_ - a[i];
}

void Fq::span_mul(const u64* a, const u64* b, u64* out, u64* scratch) const {
  if (d_ == 1) {
    out[0] = mulmod(a[0], b[0], p_);
    return;
  }
  std::fill(scratch, scratch + 2 * d_, 0);
  for (unsigned i = 0; i < d_; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < d_; ++j) {
      scratch[i + j] = addmod(scratch[i + j], mulmod(a[i], b[j], p_), p_);
    }
  }
  // Reduce by the monic modulus.
  for (unsigned i = 2 * d_ - 1; i >= d_; --i) {
    const u64 c = scratch[i];
    if (c == 0) continue;
    scratch[i] = 0;
    const unsigned off = i - d_;
    for (unsigned j = 0; j < d_; ++j) {
      scratch[off + j] = submod(scratch[off + j], mulmod(c, modulus_.c[j], p_), p_);
    }
  }
  std::copy(scratch, scratch + d_, out);
}

void Fq::span_addmul(u64* acc, const u64* a, const u64* b, u64* scratch) const {
  if (d_ == 1) {
    acc[0] = addmod(acc[0], mulmod(a[0], b[0], p_), p_);
    return;
  }
  u64* prod = scratch + 2 * d_;
  span_mul(a, b, prod, scratch);
  for (unsigned i = 0; i < d_; ++i) acc[i] = addmod(acc[i], prod[i], p_);
}

Fq make_extension(u64 p, unsigned d, u64 seed) {
  if (!is_prime_u64(p)) {
    throw ValidationError("make_extension: p must be prime, got " +
                          std::to_string(p));
  }
  if (d == 0) throw ValidationError("make_extension: degree must be positive");
  if (d > 4096) throw ResourceError("make_extension: degree beyond the desk-scale cap");
  if (d == 1) return Fq(p);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0x6a09e667f3bcc909ull + d);
  for (int attempt = 0; attempt < 200000; ++attempt) {
    FpPoly cand;
    cand.c.resize(d + 1, 0);
    cand.c[d] = 1;
    for (unsigned i = 0; i < d; ++i) cand.c[i] = rng() % p;
    cand = fp_normalize(std::move(cand));
    if (cand.deg() != static_cast<long long>(d)) continue;
    if (fp_rabin_irreducible(p, cand)) return Fq(p, cand);
  }
  throw ResourceError("make_extension: no irreducible candidate found");
}

// ---------------------------------------------------------------------------
// Poly over Fq

namespace {

const u64* slot(const Fq& F, const Poly& a, std::size_t i) {
  return a.flat.data() + i * F.degree();
}

u64* slot(const Fq& F, Poly& a, std::size_t i) {
  return a.flat.data() + i * F.degree();
}

Poly p_alloc(const Fq& F, std::size_t len) {
  Poly r;
  r.len = len;
  r.flat.assign(len * F.degree(), 0);
  return r;
}

}  // namespace

Poly p_zero() { return Poly{}; }

Poly p_one(const Fq& F) { return p_const(F, F.one()); }

Poly p_t(const Fq& F) {
  Poly r = p_alloc(F, 2);
  F.span_set(slot(F, r, 1), F.one().v.data());
  return r;
}

Poly p_const(const Fq& F, const FqElem& c) {
  if (F.is_zero(c)) return {};
  Poly r = p_alloc(F, 1);
  F.span_set(slot(F, r, 0), c.v.data());
  return r;
}

Poly p_from_coeffs(const Fq& F, const std::vector<FqElem>& coeffs) {
  Poly r = p_alloc(F, coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    F.span_set(slot(F, r, i), coeffs[i].v.data());
  }
  p_normalize(F, r);
  return r;
}

FqElem p_coeff(const Fq& F, const Poly& a, std::size_t i) {
  FqElem e = F.zero();
  if (i < a.len) F.span_set(e.v.data(), slot(F, a, i));
  return e;
}

FqElem p_lead(const Fq& F, const Poly& a) {
  if (a.is_zero()) return F.zero();
  return p_coeff(F, a, a.len - 1);
}

void p_normalize(const Fq& F, Poly& a) {
  while (a.len > 0 && F.span_is_zero(slot(F, a, a.len - 1))) --a.len;
  a.flat.resize(a.len * F.degree());
}

Poly p_add(const Fq& F, const Poly& a, const Poly& b) {
  const std::size_t n = std::max(a.len, b.len);
  Poly r = p_alloc(F, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < a.len && i < b.len) {
      F.span_add(slot(F, a, i), slot(F, b, i), slot(F, r, i));
    } else if (i < a.len) {
      F.span_set(slot(F, r, i), slot(F, a, i));
    } else {
      F.span_set(slot(F, r, i), slot(F, b, i));
    }
  }
  p_normalize(F, r);
  return r;
}

Poly p_sub(const Fq& F, const Poly& a, const Poly& b) {
  const std::size_t n = std::max(a.len, b.len);
  Poly r = p_alloc(F, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < a.len && i < b.len) {
      F.span_sub(slot(F, a, i), slot(F, b, i), slot(F, r, i));
    } else if (i < a.len) {
      F.span_set(slot(F, r, i), slot(F, a, i));
    } else {
      F.span_neg(slot(F, b, i), slot(F, r, i));
    }
  }
  p_normalize(F, r);
  return r;
}

Poly p_neg(const Fq& F, const Poly& a) {
  Poly r = p_alloc(F, a.len);
  for (std::size_t i = 0; i < a.len; ++i) F.span_neg(slot(F, a, i), slot(F, r, i));
  return r;
}

Poly p_mul(const Fq& F, const Poly& a, const Poly& b, WorkBudget* budget) {
  if (a.is_zero() || b.is_zero()) return {};
  charge(budget, static_cast<u64>(a.len) * b.len);
  Poly r = p_alloc(F, a.len + b.len - 1);
  std::vector<u64> scratch(3 * F.degree(), 0);
  for (std::size_t i = 0; i < a.len; ++i) {
    const u64* ai = slot(F, a, i);
    if (F.span_is_zero(ai)) continue;
    for (std::size_t j = 0; j < b.len; ++j) {
      F.span_addmul(slot(F, r, i + j), ai, slot(F, b, j), scratch.data());
    }
  }
  p_normalize(F, r);
  return r;
}

Poly p_mul_scalar(const Fq& F, const Poly& a, const FqElem& s) {
  if (F.is_zero(s) || a.is_zero()) return {};
  Poly r = p_alloc(F, a.len);
  std::vector<u64> scratch(2 * F.degree(), 0);
  for (std::size_t i = 0; i < a.len; ++i) {
    F.span_mul(slot(F, a, i), s.v.data(), slot(F, r, i), scratch.data());
  }
  p_normalize(F, r);
  return r;
}

Poly p_shift(const Fq& F, const Poly& a, std::size_t k) {
  if (a.is_zero() || k == 0) return a;
  Poly r = p_alloc(F, a.len + k);
  std::copy(a.flat.begin(), a.flat.end(), r.flat.begin() + k * F.degree());
  return r;
}

std::pair<Poly, Poly> p_divrem(const Fq& F, const Poly& a, const Poly& b,
                               WorkBudget* budget) {
  if (b.is_zero()) throw ValidationError("polynomial division by zero");
  if (a.len < b.len) return {{}, a};
  charge(budget, static_cast<u64>(a.len - b.len + 1) * b.len);
  const FqElem lead_inv = F.inv(p_lead(F, b));
  Poly rem = a;
  Poly quo = p_alloc(F, a.len - b.len + 1);
  std::vector<u64> scratch(3 * F.degree(), 0);
  FqElem q = F.zero();
  for (std::size_t i = a.len; i-- >= b.len;) {
    const u64* top = slot(F, rem, i);
    if (!F.span_is_zero(top)) {
      F.span_mul(top, lead_inv.v.data(), q.v.data(), scratch.data());
      F.span_set(slot(F, quo, i - b.len + 1), q.v.data());
      const FqElem qn = F.neg(q);
      const std::size_t off = i - (b.len - 1);
      for (std::size_t j = 0; j < b.len; ++j) {
        F.span_addmul(slot(F, rem, off + j), qn.v.data(), slot(F, b, j),
                      scratch.data());
      }
    }
    if (i == 0) break;
  }
  p_normalize(F, quo);
  p_normalize(F, rem);
  return {std::move(quo), std::move(rem)};
}

Poly p_mod(const Fq& F, const Poly& a, const Poly& b, WorkBudget* budget) {
  return p_divrem(F, a, b, budget).second;
}

Poly p_monic(const Fq& F, Poly a) {
  if (a.is_zero()) return a;
  const FqElem lead = p_lead(F, a);
  if (F.is_one(lead)) return a;
  return p_mul_scalar(F, a, F.inv(lead));
}

Poly p_gcd(const Fq& F, Poly a, Poly b, WorkBudget* budget) {
  while (!b.is_zero()) {
    Poly r = p_mod(F, a, b, budget);
    a = std::move(b);
    b = std::move(r);
  }
  return p_monic(F, std::move(a));
}

Poly p_pow(const Fq& F, const Poly& a, unsigned long e, WorkBudget* budget) {
  Poly acc = p_one(F);
  Poly base = a;
  while (e > 0) {
    if (e & 1) acc = p_mul(F, acc, base, budget);
    e >>= 1;
    if (e > 0) base = p_mul(F, base, base, budget);
  }
  return acc;
}

Poly p_powmod(const Fq& F, Poly base, const mpz_class& e, const Poly& mod,
              WorkBudget* budget) {
  Poly acc = p_mod(F, p_one(F), mod, budget);
  base = p_mod(F, base, mod, budget);
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (sgn(e) <= 0) return acc;
  for (std::size_t i = bits; i-- > 0;) {
    acc = p_mod(F, p_mul(F, acc, acc, budget), mod, budget);
    if (mpz_tstbit(e.get_mpz_t(), i)) {
      acc = p_mod(F, p_mul(F, acc, base, budget), mod, budget);
    }
  }
  return acc;
}

FqElem p_eval(const Fq& F, const Poly& a, const FqElem& x) {
  FqElem acc = F.zero();
  for (std::size_t i = a.len; i-- > 0;) {
    acc = F.add(F.mul(acc, x), p_coeff(F, a, i));
  }
  return acc;
}

std::string p_to_string(const Fq& F, const Poly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = a.len; i-- > 0;) {
    const FqElem c = p_coeff(F, a, i);
    if (F.is_zero(c)) continue;
    if (!first) os << " + ";
    first = false;
    const bool unit = F.is_one(c);
    if (i == 0) {
      os << F.to_string(c);
    } else {
      if (!unit) os << "(" << F.to_string(c) << ")*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction rf_make(const Fq& F, Poly num, Poly den, WorkBudget* budget) {
  if (den.is_zero()) throw ValidationError("rational function with zero denominator");
  if (num.is_zero()) return RationalFunction{{}, p_one(F)};
  if (den.len == 1) {
    // Constant denominator: scale through, no gcd needed.
    const FqElem c = p_lead(F, den);
    if (!F.is_one(c)) num = p_mul_scalar(F, num, F.inv(c));
    return RationalFunction{std::move(num), p_one(F)};
  }
  Poly g = p_gcd(F, num, den, budget);
  if (g.deg() > 0) {
    num = p_divrem(F, num, g, budget).first;
    den = p_divrem(F, den, g, budget).first;
  }
  const FqElem lead = p_lead(F, den);
  if (!F.is_one(lead)) {
    const FqElem s = F.inv(lead);
    num = p_mul_scalar(F, num, s);
    den = p_mul_scalar(F, den, s);
  }
  return RationalFunction{std::move(num), std::move(den)};
}

RationalFunction rf_zero(const Fq& F) { return RationalFunction{{}, p_one(F)}; }

RationalFunction rf_one(const Fq& F) {
  return RationalFunction{p_one(F), p_one(F)};
}

RationalFunction rf_t(const Fq& F) { return RationalFunction{p_t(F), p_one(F)}; }

RationalFunction rf_from_elem(const Fq& F, const FqElem& c) {
  return RationalFunction{p_const(F, c), p_one(F)};
}

RationalFunction rf_from_poly(const Fq& F, Poly num) {
  return RationalFunction{std::move(num), p_one(F)};
}

bool rf_is_one(const Fq& F, const RationalFunction& a) {
  return a.den.len == 1 && a.num == p_one(F);
}

namespace {

bool den_is_one(const RationalFunction& a) { return a.den.len == 1; }

}  // namespace

RationalFunction rf_add(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget) {
  if (den_is_one(a) && den_is_one(b)) {
    return RationalFunction{p_add(F, a.num, b.num), p_one(F)};
  }
  Poly num = p_add(F, p_mul(F, a.num, b.den, budget), p_mul(F, b.num, a.den, budget));
  Poly den = p_mul(F, a.den, b.den, budget);
  return rf_make(F, std::move(num), std::move(den), budget);
}

RationalFunction rf_sub(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget) {
  return rf_add(F, a, rf_neg(F, b), budget);
}

RationalFunction rf_mul(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget) {
  if (a.is_zero() || b.is_zero()) return rf_zero(F);
  if (den_is_one(a) && den_is_one(b)) {
    return RationalFunction{p_mul(F, a.num, b.num, budget), p_one(F)};
  }
  // Cross-cancel first to keep degrees down.
  Poly g1 = p_gcd(F, a.num, b.den, budget);
  Poly g2 = p_gcd(F, b.num, a.den, budget);
  Poly an = g1.deg() > 0 ? p_divrem(F, a.num, g1, budget).first : a.num;
  Poly bd = g1.deg() > 0 ? p_divrem(F, b.den, g1, budget).first : b.den;
  Poly bn = g2.deg() > 0 ? p_divrem(F, b.num, g2, budget).first : b.num;
  Poly ad = g2.deg() > 0 ? p_divrem(F, a.den, g2, budget).first : a.den;
  return rf_make(F, p_mul(F, an, bn, budget), p_mul(F, ad, bd, budget), budget);
}

RationalFunction rf_inv(const Fq& F, const RationalFunction& a) {
  if (a.is_zero()) throw ValidationError("division by the zero rational function");
  RationalFunction r{a.den, a.num};
  const FqElem lead = p_lead(F, r.den);
  if (!F.is_one(lead)) {
    const FqElem s = F.inv(lead);
    r.num = p_mul_scalar(F, r.num, s);
    r.den = p_mul_scalar(F, r.den, s);
  }
  return r;
}

RationalFunction rf_div(const Fq& F, const RationalFunction& a,
                        const RationalFunction& b, WorkBudget* budget) {
  return rf_mul(F, a, rf_inv(F, b), budget);
}

RationalFunction rf_neg(const Fq& F, const RationalFunction& a) {
  return RationalFunction{p_neg(F, a.num), a.den};
}

RationalFunction rf_pow(const Fq& F, const RationalFunction& a, long long e,
                        WorkBudget* budget) {
  if (e == 0) return rf_one(F);
  RationalFunction base = e < 0 ? rf_inv(F, a) : a;
  unsigned long long exp = e < 0 ? static_cast<unsigned long long>(-(e + 1)) + 1
                                 : static_cast<unsigned long long>(e);
  RationalFunction acc = rf_one(F);
  while (exp > 0) {
    if (exp & 1) acc = rf_mul(F, acc, base, budget);
    exp >>= 1;
    if (exp > 0) base = rf_mul(F, base, base, budget);
  }
  return acc;
}

namespace {

Poly poly_frobenius(const Fq& F, const Poly& a, std::uint64_t e,
                    std::size_t max_coeffs) {
  if (a.is_zero()) return {};
  mpz_class stride;
  mpz_ui_pow_ui(stride.get_mpz_t(), static_cast<unsigned long>(F.p()),
                static_cast<unsigned long>(e));
  mpz_class top = stride * static_cast<unsigned long>(a.len - 1) + 1;
  if (top > static_cast<unsigned long>(max_coeffs)) {
    throw ResourceError("frobenius power exceeds the dense degree cap");
  }
  const std::size_t s = static_cast<std::size_t>(stride.get_ui());
  Poly r;
  r.len = (a.len - 1) * s + 1;
  r.flat.assign(r.len * F.degree(), 0);
  for (std::size_t i = 0; i < a.len; ++i) {
    FqElem c = p_coeff(F, a, i);
    if (F.is_zero(c)) continue;
    c = F.frobenius(c, e);
    F.span_set(r.flat.data() + (i * s) * F.degree(), c.v.data());
  }
  return r;
}

}  // namespace

RationalFunction rf_frobenius(const Fq& F, const RationalFunction& a,
                              std::uint64_t e, std::size_t max_coeffs) {
  Poly num = poly_frobenius(F, a.num, e, max_coeffs);
  Poly den = poly_frobenius(F, a.den, e, max_coeffs);
  // The power of a canonical form is canonical: gcd(n,d)=1 is preserved by
  // the p^e-th power map and den stays monic.
  return RationalFunction{std::move(num), std::move(den)};
}

long long rf_deg_bound(const RationalFunction& a) {
  if (a.is_zero()) return 0;
  return a.num.deg() + a.den.deg();
}

std::string rf_to_string(const Fq& F, const RationalFunction& a) {
  if (den_is_one(a)) return p_to_string(F, a.num);
  return "(" + p_to_string(F, a.num) + ")/(" + p_to_string(F, a.den) + ")";
}

FqElem frobenius(const Fq& F, const FqElem& a, std::uint64_t e) {
  return F.frobenius(a, e);
}

RationalFunction frobenius(const Fq& F, const RationalFunction& a,
                           std::uint64_t e, std::size_t max_coeffs) {
  return rf_frobenius(F, a, e, max_coeffs);
}

// ---------------------------------------------------------------------------
// Root finding and embeddings

FqElem find_root(const Fq& target, const FpPoly& f_over_fp,
                 std::mt19937_64& rng) {
  if (f_over_fp.deg() < 1) throw ValidationError("find_root: constant polynomial");
  if (target.degree() % static_cast<unsigned>(f_over_fp.deg()) != 0) {
    throw ValidationError("find_root: polynomial does not split in the target field");
  }
  // Lift to a monic polynomial over the target field.
  std::vector<FqElem> lift;
  lift.reserve(f_over_fp.c.size());
  for (u64 c : f_over_fp.c) lift.push_back(target.from_int(static_cast<long long>(c)));
  Poly f = p_monic(target, p_from_coeffs(target, lift));

  const u64 p = target.p();
  int guard = 0;
  while (f.deg() > 1) {
    if (++guard > 512) throw ResourceError("find_root: splitting did not converge");
    const FqElem delta = target.sample(rng);
    Poly h;
    if (p == 2) {
      // Trace map: h(X) = sum_{i < d} (delta*X)^(2^i) mod f.
      Poly dx = p_mul_scalar(target, p_t(target), delta);
      dx = p_mod(target, dx, f);
      Poly acc = dx;
      Poly cur = dx;
      for (unsigned i = 1; i < target.degree(); ++i) {
        cur = p_mod(target, p_mul(target, cur, cur), f);
        acc = p_add(target, acc, cur);
      }
      h = std::move(acc);
    } else {
      // h(X) = (X + delta)^((q-1)/2) - 1 mod f.
      Poly base = p_add(target, p_t(target), p_const(target, delta));
      mpz_class e = (target.order() - 1) / 2;
      h = p_sub(target, p_powmod(target, base, e, f), p_one(target));
    }
    Poly g = p_gcd(target, h, f);
    if (g.deg() > 0 && g.deg() < f.deg()) {
      Poly other = p_divrem(target, f, g).first;
      f = g.deg() <= other.deg() ? std::move(g) : std::move(other);
      f = p_monic(target, std::move(f));
    }
  }
  // f = X - r
  return target.neg(p_coeff(target, f, 0));
}

FqElem embed(const Fq& src, const Fq& dst, const FqElem& a,
             const FqElem& gen_image) {
  if (src.p() != dst.p()) throw ValidationError("embed: characteristic mismatch");
  FqElem acc = dst.zero();
  for (std::size_t i = a.v.size(); i-- > 0;) {
    acc = dst.mul(acc, gen_image);
    acc = dst.add(acc, dst.from_int(static_cast<long long>(a.v[i])));
  }
  return acc;
}

FqElem rf_specialize(const Fq& src, const RationalFunction& a, const Fq& dst,
                     const FqElem& tau, const FqElem& gen_image) {
  auto eval_poly = [&](const Poly& poly) {
    FqElem acc = dst.zero();
    for (std::size_t i = poly.len; i-- > 0;) {
      acc = dst.mul(acc, tau);
      acc = dst.add(acc, embed(src, dst, p_coeff(src, poly, i), gen_image));
    }
    return acc;
  };
  const FqElem den = eval_poly(a.den);
  if (dst.is_zero(den)) {
    throw BadSpecialization("denominator vanishes at the specialization point");
  }
  return dst.div(eval_poly(a.num), den);
}

}  // namespace retset::ffield

#include <doctest.h>

#include <random>

#include "retset/ffield.hpp"

using namespace retset;
using namespace retset::ffield;

namespace {

RationalFunction rf_parse_poly(const Fq& F, std::vector<long long> num,
                               std::vector<long long> den = {1}) {
  std::vector<FqElem> nc, dc;
  for (long long c : num) nc.push_back(F.from_int(c));
  for (long long c : den) dc.push_back(F.from_int(c));
  return rf_make(F, p_from_coeffs(F, nc), p_from_coeffs(F, dc));
}

RationalFunction random_ratfun(const Fq& F, std::mt19937_64& rng) {
  auto random_poly = [&](std::size_t maxdeg, bool nonzero) {
    std::vector<FqElem> c(1 + rng() % maxdeg, F.zero());
    for (auto& x : c) x = F.sample(rng);
    Poly p = p_from_coeffs(F, c);
    if (nonzero && p.is_zero()) p = p_one(F);
    return p;
  };
  return rf_make(F, random_poly(4, false), random_poly(4, true));
}

}  // namespace

TEST_CASE("make_extension: canonical prime field modulus") {
  Fq F = make_extension(2, 1, 0);
  CHECK(F.degree() == 1);
  CHECK(F.modulus() == FpPoly{{0, 1}});  // t
}

TEST_CASE("make_extension: unique irreducible quadratic over F_2") {
  Fq F = make_extension(2, 2, 0);
  CHECK(F.modulus() == FpPoly{{1, 1, 1}});  // t^2 + t + 1
  Fq F2 = make_extension(2, 2, 99);
  CHECK(F2.modulus() == F.modulus());
}

TEST_CASE("make_extension: F_9 modulus verified by exhaustive root search") {
  for (std::uint64_t seed : {0ull, 1ull, 7ull}) {
    Fq F = make_extension(3, 2, seed);
    const FpPoly& m = F.modulus();
    REQUIRE(m.deg() == 2);
    // No root in F_3.
    for (long long x = 0; x < 3; ++x) {
      long long val = 0, pw = 1;
      for (auto c : m.c) {
        val = (val + static_cast<long long>(c) * pw) % 3;
        pw = (pw * x) % 3;
      }
      CHECK(val != 0);
    }
    // gcd(m, t^9 - t) == m, i.e. m | t^(3^2) - t.
    FpPoly t{{0, 1}};
    FpPoly t9 = fp_pow_t_pk(3, 2, m);
    FpPoly diff = fp_sub(3, t9, fp_mod(3, t, m));
    CHECK(diff.is_zero());
  }
}

TEST_CASE("make_extension rejects bad inputs") {
  CHECK_THROWS_AS(make_extension(4, 2, 0), ValidationError);
  CHECK_THROWS_AS(make_extension(1, 2, 0), ValidationError);
  CHECK_THROWS_AS(make_extension(2, 0, 0), ValidationError);
}

TEST_CASE("make_extension is deterministic in the seed") {
  for (unsigned d : {3u, 5u}) {
    Fq a = make_extension(5, d, 42);
    Fq b = make_extension(5, d, 42);
    CHECK(a.modulus() == b.modulus());
  }
}

TEST_CASE("rational function arithmetic: worked examples") {
  Fq F2(2);
  // t/(t+1) + 1/(t+1) = 1
  auto a = rf_parse_poly(F2, {0, 1}, {1, 1});
  auto b = rf_parse_poly(F2, {1}, {1, 1});
  CHECK(rf_add(F2, a, b) == rf_one(F2));
  // t * t = t^2
  CHECK(rf_mul(F2, rf_t(F2), rf_t(F2)) == rf_parse_poly(F2, {0, 0, 1}));
  // inv over F_3 keeps the denominator monic
  Fq F3(3);
  auto c = rf_parse_poly(F3, {1, 0, 1});
  auto inv = rf_inv(F3, c);
  CHECK(F3.is_one(p_lead(F3, inv.den)));
  CHECK(rf_mul(F3, c, inv) == rf_one(F3));
  CHECK_THROWS_AS(rf_inv(F3, rf_zero(F3)), ValidationError);
}

TEST_CASE("frobenius: worked examples") {
  Fq F2(2);
  // (1 + t)^(2^3) = 1 + t^8
  auto x = rf_parse_poly(F2, {1, 1});
  auto fx = frobenius(F2, x, 3);
  CHECK(fx == rf_parse_poly(F2, {1, 0, 0, 0, 0, 0, 0, 0, 1}));
  // Generator of F_4: g^2 = g + 1.
  Fq F4 = make_extension(2, 2, 0);
  FqElem g = F4.gen();
  FqElem fg = frobenius(F4, g, 1);
  CHECK(fg == F4.add(g, F4.one()));
  CHECK(fg == F4.mul(g, g));
  // frobenius(0, e) = 0
  CHECK(F4.is_zero(frobenius(F4, F4.zero(), 5)));
  CHECK(frobenius(F2, rf_zero(F2), 2) == rf_zero(F2));
}

TEST_CASE("field axioms hold on random samples") {
  std::mt19937_64 rng(2024);
  const std::uint64_t primes[] = {2, 3, 5, 13};
  for (int it = 0; it < 300; ++it) {
    Fq F = make_extension(primes[rng() % 4], 1 + rng() % 3, rng() % 4);
    FqElem a = F.sample(rng), b = F.sample(rng), c = F.sample(rng);
    CHECK(F.add(a, b) == F.add(b, a));
    CHECK(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
    CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
    CHECK(F.add(a, F.neg(a)) == F.zero());
    if (!F.is_zero(a)) {
      CHECK(F.is_one(F.mul(a, F.inv(a))));
    }
  }
}

TEST_CASE("rational function field axioms on random samples") {
  std::mt19937_64 rng(55);
  Fq F(3);
  for (int it = 0; it < 120; ++it) {
    auto a = random_ratfun(F, rng);
    auto b = random_ratfun(F, rng);
    auto c = random_ratfun(F, rng);
    CHECK(rf_add(F, a, b) == rf_add(F, b, a));
    CHECK(rf_mul(F, a, rf_add(F, b, c)) ==
          rf_add(F, rf_mul(F, a, b), rf_mul(F, a, c)));
    if (!a.is_zero()) {
      CHECK(rf_mul(F, a, rf_inv(F, a)) == rf_one(F));
    }
    CHECK(rf_add(F, a, rf_neg(F, a)) == rf_zero(F));
  }
}

TEST_CASE("additive frobenius: (x + y)^p = x^p + y^p") {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 200; ++it) {
    const std::uint64_t ps[] = {2, 3, 5};
    Fq F = make_extension(ps[rng() % 3], 1 + rng() % 3, 3);
    FqElem x = F.sample(rng), y = F.sample(rng);
    const mpz_class p(static_cast<long>(F.p()));
    CHECK(F.pow(F.add(x, y), p) == F.add(F.pow(x, p), F.pow(y, p)));
  }
  // Same over the rational function field.
  Fq F2(2);
  std::mt19937_64 rng2(78);
  for (int it = 0; it < 50; ++it) {
    auto x = random_ratfun(F2, rng2);
    auto y = random_ratfun(F2, rng2);
    CHECK(rf_pow(F2, rf_add(F2, x, y), 2) ==
          rf_add(F2, rf_pow(F2, x, 2), rf_pow(F2, y, 2)));
  }
}

TEST_CASE("canonical form: gcd(num, den) = 1 after arithmetic") {
  std::mt19937_64 rng(91);
  Fq F(5);
  for (int it = 0; it < 150; ++it) {
    auto a = random_ratfun(F, rng);
    auto b = random_ratfun(F, rng);
    for (const auto& r : {rf_add(F, a, b), rf_mul(F, a, b),
                          rf_sub(F, a, b)}) {
      if (r.is_zero()) {
        CHECK(r.den == p_one(F));
        continue;
      }
      CHECK(F.is_one(p_lead(F, r.den)));
      CHECK(p_gcd(F, r.num, r.den).deg() == 0);
    }
  }
}

TEST_CASE("modulus passes the Rabin checks") {
  std::mt19937_64 rng(13);
  const std::uint64_t ps[] = {2, 3, 5, 7};
  for (int it = 0; it < 60; ++it) {
    const std::uint64_t p = ps[rng() % 4];
    const unsigned d = 2 + rng() % 3;
    Fq F = make_extension(p, d, rng());
    const FpPoly& m = F.modulus();
    // m | t^(p^d) - t
    FpPoly t{{0, 1}};
    CHECK(fp_sub(p, fp_pow_t_pk(p, d, m), fp_mod(p, t, m)).is_zero());
    // no factor of degree < d: gcd(t^(p^k) - t, m) = 1 for k < d
    for (unsigned k = 1; k < d; ++k) {
      FpPoly g = fp_gcd(p, fp_sub(p, fp_pow_t_pk(p, k, m), fp_mod(p, t, m)), m);
      CHECK(g.deg() == 0);
    }
  }
}

TEST_CASE("pow_mod_order matches pow for moderate exponents") {
  std::mt19937_64 rng(17);
  Fq F = make_extension(3, 2, 0);
  for (int it = 0; it < 100; ++it) {
    FqElem a = F.sample(rng);
    if (F.is_zero(a)) continue;
    long e = static_cast<long>(rng() % 64);
    CHECK(F.pow_mod_order(a, mpz_class(e)) == F.pow(a, mpz_class(e)));
  }
}

TEST_CASE("find_root and embed give a field homomorphism") {
  std::mt19937_64 rng(23);
  Fq F4 = make_extension(2, 2, 0);
  Fq F16 = make_extension(2, 4, 1);
  FqElem img = find_root(F16, F4.modulus(), rng);
  // The image is a genuine root.
  std::vector<FqElem> lift;
  for (auto c : F4.modulus().c) lift.push_back(F16.from_int((long long)c));
  CHECK(F16.is_zero(p_eval(F16, p_from_coeffs(F16, lift), img)));
  // embed respects + and *.
  for (int it = 0; it < 50; ++it) {
    FqElem a = F4.sample(rng), b = F4.sample(rng);
    CHECK(embed(F4, F16, F4.add(a, b), img) ==
          F16.add(embed(F4, F16, a, img), embed(F4, F16, b, img)));
    CHECK(embed(F4, F16, F4.mul(a, b), img) ==
          F16.mul(embed(F4, F16, a, img), embed(F4, F16, b, img)));
  }
}

TEST_CASE("rf_specialize: worked examples") {
  Fq F2(2);
  Fq F4 = make_extension(2, 2, 0);
  std::mt19937_64 rng(3);
  FqElem g = F4.gen();  // g^2 = g + 1
  // t/(t+1) at tau = g: g * (g+1)^{-1} = g * g = g + 1.
  auto x = rf_parse_poly(F2, {0, 1}, {1, 1});
  FqElem got = rf_specialize(F2, x, F4, g, F4.zero());
  CHECK(got == F4.add(g, F4.one()));
  // Constants specialize to themselves.
  CHECK(rf_specialize(F2, rf_one(F2), F4, g, F4.zero()) == F4.one());
  // t + 1 at tau = 1 over F_2 vanishes.
  auto y = rf_parse_poly(F2, {1, 1});
  CHECK(F2.is_zero(rf_specialize(F2, y, F2, F2.one(), F2.zero())));
  // Vanishing denominators are flagged.
  CHECK_THROWS_AS(rf_specialize(F2, x, F2, F2.one(), F2.zero()),
                  BadSpecialization);
}

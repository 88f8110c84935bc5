#include <doctest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "retset/structure.hpp"

using namespace retset;
using namespace retset::structure;

namespace {

std::vector<long long> powers_of(long long base, long long M) {
  std::vector<long long> out;
  for (long long v = 1; v <= M; v *= base) out.push_back(v);
  return out;
}

}  // namespace

TEST_CASE("decompose: worked examples") {
  SUBCASE("full range collapses to one progression") {
    std::vector<long long> s;
    for (long long n = 0; n <= 100; ++n) s.push_back(n);
    auto dec = decompose(s, 100);
    REQUIRE(dec.progressions.size() == 1);
    CHECK(dec.progressions[0] == DetectedProgression{1, 0, 0});
    CHECK(dec.sparse.empty());
  }
  SUBCASE("powers of two stay sparse") {
    auto s = powers_of(2, 4096);
    auto dec = decompose(s, 4096);
    CHECK(dec.progressions.empty());
    CHECK(dec.sparse == s);
  }
  SUBCASE("evens plus powers of three") {
    std::set<long long> s;
    const long long M = 10000;
    for (long long n = 0; n <= M; n += 2) s.insert(n);
    for (long long v = 1; v <= M; v *= 3) s.insert(v);
    auto dec = decompose({s.begin(), s.end()}, M);
    REQUIRE(dec.progressions.size() == 1);
    CHECK(dec.progressions[0].a == 2);
    CHECK(dec.progressions[0].b == 0);
    CHECK(dec.progressions[0].onset == 0);
    // Every power of three is odd, so the entire geometric part is left
    // sparse after the even progression is removed.
    CHECK(dec.sparse ==
          std::vector<long long>{1, 3, 9, 27, 81, 243, 729, 2187, 6561});
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(decompose({5, 3}, 10), ValidationError);
    CHECK_THROWS_AS(decompose({11}, 10), ValidationError);
  }
}

TEST_CASE("decompose partitions and is idempotent on the sparse part") {
  std::mt19937_64 rng(123);
  for (int it = 0; it < 80; ++it) {
    std::set<long long> s;
    const long long M = 300 + static_cast<long long>(rng() % 700);
    const int nprog = static_cast<int>(rng() % 3);
    for (int p = 0; p < nprog; ++p) {
      const long long a = 1 + static_cast<long long>(rng() % 6);
      const long long b = static_cast<long long>(rng() % a);
      for (long long n = b; n <= M; n += a) s.insert(n);
    }
    for (int j = 0; j < 12; ++j) s.insert(static_cast<long long>(rng() % (M + 1)));
    std::vector<long long> input(s.begin(), s.end());
    auto dec = decompose(input, M);
    // Exact cover, no overlaps past the onsets.
    std::set<long long> rebuilt(dec.sparse.begin(), dec.sparse.end());
    std::size_t total = dec.sparse.size();
    for (const auto& pr : dec.progressions) {
      for (long long n = pr.onset; n <= M; n += pr.a) {
        CHECK(rebuilt.insert(n).second);  // no overlap
        ++total;
      }
    }
    CHECK(rebuilt == s);
    CHECK(total == s.size());
    // Re-decomposing the sparse part finds nothing new.
    auto again = decompose(dec.sparse, M, dec.provenance);
    CHECK(again.progressions.empty());
    CHECK(again.sparse == dec.sparse);
  }
}

TEST_CASE("certify_bound: worked examples") {
  SUBCASE("powers of two with the right exponent") {
    auto rep = certify_bound(powers_of(2, 4096), 1, {16, 256, 4096});
    CHECK(rep.verdict == Verdict::consistent);
    CHECK(rep.rows[0].count == 5);
    CHECK(rep.rows[1].count == 9);
    CHECK(rep.rows[2].count == 13);
  }
  SUBCASE("a full range is inconsistent with d = 1") {
    std::vector<long long> s;
    for (long long n = 0; n <= 4096; ++n) s.push_back(n);
    auto rep = certify_bound(s, 1, {16, 256, 4096});
    CHECK(rep.verdict == Verdict::inconsistent);
  }
  SUBCASE("empty set") {
    auto rep = certify_bound({}, 1, {16, 256, 4096});
    CHECK(rep.verdict == Verdict::consistent);
    for (const auto& r : rep.rows) CHECK(r.a_min == 0.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(certify_bound({}, -1, {16, 256, 4096}), ValidationError);
    CHECK_THROWS_AS(certify_bound({}, 1, {16, 256}), ValidationError);
    CHECK_THROWS_AS(certify_bound({}, 1, {16, 16, 256}), ValidationError);
  }
}

TEST_CASE("certify_bound A_min is monotone and scale-free") {
  std::mt19937_64 rng(321);
  for (int it = 0; it < 50; ++it) {
    std::set<long long> s;
    for (int j = 0; j < 40; ++j) s.insert(1 + static_cast<long long>(rng() % 5000));
    auto rep = certify_bound({s.begin(), s.end()}, 1, {8, 64, 512, 4096});
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      CHECK(rep.rows[i].a_min >= rep.rows[i - 1].a_min);
    }
    // The verdict depends only on count ratios: replicating every element
    // k-fold in a multiset would scale all counts; emulate by comparing
    // against the same set with d unchanged (counts scale cancels in the
    // A_min ratio).
    auto rep2 = certify_bound({s.begin(), s.end()}, 1, {8, 64, 512, 4096}, 2.0);
    CHECK(rep2.verdict == rep.verdict);
  }
}

TEST_CASE("pform_generate: worked examples") {
  SUBCASE("powers of two") {
    PForm f{1, {mpq_class(1)}, {1}, 2};
    auto vals = pform_generate(f, 100);
    std::vector<long long> got;
    for (const auto& v : vals) got.push_back(v.value);
    CHECK(got == std::vector<long long>{1, 2, 4, 8, 16, 32, 64});
  }
  SUBCASE("sums of two powers of two") {
    PForm f{2, {mpq_class(1), mpq_class(1)}, {1, 1}, 2};
    auto vals = pform_generate(f, 20);
    std::vector<long long> got;
    for (const auto& v : vals) got.push_back(v.value);
    CHECK(got == std::vector<long long>{2, 3, 4, 5, 6, 8, 9, 10, 12, 16, 17, 18, 20});
  }
  SUBCASE("3 * 9^k") {
    PForm f{1, {mpq_class(3)}, {2}, 3};
    auto vals = pform_generate(f, 300);
    std::vector<long long> got;
    for (const auto& v : vals) got.push_back(v.value);
    CHECK(got == std::vector<long long>{3, 27, 243});
  }
  SUBCASE("witnesses re-verify") {
    PForm f{2, {mpq_class(3), mpq_class(1)}, {1, 2}, 2};
    for (const auto& v : pform_generate(f, 500)) {
      mpq_class acc = 0;
      for (int j = 0; j < f.m; ++j) {
        mpz_class pw;
        mpz_ui_pow_ui(pw.get_mpz_t(), f.p,
                      static_cast<unsigned long>(f.a[j] * v.witness[j]));
        acc += f.c[j] * mpq_class(pw);
      }
      CHECK(acc == mpq_class(static_cast<long>(v.value)));
    }
  }
  SUBCASE("non-integral values are an invariant breach") {
    PForm f{1, {mpq_class(1, 2)}, {1}, 2};
    CHECK_THROWS_AS(pform_generate(f, 10), ValidationError);
  }
}

TEST_CASE("pform_match: worked examples") {
  PForm f{1, {mpq_class(1)}, {1}, 2};
  SUBCASE("matched") {
    auto res = pform_match(powers_of(2, 4096), f, 4096);
    CHECK(res.matched);
    CHECK(res.sym_difference.empty());
  }
  SUBCASE("an extra element breaks the match") {
    auto s = powers_of(2, 4096);
    s.push_back(5);
    std::sort(s.begin(), s.end());
    auto res = pform_match(s, f, 4096);
    CHECK(!res.matched);
    CHECK(res.sym_difference == std::vector<long long>{5});
  }
}

TEST_CASE("count_nonzero_digits: worked examples") {
  CHECK(count_nonzero_digits(2, 1, 1024, true) == 11);
  CHECK(count_nonzero_digits(2, 2, 63, true) == 15);
  CHECK(count_nonzero_digits(3, 1, 80, false) == 8);
}

TEST_CASE("count_nonzero_digits matches the brute-force scan") {
  std::mt19937_64 rng(777);
  const unsigned long long ps[] = {2, 3, 5, 7};
  for (int it = 0; it < 40; ++it) {
    const unsigned long long p = ps[rng() % 4];
    const int m = 1 + static_cast<int>(rng() % 4);
    const long long M = 1 + static_cast<long long>(rng() % 100000);
    const bool ones_only = rng() % 2 == 0;
    CHECK(count_nonzero_digits(p, m, M, ones_only) ==
          mpz_class(static_cast<long>(oracles::brute_digit_count(p, m, M, ones_only))));
  }
}

TEST_CASE("count_nonzero_digits binomial identity at full levels") {
  for (int L = 1; L <= 30; ++L) {
    for (int m = 1; m <= std::min(L, 5); ++m) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), L, m);
      CHECK(count_nonzero_digits(2, m, (1ll << L) - 1, true) == binom);
    }
  }
}

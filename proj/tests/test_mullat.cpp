#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "retset/mullat.hpp"

using namespace retset;
using namespace retset::mullat;

namespace {

std::vector<std::vector<mpz_class>> canon(
    std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<mpz_class>> out;
  for (const auto& r : rows) {
    std::vector<mpz_class> row;
    for (long x : r) row.push_back(mpz_class(x));
    out.push_back(std::move(row));
  }
  return lattice_canonical(std::move(out));
}

}  // namespace

TEST_CASE("factorization basics") {
  auto f = factor_integer(mpz_class(-360));
  CHECK(f.sign == -1);
  CHECK(f.exps.at(2) == 3);
  CHECK(f.exps.at(3) == 2);
  CHECK(f.exps.at(5) == 1);
  auto q = factor_rational(mpq_class(4, 9));
  CHECK(q.sign == 1);
  CHECK(q.exps.at(2) == 2);
  CHECK(q.exps.at(3) == -2);
  CHECK_THROWS_AS(factor_integer(mpz_class(0)), ValidationError);
}

TEST_CASE("primitive_power") {
  CHECK(primitive_power(mpz_class(8)) == std::pair{mpz_class(2), 3ll});
  CHECK(primitive_power(mpz_class(36)) == std::pair{mpz_class(6), 2ll});
  CHECK(primitive_power(mpz_class(12)) == std::pair{mpz_class(12), 1ll});
  CHECK(primitive_power(mpz_class(-27)) == std::pair{mpz_class(3), 3ll});
}

TEST_CASE("relations_lattice: worked examples") {
  SUBCASE("independent primes: trivial") {
    auto lat = relations_lattice({mpq_class(2), mpq_class(3)});
    CHECK(lat.trivial());
    CHECK(lat.dim == 2);
  }
  SUBCASE("4 and 8: 4^3 = 8^2") {
    auto lat = relations_lattice({mpq_class(4), mpq_class(8)});
    CHECK(lat.rank() == 1);
    CHECK(lat.basis == canon({{3, -2}}));
  }
  SUBCASE("signs: (-2)^2 = 2^2") {
    auto lat = relations_lattice({mpq_class(-2), mpq_class(2)});
    CHECK(lat.rank() == 1);
    CHECK(lat.basis == canon({{2, -2}}));
  }
  SUBCASE("units") {
    auto lat = relations_lattice({mpq_class(1), mpq_class(-1), mpq_class(2)});
    // 1^a (-1)^{2b} 2^0 = 1.
    CHECK(lat.rank() == 2);
    CHECK(lattice_contains(lat, {mpz_class(1), mpz_class(0), mpz_class(0)}));
    CHECK(lattice_contains(lat, {mpz_class(0), mpz_class(2), mpz_class(0)}));
    CHECK(!lattice_contains(lat, {mpz_class(0), mpz_class(1), mpz_class(0)}));
    CHECK(!lattice_contains(lat, {mpz_class(0), mpz_class(0), mpz_class(1)}));
  }
}

TEST_CASE("g_sigma: worked examples") {
  SUBCASE("independent roots force triviality") {
    auto lat = g_sigma({mpz_class(2), mpz_class(3)}, {{mpz_class(5), 1}});
    CHECK(lat.trivial());
    auto lat2 = g_sigma({mpz_class(2), mpz_class(3)}, {});
    CHECK(lat2.trivial());
  }
  SUBCASE("unit root: Z x 0") {
    auto lat = g_sigma({mpz_class(1)}, {{mpz_class(3), 1}});
    CHECK(lat.rank() == 1);
    CHECK(lat.basis == canon({{1, 0}}));
  }
  SUBCASE("4 vs 8") {
    auto lat = g_sigma({mpz_class(4)}, {{mpz_class(8), 1}});
    CHECK(lat.rank() == 1);
    CHECK(lat.basis == canon({{3, 2}}));
  }
}

TEST_CASE("g_sigma agrees with brute force on random instances") {
  std::mt19937_64 rng(31337);
  for (int it = 0; it < 120; ++it) {
    const int nmus = 1 + static_cast<int>(rng() % 2);
    std::vector<mpz_class> mus;
    for (int i = 0; i < nmus; ++i) {
      long v = 0;
      while (v == 0) v = static_cast<long>(rng() % 17) - 8;
      mus.push_back(mpz_class(v));
    }
    const int npairs = static_cast<int>(rng() % 3);
    std::vector<std::pair<mpz_class, long long>> pairs;
    for (int i = 0; i < npairs; ++i) {
      long lam = 0;
      while (lam == 0 || lam == 1 || lam == -1) {
        lam = static_cast<long>(rng() % 13) - 6;
      }
      pairs.emplace_back(mpz_class(lam), 1 + static_cast<long long>(rng() % 2));
    }
    auto lat = g_sigma(mus, pairs);
    auto brute = oracles::brute_gsigma(mus, pairs, 8);
    // Every brute solution lies in the lattice.
    for (const auto& f : brute) {
      std::vector<mpz_class> v;
      for (long long x : f) v.push_back(mpz_class(static_cast<long>(x)));
      REQUIRE(lattice_contains(lat, v));
    }
    // Every small lattice point satisfies the relations.
    auto pts = oracles::lattice_points_within(lat, 8, 10);
    std::set<std::vector<long long>> bset(brute.begin(), brute.end());
    for (const auto& f : pts) {
      REQUIRE(bset.count(f) == 1);
    }
  }
}

TEST_CASE("multiplicatively independent root pairs give trivial lattices") {
  std::mt19937_64 rng(999);
  int done = 0;
  while (done < 200) {
    long a = 2 + static_cast<long>(rng() % 30);
    long b = 2 + static_cast<long>(rng() % 30);
    auto [wa, ea] = primitive_power(mpz_class(a));
    auto [wb, eb] = primitive_power(mpz_class(b));
    if (wa == wb) continue;
    ++done;
    long lam = 2 + static_cast<long>(rng() % 5);
    auto lat = g_sigma({mpz_class(a), mpz_class(b)}, {{mpz_class(lam), 1}});
    CHECK(lat.trivial());
  }
}

TEST_CASE("common_base: worked examples") {
  SUBCASE("9 and 27") {
    auto cb = common_base(mpz_class(9), {{mpz_class(27), 1}});
    CHECK(cb.lambda == 3);
    CHECK(cb.b == 2);
    CHECK(cb.E == 1);
    REQUIRE(cb.pairs.size() == 1);
    CHECK(cb.pairs[0].zeta == 1);
    CHECK(cb.pairs[0].b_i == 3);
    CHECK(cb.pairs[0].B_i == 3);
  }
  SUBCASE("4 and -8") {
    auto cb = common_base(mpz_class(4), {{mpz_class(-8), 1}});
    CHECK(cb.lambda == 2);
    CHECK(cb.b == 2);
    CHECK(cb.E == 2);
    REQUIRE(cb.pairs.size() == 1);
    CHECK(cb.pairs[0].zeta == -1);
    CHECK(cb.pairs[0].b_i == 3);
    CHECK(cb.pairs[0].B_i == 6);
  }
  SUBCASE("independent primes") {
    CHECK_THROWS_AS(common_base(mpz_class(2), {{mpz_class(3), 1}}),
                    NotDependentError);
  }
  SUBCASE("negative mu with odd primitive exponent") {
    auto cb = common_base(mpz_class(-8), {{mpz_class(4), 1}});
    CHECK(cb.lambda == -2);
    CHECK(cb.b == 3);
    // 4 = zeta * (-2)^2 with zeta = +1
    CHECK(cb.pairs[0].zeta == 1);
    CHECK(cb.pairs[0].b_i == 2);
  }
  SUBCASE("negative mu that is an even power is not representable") {
    CHECK_THROWS_AS(common_base(mpz_class(-4), {{mpz_class(2), 1}}),
                    NotRepresentableError);
  }
  SUBCASE("mu = +-1 rejected") {
    CHECK_THROWS_AS(common_base(mpz_class(1), {}), ValidationError);
    CHECK_THROWS_AS(common_base(mpz_class(-1), {}), ValidationError);
  }
}

TEST_CASE("common_base round-trips on random dependent instances") {
  std::mt19937_64 rng(1212);
  for (int it = 0; it < 300; ++it) {
    const long w = 2 + static_cast<long>(rng() % 6);
    const long bmu = 1 + static_cast<long>(rng() % 3);
    mpz_class mu;
    mpz_pow_ui(mu.get_mpz_t(), mpz_class(w).get_mpz_t(), bmu);
    if (rng() % 2 == 0 && bmu % 2 == 1) mu = -mu;
    std::vector<std::pair<mpz_class, long long>> pairs;
    const int np = 1 + static_cast<int>(rng() % 2);
    for (int i = 0; i < np; ++i) {
      const long e = 1 + static_cast<long>(rng() % 3);
      mpz_class lam;
      mpz_pow_ui(lam.get_mpz_t(), mpz_class(w).get_mpz_t(), e);
      if (rng() % 2 == 0) lam = -lam;
      pairs.emplace_back(lam, 1 + static_cast<long long>(rng() % 2));
    }
    CommonBase cb;
    try {
      cb = common_base(mu, pairs);
    } catch (const NotRepresentableError&) {
      CHECK(mu < 0);
      continue;
    }
    // lambda^b = mu
    mpq_class lb = oracles::qpow(cb.lambda, cb.b.get_si());
    CHECK(lb == mpq_class(mu));
    // zeta * lambda^{b_i} = lambda_j^{a_i}
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      mpq_class lhs = oracles::qpow(cb.lambda, cb.pairs[i].b_i.get_si());
      if (cb.pairs[i].zeta == -1) lhs = -lhs;
      CHECK(lhs == oracles::qpow(pairs[i].first, pairs[i].second));
      CHECK(cb.pairs[i].B_i == cb.pairs[i].b_i * cb.E);
    }
    CHECK((cb.E == 1 || cb.E == 2));
  }
}

TEST_CASE("lattice basis vectors satisfy their identities exactly") {
  std::mt19937_64 rng(4242);
  for (int it = 0; it < 200; ++it) {
    const int k = 2 + static_cast<int>(rng() % 3);
    std::vector<mpq_class> xs;
    for (int i = 0; i < k; ++i) {
      long num = 0;
      while (num == 0) num = static_cast<long>(rng() % 25) - 12;
      long den = 1 + static_cast<long>(rng() % 6);
      mpq_class x(num, den);
      x.canonicalize();
      xs.push_back(x);
    }
    auto lat = relations_lattice(xs);  // construction verifies exactness
    for (const auto& vec : lat.basis) {
      mpq_class prod = 1;
      for (int i = 0; i < k; ++i) {
        prod *= oracles::qpow(mpz_class(xs[i].get_num()), vec[i].get_si()) /
                oracles::qpow(mpz_class(xs[i].get_den()), vec[i].get_si());
      }
      CHECK(prod == 1);
    }
  }
}

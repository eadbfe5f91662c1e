#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <vector>

#include "equiframe/characters.hpp"
#include "equiframe/eigensearch.hpp"
#include "equiframe/linalg.hpp"

using namespace equiframe;

namespace {

std::vector<int> legendre_sign_vector(int p) {
  std::vector<int> v(static_cast<std::size_t>(p), 0);
  for (int k = 1; k < p; ++k) v[static_cast<std::size_t>(k)] = legendre(k, p);
  return v;
}

struct ThreadEnvGuard {
  explicit ThreadEnvGuard(const char* value) {
    setenv("EQUIFRAME_THREADS", value, 1);
  }
  ~ThreadEnvGuard() { unsetenv("EQUIFRAME_THREADS"); }
};

}  // namespace

TEST_SUITE("eigensearch") {

TEST_CASE("n=5 has the quadratic character as its only hit") {
  const SearchReport r = sign_eigenvector_search(5);
  REQUIRE(r.hits.size() == 1);
  CHECK(r.hits[0].vec == legendre_sign_vector(5));
  CHECK(r.hits[0].lambda == Complex(1.0, 0.0));
  CHECK(r.n == 5);
  CHECK(r.pruned);
  CHECK(r.candidates_examined >= 1);
  CHECK(r.candidates_examined <= 3);
}

TEST_CASE("n=7 has the quadratic character with eigenvalue -i") {
  const SearchReport r = sign_eigenvector_search(7);
  REQUIRE(r.hits.size() == 1);
  CHECK(r.hits[0].vec == legendre_sign_vector(7));
  CHECK(r.hits[0].lambda == Complex(0.0, -1.0));
}

TEST_CASE("n=3 finds [0, 1, -1]") {
  const SearchReport r = sign_eigenvector_search(3);
  REQUIRE(r.hits.size() == 1);
  CHECK(r.hits[0].vec == std::vector<int>{0, 1, -1});
  CHECK(r.hits[0].lambda == Complex(0.0, -1.0));
}

TEST_CASE("every prime hit up to 13 is the quadratic character") {
  for (int p : {3, 5, 7, 11, 13}) {
    CAPTURE(p);
    const SearchReport r = sign_eigenvector_search(p);
    REQUIRE(r.hits.size() == 1);
    CHECK(r.hits[0].vec == legendre_sign_vector(p));
    const Complex expect = (p % 4 == 1) ? Complex(1, 0) : Complex(0, -1);
    CHECK(r.hits[0].lambda == expect);
  }
}

TEST_CASE("composite and even sizes have no hits") {
  for (int n : {4, 6, 8, 9, 10, 12, 15}) {
    CAPTURE(n);
    const SearchReport r = sign_eigenvector_search(n);
    CHECK(r.hits.empty());
  }
  // even sizes are excluded before any enumeration when pruning is on
  CHECK(sign_eigenvector_search(6).candidates_examined == 0);
}

TEST_CASE("search rejects n below 3") {
  CHECK_THROWS_AS(sign_eigenvector_search(2), std::invalid_argument);
}

TEST_CASE("pruning never loses a hit") {
  for (int n = 3; n <= 17; ++n) {
    CAPTURE(n);
    const SearchReport pruned = sign_eigenvector_search(n, {}, true);
    const SearchReport raw = sign_eigenvector_search(n, {}, false);
    CHECK_FALSE(raw.pruned);
    CHECK(raw.candidates_examined == (std::uint64_t{1} << (n - 2)));
    REQUIRE(pruned.hits.size() == raw.hits.size());
    for (std::size_t i = 0; i < raw.hits.size(); ++i) {
      CHECK(pruned.hits[i].vec == raw.hits[i].vec);
      CHECK(pruned.hits[i].lambda == raw.hits[i].lambda);
    }
    CHECK(pruned.candidates_examined <= raw.candidates_examined);
  }
}

TEST_CASE("negating a hit gives another eigenvector with the same eigenvalue") {
  const SearchReport r = sign_eigenvector_search(11);
  REQUIRE(r.hits.size() == 1);
  CVec neg(11);
  for (std::size_t k = 0; k < 11; ++k)
    neg[k] = Complex(-double(r.hits[0].vec[k]), 0.0);
  const CVec out = apply_dft(neg);
  for (std::size_t k = 0; k < 11; ++k)
    CHECK(std::abs(out[k] - r.hits[0].lambda * neg[k]) < 1e-9);
}

TEST_CASE("a tight budget raises with the partial report attached") {
  bool threw = false;
  try {
    sign_eigenvector_search(21, std::uint64_t{1000});
  } catch (const SearchBudgetExceeded& e) {
    threw = true;
    CHECK(e.partial.n == 21);
    CHECK(e.partial.candidates_examined > 1000);
  }
  CHECK(threw);
}

TEST_CASE("a generous budget changes nothing") {
  const SearchReport tight = sign_eigenvector_search(13, std::uint64_t{1} << 40);
  const SearchReport free_run = sign_eigenvector_search(13);
  CHECK(tight.hits.size() == free_run.hits.size());
  CHECK(tight.candidates_examined == free_run.candidates_examined);
}

TEST_CASE("the leaf set does not depend on the thread count") {
  const SearchReport serial = sign_eigenvector_search(13);
  for (const char* threads : {"2", "4", "9"}) {
    ThreadEnvGuard guard(threads);
    const SearchReport parallel = sign_eigenvector_search(13);
    CHECK(parallel.candidates_examined == serial.candidates_examined);
    REQUIRE(parallel.hits.size() == serial.hits.size());
    for (std::size_t i = 0; i < serial.hits.size(); ++i) {
      CHECK(parallel.hits[i].vec == serial.hits[i].vec);
      CHECK(parallel.hits[i].lambda == serial.hits[i].lambda);
    }
  }
}

TEST_CASE("conjugate relation holds for quadratic characters") {
  const auto z5 = conjugate_eigenvector_check(character_vector(5, 2).entries);
  REQUIRE(z5.has_value());
  CHECK(std::abs(*z5 - Complex(1, 0)) < 1e-12);

  // real eigenvector: W f = lambda f implies W f = lambda conj(f)
  const auto z7 = conjugate_eigenvector_check(character_vector(7, 2).entries);
  REQUIRE(z7.has_value());
  CHECK(std::abs(*z7 - Complex(0, -1)) < 1e-12);
}

TEST_CASE("conjugate relation holds with unimodular factor for higher orders") {
  const std::vector<std::pair<int, int>> pairs = {
      {5, 4}, {7, 3}, {7, 6}, {11, 5}, {13, 3}, {13, 4},
      {13, 6}, {17, 4}, {17, 8}, {19, 3}, {19, 6},
  };
  for (const auto& [p, m] : pairs) {
    CAPTURE(p);
    CAPTURE(m);
    const auto z = conjugate_eigenvector_check(character_vector(p, m).entries);
    REQUIRE(z.has_value());
    CHECK(std::abs(std::abs(*z) - 1.0) < 1e-9);
  }
}

TEST_CASE("conjugate relation fails for a generic unimodular vector") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> angle(0.0, 6.28);
  CVec f(11, Complex(0, 0));
  for (std::size_t k = 1; k < 11; ++k) f[k] = std::polar(1.0, angle(gen));
  CHECK_FALSE(conjugate_eigenvector_check(f).has_value());
}

TEST_CASE("conjugate check returns nothing for the zero vector") {
  CHECK_FALSE(conjugate_eigenvector_check(CVec(7, Complex(0, 0))).has_value());
}

TEST_CASE("uniqueness report up to 13 follows the prime pattern") {
  const std::vector<UniquenessRow> rows = uniqueness_report(13);
  REQUIRE(rows.size() == 11);
  for (const UniquenessRow& row : rows) {
    CAPTURE(row.n);
    CHECK(row.ok);
    if (row.prime) {
      CHECK(row.hits == 1);
      CHECK(row.matches_quadratic_character);
      REQUIRE(row.lambda.has_value());
      const Complex expect =
          (row.n % 4 == 1) ? Complex(1, 0) : Complex(0, -1);
      CHECK(*row.lambda == expect);
    } else {
      CHECK(row.hits == 0);
      CHECK_FALSE(row.lambda.has_value());
    }
  }
}

TEST_CASE("uniqueness report propagates budget exhaustion") {
  CHECK_THROWS_AS(uniqueness_report(21, std::uint64_t{500}),
                  SearchBudgetExceeded);
}

}  // TEST_SUITE

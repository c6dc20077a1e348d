#include <random>

#include "doctest.h"
#include "dynoracle/omv.hpp"

using namespace dynoracle;

namespace {

BoolVector random_vector(std::size_t n, std::mt19937_64& rng) {
  BoolVector v(n);
  for (std::size_t i = 0; i < n; ++i) v.set(i, rng() & 1);
  return v;
}

BoolMatrix random_bool_matrix(std::size_t n, std::mt19937_64& rng) {
  BoolMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m.set(r, c, rng() % 3 == 0);
  return m;
}

BoolVector boolean_product(const BoolMatrix& m, const BoolVector& v) {
  BoolVector out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c)
      if (m.get(r, c) && v.get(c)) out.set(r, true);
  return out;
}

}  // namespace

TEST_CASE("bool vectors") {
  BoolVector a(130), b(130);
  a.set(0, true);
  a.set(64, true);
  a.set(129, true);
  b.set(64, true);
  CHECK(a.popcount() == 3);
  CHECK(a.hamming(b) == 2);
  a.set(0, false);
  CHECK(a.popcount() == 2);
  CHECK_THROWS_AS(a.hamming(BoolVector(5)), ContractViolation);
}

TEST_CASE("precomputed products") {
  std::mt19937_64 rng(1);
  const std::size_t n = 8;

  BoolMatrix id(n);
  for (std::size_t i = 0; i < n; ++i) id.set(i, i, true);
  std::vector<BoolVector> preds;
  for (std::size_t i = 0; i < n; ++i) preds.push_back(random_vector(n, rng));
  const OmvState s(id, preds);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) CHECK(s.precomputed(i)[r] == (preds[i].get(r) ? 1u : 0u));

  BoolMatrix ones(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) ones.set(r, c, true);
  std::vector<BoolVector> e1(n, BoolVector(n));
  for (auto& v : e1) v.set(0, true);
  const OmvState all(ones, e1);
  for (std::size_t r = 0; r < n; ++r) CHECK(all.precomputed(0)[r] == 1);

  const auto m = random_bool_matrix(n, rng);
  const OmvState rnd(m, preds);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < n; ++r) {
      std::uint32_t expect = 0;
      for (std::size_t c = 0; c < n; ++c) expect += m.get(r, c) && preds[i].get(c);
      CHECK(rnd.precomputed(i)[r] == expect);
    }
}

TEST_CASE("queries") {
  std::mt19937_64 rng(2);
  const std::size_t n = 8;
  const auto m = random_bool_matrix(n, rng);
  std::vector<BoolVector> preds;
  for (std::size_t i = 0; i < n; ++i) preds.push_back(random_vector(n, rng));

  SUBCASE("exact predictions are free") {
    OmvState s(m, preds);
    for (std::size_t i = 0; i < n; ++i) CHECK(s.query(preds[i]) == boolean_product(m, preds[i]));
    CHECK(s.work() == 0);
  }

  SUBCASE("identity matrix echoes the query") {
    BoolMatrix id(n);
    for (std::size_t i = 0; i < n; ++i) id.set(i, i, true);
    OmvState s(id, preds);
    const auto v = random_vector(n, rng);
    CHECK(s.query(v) == v);
  }

  SUBCASE("three differing positions cost 3n") {
    OmvState s(m, preds);
    BoolVector v = preds[0];
    for (std::size_t pos : {1u, 4u, 6u}) v.set(pos, !v.get(pos));
    CHECK(s.query(v) == boolean_product(m, v));
    CHECK(s.work() == 24);
  }

  SUBCASE("random sessions") {
    OmvState s(m, preds);
    std::uint64_t expect_work = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = random_vector(n, rng);
      expect_work += n * v.hamming(preds[i]);
      CHECK(s.query(v) == boolean_product(m, v));
    }
    CHECK(s.work() == expect_work);
  }

  SUBCASE("more than n queries") {
    OmvState s(m, preds);
    for (std::size_t i = 0; i < n; ++i) s.query(preds[i]);
    CHECK_THROWS_AS(s.query(preds[0]), ContractViolation);
  }

  CHECK_THROWS_AS(OmvState(m, {}), ContractViolation);
}

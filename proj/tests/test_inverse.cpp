#include <random>

#include "doctest.h"
#include "dynoracle/inverse_hierarchy.hpp"
#include "dynoracle/predicted_inverse.hpp"

using namespace dynoracle;

namespace {

const PrimeField kField;

std::vector<Residue> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::vector<Residue> x(n);
  for (auto& e : x) e = rng() % kField.modulus();
  return x;
}

RankOneUpdate random_update(std::size_t n, std::mt19937_64& rng) {
  return {random_vector(n, rng), random_vector(n, rng)};
}

void add_outer(FieldMatrix& m, const RankOneUpdate& upd) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      m(r, c) = kField.add(m(r, c), kField.mul(upd.u[r], upd.v[c]));
}

}  // namespace

TEST_CASE("woodbury factors") {
  const std::size_t n = 8;
  const auto m = random_matrix(kField, n, n, 1);
  const auto m_inv = *mat_inverse(m);

  const auto none = woodbury_factors(m_inv, FieldMatrix(kField, n, 0), FieldMatrix(kField, n, 0));
  REQUIRE(none.has_value());
  CHECK(none->left.cols() == 0);
  CHECK(none->right.rows() == 0);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = random_matrix(kField, n, 2, 10 + seed);
    const auto v = random_matrix(kField, n, 2, 20 + seed);
    const auto f = woodbury_factors(m_inv, u, v);
    REQUIRE(f.has_value());
    const auto updated = mat_add(m, mat_mul(u, v.transposed()));
    const auto lr = mat_sub(FieldMatrix::identity(kField, n), mat_mul(f->left, f->right));
    CHECK(mat_mul(updated, mat_mul(m_inv, lr)) == FieldMatrix::identity(kField, n));
  }

  // M + e_0 (e_1 - e_0)^T on the identity copies row 1 into row 0: singular.
  auto u = FieldMatrix(kField, 2, 1);
  auto v = FieldMatrix(kField, 2, 1);
  u(0, 0) = 1;
  v(0, 0) = kField.neg(1);
  v(1, 0) = 1;
  CHECK_FALSE(woodbury_factors(FieldMatrix::identity(kField, 2), u, v).has_value());
}

TEST_CASE("hierarchy on a single entry update") {
  InverseHierarchy h(FieldMatrix::identity(kField, 4));
  const Residue alpha = 7;
  const auto r = h.update({{1, alpha}}, unit_vector(3), ApplyPolicy::kAlways);
  CHECK(r.applied);
  CHECK(r.det_factor == 1);
  std::vector<Residue> e3(4, 0);
  e3[3] = 1;
  CHECK(r.row == e3);

  std::vector<Residue> expect(4, 0);
  expect[1] = 1;
  expect[3] = kField.neg(alpha);
  CHECK(h.peek_row(unit_vector(1)) == expect);
  CHECK(h.reconstruct_inverse() == *mat_inverse(h.matrix()));
}

TEST_CASE("hierarchy against dense inverse") {
  std::mt19937_64 rng(3);
  const std::size_t n = 12;
  InverseHierarchy h(random_matrix(kField, n, n, 5));
  FieldMatrix ref = h.matrix();
  for (int step = 0; step < 40; ++step) {
    const std::size_t i = rng() % n;
    const auto v = random_vector(n, rng);
    const auto before = *mat_inverse(ref);
    const auto r = h.update({{i, 1}}, sparsify(v), ApplyPolicy::kIfNonsingular);
    CHECK(r.row == row_times(v, before));
    if (r.applied) {
      for (std::size_t c = 0; c < n; ++c) ref(i, c) = kField.add(ref(i, c), v[c]);
    }
    CHECK(h.matrix() == ref);
    if (step % 5 == 0) CHECK(h.reconstruct_inverse() == *mat_inverse(ref));
  }
}

TEST_CASE("hierarchy refresh schedule and predictions") {
  const std::size_t n = 16;
  InverseHierarchy h(random_matrix(kField, n, n, 8));
  const std::size_t top = h.top_level();
  REQUIRE(top >= 2);
  h.set_prediction_source([](std::size_t level) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < (std::size_t{1} << level); ++j) out.push_back(j);
    return out;
  });
  CHECK(h.prediction_set(0) == std::vector<std::size_t>{0});
  CHECK(h.prediction_set(top - 1).size() == std::size_t{1} << (top - 1));
  // seeding fills the deepest level; level 0 fills on its first refresh
  CHECK(h.cached(top - 1, 1));
  h.update(unit_vector(3), unit_vector(5), ApplyPolicy::kIfNonsingular);
  CHECK(h.calls() == 1);
  CHECK(h.cached(0, 0));
  CHECK_FALSE(h.cached(0, 1));
  const auto inv = h.reconstruct_inverse();
  CHECK(h.peek_row(unit_vector(0)) == std::vector<Residue>(inv.row(0).begin(), inv.row(0).end()));

  CHECK_THROWS_AS(h.set_predictions(1, {{0}, {1, 2}}), ContractViolation);
  CHECK_THROWS_AS(h.set_predictions(top, {}), ContractViolation);
}

TEST_CASE("formula embedding") {
  std::mt19937_64 rng(4);
  for (std::size_t trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    const std::size_t q = rng() % 4;
    const auto m = random_matrix(kField, n, n, rng());
    const auto u = random_matrix(kField, n, q, rng());
    const auto v = random_matrix(kField, n, q, rng());
    const auto vq = random_matrix(kField, n, q + 1, rng());
    std::vector<Residue> d(q);
    for (auto& x : d) x = rng() % 3;

    const auto b = build_formula_embedding(m, u, v, vq, d);
    const EmbeddingLayout layout{n, q};
    REQUIRE(b.rows() == layout.dim());

    FieldMatrix udv = FieldMatrix(kField, n, n);
    for (std::size_t s = 0; s < q; ++s)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          udv(r, c) = kField.add(udv(r, c), kField.mul(kField.mul(u(r, s), d[s]), v(c, s)));
    const auto inner = mat_inverse(mat_add(m, udv));
    const auto b_inv = mat_inverse(b);
    REQUIRE(inner.has_value());
    REQUIRE(b_inv.has_value());
    FieldMatrix expect = mat_mul(vq.transposed(), *inner);
    for (auto& x : expect.data()) x = kField.neg(x);
    CHECK(formula_block(*b_inv, layout) == expect);

    const auto b0 = build_formula_embedding(m, u, v, vq, std::vector<Residue>(q, 0));
    CHECK(embedding_inverse_at_zero(*mat_inverse(m), u, v, vq) == *mat_inverse(b0));
  }

  // With no updates embedded the block is -V'^T M^{-1} whatever D is.
  const auto m = random_matrix(kField, 3, 3, 1);
  const auto vq = random_matrix(kField, 3, 3, 2);
  const auto zero = FieldMatrix(kField, 3, 2);
  const EmbeddingLayout layout{3, 2};
  const auto a = formula_block(*mat_inverse(build_formula_embedding(m, zero, zero, vq, {0, 0})), layout);
  const auto b = formula_block(*mat_inverse(build_formula_embedding(m, zero, zero, vq, {5, 9})), layout);
  CHECK(a == b);
}

TEST_CASE("rank gadget") {
  std::mt19937_64 rng(5);
  const std::size_t n = 6;
  const auto x = random_matrix(kField, n, n, 1);
  const auto y = random_matrix(kField, n, n, 2);
  for (std::size_t r = 0; r <= n; ++r) {
    // rank r as a product of n x r and r x n factors
    const auto a = random_matrix(kField, n, r, rng());
    const auto b = random_matrix(kField, r, n, rng());
    const auto m = r == 0 ? FieldMatrix(kField, n, n) : mat_mul(a, b);
    REQUIRE(rank(m) == r);
    for (std::size_t k = 0; k <= n; ++k) {
      const bool invertible = mat_inverse(rank_gadget(m, x, y, k)).has_value();
      CHECK(invertible == (r + k >= n));
    }
  }
}

TEST_CASE("predicted inverse against dense recomputation") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    const std::size_t n = 8;
    const bool track = trial > 0;
    FieldMatrix ref = random_matrix(kField, n, n, 10 + trial);
    std::vector<RankOneUpdate> queue;
    for (std::size_t i = 0; i < 2 * n; ++i) queue.push_back(random_update(n, rng));
    PredictedInverse pi(ref, queue, {track, 7, 3});

    for (int step = 0; step < 60; ++step) {
      const std::size_t eta = 1 + rng() % 4;
      RankOneUpdate upd = pi.queued(eta);
      if (trial == 2 && step % 3 == 0) {
        // row 0 becomes a copy of row 1
        upd.u.assign(n, 0);
        upd.u[0] = 1;
        for (std::size_t c = 0; c < n; ++c) upd.v[c] = kField.sub(ref(1, c), ref(0, c));
      }
      const auto before = mat_inverse(ref);
      const auto out = pi.perform_update(eta, upd);
      if (before) {
        REQUIRE(out.row.has_value());
        CHECK(*out.row == row_times(upd.v, *before));
      } else {
        CHECK_FALSE(out.row.has_value());
      }
      add_outer(ref, upd);
      CHECK(out.det == determinant(ref));
      CHECK(out.rank == rank(ref));
      CHECK(pi.matrix() == ref);
      if (step % 7 == 0) {
        const auto w = random_vector(n, rng);
        const auto q = pi.query_row(w);
        const auto inv = mat_inverse(ref);
        CHECK(q.has_value() == inv.has_value());
        if (q && inv) CHECK(*q == row_times(w, *inv));
        CHECK(pi.represented_inverse() == *mat_inverse(pi.embedded_matrix()));
      }
      pi.append_update(random_update(n, rng));
    }
  }
}

TEST_CASE("predicted inverse queue rules") {
  std::mt19937_64 rng(7);
  const std::size_t n = 6;
  std::vector<RankOneUpdate> queue;
  for (std::size_t i = 0; i < n; ++i) queue.push_back(random_update(n, rng));

  SUBCASE("queued updates are embedded at epoch start") {
    PredictedInverse pi(random_matrix(kField, n, n, 1), queue, {false, 1, 3});
    CHECK(pi.layout().q == n);
    CHECK(pi.perform_update(1).predicted_path);
  }

  SUBCASE("an appended update at the back takes the dense path") {
    PredictedInverse pi(random_matrix(kField, n, n, 1), queue, {false, 1, 3});
    pi.append_update(random_update(n, rng));
    CHECK_FALSE(pi.perform_update(pi.queue_size()).predicted_path);
  }

  SUBCASE("the queue must hold n updates") {
    PredictedInverse pi(random_matrix(kField, n, n, 1), queue, {false, 1, 3});
    pi.perform_update(1);
    CHECK_THROWS_AS(pi.perform_update(1), ContractViolation);
  }

  SUBCASE("interleaved appends keep the queue long enough") {
    PredictedInverse pi(random_matrix(kField, n, n, 1), queue, {true, 1, 3});
    for (int i = 0; i < 20; ++i) {
      pi.append_update(random_update(n, rng));
      CHECK_NOTHROW(pi.perform_update(1 + rng() % 3));
    }
    CHECK(pi.epochs() > 1);
  }

  CHECK_THROWS_AS(PredictedInverse(random_matrix(kField, n, n, 1), {{{1}, {1}}}), ContractViolation);
}

TEST_CASE("sparse helpers") {
  const std::vector<Residue> dense{0, 3, 0, 5};
  const auto s = sparsify(dense, 10);
  REQUIRE(s.size() == 2);
  CHECK(s[0].index == 11);
  CHECK(s[1].value == 5);
  CHECK(unit_vector(2).front().index == 2);
}

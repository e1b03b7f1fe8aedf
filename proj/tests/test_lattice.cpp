#include "support.hpp"

#include <gtest/gtest.h>

using namespace testing_support;

namespace {

IntMatrix m(std::initializer_list<std::initializer_list<long>> rows) {
  auto vs = ivs(rows);
  return IntMatrix::from_rows(vs, vs.empty() ? 0 : vs[0].size());
}

void expect_hnf_shape(const IntMatrix& a, const HermiteForm& hf) {
  EXPECT_EQ(hf.U * a, hf.H);
  Integer d = det_by_permutations(hf.U);
  EXPECT_TRUE(d == 1 || d == -1);
  std::size_t last_col = 0;
  for (std::size_t r = 0; r < hf.H.rows(); ++r) {
    if (r >= hf.rank()) {
      EXPECT_TRUE(is_zero(hf.H.row(r)));
      continue;
    }
    std::size_t p = hf.pivots[r];
    if (r > 0) EXPECT_GT(p, last_col);
    last_col = p;
    for (std::size_t c = 0; c < p; ++c) EXPECT_EQ(hf.H(r, c), 0);
    EXPECT_GT(hf.H(r, p), 0);
    for (std::size_t above = 0; above < r; ++above) {
      EXPECT_GE(hf.H(above, p), 0);
      EXPECT_LT(hf.H(above, p), hf.H(r, p));
    }
  }
}

void expect_snf_shape(const IntMatrix& a, const SmithForm& sf) {
  EXPECT_EQ(sf.U * a * sf.V, sf.S);
  Integer du = det_by_permutations(sf.U), dv = det_by_permutations(sf.V);
  EXPECT_TRUE(du == 1 || du == -1);
  EXPECT_TRUE(dv == 1 || dv == -1);
  for (std::size_t i = 0; i < sf.S.rows(); ++i)
    for (std::size_t j = 0; j < sf.S.cols(); ++j)
      if (i != j) EXPECT_EQ(sf.S(i, j), 0);
  std::size_t k = std::min(sf.S.rows(), sf.S.cols());
  for (std::size_t i = 0; i < k; ++i) {
    EXPECT_GE(sf.S(i, i), 0);
    if (i + 1 < k && sf.S(i, i) != 0) EXPECT_EQ(sf.S(i + 1, i + 1) % sf.S(i, i), 0);
    if (sf.S(i, i) == 0 && i + 1 < k) EXPECT_EQ(sf.S(i + 1, i + 1), 0);
  }
}

}  // namespace

TEST(Hermite, TwoByTwoExample) {
  auto a = m({{2, 4}, {6, 8}});
  auto hf = hermite_normal_form(a);
  EXPECT_EQ(hf.H, m({{2, 0}, {0, 4}}));
  expect_hnf_shape(a, hf);
}

TEST(Hermite, IdentityAndZero) {
  auto id = IntMatrix::identity(3);
  auto hf = hermite_normal_form(id);
  EXPECT_EQ(hf.H, id);
  EXPECT_EQ(hf.U, id);

  IntMatrix z(2, 3);
  auto hz = hermite_normal_form(z);
  EXPECT_EQ(hz.H, z);
  EXPECT_EQ(hz.U, IntMatrix::identity(2));
  EXPECT_EQ(hz.rank(), 0u);
}

TEST(Hermite, RandomPostconditions) {
  Rng rng(11);
  for (int t = 0; t < 300; ++t) {
    auto a = random_matrix(rng, uniform(rng, 1, 6), uniform(rng, 1, 6), -50, 50);
    expect_hnf_shape(a, hermite_normal_form(a));
  }
}

TEST(Hermite, RankDeficientRows) {
  auto a = m({{1, 2, 3}, {2, 4, 6}, {0, 0, 5}});
  auto hf = hermite_normal_form(a);
  EXPECT_EQ(hf.rank(), 2u);
  expect_hnf_shape(a, hf);
}

TEST(Smith, Examples) {
  auto a = m({{2, 4}, {6, 8}});
  auto sf = smith_normal_form(a);
  EXPECT_EQ(sf.S, m({{2, 0}, {0, 4}}));
  expect_snf_shape(a, sf);

  auto id = IntMatrix::identity(3);
  auto si = smith_normal_form(id);
  EXPECT_EQ(si.S, id);
  EXPECT_EQ(si.U, id);
  EXPECT_EQ(si.V, id);

  auto s3 = smith_normal_form(m({{3}}));
  EXPECT_EQ(s3.S, m({{3}}));
}

TEST(Smith, RandomPostconditionsAndFirstFactor) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    auto a = random_matrix(rng, uniform(rng, 1, 6), uniform(rng, 1, 6), -50, 50);
    auto sf = smith_normal_form(a);
    expect_snf_shape(a, sf);
    Integer g = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) g = cragged::gcd(g, a(i, j));
    EXPECT_EQ(sf.S(0, 0), g);
    if (a.rows() == a.cols()) {
      Integer prod = 1;
      for (std::size_t i = 0; i < a.rows(); ++i) prod *= sf.S(i, i);
      EXPECT_EQ(prod, abs(det_by_permutations(a)));
    }
  }
}

TEST(Determinant, MatchesPermutationExpansion) {
  Rng rng(13);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = uniform(rng, 1, 5);
    auto a = random_matrix(rng, n, n, -9, 9);
    EXPECT_EQ(determinant(a), det_by_permutations(a));
  }
}

TEST(SpanBasis, Examples) {
  EXPECT_EQ(span_basis(ivs({{1, 1}, {1, -1}}), 2), m({{1, 1}, {0, 2}}));
  EXPECT_EQ(span_basis(ivs({{1, 0}, {0, 1}}), 2), IntMatrix::identity(2));
  auto empty = span_basis({}, 2);
  EXPECT_EQ(empty.rows(), 0u);
}

TEST(SpanBasis, Idempotent) {
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = uniform(rng, 1, 4);
    std::vector<IntVector> vs;
    for (int k = uniform(rng, 1, 6); k > 0; --k) vs.push_back(random_vector(rng, n, -6, 6));
    auto b1 = span_basis(vs, n);
    auto b2 = span_basis(b1.row_vectors(), n);
    EXPECT_EQ(b1, b2);
    if (b1.rows() == 0) continue;
    auto fwd = sublattice_index(b1.row_vectors(), vs, n);
    auto back = sublattice_index(vs, b1.row_vectors(), n);
    EXPECT_TRUE(fwd.is_basis());
    EXPECT_TRUE(back.is_basis());
  }
}

TEST(SublatticeIndex, Examples) {
  auto idx = sublattice_index(ivs({{1, 1}, {1, -1}}), ivs({{1, 1}, {1, -1}, {1, 0}}), 2);
  EXPECT_EQ(idx.kind, LatticeIndex::Kind::Index);
  EXPECT_EQ(idx.index, 2);

  EXPECT_TRUE(sublattice_index(ivs({{1, 0}, {0, 1}}), ivs({{1, 0}, {0, 1}}), 2).is_basis());
  EXPECT_EQ(sublattice_index(ivs({{1, 0}}), ivs({{1, 0}, {0, 1}}), 2).kind, LatticeIndex::Kind::RankDrop);
  EXPECT_EQ(sublattice_index(ivs({{1, 0}, {0, 1}}), ivs({{2, 0}, {0, 1}}), 2).kind,
            LatticeIndex::Kind::NotContained);
}

TEST(SublatticeIndex, FullRankEqualsDeterminantRatio) {
  Rng rng(15);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = uniform(rng, 1, 4);
    auto a = random_matrix(rng, n, n, -5, 5);
    if (det_by_permutations(a) == 0) continue;
    auto c = random_matrix(rng, n, n, -3, 3);
    if (det_by_permutations(c) == 0) continue;
    auto sub = (c * a).row_vectors();
    auto idx = sublattice_index(sub, a.row_vectors(), n);
    ASSERT_EQ(idx.kind, LatticeIndex::Kind::Index);
    EXPECT_EQ(idx.index, abs(det_by_permutations(c)));
  }
}

TEST(Kernel, AnnihilatesAndHasCorrectRank) {
  Rng rng(16);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = uniform(rng, 1, 5), c = uniform(rng, 1, 5);
    auto a = random_matrix(rng, r, c, -4, 4);
    auto k = kernel_basis(a);
    EXPECT_EQ(k.rows() + cragged::rank(a), c);
    if (k.rows()) EXPECT_TRUE((a * k.transposed()).is_zero());
  }
}

TEST(Gale, P2) {
  auto beta = IntMatrix::from_columns(ivs({{1, 0}, {0, 1}, {-1, -1}}), 2);
  auto g = gale_dual(beta);
  EXPECT_EQ(g.free_rank, 1u);
  EXPECT_TRUE(g.torsion_factors.empty());
  EXPECT_EQ(g.projection, m({{1, 1, 1}}));
}

TEST(Gale, IdentityAndP112) {
  auto g = gale_dual(IntMatrix::identity(2));
  EXPECT_EQ(g.free_rank, 0u);
  EXPECT_TRUE(g.torsion_factors.empty());

  auto beta = IntMatrix::from_columns(ivs({{1, 0}, {0, 1}, {-1, -2}}), 2);
  auto h = gale_dual(beta);
  EXPECT_EQ(h.free_rank, 1u);
  EXPECT_EQ(h.projection, m({{1, 2, 1}}));
}

TEST(Gale, TorsionForNonPrimitiveBeta) {
  // beta = (2) on Z: coker of M -> Z^1, x -> 2x is Z/2
  auto g = gale_dual(m({{2, -2}}));
  EXPECT_EQ(g.free_rank, 1u);
  ASSERT_EQ(g.torsion_factors.size(), 1u);
  EXPECT_EQ(g.torsion_factors[0], 2);
  EXPECT_TRUE((g.projection * m({{2}, {-2}})).is_zero());
}

TEST(Gale, RandomAnnihilation) {
  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = uniform(rng, 1, 3), r = n + uniform(rng, 0, 3);
    auto beta = random_matrix(rng, n, r, -4, 4);
    if (cragged::rank(beta) != n) {
      EXPECT_THROW(gale_dual(beta), Error);
      continue;
    }
    auto g = gale_dual(beta);
    EXPECT_EQ(g.free_rank, r - n);
    EXPECT_TRUE((g.projection * beta.transposed()).is_zero());
    EXPECT_EQ(cragged::rank(g.projection), r - n);
    for (std::size_t i = 0; i < g.torsion_factors.size(); ++i) {
      EXPECT_GE(g.torsion_factors[i], 2);
      if (i + 1 < g.torsion_factors.size()) EXPECT_EQ(g.torsion_factors[i + 1] % g.torsion_factors[i], 0);
    }
  }
}

TEST(Gale, NotFullRank) {
  try {
    gale_dual(m({{1, 2}, {2, 4}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFullRank);
  }
}

TEST(Arith, ParseAndFormatRationals) {
  EXPECT_EQ(parse_rational("1/2"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-3"), Rational(-3));
  EXPECT_EQ(parse_rational("-4/6"), Rational(-2, 3));
  EXPECT_EQ(format(Rational(-2, 3)), "-2/3");
  EXPECT_EQ(format(Rational(5)), "5");
  for (const char* bad : {"", "1/0", "x", "1.5", "1//2", "/3", "1/-2"}) EXPECT_THROW(parse_rational(bad), Error) << bad;
}

TEST(Arith, LargeIntegersStayExact) {
  Integer big("123456789012345678901234567890");
  auto sf = smith_normal_form(IntMatrix::from_rows({{big * 2, big * 4}, {big * 6, big * 8}}, 2));
  EXPECT_EQ(sf.S(0, 0), big * 2);
  EXPECT_EQ(sf.S(1, 1), big * 4);
}

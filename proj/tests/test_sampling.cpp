#include <gtest/gtest.h>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include <cmath>
#include <map>
#include <numeric>

#include "countrank/error.hpp"
#include "countrank/linalg.hpp"
#include "countrank/sampling.hpp"

using namespace countrank;

namespace {

// Pearson chi-square against a PMF; cells with expected count < 5 are pooled from the tails
// inward. Returns the upper-tail p-value.
template <typename Pmf>
double chi_square_pvalue(const std::map<std::int64_t, std::size_t>& counts, std::size_t n, std::int64_t lo,
                         std::int64_t hi, Pmf pmf) {
  std::vector<double> expected;
  std::vector<double> observed;
  double pool_e = 0.0, pool_o = 0.0;
  auto obs = [&](std::int64_t k) {
    const auto it = counts.find(k);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second);
  };
  double covered = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double e = static_cast<double>(n) * pmf(k);
    covered += pmf(k);
    pool_e += e;
    pool_o += obs(k);
    if (pool_e >= 5.0) {
      expected.push_back(pool_e);
      observed.push_back(pool_o);
      pool_e = pool_o = 0.0;
    }
  }
  // Remaining mass (including everything outside [lo, hi]) joins the last cell.
  double outside_o = 0.0;
  for (const auto& [k, c] : counts)
    if (k < lo || k > hi) outside_o += static_cast<double>(c);
  pool_e += static_cast<double>(n) * (1.0 - covered);
  pool_o += outside_o;
  expected.back() += pool_e;
  observed.back() += pool_o;
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    stat += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  }
  boost::math::chi_squared dist(static_cast<double>(expected.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

class PoissonGoodnessOfFit : public ::testing::TestWithParam<double> {};

TEST_P(PoissonGoodnessOfFit, MatchesPmf) {
  const double lambda = GetParam();
  rng::Stream stream(2024, rng::StreamTag::poisson, 1, static_cast<std::uint32_t>(lambda * 10));
  std::map<std::int64_t, std::size_t> counts;
  const std::size_t n = 40000;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = distributions::poisson(stream, lambda);
    ASSERT_GE(k, 0);
    ++counts[k];
    sum += static_cast<double>(k);
  }
  boost::math::poisson_distribution<double> pd(lambda);
  const auto hi = static_cast<std::int64_t>(lambda + 12.0 * std::sqrt(lambda) + 15.0);
  const double pv = chi_square_pvalue(counts, n, 0, hi, [&](std::int64_t k) {
    return boost::math::pdf(pd, static_cast<double>(k));
  });
  EXPECT_GT(pv, 1e-4) << "lambda = " << lambda;
  EXPECT_NEAR(sum / n, lambda, 5.0 * std::sqrt(lambda / n));
}

INSTANTIATE_TEST_SUITE_P(Rates, PoissonGoodnessOfFit, ::testing::Values(0.05, 0.5, 3.0, 9.9, 10.0, 25.0, 150.0));

struct BinomialCase {
  std::int64_t n;
  double p;
};

class BinomialGoodnessOfFit : public ::testing::TestWithParam<BinomialCase> {};

TEST_P(BinomialGoodnessOfFit, MatchesPmf) {
  const auto c = GetParam();
  rng::Stream stream(77, rng::StreamTag::matrix_multinomial, static_cast<std::uint32_t>(c.n),
                     static_cast<std::uint32_t>(c.p * 1000));
  std::map<std::int64_t, std::size_t> counts;
  const std::size_t draws = 40000;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto k = distributions::binomial(stream, c.n, c.p);
    ASSERT_GE(k, 0);
    ASSERT_LE(k, c.n);
    ++counts[k];
  }
  boost::math::binomial_distribution<double> bd(static_cast<double>(c.n), c.p);
  const double pv = chi_square_pvalue(counts, draws, 0, c.n, [&](std::int64_t k) {
    return boost::math::pdf(bd, static_cast<double>(k));
  });
  EXPECT_GT(pv, 1e-4) << "n = " << c.n << " p = " << c.p;
}

INSTANTIATE_TEST_SUITE_P(Cases, BinomialGoodnessOfFit,
                         ::testing::Values(BinomialCase{20, 0.1}, BinomialCase{30, 0.5}, BinomialCase{1000, 0.3},
                                           BinomialCase{50, 0.9}, BinomialCase{5000, 0.002},
                                           BinomialCase{200, 0.97}));

TEST(Binomial, DegenerateCases) {
  rng::Stream s(1, 1);
  EXPECT_EQ(distributions::binomial(s, 0, 0.5), 0);
  EXPECT_EQ(distributions::binomial(s, 10, 0.0), 0);
  EXPECT_EQ(distributions::binomial(s, 10, 1.0), 10);
  EXPECT_EQ(distributions::poisson(s, 0.0), 0);
}

TEST(Multinomial, SumsToTrialsWithRightMeans) {
  rng::Stream s(5, 2);
  const std::vector<double> p{0.5, 0.2, 0.2, 0.1, 0.0};
  std::vector<double> mean(p.size(), 0.0), out(p.size());
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    distributions::multinomial(s, 100, p, out);
    EXPECT_EQ(std::accumulate(out.begin(), out.end(), 0.0), 100.0);
    for (std::size_t k = 0; k < p.size(); ++k) mean[k] += out[k] / reps;
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_NEAR(mean[k], 100.0 * p[k], 5.0 * std::sqrt(100.0 * p[k] * (1 - p[k]) / reps) + 1e-12);
  }
  EXPECT_EQ(mean.back(), 0.0);
}

TEST(BernoulliMask, FullAtPOneAndRightFrequency) {
  EXPECT_EQ(sample_bernoulli_mask(5, 6, {1.0, 3}).size(), 30u);
  const auto m = sample_bernoulli_mask(200, 200, {0.3, 9});
  const double n = 40000.0;
  EXPECT_NEAR(static_cast<double>(m.size()) / n, 0.3, 5.0 * std::sqrt(0.3 * 0.7 / n));
  EXPECT_EQ(m, sample_bernoulli_mask(200, 200, {0.3, 9}));
  EXPECT_NE(m, sample_bernoulli_mask(200, 200, {0.3, 10}));
  EXPECT_THROW(sample_bernoulli_mask(2, 2, {0.0, 1}), DataError);
  EXPECT_THROW(sample_bernoulli_mask(2, 2, {1.5, 1}), DataError);
}

TEST(PoissonObservations, PerCellStreamsAreOrderIndependent) {
  DenseMatrix rates = DenseMatrix::constant(20, 15, 4.0);
  rates(3, 4) = 0.0;
  const Mask full = Mask::full(20, 15);
  const Mask part = sample_bernoulli_mask(20, 15, {0.4, 1});
  const auto a = sample_poisson(rates, full, 99);
  const auto b = sample_poisson(rates, part, 99);
  const auto dense_a = mask_adjoint(a);
  for (std::size_t k = 0; k < b.mask().size(); ++k) {
    const auto c = b.mask().cells()[k];
    EXPECT_EQ(static_cast<double>(b.counts()[k]), dense_a(c.row, c.col));
  }
  EXPECT_EQ(dense_a(3, 4), 0.0);
  EXPECT_THROW(sample_poisson(DenseMatrix::constant(2, 2, -1.0), Mask::full(2, 2), 1), DataError);
  EXPECT_THROW(sample_poisson(rates, Mask::full(2, 2), 1), DataError);
}

TEST(MultinomialObservations, MatrixAndRows) {
  const DenseMatrix p = DenseMatrix::constant(4, 5, 0.05);
  const auto x = sample_matrix_multinomial(p, 1000, 4);
  double total = 0.0;
  for (double v : x.entries()) total += v;
  EXPECT_EQ(total, 1000.0);
  EXPECT_EQ(x, sample_matrix_multinomial(p, 1000, 4));
  EXPECT_THROW(sample_matrix_multinomial(DenseMatrix::constant(2, 2, 0.3), 10, 1), DataError);

  const DenseMatrix rows = DenseMatrix::constant(3, 4, 0.25);
  const auto y = sample_row_multinomial({rows, {10, 20, 30}}, 8);
  for (std::size_t i = 0; i < 3; ++i) {
    double s = 0.0;
    for (double v : y.row(i)) s += v;
    EXPECT_EQ(s, 10.0 * static_cast<double>(i + 1));
  }
  EXPECT_THROW(sample_row_multinomial({DenseMatrix::constant(2, 2, 0.4), {1, 1}}, 1), DataError);
  EXPECT_THROW(sample_row_multinomial({rows, {1, 0, 1}}, 1), DataError);
}

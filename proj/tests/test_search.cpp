#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support/fixtures.hpp"

using namespace obp;

namespace {

bool contains(const SearchOutput& out, const ObpInstance& inst) {
  return std::any_of(out.results.begin(), out.results.end(),
                     [&](const SearchResult& r) { return r.instance == inst; });
}

SearchOutput run(int n, int k_max, int workers = 1) {
  SearchSpec spec;
  spec.n = n;
  spec.k_max = k_max;
  spec.workers = workers;
  return enumerate(spec);
}

}  // namespace

TEST(Search, TooSmallRangeIsEmpty) {
  const auto out = run(2, 3);
  EXPECT_TRUE(out.results.empty());
  EXPECT_EQ(out.counters.candidates, out.counters.quick_filter_rejections);
}

TEST(Search, FindsTheExamples) {
  const auto out = run(4, 22);
  EXPECT_TRUE(contains(out, fixtures::worked_example()));
  EXPECT_TRUE(contains(out, fixtures::figure_instance()));
  EXPECT_TRUE(contains(run(4, 18), fixtures::figure_instance()));
}

TEST(Search, CountersAccountForEveryCandidate) {
  for (int n = 2; n <= 4; ++n) {
    const auto out = run(n, 16);
    EXPECT_EQ(out.counters.accounted(), out.counters.candidates) << "n=" << n;
    EXPECT_EQ(out.counters.admissible, out.results.size() + out.counters.filtered_out);
  }
}

TEST(Search, ResultsAreCanonicallyOrdered) {
  const auto out = run(4, 20);
  for (std::size_t i = 1; i < out.results.size(); ++i)
    EXPECT_TRUE(canonical_less(out.results[i - 1].instance, out.results[i].instance));
}

TEST(Search, WorkerCountDoesNotChangeResults) {
  const auto one = run(4, 18, 1);
  const auto many = run(4, 18, 5);
  ASSERT_EQ(one.results.size(), many.results.size());
  for (std::size_t i = 0; i < one.results.size(); ++i) {
    EXPECT_EQ(one.results[i].instance, many.results[i].instance);
    EXPECT_EQ(one.results[i].lambda, many.results[i].lambda);
  }
  EXPECT_EQ(one.counters.fail_cover, many.counters.fail_cover);
  EXPECT_EQ(one.counters.admissible, many.counters.admissible);
}

TEST(Search, EveryResultSatisfiesTopologyBounds) {
  const auto out = run(5, 24);
  ASSERT_FALSE(out.results.empty());
  for (const auto& r : out.results) {
    const int n = r.instance.n();
    EXPECT_EQ(n, 2 * r.genus + r.nu - 1);
    EXPECT_GE(4 * r.genus, n + 3);
    EXPECT_LE(2 * r.genus, n);
  }
}

TEST(Search, GenusFilter) {
  SearchSpec spec;
  spec.n = 5;
  spec.k_max = 24;
  spec.genus = 3;
  const auto out = enumerate(spec);
  EXPECT_TRUE(out.results.empty());
  EXPECT_EQ(out.counters.filtered_out, out.counters.admissible);
}

TEST(MinDilatation, AgreesWithExhaustiveMinimum) {
  for (const auto& [n, k_max] : {std::pair{4, 22}, std::pair{5, 24}}) {
    const auto all = run(n, k_max);
    ASSERT_FALSE(all.results.empty());
    auto best = all.results.front();
    for (const auto& r : all.results)
      if (r.lambda < best.lambda * (1 - 1e-12)) best = r;
    SearchSpec spec;
    spec.n = n;
    spec.k_max = k_max;
    const auto found = min_dilatation(spec);
    EXPECT_NEAR(found.lambda, best.lambda, 1e-12 * best.lambda);
    EXPECT_EQ(found.instance, best.instance);
  }
}

TEST(MinDilatation, PinnedRegressionValues) {
  SearchSpec spec;
  spec.n = 4;
  spec.k_max = 22;
  const auto four = min_dilatation(spec);
  spec.n = 5;
  spec.k_max = 24;
  const auto five = min_dilatation(spec);
  // Values recorded from the exhaustive enumeration.
  EXPECT_NEAR(four.lambda, 4.3902568845155328, 1e-12);
  EXPECT_EQ(four.instance, ObpInstance(std::vector<int>{3, 2, 4, 1}, {7, 3, 2, 5}));
  EXPECT_NEAR(five.lambda, 4.7912878474779914, 1e-12);
  EXPECT_EQ(five.instance, ObpInstance(std::vector<int>{3, 2, 5, 1, 4}, {8, 3, 3, 6, 4}));
  // (5 + sqrt 21) / 2
  EXPECT_NEAR(five.lambda, (5.0 + std::sqrt(21.0)) / 2.0, 1e-12);
}

TEST(MinDilatation, EmptyRangeThrows) {
  SearchSpec spec;
  spec.n = 3;
  spec.k_max = 12;
  try {
    min_dilatation(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptySearchSpace);
  }
}

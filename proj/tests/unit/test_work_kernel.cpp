#include <gtest/gtest.h>

#include "fluctwork/diagnostics.hpp"
#include "fluctwork/errors.hpp"
#include "fluctwork/work_kernel.hpp"

using namespace fluctwork;

TEST(WorkGrid, SortsAndMergesNearDuplicates) {
  std::vector<std::string> seen;
  auto old = set_warning_sink([&](const std::string& m) { seen.push_back(m); });
  WorkGrid g({1.0, -1.0, 1.0 + 1e-14, 0.0});
  set_warning_sink(old);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], -1.0);
  EXPECT_EQ(g.merged_count(), 1u);
  EXPECT_EQ(seen.size(), 1u);
  EXPECT_EQ(g.find(1.0 + 5e-13).value(), 2u);
  EXPECT_FALSE(g.find(0.5).has_value());
  EXPECT_EQ(g.negated()[0], -1.0);
  EXPECT_EQ(g.negated()[2], 1.0);
}

TEST(WorkGrid, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(WorkGrid(std::vector<double>{}), ArgumentError);
  EXPECT_THROW(WorkGrid({std::numeric_limits<double>::infinity()}), ArgumentError);
}

TEST(WorkKernel, SparseStorageAndRowSums) {
  const auto e = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  WorkKernel k(e, e, WorkGrid({-1.0, 0.0, 1.0}));
  k.set(0, 1, 0, 0.25);
  k.add(0, 1, 0, 0.25);
  k.set(0, 0, 1, 0.5);
  k.set(1, 1, 2, 1.0);
  EXPECT_EQ(k.nonzeros(), 3u);
  EXPECT_DOUBLE_EQ(k.at(0, 1, 0), 0.5);
  EXPECT_DOUBLE_EQ(k.at(1, 0, 0), 0.0);
  EXPECT_EQ(k.row_sums(), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(k.max_row_deviation(), 0.0);
  k.set(0, 0, 1, 0.0);
  EXPECT_EQ(k.nonzeros(), 2u);
  EXPECT_DOUBLE_EQ(k.max_row_deviation(), 0.5);
}

TEST(WorkKernel, RejectsBadEntries) {
  const auto e = EnergySpectrum::from_energies(std::vector<double>{0.0});
  WorkKernel k(e, e, WorkGrid({0.0}));
  EXPECT_THROW(k.set(1, 0, 0, 0.5), DimensionError);
  EXPECT_THROW(k.set(0, 0, 1, 0.5), DimensionError);
  EXPECT_THROW(k.set(0, 0, 0, -0.1), ArgumentError);
}

TEST(WorkKernel, Equality) {
  const auto e = EnergySpectrum::from_energies(std::vector<double>{0.0, 1.0});
  WorkKernel a(e, e, WorkGrid({0.0}));
  WorkKernel b(e, e, WorkGrid({0.0}));
  a.set(0, 0, 0, 1.0);
  EXPECT_FALSE(a == b);
  b.set(0, 0, 0, 1.0);
  EXPECT_TRUE(a == b);
}

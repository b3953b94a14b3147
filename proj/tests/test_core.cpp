#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "mlsh/core.hpp"
#include "mlsh/parallel.hpp"

using namespace mlsh;

TEST(LabelSet, SortsAndDeduplicates) {
    const LabelSet s{"b", "a", "b"};
    EXPECT_EQ(s.labels(), (std::vector<std::string>{"a", "b"}));
    EXPECT_TRUE(s.contains("a"));
    EXPECT_FALSE(s.contains("c"));
}

TEST(CommonLabel, SharedElement) { EXPECT_TRUE(commonLabel(LabelSet{"1", "2"}, LabelSet{"2", "3"})); }

TEST(CommonLabel, Disjoint) { EXPECT_FALSE(commonLabel(LabelSet{"1"}, LabelSet{"2"})); }

TEST(CommonLabel, SymmetricOnRandomSets) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(0, 9);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<std::string> a, b;
        for (int i = pick(rng) % 4 + 1; i > 0; --i) a.push_back(std::to_string(pick(rng)));
        for (int i = pick(rng) % 4 + 1; i > 0; --i) b.push_back(std::to_string(pick(rng)));
        const LabelSet la(a), lb(b);
        std::set<std::string> sa(a.begin(), a.end());
        bool expected = false;
        for (const auto& x : b) expected = expected || sa.count(x) > 0;
        EXPECT_EQ(commonLabel(la, lb), expected);
        EXPECT_EQ(commonLabel(la, lb), commonLabel(lb, la));
    }
}

TEST(LabeledDataset, RejectsBadRecords) {
    LabeledDataset d(2);
    const std::vector<double> ok{1.0, 2.0};
    EXPECT_THROW(d.add(ok, LabelSet{}), DataError);
    EXPECT_THROW(d.add(std::vector<double>{1.0}, LabelSet{"a"}), DataError);
    EXPECT_THROW(d.add(std::vector<double>{1.0, std::numeric_limits<double>::quiet_NaN()}, LabelSet{"a"}), DataError);
    EXPECT_THROW(d.add(std::vector<double>{std::numeric_limits<double>::infinity(), 0.0}, LabelSet{"a"}), DataError);
    EXPECT_TRUE(d.empty());
    d.add(ok, LabelSet{"a"});
    EXPECT_EQ(d.size(), 1u);
    EXPECT_THROW(LabeledDataset(0), ConfigError);
}

TEST(LabeledDataset, ShareLabelMatchesCommonLabel) {
    LabeledDataset d(2);
    const std::vector<double> x{1.0, 0.0};
    d.add(x, LabelSet{"a", "b"});
    d.add(x, LabelSet{"b"});
    d.add(x, LabelSet{"c"});
    d.add(x, LabelSet{"c", "a"});
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) EXPECT_EQ(d.shareLabel(i, j), commonLabel(d.labels(i), d.labels(j)));
    EXPECT_EQ(d.relevantTo(LabelSet{"a"}), (std::vector<bool>{true, false, false, true}));
    EXPECT_EQ(d.relevantTo(LabelSet{"z"}), (std::vector<bool>{false, false, false, false}));
}

TEST(RequireNonZero, FlagsZeroRecord) {
    LabeledDataset d(2);
    d.add(std::vector<double>{1.0, 0.0}, LabelSet{"a"});
    EXPECT_NO_THROW(requireNonZeroRecords(d));
    d.add(std::vector<double>{0.0, 0.0}, LabelSet{"a"});
    EXPECT_THROW(requireNonZeroRecords(d), DataError);
}

TEST(HyperplaneArrangement, ValidatesShapeAndNorms) {
    EXPECT_THROW(HyperplaneArrangement(DenseMatrix(0, 3)), ConfigError);
    EXPECT_THROW(HyperplaneArrangement(DenseMatrix(1, 1, 1.0)), ConfigError);
    DenseMatrix m(1, 2);
    m(0, 0) = 2.0;
    EXPECT_THROW(HyperplaneArrangement{m}, DataError);
    m(0, 0) = 1.0;
    EXPECT_NO_THROW(HyperplaneArrangement{m});
}

TEST(BitCode, SetGetAndPadding) {
    BitCode c(70);
    EXPECT_EQ(c.words().size(), 2u);
    c.set(0, true);
    c.set(69, true);
    EXPECT_TRUE(c.get(0));
    EXPECT_TRUE(c.get(69));
    EXPECT_FALSE(c.get(68));
    c.set(0, false);
    EXPECT_FALSE(c.get(0));
    EXPECT_EQ(c.toString().size(), 70u);
    EXPECT_EQ(c.toString().back(), '1');

    EXPECT_THROW(BitCode(70, {0}), DataError);
    EXPECT_THROW(BitCode(70, {0, std::uint64_t{1} << 6}), DataError);
    EXPECT_NO_THROW(BitCode(70, {0, std::uint64_t{1} << 5}));
    EXPECT_NO_THROW(BitCode(64, {~std::uint64_t{0}}));
}

TEST(Seeds, DeriveIsDeterministicAndSeparatesStreams) {
    const RngSeed master{42};
    EXPECT_EQ(deriveSeed(master, Stream::Walk, {1, 2}), deriveSeed(master, Stream::Walk, {1, 2}));
    std::set<std::uint64_t> seen;
    for (auto s : {Stream::Init, Stream::Pairs, Stream::Walk, Stream::Synth}) {
        seen.insert(deriveSeed(master, s).value);
        seen.insert(deriveSeed(master, s, {0}).value);
        seen.insert(deriveSeed(master, s, {1}).value);
        seen.insert(deriveSeed(master, s, {0, 1}).value);
        seen.insert(deriveSeed(master, s, {1, 0}).value);
    }
    EXPECT_EQ(seen.size(), 20u);
    EXPECT_NE(deriveSeed(RngSeed{1}, Stream::Init, {0}), deriveSeed(RngSeed{2}, Stream::Init, {0}));
}

TEST(Seeds, EngineReproducible) {
    Engine a = makeEngine(RngSeed{9}), b = makeEngine(RngSeed{9});
    std::vector<double> x(5), y(5);
    fillStandardNormal(a, x);
    fillStandardNormal(b, y);
    EXPECT_EQ(x, y);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LT(uniformIndex(a, 7), 7u);
        const double u = uniformUnit(a);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Parallel, VisitsEveryIndexOnce) {
    for (unsigned threads : {1u, 2u, 8u}) {
        std::vector<int> hits(1000, 0);
        parallelFor(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits) EXPECT_EQ(h, 1);
    }
}

TEST(Parallel, PropagatesExceptions) {
    EXPECT_THROW(parallelFor(100, 4,
                             [](std::size_t i) {
                                 if (i == 37) throw DataError("boom");
                             }),
                 DataError);
}

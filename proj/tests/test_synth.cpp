#include <gtest/gtest.h>

#include <cmath>

#include "mlsh/synth.hpp"

using namespace mlsh;

TEST(GaussianSign, LabelsFollowFirstComponent) {
    const auto d = generateGaussianSignDataset(300, RngSeed{1});
    ASSERT_EQ(d.size(), 300u);
    ASSERT_EQ(d.dim(), 3u);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(d.labels(i), LabelSet{d.vector(i)[0] > 0 ? "pos" : "neg"});
    }
}

TEST(GaussianSign, ComponentMeansNearZero) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const std::size_t n = 2000;
        const auto d = generateGaussianSignDataset(n, RngSeed{seed});
        for (std::size_t c = 0; c < 3; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += d.vector(i)[c];
            EXPECT_LT(std::abs(s / n), 4.0 / std::sqrt(static_cast<double>(n)));
        }
    }
}

TEST(GaussianSign, Reproducible) {
    const auto a = generateGaussianSignDataset(50, RngSeed{7});
    const auto b = generateGaussianSignDataset(50, RngSeed{7});
    const auto c = generateGaussianSignDataset(50, RngSeed{8});
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
    EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
}

TEST(Clusters, LayoutAndSpread) {
    const auto centers = randomCenters(3, 4, 10.0, RngSeed{1});
    const std::vector<LabelSet> labels{LabelSet{"a"}, LabelSet{"a", "b"}, LabelSet{"c"}};
    const auto d = generateClusters(centers, 0.1, 200, labels, RngSeed{2});
    ASSERT_EQ(d.size(), 600u);
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<double> mean(4, 0.0);
        for (std::size_t i = 0; i < 200; ++i) {
            EXPECT_EQ(d.labels(k * 200 + i), labels[k]);
            for (std::size_t j = 0; j < 4; ++j) mean[j] += d.vector(k * 200 + i)[j] / 200.0;
        }
        for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(mean[j], centers(k, j), 4.0 * 0.1 / std::sqrt(200.0));
    }
    const auto again = generateClusters(centers, 0.1, 200, labels, RngSeed{2});
    EXPECT_TRUE(std::equal(d.values().begin(), d.values().end(), again.values().begin()));
}

TEST(Clusters, Errors) {
    const auto centers = randomCenters(2, 2, 1.0, RngSeed{1});
    EXPECT_THROW(generateClusters(centers, 0.0, 5, {LabelSet{"a"}, LabelSet{"b"}}, RngSeed{1}), ConfigError);
    EXPECT_THROW(generateClusters(centers, 1.0, 5, {LabelSet{"a"}}, RngSeed{1}), ConfigError);
}

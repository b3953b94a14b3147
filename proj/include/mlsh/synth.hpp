#pragma once

#include <cstddef>
#include <vector>

#include "mlsh/core.hpp"

namespace mlsh {

/// n draws from the 3-D standard normal, labeled "pos" when the first
/// component is > 0 and "neg" otherwise. Components are drawn record-major.
LabeledDataset generateGaussianSignDataset(std::size_t n, RngSeed seed);

/// Isotropic Gaussian blobs: `perCluster` points around each center with
/// per-component stddev `spread`, the i-th blob labeled labels[i]. Records
/// are emitted blob by blob. Throws ConfigError on empty or mismatched
/// inputs or a non-positive spread.
LabeledDataset generateClusters(const DenseMatrix& centers, double spread, std::size_t perCluster,
                                const std::vector<LabelSet>& labels, RngSeed seed);

/// `count` centers in R^dim with i.i.d. N(0, scale^2) components.
DenseMatrix randomCenters(std::size_t count, std::size_t dim, double scale, RngSeed seed);

}  // namespace mlsh

#pragma once

// Noise reduction applied before training and search: per-component
// standardization with training statistics, then projection onto the
// leading principal components that reach a cumulative contribution
// threshold (0.8 by default).

#include <cstddef>
#include <span>
#include <vector>

#include "mlsh/core.hpp"

namespace mlsh {

struct PreprocessModel {
    std::vector<double> mean;      // length N
    std::vector<double> stddev;    // length N, strictly positive
    DenseMatrix projection;        // K x N, orthonormal rows
    std::vector<double> eigenvalues;  // all N covariance eigenvalues, descending

    std::size_t inputDim() const { return mean.size(); }
    std::size_t outputDim() const { return projection.rows(); }

    /// Throws DataError unless the fields are mutually consistent: matching
    /// dimensions, positive stddev, rows orthonormal within 1e-8, K <= N.
    void validate() const;

    friend bool operator==(const PreprocessModel&, const PreprocessModel&) = default;
};

inline constexpr double kDefaultContributionThreshold = 0.8;

/// Fits standardization and PCA on `train` (at least two records).
///
/// Sample statistics use the 1/(n-1) normalization. Constant components get
/// stddev 1 so standardization leaves them alone. Eigenvalues are sorted
/// descending (stable with respect to the solver's order) and each
/// eigenvector's largest-magnitude component is made positive. K is the
/// smallest count whose cumulative eigenvalue fraction reaches `threshold`.
PreprocessModel fitPreprocess(const LabeledDataset& train, double threshold = kDefaultContributionThreshold);

/// projection * ((x - mean) / stddev). Throws DataError on dimension mismatch.
std::vector<double> applyPreprocess(const PreprocessModel& model, std::span<const double> x);

/// Applies the model to every record, keeping labels.
LabeledDataset applyPreprocess(const PreprocessModel& model, const LabeledDataset& data);

/// Fraction of total variance captured by the first `k` eigenvalues.
double cumulativeContribution(const PreprocessModel& model, std::size_t k);

}  // namespace mlsh

#include "mlsh/preprocess.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mlsh {

namespace {

constexpr double kOrthonormalTolerance = 1e-8;
constexpr double kSymmetryTolerance = 1e-10;

}  // namespace

void PreprocessModel::validate() const {
    const std::size_t n = mean.size();
    if (n == 0) throw DataError("preprocess model has zero input dimension");
    if (stddev.size() != n) throw DataError("preprocess model stddev length does not match mean");
    if (projection.cols() != n) throw DataError("preprocess projection width does not match input dimension");
    if (projection.rows() == 0 || projection.rows() > n) throw DataError("preprocess output dimension out of range");
    for (double s : stddev) {
        if (!(s > 0.0) || !std::isfinite(s)) throw DataError("preprocess model has a non-positive stddev");
    }
    for (std::size_t i = 0; i < projection.rows(); ++i) {
        for (std::size_t j = i; j < projection.rows(); ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(dot(projection.row(i), projection.row(j)) - expected) > kOrthonormalTolerance) {
                throw DataError("preprocess projection rows are not orthonormal");
            }
        }
    }
}

PreprocessModel fitPreprocess(const LabeledDataset& train, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw ConfigError("contribution threshold must lie in (0, 1]");
    const std::size_t count = train.size();
    const std::size_t dim = train.dim();
    if (count < 2) throw DataError("preprocessing needs at least two training records");

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> raw(
        train.values().data(), static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));

    PreprocessModel model;
    model.mean.resize(dim);
    model.stddev.resize(dim);
    Eigen::MatrixXd z = raw;
    for (std::size_t c = 0; c < dim; ++c) {
        const auto col = static_cast<Eigen::Index>(c);
        const double mu = raw.col(col).mean();
        const double var = (raw.col(col).array() - mu).square().sum() / static_cast<double>(count - 1);
        double sd = std::sqrt(var);
        // A constant column can leave rounding residue in var.
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mu)))) sd = 1.0;
        model.mean[c] = mu;
        model.stddev[c] = sd;
        z.col(col) = (raw.col(col).array() - mu) / sd;
    }

    const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(count - 1);
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
        throw DataError("training covariance is numerically non-symmetric");
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) throw DataError("eigen-decomposition of the training covariance failed");
    const Eigen::VectorXd& values = solver.eigenvalues();
    const Eigen::MatrixXd& vectors = solver.eigenvectors();

    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values(static_cast<Eigen::Index>(a)) > values(static_cast<Eigen::Index>(b));
    });

    model.eigenvalues.resize(dim);
    double total = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        model.eigenvalues[k] = std::max(0.0, values(static_cast<Eigen::Index>(order[k])));
        total += model.eigenvalues[k];
    }
    if (!(total > 0.0)) throw DataError("training data has no variance");

    std::size_t keep = dim;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        cumulative += model.eigenvalues[k];
        if (cumulative >= threshold * total) {
            keep = k + 1;
            break;
        }
    }

    model.projection = DenseMatrix(keep, dim);
    for (std::size_t k = 0; k < keep; ++k) {
        const auto col = static_cast<Eigen::Index>(order[k]);
        Eigen::Index pivot = 0;
        vectors.col(col).cwiseAbs().maxCoeff(&pivot);
        const double sign = vectors(pivot, col) < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < dim; ++c) {
            model.projection(k, c) = sign * vectors(static_cast<Eigen::Index>(c), col);
        }
    }
    return model;
}

std::vector<double> applyPreprocess(const PreprocessModel& model, std::span<const double> x) {
    const std::size_t dim = model.inputDim();
    if (x.size() != dim) {
        throw DataError("cannot preprocess a vector of dimension " + std::to_string(x.size()) + ", model expects " +
                        std::to_string(dim));
    }
    std::vector<double> standardized(dim);
    for (std::size_t c = 0; c < dim; ++c) standardized[c] = (x[c] - model.mean[c]) / model.stddev[c];
    std::vector<double> out(model.outputDim());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = dot(model.projection.row(k), standardized);
    return out;
}

LabeledDataset applyPreprocess(const PreprocessModel& model, const LabeledDataset& data) {
    LabeledDataset out(model.outputDim());
    for (std::size_t i = 0; i < data.size(); ++i) out.add(applyPreprocess(model, data.vector(i)), data.labels(i));
    return out;
}

double cumulativeContribution(const PreprocessModel& model, std::size_t k) {
    const double total = std::accumulate(model.eigenvalues.begin(), model.eigenvalues.end(), 0.0);
    const std::size_t upto = std::min(k, model.eigenvalues.size());
    const double part = std::accumulate(model.eigenvalues.begin(),
                                        model.eigenvalues.begin() + static_cast<std::ptrdiff_t>(upto), 0.0);
    return total > 0.0 ? part / total : 0.0;
}

}  // namespace mlsh

#include "mlsh/synth.hpp"

#include <cmath>

namespace mlsh {

LabeledDataset generateGaussianSignDataset(std::size_t n, RngSeed seed) {
    if (n < 2) throw ConfigError("synthetic dataset needs at least two records");
    Engine engine = makeEngine(deriveSeed(seed, Stream::Synth, {0}));
    LabeledDataset data(3);
    std::vector<double> x(3);
    for (std::size_t i = 0; i < n; ++i) {
        do {
            fillStandardNormal(engine, x);
        } while (squaredNorm(x) == 0.0);
        data.add(x, LabelSet{x[0] > 0.0 ? "pos" : "neg"});
    }
    return data;
}

LabeledDataset generateClusters(const DenseMatrix& centers, double spread, std::size_t perCluster,
                                const std::vector<LabelSet>& labels, RngSeed seed) {
    if (centers.rows() == 0 || centers.cols() == 0) throw ConfigError("at least one cluster center is required");
    if (labels.size() != centers.rows()) throw ConfigError("one label set per cluster is required");
    if (!(spread > 0.0) || !std::isfinite(spread)) throw ConfigError("cluster spread must be positive");
    Engine engine = makeEngine(deriveSeed(seed, Stream::Synth, {1}));
    LabeledDataset data(centers.cols());
    std::vector<double> x(centers.cols());
    for (std::size_t c = 0; c < centers.rows(); ++c) {
        const auto center = centers.row(c);
        for (std::size_t i = 0; i < perCluster; ++i) {
            do {
                fillStandardNormal(engine, x);
                for (std::size_t d = 0; d < x.size(); ++d) x[d] = center[d] + spread * x[d];
            } while (squaredNorm(x) == 0.0);
            data.add(x, labels[c]);
        }
    }
    return data;
}

DenseMatrix randomCenters(std::size_t count, std::size_t dim, double scale, RngSeed seed) {
    if (count == 0 || dim == 0) throw ConfigError("center count and dimension must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("center scale must be positive");
    Engine engine = makeEngine(deriveSeed(seed, Stream::Synth, {2}));
    DenseMatrix centers(count, dim);
    for (std::size_t c = 0; c < count; ++c) {
        fillStandardNormal(engine, centers.row(c));
        for (double& v : centers.row(c)) v *= scale;
    }
    return centers;
}

}  // namespace mlsh

#pragma once

// Supervised hyperplane learning by Metropolis-Hastings.
//
// Each hyperplane normal is a particle on S^(N-1) that random-walks with a
// normalized Gaussian proposal and the target density U = exp(x / T). A batch
// is `stepsPerBatch` steps against one sampled pair set; pairs are resampled
// between batches. Particles never interact, so every hyperplane walks on its
// own RNG stream derived from (seed, hyperplane, batch) and the result does
// not depend on the worker count.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mlsh/core.hpp"
#include "mlsh/objective.hpp"
#include "mlsh/pairs.hpp"

namespace mlsh {

struct TrainConfig {
    std::size_t bits = 1024;
    std::size_t batches = 10;
    std::size_t stepsPerBatch = 100;
    double proposalStddev = 0.01;
    ObjectiveConfig objective;
    /// Methods and counts; the seed field is ignored, per-batch seeds are
    /// derived from `seed`.
    SamplingConfig sampling;
    RngSeed seed{};
    bool sharedPairsAcrossHyperplanes = true;
    bool recordTrajectory = false;
    /// Also keep the highest-logU position each particle visited.
    bool trackBest = false;

    /// Throws ConfigError on out-of-range values.
    void validate() const;
};

struct TrainReport {
    DenseMatrix acceptanceRate;  // bits x batches, each in [0, 1]
    DenseMatrix batchEndLogU;    // bits x batches, logU at the end of each batch
    std::vector<double> finalLogU;  // per hyperplane, against the last batch's pairs
    /// Per hyperplane, logU after every step (batches * stepsPerBatch values);
    /// empty unless recordTrajectory.
    std::vector<std::vector<double>> trajectoryLogU;
    /// Best-visited positions and their logU; set only with trackBest.
    std::optional<HyperplaneArrangement> bestArrangement;
    std::vector<double> bestLogU;
};

struct TrainResult {
    HyperplaneArrangement arrangement;
    TrainReport report;
};

/// normalize(current + g) with g ~ N(0, stddev^2 I), redrawing g in the
/// measure-zero case where the sum is (nearly) the origin.
void proposeMove(std::span<const double> current, double stddev, Engine& engine, std::span<double> out);

/// Metropolis rule in log domain: always accept when deltaLogU >= 0 (no
/// random number is consumed), otherwise accept with probability exp(deltaLogU).
bool metropolisAccept(double deltaLogU, Engine& engine);

struct MhStepResult {
    bool accepted = false;
    double logU = 0.0;  // logU of the position after the step
};

using LogTarget = std::function<double(std::span<const double>)>;

/// One Metropolis-Hastings step updating `position` in place. The projected
/// Gaussian proposal is treated as symmetric.
MhStepResult mhStep(std::span<double> position, double currentLogU, double stddev, const LogTarget& logTarget,
                    Engine& engine);

/// Convenience form against a prepared pair set.
std::pair<std::vector<double>, bool> mhStep(std::span<const double> current, const PreparedPairs& pairs,
                                            const ObjectiveConfig& cfg, double stddev, Engine& engine);

/// Trains cfg.bits hyperplanes on `data` (dimension >= 2, no zero records).
/// Initial normals are randomArrangement(dim, bits, cfg.seed). `threads` = 0
/// uses all hardware threads; output is identical for every value.
TrainResult train(const LabeledDataset& data, const TrainConfig& cfg, unsigned threads = 0);

}  // namespace mlsh

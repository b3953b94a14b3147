#include "mlsh/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "mlsh/hashing.hpp"
#include "mlsh/parallel.hpp"

namespace mlsh {

void TrainConfig::validate() const {
    if (bits < 1) throw ConfigError("bits must be at least 1");
    if (batches < 1) throw ConfigError("batches must be at least 1");
    if (stepsPerBatch < 1) throw ConfigError("steps per batch must be at least 1");
    if (!(proposalStddev > 0.0) || !std::isfinite(proposalStddev)) {
        throw ConfigError("proposal stddev must be positive");
    }
    objective.validate();
}

void proposeMove(std::span<const double> current, double stddev, Engine& engine, std::span<double> out) {
    double n = 0.0;
    do {
        fillStandardNormal(engine, out);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = current[i] + stddev * out[i];
        n = norm(out);
    } while (n < 1e-12);
    for (double& v : out) v /= n;
}

bool metropolisAccept(double deltaLogU, Engine& engine) {
    if (deltaLogU >= 0.0) return true;
    return uniformUnit(engine) < std::exp(deltaLogU);
}

MhStepResult mhStep(std::span<double> position, double currentLogU, double stddev, const LogTarget& logTarget,
                    Engine& engine) {
    std::vector<double> proposal(position.size());
    proposeMove(position, stddev, engine, proposal);
    const double proposedLogU = logTarget(proposal);
    if (metropolisAccept(proposedLogU - currentLogU, engine)) {
        std::copy(proposal.begin(), proposal.end(), position.begin());
        return {true, proposedLogU};
    }
    return {false, currentLogU};
}

std::pair<std::vector<double>, bool> mhStep(std::span<const double> current, const PreparedPairs& pairs,
                                            const ObjectiveConfig& cfg, double stddev, Engine& engine) {
    std::vector<double> position(current.begin(), current.end());
    const auto target = [&](std::span<const double> n) { return pairs.evaluate(n, cfg).logU; };
    const auto result = mhStep(position, target(position), stddev, target, engine);
    return {std::move(position), result.accepted};
}

TrainResult train(const LabeledDataset& data, const TrainConfig& cfg, unsigned threads) {
    cfg.validate();
    if (data.empty()) throw DataError("training data is empty");
    if (data.dim() < 2) throw ConfigError("training data needs dimension at least 2");
    requireNonZeroRecords(data);

    const std::size_t bits = cfg.bits;
    const std::size_t dim = data.dim();
    DenseMatrix positions = randomArrangement(dim, bits, cfg.seed).normals();

    TrainReport report;
    report.acceptanceRate = DenseMatrix(bits, cfg.batches);
    report.batchEndLogU = DenseMatrix(bits, cfg.batches);
    report.finalLogU.assign(bits, 0.0);
    if (cfg.recordTrajectory) {
        report.trajectoryLogU.assign(bits, {});
        for (auto& t : report.trajectoryLogU) t.reserve(cfg.batches * cfg.stepsPerBatch);
    }
    DenseMatrix best;
    if (cfg.trackBest) {
        best = positions;
        report.bestLogU.assign(bits, -std::numeric_limits<double>::infinity());
    }

    for (std::size_t batch = 0; batch < cfg.batches; ++batch) {
        std::unique_ptr<PreparedPairs> shared;
        if (cfg.sharedPairsAcrossHyperplanes) {
            SamplingConfig sampling = cfg.sampling;
            sampling.seed = deriveSeed(cfg.seed, Stream::Pairs, {batch});
            shared = std::make_unique<PreparedPairs>(data, samplePairSet(data, sampling, threads));
        }

        parallelFor(bits, threads, [&](std::size_t h) {
            std::unique_ptr<PreparedPairs> own;
            if (!shared) {
                SamplingConfig sampling = cfg.sampling;
                sampling.seed = deriveSeed(cfg.seed, Stream::Pairs, {batch, h});
                own = std::make_unique<PreparedPairs>(data, samplePairSet(data, sampling, 1));
            }
            const PreparedPairs& pairs = shared ? *shared : *own;
            const auto target = [&](std::span<const double> n) { return pairs.evaluate(n, cfg.objective).logU; };

            Engine engine = makeEngine(deriveSeed(cfg.seed, Stream::Walk, {h, batch}));
            std::span<double> position = positions.row(h);
            double logU = target(position);
            if (cfg.trackBest && logU > report.bestLogU[h]) {
                report.bestLogU[h] = logU;
                std::copy(position.begin(), position.end(), best.row(h).begin());
            }

            std::size_t accepted = 0;
            for (std::size_t step = 0; step < cfg.stepsPerBatch; ++step) {
                const MhStepResult r = mhStep(position, logU, cfg.proposalStddev, target, engine);
                logU = r.logU;
                accepted += r.accepted ? 1 : 0;
                if (cfg.recordTrajectory) report.trajectoryLogU[h].push_back(logU);
                if (cfg.trackBest && r.accepted && logU > report.bestLogU[h]) {
                    report.bestLogU[h] = logU;
                    std::copy(position.begin(), position.end(), best.row(h).begin());
                }
            }
            report.acceptanceRate(h, batch) = static_cast<double>(accepted) / static_cast<double>(cfg.stepsPerBatch);
            report.batchEndLogU(h, batch) = logU;
            report.finalLogU[h] = logU;
        });
    }

    if (cfg.trackBest) report.bestArrangement.emplace(std::move(best));
    return TrainResult{HyperplaneArrangement(std::move(positions)), std::move(report)};
}

}  // namespace mlsh

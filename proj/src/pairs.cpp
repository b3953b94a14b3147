#include "mlsh/pairs.hpp"

#include <algorithm>
#include <cctype>

#include "mlsh/parallel.hpp"

namespace mlsh {

namespace {

// Index of the extreme squared distance from `from` over records accepted by
// `member`, ties to the lowest index.
template <class Member, class Better>
std::optional<std::size_t> extremeBy(const LabeledDataset& data, std::size_t from, Member member, Better better) {
    std::optional<std::size_t> best;
    double bestDist = 0.0;
    const auto origin = data.vector(from);
    for (std::size_t c = 0; c < data.size(); ++c) {
        if (!member(c)) continue;
        const double d = squaredDistance(origin, data.vector(c));
        if (!best || better(d, bestDist)) {
            best = c;
            bestDist = d;
        }
    }
    return best;
}

const auto kLess = [](double a, double b) { return a < b; };
const auto kGreater = [](double a, double b) { return a > b; };

// Uniform member of {c : member(c)}, or empty.
template <class Member>
std::optional<std::size_t> uniformMember(const LabeledDataset& data, Member member, Engine& engine) {
    std::size_t count = 0;
    for (std::size_t c = 0; c < data.size(); ++c) count += member(c) ? 1 : 0;
    if (count == 0) return std::nullopt;
    std::size_t pick = uniformIndex(engine, count);
    for (std::size_t c = 0; c < data.size(); ++c) {
        if (!member(c)) continue;
        if (pick == 0) return c;
        --pick;
    }
    return std::nullopt;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

}  // namespace

std::string_view methodName(PositiveMethod method) {
    switch (method) {
        case PositiveMethod::Randomhit: return "randomhit";
        case PositiveMethod::Nearhit: return "nearhit";
        case PositiveMethod::Farhit: return "farhit";
    }
    return "?";
}

std::string_view methodName(NegativeMethod method) {
    switch (method) {
        case NegativeMethod::Randommiss: return "randommiss";
        case NegativeMethod::Nearmiss: return "nearmiss";
        case NegativeMethod::Boundarymiss: return "boundarymiss";
    }
    return "?";
}

const std::vector<SamplingPreset>& samplingPresets() {
    static const std::vector<SamplingPreset> presets = {
        {"randomhit-randommiss", PositiveMethod::Randomhit, NegativeMethod::Randommiss},
        {"randomhit-nearmiss", PositiveMethod::Randomhit, NegativeMethod::Nearmiss},
        {"nearhit-nearmiss", PositiveMethod::Nearhit, NegativeMethod::Nearmiss},
        {"farhit-nearmiss", PositiveMethod::Farhit, NegativeMethod::Nearmiss},
        {"randomhit-boundarymiss", PositiveMethod::Randomhit, NegativeMethod::Boundarymiss},
    };
    return presets;
}

SamplingPreset parseSamplingPreset(std::string_view name) {
    const std::string key = lower(name);
    for (const auto& preset : samplingPresets()) {
        if (preset.name == key) return preset;
    }
    std::string known;
    for (const auto& preset : samplingPresets()) known += (known.empty() ? "" : ", ") + std::string(preset.name);
    throw ConfigError("unknown sampling preset '" + std::string(name) + "' (expected one of: " + known + ")");
}

std::optional<std::size_t> nearestHit(const LabeledDataset& data, std::size_t anchor) {
    return extremeBy(
        data, anchor, [&](std::size_t c) { return c != anchor && data.shareLabel(anchor, c); }, kLess);
}

std::optional<std::size_t> farthestHit(const LabeledDataset& data, std::size_t anchor) {
    return extremeBy(
        data, anchor, [&](std::size_t c) { return c != anchor && data.shareLabel(anchor, c); }, kGreater);
}

std::optional<std::size_t> nearestMiss(const LabeledDataset& data, std::size_t anchor) {
    return extremeBy(
        data, anchor, [&](std::size_t c) { return !data.shareLabel(anchor, c); }, kLess);
}

std::optional<Pair> boundaryMiss(const LabeledDataset& data, std::size_t anchor) {
    const auto b = nearestMiss(data, anchor);
    if (!b) return std::nullopt;
    const auto aPrime = extremeBy(
        data, *b, [&](std::size_t c) { return data.shareLabel(anchor, c) && !data.shareLabel(*b, c); }, kLess);
    return Pair{aPrime.value_or(anchor), *b, PairKind::Negative};
}

std::optional<Pair> positiveFrom(const LabeledDataset& data, std::size_t anchor, PositiveMethod method,
                                 Engine& engine) {
    std::optional<std::size_t> b;
    switch (method) {
        case PositiveMethod::Randomhit:
            b = uniformMember(
                data, [&](std::size_t c) { return c != anchor && data.shareLabel(anchor, c); }, engine);
            break;
        case PositiveMethod::Nearhit: b = nearestHit(data, anchor); break;
        case PositiveMethod::Farhit: b = farthestHit(data, anchor); break;
    }
    if (!b) return std::nullopt;
    return Pair{anchor, *b, PairKind::Positive};
}

std::optional<Pair> negativeFrom(const LabeledDataset& data, std::size_t anchor, NegativeMethod method,
                                 Engine& engine) {
    switch (method) {
        case NegativeMethod::Randommiss: {
            const auto b = uniformMember(
                data, [&](std::size_t c) { return !data.shareLabel(anchor, c); }, engine);
            if (!b) return std::nullopt;
            return Pair{anchor, *b, PairKind::Negative};
        }
        case NegativeMethod::Nearmiss: {
            const auto b = nearestMiss(data, anchor);
            if (!b) return std::nullopt;
            return Pair{anchor, *b, PairKind::Negative};
        }
        case NegativeMethod::Boundarymiss: return boundaryMiss(data, anchor);
    }
    return std::nullopt;
}

Pair samplePositive(const LabeledDataset& data, PositiveMethod method, Engine& engine) {
    if (data.size() >= 2) {
        for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
            const std::size_t anchor = uniformIndex(engine, data.size());
            if (auto pair = positiveFrom(data, anchor, method, engine)) return *pair;
        }
    }
    throw DataError("no positive pair exists");
}

Pair sampleNegative(const LabeledDataset& data, NegativeMethod method, Engine& engine) {
    if (data.size() >= 2) {
        for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
            const std::size_t anchor = uniformIndex(engine, data.size());
            if (auto pair = negativeFrom(data, anchor, method, engine)) return *pair;
        }
    }
    throw DataError("no negative pair exists");
}

PairSet samplePairSet(const LabeledDataset& data, const SamplingConfig& cfg, unsigned threads) {
    PairSet out;
    out.positives.resize(cfg.positiveCount);
    out.negatives.resize(cfg.negativeCount);
    const std::size_t total = cfg.positiveCount + cfg.negativeCount;
    parallelFor(total, threads, [&](std::size_t j) {
        if (j < cfg.positiveCount) {
            Engine engine = makeEngine(deriveSeed(cfg.seed, Stream::Pairs, {0, j}));
            out.positives[j] = samplePositive(data, cfg.positiveMethod, engine);
        } else {
            const std::size_t k = j - cfg.positiveCount;
            Engine engine = makeEngine(deriveSeed(cfg.seed, Stream::Pairs, {1, k}));
            out.negatives[k] = sampleNegative(data, cfg.negativeMethod, engine);
        }
    });
    return out;
}

}  // namespace mlsh

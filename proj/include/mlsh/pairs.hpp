#pragma once

// Positive/negative training-pair sampling.
//
// Every strategy first draws an anchor record a uniformly. L_a is the set of
// records sharing a label with a (a included), L_a^c its complement.
//   Randomhit   (a, b)  b uniform over L_a \ {a}
//   Nearhit     (a, b)  b = argmin_{L_a \ {a}} dist(a, .)
//   Farhit      (a, b)  b = argmax_{L_a \ {a}} dist(a, .)
//   Randommiss  (a, b)  b uniform over L_a^c
//   Nearmiss    (a, b)  b = argmin_{L_a^c} dist(a, .)
//   Boundarymiss (a', b) with b from Nearmiss and a' = argmin_{L_a ∩ L_b^c} dist(b, .)
// dist is L2, all ties go to the lowest record index. When an anchor has no
// partner it is redrawn, at most kMaxRedraws times.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlsh/core.hpp"

namespace mlsh {

enum class PositiveMethod { Randomhit, Nearhit, Farhit };
enum class NegativeMethod { Randommiss, Nearmiss, Boundarymiss };

inline constexpr int kMaxRedraws = 100;

struct SamplingConfig {
    PositiveMethod positiveMethod = PositiveMethod::Randomhit;
    NegativeMethod negativeMethod = NegativeMethod::Randommiss;
    std::size_t positiveCount = 1000;
    std::size_t negativeCount = 1000;
    RngSeed seed{};
};

std::string_view methodName(PositiveMethod method);
std::string_view methodName(NegativeMethod method);

/// A named positive/negative combination, e.g. "randomhit-nearmiss".
struct SamplingPreset {
    std::string_view name;
    PositiveMethod positive;
    NegativeMethod negative;
};

/// The combinations exposed on the command line.
const std::vector<SamplingPreset>& samplingPresets();

/// Looks up a preset by name (case-insensitive). Throws ConfigError.
SamplingPreset parseSamplingPreset(std::string_view name);

// Anchored primitives: deterministic given the anchor, empty when the
// candidate set is empty.
std::optional<std::size_t> nearestHit(const LabeledDataset& data, std::size_t anchor);
std::optional<std::size_t> farthestHit(const LabeledDataset& data, std::size_t anchor);
std::optional<std::size_t> nearestMiss(const LabeledDataset& data, std::size_t anchor);

/// (a', b) for anchor a. If L_a ∩ L_b^c were empty this falls back to the
/// Nearmiss pair (a, b); since a itself is always a member, the fallback
/// only guards against inconsistent label data.
std::optional<Pair> boundaryMiss(const LabeledDataset& data, std::size_t anchor);

/// Pair for a fixed anchor; `engine` is used only by the random methods.
std::optional<Pair> positiveFrom(const LabeledDataset& data, std::size_t anchor, PositiveMethod method,
                                 Engine& engine);
std::optional<Pair> negativeFrom(const LabeledDataset& data, std::size_t anchor, NegativeMethod method,
                                 Engine& engine);

/// Draws anchors until one yields a pair. Throws DataError("no positive pair
/// exists" / "no negative pair exists") after kMaxRedraws redraws.
Pair samplePositive(const LabeledDataset& data, PositiveMethod method, Engine& engine);
Pair sampleNegative(const LabeledDataset& data, NegativeMethod method, Engine& engine);

/// Samples positiveCount positives and negativeCount negatives with
/// replacement. Pair j of each kind uses its own stream derived from
/// cfg.seed, so the result is identical for any `threads`.
PairSet samplePairSet(const LabeledDataset& data, const SamplingConfig& cfg, unsigned threads = 1);

}  // namespace mlsh

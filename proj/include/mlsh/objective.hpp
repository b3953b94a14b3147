#pragma once

// Evaluation functions scoring one hyperplane normal against a pair set.
//
// With PP+ the positive pairs whose two vectors fall strictly on the same
// side of the hyperplane and NP- the negative pairs strictly on opposite
// sides, and c1, c2 the cosines between the normal and the pair vectors:
//   COUNT         x = #PP+ + #NP-
//   RATIO         x = #PP+/#PP + #NP-/#NP
//   COSINE        x = sum_PP |c1 + c2| + sum_NP |c1 - c2|
//   COSINE_RATIO  x = mean_PP |c1 + c2| + mean_NP |c1 - c2|
// The sampler targets U = exp(x / T) and only ever sees logU = x / T.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mlsh/core.hpp"

namespace mlsh {

enum class ObjectiveKind { Count, Ratio, Cosine, CosineRatio };

std::string_view objectiveName(ObjectiveKind kind);

/// Accepts "count", "ratio", "cosine", "cosine_ratio" (case-insensitive,
/// '-' allowed for '_'). Throws ConfigError.
ObjectiveKind parseObjectiveKind(std::string_view name);

struct ObjectiveConfig {
    ObjectiveKind kind = ObjectiveKind::Count;
    double temperature = 1.0;

    /// Throws ConfigError unless temperature is finite and positive.
    void validate() const;
};

struct ObjectiveValue {
    double x = 0.0;
    double logU = 0.0;
};

enum class PairSide { SameSide, Opposite, Neither };

/// Classification from the two dot products: SameSide iff their product is
/// strictly positive, Opposite iff strictly negative, Neither when either is 0.
PairSide classifyDots(double first, double second);

PairSide classifyPair(std::span<const double> normal, const Pair& pair, const LabeledDataset& data);

/// Pair vectors copied into contiguous storage with their norms, so the
/// objective can be evaluated many times per batch without touching the
/// dataset.
class PreparedPairs {
public:
    /// Throws DataError on dimension mismatch or if any pair vector is zero.
    PreparedPairs(const LabeledDataset& data, const PairSet& pairs);

    std::size_t dim() const { return dim_; }
    std::size_t positiveCount() const { return positives_.size() / (2 * dim_); }
    std::size_t negativeCount() const { return negatives_.size() / (2 * dim_); }

    /// Throws DataError("undefined ratio") for RATIO / COSINE_RATIO when
    /// either side is empty, and DataError on normal dimension mismatch.
    ObjectiveValue evaluate(std::span<const double> normal, const ObjectiveConfig& cfg) const;

private:
    std::size_t dim_;
    std::vector<double> positives_;  // per pair: x1 (dim), x2 (dim)
    std::vector<double> negatives_;
    std::vector<double> positiveNorms_;  // per pair: |x1|, |x2|
    std::vector<double> negativeNorms_;
};

/// One-shot evaluation; equivalent to PreparedPairs(data, pairs).evaluate(normal, cfg).
ObjectiveValue evaluate(std::span<const double> normal, const PairSet& pairs, const ObjectiveConfig& cfg,
                        const LabeledDataset& data);

}  // namespace mlsh

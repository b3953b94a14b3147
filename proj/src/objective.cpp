#include "mlsh/objective.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace mlsh {

namespace {

void copyPairs(const LabeledDataset& data, const std::vector<Pair>& pairs, std::vector<double>& values,
               std::vector<double>& norms) {
    const std::size_t dim = data.dim();
    values.reserve(pairs.size() * 2 * dim);
    norms.reserve(pairs.size() * 2);
    for (const Pair& p : pairs) {
        if (p.indexA >= data.size() || p.indexB >= data.size()) throw DataError("pair index out of range");
        for (std::size_t idx : {p.indexA, p.indexB}) {
            const auto x = data.vector(idx);
            const double n = norm(x);
            if (n == 0.0) throw DataError("record " + std::to_string(idx) + " is the zero vector");
            values.insert(values.end(), x.begin(), x.end());
            norms.push_back(n);
        }
    }
}

}  // namespace

std::string_view objectiveName(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Count: return "count";
        case ObjectiveKind::Ratio: return "ratio";
        case ObjectiveKind::Cosine: return "cosine";
        case ObjectiveKind::CosineRatio: return "cosine_ratio";
    }
    return "?";
}

ObjectiveKind parseObjectiveKind(std::string_view name) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char ch) {
        return ch == '-' ? '_' : static_cast<char>(std::tolower(ch));
    });
    for (auto kind : {ObjectiveKind::Count, ObjectiveKind::Ratio, ObjectiveKind::Cosine, ObjectiveKind::CosineRatio}) {
        if (objectiveName(kind) == key) return kind;
    }
    throw ConfigError("unknown objective '" + std::string(name) + "' (expected count, ratio, cosine or cosine_ratio)");
}

void ObjectiveConfig::validate() const {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) throw ConfigError("temperature must be positive");
}

PairSide classifyDots(double first, double second) {
    if ((first > 0.0 && second > 0.0) || (first < 0.0 && second < 0.0)) return PairSide::SameSide;
    if ((first > 0.0 && second < 0.0) || (first < 0.0 && second > 0.0)) return PairSide::Opposite;
    return PairSide::Neither;
}

PairSide classifyPair(std::span<const double> normal, const Pair& pair, const LabeledDataset& data) {
    return classifyDots(dot(normal, data.vector(pair.indexA)), dot(normal, data.vector(pair.indexB)));
}

PreparedPairs::PreparedPairs(const LabeledDataset& data, const PairSet& pairs) : dim_(data.dim()) {
    copyPairs(data, pairs.positives, positives_, positiveNorms_);
    copyPairs(data, pairs.negatives, negatives_, negativeNorms_);
}

ObjectiveValue PreparedPairs::evaluate(std::span<const double> normal, const ObjectiveConfig& cfg) const {
    cfg.validate();
    if (normal.size() != dim_) throw DataError("normal dimension does not match the pair data");
    const std::size_t np = positiveCount();
    const std::size_t nn = negativeCount();
    const bool ratio = cfg.kind == ObjectiveKind::Ratio || cfg.kind == ObjectiveKind::CosineRatio;
    if (ratio && (np == 0 || nn == 0)) throw DataError("undefined ratio");

    const std::size_t stride = 2 * dim_;
    double x = 0.0;
    if (cfg.kind == ObjectiveKind::Count || cfg.kind == ObjectiveKind::Ratio) {
        std::size_t same = 0;
        for (std::size_t p = 0; p < np; ++p) {
            const double* row = positives_.data() + p * stride;
            same += classifyDots(dot(normal, {row, dim_}), dot(normal, {row + dim_, dim_})) == PairSide::SameSide;
        }
        std::size_t opposite = 0;
        for (std::size_t p = 0; p < nn; ++p) {
            const double* row = negatives_.data() + p * stride;
            opposite += classifyDots(dot(normal, {row, dim_}), dot(normal, {row + dim_, dim_})) == PairSide::Opposite;
        }
        if (cfg.kind == ObjectiveKind::Count) {
            x = static_cast<double>(same + opposite);
        } else {
            x = static_cast<double>(same) / static_cast<double>(np) +
                static_cast<double>(opposite) / static_cast<double>(nn);
        }
    } else {
        double sumPositive = 0.0;
        for (std::size_t p = 0; p < np; ++p) {
            const double* row = positives_.data() + p * stride;
            const double c1 = dot(normal, {row, dim_}) / positiveNorms_[2 * p];
            const double c2 = dot(normal, {row + dim_, dim_}) / positiveNorms_[2 * p + 1];
            sumPositive += std::abs(c1 + c2);
        }
        double sumNegative = 0.0;
        for (std::size_t p = 0; p < nn; ++p) {
            const double* row = negatives_.data() + p * stride;
            const double c1 = dot(normal, {row, dim_}) / negativeNorms_[2 * p];
            const double c2 = dot(normal, {row + dim_, dim_}) / negativeNorms_[2 * p + 1];
            sumNegative += std::abs(c1 - c2);
        }
        if (cfg.kind == ObjectiveKind::Cosine) {
            x = sumPositive + sumNegative;
        } else {
            x = sumPositive / static_cast<double>(np) + sumNegative / static_cast<double>(nn);
        }
    }
    return ObjectiveValue{x, x / cfg.temperature};
}

ObjectiveValue evaluate(std::span<const double> normal, const PairSet& pairs, const ObjectiveConfig& cfg,
                        const LabeledDataset& data) {
    return PreparedPairs(data, pairs).evaluate(normal, cfg);
}

}  // namespace mlsh

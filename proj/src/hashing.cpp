#include "mlsh/hashing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

namespace mlsh {

BitCode encode(const HyperplaneArrangement& arrangement, std::span<const double> x) {
    if (x.size() != arrangement.dim()) {
        throw DataError("cannot encode a vector of dimension " + std::to_string(x.size()) +
                        " with an arrangement of dimension " + std::to_string(arrangement.dim()));
    }
    const std::size_t bits = arrangement.bits();
    std::vector<std::uint64_t> words(BitCode::wordsFor(bits), 0);
    for (std::size_t i = 0; i < bits; ++i) {
        if (dot(arrangement.normal(i), x) > 0.0) {
            words[i / BitCode::kWordBits] |= std::uint64_t{1} << (i % BitCode::kWordBits);
        }
    }
    return BitCode(bits, std::move(words));
}

std::size_t hammingWords(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
    return sum;
}

std::size_t hamming(const BitCode& a, const BitCode& b) {
    if (a.bits() != b.bits()) {
        throw DataError("hamming distance between codes of length " + std::to_string(a.bits()) + " and " +
                        std::to_string(b.bits()));
    }
    return hammingWords(a.words(), b.words());
}

void sampleUnitVector(Engine& engine, std::span<double> out) {
    double n = 0.0;
    do {
        fillStandardNormal(engine, out);
        n = norm(out);
    } while (n < 1e-12);
    for (double& v : out) v /= n;
}

HyperplaneArrangement randomArrangement(std::size_t dim, std::size_t bits, RngSeed seed) {
    if (dim < 2) throw ConfigError("random arrangement needs dimension at least 2");
    if (bits < 1) throw ConfigError("random arrangement needs at least one hyperplane");
    DenseMatrix normals(bits, dim);
    for (std::size_t i = 0; i < bits; ++i) {
        Engine engine = makeEngine(deriveSeed(seed, Stream::Init, {i}));
        sampleUnitVector(engine, normals.row(i));
    }
    return HyperplaneArrangement(std::move(normals));
}

DenseMatrix pairwiseCosineMatrix(const HyperplaneArrangement& arrangement) {
    const std::size_t b = arrangement.bits();
    DenseMatrix cosines(b, b, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = i + 1; j < b; ++j) {
            const double c = std::abs(dot(arrangement.normal(i), arrangement.normal(j)));
            cosines(i, j) = c;
            cosines(j, i) = c;
        }
    }
    return cosines;
}

double meanOffDiagonalCosine(const HyperplaneArrangement& arrangement) {
    const std::size_t b = arrangement.bits();
    if (b < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = i + 1; j < b; ++j) sum += std::abs(dot(arrangement.normal(i), arrangement.normal(j)));
    }
    return sum / (static_cast<double>(b) * static_cast<double>(b - 1) / 2.0);
}

std::vector<std::size_t> componentHistogram(const HyperplaneArrangement& arrangement, std::size_t component,
                                            std::size_t bins) {
    if (bins == 0) throw ConfigError("histogram needs at least one bin");
    if (component >= arrangement.dim()) throw ConfigError("histogram component out of range");
    std::vector<std::size_t> counts(bins, 0);
    for (std::size_t i = 0; i < arrangement.bits(); ++i) {
        const double v = std::clamp(arrangement.normal(i)[component], -1.0, 1.0);
        auto bin = static_cast<std::size_t>((v + 1.0) / 2.0 * static_cast<double>(bins));
        ++counts[std::min(bin, bins - 1)];
    }
    return counts;
}

}  // namespace mlsh

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlsh/core.hpp"

namespace mlsh {

/// Sign hash of `x`: bit i is 1 iff dot(normal_i, x) > 0 (zero maps to 0).
/// Throws DataError on dimension mismatch.
BitCode encode(const HyperplaneArrangement& arrangement, std::span<const double> x);

/// Number of differing bits between two equal-length packed word runs.
std::size_t hammingWords(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Hamming distance. Throws DataError if the code lengths differ.
std::size_t hamming(const BitCode& a, const BitCode& b);

/// Draws a point uniformly on S^(dim-1) by normalizing a standard normal vector.
void sampleUnitVector(Engine& engine, std::span<double> out);

/// B independent uniform normals on S^(N-1). Hyperplane i draws from its own
/// stream deriveSeed(seed, Stream::Init, {i}), so the result does not depend
/// on evaluation order. This is the random-projection LSH baseline and the
/// trainer's initial state.
HyperplaneArrangement randomArrangement(std::size_t dim, std::size_t bits, RngSeed seed);

/// B x B matrix of |cos| between normals; the diagonal is 0.
DenseMatrix pairwiseCosineMatrix(const HyperplaneArrangement& arrangement);

/// Mean of the off-diagonal entries of pairwiseCosineMatrix (0 when B == 1).
double meanOffDiagonalCosine(const HyperplaneArrangement& arrangement);

/// Counts of normals' `component` values over `bins` equal-width bins on
/// [-1, 1]; the value 1 falls in the last bin.
std::vector<std::size_t> componentHistogram(const HyperplaneArrangement& arrangement, std::size_t component,
                                            std::size_t bins);

}  // namespace mlsh

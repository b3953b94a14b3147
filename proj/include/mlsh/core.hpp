#pragma once

// Domain types shared by every mlsh module: labels, datasets, hyperplane
// arrangements, bit codes, pairs and the seeded random-number contract.
//
// All types are immutable once built (datasets are append-only during
// loading) and may be shared read-only across worker threads.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mlsh {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed data, inconsistent dimensions, infeasible sampling, bad model files.
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration values (counts, temperatures, thresholds, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Random numbers

struct RngSeed {
    std::uint64_t value = 0;
    friend bool operator==(RngSeed, RngSeed) = default;
};

/// Independent streams derived from one master seed. The numeric values are
/// part of the reproducibility contract; do not renumber.
enum class Stream : std::uint64_t {
    Init = 1,    // initial / random hyperplane normals, keyed by hyperplane
    Pairs = 2,   // pair sampling, keyed by batch (and hyperplane when unshared)
    Walk = 3,    // Metropolis-Hastings walkers, keyed by hyperplane and batch
    Synth = 4,   // synthetic data generation
};

/// Counter-based mixing of a master seed with a stream tag and a key path.
/// Pure function of its inputs, so workers can derive their own seeds
/// without coordination.
RngSeed deriveSeed(RngSeed master, Stream stream, std::initializer_list<std::uint64_t> keys = {});

using Engine = std::mt19937_64;

Engine makeEngine(RngSeed seed);

/// Fills `out` with i.i.d. standard normal draws.
void fillStandardNormal(Engine& engine, std::span<double> out);

/// Uniform integer in [0, n). Requires n > 0.
std::size_t uniformIndex(Engine& engine, std::size_t n);

/// Uniform real in [0, 1).
double uniformUnit(Engine& engine);

// ---------------------------------------------------------------------------
// Small dense linear algebra helpers

double dot(std::span<const double> a, std::span<const double> b);
double squaredNorm(std::span<const double> a);
double norm(std::span<const double> a);
double squaredDistance(std::span<const double> a, std::span<const double> b);

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::span<const double> values() const { return values_; }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Labels

/// A set of opaque label identifiers, kept sorted and unique.
class LabelSet {
public:
    LabelSet() = default;
    LabelSet(std::initializer_list<std::string> labels);
    explicit LabelSet(std::vector<std::string> labels);

    bool empty() const { return labels_.empty(); }
    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    bool contains(const std::string& label) const;

    friend bool operator==(const LabelSet&, const LabelSet&) = default;

private:
    std::vector<std::string> labels_;
};

/// True iff the two sets share at least one label.
bool commonLabel(const LabelSet& a, const LabelSet& b);

// ---------------------------------------------------------------------------
// Dataset

using LabelId = std::uint32_t;

/// Feature vectors of a common dimension, each paired with a non-empty
/// label set. Record index is identity and the tie-breaker everywhere.
class LabeledDataset {
public:
    explicit LabeledDataset(std::size_t dim);

    /// Appends a record. Throws DataError on dimension mismatch, non-finite
    /// components or an empty label set. Zero vectors are accepted here and
    /// rejected by the file loader and the trainer (requireNonZeroRecords).
    void add(std::span<const double> x, LabelSet labels);

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return labels_.empty(); }

    std::span<const double> vector(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
    std::span<const double> values() const { return values_; }
    const LabelSet& labels(std::size_t i) const { return labels_[i]; }

    /// Interned label ids of record i, sorted ascending.
    std::span<const LabelId> labelIds(std::size_t i) const { return labelIds_[i]; }

    /// commonLabel between two records of this dataset, using interned ids.
    bool shareLabel(std::size_t i, std::size_t j) const;

    /// relevance[i] = commonLabel(labels(i), query).
    std::vector<bool> relevantTo(const LabelSet& query) const;

private:
    LabelId intern(const std::string& label);

    std::size_t dim_;
    std::vector<double> values_;
    std::vector<LabelSet> labels_;
    std::vector<std::vector<LabelId>> labelIds_;
    std::vector<std::string> labelNames_;
    std::unordered_map<std::string, LabelId> labelIndex_;
};

// ---------------------------------------------------------------------------
// Hyperplanes and codes

/// B hyperplanes through the origin, each identified by a unit normal in R^N.
class HyperplaneArrangement {
public:
    static constexpr double kUnitTolerance = 1e-9;

    /// `normals` is B x N. Throws ConfigError if B < 1 or N < 2 and
    /// DataError if any row is not unit length within kUnitTolerance.
    explicit HyperplaneArrangement(DenseMatrix normals);

    std::size_t bits() const { return normals_.rows(); }
    std::size_t dim() const { return normals_.cols(); }
    std::span<const double> normal(std::size_t i) const { return normals_.row(i); }
    const DenseMatrix& normals() const { return normals_; }

    friend bool operator==(const HyperplaneArrangement&, const HyperplaneArrangement&) = default;

private:
    DenseMatrix normals_;
};

/// A length-B bit string packed little-endian into 64-bit words: bit i lives
/// in word i / 64 at position i % 64. Padding bits are always zero.
class BitCode {
public:
    static constexpr std::size_t kWordBits = 64;

    BitCode() = default;
    explicit BitCode(std::size_t bits);
    /// Throws DataError if the word count is wrong or padding bits are set.
    BitCode(std::size_t bits, std::vector<std::uint64_t> words);

    static std::size_t wordsFor(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

    std::size_t bits() const { return bits_; }
    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }
    void set(std::size_t i, bool value);
    std::span<const std::uint64_t> words() const { return words_; }

    /// Bits as a '0'/'1' string, bit 0 first.
    std::string toString() const;

    friend bool operator==(const BitCode&, const BitCode&) = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// Pairs

enum class PairKind { Positive, Negative };

struct Pair {
    std::size_t indexA = 0;
    std::size_t indexB = 0;
    PairKind kind = PairKind::Positive;
    friend bool operator==(const Pair&, const Pair&) = default;
};

struct PairSet {
    std::vector<Pair> positives;
    std::vector<Pair> negatives;
    friend bool operator==(const PairSet&, const PairSet&) = default;
};

/// Throws DataError naming the first record that is the zero vector.
void requireNonZeroRecords(const LabeledDataset& data);

/// Checks the Pair invariant against `data`: distinct valid indices, and label
/// sets intersect for positives, are disjoint for negatives.
bool isValidPair(const LabeledDataset& data, const Pair& pair);

}  // namespace mlsh

#pragma once

// Exhaustive linear-scan search in Hamming and L2 space, and
// precision / recall as a function of acquisition rate
// (retrieved count / searched count).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlsh/core.hpp"

namespace mlsh {

/// Codes for every record of a searched dataset, stored contiguously.
class CodeTable {
public:
    explicit CodeTable(std::size_t bits);

    /// Throws DataError if the code length differs from bits().
    void add(const BitCode& code);

    std::size_t bits() const { return bits_; }
    std::size_t size() const { return count_; }
    std::size_t wordsPerCode() const { return wordsPerCode_; }
    std::span<const std::uint64_t> words(std::size_t i) const {
        return {words_.data() + i * wordsPerCode_, wordsPerCode_};
    }
    BitCode code(std::size_t i) const;

    friend bool operator==(const CodeTable&, const CodeTable&) = default;

private:
    std::size_t bits_;
    std::size_t wordsPerCode_;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Encodes every record of `data`.
CodeTable encodeAll(const HyperplaneArrangement& arrangement, const LabeledDataset& data, unsigned threads = 1);

/// All indices ordered by (Hamming distance, index).
std::vector<std::size_t> rankByHamming(const CodeTable& table, const BitCode& query);

/// All indices ordered by (squared L2 distance, index).
std::vector<std::size_t> rankByL2(const LabeledDataset& data, std::span<const double> query);

/// The k nearest codes, ties to the lower index. Throws ConfigError unless
/// 1 <= k <= table size, DataError on length mismatch.
std::vector<std::size_t> topKByHamming(const CodeTable& table, const BitCode& query, std::size_t k);

/// The k nearest records by L2, ties to the lower index.
std::vector<std::size_t> topKByL2(const LabeledDataset& data, std::span<const double> query, std::size_t k);

struct QueryMetrics {
    double precision = 0.0;
    double recall = 0.0;
};

/// Precision and recall of one retrieved list. Empty when no searched record
/// shares a label with the query (recall undefined).
std::optional<QueryMetrics> evaluateQuery(std::span<const std::size_t> retrieved, const LabelSet& queryLabels,
                                          const LabeledDataset& searched);

struct EvalPoint {
    double acquisition = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct EvalCurve {
    std::vector<EvalPoint> points;
    std::size_t evaluatedQueries = 0;
    /// Queries without any relevant searched record; left out of the averages.
    std::size_t excludedQueries = 0;
};

/// 0.01, 0.02, ..., 0.10, 0.20, ..., 1.00.
std::vector<double> defaultAcquisitionGrid();

/// max(1, ceil(rate * searched)), with rates that are within rounding of an
/// integer product not pushed up to the next count.
std::size_t retrievalCount(double rate, std::size_t searched);

/// Macro-averaged precision / recall over queries at each acquisition rate,
/// ranking the searched set by Hamming distance between codes.
EvalCurve recallPrecisionCurveHamming(const CodeTable& table, const LabeledDataset& searched,
                                      const std::vector<BitCode>& queryCodes, const LabeledDataset& queries,
                                      std::span<const double> grid, unsigned threads = 1);

/// Same, ranking by L2 distance between feature vectors.
EvalCurve recallPrecisionCurveL2(const LabeledDataset& searched, const LabeledDataset& queries,
                                 std::span<const double> grid, unsigned threads = 1);

struct ScaledPoint {
    double acquisition = 0.0;
    std::optional<double> precision;  // empty when the baseline value is 0
    std::optional<double> recall;
};

/// Element-wise method / baseline ratios. Throws ConfigError if the
/// acquisition grids differ.
std::vector<ScaledPoint> scaledMetrics(std::span<const EvalPoint> method, std::span<const EvalPoint> baseline);

}  // namespace mlsh

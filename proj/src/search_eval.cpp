#include "mlsh/search_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlsh/hashing.hpp"
#include "mlsh/parallel.hpp"

namespace mlsh {

namespace {

template <class Key>
std::vector<std::size_t> rankByKeys(const std::vector<Key>& keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return keys[a] < keys[b] || (keys[a] == keys[b] && a < b);
    });
    return order;
}

template <class Key>
std::vector<std::size_t> topKByKeys(const std::vector<Key>& keys, std::size_t k) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto less = [&](std::size_t a, std::size_t b) { return keys[a] < keys[b] || (keys[a] == keys[b] && a < b); };
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), less);
    order.resize(k);
    return order;
}

void requireK(std::size_t k, std::size_t size) {
    if (k < 1 || k > size) {
        throw ConfigError("k = " + std::to_string(k) + " is outside [1, " + std::to_string(size) + "]");
    }
}

std::vector<std::size_t> hammingKeys(const CodeTable& table, const BitCode& query) {
    if (query.bits() != table.bits()) throw DataError("query code length does not match the code table");
    std::vector<std::size_t> keys(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) keys[i] = hammingWords(table.words(i), query.words());
    return keys;
}

std::vector<double> l2Keys(const LabeledDataset& data, std::span<const double> query) {
    if (query.size() != data.dim()) throw DataError("query dimension does not match the searched data");
    std::vector<double> keys(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) keys[i] = squaredDistance(data.vector(i), query);
    return keys;
}

void validateGrid(std::span<const double> grid) {
    for (double r : grid) {
        if (!(r > 0.0 && r <= 1.0)) throw ConfigError("acquisition rates must lie in (0, 1]");
    }
}

// Shared driver: `rank(q)` returns the full ranking of the searched set for query q.
template <class Rank>
EvalCurve curveFromRankings(const LabeledDataset& searched, const LabeledDataset& queries,
                            std::span<const double> grid, unsigned threads, Rank rank) {
    validateGrid(grid);
    if (queries.empty()) throw DataError("empty query set");
    if (searched.empty()) throw DataError("empty searched set");

    const std::size_t n = searched.size();
    std::vector<std::size_t> counts(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) counts[g] = retrievalCount(grid[g], n);

    // Per-query metrics are kept and summed in query order so the averages
    // do not depend on the worker count.
    std::vector<std::vector<QueryMetrics>> perQuery(queries.size());
    parallelFor(queries.size(), threads, [&](std::size_t q) {
        const std::vector<bool> relevant = searched.relevantTo(queries.labels(q));
        const std::size_t total = static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
        if (total == 0) return;
        const std::vector<std::size_t> order = rank(q);
        std::vector<std::size_t> prefix(n + 1, 0);
        for (std::size_t r = 0; r < n; ++r) prefix[r + 1] = prefix[r] + (relevant[order[r]] ? 1 : 0);
        auto& metrics = perQuery[q];
        metrics.resize(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const double hits = static_cast<double>(prefix[counts[g]]);
            metrics[g] = {hits / static_cast<double>(counts[g]), hits / static_cast<double>(total)};
        }
    });

    EvalCurve curve;
    curve.points.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) curve.points[g].acquisition = grid[g];
    for (const auto& metrics : perQuery) {
        if (metrics.empty()) {
            ++curve.excludedQueries;
            continue;
        }
        ++curve.evaluatedQueries;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            curve.points[g].precision += metrics[g].precision;
            curve.points[g].recall += metrics[g].recall;
        }
    }
    if (curve.evaluatedQueries > 0) {
        const double m = static_cast<double>(curve.evaluatedQueries);
        for (auto& p : curve.points) {
            p.precision /= m;
            p.recall /= m;
        }
    }
    return curve;
}

}  // namespace

CodeTable::CodeTable(std::size_t bits) : bits_(bits), wordsPerCode_(BitCode::wordsFor(bits)) {
    if (bits == 0) throw ConfigError("code table needs at least one bit");
}

void CodeTable::add(const BitCode& code) {
    if (code.bits() != bits_) throw DataError("code length does not match the code table");
    words_.insert(words_.end(), code.words().begin(), code.words().end());
    ++count_;
}

BitCode CodeTable::code(std::size_t i) const {
    const auto w = words(i);
    return BitCode(bits_, std::vector<std::uint64_t>(w.begin(), w.end()));
}

CodeTable encodeAll(const HyperplaneArrangement& arrangement, const LabeledDataset& data, unsigned threads) {
    std::vector<BitCode> codes(data.size());
    parallelFor(data.size(), threads, [&](std::size_t i) { codes[i] = encode(arrangement, data.vector(i)); });
    CodeTable table(arrangement.bits());
    for (const auto& c : codes) table.add(c);
    return table;
}

std::vector<std::size_t> rankByHamming(const CodeTable& table, const BitCode& query) {
    return rankByKeys(hammingKeys(table, query));
}

std::vector<std::size_t> rankByL2(const LabeledDataset& data, std::span<const double> query) {
    return rankByKeys(l2Keys(data, query));
}

std::vector<std::size_t> topKByHamming(const CodeTable& table, const BitCode& query, std::size_t k) {
    requireK(k, table.size());
    return topKByKeys(hammingKeys(table, query), k);
}

std::vector<std::size_t> topKByL2(const LabeledDataset& data, std::span<const double> query, std::size_t k) {
    requireK(k, data.size());
    return topKByKeys(l2Keys(data, query), k);
}

std::optional<QueryMetrics> evaluateQuery(std::span<const std::size_t> retrieved, const LabelSet& queryLabels,
                                          const LabeledDataset& searched) {
    const std::vector<bool> relevant = searched.relevantTo(queryLabels);
    const auto total = static_cast<std::size_t>(std::count(relevant.begin(), relevant.end(), true));
    if (total == 0) return std::nullopt;
    std::size_t hits = 0;
    for (std::size_t i : retrieved) {
        if (i >= searched.size()) throw DataError("retrieved index out of range");
        hits += relevant[i] ? 1 : 0;
    }
    const double precision = retrieved.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(retrieved.size());
    return QueryMetrics{precision, static_cast<double>(hits) / static_cast<double>(total)};
}

std::vector<double> defaultAcquisitionGrid() {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(i / 100.0);
    for (int i = 2; i <= 10; ++i) grid.push_back(i / 10.0);
    return grid;
}

std::size_t retrievalCount(double rate, std::size_t searched) {
    const double product = rate * static_cast<double>(searched);
    const double nearest = std::round(product);
    double k = std::abs(product - nearest) <= 1e-9 * std::max(1.0, product) ? nearest : std::ceil(product);
    k = std::clamp(k, 1.0, static_cast<double>(searched));
    return static_cast<std::size_t>(k);
}

EvalCurve recallPrecisionCurveHamming(const CodeTable& table, const LabeledDataset& searched,
                                      const std::vector<BitCode>& queryCodes, const LabeledDataset& queries,
                                      std::span<const double> grid, unsigned threads) {
    if (table.size() != searched.size()) throw DataError("code table does not match the searched set");
    if (queryCodes.size() != queries.size()) throw DataError("query codes do not match the query set");
    return curveFromRankings(searched, queries, grid, threads,
                             [&](std::size_t q) { return rankByHamming(table, queryCodes[q]); });
}

EvalCurve recallPrecisionCurveL2(const LabeledDataset& searched, const LabeledDataset& queries,
                                 std::span<const double> grid, unsigned threads) {
    if (queries.dim() != searched.dim()) throw DataError("query dimension does not match the searched data");
    return curveFromRankings(searched, queries, grid, threads,
                             [&](std::size_t q) { return rankByL2(searched, queries.vector(q)); });
}

std::vector<ScaledPoint> scaledMetrics(std::span<const EvalPoint> method, std::span<const EvalPoint> baseline) {
    if (method.size() != baseline.size()) throw ConfigError("acquisition grids differ in length");
    std::vector<ScaledPoint> out(method.size());
    for (std::size_t i = 0; i < method.size(); ++i) {
        if (method[i].acquisition != baseline[i].acquisition) throw ConfigError("acquisition grids are not aligned");
        out[i].acquisition = method[i].acquisition;
        if (baseline[i].precision != 0.0) out[i].precision = method[i].precision / baseline[i].precision;
        if (baseline[i].recall != 0.0) out[i].recall = method[i].recall / baseline[i].recall;
    }
    return out;
}

}  // namespace mlsh

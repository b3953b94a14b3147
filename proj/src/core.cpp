#include "mlsh/core.hpp"

#include <algorithm>
#include <cmath>

namespace mlsh {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngSeed deriveSeed(RngSeed master, Stream stream, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t state = mix64(master.value + kGolden * static_cast<std::uint64_t>(stream));
    std::uint64_t position = 1;
    for (std::uint64_t key : keys) {
        state = mix64(state ^ mix64(key + kGolden * position));
        ++position;
    }
    return RngSeed{state};
}

Engine makeEngine(RngSeed seed) { return Engine(seed.value); }

void fillStandardNormal(Engine& engine, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : out) v = normal(engine);
}

std::size_t uniformIndex(Engine& engine, std::size_t n) {
    std::uniform_int_distribution<std::size_t> dist(0, n - 1);
    return dist(engine);
}

double uniformUnit(Engine& engine) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(engine);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double squaredNorm(std::span<const double> a) { return dot(a, a); }

double norm(std::span<const double> a) { return std::sqrt(squaredNorm(a)); }

double squaredDistance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

// ---------------------------------------------------------------------------

LabelSet::LabelSet(std::initializer_list<std::string> labels)
    : LabelSet(std::vector<std::string>(labels)) {}

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

bool LabelSet::contains(const std::string& label) const {
    return std::binary_search(labels_.begin(), labels_.end(), label);
}

bool commonLabel(const LabelSet& a, const LabelSet& b) {
    const auto& x = a.labels();
    const auto& y = b.labels();
    auto i = x.begin();
    auto j = y.begin();
    while (i != x.end() && j != y.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------

LabeledDataset::LabeledDataset(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw ConfigError("dataset dimension must be at least 1");
}

void LabeledDataset::add(std::span<const double> x, LabelSet labels) {
    const std::size_t record = size();
    if (x.size() != dim_) {
        throw DataError("record " + std::to_string(record) + " has dimension " + std::to_string(x.size()) +
                        ", expected " + std::to_string(dim_));
    }
    if (labels.empty()) throw DataError("record " + std::to_string(record) + " has an empty label set");
    for (double v : x) {
        if (!std::isfinite(v)) throw DataError("record " + std::to_string(record) + " has a non-finite component");
    }

    std::vector<LabelId> ids;
    ids.reserve(labels.size());
    for (const auto& name : labels.labels()) ids.push_back(intern(name));
    std::sort(ids.begin(), ids.end());

    values_.insert(values_.end(), x.begin(), x.end());
    labels_.push_back(std::move(labels));
    labelIds_.push_back(std::move(ids));
}

LabelId LabeledDataset::intern(const std::string& label) {
    const auto [it, inserted] = labelIndex_.try_emplace(label, static_cast<LabelId>(labelNames_.size()));
    if (inserted) labelNames_.push_back(label);
    return it->second;
}

bool LabeledDataset::shareLabel(std::size_t i, std::size_t j) const {
    const auto& x = labelIds_[i];
    const auto& y = labelIds_[j];
    if (x.size() == 1 && y.size() == 1) return x[0] == y[0];
    auto a = x.begin();
    auto b = y.begin();
    while (a != x.end() && b != y.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            return true;
        }
    }
    return false;
}

std::vector<bool> LabeledDataset::relevantTo(const LabelSet& query) const {
    std::vector<bool> known(labelNames_.size(), false);
    for (std::size_t id = 0; id < labelNames_.size(); ++id) known[id] = query.contains(labelNames_[id]);
    std::vector<bool> relevant(size(), false);
    for (std::size_t i = 0; i < size(); ++i) {
        for (LabelId id : labelIds_[i]) {
            if (known[id]) {
                relevant[i] = true;
                break;
            }
        }
    }
    return relevant;
}

// ---------------------------------------------------------------------------

HyperplaneArrangement::HyperplaneArrangement(DenseMatrix normals) : normals_(std::move(normals)) {
    if (normals_.rows() < 1) throw ConfigError("an arrangement needs at least one hyperplane");
    if (normals_.cols() < 2) throw ConfigError("hyperplane normals need dimension at least 2");
    for (std::size_t i = 0; i < normals_.rows(); ++i) {
        const double n = norm(normals_.row(i));
        if (!(std::abs(n - 1.0) <= kUnitTolerance)) {
            throw DataError("normal " + std::to_string(i) + " is not unit length");
        }
    }
}

BitCode::BitCode(std::size_t bits) : bits_(bits), words_(wordsFor(bits), 0) {}

BitCode::BitCode(std::size_t bits, std::vector<std::uint64_t> words) : bits_(bits), words_(std::move(words)) {
    if (words_.size() != wordsFor(bits)) throw DataError("bit code word count does not match its length");
    const std::size_t tail = bits % kWordBits;
    if (tail != 0 && (words_.back() >> tail) != 0) throw DataError("bit code has non-zero padding bits");
}

void BitCode::set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= mask;
    } else {
        words_[i / kWordBits] &= ~mask;
    }
}

std::string BitCode::toString() const {
    std::string s(bits_, '0');
    for (std::size_t i = 0; i < bits_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

void requireNonZeroRecords(const LabeledDataset& data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (squaredNorm(data.vector(i)) == 0.0) throw DataError("record " + std::to_string(i) + " is the zero vector");
    }
}

bool isValidPair(const LabeledDataset& data, const Pair& pair) {
    if (pair.indexA >= data.size() || pair.indexB >= data.size()) return false;
    if (pair.indexA == pair.indexB) return false;
    const bool shared = commonLabel(data.labels(pair.indexA), data.labels(pair.indexB));
    return pair.kind == PairKind::Positive ? shared : !shared;
}

}  // namespace mlsh

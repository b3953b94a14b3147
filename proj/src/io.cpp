#include "mlsh/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace mlsh {

namespace {

using Json = nlohmann::ordered_json;

constexpr char kCodeMagic[8] = {'M', 'L', 'S', 'H', 'C', 'O', 'D', 'E'};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parseNumber(std::string_view field, std::size_t line) {
    field = trim(field);
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    if (!field.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty()) {
        throw DataError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "' as a number");
    }
    return value;
}

std::ifstream openIn(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream openOut(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    return out;
}

Json matrixToJson(const DenseMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
    return rows;
}

DenseMatrix matrixFromJson(const Json& j, std::size_t rows, std::size_t cols, const char* what) {
    if (!j.is_array() || j.size() != rows) throw DataError(std::string(what) + " has the wrong number of rows");
    DenseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = j.at(r).get<std::vector<double>>();
        if (row.size() != cols) throw DataError(std::string(what) + " has a row of the wrong width");
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

Json configToJson(const TrainConfig& cfg) {
    Json j;
    j["bits"] = cfg.bits;
    j["batches"] = cfg.batches;
    j["steps_per_batch"] = cfg.stepsPerBatch;
    j["proposal_stddev"] = cfg.proposalStddev;
    j["objective"] = std::string(objectiveName(cfg.objective.kind));
    j["temperature"] = cfg.objective.temperature;
    j["positive_method"] = std::string(methodName(cfg.sampling.positiveMethod));
    j["negative_method"] = std::string(methodName(cfg.sampling.negativeMethod));
    j["positive_pairs"] = cfg.sampling.positiveCount;
    j["negative_pairs"] = cfg.sampling.negativeCount;
    j["seed"] = cfg.seed.value;
    j["shared_pairs_across_hyperplanes"] = cfg.sharedPairsAcrossHyperplanes;
    j["track_best"] = cfg.trackBest;
    return j;
}

PositiveMethod positiveFromName(const std::string& name) {
    for (auto m : {PositiveMethod::Randomhit, PositiveMethod::Nearhit, PositiveMethod::Farhit}) {
        if (methodName(m) == name) return m;
    }
    throw DataError("unknown positive sampling method '" + name + "'");
}

NegativeMethod negativeFromName(const std::string& name) {
    for (auto m : {NegativeMethod::Randommiss, NegativeMethod::Nearmiss, NegativeMethod::Boundarymiss}) {
        if (methodName(m) == name) return m;
    }
    throw DataError("unknown negative sampling method '" + name + "'");
}

TrainConfig configFromJson(const Json& j) {
    TrainConfig cfg;
    cfg.bits = j.at("bits").get<std::size_t>();
    cfg.batches = j.at("batches").get<std::size_t>();
    cfg.stepsPerBatch = j.at("steps_per_batch").get<std::size_t>();
    cfg.proposalStddev = j.at("proposal_stddev").get<double>();
    try {
        cfg.objective.kind = parseObjectiveKind(j.at("objective").get<std::string>());
    } catch (const ConfigError& e) {
        throw DataError(e.what());
    }
    cfg.objective.temperature = j.at("temperature").get<double>();
    cfg.sampling.positiveMethod = positiveFromName(j.at("positive_method").get<std::string>());
    cfg.sampling.negativeMethod = negativeFromName(j.at("negative_method").get<std::string>());
    cfg.sampling.positiveCount = j.at("positive_pairs").get<std::size_t>();
    cfg.sampling.negativeCount = j.at("negative_pairs").get<std::size_t>();
    cfg.seed = RngSeed{j.at("seed").get<std::uint64_t>()};
    cfg.sharedPairsAcrossHyperplanes = j.at("shared_pairs_across_hyperplanes").get<bool>();
    cfg.trackBest = j.value("track_best", false);
    return cfg;
}

void putU32(std::ostream& out, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 4);
}

void putU64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(b, 8);
}

std::uint64_t getLE(std::istream& in, int bytes) {
    unsigned char b[8] = {};
    in.read(reinterpret_cast<char*>(b), bytes);
    if (in.gcount() != bytes) throw DataError("code table is truncated");
    std::uint64_t v = 0;
    for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

}  // namespace

std::string formatDouble(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// Dataset CSV

LabeledDataset readDatasetCsv(std::istream& in) {
    std::optional<LabeledDataset> data;
    std::string line;
    std::size_t lineNo = 0;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split(text, ',');
        if (fields.size() < 2) throw DataError("line " + std::to_string(lineNo) + ": expected labels and values");

        std::vector<std::string> labels;
        for (auto label : split(fields[0], ';')) {
            label = trim(label);
            if (!label.empty()) labels.emplace_back(label);
        }
        if (labels.empty()) throw DataError("line " + std::to_string(lineNo) + ": empty label set");

        values.clear();
        for (std::size_t f = 1; f < fields.size(); ++f) values.push_back(parseNumber(fields[f], lineNo));
        if (!data) data.emplace(values.size());
        if (values.size() != data->dim()) {
            throw DataError("line " + std::to_string(lineNo) + ": expected " + std::to_string(data->dim()) +
                            " values, found " + std::to_string(values.size()));
        }
        if (squaredNorm(values) == 0.0) throw DataError("line " + std::to_string(lineNo) + ": zero vector");
        try {
            data->add(values, LabelSet(std::move(labels)));
        } catch (const DataError& e) {
            throw DataError("line " + std::to_string(lineNo) + ": " + e.what());
        }
    }
    if (!data) throw DataError("dataset contains no records");
    return std::move(*data);
}

LabeledDataset readDatasetCsv(const std::filesystem::path& path) {
    auto in = openIn(path);
    try {
        return readDatasetCsv(in);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void writeDatasetCsv(std::ostream& out, const LabeledDataset& data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& labels = data.labels(i).labels();
        for (std::size_t l = 0; l < labels.size(); ++l) out << (l ? ";" : "") << labels[l];
        for (double v : data.vector(i)) out << ',' << formatDouble(v);
        out << '\n';
    }
}

void writeDatasetCsv(const std::filesystem::path& path, const LabeledDataset& data) {
    auto out = openOut(path);
    writeDatasetCsv(out, data);
}

// ---------------------------------------------------------------------------
// Model file

std::string serializeModel(const Model& model) {
    Json j;
    j["format"] = "mlsh-model";
    j["format_version"] = kModelFormatVersion;
    if (model.preprocess) {
        const auto& p = *model.preprocess;
        Json pj;
        pj["input_dim"] = p.inputDim();
        pj["output_dim"] = p.outputDim();
        if (model.contributionThreshold) pj["contribution_threshold"] = *model.contributionThreshold;
        pj["mean"] = p.mean;
        pj["stddev"] = p.stddev;
        pj["eigenvalues"] = p.eigenvalues;
        pj["projection"] = matrixToJson(p.projection);
        j["preprocess"] = std::move(pj);
    } else {
        j["preprocess"] = nullptr;
    }
    Json aj;
    aj["bits"] = model.arrangement.bits();
    aj["dim"] = model.arrangement.dim();
    aj["normals"] = matrixToJson(model.arrangement.normals());
    j["arrangement"] = std::move(aj);
    j["config"] = model.config ? configToJson(*model.config) : Json(nullptr);
    return j.dump(1) + "\n";
}

Model parseModel(std::string_view text) {
    try {
        const Json j = Json::parse(text);
        if (j.value("format", std::string()) != "mlsh-model") throw DataError("not an mlsh model file");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("unsupported model format_version " + std::to_string(version));
        }

        const Json& aj = j.at("arrangement");
        const auto bits = aj.at("bits").get<std::size_t>();
        const auto dim = aj.at("dim").get<std::size_t>();
        Model model{std::nullopt, std::nullopt,
                    HyperplaneArrangement(matrixFromJson(aj.at("normals"), bits, dim, "normals")), std::nullopt};

        const Json& pj = j.at("preprocess");
        if (!pj.is_null()) {
            PreprocessModel p;
            const auto in = pj.at("input_dim").get<std::size_t>();
            const auto out = pj.at("output_dim").get<std::size_t>();
            p.mean = pj.at("mean").get<std::vector<double>>();
            p.stddev = pj.at("stddev").get<std::vector<double>>();
            p.eigenvalues = pj.value("eigenvalues", std::vector<double>{});
            p.projection = matrixFromJson(pj.at("projection"), out, in, "projection");
            if (p.mean.size() != in) throw DataError("preprocess mean length does not match input_dim");
            p.validate();
            if (p.outputDim() != dim) throw DataError("preprocess output does not match the arrangement dimension");
            if (pj.contains("contribution_threshold")) {
                model.contributionThreshold = pj.at("contribution_threshold").get<double>();
            }
            model.preprocess = std::move(p);
        }
        if (j.contains("config") && !j.at("config").is_null()) model.config = configFromJson(j.at("config"));
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("invalid model file: ") + e.what());
    }
}

void writeModelFile(const std::filesystem::path& path, const Model& model) {
    auto out = openOut(path, std::ios::out | std::ios::binary);
    out << serializeModel(model);
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

Model readModelFile(const std::filesystem::path& path) {
    auto in = openIn(path, std::ios::in | std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parseModel(buffer.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<double> modelInput(const Model& model, std::span<const double> raw) {
    if (model.preprocess) return applyPreprocess(*model.preprocess, raw);
    if (raw.size() != model.arrangement.dim()) throw DataError("vector dimension does not match the model");
    return {raw.begin(), raw.end()};
}

LabeledDataset modelInput(const Model& model, const LabeledDataset& raw) {
    if (model.preprocess) return applyPreprocess(*model.preprocess, raw);
    if (raw.dim() != model.arrangement.dim()) throw DataError("dataset dimension does not match the model");
    return raw;
}

// ---------------------------------------------------------------------------
// Code table

void writeCodeTable(std::ostream& out, const CodeTable& table) {
    out.write(kCodeMagic, sizeof kCodeMagic);
    putU32(out, kCodeTableVersion);
    putU32(out, static_cast<std::uint32_t>(table.bits()));
    putU64(out, table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::uint64_t w : table.words(i)) putU64(out, w);
    }
}

CodeTable readCodeTable(std::istream& in) {
    char magic[8] = {};
    in.read(magic, sizeof magic);
    if (in.gcount() != 8 || !std::equal(magic, magic + 8, kCodeMagic)) throw DataError("not an mlsh code table");
    const auto version = static_cast<std::uint32_t>(getLE(in, 4));
    if (version != kCodeTableVersion) throw DataError("unsupported code table version " + std::to_string(version));
    const auto bits = static_cast<std::size_t>(getLE(in, 4));
    const auto count = getLE(in, 8);
    if (bits == 0) throw DataError("code table declares zero bits");
    CodeTable table(bits);
    std::vector<std::uint64_t> words(BitCode::wordsFor(bits));
    for (std::uint64_t i = 0; i < count; ++i) {
        for (auto& w : words) w = getLE(in, 8);
        table.add(BitCode(bits, words));
    }
    return table;
}

void writeCodeTable(const std::filesystem::path& path, const CodeTable& table) {
    auto out = openOut(path, std::ios::out | std::ios::binary);
    writeCodeTable(out, table);
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

CodeTable readCodeTable(const std::filesystem::path& path) {
    auto in = openIn(path, std::ios::in | std::ios::binary);
    return readCodeTable(in);
}

// ---------------------------------------------------------------------------
// CSV reports

void writeTrainReportCsv(std::ostream& out, const TrainReport& report) {
    out << "hyperplane,batch,acceptance_rate,end_logU\n";
    for (std::size_t h = 0; h < report.acceptanceRate.rows(); ++h) {
        for (std::size_t b = 0; b < report.acceptanceRate.cols(); ++b) {
            out << h << ',' << b << ',' << formatDouble(report.acceptanceRate(h, b)) << ','
                << formatDouble(report.batchEndLogU(h, b)) << '\n';
        }
    }
}

void writeTrajectoryCsv(std::ostream& out, const TrainReport& report) {
    out << "hyperplane,step,logU\n";
    for (std::size_t h = 0; h < report.trajectoryLogU.size(); ++h) {
        const auto& t = report.trajectoryLogU[h];
        for (std::size_t s = 0; s < t.size(); ++s) out << h << ',' << s << ',' << formatDouble(t[s]) << '\n';
    }
}

void writeCurvesCsv(std::ostream& out, const std::vector<std::pair<std::string, EvalCurve>>& curves) {
    out << "acquisition,precision,recall,method\n";
    for (const auto& [method, curve] : curves) {
        for (const auto& p : curve.points) {
            out << formatDouble(p.acquisition) << ',' << formatDouble(p.precision) << ',' << formatDouble(p.recall)
                << ',' << method << '\n';
        }
    }
}

void writeScaledCsv(std::ostream& out,
                    const std::vector<std::pair<std::string, std::vector<ScaledPoint>>>& scaled) {
    const auto cell = [](const std::optional<double>& v) { return v ? formatDouble(*v) : std::string("undefined"); };
    out << "acquisition,precision_ratio,recall_ratio,method\n";
    for (const auto& [method, points] : scaled) {
        for (const auto& p : points) {
            out << formatDouble(p.acquisition) << ',' << cell(p.precision) << ',' << cell(p.recall) << ',' << method
                << '\n';
        }
    }
}

void writeMatrixCsv(std::ostream& out, const DenseMatrix& matrix) {
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
        for (std::size_t c = 0; c < matrix.cols(); ++c) out << (c ? "," : "") << formatDouble(matrix(r, c));
        out << '\n';
    }
}

}  // namespace mlsh

#pragma once

// File formats.
//
// Dataset CSV (UTF-8), one record per line:
//     label1;label2;...,v1,v2,...,vN
// Blank lines and lines starting with '#' are skipped.
//
// Model file: a JSON document with "format": "mlsh-model" and an integer
// "format_version" (currently 1) holding the optional preprocessing model,
// the hyperplane normals and an echo of the training configuration. Floats
// are written in shortest round-trip decimal form.
//
// Code table: little-endian binary
//     bytes 0-7   magic "MLSHCODE"
//     u32         version (1)
//     u32         bits B
//     u64         count
//     count * ceil(B/64) u64 words, code by code, bit i of a code in word
//     i/64 at position i%64, padding bits zero.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mlsh/core.hpp"
#include "mlsh/mcmc.hpp"
#include "mlsh/preprocess.hpp"
#include "mlsh/search_eval.hpp"

namespace mlsh {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::uint32_t kCodeTableVersion = 1;

/// Shortest decimal string that parses back to exactly `value`.
std::string formatDouble(double value);

/// Throws DataError with a line number on malformed input, including zero
/// vectors and mismatched dimensions.
LabeledDataset readDatasetCsv(std::istream& in);
LabeledDataset readDatasetCsv(const std::filesystem::path& path);
void writeDatasetCsv(std::ostream& out, const LabeledDataset& data);
void writeDatasetCsv(const std::filesystem::path& path, const LabeledDataset& data);

struct Model {
    std::optional<PreprocessModel> preprocess;
    std::optional<double> contributionThreshold;
    HyperplaneArrangement arrangement;
    std::optional<TrainConfig> config;
};

std::string serializeModel(const Model& model);
/// Throws DataError on malformed documents or an unsupported format_version.
Model parseModel(std::string_view text);
void writeModelFile(const std::filesystem::path& path, const Model& model);
Model readModelFile(const std::filesystem::path& path);

/// Maps a raw feature vector into the arrangement's space (identity when the
/// model has no preprocessing step).
std::vector<double> modelInput(const Model& model, std::span<const double> raw);
LabeledDataset modelInput(const Model& model, const LabeledDataset& raw);

void writeCodeTable(std::ostream& out, const CodeTable& table);
CodeTable readCodeTable(std::istream& in);
void writeCodeTable(const std::filesystem::path& path, const CodeTable& table);
CodeTable readCodeTable(const std::filesystem::path& path);

/// hyperplane,batch,acceptance_rate,end_logU
void writeTrainReportCsv(std::ostream& out, const TrainReport& report);
/// hyperplane,step,logU
void writeTrajectoryCsv(std::ostream& out, const TrainReport& report);

/// acquisition,precision,recall,method
void writeCurvesCsv(std::ostream& out, const std::vector<std::pair<std::string, EvalCurve>>& curves);
/// acquisition,precision_ratio,recall_ratio,method ("undefined" for a zero baseline)
void writeScaledCsv(std::ostream& out, const std::vector<std::pair<std::string, std::vector<ScaledPoint>>>& scaled);

/// B rows of B comma-separated values.
void writeMatrixCsv(std::ostream& out, const DenseMatrix& matrix);

}  // namespace mlsh

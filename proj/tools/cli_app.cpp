#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mlsh/core.hpp"
#include "mlsh/hashing.hpp"
#include "mlsh/io.hpp"
#include "mlsh/mcmc.hpp"
#include "mlsh/pairs.hpp"
#include "mlsh/preprocess.hpp"
#include "mlsh/search_eval.hpp"
#include "mlsh/synth.hpp"

namespace mlsh::cli {

namespace {

// Writes to `path`, or to `fallback` when the path is empty or "-".
void withOutput(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(fallback);
        return;
    }
    std::ofstream file(path, std::ios::out | std::ios::trunc | std::ios::binary);
    if (!file) throw DataError("cannot open '" + path + "' for writing");
    write(file);
    if (!file) throw DataError("failed writing '" + path + "'");
}

double median(std::vector<double> values) {
    if (values.empty()) return 0.0;
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
    std::nth_element(values.begin(), mid, values.end());
    double m = *mid;
    if (values.size() % 2 == 0) m = (m + *std::max_element(values.begin(), mid)) / 2.0;
    return m;
}

std::vector<double> parseGrid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse acquisition rate '" + item + "'");
        }
    }
    if (grid.empty()) throw ConfigError("acquisition grid is empty");
    return grid;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string kind = "gaussian-sign";
    std::size_t n = 300;
    std::size_t classes = 10;
    std::size_t dim = 16;
    std::size_t perCluster = 50;
    double spread = 1.0;
    double centerScale = 4.0;
    std::uint64_t seed = 0;
    std::string out;
};

void runGenerate(const GenerateArgs& a, std::ostream& out) {
    const RngSeed seed{a.seed};
    if (a.kind == "gaussian-sign") {
        writeDatasetCsv(a.out, generateGaussianSignDataset(a.n, seed));
        out << "wrote " << a.n << " records to " << a.out << '\n';
        return;
    }
    const DenseMatrix centers = randomCenters(a.classes, a.dim, a.centerScale, seed);
    std::vector<LabelSet> labels;
    for (std::size_t c = 0; c < a.classes; ++c) labels.push_back(LabelSet{"c" + std::to_string(c)});
    const LabeledDataset data = generateClusters(centers, a.spread, a.perCluster, labels, seed);
    writeDatasetCsv(a.out, data);
    out << "wrote " << data.size() << " records to " << a.out << '\n';
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
    std::string train;
    double threshold = kDefaultContributionThreshold;
    std::vector<std::string> apply;
    std::vector<std::string> outputs;
};

void runPreprocess(const PreprocessArgs& a, std::ostream& out) {
    if (a.apply.size() != a.outputs.size()) throw ConfigError("--apply and --out must be given the same number of times");
    const LabeledDataset train = readDatasetCsv(a.train);
    const PreprocessModel model = fitPreprocess(train, a.threshold);
    out << "input_dim " << model.inputDim() << "\noutput_dim " << model.outputDim() << "\ncumulative_contribution "
        << formatDouble(cumulativeContribution(model, model.outputDim())) << '\n';
    for (std::size_t i = 0; i < a.apply.size(); ++i) {
        writeDatasetCsv(a.outputs[i], applyPreprocess(model, readDatasetCsv(a.apply[i])));
        out << "wrote " << a.outputs[i] << '\n';
    }
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string data;
    std::size_t bits = 1024;
    std::size_t batches = 10;
    std::size_t steps = 100;
    std::size_t pairs = 2000;
    std::optional<std::size_t> positivePairs;
    std::optional<std::size_t> negativePairs;
    std::string objective = "count";
    double temperature = 1.0;
    std::string sampling = "randomhit-randommiss";
    double stddev = 0.01;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool perHyperplanePairs = false;
    bool trackBest = false;
    double pcaThreshold = kDefaultContributionThreshold;
    bool noPreprocess = false;
    std::string out;
    std::string report;
    std::string trajectory;
    std::string bestOut;
};

void runTrain(const TrainArgs& a, std::ostream& out) {
    TrainConfig cfg;
    cfg.bits = a.bits;
    cfg.batches = a.batches;
    cfg.stepsPerBatch = a.steps;
    cfg.proposalStddev = a.stddev;
    cfg.objective.kind = parseObjectiveKind(a.objective);
    cfg.objective.temperature = a.temperature;
    const SamplingPreset preset = parseSamplingPreset(a.sampling);
    cfg.sampling.positiveMethod = preset.positive;
    cfg.sampling.negativeMethod = preset.negative;
    cfg.sampling.positiveCount = a.positivePairs.value_or(a.pairs - a.pairs / 2);
    cfg.sampling.negativeCount = a.negativePairs.value_or(a.pairs / 2);
    cfg.seed = RngSeed{a.seed};
    cfg.sharedPairsAcrossHyperplanes = !a.perHyperplanePairs;
    cfg.trackBest = a.trackBest || !a.bestOut.empty();
    cfg.recordTrajectory = !a.trajectory.empty();
    cfg.validate();

    const LabeledDataset raw = readDatasetCsv(a.data);
    std::optional<PreprocessModel> preprocess;
    std::optional<double> threshold;
    if (!a.noPreprocess) {
        preprocess = fitPreprocess(raw, a.pcaThreshold);
        threshold = a.pcaThreshold;
    }
    const LabeledDataset data = preprocess ? applyPreprocess(*preprocess, raw) : raw;

    TrainResult result = train(data, cfg, a.threads);
    writeModelFile(a.out, Model{preprocess, threshold, result.arrangement, cfg});

    const TrainReport& report = result.report;
    if (!a.report.empty()) withOutput(a.report, out, [&](std::ostream& os) { writeTrainReportCsv(os, report); });
    if (!a.trajectory.empty()) withOutput(a.trajectory, out, [&](std::ostream& os) { writeTrajectoryCsv(os, report); });
    if (!a.bestOut.empty() && report.bestArrangement) {
        writeModelFile(a.bestOut, Model{preprocess, threshold, *report.bestArrangement, cfg});
    }

    const auto rates = report.acceptanceRate.values();
    const double meanRate = std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
    out << "records " << data.size() << "\ndim " << data.dim() << "\nbits " << cfg.bits << "\nmean_acceptance_rate "
        << formatDouble(meanRate) << "\nmedian_final_logU " << formatDouble(median(report.finalLogU))
        << "\nmean_abs_cosine " << formatDouble(meanOffDiagonalCosine(result.arrangement)) << "\nmodel " << a.out
        << '\n';
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
    std::string model;
    std::string data;
    std::string out;
    unsigned threads = 0;
};

void runEncode(const EncodeArgs& a, std::ostream& out) {
    const Model model = readModelFile(a.model);
    const LabeledDataset data = modelInput(model, readDatasetCsv(a.data));
    const CodeTable table = encodeAll(model.arrangement, data, a.threads);
    writeCodeTable(a.out, table);
    out << "encoded " << table.size() << " records with " << table.bits() << " bits to " << a.out << '\n';
}

// ---------------------------------------------------------------------------

struct SearchArgs {
    std::string model;
    std::string data;
    std::string codes;
    std::string query;
    std::string metric = "hamming";
    std::size_t k = 10;
    std::string out;
};

void runSearch(const SearchArgs& a, std::ostream& out) {
    const Model model = readModelFile(a.model);
    const LabeledDataset queries = modelInput(model, readDatasetCsv(a.query));
    const bool hamming = a.metric == "hamming";

    std::optional<LabeledDataset> searched;
    std::optional<CodeTable> table;
    if (!a.data.empty()) searched = modelInput(model, readDatasetCsv(a.data));
    if (hamming) {
        if (!a.codes.empty()) {
            table = readCodeTable(a.codes);
            if (table->bits() != model.arrangement.bits()) throw DataError("code table length does not match the model");
        } else if (searched) {
            table = encodeAll(model.arrangement, *searched);
        } else {
            throw ConfigError("hamming search needs --codes or --data");
        }
    } else if (!searched) {
        throw ConfigError("l2 search needs --data");
    }

    withOutput(a.out, out, [&](std::ostream& os) {
        os << "query,rank,index,distance\n";
        for (std::size_t q = 0; q < queries.size(); ++q) {
            const auto x = queries.vector(q);
            if (hamming) {
                const BitCode code = encode(model.arrangement, x);
                const auto top = topKByHamming(*table, code, std::min(a.k, table->size()));
                for (std::size_t r = 0; r < top.size(); ++r) {
                    os << q << ',' << r << ',' << top[r] << ',' << hammingWords(table->words(top[r]), code.words())
                       << '\n';
                }
            } else {
                const auto top = topKByL2(*searched, x, std::min(a.k, searched->size()));
                for (std::size_t r = 0; r < top.size(); ++r) {
                    os << q << ',' << r << ',' << top[r] << ','
                       << formatDouble(std::sqrt(squaredDistance(searched->vector(top[r]), x))) << '\n';
                }
            }
        }
    });
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
    std::string model;
    std::string search;
    std::string queries;
    std::uint64_t seed = 0;
    std::string grid;
    std::string out;
    std::string scaled;
    unsigned threads = 0;
};

void runEvaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    const Model model = readModelFile(a.model);
    const LabeledDataset searched = modelInput(model, readDatasetCsv(a.search));
    const LabeledDataset queries = modelInput(model, readDatasetCsv(a.queries));
    const std::vector<double> grid = a.grid.empty() ? defaultAcquisitionGrid() : parseGrid(a.grid);

    const auto hammingCurve = [&](const HyperplaneArrangement& arrangement) {
        const CodeTable table = encodeAll(arrangement, searched, a.threads);
        std::vector<BitCode> codes;
        codes.reserve(queries.size());
        for (std::size_t q = 0; q < queries.size(); ++q) codes.push_back(encode(arrangement, queries.vector(q)));
        return recallPrecisionCurveHamming(table, searched, codes, queries, grid, a.threads);
    };

    const HyperplaneArrangement lsh = randomArrangement(model.arrangement.dim(), model.arrangement.bits(), RngSeed{a.seed});
    std::vector<std::pair<std::string, EvalCurve>> curves;
    curves.emplace_back("mlsh", hammingCurve(model.arrangement));
    curves.emplace_back("lsh", hammingCurve(lsh));
    curves.emplace_back("l2", recallPrecisionCurveL2(searched, queries, grid, a.threads));

    if (curves.front().second.excludedQueries > 0) {
        err << "note: " << curves.front().second.excludedQueries
            << " queries have no relevant searched record and were excluded\n";
    }
    withOutput(a.out, out, [&](std::ostream& os) { writeCurvesCsv(os, curves); });
    if (!a.scaled.empty()) {
        const auto& base = curves[2].second.points;
        std::vector<std::pair<std::string, std::vector<ScaledPoint>>> scaled;
        scaled.emplace_back("mlsh", scaledMetrics(curves[0].second.points, base));
        scaled.emplace_back("lsh", scaledMetrics(curves[1].second.points, base));
        withOutput(a.scaled, out, [&](std::ostream& os) { writeScaledCsv(os, scaled); });
    }
}

// ---------------------------------------------------------------------------

struct DiagnoseArgs {
    std::string model;
    std::string cosineOut;
    std::string histogramOut;
    std::size_t bins = 20;
    std::optional<std::uint64_t> baselineSeed;
};

void runDiagnose(const DiagnoseArgs& a, std::ostream& out) {
    const Model model = readModelFile(a.model);
    std::vector<std::pair<std::string, HyperplaneArrangement>> arrangements;
    arrangements.emplace_back("mlsh", model.arrangement);
    if (a.baselineSeed) {
        arrangements.emplace_back(
            "lsh", randomArrangement(model.arrangement.dim(), model.arrangement.bits(), RngSeed{*a.baselineSeed}));
    }

    if (!a.cosineOut.empty()) {
        withOutput(a.cosineOut, out, [&](std::ostream& os) { writeMatrixCsv(os, pairwiseCosineMatrix(model.arrangement)); });
    }
    if (!a.histogramOut.empty()) {
        withOutput(a.histogramOut, out, [&](std::ostream& os) {
            os << "method,component,bin_low,bin_high,count\n";
            for (const auto& [name, arrangement] : arrangements) {
                for (std::size_t c = 0; c < arrangement.dim(); ++c) {
                    const auto counts = componentHistogram(arrangement, c, a.bins);
                    for (std::size_t b = 0; b < counts.size(); ++b) {
                        const double width = 2.0 / static_cast<double>(a.bins);
                        os << name << ',' << c << ',' << formatDouble(-1.0 + width * static_cast<double>(b)) << ','
                           << formatDouble(-1.0 + width * static_cast<double>(b + 1)) << ',' << counts[b] << '\n';
                    }
                }
            }
        });
    }
    for (const auto& [name, arrangement] : arrangements) {
        out << name << "_mean_abs_cosine " << formatDouble(meanOffDiagonalCosine(arrangement)) << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learn hyperplane arrangements for locality-sensitive hashing by Metropolis-Hastings", "mlsh"};
    app.require_subcommand(1);

    std::function<void()> command;

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Write a synthetic labeled dataset as CSV");
    generate->add_option("--kind", gen.kind, "gaussian-sign or clusters")
        ->check(CLI::IsMember({"gaussian-sign", "clusters"}))
        ->capture_default_str();
    generate->add_option("--n", gen.n, "Records (gaussian-sign)")->capture_default_str();
    generate->add_option("--classes", gen.classes, "Clusters (clusters)")->capture_default_str();
    generate->add_option("--dim", gen.dim, "Dimension (clusters)")->capture_default_str();
    generate->add_option("--per-cluster", gen.perCluster, "Records per cluster")->capture_default_str();
    generate->add_option("--spread", gen.spread, "Cluster stddev")->capture_default_str();
    generate->add_option("--center-scale", gen.centerScale, "Stddev of cluster centers")->capture_default_str();
    generate->add_option("--seed", gen.seed, "Random seed")->required();
    generate->add_option("--out", gen.out, "Output CSV")->required();
    generate->callback([&] { command = [&] { runGenerate(gen, out); }; });

    PreprocessArgs pre;
    auto* preprocess = app.add_subcommand("preprocess", "Fit standardization + PCA and transform CSV files");
    preprocess->add_option("--train", pre.train, "Training CSV the statistics are fitted on")->required();
    preprocess->add_option("--threshold", pre.threshold, "Cumulative contribution to retain")->capture_default_str();
    preprocess->add_option("--apply", pre.apply, "CSV to transform (repeatable)");
    preprocess->add_option("--out", pre.outputs, "Destination for each --apply (repeatable)");
    preprocess->callback([&] { command = [&] { runPreprocess(pre, out); }; });

    TrainArgs tr;
    auto* trainCmd = app.add_subcommand("train", "Train a hyperplane arrangement and write a model file");
    trainCmd->add_option("--data", tr.data, "Training CSV")->required();
    trainCmd->add_option("--bits", tr.bits, "Number of hyperplanes B")->capture_default_str();
    trainCmd->add_option("--batches", tr.batches, "Batches (pair resamples)")->capture_default_str();
    trainCmd->add_option("--steps", tr.steps, "Metropolis-Hastings steps per batch")->capture_default_str();
    trainCmd->add_option("--pairs", tr.pairs, "Pairs per batch, split evenly positive/negative")->capture_default_str();
    trainCmd->add_option("--positive-pairs", tr.positivePairs, "Override the positive pair count");
    trainCmd->add_option("--negative-pairs", tr.negativePairs, "Override the negative pair count");
    trainCmd->add_option("--objective", tr.objective, "count, ratio, cosine or cosine_ratio")->capture_default_str();
    trainCmd->add_option("--temperature", tr.temperature, "Temperature T in U = exp(x/T)")->capture_default_str();
    trainCmd->add_option("--sampling", tr.sampling,
                         "randomhit-randommiss, randomhit-nearmiss, nearhit-nearmiss, farhit-nearmiss or "
                         "randomhit-boundarymiss")
        ->capture_default_str();
    trainCmd->add_option("--stddev", tr.stddev, "Proposal standard deviation")->capture_default_str();
    trainCmd->add_option("--seed", tr.seed, "Master random seed")->required();
    trainCmd->add_option("--threads", tr.threads, "Worker threads (0 = all cores)");
    trainCmd->add_flag("--per-hyperplane-pairs", tr.perHyperplanePairs, "Sample a separate pair set per hyperplane");
    trainCmd->add_flag("--track-best", tr.trackBest, "Also record the best-visited position of each hyperplane");
    trainCmd->add_option("--pca-threshold", tr.pcaThreshold, "PCA cumulative contribution")->capture_default_str();
    trainCmd->add_flag("--no-preprocess", tr.noPreprocess, "Train on raw features");
    trainCmd->add_option("--out", tr.out, "Model file")->required();
    trainCmd->add_option("--report", tr.report, "Per-batch acceptance CSV");
    trainCmd->add_option("--trajectory", tr.trajectory, "Per-step logU CSV");
    trainCmd->add_option("--best-out", tr.bestOut, "Model file with best-visited positions (implies --track-best)");
    trainCmd->callback([&] { command = [&] { runTrain(tr, out); }; });

    EncodeArgs enc;
    auto* encodeCmd = app.add_subcommand("encode", "Encode a CSV into a binary code table");
    encodeCmd->add_option("--model", enc.model, "Model file")->required();
    encodeCmd->add_option("--data", enc.data, "CSV to encode")->required();
    encodeCmd->add_option("--out", enc.out, "Code table file")->required();
    encodeCmd->add_option("--threads", enc.threads, "Worker threads (0 = all cores)");
    encodeCmd->callback([&] { command = [&] { runEncode(enc, out); }; });

    SearchArgs se;
    auto* searchCmd = app.add_subcommand("search", "Linear-scan k-nearest search");
    searchCmd->add_option("--model", se.model, "Model file")->required();
    searchCmd->add_option("--data", se.data, "Searched CSV");
    searchCmd->add_option("--codes", se.codes, "Precomputed code table of the searched set");
    searchCmd->add_option("--query", se.query, "Query CSV")->required();
    searchCmd->add_option("--metric", se.metric, "hamming or l2")
        ->check(CLI::IsMember({"hamming", "l2"}))
        ->capture_default_str();
    searchCmd->add_option("--k", se.k, "Results per query")->check(CLI::PositiveNumber)->capture_default_str();
    searchCmd->add_option("--out", se.out, "Result CSV (default stdout)");
    searchCmd->callback([&] { command = [&] { runSearch(se, out); }; });

    EvaluateArgs ev;
    auto* evaluateCmd = app.add_subcommand("evaluate", "Recall-precision curves for mlsh, lsh and l2");
    evaluateCmd->add_option("--model", ev.model, "Model file")->required();
    evaluateCmd->add_option("--search", ev.search, "Searched CSV")->required();
    evaluateCmd->add_option("--queries", ev.queries, "Query CSV")->required();
    evaluateCmd->add_option("--seed", ev.seed, "Seed of the random LSH baseline")->required();
    evaluateCmd->add_option("--grid", ev.grid, "Comma-separated acquisition rates");
    evaluateCmd->add_option("--out", ev.out, "Curve CSV (default stdout)");
    evaluateCmd->add_option("--scaled", ev.scaled, "CSV of precision/recall relative to l2");
    evaluateCmd->add_option("--threads", ev.threads, "Worker threads (0 = all cores)");
    evaluateCmd->callback([&] { command = [&] { runEvaluate(ev, out, err); }; });

    DiagnoseArgs di;
    auto* diagnoseCmd = app.add_subcommand("diagnose", "Cosine matrix and component histograms of a model");
    diagnoseCmd->add_option("--model", di.model, "Model file")->required();
    diagnoseCmd->add_option("--cosine-out", di.cosineOut, "B x B |cos| matrix CSV");
    diagnoseCmd->add_option("--histogram-out", di.histogramOut, "Component histogram CSV");
    diagnoseCmd->add_option("--bins", di.bins, "Histogram bins on [-1, 1]")->check(CLI::PositiveNumber)->capture_default_str();
    diagnoseCmd->add_option("--baseline-seed", di.baselineSeed, "Add a random LSH arrangement with this seed");
    diagnoseCmd->callback([&] { command = [&] { runDiagnose(di, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (command) command();
        return kSuccess;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
}

}  // namespace mlsh::cli

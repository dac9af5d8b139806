#include "cbos/harness.hpp"

#include "cbos/baselines.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cbos {

using nlohmann::json;

ReportFormat report_format_from_string(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    if (s == "table") return ReportFormat::table;
    throw std::invalid_argument("unknown report format: '" + s + "' (expected json|csv|table)");
}

Dataset apply_method(const Dataset& train, const MethodSpec& method, std::uint64_t seed) {
    if (method.name == "none") return train;
    if (method.name == "random") return random_oversample(train, method.eta, seed);
    if (method.name == "smote") return smote(train, method.k_neighbors, method.eta, seed);
    if (method.name == "smote-enn")
        return smote_enn(train, method.k_neighbors, method.eta, method.enn_k, seed);
    if (method.name == "adasyn") return adasyn(train, method.k_neighbors, method.eta, seed);
    if (method.name == "cbos") {
        ResampleConfig cfg;
        cfg.eta = method.eta;
        cfg.clusters = method.clusters;
        cfg.random_lo = method.random_lo;
        cfg.random_hi = method.random_hi;
        cfg.weight_mode = method.weight_mode;
        cfg.noise_mode = method.noise_mode;
        cfg.seed = seed;
        cfg.kmeans_max_iters = method.kmeans_max_iters;
        cfg.kmeans_tol = method.kmeans_tol;
        return cbos_resample(train, cfg);
    }
    throw std::invalid_argument("unknown method: '" + method.name +
                                "' (expected none|random|smote|smote-enn|adasyn|cbos)");
}

namespace {

std::vector<MethodSpec> with_baseline(std::vector<MethodSpec> methods) {
    const bool has_none = std::any_of(methods.begin(), methods.end(),
                                      [](const MethodSpec& m) { return m.name == "none"; });
    if (!has_none) methods.insert(methods.begin(), MethodSpec{});
    return methods;
}

void check_experiment_config(const ExperimentConfig& cfg) {
    if (cfg.data.csv.has_value() == cfg.data.blobs.has_value())
        throw std::invalid_argument("experiment config: exactly one data source (csv or blobs) "
                                    "must be set");
    if (cfg.runs < 1) throw std::invalid_argument("experiment config: runs must be >= 1");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0))
        throw std::invalid_argument("experiment config: test_fraction must be in (0, 1)");
    if (cfg.classifier.epochs < 0)
        throw std::invalid_argument("experiment config: classifier epochs must be >= 0");
    if (!(cfg.classifier.learning_rate > 0.0))
        throw std::invalid_argument("experiment config: learning rate must be positive");
    if (!(cfg.classifier.beta > 0.0))
        throw std::invalid_argument("experiment config: beta must be positive");
}

template <typename Fn>
auto annotated(int run, const std::string& method, Fn&& fn) {
    const std::string where = "run " + std::to_string(run) + ", method " + method + ": ";
    try {
        return fn();
    } catch (const DataError& e) {
        throw DataError(where + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(where + e.what());
    }
}

MetricSummary summarize_mean(const std::vector<RunRecord>& runs) {
    MetricSummary s;
    for (const RunRecord& r : runs) {
        s.precision += r.metrics.precision;
        s.recall += r.metrics.recall;
        s.accuracy += r.metrics.accuracy;
        s.f_score += r.metrics.f_score;
        s.g_mean += r.metrics.g_mean;
    }
    const double n = static_cast<double>(runs.size());
    s.precision /= n;
    s.recall /= n;
    s.accuracy /= n;
    s.f_score /= n;
    s.g_mean /= n;
    return s;
}

MetricSummary summarize_std(const std::vector<RunRecord>& runs, const MetricSummary& mean) {
    MetricSummary s;
    if (runs.size() < 2) return s;
    for (const RunRecord& r : runs) {
        s.precision += (r.metrics.precision - mean.precision) * (r.metrics.precision - mean.precision);
        s.recall += (r.metrics.recall - mean.recall) * (r.metrics.recall - mean.recall);
        s.accuracy += (r.metrics.accuracy - mean.accuracy) * (r.metrics.accuracy - mean.accuracy);
        s.f_score += (r.metrics.f_score - mean.f_score) * (r.metrics.f_score - mean.f_score);
        s.g_mean += (r.metrics.g_mean - mean.g_mean) * (r.metrics.g_mean - mean.g_mean);
    }
    const double n1 = static_cast<double>(runs.size() - 1);
    s.precision = std::sqrt(s.precision / n1);
    s.recall = std::sqrt(s.recall / n1);
    s.accuracy = std::sqrt(s.accuracy / n1);
    s.f_score = std::sqrt(s.f_score / n1);
    s.g_mean = std::sqrt(s.g_mean / n1);
    return s;
}

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    check_experiment_config(cfg);
    const std::vector<MethodSpec> methods = with_baseline(cfg.methods);

    ExperimentReport report;
    report.config = cfg;
    report.config.methods = methods;
    report.methods.resize(methods.size());
    for (std::size_t m = 0; m < methods.size(); ++m) report.methods[m].name = methods[m].name;

    // A CSV source is identical across runs; load it once.
    std::optional<Dataset> csv_data;
    if (cfg.data.csv)
        csv_data = load_csv(cfg.data.csv->path, cfg.data.csv->label_column,
                            cfg.data.csv->minority_label);

    for (int run = 0; run < cfg.runs; ++run) {
        const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(run);
        report.seeds.push_back(seed);

        Dataset data = csv_data ? *csv_data
                                : make_blobs(cfg.data.blobs->n_majority, cfg.data.blobs->n_minority,
                                             cfg.data.blobs->dims, cfg.data.blobs->minority_clusters,
                                             cfg.data.blobs->spread, seed);
        if (cfg.induced_rate) data = induce_imbalance(data, *cfg.induced_rate, seed);

        const SplitResult split = stratified_split(data, cfg.test_fraction, seed);
        const ImbalanceProfile train_prof = profile(split.train);

        long test_majority = 0;
        for (const std::string& label : split.test.labels)
            test_majority += label == train_prof.majority_label ? 1 : 0;
        const double trivial_accuracy =
            static_cast<double>(test_majority) / static_cast<double>(split.test.rows());

        for (std::size_t m = 0; m < methods.size(); ++m) {
            RunRecord rec;
            rec.seed = seed;
            rec.train_before = train_prof;
            rec.trivial_accuracy = trivial_accuracy;

            const Dataset resampled = annotated(run, methods[m].name, [&] {
                return apply_method(split.train, methods[m], seed);
            });
            rec.train_after = profile(resampled);

            const LinearModel model = annotated(run, methods[m].name, [&] {
                return train_linear(resampled, cfg.classifier.epochs,
                                    cfg.classifier.learning_rate, seed,
                                    train_prof.minority_label);
            });
            const std::vector<std::string> predicted = predict_labels(model, split.test);
            const ConfusionMatrix cm =
                confusion(predicted, split.test.labels, train_prof.minority_label);
            rec.metrics = metrics(cm, cfg.classifier.beta);

            report.methods[m].runs.push_back(std::move(rec));
        }
    }

    for (MethodReport& mr : report.methods) {
        mr.mean = summarize_mean(mr.runs);
        mr.std_dev = summarize_std(mr.runs, mr.mean);
    }
    return report;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    if (format == ReportFormat::json) {
        json j = report;
        return j.dump(2) + "\n";
    }

    if (format == ReportFormat::csv) {
        std::ostringstream out;
        out << "method,metric,mean,std\n";
        for (const MethodReport& m : report.methods) {
            const std::pair<const char*, std::pair<double, double>> rows[] = {
                {"precision", {m.mean.precision, m.std_dev.precision}},
                {"recall", {m.mean.recall, m.std_dev.recall}},
                {"accuracy", {m.mean.accuracy, m.std_dev.accuracy}},
                {"f_score", {m.mean.f_score, m.std_dev.f_score}},
                {"g_mean", {m.mean.g_mean, m.std_dev.g_mean}},
            };
            for (const auto& [metric, values] : rows)
                out << m.name << ',' << metric << ',' << shortest(values.first) << ','
                    << shortest(values.second) << '\n';
        }
        return out.str();
    }

    // Aligned grid of per-method means, one method per row.
    std::size_t name_width = std::string("Method").size();
    for (const MethodReport& m : report.methods) name_width = std::max(name_width, m.name.size());

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width) + 2) << "Method" << std::right
        << std::setw(10) << "Precision" << std::setw(10) << "Recall" << std::setw(10)
        << "Accuracy" << std::setw(10) << "F-score" << std::setw(10) << "G-Mean" << '\n';
    out << std::fixed << std::setprecision(3);
    for (const MethodReport& m : report.methods) {
        out << std::left << std::setw(static_cast<int>(name_width) + 2) << m.name << std::right
            << std::setw(10) << m.mean.precision << std::setw(10) << m.mean.recall
            << std::setw(10) << m.mean.accuracy << std::setw(10) << m.mean.f_score
            << std::setw(10) << m.mean.g_mean << '\n';
    }
    if (!report.methods.empty() && !report.methods.front().runs.empty()) {
        double trivial = 0.0;
        for (const RunRecord& r : report.methods.front().runs) trivial += r.trivial_accuracy;
        trivial /= static_cast<double>(report.methods.front().runs.size());
        out << "(all-majority accuracy floor: " << trivial << ", averaged over "
            << report.methods.front().runs.size() << " run(s))\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// JSON bindings

void to_json(json& j, const CsvSpec& v) {
    j = json{{"type", "csv"},
             {"path", v.path},
             {"label_column", v.label_column},
             {"minority_label", v.minority_label}};
}

void from_json(const json& j, CsvSpec& v) {
    j.at("path").get_to(v.path);
    j.at("label_column").get_to(v.label_column);
    v.minority_label = j.value("minority_label", std::string("auto"));
}

void to_json(json& j, const BlobSpec& v) {
    j = json{{"type", "blobs"},
             {"n_majority", v.n_majority},
             {"n_minority", v.n_minority},
             {"dims", v.dims},
             {"minority_clusters", v.minority_clusters},
             {"spread", v.spread}};
}

void from_json(const json& j, BlobSpec& v) {
    j.at("n_majority").get_to(v.n_majority);
    j.at("n_minority").get_to(v.n_minority);
    j.at("dims").get_to(v.dims);
    j.at("minority_clusters").get_to(v.minority_clusters);
    j.at("spread").get_to(v.spread);
}

void to_json(json& j, const DataSource& v) {
    if (v.csv) {
        j = *v.csv;
    } else if (v.blobs) {
        j = *v.blobs;
    } else {
        j = nullptr;
    }
}

void from_json(const json& j, DataSource& v) {
    v.csv.reset();
    v.blobs.reset();
    const std::string type = j.at("type").get<std::string>();
    if (type == "csv") {
        v.csv = j.get<CsvSpec>();
    } else if (type == "blobs") {
        v.blobs = j.get<BlobSpec>();
    } else {
        throw std::invalid_argument("data source type must be 'csv' or 'blobs', got '" + type +
                                    "'");
    }
}

void to_json(json& j, const ClassifierConfig& v) {
    j = json{{"epochs", v.epochs}, {"learning_rate", v.learning_rate}, {"beta", v.beta}};
}

void from_json(const json& j, ClassifierConfig& v) {
    ClassifierConfig defaults;
    v.epochs = j.value("epochs", defaults.epochs);
    v.learning_rate = j.value("learning_rate", defaults.learning_rate);
    v.beta = j.value("beta", defaults.beta);
}

void to_json(json& j, const MethodSpec& v) {
    j = json{{"name", v.name},
             {"eta", v.eta},
             {"k_neighbors", v.k_neighbors},
             {"enn_k", v.enn_k},
             {"clusters", v.clusters},
             {"random_lo", v.random_lo},
             {"random_hi", v.random_hi},
             {"weight_mode", to_string(v.weight_mode)},
             {"noise_mode", to_string(v.noise_mode)},
             {"kmeans_max_iters", v.kmeans_max_iters},
             {"kmeans_tol", v.kmeans_tol}};
}

void from_json(const json& j, MethodSpec& v) {
    MethodSpec defaults;
    j.at("name").get_to(v.name);
    v.eta = j.value("eta", defaults.eta);
    v.k_neighbors = j.value("k_neighbors", defaults.k_neighbors);
    v.enn_k = j.value("enn_k", defaults.enn_k);
    v.clusters = j.value("clusters", defaults.clusters);
    v.random_lo = j.value("random_lo", defaults.random_lo);
    v.random_hi = j.value("random_hi", defaults.random_hi);
    v.weight_mode = weight_mode_from_string(j.value("weight_mode", std::string("direct")));
    v.noise_mode = noise_mode_from_string(j.value("noise_mode", std::string("per_feature")));
    v.kmeans_max_iters = j.value("kmeans_max_iters", defaults.kmeans_max_iters);
    v.kmeans_tol = j.value("kmeans_tol", defaults.kmeans_tol);
}

void to_json(json& j, const ExperimentConfig& v) {
    j = json{{"data", v.data},
             {"test_fraction", v.test_fraction},
             {"methods", v.methods},
             {"runs", v.runs},
             {"base_seed", v.base_seed},
             {"classifier", v.classifier}};
    if (v.induced_rate) j["induced_rate"] = *v.induced_rate;
}

void from_json(const json& j, ExperimentConfig& v) {
    ExperimentConfig defaults;
    j.at("data").get_to(v.data);
    if (j.contains("induced_rate") && !j.at("induced_rate").is_null())
        v.induced_rate = j.at("induced_rate").get<double>();
    else
        v.induced_rate.reset();
    v.test_fraction = j.value("test_fraction", defaults.test_fraction);
    v.methods = j.value("methods", std::vector<MethodSpec>{});
    v.runs = j.value("runs", defaults.runs);
    v.base_seed = j.value("base_seed", defaults.base_seed);
    v.classifier = j.value("classifier", ClassifierConfig{});
}

void to_json(json& j, const ImbalanceProfile& v) {
    j = json{{"minority_label", v.minority_label},
             {"majority_label", v.majority_label},
             {"k_minority", v.k_minority},
             {"k_majority", v.k_majority},
             {"imbalance_rate", v.imbalance_rate}};
}

void from_json(const json& j, ImbalanceProfile& v) {
    j.at("minority_label").get_to(v.minority_label);
    j.at("majority_label").get_to(v.majority_label);
    j.at("k_minority").get_to(v.k_minority);
    j.at("k_majority").get_to(v.k_majority);
    j.at("imbalance_rate").get_to(v.imbalance_rate);
}

void to_json(json& j, const MetricsReport& v) {
    j = json{{"precision", v.precision}, {"recall", v.recall}, {"accuracy", v.accuracy},
             {"f_score", v.f_score},     {"g_mean", v.g_mean}, {"beta", v.beta}};
}

void from_json(const json& j, MetricsReport& v) {
    j.at("precision").get_to(v.precision);
    j.at("recall").get_to(v.recall);
    j.at("accuracy").get_to(v.accuracy);
    j.at("f_score").get_to(v.f_score);
    j.at("g_mean").get_to(v.g_mean);
    j.at("beta").get_to(v.beta);
}

void to_json(json& j, const MetricSummary& v) {
    j = json{{"precision", v.precision},
             {"recall", v.recall},
             {"accuracy", v.accuracy},
             {"f_score", v.f_score},
             {"g_mean", v.g_mean}};
}

void from_json(const json& j, MetricSummary& v) {
    j.at("precision").get_to(v.precision);
    j.at("recall").get_to(v.recall);
    j.at("accuracy").get_to(v.accuracy);
    j.at("f_score").get_to(v.f_score);
    j.at("g_mean").get_to(v.g_mean);
}

void to_json(json& j, const RunRecord& v) {
    j = json{{"seed", v.seed},
             {"metrics", v.metrics},
             {"train_before", v.train_before},
             {"train_after", v.train_after},
             {"trivial_accuracy", v.trivial_accuracy}};
}

void from_json(const json& j, RunRecord& v) {
    j.at("seed").get_to(v.seed);
    j.at("metrics").get_to(v.metrics);
    j.at("train_before").get_to(v.train_before);
    j.at("train_after").get_to(v.train_after);
    j.at("trivial_accuracy").get_to(v.trivial_accuracy);
}

void to_json(json& j, const MethodReport& v) {
    j = json{{"name", v.name}, {"mean", v.mean}, {"std", v.std_dev}, {"runs", v.runs}};
}

void from_json(const json& j, MethodReport& v) {
    j.at("name").get_to(v.name);
    j.at("mean").get_to(v.mean);
    j.at("std").get_to(v.std_dev);
    j.at("runs").get_to(v.runs);
}

void to_json(json& j, const ExperimentReport& v) {
    j = json{{"config", v.config}, {"seeds", v.seeds}, {"methods", v.methods}};
}

void from_json(const json& j, ExperimentReport& v) {
    j.at("config").get_to(v.config);
    j.at("seeds").get_to(v.seeds);
    j.at("methods").get_to(v.methods);
}

// ---------------------------------------------------------------------------
// Equality (exact field comparison; doubles round-trip JSON losslessly)

bool operator==(const CsvSpec& a, const CsvSpec& b) {
    return a.path == b.path && a.label_column == b.label_column &&
           a.minority_label == b.minority_label;
}

bool operator==(const BlobSpec& a, const BlobSpec& b) {
    return a.n_majority == b.n_majority && a.n_minority == b.n_minority && a.dims == b.dims &&
           a.minority_clusters == b.minority_clusters && a.spread == b.spread;
}

bool operator==(const DataSource& a, const DataSource& b) {
    return a.csv == b.csv && a.blobs == b.blobs;
}

bool operator==(const ClassifierConfig& a, const ClassifierConfig& b) {
    return a.epochs == b.epochs && a.learning_rate == b.learning_rate && a.beta == b.beta;
}

bool operator==(const MethodSpec& a, const MethodSpec& b) {
    return a.name == b.name && a.eta == b.eta && a.k_neighbors == b.k_neighbors &&
           a.enn_k == b.enn_k && a.clusters == b.clusters && a.random_lo == b.random_lo &&
           a.random_hi == b.random_hi && a.weight_mode == b.weight_mode &&
           a.noise_mode == b.noise_mode && a.kmeans_max_iters == b.kmeans_max_iters &&
           a.kmeans_tol == b.kmeans_tol;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.data == b.data && a.induced_rate == b.induced_rate &&
           a.test_fraction == b.test_fraction && a.methods == b.methods && a.runs == b.runs &&
           a.base_seed == b.base_seed && a.classifier == b.classifier;
}

bool operator==(const ImbalanceProfile& a, const ImbalanceProfile& b) {
    return a.minority_label == b.minority_label && a.majority_label == b.majority_label &&
           a.k_minority == b.k_minority && a.k_majority == b.k_majority &&
           a.imbalance_rate == b.imbalance_rate;
}

bool operator==(const MetricsReport& a, const MetricsReport& b) {
    return a.precision == b.precision && a.recall == b.recall && a.accuracy == b.accuracy &&
           a.f_score == b.f_score && a.g_mean == b.g_mean && a.beta == b.beta;
}

bool operator==(const MetricSummary& a, const MetricSummary& b) {
    return a.precision == b.precision && a.recall == b.recall && a.accuracy == b.accuracy &&
           a.f_score == b.f_score && a.g_mean == b.g_mean;
}

bool operator==(const RunRecord& a, const RunRecord& b) {
    return a.seed == b.seed && a.metrics == b.metrics && a.train_before == b.train_before &&
           a.train_after == b.train_after && a.trivial_accuracy == b.trivial_accuracy;
}

bool operator==(const MethodReport& a, const MethodReport& b) {
    return a.name == b.name && a.mean == b.mean && a.std_dev == b.std_dev && a.runs == b.runs;
}

bool operator==(const ExperimentReport& a, const ExperimentReport& b) {
    return a.config == b.config && a.seeds == b.seeds && a.methods == b.methods;
}

}  // namespace cbos

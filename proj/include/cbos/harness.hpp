#pragma once

#include "cbos/cbos.hpp"
#include "cbos/evaluation.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cbos {

struct CsvSpec {
    std::string path;
    std::string label_column;
    std::string minority_label = "auto";
};

struct BlobSpec {
    Index n_majority = 0;
    Index n_minority = 0;
    Index dims = 2;
    Index minority_clusters = 1;
    double spread = 1.0;
};

/// Exactly one of csv / blobs is set.
struct DataSource {
    std::optional<CsvSpec> csv;
    std::optional<BlobSpec> blobs;
};

struct ClassifierConfig {
    int epochs = 300;
    double learning_rate = 0.5;
    double beta = 1.0;
};

/// One resampler invocation: the name picks the algorithm, the knobs that do
/// not apply to it are ignored.
struct MethodSpec {
    std::string name = "none";  // none | random | smote | smote-enn | adasyn | cbos
    double eta = 1.0;
    int k_neighbors = 5;
    int enn_k = 3;
    Index clusters = 0;  // 0 = auto
    double random_lo = 0.0;
    double random_hi = 1.0;
    WeightMode weight_mode = WeightMode::direct;
    NoiseMode noise_mode = NoiseMode::per_feature;
    int kmeans_max_iters = kDefaultKmeansMaxIters;
    double kmeans_tol = kDefaultKmeansTol;
};

struct ExperimentConfig {
    DataSource data;
    std::optional<double> induced_rate;  // applied before the split when set
    double test_fraction = 0.3;
    std::vector<MethodSpec> methods;  // "none" is prepended when absent
    int runs = 10;
    std::uint64_t base_seed = 0;
    ClassifierConfig classifier;
};

struct RunRecord {
    std::uint64_t seed = 0;
    MetricsReport metrics;
    ImbalanceProfile train_before;  // post-induction training profile
    ImbalanceProfile train_after;   // profile of the resampled training set
    double trivial_accuracy = 0.0;  // all-majority predictor on the test set
};

struct MetricSummary {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f_score = 0.0;
    double g_mean = 0.0;
};

struct MethodReport {
    std::string name;
    MetricSummary mean;
    MetricSummary std_dev;  // sample standard deviation; 0 for a single run
    std::vector<RunRecord> runs;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<std::uint64_t> seeds;
    std::vector<MethodReport> methods;
};

enum class ReportFormat { json, csv, table };
ReportFormat report_format_from_string(const std::string& s);

/// Dispatches one resampler by name. "none" returns the input unchanged.
Dataset apply_method(const Dataset& train, const MethodSpec& method, std::uint64_t seed);

/// The full protocol, once per run r with seed base_seed + r: load or
/// generate data, optionally induce imbalance, split, resample the training
/// side only, train, evaluate on the untouched test side, then aggregate
/// per-method means and standard deviations. Deterministic end to end.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// json = the full structure; csv = one "method,metric,mean,std" row per
/// method and metric; table = an aligned grid of per-method metric means.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

// JSON bindings (nlohmann ADL). The config file format mirrors
// ExperimentConfig field for field.
void to_json(nlohmann::json& j, const CsvSpec& v);
void from_json(const nlohmann::json& j, CsvSpec& v);
void to_json(nlohmann::json& j, const BlobSpec& v);
void from_json(const nlohmann::json& j, BlobSpec& v);
void to_json(nlohmann::json& j, const DataSource& v);
void from_json(const nlohmann::json& j, DataSource& v);
void to_json(nlohmann::json& j, const ClassifierConfig& v);
void from_json(const nlohmann::json& j, ClassifierConfig& v);
void to_json(nlohmann::json& j, const MethodSpec& v);
void from_json(const nlohmann::json& j, MethodSpec& v);
void to_json(nlohmann::json& j, const ExperimentConfig& v);
void from_json(const nlohmann::json& j, ExperimentConfig& v);
void to_json(nlohmann::json& j, const ImbalanceProfile& v);
void from_json(const nlohmann::json& j, ImbalanceProfile& v);
void to_json(nlohmann::json& j, const MetricsReport& v);
void from_json(const nlohmann::json& j, MetricsReport& v);
void to_json(nlohmann::json& j, const MetricSummary& v);
void from_json(const nlohmann::json& j, MetricSummary& v);
void to_json(nlohmann::json& j, const RunRecord& v);
void from_json(const nlohmann::json& j, RunRecord& v);
void to_json(nlohmann::json& j, const MethodReport& v);
void from_json(const nlohmann::json& j, MethodReport& v);
void to_json(nlohmann::json& j, const ExperimentReport& v);
void from_json(const nlohmann::json& j, ExperimentReport& v);

bool operator==(const CsvSpec& a, const CsvSpec& b);
bool operator==(const BlobSpec& a, const BlobSpec& b);
bool operator==(const DataSource& a, const DataSource& b);
bool operator==(const ClassifierConfig& a, const ClassifierConfig& b);
bool operator==(const MethodSpec& a, const MethodSpec& b);
bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
bool operator==(const ImbalanceProfile& a, const ImbalanceProfile& b);
bool operator==(const MetricsReport& a, const MetricsReport& b);
bool operator==(const MetricSummary& a, const MetricSummary& b);
bool operator==(const RunRecord& a, const RunRecord& b);
bool operator==(const MethodReport& a, const MethodReport& b);
bool operator==(const ExperimentReport& a, const ExperimentReport& b);

}  // namespace cbos

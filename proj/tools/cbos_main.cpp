#include "cbos/baselines.hpp"
#include "cbos/harness.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct ResampleOptions {
    std::string input;
    std::string label_col;
    std::string minority_label = "auto";
    std::string method = "cbos";
    std::string output;
    std::uint64_t seed = 0;
    cbos::MethodSpec knobs;
    std::string weight_mode = "direct";
    std::string noise_mode = "per_feature";
};

struct InduceOptions {
    std::string input;
    std::string label_col;
    double rate = 0.1;
    std::uint64_t seed = 0;
    std::string output;
};

struct EvalOptions {
    std::string train;
    std::string test;
    std::string label_col;
    int epochs = 300;
    double lr = 0.5;
    double beta = 1.0;
};

struct BenchOptions {
    std::string config_path;
    std::string input;
    std::string label_col;
    std::string minority_label = "auto";
    std::vector<double> blobs;  // n_majority,n_minority,dims,minority_clusters,spread
    std::vector<std::string> methods = {"none", "cbos"};
    double induce_rate = -1.0;  // < 0 = no induction
    double test_fraction = 0.3;
    int runs = 10;
    std::uint64_t seed = 0;
    int epochs = 300;
    double lr = 0.5;
    double beta = 1.0;
    cbos::MethodSpec knobs;
    std::string weight_mode = "direct";
    std::string noise_mode = "per_feature";
    std::string format = "table";
    std::string out;
    bool runs_given = false;  // explicit --runs/--seed override a config file
    bool seed_given = false;
};

void add_method_knobs(CLI::App* cmd, cbos::MethodSpec& knobs, std::string& weight_mode,
                      std::string& noise_mode) {
    cmd->add_option("--eta", knobs.eta,
                    "Fraction of the majority-minority gap to fill, in (0, 1]")
        ->capture_default_str();
    cmd->add_option("--clusters", knobs.clusters,
                    "k-means cluster count for cbos; 0 = max(1, round(sqrt(K_l/2)))")
        ->capture_default_str();
    cmd->add_option("--random-lo", knobs.random_lo, "Lower bound of the cbos noise magnitude")
        ->capture_default_str();
    cmd->add_option("--random-hi", knobs.random_hi, "Upper bound of the cbos noise magnitude")
        ->capture_default_str();
    cmd->add_option("--weight-mode", weight_mode,
                    "cbos allocation: direct = more synthetics for samples far from their "
                    "centroid, inverse = more for near ones")
        ->check(CLI::IsMember({"direct", "inverse"}))
        ->capture_default_str();
    cmd->add_option("--noise-mode", noise_mode,
                    "cbos noise draws: per_feature or per_sample")
        ->check(CLI::IsMember({"per_feature", "per_sample"}))
        ->capture_default_str();
    cmd->add_option("--k-neighbors", knobs.k_neighbors, "Neighbor count for smote/adasyn")
        ->capture_default_str();
    cmd->add_option("--enn-k", knobs.enn_k, "Neighbor count for the ENN cleaning vote (odd)")
        ->capture_default_str();
    cmd->add_option("--kmeans-iters", knobs.kmeans_max_iters, "k-means iteration cap")
        ->capture_default_str();
    cmd->add_option("--kmeans-tol", knobs.kmeans_tol, "k-means centroid movement tolerance")
        ->capture_default_str();
}

cbos::MethodSpec finalize_knobs(const cbos::MethodSpec& knobs, const std::string& name,
                                const std::string& weight_mode, const std::string& noise_mode) {
    cbos::MethodSpec m = knobs;
    m.name = name;
    m.weight_mode = cbos::weight_mode_from_string(weight_mode);
    m.noise_mode = cbos::noise_mode_from_string(noise_mode);
    return m;
}

int run_resample(const ResampleOptions& opt) {
    const cbos::Dataset input = cbos::load_csv(opt.input, opt.label_col, opt.minority_label);
    const cbos::MethodSpec spec =
        finalize_knobs(opt.knobs, opt.method, opt.weight_mode, opt.noise_mode);
    const cbos::Dataset output = cbos::apply_method(input, spec, opt.seed);
    cbos::save_csv(output, opt.output);
    std::cout << opt.method << ": " << input.rows() << " rows -> " << output.rows()
              << " rows, written to " << opt.output << "\n";
    return 0;
}

int run_induce(const InduceOptions& opt) {
    const cbos::Dataset input = cbos::load_csv(opt.input, opt.label_col);
    const cbos::Dataset output = cbos::induce_imbalance(input, opt.rate, opt.seed);
    cbos::save_csv(output, opt.output);
    const cbos::ImbalanceProfile p = cbos::profile(output);
    std::cout << "induced imbalance rate " << p.imbalance_rate << " (" << p.k_minority << "/"
              << p.k_minority + p.k_majority << "), written to " << opt.output << "\n";
    return 0;
}

int run_eval(const EvalOptions& opt) {
    const cbos::Dataset train = cbos::load_csv(opt.train, opt.label_col);
    const cbos::Dataset test = cbos::load_csv(opt.test, opt.label_col);
    const cbos::ImbalanceProfile prof = cbos::profile(train);

    const cbos::LinearModel model =
        cbos::train_linear(train, opt.epochs, opt.lr, 0, prof.minority_label);
    const std::vector<std::string> predicted = cbos::predict_labels(model, test);
    const cbos::ConfusionMatrix cm =
        cbos::confusion(predicted, test.labels, prof.minority_label);
    const cbos::MetricsReport m = cbos::metrics(cm, opt.beta);

    std::cout << "train: " << train.rows() << " rows, minority '" << prof.minority_label
              << "' (" << prof.k_minority << "), majority '" << prof.majority_label << "' ("
              << prof.k_majority << "), rate " << prof.imbalance_rate << "\n";
    std::cout << "test:  " << test.rows() << " rows\n";
    std::cout << "confusion: tp=" << cm.tp << " fp=" << cm.fp << " tn=" << cm.tn
              << " fn=" << cm.fn << "\n";
    std::cout << "precision=" << m.precision << " recall=" << m.recall
              << " accuracy=" << m.accuracy << " f_score(beta=" << m.beta << ")=" << m.f_score
              << " g_mean=" << m.g_mean << "\n";
    return 0;
}

int run_bench(const BenchOptions& opt) {
    cbos::ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw cbos::DataError("cannot open config file: " + opt.config_path);
        nlohmann::json j;
        in >> j;
        cfg = j.get<cbos::ExperimentConfig>();
        if (opt.runs_given) cfg.runs = opt.runs;
        if (opt.seed_given) cfg.base_seed = opt.seed;
    } else {
        if (!opt.blobs.empty()) {
            if (opt.blobs.size() != 5)
                throw std::invalid_argument(
                    "--blobs expects 5 values: n_majority,n_minority,dims,minority_clusters,"
                    "spread");
            cbos::BlobSpec b;
            b.n_majority = static_cast<cbos::Index>(opt.blobs[0]);
            b.n_minority = static_cast<cbos::Index>(opt.blobs[1]);
            b.dims = static_cast<cbos::Index>(opt.blobs[2]);
            b.minority_clusters = static_cast<cbos::Index>(opt.blobs[3]);
            b.spread = opt.blobs[4];
            cfg.data.blobs = b;
        } else if (!opt.input.empty()) {
            if (opt.label_col.empty())
                throw std::invalid_argument("--input requires --label-col");
            cfg.data.csv = cbos::CsvSpec{opt.input, opt.label_col, opt.minority_label};
        } else {
            throw std::invalid_argument("bench needs --config, --blobs, or --input");
        }
        if (opt.induce_rate >= 0.0) cfg.induced_rate = opt.induce_rate;
        cfg.test_fraction = opt.test_fraction;
        cfg.runs = opt.runs;
        cfg.base_seed = opt.seed;
        cfg.classifier = {opt.epochs, opt.lr, opt.beta};
        for (const std::string& name : opt.methods)
            cfg.methods.push_back(
                finalize_knobs(opt.knobs, name, opt.weight_mode, opt.noise_mode));
    }

    const cbos::ExperimentReport report = cbos::run_experiment(cfg);
    std::cout << cbos::emit_report(report, cbos::report_format_from_string(opt.format));
    if (!opt.out.empty()) {
        std::ofstream out(opt.out);
        if (!out) throw cbos::DataError("cannot open report file for writing: " + opt.out);
        out << cbos::emit_report(report, cbos::ReportFormat::json);
        if (!out) throw cbos::DataError("write failed: " + opt.out);
        std::cout << "report written to " << opt.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Class-imbalance resampling toolkit: clustering-based oversampling (cbos), the "
        "random/smote/smote-enn/adasyn baselines, a logistic classifier, and a seeded "
        "benchmark harness.\nImbalance rate means minority / (minority + majority) "
        "throughout; exact ties declare the lexicographically smaller label the minority."};
    app.require_subcommand(1);

    ResampleOptions rs;
    auto* resample = app.add_subcommand(
        "resample", "Oversample a CSV's minority class and write the extended CSV");
    resample->add_option("--input", rs.input, "Input CSV with a header row")->required();
    resample->add_option("--label-col", rs.label_col, "Name of the label column")->required();
    resample->add_option("--minority-label", rs.minority_label,
                         "Minority class label; 'auto' = the less frequent class")
        ->capture_default_str();
    resample
        ->add_option("--method", rs.method, "Resampling method")
        ->check(CLI::IsMember({"none", "random", "smote", "smote-enn", "adasyn", "cbos"}))
        ->capture_default_str();
    resample->add_option("--seed", rs.seed, "Random seed")->capture_default_str();
    resample->add_option("--output", rs.output, "Output CSV path")->required();
    add_method_knobs(resample, rs.knobs, rs.weight_mode, rs.noise_mode);

    InduceOptions ind;
    auto* induce = app.add_subcommand(
        "induce", "Subsample the minority class down to a target imbalance rate");
    induce->add_option("--input", ind.input, "Input CSV with a header row")->required();
    induce->add_option("--label-col", ind.label_col, "Name of the label column")->required();
    induce
        ->add_option("--rate", ind.rate,
                     "Target rate minority/(minority+majority), in (0, 0.5)")
        ->required();
    induce->add_option("--seed", ind.seed, "Random seed")->capture_default_str();
    induce->add_option("--output", ind.output, "Output CSV path")->required();

    EvalOptions ev;
    auto* eval = app.add_subcommand(
        "eval", "Train the logistic classifier on one CSV and score it on another");
    eval->add_option("--train", ev.train, "Training CSV")->required();
    eval->add_option("--test", ev.test, "Test CSV")->required();
    eval->add_option("--label-col", ev.label_col, "Name of the label column")->required();
    eval->add_option("--epochs", ev.epochs, "Gradient descent epochs")->capture_default_str();
    eval->add_option("--lr", ev.lr, "Learning rate")->capture_default_str();
    eval->add_option("--beta", ev.beta, "F-score beta")->capture_default_str();

    BenchOptions be;
    auto* bench = app.add_subcommand(
        "bench",
        "Run the full protocol: optional imbalance induction, stratified split, per-method "
        "resampling of the training side, training, evaluation on the untouched test side, "
        "aggregated over seeded runs");
    auto* config_opt =
        bench->add_option("--config", be.config_path, "JSON experiment config file");
    auto* blobs_opt = bench->add_option(
        "--blobs", be.blobs,
        "Generate data: n_majority,n_minority,dims,minority_clusters,spread")
        ->delimiter(',')
        ->expected(5);
    auto* input_opt = bench->add_option("--input", be.input, "Input CSV");
    bench->add_option("--label-col", be.label_col, "Name of the label column");
    bench->add_option("--minority-label", be.minority_label,
                      "Minority class label; 'auto' = the less frequent class")
        ->capture_default_str();
    bench->add_option("--methods", be.methods, "Comma-separated method list")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--induce-rate", be.induce_rate,
                      "Induce this imbalance rate before splitting; omit to keep the data as is");
    bench->add_option("--test-fraction", be.test_fraction, "Held-out fraction per class")
        ->capture_default_str();
    auto* runs_opt = bench->add_option("--runs", be.runs, "Number of seeded runs to average")
                         ->capture_default_str();
    auto* seed_opt = bench->add_option("--seed", be.seed, "Base seed; run r uses seed + r")
                         ->capture_default_str();
    bench->add_option("--epochs", be.epochs, "Gradient descent epochs")->capture_default_str();
    bench->add_option("--lr", be.lr, "Learning rate")->capture_default_str();
    bench->add_option("--beta", be.beta, "F-score beta")->capture_default_str();
    add_method_knobs(bench, be.knobs, be.weight_mode, be.noise_mode);
    bench->add_option("--format", be.format, "Stdout report format")
        ->check(CLI::IsMember({"table", "json", "csv"}))
        ->capture_default_str();
    bench->add_option("--out", be.out, "Also write the JSON report to this file");
    config_opt->excludes(blobs_opt);
    config_opt->excludes(input_opt);
    blobs_opt->excludes(input_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    be.runs_given = runs_opt->count() > 0;
    be.seed_given = seed_opt->count() > 0;

    try {
        if (resample->parsed()) return run_resample(rs);
        if (induce->parsed()) return run_induce(ind);
        if (eval->parsed()) return run_eval(ev);
        if (bench->parsed()) return run_bench(be);
    } catch (const cbos::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

#include "mlgcn/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "mlgcn/checkpoint.hpp"
#include "mlgcn/cpd.hpp"
#include "mlgcn/error.hpp"
#include "mlgcn/synthetic.hpp"

namespace fs = std::filesystem;

namespace mlgcn {

namespace {

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write: " + path);
    out << text;
    if (!out.good()) throw data_error("write failed: " + path);
}

void echo_config(const RunConfig& cfg, const std::string& out_dir) {
    write_text_file((fs::path(out_dir) / "effective_config.ini").string(),
                    render_run_config(cfg));
}

}  // namespace

Dataset load_configured_dataset(const RunConfig& cfg) {
    if (cfg.data.kind == "synthetic") {
        return make_synthetic_dataset(cfg.data.synthetic, cfg.train.seed);
    }
    if (cfg.data.manifest.empty()) {
        throw usage_error("config: [data] manifest path required when dataset = manifest");
    }
    return load_dataset(cfg.data.manifest);
}

double run_train(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    fs::create_directories(out_dir);
    echo_config(cfg, out_dir);

    Dataset ds = load_configured_dataset(cfg);
    Split split = split_dataset(ds.size(), cfg.train.test_fraction, cfg.train.seed);
    log << "training on " << split.train.size() << " graphs, testing on " << split.test.size()
        << " (classes: " << ds.class_count << ", joint labels: " << ds.label_count << ")\n";

    const std::string metrics_path = (fs::path(out_dir) / "metrics.jsonl").string();
    std::ofstream metrics(metrics_path);
    if (!metrics) throw data_error("cannot write metrics: " + metrics_path);

    TrainResult result = train(ds, split, cfg.menu, cfg.train, &metrics, cfg.rebinarize);

    Checkpoint ckpt{result.model_config, cfg.menu, cfg.rebinarize, std::move(result.state)};
    save_checkpoint(ckpt, (fs::path(out_dir) / "checkpoint.txt").string());

    const auto& last = result.history.back();
    log << "done: epoch " << last.epoch << " train_loss " << format_double(last.train_loss)
        << " train_acc " << format_double(last.train_acc) << " test_acc "
        << format_double(last.test_acc) << "\n";
    return last.test_acc;
}

void run_sweep(const RunConfig& cfg, const std::string& out_dir, std::ostream& log) {
    fs::create_directories(out_dir);
    echo_config(cfg, out_dir);
    Dataset ds = load_configured_dataset(cfg);
    Split split = split_dataset(ds.size(), cfg.train.test_fraction, cfg.train.seed);

    const PoolingMode modes[] = {PoolingMode::None, PoolingMode::Gp, PoolingMode::FeatProp,
                                 PoolingMode::FeatPropGp, PoolingMode::ExpandGp};
    for (PoolingMode mode : modes) {
        TrainConfig tc = cfg.train;
        tc.pooling = mode;
        const std::string path =
            (fs::path(out_dir) / ("metrics_" + std::string(to_string(mode)) + ".jsonl")).string();
        std::ofstream metrics(path);
        if (!metrics) throw data_error("cannot write metrics: " + path);
        TrainResult result = train(ds, split, cfg.menu, tc, &metrics, cfg.rebinarize);
        log << to_string(mode) << ": test_acc " << format_double(result.history.back().test_acc)
            << "\n";
    }
}

double run_eval(const std::string& checkpoint_path, const RunConfig& cfg,
                const std::string& out_dir, std::ostream& log) {
    Checkpoint ckpt = load_checkpoint(checkpoint_path);
    Dataset ds = load_configured_dataset(cfg);
    if (ds.size() == 0) throw data_error("eval: empty dataset");

    if (ds.feature_dim != ckpt.config.feature_dim) {
        throw data_error("eval: node feature matrix has dimension " +
                         std::to_string(ds.feature_dim) + " but the checkpoint's filter bank " +
                         "expects " + std::to_string(ckpt.config.feature_dim));
    }
    if (ds.label_count > ckpt.config.label_count) {
        throw data_error("eval: dataset joint-label vocabulary " + std::to_string(ds.label_count) +
                         " exceeds the checkpoint's expansion width " +
                         std::to_string(ckpt.config.label_count));
    }
    if (ds.class_count > ckpt.config.class_count) {
        throw data_error("eval: dataset has " + std::to_string(ds.class_count) +
                         " classes but the classifier weight matrix has " +
                         std::to_string(ckpt.config.class_count) + " outputs");
    }

    auto contexts = prepare_contexts(ds, ckpt.menu, ckpt.config.hops, ckpt.rebinarize);
    std::vector<int> all(ds.size());
    for (int i = 0; i < ds.size(); ++i) all[i] = i;
    EvalReport report = evaluate(ds, all, contexts, ckpt.state, ckpt.config);

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "report.csv");
        out << "class,name,count,correct,accuracy\n";
        for (int c = 0; c < ckpt.config.class_count; ++c) {
            const std::string name =
                c < static_cast<int>(ds.class_names.size()) && !ds.class_names[c].empty()
                    ? ds.class_names[c]
                    : std::to_string(c);
            out << c << ',' << name << ',' << report.per_class_count[c] << ','
                << report.confusion[c][c] << ',' << format_double(report.per_class_accuracy[c])
                << '\n';
        }
        out << "mean,," << report.total << ",," << format_double(report.mean_class_accuracy)
            << '\n';
        out << "overall,," << report.total << ",," << format_double(report.overall_accuracy)
            << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "confusion.csv");
        for (int a = 0; a < ckpt.config.class_count; ++a) {
            for (int p = 0; p < ckpt.config.class_count; ++p) {
                out << (p ? "," : "") << report.confusion[a][p];
            }
            out << '\n';
        }
    }
    log << "eval: " << report.total << " graphs, overall_acc "
        << format_double(report.overall_accuracy) << ", class_mean_acc "
        << format_double(report.mean_class_accuracy) << "\n";
    return report.mean_class_accuracy;
}

GradCheckReport run_gradcheck(const GradCheckConfig& gc, std::uint64_t seed,
                              WeightJacobian jacobian, std::ostream& log) {
    GradCheckReport report = gradcheck(gc, seed, jacobian);
    log << "group                     params   max_rel_error\n";
    for (const auto& grp : report.groups) {
        log << std::left << std::setw(26) << grp.name << std::setw(9) << grp.parameter_count
            << format_double(grp.max_rel_error) << "\n";
    }
    log << "worst: " << format_double(report.worst_rel_error) << "\n";
    return report;
}

void run_certify(const RunConfig& cfg, double tolerance, const std::string& out_dir,
                 std::ostream& log) {
    if (cfg.menu.empty()) throw usage_error("certify: laplacian menu is empty");
    Dataset ds = load_configured_dataset(cfg);
    fs::create_directories(out_dir);

    const std::string csv_path = (fs::path(out_dir) / "certify.csv").string();
    std::ofstream csv(csv_path);
    if (!csv) throw data_error("cannot write: " + csv_path);
    csv << "graph,family,kind,power,scale_multiplier,min_centered_eigenvalue,is_cpd\n";

    std::vector<long> cpd_count(cfg.menu.size(), 0);
    for (int gi = 0; gi < ds.size(); ++gi) {
        for (size_t mi = 0; mi < cfg.menu.size(); ++mi) {
            const auto& d = cfg.menu[mi];
            auto a = build_affinity(ds.graphs[gi], d.kind, d.power, d.scale_multiplier,
                                    cfg.rebinarize);
            auto l = build_laplacian(a, d.family);
            auto report = cpd_check(l.values, tolerance,
                                    "graph " + std::to_string(gi) + " entry " + std::to_string(mi));
            if (report.is_cpd) ++cpd_count[mi];
            csv << gi << ',' << to_string(d.family) << ',' << to_string(d.kind) << ',' << d.power
                << ',' << format_double(d.scale_multiplier) << ','
                << format_double(report.min_centered_eigenvalue) << ','
                << (report.is_cpd ? 1 : 0) << '\n';
        }
    }

    log << "certification over " << ds.size() << " graphs (tolerance " << format_double(tolerance)
        << "):\n";
    for (size_t mi = 0; mi < cfg.menu.size(); ++mi) {
        const auto& d = cfg.menu[mi];
        const bool all = cpd_count[mi] == ds.size();
        log << "  " << to_string(d.family) << ' ' << to_string(d.kind) << " k=" << d.power
            << " scale=" << format_double(d.scale_multiplier) << ": " << cpd_count[mi] << '/'
            << ds.size() << (all ? " -- admissible combination input" : " -- NOT c.p.d. on all graphs")
            << "\n";
    }
}

void run_ingest(const std::string& input_dir, const RunConfig& cfg, const std::string& out_dir,
                std::ostream& log) {
    if (!fs::is_directory(input_dir)) throw data_error("ingest: not a directory: " + input_dir);

    std::vector<std::string> class_dirs;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        if (entry.is_directory()) class_dirs.push_back(entry.path().string());
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    if (class_dirs.empty()) {
        throw data_error("ingest: expected one subdirectory per class under " + input_dir);
    }

    Dataset ds;
    ds.class_count = static_cast<int>(class_dirs.size());
    for (const auto& dir : class_dirs) ds.class_names.push_back(fs::path(dir).filename().string());

    long sequences = 0;
    for (size_t c = 0; c < class_dirs.size(); ++c) {
        std::vector<std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(class_dirs[c])) {
            if (!entry.is_regular_file()) continue;
            const auto ext = entry.path().extension().string();
            if (ext == ".csv" || ext == ".txt") files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            auto seq = read_skeleton_csv(file, cfg.ingest.layout);
            auto trajectories = extract_trajectories(seq);
            Graph g = build_trajectory_graph(trajectories, cfg.ingest.neighbor_count,
                                             cfg.ingest.chunk_count, seq.total_frames());
            ds.graphs.push_back(std::move(g));
            ds.class_labels.push_back(static_cast<int>(c));
            ++sequences;
        }
    }
    if (sequences == 0) throw data_error("ingest: no .csv/.txt sequence files under " + input_dir);

    // Dataset-level joint vocabulary: every graph header carries the same L.
    int label_count = 1;
    for (const auto& g : ds.graphs) label_count = std::max(label_count, g.label_count);
    for (auto& g : ds.graphs) g.label_count = label_count;
    ds.label_count = label_count;
    ds.feature_dim = ds.graphs.front().feature_dim;

    fs::create_directories(out_dir);
    std::string manifest;
    try {
        manifest = save_dataset(ds, out_dir);
        echo_config(cfg, out_dir);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(fs::path(out_dir) / "graphs", ec);
        fs::remove(fs::path(out_dir) / "manifest.txt", ec);
        throw;
    }
    log << "ingested " << sequences << " sequences into " << manifest << " (classes: "
        << ds.class_count << ", joint labels: " << ds.label_count << ")\n";
}

}  // namespace mlgcn

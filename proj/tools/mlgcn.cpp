// Command-line driver: ingest, train, eval, gradcheck, certify, sweep.
// Exit codes: 0 success, 1 usage, 2 data error, 3 numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mlgcn/commands.hpp"
#include "mlgcn/error.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration file");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--set", args.overrides, "Override `section.key=value` (repeatable)");
    cmd->add_option("--seed", args.seed, "Override the run seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
}

mlgcn::RunConfig resolve_config(const CommonArgs& args, bool config_required) {
    mlgcn::RunConfig cfg;
    if (!args.config_path.empty()) {
        cfg = mlgcn::load_run_config(args.config_path);
    } else if (config_required) {
        throw mlgcn::usage_error("--config is required for this command");
    } else {
        cfg = mlgcn::default_run_config();
    }
    mlgcn::apply_overrides(cfg, args.overrides);
    if (args.seed_set) cfg.train.seed = args.seed;
    return cfg;
}

int emit_error(const char* kind, const std::string& message, int code) {
    nlohmann::ordered_json j;
    j["error"] = {{"type", kind}, {"message", message}, {"exit_code", code}};
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-laplacian spectral graph learning engine"};
    app.require_subcommand(1);

    CommonArgs train_args, sweep_args, eval_args, grad_args, certify_args, ingest_args;
    std::string train_pooling;
    std::string eval_checkpoint, eval_data;
    std::string grad_jacobian = "exact";
    double certify_tol = 1e-9;
    std::string ingest_input;

    auto* train_cmd = app.add_subcommand("train", "Train a model from a config");
    add_common(train_cmd, train_args);
    train_cmd->add_option("--pooling", train_pooling,
                          "Pooling mode (none|gp|featprop|featprop_gp|expand_gp) or `sweep`");

    auto* sweep_cmd = app.add_subcommand("sweep", "Train every pooling mode");
    add_common(sweep_cmd, sweep_args);

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
    add_common(eval_cmd, eval_args);
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
    eval_cmd->add_option("--data", eval_data, "Dataset manifest (overrides the config)");

    auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient verification");
    add_common(grad_cmd, grad_args);
    grad_cmd->add_option("--jacobian", grad_jacobian,
                         "Simplex-constraint backward rule: exact | collapsed_pair");

    auto* certify_cmd =
        app.add_subcommand("certify", "Conditional-positive-definiteness certification");
    add_common(certify_cmd, certify_args);
    certify_cmd->add_option("--tol", certify_tol, "Eigenvalue tolerance");

    auto* ingest_cmd = app.add_subcommand("ingest", "Convert skeleton CSV sequences to graphs");
    add_common(ingest_cmd, ingest_args);
    ingest_cmd->add_option("--input", ingest_input, "Input directory (one subdirectory per class)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return emit_error("usage", e.what(), 1);
    }

    try {
        if (train_cmd->parsed()) {
            auto cfg = resolve_config(train_args, true);
            if (train_pooling == "sweep") {
                mlgcn::run_sweep(cfg, train_args.out_dir, std::cout);
            } else {
                if (!train_pooling.empty()) {
                    cfg.train.pooling = mlgcn::parse_pooling_mode(train_pooling);
                }
                mlgcn::run_train(cfg, train_args.out_dir, std::cout);
            }
        } else if (sweep_cmd->parsed()) {
            auto cfg = resolve_config(sweep_args, true);
            mlgcn::run_sweep(cfg, sweep_args.out_dir, std::cout);
        } else if (eval_cmd->parsed()) {
            auto cfg = resolve_config(eval_args, false);
            if (!eval_data.empty()) {
                cfg.data.kind = "manifest";
                cfg.data.manifest = eval_data;
            }
            mlgcn::run_eval(eval_checkpoint, cfg, eval_args.out_dir, std::cout);
        } else if (grad_cmd->parsed()) {
            auto cfg = resolve_config(grad_args, false);
            mlgcn::GradCheckConfig gc;
            gc.menu_size = static_cast<int>(cfg.menu.size());
            gc.multilap_depth = cfg.train.multilap_depth;
            gc.hidden_widths = cfg.train.hidden_widths;
            gc.activation = cfg.train.activation;
            gc.leak = cfg.train.leak;
            gc.cheb_order = cfg.train.cheb_order;
            gc.pooling = cfg.train.pooling;
            gc.hops = cfg.train.hops;
            gc.rescale_after_multilap = cfg.train.rescale_after_multilap;
            gc.mean_readout = cfg.train.mean_readout;
            mlgcn::WeightJacobian jac;
            if (grad_jacobian == "exact") {
                jac = mlgcn::WeightJacobian::Exact;
            } else if (grad_jacobian == "collapsed_pair") {
                jac = mlgcn::WeightJacobian::CollapsedPair;
            } else {
                throw mlgcn::usage_error("--jacobian must be `exact` or `collapsed_pair`");
            }
            mlgcn::run_gradcheck(gc, cfg.train.seed, jac, std::cout);
        } else if (certify_cmd->parsed()) {
            auto cfg = resolve_config(certify_args, true);
            mlgcn::run_certify(cfg, certify_tol, certify_args.out_dir, std::cout);
        } else if (ingest_cmd->parsed()) {
            auto cfg = resolve_config(ingest_args, false);
            mlgcn::run_ingest(ingest_input, cfg, ingest_args.out_dir, std::cout);
        }
    } catch (const mlgcn::usage_error& e) {
        return emit_error("usage", e.what(), 1);
    } catch (const mlgcn::data_error& e) {
        return emit_error("data", e.what(), 2);
    } catch (const mlgcn::numeric_error& e) {
        return emit_error("numeric", e.what(), 3);
    } catch (const std::exception& e) {
        return emit_error("internal", e.what(), 3);
    }
    return 0;
}

#include "mlgcn/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mlgcn/error.hpp"

namespace mlgcn {

std::string format_double_hex(double v) {
    char buf[48];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    return std::string(buf, r.ptr);
}

double parse_double_hex(const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::hex);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw data_error("checkpoint: bad hexfloat '" + s + "'");
    }
    return v;
}

namespace {

void write_values(std::ostream& out, const Eigen::MatrixXd& m) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) out << ' ' << format_double_hex(m(i, j));
    }
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

long to_long(const std::string& s, const char* what) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw data_error(std::string("checkpoint: bad integer for ") + what + ": '" + s + "'");
    }
    return v;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    const auto& cfg = ckpt.config;
    const auto& st = ckpt.state;
    std::ofstream out(path);
    if (!out) throw data_error("cannot write checkpoint: " + path);

    out << "mlgcn-checkpoint 1\n";
    out << "feature-dim " << cfg.feature_dim << '\n';
    out << "label-count " << cfg.label_count << '\n';
    out << "class-count " << cfg.class_count << '\n';
    out << "pooling " << to_string(cfg.pooling) << '\n';
    out << "hops " << cfg.hops << '\n';
    out << "rescale-after-multilap " << (cfg.rescale_after_multilap ? 1 : 0) << '\n';
    out << "mean-readout " << (cfg.mean_readout ? 1 : 0) << '\n';
    out << "activation " << to_string(cfg.activation) << '\n';
    out << "leak " << format_double_hex(cfg.leak) << '\n';
    out << "cheb-order " << cfg.cheb_order << '\n';
    out << "conv-channels";
    for (int c : cfg.conv_channels) out << ' ' << c;
    out << '\n';
    out << "multilap-sizes";
    for (int s : cfg.multilap_sizes) out << ' ' << s;
    out << '\n';
    out << "seed " << st.seed << '\n';
    out << "step " << st.step << '\n';
    for (const auto& d : ckpt.menu) {
        out << "menu " << to_string(d.family) << ' ' << to_string(d.kind) << ' ' << d.power << ' '
            << format_double_hex(d.scale_multiplier) << '\n';
    }
    out << "rebinarize " << (ckpt.rebinarize ? 1 : 0) << '\n';

    for (size_t l = 0; l < st.multilap.raw_weights.size(); ++l) {
        const auto& w = st.multilap.raw_weights[l];
        for (int p = 0; p < w.cols(); ++p) {
            out << "weights " << l << ' ' << p;
            for (int q = 0; q < w.rows(); ++q) out << ' ' << format_double_hex(w(q, p));
            out << '\n';
        }
    }
    for (size_t i = 0; i < st.banks.size(); ++i) {
        for (int k = 0; k < st.banks[i].order; ++k) {
            out << "theta " << i << ' ' << k;
            write_values(out, st.banks[i].theta[k]);
            out << '\n';
        }
    }
    out << "fc " << st.fc_weight.rows() << ' ' << st.fc_weight.cols() << '\n';
    for (int i = 0; i < st.fc_weight.rows(); ++i) {
        out << "fc-row " << i;
        for (int j = 0; j < st.fc_weight.cols(); ++j) {
            out << ' ' << format_double_hex(st.fc_weight(i, j));
        }
        out << '\n';
    }
    out << "fc-bias";
    for (int j = 0; j < st.fc_bias.size(); ++j) out << ' ' << format_double_hex(st.fc_bias(j));
    out << '\n';
    out << "end\n";
    if (!out.good()) throw data_error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open checkpoint: " + path);

    std::string line;
    if (!std::getline(in, line) || split_ws(line) != std::vector<std::string>{"mlgcn-checkpoint", "1"}) {
        throw data_error("checkpoint: unsupported header in " + path);
    }

    ModelConfig cfg;
    std::vector<LaplacianDescriptor> menu;
    bool rebinarize = false;
    std::uint64_t seed = 0;
    std::int64_t step = 0;
    std::vector<std::vector<std::string>> weight_lines, theta_lines;
    std::vector<std::string> fc_dims;
    std::vector<std::vector<std::string>> fc_rows;
    std::vector<std::string> fc_bias;
    bool saw_end = false;

    while (std::getline(in, line)) {
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        const std::string& key = toks[0];
        if (key == "end") {
            saw_end = true;
            break;
        } else if (key == "feature-dim") {
            cfg.feature_dim = static_cast<int>(to_long(toks.at(1), "feature-dim"));
        } else if (key == "label-count") {
            cfg.label_count = static_cast<int>(to_long(toks.at(1), "label-count"));
        } else if (key == "class-count") {
            cfg.class_count = static_cast<int>(to_long(toks.at(1), "class-count"));
        } else if (key == "pooling") {
            cfg.pooling = parse_pooling_mode(toks.at(1));
        } else if (key == "hops") {
            cfg.hops = static_cast<int>(to_long(toks.at(1), "hops"));
        } else if (key == "rescale-after-multilap") {
            cfg.rescale_after_multilap = to_long(toks.at(1), "rescale") != 0;
        } else if (key == "mean-readout") {
            cfg.mean_readout = to_long(toks.at(1), "mean-readout") != 0;
        } else if (key == "activation") {
            cfg.activation = parse_activation(toks.at(1));
        } else if (key == "leak") {
            cfg.leak = parse_double_hex(toks.at(1));
        } else if (key == "cheb-order") {
            cfg.cheb_order = static_cast<int>(to_long(toks.at(1), "cheb-order"));
        } else if (key == "conv-channels") {
            cfg.conv_channels.clear();
            for (size_t i = 1; i < toks.size(); ++i) {
                cfg.conv_channels.push_back(static_cast<int>(to_long(toks[i], "conv-channels")));
            }
        } else if (key == "multilap-sizes") {
            cfg.multilap_sizes.clear();
            for (size_t i = 1; i < toks.size(); ++i) {
                cfg.multilap_sizes.push_back(static_cast<int>(to_long(toks[i], "multilap-sizes")));
            }
        } else if (key == "seed") {
            seed = static_cast<std::uint64_t>(to_long(toks.at(1), "seed"));
        } else if (key == "step") {
            step = to_long(toks.at(1), "step");
        } else if (key == "menu") {
            if (toks.size() != 5) throw data_error("checkpoint: malformed menu record");
            LaplacianDescriptor d;
            d.family = parse_laplacian_family(toks[1]);
            d.kind = parse_affinity_kind(toks[2]);
            d.power = static_cast<int>(to_long(toks[3], "menu power"));
            d.scale_multiplier = parse_double_hex(toks[4]);
            menu.push_back(d);
        } else if (key == "rebinarize") {
            rebinarize = to_long(toks.at(1), "rebinarize") != 0;
        } else if (key == "weights") {
            weight_lines.push_back(std::move(toks));
        } else if (key == "theta") {
            theta_lines.push_back(std::move(toks));
        } else if (key == "fc") {
            fc_dims = std::move(toks);
        } else if (key == "fc-row") {
            fc_rows.push_back(std::move(toks));
        } else if (key == "fc-bias") {
            fc_bias = std::move(toks);
        } else {
            throw data_error("checkpoint: unknown record '" + key + "' in " + path);
        }
    }
    if (!saw_end) throw data_error("checkpoint: truncated file " + path);

    cfg.validate();
    if (static_cast<int>(menu.size()) != cfg.multilap_sizes.front()) {
        throw data_error("checkpoint: menu size does not match the combination-network input");
    }
    ModelState state = init_model(cfg, seed);
    state.step = step;

    size_t expected_weight_lines = 0;
    for (const auto& w : state.multilap.raw_weights) expected_weight_lines += w.cols();
    size_t expected_theta_lines = 0;
    for (const auto& b : state.banks) expected_theta_lines += b.theta.size();
    if (weight_lines.size() != expected_weight_lines || theta_lines.size() != expected_theta_lines) {
        throw data_error("checkpoint: parameter record count does not match the config");
    }

    for (const auto& toks : weight_lines) {
        const int l = static_cast<int>(to_long(toks.at(1), "weights layer"));
        const int p = static_cast<int>(to_long(toks.at(2), "weights unit"));
        if (l < 0 || l >= static_cast<int>(state.multilap.raw_weights.size())) {
            throw data_error("checkpoint: weights layer out of range");
        }
        auto& w = state.multilap.raw_weights[l];
        if (p < 0 || p >= w.cols() || static_cast<int>(toks.size()) != 3 + w.rows()) {
            throw data_error("checkpoint: weights record shape mismatch");
        }
        for (int q = 0; q < w.rows(); ++q) w(q, p) = parse_double_hex(toks[3 + q]);
    }
    for (const auto& toks : theta_lines) {
        const int i = static_cast<int>(to_long(toks.at(1), "theta layer"));
        const int k = static_cast<int>(to_long(toks.at(2), "theta order"));
        if (i < 0 || i >= static_cast<int>(state.banks.size()) || k < 0 ||
            k >= state.banks[i].order) {
            throw data_error("checkpoint: theta record out of range");
        }
        auto& t = state.banks[i].theta[k];
        if (static_cast<int>(toks.size()) != 3 + t.rows() * t.cols()) {
            throw data_error("checkpoint: theta record shape mismatch");
        }
        int idx = 3;
        for (int r = 0; r < t.rows(); ++r) {
            for (int c = 0; c < t.cols(); ++c) t(r, c) = parse_double_hex(toks[idx++]);
        }
    }
    if (fc_dims.size() != 3 || to_long(fc_dims[1], "fc rows") != state.fc_weight.rows() ||
        to_long(fc_dims[2], "fc cols") != state.fc_weight.cols()) {
        throw data_error("checkpoint: classifier weight dimensions do not match the config");
    }
    if (static_cast<int>(fc_rows.size()) != state.fc_weight.rows()) {
        throw data_error("checkpoint: missing classifier rows");
    }
    for (const auto& toks : fc_rows) {
        const int i = static_cast<int>(to_long(toks.at(1), "fc row"));
        if (i < 0 || i >= state.fc_weight.rows() ||
            static_cast<int>(toks.size()) != 2 + state.fc_weight.cols()) {
            throw data_error("checkpoint: classifier row record mismatch");
        }
        for (int j = 0; j < state.fc_weight.cols(); ++j) {
            state.fc_weight(i, j) = parse_double_hex(toks[2 + j]);
        }
    }
    if (static_cast<int>(fc_bias.size()) != 1 + state.fc_bias.size()) {
        throw data_error("checkpoint: classifier bias record mismatch");
    }
    for (int j = 0; j < state.fc_bias.size(); ++j) state.fc_bias(j) = parse_double_hex(fc_bias[1 + j]);

    return Checkpoint{std::move(cfg), std::move(menu), rebinarize, std::move(state)};
}

}  // namespace mlgcn

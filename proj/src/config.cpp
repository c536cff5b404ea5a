#include "mlgcn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mlgcn/error.hpp"

namespace mlgcn {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long parse_int(const std::string& v, const std::string& ctx) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw usage_error(ctx + ": expected integer, got '" + v + "'");
    }
    return out;
}

double parse_num(const std::string& v, const std::string& ctx) {
    double out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw usage_error(ctx + ": expected number, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& v, const std::string& ctx) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw usage_error(ctx + ": expected boolean, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& v, const std::string& ctx) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(v);
    while (std::getline(in, token, ',')) {
        token = trim(token);
        if (!token.empty()) out.push_back(static_cast<int>(parse_int(token, ctx)));
    }
    return out;
}

LaplacianDescriptor parse_menu_entry(const std::string& v, const std::string& ctx) {
    std::istringstream in(v);
    std::string family, kind, power, scale;
    if (!(in >> family >> kind >> power >> scale)) {
        throw usage_error(ctx + ": menu entry must be `<family> <kind> <power> <scale>`");
    }
    std::string extra;
    if (in >> extra) throw usage_error(ctx + ": trailing tokens in menu entry");
    LaplacianDescriptor d;
    d.family = parse_laplacian_family(family);
    d.kind = parse_affinity_kind(kind);
    d.power = static_cast<int>(parse_int(power, ctx));
    d.scale_multiplier = parse_num(scale, ctx);
    if (d.power < 1) throw usage_error(ctx + ": power must be >= 1");
    if (!(d.scale_multiplier > 0.0)) throw usage_error(ctx + ": scale must be > 0");
    return d;
}

void apply_key(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value, const std::string& ctx, bool& menu_cleared) {
    auto& tc = cfg.train;
    if (section == "data") {
        if (key == "dataset") {
            if (value != "synthetic" && value != "manifest") {
                throw usage_error(ctx + ": dataset must be `synthetic` or `manifest`");
            }
            cfg.data.kind = value;
        } else if (key == "manifest") {
            cfg.data.manifest = value;
        } else if (key == "test_fraction") {
            tc.test_fraction = parse_num(value, ctx);
        } else if (key == "synthetic_graphs") {
            cfg.data.synthetic.graph_count = static_cast<int>(parse_int(value, ctx));
        } else if (key == "synthetic_min_nodes") {
            cfg.data.synthetic.min_nodes = static_cast<int>(parse_int(value, ctx));
        } else if (key == "synthetic_max_nodes") {
            cfg.data.synthetic.max_nodes = static_cast<int>(parse_int(value, ctx));
        } else if (key == "synthetic_labels") {
            cfg.data.synthetic.label_count = static_cast<int>(parse_int(value, ctx));
        } else if (key == "synthetic_feature_dim") {
            cfg.data.synthetic.feature_dim = static_cast<int>(parse_int(value, ctx));
        } else if (key == "synthetic_neighbors") {
            cfg.data.synthetic.neighbor_count = static_cast<int>(parse_int(value, ctx));
        } else if (key == "synthetic_offset") {
            cfg.data.synthetic.cluster_offset = parse_num(value, ctx);
        } else if (key == "synthetic_noise") {
            cfg.data.synthetic.noise = parse_num(value, ctx);
        } else {
            throw usage_error(ctx + ": unknown key '" + key + "' in [data]");
        }
    } else if (section == "laplacians") {
        if (key == "entry") {
            if (!menu_cleared) {
                cfg.menu.clear();  // a config that lists entries replaces the default menu
                menu_cleared = true;
            }
            cfg.menu.push_back(parse_menu_entry(value, ctx));
        } else if (key == "rebinarize") {
            cfg.rebinarize = parse_bool(value, ctx);
        } else {
            throw usage_error(ctx + ": unknown key '" + key + "' in [laplacians]");
        }
    } else if (section == "model") {
        if (key == "depth") {
            tc.multilap_depth = static_cast<int>(parse_int(value, ctx));
        } else if (key == "hidden_widths") {
            tc.hidden_widths = parse_int_list(value, ctx);
        } else if (key == "activation") {
            tc.activation = parse_activation(value);
        } else if (key == "leak") {
            tc.leak = parse_num(value, ctx);
        } else if (key == "cheb_order") {
            tc.cheb_order = static_cast<int>(parse_int(value, ctx));
        } else if (key == "filters") {
            tc.conv_channels = parse_int_list(value, ctx);
            if (tc.conv_channels.empty()) throw usage_error(ctx + ": filters list is empty");
        } else if (key == "pooling") {
            tc.pooling = parse_pooling_mode(value);
        } else if (key == "hops") {
            tc.hops = static_cast<int>(parse_int(value, ctx));
        } else if (key == "rescale_after_multilap") {
            tc.rescale_after_multilap = parse_bool(value, ctx);
        } else if (key == "readout") {
            if (value == "sum") {
                tc.mean_readout = false;
            } else if (value == "mean") {
                tc.mean_readout = true;
            } else {
                throw usage_error(ctx + ": readout must be `sum` or `mean`");
            }
        } else {
            throw usage_error(ctx + ": unknown key '" + key + "' in [model]");
        }
    } else if (section == "train") {
        if (key == "epochs") {
            tc.epochs = static_cast<int>(parse_int(value, ctx));
        } else if (key == "batch_size") {
            tc.batch_size = static_cast<int>(parse_int(value, ctx));
        } else if (key == "learning_rate") {
            tc.lr.base = parse_num(value, ctx);
        } else if (key == "decay_factor") {
            tc.lr.decay_factor = parse_num(value, ctx);
        } else if (key == "decay_epoch") {
            tc.lr.decay_epoch = static_cast<int>(parse_int(value, ctx));
        } else if (key == "momentum") {
            tc.momentum = parse_num(value, ctx);
        } else if (key == "seed") {
            tc.seed = static_cast<std::uint64_t>(parse_int(value, ctx));
        } else if (key == "timing") {
            tc.timing = parse_bool(value, ctx);
        } else {
            throw usage_error(ctx + ": unknown key '" + key + "' in [train]");
        }
    } else if (section == "ingest") {
        auto& ic = cfg.ingest;
        if (key == "persons") {
            ic.layout.persons = static_cast<int>(parse_int(value, ctx));
        } else if (key == "joints") {
            ic.layout.joints_per_person = static_cast<int>(parse_int(value, ctx));
        } else if (key == "coord_dim") {
            ic.layout.coord_dim = static_cast<int>(parse_int(value, ctx));
        } else if (key == "frame_column") {
            ic.layout.has_frame_column = parse_bool(value, ctx);
        } else if (key == "zero_is_missing") {
            ic.layout.treat_zero_as_missing = parse_bool(value, ctx);
        } else if (key == "chunks") {
            ic.chunk_count = static_cast<int>(parse_int(value, ctx));
        } else if (key == "neighbors") {
            ic.neighbor_count = static_cast<int>(parse_int(value, ctx));
        } else {
            throw usage_error(ctx + ": unknown key '" + key + "' in [ingest]");
        }
    } else {
        throw usage_error(ctx + ": unknown section [" + section + "]");
    }
}

}  // namespace

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.menu = {
        {LaplacianFamily::Unnormalized, AffinityKind::Binary, 1, 1.0},
        {LaplacianFamily::Normalized, AffinityKind::Binary, 1, 1.0},
        {LaplacianFamily::Normalized, AffinityKind::BinaryGaussian, 1, 1.0},
    };
    return cfg;
}

RunConfig parse_run_config(const std::string& text, const std::string& name) {
    RunConfig cfg = default_run_config();
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    bool menu_cleared = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string ctx = name + ":" + std::to_string(lineno);
        // strip comments
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '#' || line[i] == ';') {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw usage_error(ctx + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw usage_error(ctx + ": empty section name");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw usage_error(ctx + ": expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw usage_error(ctx + ": empty key");
        if (section.empty()) throw usage_error(ctx + ": key outside any [section]");
        apply_key(cfg, section, key, value, ctx, menu_cleared);
    }
    if (cfg.menu.empty()) throw usage_error(name + ": laplacian menu is empty");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), path);
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
    bool menu_cleared = false;
    for (const auto& item : overrides) {
        const size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw usage_error("override must be `section.key=value`, got '" + item + "'");
        }
        const std::string dotted = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        const size_t dot = dotted.find('.');
        if (dot == std::string::npos) {
            throw usage_error("override must be `section.key=value`, got '" + item + "'");
        }
        apply_key(cfg, dotted.substr(0, dot), dotted.substr(dot + 1), value, "override " + dotted,
                  menu_cleared);
    }
    if (cfg.menu.empty()) throw usage_error("overrides left the laplacian menu empty");
}

std::string render_run_config(const RunConfig& cfg) {
    const auto& tc = cfg.train;
    std::ostringstream out;
    out << "[data]\n";
    out << "dataset = " << cfg.data.kind << '\n';
    if (!cfg.data.manifest.empty()) out << "manifest = " << cfg.data.manifest << '\n';
    out << "test_fraction = " << format_double(tc.test_fraction) << '\n';
    const auto& syn = cfg.data.synthetic;
    out << "synthetic_graphs = " << syn.graph_count << '\n';
    out << "synthetic_min_nodes = " << syn.min_nodes << '\n';
    out << "synthetic_max_nodes = " << syn.max_nodes << '\n';
    out << "synthetic_labels = " << syn.label_count << '\n';
    out << "synthetic_feature_dim = " << syn.feature_dim << '\n';
    out << "synthetic_neighbors = " << syn.neighbor_count << '\n';
    out << "synthetic_offset = " << format_double(syn.cluster_offset) << '\n';
    out << "synthetic_noise = " << format_double(syn.noise) << '\n';

    out << "\n[laplacians]\n";
    for (const auto& d : cfg.menu) {
        out << "entry = " << to_string(d.family) << ' ' << to_string(d.kind) << ' ' << d.power
            << ' ' << format_double(d.scale_multiplier) << '\n';
    }
    out << "rebinarize = " << (cfg.rebinarize ? "true" : "false") << '\n';

    out << "\n[model]\n";
    out << "depth = " << tc.multilap_depth << '\n';
    if (!tc.hidden_widths.empty()) {
        out << "hidden_widths = ";
        for (size_t i = 0; i < tc.hidden_widths.size(); ++i) {
            out << (i ? "," : "") << tc.hidden_widths[i];
        }
        out << '\n';
    }
    out << "activation = " << to_string(tc.activation) << '\n';
    out << "leak = " << format_double(tc.leak) << '\n';
    out << "cheb_order = " << tc.cheb_order << '\n';
    out << "filters = ";
    for (size_t i = 0; i < tc.conv_channels.size(); ++i) {
        out << (i ? "," : "") << tc.conv_channels[i];
    }
    out << '\n';
    out << "pooling = " << to_string(tc.pooling) << '\n';
    out << "hops = " << tc.hops << '\n';
    out << "rescale_after_multilap = " << (tc.rescale_after_multilap ? "true" : "false") << '\n';
    out << "readout = " << (tc.mean_readout ? "mean" : "sum") << '\n';

    out << "\n[train]\n";
    out << "epochs = " << tc.epochs << '\n';
    out << "batch_size = " << tc.batch_size << '\n';
    out << "learning_rate = " << format_double(tc.lr.base) << '\n';
    out << "decay_factor = " << format_double(tc.lr.decay_factor) << '\n';
    out << "decay_epoch = " << tc.lr.decay_epoch << '\n';
    out << "momentum = " << format_double(tc.momentum) << '\n';
    out << "seed = " << tc.seed << '\n';
    out << "timing = " << (tc.timing ? "true" : "false") << '\n';

    out << "\n[ingest]\n";
    out << "persons = " << cfg.ingest.layout.persons << '\n';
    out << "joints = " << cfg.ingest.layout.joints_per_person << '\n';
    out << "coord_dim = " << cfg.ingest.layout.coord_dim << '\n';
    out << "frame_column = " << (cfg.ingest.layout.has_frame_column ? "true" : "false") << '\n';
    out << "zero_is_missing = " << (cfg.ingest.layout.treat_zero_as_missing ? "true" : "false")
        << '\n';
    out << "chunks = " << cfg.ingest.chunk_count << '\n';
    out << "neighbors = " << cfg.ingest.neighbor_count << '\n';
    return out.str();
}

}  // namespace mlgcn

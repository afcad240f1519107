#include "anoqrl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace anoqrl {

namespace pt = boost::property_tree;

std::string_view to_string(Algorithm algorithm) {
    return algorithm == Algorithm::Dqn ? "dqn" : "a3c";
}

namespace {

std::string join_issues(const std::vector<std::string> &issues) {
    std::string out = "invalid configuration:";
    for (const auto &i : issues) {
        out += "\n  " + i;
    }
    return out;
}

const std::map<std::string, std::set<std::string>> &known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"algorithm", "env", "seed", "episodes", "output_dir", "label"}},
        {"env", {"grid_side", "shaped_reward"}},
        {"model", {"mode", "qubits", "layers", "locality"}},
        {"dqn",
         {"gamma", "epsilon_start", "epsilon_end", "epsilon_decay", "batch_size", "capacity",
          "target_period", "train_every"}},
        {"a3c",
         {"workers", "n_step", "gamma", "value_coef", "entropy_coef", "grad_clip",
          "audit_snapshots"}},
        {"optimizer", {"lr_theta", "lr_phi", "lr_linear", "lr_table", "beta1", "beta2", "epsilon"}},
    };
    return keys;
}

/// Reads typed values out of the tree and records every problem.
class Reader {
  public:
    explicit Reader(const pt::ptree &tree) : tree_{tree} {}

    std::vector<std::string> issues;

    [[nodiscard]] bool has(const std::string &path) const {
        return static_cast<bool>(tree_.get_optional<std::string>(pt::ptree::path_type{path, '.'}));
    }

    std::optional<std::string> text(const std::string &path) const {
        auto v = tree_.get_optional<std::string>(pt::ptree::path_type{path, '.'});
        if (!v) {
            return std::nullopt;
        }
        return *v;
    }

    template <class T> void integer(const std::string &path, T &out, T min_value) {
        const auto v = text(path);
        if (!v) {
            return;
        }
        std::uint64_t parsed = 0;
        const auto *end = v->data() + v->size();
        const auto r = std::from_chars(v->data(), end, parsed);
        if (r.ec != std::errc{} || r.ptr != end || v->empty()) {
            issues.push_back(path + ": expected a non-negative integer, got '" + *v + "'");
            return;
        }
        if (parsed < static_cast<std::uint64_t>(min_value)) {
            issues.push_back(path + ": must be at least " + std::to_string(min_value));
            return;
        }
        out = static_cast<T>(parsed);
    }

    /// Parses a finite real in [lo, hi]; open bounds when the flags say so.
    void real(const std::string &path, double &out, double lo, double hi, bool lo_open = false) {
        const auto v = text(path);
        if (!v) {
            return;
        }
        double parsed = 0.0;
        const auto *end = v->data() + v->size();
        const auto r = std::from_chars(v->data(), end, parsed);
        if (r.ec != std::errc{} || r.ptr != end || v->empty() || !std::isfinite(parsed)) {
            issues.push_back(path + ": expected a real number, got '" + *v + "'");
            return;
        }
        if (parsed < lo || parsed > hi || (lo_open && parsed == lo)) {
            std::ostringstream msg;
            msg << path << ": " << parsed << " outside " << (lo_open ? "(" : "[") << lo << ", "
                << hi << "]";
            issues.push_back(msg.str());
            return;
        }
        out = parsed;
    }

    void boolean(const std::string &path, bool &out) {
        const auto v = text(path);
        if (!v) {
            return;
        }
        if (*v == "true" || *v == "1" || *v == "yes") {
            out = true;
        } else if (*v == "false" || *v == "0" || *v == "no") {
            out = false;
        } else {
            issues.push_back(path + ": expected true or false, got '" + *v + "'");
        }
    }

  private:
    const pt::ptree &tree_;
};

} // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : ConfigError{join_issues(issues)}, issues_{std::move(issues)} {}

ExperimentConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string{text}};
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error &e) {
        throw ValidationError({"line " + std::to_string(e.line()) + ": " + e.message()});
    }

    Reader r{tree};
    for (const auto &[section, body] : tree) {
        const auto it = known_keys().find(section);
        if (!body.data().empty()) {
            r.issues.push_back(section + ": key outside any section");
            continue;
        }
        if (it == known_keys().end()) {
            r.issues.push_back(section + ": unknown section");
            continue;
        }
        for (const auto &[key, value] : body) {
            if (!it->second.contains(key)) {
                r.issues.push_back(section + "." + key + ": unknown key");
            }
        }
    }

    ExperimentConfig c;
    if (auto v = r.text("experiment.algorithm")) {
        if (*v == "dqn") {
            c.algorithm = Algorithm::Dqn;
        } else if (*v == "a3c") {
            c.algorithm = Algorithm::A3c;
        } else {
            r.issues.push_back("experiment.algorithm: expected dqn or a3c, got '" + *v + "'");
        }
    }
    if (auto v = r.text("experiment.env")) {
        try {
            c.env = parse_env_kind(*v);
        } catch (const ConfigError &e) {
            r.issues.push_back(std::string{"experiment.env: "} + e.what());
        }
    }
    if (seed_override) {
        c.seed = *seed_override;
    } else if (!r.has("experiment.seed")) {
        r.issues.push_back("experiment.seed: required");
    } else {
        r.integer("experiment.seed", c.seed, std::uint64_t{0});
    }
    r.integer("experiment.episodes", c.episodes, std::size_t{0});
    if (auto v = r.text("experiment.output_dir")) {
        c.output_dir = *v;
    }
    if (auto v = r.text("experiment.label")) {
        c.label = *v;
    }

    r.integer("env.grid_side", c.env_options.grid_side, std::size_t{0});
    if (c.env_options.grid_side != 0) {
        const std::size_t min_side = c.env == EnvKind::SimpleCrossing ? 5 : 4;
        if (c.env_options.grid_side < min_side) {
            r.issues.push_back("env.grid_side: must be 0 (default) or at least " +
                               std::to_string(min_side));
        }
    }
    r.boolean("env.shaped_reward", c.env_options.shaped_reward);

    if (auto v = r.text("model.mode")) {
        try {
            c.model.mode = parse_readout_mode(*v);
        } catch (const ConfigError &e) {
            r.issues.push_back(std::string{"model.mode: "} + e.what());
        }
    }
    r.integer("model.layers", c.model.n_layers, std::size_t{1});
    if (c.model.mode == ReadoutMode::RotationOnly && r.has("model.locality")) {
        r.issues.push_back("model.locality: not allowed with mode rotation_only");
    } else {
        r.integer("model.locality", c.model.locality, std::size_t{1});
    }
    c.model.n_qubits = std::max<std::size_t>(4, c.model.uses_ano() ? c.model.locality : 0);
    r.integer("model.qubits", c.model.n_qubits, std::size_t{1});
    if (c.model.n_qubits > kMaxQubits) {
        r.issues.push_back("model.qubits: at most " + std::to_string(kMaxQubits));
    }
    if (c.model.uses_ano() && c.model.locality > c.model.n_qubits) {
        r.issues.push_back("model.locality: locality exceeds qubit count");
    }
    const std::size_t actions = make_environment(c.env, {})->num_actions();
    if (actions > c.model.n_qubits) {
        r.issues.push_back("model.qubits: " + std::string{to_string(c.env)} + " needs " +
                           std::to_string(actions) + " outputs, more than the qubit count");
    }
    c.model.n_outputs = actions;

    c.dqn.gamma = c.env == EnvKind::MountainCar ? 0.999 : 0.99;
    r.real("dqn.gamma", c.dqn.gamma, 0.0, 1.0);
    r.real("dqn.epsilon_start", c.dqn.epsilon.start, 0.0, 1.0);
    r.real("dqn.epsilon_end", c.dqn.epsilon.end, 0.0, 1.0);
    r.real("dqn.epsilon_decay", c.dqn.epsilon.decay, 0.0, 1.0, true);
    if (c.dqn.epsilon.end > c.dqn.epsilon.start) {
        r.issues.push_back("dqn.epsilon_end: must not exceed dqn.epsilon_start");
    }
    r.integer("dqn.batch_size", c.dqn.batch_size, std::size_t{1});
    r.integer("dqn.capacity", c.dqn.capacity, std::size_t{1});
    if (c.dqn.capacity < c.dqn.batch_size) {
        r.issues.push_back("dqn.capacity: smaller than dqn.batch_size");
    }
    r.integer("dqn.target_period", c.dqn.target_period, std::size_t{1});
    r.integer("dqn.train_every", c.dqn.train_every, std::size_t{1});

    r.integer("a3c.workers", c.a3c.workers, std::size_t{1});
    r.integer("a3c.n_step", c.a3c.n_step, std::size_t{1});
    r.real("a3c.gamma", c.a3c.gamma, 0.0, 1.0);
    constexpr double big = 1e12;
    r.real("a3c.value_coef", c.a3c.value_coef, 0.0, big, true);
    r.real("a3c.entropy_coef", c.a3c.entropy_coef, 0.0, big, true);
    r.real("a3c.grad_clip", c.a3c.grad_clip, 0.0, big);
    r.boolean("a3c.audit_snapshots", c.a3c.audit_snapshots);

    r.real("optimizer.lr_theta", c.optimizer.lr_theta, 0.0, big, true);
    r.real("optimizer.lr_phi", c.optimizer.lr_phi, 0.0, big, true);
    r.real("optimizer.lr_linear", c.optimizer.lr_linear, 0.0, big, true);
    r.real("optimizer.lr_table", c.optimizer.lr_table, 0.0, big, true);
    r.real("optimizer.beta1", c.optimizer.beta1, 0.0, 1.0);
    r.real("optimizer.beta2", c.optimizer.beta2, 0.0, 1.0);
    r.real("optimizer.epsilon", c.optimizer.epsilon, 0.0, big, true);
    if (c.optimizer.beta1 >= 1.0 || c.optimizer.beta2 >= 1.0) {
        r.issues.push_back("optimizer.beta1/beta2: must be below 1");
    }

    if (!r.issues.empty()) {
        throw ValidationError(std::move(r.issues));
    }
    return c;
}

ExperimentConfig load_config(const std::string &path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in{path};
    if (!in) {
        throw ValidationError({path + ": cannot open"});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), seed_override);
}

std::string render_config(const ExperimentConfig &c) {
    std::ostringstream out;
    out << std::setprecision(17) << std::boolalpha;
    out << "[experiment]\n"
        << "algorithm = " << to_string(c.algorithm) << "\n"
        << "env = " << to_string(c.env) << "\n"
        << "seed = " << c.seed << "\n"
        << "episodes = " << c.episodes << "\n"
        << "output_dir = " << c.output_dir << "\n";
    if (!c.label.empty()) {
        out << "label = " << c.label << "\n";
    }
    out << "\n[env]\n"
        << "grid_side = " << c.env_options.grid_side << "\n"
        << "shaped_reward = " << c.env_options.shaped_reward << "\n";
    out << "\n[model]\n"
        << "mode = " << to_string(c.model.mode) << "\n"
        << "qubits = " << c.model.n_qubits << "\n"
        << "layers = " << c.model.n_layers << "\n";
    if (c.model.uses_ano()) {
        out << "locality = " << c.model.locality << "\n";
    }
    out << "\n[dqn]\n"
        << "gamma = " << c.dqn.gamma << "\n"
        << "epsilon_start = " << c.dqn.epsilon.start << "\n"
        << "epsilon_end = " << c.dqn.epsilon.end << "\n"
        << "epsilon_decay = " << c.dqn.epsilon.decay << "\n"
        << "batch_size = " << c.dqn.batch_size << "\n"
        << "capacity = " << c.dqn.capacity << "\n"
        << "target_period = " << c.dqn.target_period << "\n"
        << "train_every = " << c.dqn.train_every << "\n";
    out << "\n[a3c]\n"
        << "workers = " << c.a3c.workers << "\n"
        << "n_step = " << c.a3c.n_step << "\n"
        << "gamma = " << c.a3c.gamma << "\n"
        << "value_coef = " << c.a3c.value_coef << "\n"
        << "entropy_coef = " << c.a3c.entropy_coef << "\n"
        << "grad_clip = " << c.a3c.grad_clip << "\n"
        << "audit_snapshots = " << c.a3c.audit_snapshots << "\n";
    out << "\n[optimizer]\n"
        << "lr_theta = " << c.optimizer.lr_theta << "\n"
        << "lr_phi = " << c.optimizer.lr_phi << "\n"
        << "lr_linear = " << c.optimizer.lr_linear << "\n"
        << "lr_table = " << c.optimizer.lr_table << "\n"
        << "beta1 = " << c.optimizer.beta1 << "\n"
        << "beta2 = " << c.optimizer.beta2 << "\n"
        << "epsilon = " << c.optimizer.epsilon << "\n";
    return out.str();
}

std::string default_label(const ExperimentConfig &c) {
    std::string label = std::string{to_string(c.algorithm)} + "_" + std::string{to_string(c.env)} +
                        "_" + std::string{to_string(c.model.mode)};
    if (c.model.uses_ano()) {
        label += "_k" + std::to_string(c.model.locality);
    }
    return label;
}

} // namespace anoqrl

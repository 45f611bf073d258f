#include "qtdlab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qtdlab {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + tok + "'");
    }
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace

ConfigDoc ConfigDoc::parse(const std::string& text, const std::string& source_name) {
    ConfigDoc doc;
    doc.source_ = source_name;
    std::istringstream iss(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(iss, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const std::string where = source_name + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(where + ": malformed section header '" + line + "'");
            }
            current = trim(line.substr(1, line.size() - 2));
            if (!doc.sections_.count(current)) {
                doc.order_.push_back(current);
                doc.sections_[current] = {};
            }
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        }
        if (current.empty()) {
            throw ConfigError(where + ": entry before any [section]");
        }
        Entry entry{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
        if (entry.key.empty()) throw ConfigError(where + ": empty key");
        for (const Entry& e : doc.sections_[current]) {
            if (e.key == entry.key) {
                throw ConfigError(where + ": duplicate key '" + entry.key + "' in [" + current +
                                  "]");
            }
        }
        doc.sections_[current].push_back(std::move(entry));
    }
    return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
    return parse(read_text_file(path), path);
}

bool ConfigDoc::has_section(const std::string& section) const {
    return sections_.count(section) != 0;
}

const std::vector<ConfigDoc::Entry>& ConfigDoc::section(const std::string& section) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) {
        throw ConfigError(source_ + ": missing section [" + section + "]");
    }
    return it->second;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) return false;
    for (const Entry& e : it->second) {
        if (e.key == key) return true;
    }
    return false;
}

const std::string& ConfigDoc::get(const std::string& section, const std::string& key) const {
    for (const Entry& e : this->section(section)) {
        if (e.key == key) return e.value;
    }
    fail(section, key, "missing");
}

std::string ConfigDoc::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    if (!has(section, key)) return fallback;
    return get(section, key);
}

double ConfigDoc::get_double(const std::string& section, const std::string& key) const {
    return parse_double(get(section, key), source_ + ": [" + section + "] " + key);
}

long long ConfigDoc::get_int(const std::string& section, const std::string& key) const {
    const std::string& v = get(section, key);
    try {
        std::size_t pos = 0;
        const long long out = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        fail(section, key, "expected an integer, got '" + v + "'");
    }
}

std::vector<double> ConfigDoc::get_doubles(const std::string& section,
                                           const std::string& key) const {
    std::vector<double> out;
    for (const std::string& tok : split_ws(get(section, key))) {
        out.push_back(parse_double(tok, source_ + ": [" + section + "] " + key));
    }
    return out;
}

std::vector<int> ConfigDoc::get_ints(const std::string& section, const std::string& key) const {
    std::vector<int> out;
    for (double v : get_doubles(section, key)) {
        if (v != std::floor(v)) fail(section, key, "expected integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void ConfigDoc::fail(const std::string& section, const std::string& key,
                     const std::string& what) const {
    throw ConfigError(source_ + ": [" + section + "] " + key + ": " + what);
}

EnvSpec env_spec_from_config(const ConfigDoc& doc) {
    EnvSpec spec;
    spec.transition_kind = transition_kind_from_name(doc.get("env", "kind"));
    spec.reward_kind = kind_from_name(doc.get("env", "rewards"));
    spec.n_states = doc.has("env", "n_states")
                        ? static_cast<int>(doc.get_int("env", "n_states"))
                        : (spec.transition_kind == TransitionKind::Cycle ? 10 : 20);
    if (doc.has("env", "branching")) spec.branching = static_cast<int>(doc.get_int("env", "branching"));
    if (doc.has("env", "reward_scale")) spec.reward_scale = doc.get_double("env", "reward_scale");
    if (doc.has("env", "gamma")) spec.gamma = doc.get_double("env", "gamma");
    if (doc.has("env", "seed")) spec.seed = static_cast<std::uint64_t>(doc.get_int("env", "seed"));
    return spec;
}

std::string env_spec_to_config(const EnvSpec& spec) {
    std::ostringstream out;
    out << "[env]\n";
    out << "kind = " << transition_kind_name(spec.transition_kind) << "\n";
    out << "rewards = " << kind_name(spec.reward_kind) << "\n";
    out << "n_states = " << spec.n_states << "\n";
    out << "branching = " << spec.branching << "\n";
    out << "reward_scale = " << fmt_double(spec.reward_scale) << "\n";
    out << "gamma = " << fmt_double(spec.gamma) << "\n";
    out << "seed = " << spec.seed << "\n";
    return out.str();
}

ExperimentConfig experiment_from_config(const ConfigDoc& doc) {
    ExperimentConfig cfg;
    cfg.env = env_spec_from_config(doc);
    apply_experiment_section(doc, cfg);
    return cfg;
}

void apply_experiment_section(const ConfigDoc& doc, ExperimentConfig& cfg) {
    cfg.agent = agent_from_name(doc.get("experiment", "agent"));
    if (doc.has("experiment", "m")) cfg.m = static_cast<int>(doc.get_int("experiment", "m"));
    const std::string lr = doc.get_or("experiment", "lr_grid", "auto");
    if (lr == "auto") {
        cfg.lr_grid.clear();
    } else {
        cfg.lr_grid = doc.get_doubles("experiment", "lr_grid");
        if (cfg.lr_grid.empty()) {
            throw ConfigError(doc.source_name() + ": [experiment] lr_grid: empty grid");
        }
        for (std::size_t i = 0; i < cfg.lr_grid.size(); ++i) {
            if (cfg.lr_grid[i] <= 0.0 || (i > 0 && cfg.lr_grid[i] <= cfg.lr_grid[i - 1])) {
                throw ConfigError(doc.source_name() +
                                  ": [experiment] lr_grid: must be positive and ascending");
            }
        }
    }
    if (doc.has("experiment", "n_updates")) {
        cfg.n_updates = static_cast<int>(doc.get_int("experiment", "n_updates"));
    }
    if (doc.has("experiment", "checkpoints")) {
        cfg.checkpoints = doc.get_ints("experiment", "checkpoints");
    }
    if (doc.has("experiment", "n_runs")) {
        cfg.n_runs = static_cast<int>(doc.get_int("experiment", "n_runs"));
    }
    if (doc.has("experiment", "base_seed")) {
        cfg.base_seed = static_cast<std::uint64_t>(doc.get_int("experiment", "base_seed"));
    }
    const std::string inter = doc.get_or("experiment", "interaction", "chain");
    if (inter == "chain") {
        cfg.interaction = Interaction::Chain;
    } else if (inter == "iid") {
        cfg.interaction = Interaction::Iid;
    } else {
        throw ConfigError(doc.source_name() + ": [experiment] interaction: expected chain|iid");
    }
    const std::string wt = doc.get_or("experiment", "weighting", "uniform");
    if (wt == "uniform") {
        cfg.weighting = StateWeighting::Uniform;
    } else if (wt == "stationary") {
        cfg.weighting = StateWeighting::Stationary;
    } else {
        throw ConfigError(doc.source_name() +
                          ": [experiment] weighting: expected uniform|stationary");
    }
}

std::string experiment_to_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << env_spec_to_config(config.env) << "\n[experiment]\n";
    out << "agent = " << agent_name(config.agent) << "\n";
    out << "m = " << config.m << "\n";
    if (config.lr_grid.empty()) {
        out << "lr_grid = auto\n";
    } else {
        out << "lr_grid =";
        for (double lr : config.lr_grid) out << " " << fmt_double(lr);
        out << "\n";
    }
    out << "n_updates = " << config.n_updates << "\n";
    out << "checkpoints =";
    for (int c : config.checkpoints) out << " " << c;
    out << "\n";
    out << "n_runs = " << config.n_runs << "\n";
    out << "base_seed = " << config.base_seed << "\n";
    out << "interaction = " << (config.interaction == Interaction::Chain ? "chain" : "iid") << "\n";
    out << "weighting = "
        << (config.weighting == StateWeighting::Uniform ? "uniform" : "stationary") << "\n";
    return out.str();
}

std::string mrp_to_config(const Mrp& mrp) {
    std::ostringstream out;
    out << "[mrp]\n";
    out << "id = " << (mrp.id().empty() ? "mrp" : mrp.id()) << "\n";
    out << "n_states = " << mrp.n_states() << "\n";
    out << "gamma = " << fmt_double(mrp.gamma()) << "\n";
    out << "\n[transition]\n";
    for (int x = 0; x < mrp.n_states(); ++x) {
        out << "row." << x << " =";
        for (int y = 0; y < mrp.n_states(); ++y) out << " " << fmt_double(mrp.p(x, y));
        out << "\n";
    }
    out << "\n[rewards]\n";
    for (int x = 0; x < mrp.n_states(); ++x) {
        const RewardModel& r = mrp.reward(x);
        out << "state." << x << " = " << kind_name(r.kind) << " " << fmt_double(r.mean) << " "
            << fmt_double(r.scale) << "\n";
    }
    return out.str();
}

Mrp mrp_from_config(const ConfigDoc& doc) {
    const int n = static_cast<int>(doc.get_int("mrp", "n_states"));
    const double gamma = doc.get_double("mrp", "gamma");
    const std::string id = doc.get_or("mrp", "id", "mrp");

    std::vector<double> transition;
    transition.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        const auto row = doc.get_doubles("transition", "row." + std::to_string(x));
        if (static_cast<int>(row.size()) != n) {
            throw ConfigError(doc.source_name() + ": [transition] row." + std::to_string(x) +
                              ": expected " + std::to_string(n) + " entries");
        }
        transition.insert(transition.end(), row.begin(), row.end());
    }

    std::vector<RewardModel> rewards;
    rewards.reserve(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        const std::string key = "state." + std::to_string(x);
        const auto toks = split_ws(doc.get("rewards", key));
        if (toks.size() != 3) {
            throw ConfigError(doc.source_name() + ": [rewards] " + key +
                              ": expected '<kind> <mean> <scale>'");
        }
        RewardModel r;
        r.kind = kind_from_name(toks[0]);
        r.mean = parse_double(toks[1], doc.source_name() + ": [rewards] " + key);
        r.scale = parse_double(toks[2], doc.source_name() + ": [rewards] " + key);
        rewards.push_back(r);
    }
    try {
        return Mrp(n, std::move(transition), std::move(rewards), gamma, id);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(doc.source_name() + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

}  // namespace qtdlab

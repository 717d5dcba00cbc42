#include "ks/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace ks {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Entry {
    std::string value;
    int line;
    bool used = false;
};

class KeyTable {
public:
    explicit KeyTable(const std::string& text) {
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string t = trim(line);
            if (t.empty()) continue;
            const std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected `key = value`", lineno);
            const std::string key = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", lineno);
            if (entries_.count(key)) throw ConfigError("duplicate key `" + key + "`", lineno);
            entries_[key] = Entry{value, lineno, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key `" + key + "`");
        it->second.used = true;
        return it->second.value;
    }

    std::string get_string(const std::string& key, const std::string& fallback) {
        return has(key) ? get_string(key) : fallback;
    }

    double get_double(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) throw ConfigError("missing required key `" + key + "`");
        it->second.used = true;
        return parse_double(it->second.value, it->second.line);
    }

    double get_double(const std::string& key, double fallback) {
        return has(key) ? get_double(key) : fallback;
    }

    long get_int(const std::string& key, long fallback) {
        if (!has(key)) return fallback;
        auto& e = entries_.at(key);
        e.used = true;
        try {
            std::size_t pos = 0;
            const long v = std::stol(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("invalid integer `" + e.value + "` for `" + key + "`", e.line);
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        auto& e = entries_.at(key);
        e.used = true;
        if (e.value == "true" || e.value == "1") return true;
        if (e.value == "false" || e.value == "0") return false;
        throw ConfigError("invalid boolean `" + e.value + "` for `" + key + "`", e.line);
    }

    std::vector<double> get_doubles(const std::string& key) {
        auto& e = entries_.at(key);
        e.used = true;
        std::vector<double> out;
        std::istringstream is(e.value);
        std::string tok;
        while (std::getline(is, tok, ',')) out.push_back(parse_double(trim(tok), e.line));
        if (out.empty()) throw ConfigError("empty list for `" + key + "`", e.line);
        return out;
    }

    std::vector<std::string> get_strings(const std::string& key) {
        auto& e = entries_.at(key);
        e.used = true;
        std::vector<std::string> out;
        std::istringstream is(e.value);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            const std::string t = trim(tok);
            if (!t.empty()) out.push_back(t);
        }
        return out;
    }

    int line_of(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void reject_unused() const {
        for (const auto& [key, e] : entries_) {
            if (!e.used) throw ConfigError("unknown key `" + key + "`", e.line);
        }
    }

private:
    static double parse_double(const std::string& s, int line) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (...) {
            throw ConfigError("invalid number `" + s + "`", line);
        }
    }

    std::map<std::string, Entry> entries_;
};

InitialSpec::Kind parse_kind(const std::string& s, int line) {
    using K = InitialSpec::Kind;
    if (s == "constant") return K::Constant;
    if (s == "equilibrium") return K::Equilibrium;
    if (s == "perturbed_equilibrium") return K::PerturbedEquilibrium;
    if (s == "random_band") return K::RandomBand;
    if (s == "bump") return K::Bump;
    throw ConfigError("unknown initial kind `" + s + "`", line);
}

InitialSpec::V0 parse_v0(const std::string& s, int line) {
    using V = InitialSpec::V0;
    if (s == "zero") return V::Zero;
    if (s == "equilibrium") return V::Equilibrium;
    if (s == "proportional") return V::Proportional;
    throw ConfigError("unknown init.v0 `" + s + "`", line);
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    KeyTable kv(text);
    ScenarioConfig cfg;
    cfg.raw_text = text;

    cfg.params.chi = kv.get_double("params.chi");
    cfg.params.a = kv.get_double("params.a");
    cfg.params.b = kv.get_double("params.b");
    cfg.params.gamma = kv.get_double("params.gamma");
    cfg.params.mu = kv.get_double("params.mu");
    cfg.params.lambda = kv.get_double("params.lambda");
    cfg.params.dim = static_cast<int>(kv.get_int("params.dim", 2));
    try {
        cfg.params.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(std::string("invalid params: ") + e.what());
    }

    cfg.grid_points = static_cast<int>(kv.get_int("grid.points", 64));
    cfg.grid_length = kv.get_double("grid.length");

    cfg.ctl.dt = kv.get_double("ctl.dt");
    const std::string scheme = kv.get_string("ctl.scheme", "etd2rk");
    if (scheme == "etd1")
        cfg.ctl.scheme = Scheme::Etd1;
    else if (scheme == "etd2rk")
        cfg.ctl.scheme = Scheme::Etd2Rk;
    else
        throw ConfigError("unknown scheme `" + scheme + "`", kv.line_of("ctl.scheme"));
    cfg.ctl.positivity_clip = kv.get_bool("ctl.positivity_clip", true);
    cfg.ctl.dealias = kv.get_bool("ctl.dealias", true);

    cfg.t_end = kv.get_double("run.t_end", 1.0);
    cfg.observe_every = kv.get_double("run.observe_every", 0.1);
    cfg.seed = static_cast<std::uint64_t>(kv.get_int("run.seed", 0));

    const std::string kind = kv.get_string("init.kind");
    cfg.init.kind = parse_kind(kind, kv.line_of("init.kind"));
    cfg.init.v0 = parse_v0(kv.get_string("init.v0", "zero"), kv.line_of("init.v0"));
    cfg.init.value = kv.get_double("init.value", 1.0);
    cfg.init.amplitude = kv.get_double("init.amplitude", 0.1);
    cfg.init.band_min = kv.get_double("init.min", 0.0);
    cfg.init.band_max = kv.get_double("init.max", 1.0);
    cfg.init.smoothing = static_cast<int>(kv.get_int("init.smoothing", 4));
    if (kv.has("init.center")) cfg.init.center = kv.get_doubles("init.center");
    cfg.init.width = kv.get_double("init.width", 1.0);
    cfg.init.height = kv.get_double("init.height", 1.0);
    cfg.init.bump_floor = kv.get_double("init.floor", 0.0);

    if (kv.has("free.sigma")) cfg.sigma = kv.get_double("free.sigma");
    if (kv.has("free.epsilon")) cfg.epsilon = kv.get_double("free.epsilon");
    if (kv.has("free.xi")) cfg.xi = kv.get_double("free.xi");

    cfg.t_transient = kv.get_double("persistence.t_transient", 10.0);
    cfg.decay_window_frac = kv.get_double("decay.window_frac", 0.4);
    cfg.decay_rate_slack = kv.get_double("decay.rate_slack", 0.1);
    cfg.decay_final_dev = kv.get_double("decay.final_dev", 1e-3);
    cfg.tol_bounds = kv.get_double("tol.bounds", 1e-2);
    if (kv.has("checks")) cfg.checks = kv.get_strings("checks");

    if (kv.has("sweep.param")) {
        cfg.sweep_param = kv.get_string("sweep.param");
        if (!kv.has("sweep.values"))
            throw ConfigError("sweep.param requires sweep.values");
        cfg.sweep_values = kv.get_doubles("sweep.values");
    } else if (kv.has("sweep.values")) {
        throw ConfigError("sweep.values requires sweep.param", kv.line_of("sweep.values"));
    }

    kv.reject_unused();

    // structural validation beyond parsing
    try {
        Grid probe(cfg.params.dim, cfg.grid_points, cfg.grid_length);
        (void)probe;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid grid: ") + e.what());
    }
    if (!(cfg.t_end >= 0.0)) throw ConfigError("run.t_end must be nonnegative");
    if (!(cfg.observe_every > 0.0)) throw ConfigError("run.observe_every must be positive");
    using K = InitialSpec::Kind;
    if (cfg.init.kind == K::RandomBand) {
        if (cfg.init.band_min < 0.0)
            throw ConfigError("init.min must be nonnegative");
        if (!(cfg.init.band_max >= cfg.init.band_min))
            throw ConfigError("init.max must not be below init.min");
    }
    if (cfg.init.kind == K::Bump && !(cfg.init.bump_floor > 0.0) &&
        (std::find(cfg.checks.begin(), cfg.checks.end(), "persistence") != cfg.checks.end() ||
         std::find(cfg.checks.begin(), cfg.checks.end(), "decay") != cfg.checks.end()))
        throw ConfigError("bump initial data needs init.floor > 0 for persistence/decay checks");
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

FreeParameters resolve_free_parameters(const ScenarioConfig& cfg) {
    FreeParameters f = default_free_parameters(cfg.params);
    if (cfg.sigma) f.sigma = *cfg.sigma;
    if (cfg.epsilon) f.epsilon = *cfg.epsilon;
    if (cfg.xi) f.xi = *cfg.xi;
    return f;
}

}  // namespace ks

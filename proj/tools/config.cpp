#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace rencli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KvFile {
    std::map<std::string, std::string> entries;
    std::map<std::string, bool> used;

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    std::string raw(const std::string& key, const std::string& fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        used[key] = true;
        return it->second;
    }

    double number(const std::string& key, double fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        used[key] = true;
        try {
            size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected a number, got '" + it->second + "'");
        }
    }

    long integer(const std::string& key, long fallback) {
        auto it = entries.find(key);
        if (it == entries.end()) return fallback;
        used[key] = true;
        try {
            size_t pos = 0;
            const long v = std::stol(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected an integer, got '" + it->second + "'");
        }
    }
};

KvFile read_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    KvFile kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno), "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(path + ":" + std::to_string(lineno), "empty key");
        if (kv.entries.count(key)) throw ConfigError(key, "duplicate key");
        kv.entries[key] = value;
    }
    return kv;
}

std::vector<double> number_list(KvFile& kv, const std::string& key, std::vector<double> fallback) {
    if (!kv.has(key)) return fallback;
    const std::string raw = kv.raw(key, "");
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(key, "expected a comma-separated number list, got '" + raw + "'");
        }
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

} // namespace

Scenario parse_scenario_file(const std::string& path) {
    KvFile kv = read_kv(path);
    Scenario sc;

    sc.grid = rek_grid_spec_default();
    sc.grid.x_max = kv.number("grid.x_max", sc.grid.x_max);
    sc.grid.p_max = kv.number("grid.p_max", sc.grid.p_max);
    sc.grid.n_x = static_cast<int32_t>(kv.integer("grid.n_x", sc.grid.n_x));
    sc.grid.n_p = static_cast<int32_t>(kv.integer("grid.n_p", sc.grid.n_p));
    sc.grid.n_omega = static_cast<int32_t>(kv.integer("grid.n_omega", sc.grid.n_omega));
    sc.grid.t_max = kv.number("grid.t_max", sc.grid.t_max);
    sc.grid.n_t = static_cast<int32_t>(kv.integer("grid.n_t", sc.grid.n_t));

    sc.op = rek_operator_config_default();
    sc.op.kernel.delta = kv.number("kernel.delta", sc.op.kernel.delta);
    sc.op.kernel.sigma_tilde0 = kv.number("kernel.sigma_tilde", sc.op.kernel.sigma_tilde0);
    sc.op.kernel.c0 = kv.number("kernel.c0", sc.op.kernel.c0);

    const std::string ykind = kv.raw("y.kind", "linear");
    if (ykind == "constant")
        sc.op.y.kind = REK_Y_CONSTANT;
    else if (ykind == "linear")
        sc.op.y.kind = REK_Y_LINEAR;
    else
        throw ConfigError("y.kind", "expected 'constant' or 'linear', got '" + ykind + "'");
    sc.op.y.y0 = kv.number("y.y0", sc.op.y.y0);
    sc.op.y.b = kv.number("y.b", sc.op.y.b);

    sc.op.a = kv.number("operator.a", sc.op.a);
    const std::string mode = kv.raw("operator.mode", "enskog");
    if (mode == "enskog")
        sc.op.mode = REK_MODE_ENSKOG;
    else if (mode == "boltzmann")
        sc.op.mode = REK_MODE_BOLTZMANN;
    else
        throw ConfigError("operator.mode", "expected 'enskog' or 'boltzmann', got '" + mode + "'");
    sc.op.lambda = kv.number("operator.lambda", sc.op.lambda);

    sc.solver_r = kv.raw("solver.R", sc.solver_r);
    sc.solver_k = kv.raw("solver.K", sc.solver_k);
    sc.solver_l = kv.raw("solver.L", sc.solver_l);
    sc.tol = kv.number("solver.tol", sc.tol);
    sc.max_iter = static_cast<int>(kv.integer("solver.max_iter", sc.max_iter));

    sc.initial_kind = kv.raw("initial.kind", sc.initial_kind);
    if (sc.initial_kind != "zero" && sc.initial_kind != "gaussian" && sc.initial_kind != "from_file")
        throw ConfigError("initial.kind", "expected 'zero', 'gaussian' or 'from_file'");
    sc.amplitude = kv.number("initial.amplitude", sc.amplitude);
    sc.x_width = kv.number("initial.x_width", sc.x_width);
    sc.p_width = kv.number("initial.p_width", sc.p_width);
    sc.initial_path = kv.raw("initial.path", sc.initial_path);
    if (sc.initial_kind == "from_file" && sc.initial_path.empty())
        throw ConfigError("initial.path", "required when initial.kind = from_file");

    sc.output_dir = kv.raw("output_dir", sc.output_dir);
    sc.seed = static_cast<std::uint64_t>(kv.integer("seed", static_cast<long>(sc.seed)));
    sc.hypotheses_samples = static_cast<int>(kv.integer("hypotheses.n_samples", sc.hypotheses_samples));
    sc.boltzmann_a_values = number_list(kv, "boltzmann.a_values", sc.boltzmann_a_values);
    sc.selftest_samples = kv.integer("selftest.samples", sc.selftest_samples);

    for (const auto& [key, value] : kv.entries)
        if (!kv.used.count(key)) throw ConfigError(key, "unknown key");
    return sc;
}

} // namespace rencli

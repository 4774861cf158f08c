#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "strongdamp/analysis.hpp"
#include "strongdamp/oracle_solvers.hpp"

namespace strongdamp::analysis {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

class KvFile {
public:
    explicit KvFile(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file: " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
            const std::string key = trim(t.substr(0, eq));
            const std::string val = trim(t.substr(eq + 1));
            if (key.empty())
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": empty key");
            kv_[key] = val;
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string str(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }

    std::string require(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end())
            throw ConfigError("config: missing required key '" + key + "'");
        return it->second;
    }

    double num(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        return parse_num(key, it->second);
    }

    long integer(const std::string& key, long dflt) const {
        const double v = num(key, static_cast<double>(dflt));
        return static_cast<long>(v);
    }

    bool flag(const std::string& key, bool dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        std::string v = it->second;
        std::transform(v.begin(), v.end(), v.begin(), ::tolower);
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw ConfigError("config: key '" + key + "' is not a boolean: " + v);
    }

    std::vector<double> vec(const std::string& key) const {
        std::vector<double> out;
        auto it = kv_.find(key);
        if (it == kv_.end()) return out;
        std::stringstream ss(it->second);
        std::string piece;
        while (std::getline(ss, piece, ','))
            out.push_back(parse_num(key, trim(piece)));
        return out;
    }

private:
    static double parse_num(const std::string& key, const std::string& v) {
        try {
            size_t used = 0;
            const double x = std::stod(v, &used);
            if (trim(v.substr(used)).size())
                throw std::invalid_argument("trailing characters");
            return x;
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key +
                              "' is not a number: " + v);
        }
    }

    std::map<std::string, std::string> kv_;
};

data::InitialDatumSpec parse_datum(const KvFile& kv, const std::string& prefix,
                                   int n) {
    data::InitialDatumSpec spec;
    spec.dimension = n;
    std::string family = kv.str(prefix + ".family", "zero");
    std::transform(family.begin(), family.end(), family.begin(), ::tolower);

    auto vec_or_zero = [&](const std::string& key) {
        std::vector<double> v = kv.vec(key);
        if (v.empty()) v.assign(n, 0.0);
        if (v.size() != static_cast<size_t>(n))
            throw ConfigError("config: '" + key + "' must have " +
                              std::to_string(n) + " components");
        return v;
    };

    if (family == "zero") {
        data::GaussianSpec g;
        g.amplitude = 0.0;
        g.center.assign(n, 0.0);
        g.width = 1.0;
        spec.family = g;
    } else if (family == "gaussian") {
        data::GaussianSpec g;
        g.amplitude = kv.num(prefix + ".amplitude", 1.0);
        g.center = vec_or_zero(prefix + ".center");
        g.width = kv.num(prefix + ".width", 1.0);
        spec.family = g;
    } else if (family == "dipole") {
        data::DipoleSpec d;
        d.amplitude = kv.num(prefix + ".amplitude", 1.0);
        d.offset = vec_or_zero(prefix + ".offset");
        d.width = kv.num(prefix + ".width", 1.0);
        spec.family = d;
    } else if (family == "bump") {
        data::BumpSpec b;
        b.amplitude = kv.num(prefix + ".amplitude", 1.0);
        b.center = vec_or_zero(prefix + ".center");
        b.radius = kv.num(prefix + ".radius", 1.0);
        spec.family = b;
    } else if (family == "samples") {
        const std::string file = kv.require(prefix + ".file");
        oracle::GridField f = oracle::load_field(file);
        if (f.n != n)
            throw ConfigError("config: '" + prefix +
                              ".file' has dimension " + std::to_string(f.n) +
                              ", expected " + std::to_string(n));
        data::GridSamplesSpec g;
        g.N = f.N;
        g.L = f.L;
        g.values = std::move(f.values);
        spec.family = g;
    } else {
        throw ConfigError("config: unknown family '" + family + "' for " +
                          prefix);
    }
    return spec;
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    KvFile kv(path);
    ExperimentConfig cfg;
    cfg.dimension = static_cast<int>(kv.integer("dimension", 1));
    if (cfg.dimension < 1 || cfg.dimension > 3)
        throw ConfigError("config: dimension must be 1, 2 or 3");
    cfg.u0 = parse_datum(kv, "u0", cfg.dimension);
    cfg.u1 = parse_datum(kv, "u1", cfg.dimension);
    cfg.delta0 = kv.num("delta0", cfg.delta0);
    if (!(cfg.delta0 > 0.0 && cfg.delta0 < 2.0))
        throw ConfigError("config: delta0 must be in (0, 2)");
    cfg.t_min = kv.num("t_min", cfg.t_min);
    cfg.t_max = kv.num("t_max", cfg.t_max);
    cfg.t_points = static_cast<int>(kv.integer("t_points", cfg.t_points));
    if (!(cfg.t_min > 0.0))
        throw ConfigError("config: t_min must be positive");
    cfg.quad_tol = kv.num("quad_tol", cfg.quad_tol);
    cfg.grid_enabled = kv.flag("grid.enabled", cfg.grid_enabled);
    cfg.grid_N = static_cast<int>(kv.integer("grid.N", cfg.grid_N));
    cfg.grid_L = kv.num("grid.L", cfg.grid_L);
    cfg.grid_t = kv.num("grid.t", cfg.grid_t);
    cfg.out_csv = kv.str("output.csv", "");
    cfg.out_json = kv.str("output.json", "");
    cfg.seed = static_cast<std::uint64_t>(kv.integer("seed", 12345));
    cfg.samples = static_cast<int>(kv.integer("samples", cfg.samples));
    if (kv.has("hf.r_samples")) cfg.hf_r_samples = kv.vec("hf.r_samples");
    cfg.kirchhoff_t = kv.num("kirchhoff.t", cfg.kirchhoff_t);
    cfg.kirchhoff_P0 = kv.num("kirchhoff.P0", cfg.kirchhoff_P0);
    cfg.kirchhoff_P1 = kv.num("kirchhoff.P1", cfg.kirchhoff_P1);
    cfg.kirchhoff_N2 =
        static_cast<int>(kv.integer("kirchhoff.N2", cfg.kirchhoff_N2));
    cfg.kirchhoff_N3 =
        static_cast<int>(kv.integer("kirchhoff.N3", cfg.kirchhoff_N3));
    cfg.kirchhoff_L = kv.num("kirchhoff.L", cfg.kirchhoff_L);
    if (kv.has("check.exponent_max"))
        cfg.check_exponent_max = kv.num("check.exponent_max", 0.0);
    if (kv.has("check.trend_slope_max"))
        cfg.check_trend_slope_max = kv.num("check.trend_slope_max", 0.0);
    return cfg;
}

} // namespace strongdamp::analysis

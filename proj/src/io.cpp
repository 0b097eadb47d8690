#include "chirpfit/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "chirpfit/synthesis.hpp"

namespace chirpfit {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
    }
}

NoiseKind noise_kind_from_string(const std::string& s) {
    if (s == "iid") return NoiseKind::iid;
    if (s == "ma1") return NoiseKind::ma1;
    if (s == "ar1") return NoiseKind::ar1;
    if (s == "coeffs") return NoiseKind::coeffs;
    throw ConfigError("unknown noise kind: " + s);
}

std::string noise_kind_name(NoiseKind k) {
    switch (k) {
        case NoiseKind::iid: return "iid";
        case NoiseKind::ma1: return "ma1";
        case NoiseKind::ar1: return "ar1";
        case NoiseKind::coeffs: return "coeffs";
    }
    return "iid";
}

NoiseSpec parse_noise(const json& j) {
    require_keys(j, "noise", {"kind", "sigma2", "rho", "phi", "coeffs", "burn_in"});
    NoiseSpec ns;
    ns.kind = noise_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("sigma2")) ns.sigma2 = j.at("sigma2").get<double>();
    if (j.contains("rho")) ns.rho = j.at("rho").get<double>();
    if (j.contains("phi")) ns.phi = j.at("phi").get<double>();
    if (j.contains("burn_in")) ns.burn_in = j.at("burn_in").get<int>();
    if (j.contains("coeffs")) ns.coeffs = j.at("coeffs").get<std::vector<double>>();
    return ns;
}

ModelSpec parse_model(const json& j) {
    require_keys(j, "model", {"components", "noise", "noiseless"});
    ModelSpec m;
    if (!j.contains("components") || !j.at("components").is_array())
        throw ConfigError("model.components must be an array");
    for (const auto& cj : j.at("components")) {
        require_keys(cj, "component", {"a", "b", "alpha", "beta"});
        ChirpComponent c;
        c.a = cj.at("a").get<double>();
        c.b = cj.at("b").get<double>();
        c.alpha = cj.at("alpha").get<double>();
        c.beta = cj.at("beta").get<double>();
        m.components.push_back(c);
    }
    if (j.contains("noiseless")) m.noiseless = j.at("noiseless").get<bool>();
    if (j.contains("noise"))
        m.noise = parse_noise(j.at("noise"));
    else if (!m.noiseless)
        throw ConfigError("model needs either a noise block or noiseless=true");
    return m;
}

GridSpec parse_grid(const json& j) {
    require_keys(j, "grid",
                 {"alpha_count", "beta_count", "beta_stride", "alpha_range", "beta_range"});
    GridSpec g;
    if (j.contains("alpha_count")) g.alpha_count = j.at("alpha_count").get<long long>();
    if (j.contains("beta_count")) g.beta_count = j.at("beta_count").get<long long>();
    if (j.contains("beta_stride")) g.beta_stride = j.at("beta_stride").get<long long>();
    auto range = [&](const char* key, double& lo, double& hi) {
        if (!j.contains(key)) return;
        const auto& r = j.at(key);
        if (!r.is_array() || r.size() != 2)
            throw ConfigError(std::string(key) + " must be [lo, hi]");
        lo = r[0].get<double>();
        hi = r[1].get<double>();
    };
    range("alpha_range", g.alpha_min, g.alpha_max);
    range("beta_range", g.beta_min, g.beta_max);
    return g;
}

OptimizerConfig parse_optimizer(const json& j) {
    require_keys(j, "optimizer",
                 {"param_tol", "value_tol", "max_iters", "init_step_alpha", "init_step_beta",
                  "reflection", "expansion", "contraction", "shrink"});
    OptimizerConfig c;
    if (j.contains("param_tol")) c.param_tol = j.at("param_tol").get<double>();
    if (j.contains("value_tol")) c.value_tol = j.at("value_tol").get<double>();
    if (j.contains("max_iters")) c.max_iters = j.at("max_iters").get<int>();
    if (j.contains("init_step_alpha")) c.init_step_alpha = j.at("init_step_alpha").get<double>();
    if (j.contains("init_step_beta")) c.init_step_beta = j.at("init_step_beta").get<double>();
    if (j.contains("reflection")) c.reflection = j.at("reflection").get<double>();
    if (j.contains("expansion")) c.expansion = j.at("expansion").get<double>();
    if (j.contains("contraction")) c.contraction = j.at("contraction").get<double>();
    if (j.contains("shrink")) c.shrink = j.at("shrink").get<double>();
    return c;
}

json model_to_json(const ModelSpec& m) {
    json jm;
    jm["components"] = json::array();
    for (const auto& c : m.components)
        jm["components"].push_back({{"a", c.a}, {"b", c.b}, {"alpha", c.alpha}, {"beta", c.beta}});
    jm["noiseless"] = m.noiseless;
    json jn;
    jn["kind"] = noise_kind_name(m.noise.kind);
    jn["sigma2"] = m.noise.sigma2;
    if (m.noise.kind == NoiseKind::ma1) jn["rho"] = m.noise.rho;
    if (m.noise.kind == NoiseKind::ar1) {
        jn["phi"] = m.noise.phi;
        jn["burn_in"] = m.noise.burn_in;
    }
    if (m.noise.kind == NoiseKind::coeffs) jn["coeffs"] = m.noise.coeffs;
    jm["noise"] = jn;
    return jm;
}

}  // namespace

void write_signal_csv(const std::string& path, const Signal& y) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "t,y\n";
    for (std::size_t i = 0; i < y.size(); ++i)
        out << (i + 1) << ',' << fmt(y[i]) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    Signal y;
    std::string line;
    int lineno = 0;
    long long expected_t = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && !line.empty() &&
            !(std::isdigit(static_cast<unsigned char>(line[0])) || line[0] == '-' ||
              line[0] == '+' || line[0] == '.'))
            continue;  // header row
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected \"t,y\"");
        const std::string tf = line.substr(0, comma);
        const std::string yf = line.substr(comma + 1);
        char* end = nullptr;
        const long long t = std::strtoll(tf.c_str(), &end, 10);
        if (end == tf.c_str() || *end != '\0')
            throw IoError(path + ":" + std::to_string(lineno) + ": bad sample index \"" + tf +
                          "\"");
        if (t != expected_t)
            throw IoError(path + ":" + std::to_string(lineno) + ": expected t=" +
                          std::to_string(expected_t) + ", found " + std::to_string(t));
        const double v = std::strtod(yf.c_str(), &end);
        if (end == yf.c_str() || *end != '\0')
            throw IoError(path + ":" + std::to_string(lineno) + ": bad value \"" + yf + "\"");
        y.push_back(v);
        ++expected_t;
    }
    if (y.empty()) throw IoError(path + ": no samples found");
    return y;
}

McScenario ScenarioDoc::to_scenario() const {
    McScenario s;
    s.model = model;
    s.n = n;
    s.reps = reps;
    s.methods = methods;
    s.base_seed = base_seed;
    s.grid = grid;
    s.optimizer = optimizer;
    return s;
}

ScenarioDoc parse_scenario_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        require_keys(j, "config",
                     {"version", "n", "model", "reps", "methods", "base_seed", "grid",
                      "optimizer"});
        ScenarioDoc doc;
        doc.version = j.at("version").get<int>();
        if (doc.version != 1)
            throw ConfigError("unsupported config version " + std::to_string(doc.version));
        doc.n = j.at("n").get<int>();
        if (doc.n < 1) throw ConfigError("n must be positive");
        doc.model = parse_model(j.at("model"));
        if (j.contains("reps")) doc.reps = j.at("reps").get<int>();
        if (j.contains("methods"))
            for (const auto& mj : j.at("methods"))
                doc.methods.push_back(method_from_string(mj.get<std::string>()));
        if (j.contains("base_seed")) {
            doc.base_seed = j.at("base_seed").get<std::uint64_t>();
            doc.has_base_seed = true;
        }
        if (j.contains("grid")) doc.grid = parse_grid(j.at("grid"));
        if (j.contains("optimizer")) doc.optimizer = parse_optimizer(j.at("optimizer"));
        return doc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
}

ScenarioDoc load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_json(ss.str());
}

void write_model_sidecar(const std::string& path, const ModelSpec& model, int n,
                         std::uint64_t seed) {
    json j;
    j["version"] = 1;
    j["n"] = n;
    j["seed"] = seed;
    j["model"] = model_to_json(model);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_fit_report_json(const std::string& path, const FitResult& fit, int n,
                           const std::vector<double>* bic_values, int p_hat) {
    json j;
    j["method"] = method_name(fit.method);
    j["n"] = n;
    j["components"] = json::array();
    for (const auto& c : fit.components)
        j["components"].push_back(
            {{"a", c.a}, {"b", c.b}, {"alpha", c.alpha}, {"beta", c.beta}});
    j["steps"] = json::array();
    for (const auto& s : fit.steps) {
        json js;
        js["grid_start"] = {{"alpha", s.grid_start.alpha},
                            {"beta", s.grid_start.beta},
                            {"value", s.grid_start.value},
                            {"j", s.grid_start.j},
                            {"k", s.grid_start.k}};
        js["objective"] = s.objective;
        js["nm_iterations"] = s.nm_iterations;
        js["converged"] = s.converged;
        js["duplicate"] = s.duplicate;
        j["steps"].push_back(js);
    }
    j["sse_trajectory"] = fit.sse_trajectory;
    j["elapsed_ms"] = fit.elapsed_ms;
    if (bic_values) {
        j["bic"] = *bic_values;
        j["p_hat"] = p_hat;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

void write_mc_csv(const std::string& path, const McStats& stats) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "method,parameter,true,average,bias,mse,avar,reps,failures\n";
    for (const auto& c : stats.cells) {
        out << method_name(c.method) << ',' << c.parameter << (c.component + 1) << ','
            << fmt(c.truth) << ',' << fmt(c.average) << ',' << fmt(c.bias) << ',' << fmt(c.mse)
            << ',' << fmt(c.avar) << ',' << stats.reps << ',' << stats.failures << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_surface_csv(const std::string& path, const std::vector<SurfacePoint>& points) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "alpha,beta,I\n";
    for (const auto& p : points)
        out << fmt(p.alpha) << ',' << fmt(p.beta) << ',' << fmt(p.value) << '\n';
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace chirpfit

#pragma once

// Scenario configs, batch runs and the files they leave behind.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "forcelab/classify.hpp"
#include "forcelab/report_json.hpp"

namespace forcelab {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kMaxSteps = 1e7;

/// Invalid config, with the JSON pointer of the offending value.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string pointer, const std::string& msg)
        : std::runtime_error(pointer + ": " + msg), pointer_(std::move(pointer)), message_(msg) {}
    [[nodiscard]] const std::string& pointer() const noexcept { return pointer_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    std::string pointer_;
    std::string message_;
};

inline const std::vector<std::string>& known_outputs() {
    static const std::vector<std::string> v = {"report", "trajectories", "field", "plotdata"};
    return v;
}

struct ScenarioConfig {
    Scenario scenario;
    std::vector<std::string> outputs = {"report"};

    [[nodiscard]] bool wants(const std::string& o) const {
        return std::find(outputs.begin(), outputs.end(), o) != outputs.end();
    }
};

namespace detail {

using RawJson = nlohmann::json;

inline const RawJson& require(const RawJson& obj, const std::string& key, const std::string& ptr) {
    if (!obj.contains(key)) throw ConfigError(ptr, "missing required key '" + key + "'");
    return obj.at(key);
}

inline double number_at(const RawJson& v, const std::string& ptr) {
    if (!v.is_number()) throw ConfigError(ptr, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(ptr, "expected a finite number");
    return x;
}

inline std::string string_at(const RawJson& v, const std::string& ptr) {
    if (!v.is_string()) throw ConfigError(ptr, "expected a string");
    return v.get<std::string>();
}

inline Expr expr_at(const RawJson& v, const std::string& ptr) {
    const std::string text = string_at(v, ptr);
    try {
        return parse_expr(text);
    } catch (const ParseError& e) {
        throw ConfigError(ptr, std::string("cannot parse '") + text + "': " + e.what());
    }
}

inline WeightClass weight_class_at(const RawJson& v, const std::string& ptr) {
    const std::string s = string_at(v, ptr);
    for (auto c : {WeightClass::NonDecreasing, WeightClass::Subexponential, WeightClass::ExponentialRate,
                   WeightClass::Unverified})
        if (s == weight_class_name(c)) return c;
    throw ConfigError(ptr, "unknown weight class '" + s +
                               "' (non_decreasing, subexponential, exponential_rate, unverified)");
}

inline WeightFunction weight_at(const RawJson& v, const std::string& ptr) {
    if (v.is_string()) {
        expr_at(v, ptr);
        return WeightFunction::parse(v.get<std::string>());
    }
    if (!v.is_object()) throw ConfigError(ptr, "expected a string or an object {expr, class, rate}");
    const Expr e = expr_at(require(v, "expr", ptr), ptr + "/expr");
    WeightClass cls = WeightClass::Unverified;
    if (v.contains("class")) cls = weight_class_at(v.at("class"), ptr + "/class");
    double rate = 0.0;
    if (v.contains("rate")) rate = number_at(v.at("rate"), ptr + "/rate");
    if (cls == WeightClass::ExponentialRate && !v.contains("rate"))
        throw ConfigError(ptr, "class exponential_rate needs a rate");
    return WeightFunction::parse(v.at("expr").get<std::string>(), cls, rate);
}

inline Matrix matrix_at(const RawJson& v, const std::string& ptr) {
    if (!v.is_array() || v.empty()) throw ConfigError(ptr, "expected a non-empty array");
    if (v[0].is_array()) {
        const auto n = static_cast<Eigen::Index>(v.size());
        Matrix A(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const std::string row_ptr = ptr + "/" + std::to_string(i);
            const auto& row = v[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
                throw ConfigError(row_ptr, "expected a row of length " + std::to_string(n));
            for (Eigen::Index j = 0; j < n; ++j)
                A(i, j) = number_at(row[static_cast<std::size_t>(j)], row_ptr + "/" + std::to_string(j));
        }
        return A;
    }
    // flat, row-major
    const auto n = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(v.size()))));
    if (static_cast<std::size_t>(n * n) != v.size())
        throw ConfigError(ptr, "flat matrix length " + std::to_string(v.size()) + " is not a square");
    Matrix A(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k)
        A(k / n, k % n) = number_at(v[static_cast<std::size_t>(k)], ptr + "/" + std::to_string(k));
    return A;
}

inline void apply_tolerances(const RawJson& v, const std::string& ptr, ClassifyOptions& o) {
    if (!v.is_object()) throw ConfigError(ptr, "expected an object");
    for (auto it = v.begin(); it != v.end(); ++it) {
        const std::string key = it.key();
        const std::string kp = ptr + "/" + key;
        const double x = number_at(it.value(), kp);
        if (!(x > 0.0)) throw ConfigError(kp, "must be positive");
        if (key == "quad") o.quad_tol = x;
        else if (key == "eps_zero") o.limsup.eps_zero = x;
        else if (key == "tau") o.limsup.tau = x;
        else if (key == "rho_inf") o.limsup.rho_inf = x;
        else if (key == "cap") o.limsup.cap = x;
        else if (key == "r2_min") o.exp_stability.r2_min = x;
        else if (key == "rate_min") o.exp_stability.rate_min = x;
        else if (key == "liapunov_margin") o.liapunov_margin = x;
        else throw ConfigError(kp, "unknown tolerance");
    }
}

inline void scenario_body(const RawJson& v, const std::string& ptr, ScenarioConfig& cfg);

inline ScenarioConfig scenario_at(const RawJson& v, const std::string& ptr) {
    if (!v.is_object()) throw ConfigError(ptr, "expected an object");
    static const std::set<std::string> keys = {"id",      "theorem", "forcing",     "weight",     "aux_weight",
                                               "alpha",   "system",  "y0",          "grid",       "delta",
                                               "theta_count", "tolerances", "epsilons", "outputs", "norm"};
    for (auto it = v.begin(); it != v.end(); ++it)
        if (!keys.count(it.key())) throw ConfigError(ptr + "/" + it.key(), "unknown key");

    ScenarioConfig cfg;
    Scenario& s = cfg.scenario;
    s.id = string_at(require(v, "id", ptr), ptr + "/id");
    static const std::regex id_re("[A-Za-z0-9_.-]+");
    if (!std::regex_match(s.id, id_re) || s.id == "." || s.id == "..")
        throw ConfigError(ptr + "/id", "id must match [A-Za-z0-9_.-]+");
    try {
        scenario_body(v, ptr, cfg);
    } catch (const ConfigError& e) {
        throw ConfigError(e.pointer(), "scenario '" + s.id + "': " + e.message());
    }
    return cfg;
}

inline void scenario_body(const RawJson& v, const std::string& ptr, ScenarioConfig& cfg) {
    Scenario& s = cfg.scenario;

    s.theorem = string_at(require(v, "theorem", ptr), ptr + "/theorem");
    if (!is_supported_theorem(s.theorem)) throw ConfigError(ptr + "/theorem", "unknown theorem id '" + s.theorem + "'");

    const auto& fv = require(v, "forcing", ptr);
    if (fv.is_array()) {
        if (fv.empty()) throw ConfigError(ptr + "/forcing", "expected at least one component");
        for (std::size_t i = 0; i < fv.size(); ++i) {
            const std::string ip = ptr + "/forcing/" + std::to_string(i);
            expr_at(fv[i], ip);
            s.forcing.push_back(ScalarFunction::parse(fv[i].get<std::string>()));
        }
    } else {
        expr_at(fv, ptr + "/forcing");
        s.forcing.push_back(ScalarFunction::parse(fv.get<std::string>()));
    }

    s.weight = weight_at(require(v, "weight", ptr), ptr + "/weight");
    if (v.contains("aux_weight")) s.aux_weight = weight_at(v.at("aux_weight"), ptr + "/aux_weight");

    if (v.contains("alpha") == v.contains("system"))
        throw ConfigError(ptr, "exactly one of 'alpha' and 'system' is required");
    if (v.contains("alpha")) {
        s.alpha = number_at(v.at("alpha"), ptr + "/alpha");
        if (!(*s.alpha > 0.0)) throw ConfigError(ptr + "/alpha", "alpha must be positive");
        if (s.forcing.size() != 1) throw ConfigError(ptr + "/forcing", "a scalar equation takes one forcing term");
    } else {
        const auto& sys = v.at("system");
        const std::string sp = ptr + "/system";
        if (!sys.is_object()) throw ConfigError(sp, "expected an object {A, zeta}");
        s.A = matrix_at(require(sys, "A", sp), sp + "/A");
        const auto n = s.A->rows();
        if (static_cast<Eigen::Index>(s.forcing.size()) != n)
            throw ConfigError(ptr + "/forcing", "expected " + std::to_string(n) + " components to match A");
        s.zeta = Vector::Zero(n);
        if (sys.contains("zeta")) {
            const auto& z = sys.at("zeta");
            if (!z.is_array() || static_cast<Eigen::Index>(z.size()) != n)
                throw ConfigError(sp + "/zeta", "expected an array of length " + std::to_string(n));
            for (Eigen::Index i = 0; i < n; ++i)
                s.zeta[i] = number_at(z[static_cast<std::size_t>(i)], sp + "/zeta/" + std::to_string(i));
        }
    }
    if (v.contains("y0")) s.y0 = number_at(v.at("y0"), ptr + "/y0");

    const auto& gv = require(v, "grid", ptr);
    if (!gv.is_object()) throw ConfigError(ptr + "/grid", "expected an object {t_end, h}");
    const double t_end = number_at(require(gv, "t_end", ptr + "/grid"), ptr + "/grid/t_end");
    const double h = number_at(require(gv, "h", ptr + "/grid"), ptr + "/grid/h");
    if (!(h > 0.0)) throw ConfigError(ptr + "/grid/h", "step must be positive");
    if (!(t_end > 0.0)) throw ConfigError(ptr + "/grid/t_end", "horizon must be positive");
    if (t_end / h > kMaxSteps)
        throw ConfigError(ptr + "/grid", "t_end/h = " + format_double(t_end / h) + " exceeds the step budget 1e7");
    try {
        s.grid = Grid::span(0.0, t_end, h);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ptr + "/grid", e.what());
    }

    if (v.contains("delta")) s.delta = number_at(v.at("delta"), ptr + "/delta");
    if (!(s.delta > 0.0) || s.delta > t_end / 4)
        throw ConfigError(ptr + "/delta", "delta must lie in (0, t_end/4]");
    if (v.contains("theta_count")) {
        const auto& tc = v.at("theta_count");
        if (!tc.is_number_integer() || tc.get<long long>() < 16 || tc.get<long long>() > 4096)
            throw ConfigError(ptr + "/theta_count", "expected an integer in [16, 4096]");
        s.theta_count = static_cast<int>(tc.get<long long>());
    }
    if (v.contains("tolerances")) apply_tolerances(v.at("tolerances"), ptr + "/tolerances", s.options);
    if (v.contains("epsilons")) {
        const auto& ev = v.at("epsilons");
        if (!ev.is_array() || ev.empty()) throw ConfigError(ptr + "/epsilons", "expected a non-empty array");
        s.options.epsilons.clear();
        for (std::size_t i = 0; i < ev.size(); ++i) {
            const double e = number_at(ev[i], ptr + "/epsilons/" + std::to_string(i));
            if (!(e > 0.0)) throw ConfigError(ptr + "/epsilons/" + std::to_string(i), "must be positive");
            s.options.epsilons.push_back(e);
        }
    }
    if (v.contains("norm")) {
        const std::string n = string_at(v.at("norm"), ptr + "/norm");
        if (n == "spectral") s.options.norm = NormKind::Spectral;
        else if (n == "one") s.options.norm = NormKind::One;
        else throw ConfigError(ptr + "/norm", "expected 'spectral' or 'one'");
    }
    if (v.contains("outputs")) {
        const auto& ov = v.at("outputs");
        if (!ov.is_array()) throw ConfigError(ptr + "/outputs", "expected an array");
        cfg.outputs.clear();
        for (std::size_t i = 0; i < ov.size(); ++i) {
            const std::string op = ptr + "/outputs/" + std::to_string(i);
            const std::string o = string_at(ov[i], op);
            const auto& known = known_outputs();
            if (std::find(known.begin(), known.end(), o) == known.end())
                throw ConfigError(op, "unknown output '" + o + "' (report, trajectories, field, plotdata)");
            if (!cfg.wants(o)) cfg.outputs.push_back(o);
        }
    }
}

}  // namespace detail

/// Parses and validates a whole config. Throws ConfigError on the first problem.
inline std::vector<ScenarioConfig> parse_config(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("", "expected a JSON object");
    const auto& list = detail::require(root, "scenarios", "");
    if (!list.is_array()) throw ConfigError("/scenarios", "expected an array");
    std::vector<ScenarioConfig> out;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string ptr = "/scenarios/" + std::to_string(i);
        out.push_back(detail::scenario_at(list[i], ptr));
        if (!ids.insert(out.back().scenario.id).second)
            throw ConfigError(ptr + "/id", "duplicate id '" + out.back().scenario.id + "'");
    }
    return out;
}

inline std::vector<ScenarioConfig> parse_config_text(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(root);
}

inline std::vector<ScenarioConfig> load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Output files

/// Writes via a temporary file and a rename, so readers never see half a file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline constexpr std::size_t kPlotPoints = 2000;
inline constexpr std::size_t kPlotRows = 16;

inline std::size_t plot_stride(std::size_t n, std::size_t target) { return std::max<std::size_t>(1, (n + target - 1) / target); }

/// Long-format (series,t,value): solution components, |y|/γ and window maxima.
inline std::string plot_trajectory_csv(const ScenarioArtifacts& art) {
    std::ostringstream os;
    os << "series,t,value\n";
    if (!art.solution) return os.str();
    const Trajectory& x = *art.solution;
    const std::size_t stride = plot_stride(x.size(), kPlotPoints);
    auto sampled = [&](std::size_t k) { return k % stride == 0 || k + 1 == x.size(); };
    for (std::size_t i = 0; i < x.dim; ++i) {
        const std::string name = x.dim == 1 ? "y" : "y_" + std::to_string(i + 1);
        for (std::size_t k = 0; k < x.size(); ++k)
            if (sampled(k)) os << name << ',' << format_double(x.t(k)) << ',' << format_double(x.at(k, i)) << '\n';
    }
    if (art.log_gamma.size() == x.size()) {
        for (std::size_t k = 0; k < x.size(); ++k)
            if (sampled(k))
                os << "abs_y_over_gamma," << format_double(x.t(k)) << ','
                   << format_double(x.norm(k) * std::exp(-art.log_gamma[k])) << '\n';
    }
    if (art.solution_limsup)
        for (const auto& w : art.solution_limsup->windows)
            os << "window_max," << format_double(w.t_hi) << ',' << format_double(w.max_ratio) << '\n';
    return os.str();
}

/// Long-format |f_θ|/γ, one series per θ row (thinned to a readable count).
inline std::string plot_field_csv(const ScenarioArtifacts& art) {
    std::ostringstream os;
    os << "series,t,value\n";
    if (!art.field) return os.str();
    const auto& f = *art.field;
    const std::size_t rs = plot_stride(f.rows(), kPlotRows);
    const std::size_t ts = plot_stride(f.grid.n, kPlotPoints);
    const bool weighted = art.log_gamma.size() == f.grid.n;
    for (std::size_t j = 0; j < f.rows(); ++j) {
        if (j % rs != 0 && j + 1 != f.rows()) continue;
        const std::string name = "theta=" + format_double(f.theta[j]);
        for (std::size_t k = 0; k < f.grid.n; ++k) {
            if (k % ts != 0 && k + 1 != f.grid.n) continue;
            const double v = std::fabs(f.at(j, k)) * (weighted ? std::exp(-art.log_gamma[k]) : 1.0);
            os << name << ',' << format_double(f.grid.t(k)) << ',' << format_double(v) << '\n';
        }
    }
    return os.str();
}

/// θ-profile: the abscissa column holds θ.
inline std::string plot_profile_csv(const ScenarioArtifacts& art) {
    std::ostringstream os;
    os << "series,theta,value\n";
    if (!art.profile) return os.str();
    const auto& p = *art.profile;
    for (std::size_t j = 0; j < p.theta.size(); ++j)
        os << "Ltheta," << format_double(p.theta[j]) << ',' << format_double(p.L_hat[j]) << '\n';
    return os.str();
}

/// Writes the requested files for one scenario; returns their names.
inline std::vector<std::string> emit_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg,
                                             const ScenarioOutcome& out) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& text) {
        write_file_atomic(dir / name, text);
        written.push_back(name);
    };
    if (cfg.wants("report")) put("report.json", to_json_text(to_json(out.report)));
    if (cfg.wants("trajectories") && out.artifacts.solution) {
        std::ostringstream os;
        write_csv(os, *out.artifacts.solution);
        put("trajectory_raw.csv", os.str());
    }
    if (cfg.wants("field") && out.artifacts.field) {
        std::ostringstream os;
        write_field_csv(os, *out.artifacts.field);
        put("field_raw.csv", os.str());
    }
    if (cfg.wants("plotdata")) {
        put("traj.csv", plot_trajectory_csv(out.artifacts));
        if (out.artifacts.field) put("field.csv", plot_field_csv(out.artifacts));
        if (out.artifacts.profile) put("profile.csv", plot_profile_csv(out.artifacts));
        if (!cfg.wants("report")) put("report.json", to_json_text(to_json(out.report)));
    }
    return written;
}

// ---------------------------------------------------------------------------
// Batch runs

struct RunOptions {
    std::filesystem::path out_dir = "forcelab_out";
    unsigned jobs = 1;
    std::vector<std::string> only;  // empty: every scenario
    bool write_files = true;
};

struct RunEntry {
    std::string id;
    std::string theorem;
    bool ok = false;
    std::string error;
    std::optional<ClassificationReport> report;
    std::vector<std::string> outputs;
    double seconds = 0.0;
};

struct RunResult {
    std::vector<RunEntry> entries;  // sorted by id
    std::string started;
    std::string finished;
    std::string manifest_error;  // empty when manifest.json was written (or not asked for)

    [[nodiscard]] bool all_ok() const {
        return manifest_error.empty() &&
               std::all_of(entries.begin(), entries.end(), [](const RunEntry& e) { return e.ok; });
    }
    [[nodiscard]] std::size_t count(Consistency c) const {
        return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [&](const RunEntry& e) {
            return e.ok && e.report && e.report->consistency == c;
        }));
    }
};

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("FORCELAB_OUT"); env && *env) return env;
    return "forcelab_out";
}

inline std::vector<ScenarioConfig> select(const std::vector<ScenarioConfig>& all, const std::vector<std::string>& only) {
    if (only.empty()) return all;
    std::vector<ScenarioConfig> out;
    for (const auto& id : only) {
        auto it = std::find_if(all.begin(), all.end(), [&](const ScenarioConfig& c) { return c.scenario.id == id; });
        if (it == all.end()) throw ConfigError("", "no scenario with id '" + id + "'");
        out.push_back(*it);
    }
    return out;
}

inline Json to_json(const RunResult& r) {
    Json j;
    j["tool"] = "forcelab";
    j["version"] = kVersion;
    j["started"] = r.started;
    j["finished"] = r.finished;
    Json counts;
    counts["scenarios"] = r.entries.size();
    counts["errors"] = static_cast<std::size_t>(
        std::count_if(r.entries.begin(), r.entries.end(), [](const RunEntry& e) { return !e.ok; }));
    counts["agree"] = r.count(Consistency::Agree);
    counts["disagree"] = r.count(Consistency::Disagree);
    counts["inconclusive"] = r.count(Consistency::Inconclusive);
    j["counts"] = counts;
    Json list = Json::array();
    for (const auto& e : r.entries) {
        Json item;
        item["id"] = e.id;
        item["theorem"] = e.theorem;
        item["status"] = e.ok ? "ok" : "error";
        item["exit_status"] = e.ok ? 0 : 1;
        if (e.report) {
            item["condition"] = verdict3_name(e.report->condition);
            item["simulation"] = verdict3_name(e.report->simulation);
            item["consistency"] = consistency_name(e.report->consistency);
        }
        if (!e.ok) item["error"] = e.error;
        item["outputs"] = e.outputs;
        item["seconds"] = e.seconds;
        list.push_back(item);
    }
    j["scenarios"] = list;
    return j;
}

/// Runs every selected scenario on up to `jobs` threads. One failing scenario
/// (solver error or I/O error) does not stop the others; its error lands in
/// the manifest.
inline RunResult run_scenarios(const std::vector<ScenarioConfig>& all, const RunOptions& opt) {
    const auto configs = select(all, opt.only);
    RunResult res;
    res.started = utc_timestamp();
    res.entries.resize(configs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            const auto& cfg = configs[i];
            RunEntry& e = res.entries[i];
            e.id = cfg.scenario.id;
            e.theorem = cfg.scenario.theorem;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                auto out = cross_check(cfg.scenario);
                if (opt.write_files) e.outputs = emit_outputs(opt.out_dir / e.id, cfg, out);
                e.report = std::move(out.report);
                e.ok = true;
            } catch (const std::exception& ex) {
                e.error = ex.what();
            }
            e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(configs.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    res.finished = utc_timestamp();
    std::sort(res.entries.begin(), res.entries.end(), [](const RunEntry& a, const RunEntry& b) { return a.id < b.id; });
    if (opt.write_files) {
        try {
            std::filesystem::create_directories(opt.out_dir);
            write_file_atomic(opt.out_dir / "manifest.json", to_json_text(to_json(res)));
        } catch (const std::exception& e) {
            res.manifest_error = e.what();
        }
    }
    return res;
}

}  // namespace forcelab

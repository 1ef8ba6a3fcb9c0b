// Copyright 2026 The jcsub Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jcsub/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace jcsub::cli {
namespace {

using nlohmann::ordered_json;

const std::set<std::string> kTopKeys = {"id",     "omega",     "omega0",   "g",       "alpha_mag",
                                        "alpha_phase", "n_max", "atom_init", "grid", "channels",
                                        "oracle", "output",    "scenarios"};
const std::set<std::string> kAtomKeys = {"uu", "ud_re", "ud_im", "dd"};
const std::set<std::string> kGridKeys = {"start", "stop", "steps"};
const std::set<std::string> kOutputKeys = {"format", "path"};

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number_at(const ordered_json& obj, const std::string& key, const std::string& where,
                 std::optional<double> fallback = std::nullopt) {
    if (!obj.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError(where + ": missing required key '" + key + "'");
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
    return x;
}

// Shallow merge; the nested objects atom_init, grid and output merge per key.
void merge_into(ordered_json& base, const ordered_json& patch) {
    for (const auto& [key, value] : patch.items()) {
        if (value.is_object() && base.contains(key) && base[key].is_object()) {
            for (const auto& [k2, v2] : value.items()) base[key][k2] = v2;
        } else {
            base[key] = value;
        }
    }
}

void apply_overrides(ordered_json& cfg, const Overrides& o) {
    if (o.id) cfg["id"] = *o.id;
    if (o.omega) cfg["omega"] = *o.omega;
    if (o.omega0) cfg["omega0"] = *o.omega0;
    if (o.g) cfg["g"] = *o.g;
    if (o.alpha_mag) cfg["alpha_mag"] = *o.alpha_mag;
    if (o.alpha_phase) cfg["alpha_phase"] = *o.alpha_phase;
    if (o.n_max) {
        if (*o.n_max == "auto") {
            cfg["n_max"] = "auto";
        } else {
            try {
                std::size_t used = 0;
                const int n = std::stoi(*o.n_max, &used);
                if (used != o.n_max->size()) throw std::invalid_argument("trailing text");
                cfg["n_max"] = n;
            } catch (const std::exception&) {
                throw ConfigError("--n-max: expected an integer or 'auto'");
            }
        }
    }
    auto& atom = cfg["atom_init"];
    if (!atom.is_object()) atom = ordered_json::object();
    if (o.uu) atom["uu"] = *o.uu;
    if (o.ud_re) atom["ud_re"] = *o.ud_re;
    if (o.ud_im) atom["ud_im"] = *o.ud_im;
    if (o.dd) atom["dd"] = *o.dd;
    if (o.grid) {
        const auto& g = *o.grid;
        if (g[2] != std::floor(g[2])) throw ConfigError("--grid: steps must be an integer");
        cfg["grid"] = {{"start", g[0]}, {"stop", g[1]}, {"steps", static_cast<int>(g[2])}};
    }
    if (o.channels) cfg["channels"] = *o.channels;
    if (o.oracle) cfg["oracle"] = *o.oracle;
    if (o.format) cfg["output"]["format"] = *o.format;
    if (o.path) cfg["output"]["path"] = *o.path;
}

std::string scenario_path(const std::string& path, const std::string& id, bool multiple) {
    if (!multiple) return path;
    const auto slot = path.find("{id}");
    if (slot != std::string::npos) return path.substr(0, slot) + id + path.substr(slot + 4);
    const std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + id + p.extension().string())).string();
}

ScenarioRun build_scenario(ordered_json cfg, const std::string& where) {
    check_keys(cfg, kTopKeys, where);
    ScenarioRun run;
    auto& sc = run.scenario;

    sc.id = cfg.value("id", std::string("scenario"));
    const double omega = number_at(cfg, "omega", where);
    const double omega0 = number_at(cfg, "omega0", where);
    const double g = number_at(cfg, "g", where);
    sc.alpha_mag = number_at(cfg, "alpha_mag", where);
    sc.alpha_phase = number_at(cfg, "alpha_phase", where, 0.0);
    if (sc.alpha_mag < 0.0) throw ConfigError(where + ".alpha_mag: must be >= 0");
    const double mean = sc.alpha_mag * sc.alpha_mag;

    int n_max = 0;
    const ordered_json n_field = cfg.contains("n_max") ? cfg["n_max"] : ordered_json("auto");
    if (n_field.is_string() && n_field.get<std::string>() == "auto") {
        n_max = auto_n_max(mean, analysis::kDefaultTailBound);
    } else if (n_field.is_number_integer()) {
        n_max = n_field.get<int>();
        if (n_max < 1) throw ConfigError(where + ".n_max: must be >= 1");
        const double tail = poisson_tail(n_max, mean);
        if (tail >= analysis::kDefaultTailBound) {
            std::ostringstream os;
            os << "n_max = " << n_max << " leaves Poisson tail " << tail << " >= "
               << analysis::kDefaultTailBound;
            run.warnings.push_back(os.str());
        }
    } else {
        throw ConfigError(where + ".n_max: expected an integer or \"auto\"");
    }
    cfg["n_max"] = n_max;

    try {
        sc.params = jcm::JcmParams(omega, omega0, g, n_max);
    } catch (const InputError& e) {
        throw ConfigError(where + ": " + e.what());
    }

    const ordered_json atom = cfg.contains("atom_init") ? cfg["atom_init"] : ordered_json::object();
    check_keys(atom, kAtomKeys, where + ".atom_init");
    const double uu = number_at(atom, "uu", where + ".atom_init", 1.0);
    const double dd = number_at(atom, "dd", where + ".atom_init", 1.0 - uu);
    const Complex ud{number_at(atom, "ud_re", where + ".atom_init", 0.0),
                     number_at(atom, "ud_im", where + ".atom_init", 0.0)};
    try {
        sc.atom_init = AtomDensity::from_parts(uu, ud, dd);
    } catch (const InputError& e) {
        throw ConfigError(where + ".atom_init: " + e.what());
    }
    cfg["atom_init"] = {{"uu", uu}, {"ud_re", ud.real()}, {"ud_im", ud.imag()}, {"dd", dd}};

    const ordered_json grid = cfg.contains("grid") ? cfg["grid"] : ordered_json::object();
    check_keys(grid, kGridKeys, where + ".grid");
    sc.grid.start = number_at(grid, "start", where + ".grid", 0.0);
    sc.grid.stop = number_at(grid, "stop", where + ".grid", 50.0);
    const double steps = number_at(grid, "steps", where + ".grid", 2000.0);
    if (steps != std::floor(steps) || steps > 1e7) {
        throw ConfigError(where + ".grid.steps: expected a modest integer");
    }
    sc.grid.steps = static_cast<int>(steps);
    try {
        sc.grid.validate();
    } catch (const InputError& e) {
        throw ConfigError(where + "." + e.what());
    }
    cfg["grid"] = {{"start", sc.grid.start}, {"stop", sc.grid.stop}, {"steps", sc.grid.steps}};

    if (cfg.contains("channels")) {
        if (!cfg["channels"].is_array()) throw ConfigError(where + ".channels: expected an array");
        const auto& known = analysis::closed_channel_names();
        for (const auto& c : cfg["channels"]) {
            if (!c.is_string()) throw ConfigError(where + ".channels: expected strings");
            const auto name = c.get<std::string>();
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                throw ConfigError(where + ".channels: unknown channel '" + name + "'");
            }
            sc.channels.push_back(name);
        }
    } else {
        cfg["channels"] = analysis::closed_channel_names();
    }
    if (cfg.contains("oracle")) {
        if (!cfg["oracle"].is_boolean()) throw ConfigError(where + ".oracle: expected true/false");
        sc.oracle = cfg["oracle"].get<bool>();
    } else {
        cfg["oracle"] = false;
    }
    cfg.erase("output");
    cfg["id"] = sc.id;
    run.echo = std::move(cfg);
    return run;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ordered_json features_json(const analysis::CollapseRevivalFeatures& f) {
    ordered_json out;
    out["window_points"] = f.window_points;
    out["window_gt"] = f.window_gt;
    out["initial_amplitude"] = f.initial_amplitude;
    out["collapses"] = ordered_json::array();
    for (const auto& c : f.collapses) {
        out["collapses"].push_back({{"start", c.start},
                                    {"end", c.end},
                                    {"plateau", c.plateau},
                                    {"photon_min_time", c.photon_min_time},
                                    {"photon_min_aligned", c.photon_min_aligned}});
    }
    out["revivals"] = ordered_json::array();
    for (const auto& r : f.revivals) {
        out["revivals"].push_back({{"onset", r.onset},
                                   {"peak", r.peak},
                                   {"envelope", r.envelope},
                                   {"photon_max_time", r.photon_max_time},
                                   {"photon_max_aligned", r.photon_max_aligned}});
    }
    return out;
}

}  // namespace

std::vector<std::string> result_warnings(const ScenarioRun& run, const analysis::SeriesResult& result) {
    std::vector<std::string> out = run.warnings;
    // The coherent-state tail is already reported at config time.
    std::ostringstream os;
    if (!result.series_truncation_ok) {
        os << "spin dressing series truncated at n_max with last-term ratio " << result.series_tail_ratio;
        out.push_back(os.str());
    }
    return out;
}

RunConfig load_config(const std::string& text, const Overrides& overrides) {
    ordered_json root;
    try {
        root = ordered_json::parse(text.empty() ? std::string("{}") : text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config: malformed JSON at " + line_col(text, e.byte ? e.byte - 1 : 0) +
                          ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    check_keys(root, kTopKeys, "config");

    RunConfig out;
    ordered_json output = root.contains("output") ? root["output"] : ordered_json::object();
    if (overrides.format) output["format"] = *overrides.format;
    if (overrides.path) output["path"] = *overrides.path;
    check_keys(output, kOutputKeys, "config.output");
    out.output.format = output.value("format", out.output.format);
    out.output.path = output.value("path", out.output.path);
    if (out.output.format != "csv" && out.output.format != "json") {
        throw ConfigError("config.output.format: expected \"csv\" or \"json\"");
    }

    ordered_json base = root;
    base.erase("scenarios");
    std::vector<ordered_json> entries;
    if (root.contains("scenarios")) {
        if (!root["scenarios"].is_array() || root["scenarios"].empty()) {
            throw ConfigError("config.scenarios: expected a non-empty array");
        }
        int k = 0;
        for (const auto& patch : root["scenarios"]) {
            if (!patch.is_object()) throw ConfigError("config.scenarios: entries must be objects");
            if (patch.contains("scenarios") || patch.contains("output")) {
                throw ConfigError("config.scenarios[" + std::to_string(k) +
                                  "]: nested scenarios/output are not allowed");
            }
            ordered_json merged = base;
            merge_into(merged, patch);
            if (!merged.contains("id") || !patch.contains("id")) merged["id"] = "s" + std::to_string(k);
            entries.push_back(std::move(merged));
            ++k;
        }
    } else {
        entries.push_back(base);
    }

    const bool multiple = entries.size() > 1;
    std::set<std::string> ids;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        apply_overrides(entries[k], overrides);
        const std::string where = multiple ? "config.scenarios[" + std::to_string(k) + "]" : "config";
        ScenarioRun run = build_scenario(entries[k], where);
        if (!ids.insert(run.scenario.id).second) {
            throw ConfigError(where + ".id: duplicate scenario id '" + run.scenario.id + "'");
        }
        run.output_path = scenario_path(out.output.path, run.scenario.id, multiple);
        out.runs.push_back(std::move(run));
    }
    return out;
}

RunConfig load_config_file(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str(), overrides);
}

std::string emit_csv(const analysis::TimeSeries& series) {
    std::string out = "gt";
    for (const auto& name : series.channel_names()) out += "," + name;
    out += "\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out += format_number(series.grid()[k]);
        for (const auto& name : series.channel_names()) out += "," + format_number(series.channel(name)[k]);
        out += "\n";
    }
    return out;
}

ordered_json emit_json(const ScenarioRun& run, const analysis::SeriesResult& result) {
    ordered_json doc;
    doc["scenario"] = run.echo;
    doc["grid"] = result.series.grid();
    ordered_json channels = ordered_json::object();
    for (const auto& name : result.series.channel_names()) channels[name] = result.series.channel(name);
    doc["channels"] = std::move(channels);

    ordered_json meta;
    meta["software_version"] = kSoftwareVersion;
    meta["n_max"] = result.n_max;
    meta["tail_mass"] = result.tail_mass;
    meta["tail_ok"] = result.tail_ok;
    meta["series_tail_ratio"] = result.series_tail_ratio;
    meta["series_truncation_ok"] = result.series_truncation_ok;
    meta["conservation_max_residual"] = result.conservation_max_residual;
    if (run.scenario.oracle) {
        ordered_json oracle;
        for (const auto& [name, gap] : result.oracle_deviation) oracle[name] = gap;
        meta["oracle"] = {{"max_deviation", oracle},
                          {"tolerance", result.oracle_tolerance},
                          {"ok", result.oracle_ok}};
    }
    const auto& s = result.series;
    if (s.has("sz_eig_upper") && s.has("n_tilde")) {
        analysis::FeatureOptions opt;
        opt.window = analysis::default_window(run.scenario.params,
                                              run.scenario.alpha_mag * run.scenario.alpha_mag,
                                              run.scenario.grid);
        if (s.size() >= 3u * static_cast<std::size_t>(opt.window)) {
            meta["features"] = features_json(analysis::collapse_revival_features(s, opt));
        }
    }
    meta["warnings"] = result_warnings(run, result);
    doc["metadata"] = std::move(meta);
    return doc;
}

analysis::TimeSeries series_from_json(const ordered_json& doc) {
    analysis::TimeSeries series(doc.at("scenario").at("id").get<std::string>(),
                                doc.at("grid").get<std::vector<double>>());
    for (const auto& [name, values] : doc.at("channels").items()) {
        series.add_channel(name, values.get<std::vector<double>>());
    }
    return series;
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move result into '" + path + "'");
    }
}

int run(const RunConfig& config, std::ostream& log) {
    int code = kExitOk;
    for (const auto& r : config.runs) {
        analysis::SeriesResult result;
        try {
            result = analysis::observable_series(r.scenario);
        } catch (const CrossCheckError& e) {
            log << "error: " << r.scenario.id << ": " << e.what() << "\n";
            return kExitCrossCheck;
        } catch (const InputError& e) {
            log << "error: " << r.scenario.id << ": " << e.what() << "\n";
            return kExitConfigInvalid;
        }
        for (const auto& w : result_warnings(r, result)) {
            log << "warning: " << r.scenario.id << ": " << w << "\n";
        }

        const auto doc = emit_json(r, result);
        try {
            if (config.output.format == "csv") {
                write_atomic(r.output_path, emit_csv(result.series));
                const std::filesystem::path p(r.output_path);
                const auto meta_path = (p.parent_path() / (p.stem().string() + ".meta.json")).string();
                ordered_json meta = doc;
                meta.erase("grid");
                meta.erase("channels");
                meta["data_file"] = p.filename().string();
                write_atomic(meta_path, meta.dump(2) + "\n");
            } else {
                write_atomic(r.output_path, doc.dump(2) + "\n");
            }
        } catch (const IoError& e) {
            log << "error: " << e.what() << "\n";
            return kExitIo;
        }
        log << r.scenario.id << ": wrote " << r.output_path << " (" << result.series.size()
            << " points, n_max " << result.n_max << ")\n";
        if (r.scenario.oracle && !result.oracle_ok) {
            log << "error: " << r.scenario.id << ": closed form and oracle diverge beyond "
                << result.oracle_tolerance << "\n";
            code = kExitCrossCheck;
        }
    }
    return code;
}

}  // namespace jcsub::cli

#include "run_config.hpp"

#include "dmlab/errors.hpp"
#include "dmlab/arith_tables.hpp"
#include "dmlab/rational.hpp"

#include <algorithm>
#include <fstream>

namespace dmlab::cli {

namespace {

template <class T>
void take(const Json& doc, const char* key, T& out) {
    if (!doc.contains(key)) return;
    try {
        out = doc.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
}

std::vector<std::string> alpha_strings(const Json& v) {
    std::vector<std::string> out;
    for (const auto& a : v) {
        if (a.is_string())
            out.push_back(a.get<std::string>());
        else if (a.is_number_integer())
            out.push_back(std::to_string(a.get<long long>()));
        else
            throw ValidationError("config key 'alpha': use integers or strings such as \"3/2\"");
    }
    return out;
}

}  // namespace

RunConfig config_from_json(const Json& doc, RunConfig base) {
    if (!doc.is_object()) throw ValidationError("config file must hold a JSON object");
    static const std::vector<std::string> known{
        "T", "alpha", "k_max", "grid_k", "mollifier", "tail_eps", "cache_dir", "format", "seed",
        "threads", "zeros_file", "samples", "d", "table_limit"};
    for (const auto& [key, value] : doc.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw ValidationError("unknown config key '" + key + "'");
    take(doc, "T", base.T);
    if (doc.contains("alpha")) base.alpha = alpha_strings(doc.at("alpha"));
    take(doc, "k_max", base.k_max);
    take(doc, "grid_k", base.grid_k);
    take(doc, "mollifier", base.mollifiers);
    take(doc, "tail_eps", base.tail_eps);
    take(doc, "cache_dir", base.cache_dir);
    if (doc.contains("format")) base.format = parse_format(doc.at("format").get<std::string>());
    take(doc, "seed", base.seed);
    take(doc, "threads", base.threads);
    take(doc, "zeros_file", base.zeros_file);
    take(doc, "samples", base.samples);
    take(doc, "d", base.d);
    take(doc, "table_limit", base.table_limit);
    return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    Json doc;
    try {
        doc = Json::parse(in, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ValidationError("config file " + path + ": " + e.what());
    }
    return config_from_json(doc, std::move(base));
}

Json config_to_json(const RunConfig& c) {
    Json j;
    j["T"] = c.T;
    j["alpha"] = c.alpha;
    j["k_max"] = c.k_max;
    j["grid_k"] = c.grid_k;
    j["mollifier"] = c.mollifiers;
    j["tail_eps"] = c.tail_eps;
    j["cache_dir"] = c.cache_dir;
    j["format"] = c.format == Format::csv ? "csv" : "json";
    j["seed"] = c.seed;
    j["zeros_file"] = c.zeros_file;
    j["samples"] = c.samples;
    j["d"] = c.d;
    j["table_limit"] = c.table_limit;
    return j;
}

RunConfig resolve(const RunConfig& config, const std::string& command) {
    RunConfig c = config;
    if (command == "moments") {
        if (c.alpha.empty()) c.alpha = {"1", "2"};
        if (c.k_max == 0) c.k_max = 4;
        if (c.mollifiers.empty()) c.mollifiers = {"lambda", "lambda2", "lambda-dr=2", "unit"};
        if (c.k_max > 64) throw ValidationError("closed forms support k_max <= 64");
    } else if (command == "verify") {
        if (c.T.empty()) c.T = {1e3, 1e4};
        if (c.alpha.empty()) c.alpha = {"1"};
        if (c.k_max == 0) c.k_max = 2;
        if (c.mollifiers.empty()) c.mollifiers = {"unit", "lambda"};
        if (c.k_max > 4) throw ValidationError("quadrature and diagonal oracle support k_max <= 4");
    } else if (command == "bounds") {
        if (c.alpha.empty()) c.alpha = {"1", "3/2", "2"};
    } else if (command == "zeros") {
        if (c.T.empty()) c.T = {1e3, 1e4, 5e4};
        if (c.alpha.empty()) c.alpha = {"4/5", "9/10", "19/20"};
        if (c.d.empty()) c.d = {-0.4147, -0.2, 0.0, 0.2, 0.4147};
    } else if (command == "rv") {
        if (c.k_max == 0) c.k_max = 6;
        if (c.samples < 2) throw ValidationError("samples must be at least 2");
    } else if (command == "tables") {
        if (c.T.empty()) c.T = {1e4};
        if (c.alpha.empty()) c.alpha = {"1"};
    } else {
        throw ValidationError("unknown command '" + command + "'");
    }
    for (double t : c.T)
        if (!(t >= 100.0)) throw ValidationError("every T must be at least 100");
    for (const auto& a : c.alpha)
        if (parse_rational(a) <= 0) throw ValidationError("alpha must be positive");
    for (const auto& m : c.mollifiers) parse_mollifier(m);
    if (!(c.tail_eps > 1e-16 && c.tail_eps < 1e-6))
        throw ValidationError("tail_eps must lie in (1e-16, 1e-6)");
    if (c.threads < 0) throw ValidationError("threads must be non-negative");
    return c;
}

}  // namespace dmlab::cli

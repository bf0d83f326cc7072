#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twsgd/convergence.hpp"

namespace twsgd {

/**
 * Declarative run description for the CLI. Accepted on disk either as
 * flat key=value text ('#' comments) or as a JSON object with the same
 * keys; the first non-blank character decides the format.
 */
struct RunConfig {
    std::string command;        // deriv-test | diffusion | black-scholes | stability-scan | bounds
    std::string case_name;
    int order = 3;
    double alpha = std::nan("");
    double lambda1 = std::nan("");
    double lambda2 = std::nan("");
    double T = 1.0;
    double free_param = 0.0;
    std::vector<double> free_param_list;   // stability-scan
    std::vector<std::size_t> grids;        // M values (decreasing h)
    bool tau_equals_h = false;
    double tau = std::nan("");
    double h = 0.01;                       // stability-scan / bounds helpers
    std::size_t n_terms = 250;
    std::size_t samples = 4096;
    std::vector<double> alphas;            // bounds
    std::string out;
    std::string format = "csv";
    unsigned jobs = 1;
    std::string golden;
    double tol = 0.05;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : s) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

/// Grid entries are either M values (integers > 1) or h values
/// ("1/160", "0.025"); everything is normalized to M = round(1/h).
inline std::size_t parse_grid_entry(const std::string& tok) {
    const double v = parse_number(tok);
    if (v <= 0.0)
        throw std::runtime_error("grid entry must be positive");
    if (v < 1.0)
        return static_cast<std::size_t>(std::llround(1.0 / v));
    return static_cast<std::size_t>(std::llround(v));
}

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "command") cfg.command = value;
    else if (key == "case") cfg.case_name = value;
    else if (key == "order") cfg.order = std::stoi(value);
    else if (key == "alpha") cfg.alpha = parse_number(value);
    else if (key == "lambda" || key == "lambda1") cfg.lambda1 = parse_number(value);
    else if (key == "lambda2") cfg.lambda2 = parse_number(value);
    else if (key == "T") cfg.T = parse_number(value);
    else if (key == "free_param") cfg.free_param = parse_number(value);
    else if (key == "free_param_list") {
        cfg.free_param_list.clear();
        for (const auto& t : split_list(value))
            cfg.free_param_list.push_back(parse_number(t));
    } else if (key == "grid") {
        cfg.grids.clear();
        for (const auto& t : split_list(value))
            cfg.grids.push_back(parse_grid_entry(t));
    } else if (key == "tau") {
        if (value == "h") {
            cfg.tau_equals_h = true;
        } else {
            cfg.tau_equals_h = false;
            cfg.tau = parse_number(value);
        }
    } else if (key == "h") cfg.h = parse_number(value);
    else if (key == "n_terms") cfg.n_terms = static_cast<std::size_t>(std::stoul(value));
    else if (key == "samples") cfg.samples = static_cast<std::size_t>(std::stoul(value));
    else if (key == "alphas") {
        cfg.alphas.clear();
        for (const auto& t : split_list(value))
            cfg.alphas.push_back(parse_number(t));
    } else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else if (key == "jobs") cfg.jobs = static_cast<unsigned>(std::stoul(value));
    else if (key == "golden") cfg.golden = value;
    else if (key == "tol") cfg.tol = parse_number(value);
    else throw std::runtime_error("unknown config key '" + key + "'");
}

inline RunConfig parse_json_config(const std::string& text) {
    RunConfig cfg;
    const auto j = nlohmann::json::parse(text);
    for (const auto& [key, val] : j.items()) {
        if (val.is_string()) {
            apply_key(cfg, key, val.get<std::string>());
        } else if (val.is_array()) {
            std::string joined;
            for (const auto& item : val) {
                if (!joined.empty())
                    joined += ",";
                joined += item.is_string() ? item.get<std::string>() : item.dump();
            }
            apply_key(cfg, key, joined);
        } else {
            apply_key(cfg, key, val.dump());
        }
    }
    return cfg;
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return detail::parse_json_config(text);

    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        try {
            detail::apply_key(cfg, detail::trim(line.substr(0, eq)),
                              detail::trim(line.substr(eq + 1)));
        } catch (const std::exception& ex) {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": " +
                                     ex.what());
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

inline SweepSpec to_sweep_spec(const RunConfig& cfg) {
    SweepSpec spec;
    spec.command = cfg.command;
    spec.case_name = cfg.case_name;
    spec.order = cfg.order;
    spec.params.alpha = cfg.alpha;
    spec.params.lambda1 = cfg.lambda1;
    spec.params.lambda2 = cfg.lambda2;
    spec.params.T = cfg.T;
    spec.free_param = cfg.free_param;
    spec.grids = cfg.grids;
    spec.tau_equals_h = cfg.tau_equals_h;
    spec.tau = cfg.tau;
    spec.jobs = cfg.jobs;
    return spec;
}

}  // namespace twsgd

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "twsgd/convergence.hpp"

namespace twsgd {

namespace detail {

inline std::string sci6(double v) {
    if (std::isnan(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5e", v);
    return buf;
}

inline std::string g10(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace detail

/// CSV layout is fixed: h,tau,l2_error,l2_order,linf_error,linf_order.
/// Values are printed with 6 significant digits; order cells of the
/// first row stay blank. Identical reports serialize to identical bytes.
inline void write_report_csv(const ConvergenceReport& rep, std::ostream& os) {
    os << "h,tau,l2_error,l2_order,linf_error,linf_order\n";
    for (const auto& r : rep.rows) {
        os << detail::g10(r.h) << ',' << detail::g10(r.tau) << ',' << detail::sci6(r.l2_error)
           << ',' << detail::sci6(r.l2_order) << ',' << detail::sci6(r.linf_error) << ','
           << detail::sci6(r.linf_order) << '\n';
    }
}

inline nlohmann::json report_to_json(const ConvergenceReport& rep) {
    nlohmann::json j;
    j["config"] = rep.config_echo;
    j["wall_seconds"] = rep.wall_seconds;
    j["rows"] = nlohmann::json::array();
    const auto cell = [](double v) -> nlohmann::json {
        if (std::isnan(v))
            return nullptr;
        return v;
    };
    for (const auto& r : rep.rows) {
        nlohmann::json row;
        row["h"] = r.h;
        row["tau"] = r.tau;
        row["l2_error"] = cell(r.l2_error);
        row["l2_order"] = cell(r.l2_order);
        row["linf_error"] = cell(r.linf_error);
        row["linf_order"] = cell(r.linf_order);
        if (!r.note.empty())
            row["note"] = r.note;
        j["rows"].push_back(row);
    }
    return j;
}

/// Writes to a temporary sibling and renames into place, so partially
/// written outputs are never observed.
inline void write_text_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open output file " + tmp);
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

inline void write_report_file(const ConvergenceReport& rep, const std::string& path,
                              const std::string& format) {
    std::ostringstream ss;
    if (format == "csv")
        write_report_csv(rep, ss);
    else if (format == "json")
        ss << report_to_json(rep).dump(2) << '\n';
    else
        throw std::invalid_argument("unknown output format '" + format + "'");
    write_text_atomic(path, ss.str());
}

}  // namespace twsgd

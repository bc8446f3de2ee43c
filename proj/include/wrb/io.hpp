#pragma once

// JSON and CSV serialization. Space and measure readers reject files whose
// contents violate the structural invariants beyond tolerances. CSV floats
// are printed with 17 significant digits, '.' decimal, no locale.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrb/barycenter.hpp"
#include "wrb/dynamics.hpp"
#include "wrb/ot.hpp"
#include "wrb/space.hpp"

namespace wrb {

inline std::string fmt17(double v) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace detail {

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

inline void dump_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

inline std::vector<double> number_row(const nlohmann::json& j,
                                      const std::string& what) {
    if (!j.is_array()) throw std::runtime_error(what + " must be an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw std::runtime_error(what + " must be numeric");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace detail

inline void write_space(const std::string& path, const MetricMeasureSpace& s) {
    nlohmann::json j;
    j["n"] = s.n;
    if (!s.labels.empty()) j["labels"] = s.labels;
    if (!s.coords.empty()) j["coords"] = s.coords;
    j["dist"] = s.dist;
    j["m"] = s.m.weights;
    detail::dump_json(path, j);
}

// check = false skips the metric/mass validation (used when a possibly bad
// space is loaded on purpose, e.g. to feed the property suite a bad fixture).
inline MetricMeasureSpace read_space(const std::string& path, bool check = true) {
    const nlohmann::json j = detail::load_json(path);
    MetricMeasureSpace s;
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw std::runtime_error(path + ": missing integer field 'n'");
    s.n = j["n"].get<int>();
    if (s.n < 1) throw std::runtime_error(path + ": n must be positive");
    if (!j.contains("dist") || !j["dist"].is_array() ||
        j["dist"].size() != static_cast<std::size_t>(s.n))
        throw std::runtime_error(path + ": dist must be an n x n table");
    for (const auto& row : j["dist"]) {
        s.dist.push_back(detail::number_row(row, "dist row"));
        if (s.dist.back().size() != static_cast<std::size_t>(s.n))
            throw std::runtime_error(path + ": dist must be an n x n table");
    }
    if (!j.contains("m"))
        throw std::runtime_error(path + ": missing field 'm'");
    s.m.weights = detail::number_row(j["m"], "m");
    if (s.m.weights.size() != static_cast<std::size_t>(s.n))
        throw std::runtime_error(path + ": m must have length n");
    if (j.contains("labels")) {
        for (const auto& l : j["labels"]) s.labels.push_back(l.get<std::string>());
        if (s.labels.size() != static_cast<std::size_t>(s.n))
            throw std::runtime_error(path + ": labels must have length n");
    }
    if (j.contains("coords")) {
        for (const auto& row : j["coords"])
            s.coords.push_back(detail::number_row(row, "coords row"));
        if (s.coords.size() != static_cast<std::size_t>(s.n))
            throw std::runtime_error(path + ": coords must have length n");
        for (const auto& c : s.coords)
            if (c.size() != s.coords.front().size())
                throw std::runtime_error(path + ": coords dimension not uniform");
    }
    if (check) {
        const Tolerances tol = Tolerances::for_space(s);
        const ValidationReport rep = validate(s, tol.tol_metric, tol.tol_mass);
        if (!rep.ok())
            throw std::runtime_error(path + ": invalid space: " +
                                     rep.violations.front().describe());
    }
    return s;
}

inline void write_measure(const std::string& path, const Measure& mu) {
    nlohmann::json j;
    j["weights"] = mu.weights;
    detail::dump_json(path, j);
}

// Accepts dense { "weights": [...] } or sparse { "atoms": [{"index","mass"}] }.
inline Measure read_measure(const std::string& path, int n,
                            double tol_mass = 1e-12) {
    const nlohmann::json j = detail::load_json(path);
    Measure mu;
    if (j.contains("weights")) {
        mu.weights = detail::number_row(j["weights"], "weights");
        if (mu.weights.size() != static_cast<std::size_t>(n))
            throw std::runtime_error(path + ": weights must have length " +
                                     std::to_string(n));
    } else if (j.contains("atoms")) {
        mu.weights.assign(static_cast<std::size_t>(n), 0.0);
        for (const auto& atom : j["atoms"]) {
            if (!atom.contains("index") || !atom.contains("mass"))
                throw std::runtime_error(path + ": atom needs 'index' and 'mass'");
            const int idx = atom["index"].get<int>();
            if (idx < 0 || idx >= n)
                throw std::runtime_error(path + ": atom index out of range");
            if (mu.weights[static_cast<std::size_t>(idx)] != 0.0)
                throw std::runtime_error(path + ": duplicate atom index " +
                                         std::to_string(idx));
            mu.weights[static_cast<std::size_t>(idx)] = atom["mass"].get<double>();
        }
    } else {
        throw std::runtime_error(path + ": expected 'weights' or 'atoms'");
    }
    for (double w : mu.weights)
        if (w < 0.0) throw std::runtime_error(path + ": negative mass");
    if (std::abs(mu.total_mass() - 1.0) > tol_mass)
        throw std::runtime_error(path + ": total mass deviates from 1");
    return mu;
}

inline void write_plan(const std::string& path, const TransportPlan& plan) {
    nlohmann::json j;
    auto& entries = j["entries"] = nlohmann::json::array();
    for (const PlanEntry& e : plan.entries)
        entries.push_back({e.i, e.j, e.mass});
    j["cost"] = plan.cost;
    j["dual_source"] = plan.dual_source;
    j["dual_target"] = plan.dual_target;
    detail::dump_json(path, j);
}

inline void write_barycenter_result(const std::string& path,
                                    const BarycenterResult& res) {
    nlohmann::json j;
    j["b_set"] = res.b_set;
    j["B"] = {{"weights", res.B.weights}};
    j["assignment"] = res.assignment;
    j["d0"] = res.d0;
    detail::dump_json(path, j);
}

inline void write_epsilon_path_csv(const std::string& path,
                                   const EpsilonPath& ep) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "eps,f_value,gap,support_size\n";
    for (const EpsilonStep& s : ep.steps)
        out << fmt17(s.eps) << ',' << fmt17(s.f_value) << ',' << fmt17(s.gap)
            << ',' << s.mu_eps.support(0.0).size() << '\n';
}

inline void write_orbit_csv(const std::string& path, const OrbitReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "iter,variance,support_size,w2_to_prev\n";
    for (std::size_t k = 0; k < report.iterates.size(); ++k)
        out << k << ',' << fmt17(report.variances[k]) << ','
            << report.iterates[k].support(0.0).size() << ','
            << fmt17(report.w2_to_prev[k]) << '\n';
}

inline void write_orbit_measures(const std::string& path,
                                 const OrbitReport& report) {
    nlohmann::json j;
    auto& iterates = j["iterates"] = nlohmann::json::array();
    for (const Measure& mu : report.iterates) iterates.push_back(mu.weights);
    if (report.period)
        j["period"] = *report.period;
    else
        j["period"] = nullptr;
    j["entry_index"] = report.entry_index;
    j["variances"] = report.variances;
    detail::dump_json(path, j);
}

}  // namespace wrb

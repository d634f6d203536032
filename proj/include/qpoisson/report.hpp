#pragma once

// Report assembly and serialization. Floating-point values are written with 17
// significant digits so that parse -> write reproduces the same bytes.

#include "qpoisson/cost.hpp"
#include "qpoisson/hhl.hpp"
#include "qpoisson/metrics.hpp"
#include "qpoisson/noise.hpp"
#include "qpoisson/poisson.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

namespace qpoisson::report {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline std::string format_double(double v)
{
    if (!std::isfinite(v))
        return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // keep a float marker so the value re-parses as floating point
    if (s.find_first_of(".eE") == std::string::npos)
        s += ".0";
    return s;
}

namespace detail {

inline void newline(std::ostream& os, int depth)
{
    os << '\n';
    for (int i = 0; i < depth; ++i)
        os << "  ";
}

inline void write(std::ostream& os, const json& j, int depth)
{
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                os << ',';
            first = false;
            newline(os, depth + 1);
            os << json(it.key()).dump() << ": ";
            write(os, it.value(), depth + 1);
        }
        newline(os, depth);
        os << '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            os << "[]";
            return;
        }
        const bool scalars = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
        os << '[';
        bool first = true;
        for (const auto& e : j) {
            if (!first)
                os << (scalars ? ", " : ",");
            first = false;
            if (!scalars)
                newline(os, depth + 1);
            write(os, e, depth + 1);
        }
        if (!scalars)
            newline(os, depth);
        os << ']';
        return;
    }
    case json::value_t::number_float:
        os << format_double(j.get<double>());
        return;
    default:
        os << j.dump();
        return;
    }
}

} // namespace detail

inline void write_json(std::ostream& os, const json& j)
{
    detail::write(os, j, 0);
    os << '\n';
}

inline std::string to_string(const json& j)
{
    std::ostringstream os;
    write_json(os, j);
    return os.str();
}

// --- sections ---

inline json problem_json(const PoissonProblem& p)
{
    return {
        {"N", p.grid()},
        {"n", p.qubits()},
        {"h", p.mesh_width()},
        {"rhs", std::vector<double>(p.rhs().begin(), p.rhs().end())},
        {"rhs_scale", p.scale()},
    };
}

inline json layout_json(const hhl::RegisterLayout& l)
{
    return {
        {"mode", hhl::to_string(l.mode)},
        {"n", l.n},
        {"m", l.m},
        {"l", l.l},
        {"int_bits", l.format.int_bits},
        {"frac_bits", l.format.frac_bits},
        {"amp_exponent", l.format.amp_exponent},
        {"total_qubits", l.total_qubits()},
        {"registers",
         {
             {"B", {l.reg_b().offset, l.reg_b().width}},
             {"E", {l.reg_e().offset, l.reg_e().width}},
             {"A", {l.reg_a().offset, l.reg_a().width}},
             {"ancilla", l.ancilla()},
         }},
    };
}

inline json errors_json(const analysis::ErrorReport& e)
{
    json per = json::array();
    for (const auto& r : e.per_state)
        per.push_back({{"state", r.basis_state}, {"relative_error", r.value}});
    return {
        {"per_state", per},
        {"excluded_states", e.excluded_states},
        {"max_relative_error", e.max_relative_error},
        {"mean_relative_error", e.mean_relative_error},
        {"state_fidelity", e.state_fidelity},
    };
}

inline json result_json(const hhl::HhlResult& r)
{
    return {
        {"solution", r.solution},
        {"classical_reference", r.classical_reference},
        {"success_probability", r.success_probability},
        {"clean_probability", r.clean_probability},
        {"state_fidelity", r.state_fidelity},
        {"register_b_distribution", r.register_b_distribution},
        {"uncompute_residual", r.uncompute_residual},
        {"work_register_entropy_bits", r.work_register_entropy},
        {"max_imaginary_residual", r.max_imaginary_residual},
    };
}

inline json cost_json(const analysis::CostReport& c, double gate_accuracy, double cnot_error_rate)
{
    json kinds = json::object();
    for (const auto& [name, tally] : c.by_kind)
        kinds[name] = {{"gates", tally.gates}, {"cnots", tally.cnots}};
    json rules = json::object();
    for (const auto& [k, v] : c.rules)
        rules[k] = v;
    const auto nominal = analysis::hardware_fidelity(c.total_cnots, gate_accuracy);
    const auto device = analysis::hardware_fidelity(c.total_cnots, 1.0 - cnot_error_rate);
    return {
        {"total_cnots", c.total_cnots},
        {"by_kind", kinds},
        {"rules", rules},
        {"gate_accuracy", gate_accuracy},
        {"fidelity", nominal.value()},
        {"log10_fidelity", nominal.log10()},
        {"cnot_error_rate", cnot_error_rate},
        {"device_fidelity", device.value()},
        {"log10_device_fidelity", device.log10()},
    };
}

inline json timing_json(bool record, double elapsed_ms)
{
    if (!record)
        return {{"recorded", false}};
    return {{"recorded", true}, {"elapsed_ms", elapsed_ms}};
}

inline json noisy_json(const analysis::NoisyResult& r, const analysis::NoiseModel& noise, std::uint64_t seed)
{
    return {
        {"cnot_error_rate", noise.cnot_error_rate},
        {"trajectories", r.trajectories},
        {"seed", seed},
        {"noisy_distribution", r.noisy_distribution},
        {"noiseless_distribution", r.noiseless_distribution},
        {"leakage_zero_state", r.leakage},
        {"noiseless_leakage_zero_state", r.noiseless_leakage},
        {"total_variation", analysis::total_variation(r.noisy_distribution, r.noiseless_distribution)},
        {"mean_success_probability", r.mean_success_probability},
        {"error_events", r.error_events},
    };
}

} // namespace qpoisson::report

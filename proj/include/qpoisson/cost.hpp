#pragma once

// Static CNOT-equivalent resource estimate for the HHL circuit, and the
// accumulated-gate-error fidelity model accuracy^c.

#include "qpoisson/errors.hpp"
#include "qpoisson/hhl.hpp"

#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qpoisson::analysis {

enum class CostKind {
    SingleQubit,
    Cnot,
    Swap,
    ControlledRotation,
    ControlledPhase,
    Toffoli,
    MultiControlled,  ///< width = number of controls k
    Dense,            ///< width = number of qubits w
    ControlledDense,  ///< width = target qubits w, one control
    XorLookup,        ///< width = source bits m, aux = destination bits l
    Multiplexor,      ///< uniformly controlled single-qubit gate, width = select bits k
};

inline const char* to_string(CostKind k)
{
    switch (k) {
    case CostKind::SingleQubit: return "single_qubit";
    case CostKind::Cnot: return "cnot";
    case CostKind::Swap: return "swap";
    case CostKind::ControlledRotation: return "controlled_rotation";
    case CostKind::ControlledPhase: return "controlled_phase";
    case CostKind::Toffoli: return "toffoli";
    case CostKind::MultiControlled: return "multi_controlled";
    case CostKind::Dense: return "dense_unitary";
    case CostKind::ControlledDense: return "controlled_dense_unitary";
    case CostKind::XorLookup: return "xor_lookup";
    case CostKind::Multiplexor: return "multiplexor";
    }
    return "?";
}

struct CostItem {
    CostKind kind = CostKind::SingleQubit;
    int width = 0;
    int aux = 0;
    std::uint64_t count = 1;
};

using AbstractCircuit = std::vector<CostItem>;

inline std::uint64_t pow2(int k)
{
    detail::require(k >= 0 && k < 63, "exponent out of range for cost rules");
    return std::uint64_t{1} << k;
}

/// CNOT-equivalent cost per gate kind. The fixed entries can be overridden from a
/// `key = value` file; the width-dependent rules are fixed constructions.
struct CostRules {
    std::uint64_t cnot = 1;
    std::uint64_t swap = 3;
    std::uint64_t controlled_rotation = 2;
    std::uint64_t controlled_phase = 2;
    std::uint64_t toffoli = 6;

    /// Multiplexor bound for a k-controlled single-qubit gate.
    std::uint64_t multi_controlled(int k) const { return pow2(k); }

    /// ceil((4^w - 3w - 1) / 4), the generic two-qubit-gate count for a w-qubit unitary.
    std::uint64_t dense(int w) const
    {
        detail::require(w >= 1 && w <= 30, "dense unitary width out of range");
        const std::uint64_t four_w = pow2(2 * w);
        const std::uint64_t numer = four_w - 3 * static_cast<std::uint64_t>(w) - 1;
        return (numer + 3) / 4;
    }

    /// l * 2^m for a lookup from m source bits into l destination bits.
    std::uint64_t lookup(int m, int l) const { return static_cast<std::uint64_t>(l) * pow2(m); }

    std::uint64_t unit_cost(const CostItem& item) const
    {
        switch (item.kind) {
        case CostKind::SingleQubit: return 0;
        case CostKind::Cnot: return cnot;
        case CostKind::Swap: return swap;
        case CostKind::ControlledRotation: return controlled_rotation;
        case CostKind::ControlledPhase: return controlled_phase;
        case CostKind::Toffoli: return toffoli;
        case CostKind::MultiControlled: return multi_controlled(item.width);
        case CostKind::Dense: return dense(item.width);
        case CostKind::ControlledDense: return dense(item.width + 1);
        case CostKind::XorLookup: return lookup(item.width, item.aux);
        case CostKind::Multiplexor: return multi_controlled(item.width);
        }
        return 0;
    }

    /// Human-readable rules table, echoed into every report.
    std::vector<std::pair<std::string, std::string>> table() const
    {
        return {
            {"cnot", std::to_string(cnot)},
            {"swap", std::to_string(swap)},
            {"controlled_rotation", std::to_string(controlled_rotation)},
            {"controlled_phase", std::to_string(controlled_phase)},
            {"toffoli", std::to_string(toffoli)},
            {"multi_controlled", "2^k (k controls)"},
            {"multiplexor", "2^k (k select bits)"},
            {"dense_unitary", "ceil((4^w - 3w - 1) / 4)"},
            {"controlled_dense_unitary", "dense_unitary(w + 1)"},
            {"xor_lookup", "l * 2^m"},
            {"single_qubit", "0"},
        };
    }
};

/// Reads `key = value` overrides; '#' starts a comment. Unknown keys are rejected.
inline CostRules load_cost_rules(std::istream& in, CostRules rules = {})
{
    const std::map<std::string, std::uint64_t CostRules::*> fields = {
        {"cnot", &CostRules::cnot},
        {"swap", &CostRules::swap},
        {"controlled_rotation", &CostRules::controlled_rotation},
        {"controlled_phase", &CostRules::controlled_phase},
        {"toffoli", &CostRules::toffoli},
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        detail::require(eq != std::string::npos, "cost rules line " + std::to_string(lineno) + ": expected key = value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        const auto it = fields.find(key);
        detail::require(it != fields.end(), "cost rules line " + std::to_string(lineno) + ": unknown gate kind '" + key + "'");
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        detail::require(used == value.size() && !value.empty() && v > 0,
                        "cost rules line " + std::to_string(lineno) + ": value must be a positive integer");
        rules.*(it->second) = static_cast<std::uint64_t>(v);
    }
    return rules;
}

// --- abstract circuits ---

inline AbstractCircuit qft_cost_items(int width)
{
    const auto w = static_cast<std::uint64_t>(width);
    return {
        {CostKind::SingleQubit, 1, 0, w},
        {CostKind::ControlledPhase, 0, 0, w * (w - 1) / 2},
        {CostKind::Swap, 0, 0, w / 2},
    };
}

inline void append(AbstractCircuit& out, const AbstractCircuit& more) { out.insert(out.end(), more.begin(), more.end()); }

inline AbstractCircuit qpe_cost_items(const hhl::RegisterLayout& layout)
{
    const auto m = static_cast<std::uint64_t>(layout.m);
    AbstractCircuit c = {
        {CostKind::SingleQubit, 1, 0, m},
        {CostKind::ControlledDense, layout.n, 0, m},
    };
    append(c, qft_cost_items(layout.m));
    return c;
}

inline AbstractCircuit rotation_cost_items(const hhl::RegisterLayout& layout)
{
    if (layout.mode == hhl::RotationMode::Compact)
        return {{CostKind::Multiplexor, layout.m, 0, 1}};
    return {
        {CostKind::XorLookup, layout.m, layout.l, 1},
        {CostKind::ControlledRotation, 0, 0, static_cast<std::uint64_t>(layout.l)},
    };
}

/// The whole pipeline: QPE, rotation, lookup uncompute (faithful), mirrored QPE.
inline AbstractCircuit hhl_cost_items(const hhl::RegisterLayout& layout)
{
    auto c = qpe_cost_items(layout);
    append(c, rotation_cost_items(layout));
    if (layout.mode == hhl::RotationMode::Faithful)
        append(c, {{CostKind::XorLookup, layout.m, layout.l, 1}});
    append(c, qpe_cost_items(layout));
    return c;
}

struct KindTally {
    std::uint64_t gates = 0;
    std::uint64_t cnots = 0;
};

struct CostReport {
    std::map<std::string, KindTally> by_kind;
    std::uint64_t total_cnots = 0;
    std::vector<std::pair<std::string, std::string>> rules;
};

inline CostReport estimate_cost(const AbstractCircuit& circuit, const CostRules& rules = {})
{
    CostReport report;
    report.rules = rules.table();
    for (const auto& item : circuit) {
        const auto cnots = rules.unit_cost(item) * item.count;
        auto& tally = report.by_kind[to_string(item.kind)];
        tally.gates += item.count;
        tally.cnots += cnots;
        report.total_cnots += cnots;
    }
    return report;
}

inline CostReport estimate_cost(const hhl::RegisterLayout& layout, const CostRules& rules = {})
{
    return estimate_cost(hhl_cost_items(layout), rules);
}

// --- fidelity model ---

/// accuracy^cnots, kept in log domain: products of equal-accuracy factors add counts exactly.
class HardwareFidelity {
public:
    HardwareFidelity(std::uint64_t cnots, double accuracy) : cnots_(cnots), accuracy_(accuracy)
    {
        detail::require(accuracy > 0.0 && accuracy <= 1.0, "gate accuracy must be in (0, 1]");
    }

    std::uint64_t cnots() const { return cnots_; }
    double accuracy() const { return accuracy_; }
    double log10() const { return cnots_ == 0 ? 0.0 : static_cast<double>(cnots_) * std::log10(accuracy_); }
    /// May underflow to 0 for large counts; use log10() for those.
    double value() const { return std::pow(10.0, log10()); }

    friend HardwareFidelity operator*(const HardwareFidelity& a, const HardwareFidelity& b)
    {
        detail::require(a.accuracy_ == b.accuracy_, "cannot combine fidelities of different gate accuracies");
        return {a.cnots_ + b.cnots_, a.accuracy_};
    }

    friend bool operator==(const HardwareFidelity&, const HardwareFidelity&) = default;

private:
    std::uint64_t cnots_;
    double accuracy_;
};

inline HardwareFidelity hardware_fidelity(std::uint64_t cnots, double gate_accuracy)
{
    return {cnots, gate_accuracy};
}

} // namespace qpoisson::analysis

#pragma once

// Command-line front end: solve | classical | sweep | estimate | noisy.
//
// Exit codes: 0 success, 2 validation error, 3 qubit budget exceeded,
// 4 zero post-selection probability, 1 anything else.

#include "qpoisson/cost.hpp"
#include "qpoisson/errors.hpp"
#include "qpoisson/hhl.hpp"
#include "qpoisson/noise.hpp"
#include "qpoisson/poisson.hpp"
#include "qpoisson/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace qpoisson::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kValidation = 2,
    kBudget = 3,
    kZeroProbability = 4,
};

struct RunConfig {
    std::string subcommand;
    std::optional<int> grid;
    std::string rhs;                 ///< "a,b,c" or "@path"
    std::string rhs_kind = "flat";   ///< used when --rhs is absent: flat | reference | uniform | eigen:<j>
    int frac_bits = 0;
    int amp = 0;
    int reg_a_bits = 0;
    std::optional<std::string> mode; ///< per-subcommand default when unset
    std::uint64_t seed = 0;
    std::uint64_t trajectories = 1000;
    double cnot_error = 8.094e-2;
    double accuracy = 0.92;
    int qubit_budget = 30;
    double min_success = 1e-14;
    std::string out;
    std::string format = "json";
    std::string sweep_param;
    std::string sweep_values;
    std::string rules_file;
    bool empty_circuit = false;
    bool timing = false;
};

// --- helpers ---

inline PoissonProblem problem_from_kind(const std::string& kind, int N)
{
    if (kind == "flat")
        return flat_overlap_rhs(N);
    if (kind == "reference")
        return reference_rhs(N);
    if (kind == "uniform") {
        validate_grid(N);
        std::vector<double> rhs(N, 1.0);
        rhs[0] = 0.0;
        return PoissonProblem::from_amplitudes(std::move(rhs));
    }
    if (kind.rfind("eigen:", 0) == 0) {
        int j = 0;
        try {
            j = std::stoi(kind.substr(6));
        } catch (const std::exception&) {
            throw ValidationError("invalid eigenvector index in --rhs-kind");
        }
        return eigenvector_rhs(N, j);
    }
    throw ValidationError("unknown --rhs-kind '" + kind + "'");
}

inline PoissonProblem load_problem(const RunConfig& cfg, std::optional<int> grid_override = std::nullopt)
{
    const auto grid = grid_override ? grid_override : cfg.grid;
    if (grid)
        validate_grid(*grid);
    if (cfg.rhs.empty()) {
        detail::require(grid.has_value(), "either --n or --rhs is required");
        return problem_from_kind(cfg.rhs_kind, *grid);
    }
    auto amps = cfg.rhs.front() == '@' ? read_rhs_file(cfg.rhs.substr(1)) : parse_rhs_list(cfg.rhs);
    if (grid)
        detail::require(static_cast<int>(amps.size()) == *grid,
                        "rhs has " + std::to_string(amps.size()) + " entries, expected N = " + std::to_string(*grid));
    return PoissonProblem::from_amplitudes(std::move(amps));
}

inline hhl::HhlConfig hhl_config(const RunConfig& cfg, hhl::RotationMode default_mode)
{
    hhl::HhlConfig c;
    c.frac_bits = cfg.frac_bits;
    c.amp_exponent = cfg.amp;
    c.reg_a_bits = cfg.reg_a_bits;
    c.mode = cfg.mode ? hhl::parse_mode(*cfg.mode) : default_mode;
    c.qubit_budget = cfg.qubit_budget;
    c.min_success_probability = cfg.min_success;
    return c;
}

inline analysis::CostRules load_rules(const RunConfig& cfg)
{
    if (cfg.rules_file.empty())
        return {};
    std::ifstream in(cfg.rules_file);
    if (!in)
        throw ValidationError("cannot open cost rules file '" + cfg.rules_file + "'");
    return analysis::load_cost_rules(in);
}

inline std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = detail::trim(tok);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        detail::require(!tok.empty() && used == tok.size(), "invalid integer '" + tok + "' in --values");
        out.push_back(v);
    }
    detail::require(!out.empty(), "--values must list at least one value");
    return out;
}

inline report::json envelope()
{
    return {{"schema_version", report::kSchemaVersion}};
}

// --- subcommands; each writes its report to `out` ---

inline int cmd_solve(const RunConfig& cfg, std::ostream& out)
{
    const auto problem = load_problem(cfg);
    const auto config = hhl_config(cfg, hhl::RotationMode::Compact);
    const auto result = hhl::run_hhl(problem, config);
    const auto cost = analysis::estimate_cost(result.layout, load_rules(cfg));

    if (cfg.format == "csv") {
        out << "state,quantum,classical,relative_error\n";
        for (int k = 1; k < problem.grid(); ++k) {
            std::string rel;
            for (const auto& e : result.errors.per_state)
                if (e.basis_state == k)
                    rel = report::format_double(e.value);
            out << k << ',' << report::format_double(result.solution[k - 1]) << ','
                << report::format_double(result.classical_reference[k - 1]) << ',' << rel << '\n';
        }
        return kOk;
    }
    auto j = envelope();
    j["problem"] = report::problem_json(problem);
    j["layout"] = report::layout_json(result.layout);
    j["result"] = report::result_json(result);
    j["errors"] = report::errors_json(result.errors);
    j["cost"] = report::cost_json(cost, cfg.accuracy, cfg.cnot_error);
    j["timing"] = report::timing_json(cfg.timing, result.elapsed_ms);
    report::write_json(out, j);
    return kOk;
}

inline int cmd_classical(const RunConfig& cfg, std::ostream& out)
{
    const auto problem = load_problem(cfg);
    const auto spectral = eigenpairs(problem.grid());
    const auto thomas = solve_thomas(problem);
    const auto spectral_solution = solve_spectral(spectral, problem.interior());
    const auto matrix = build_matrix(problem.grid());
    const auto residual_vec = matrix.multiply(thomas);
    double residual = 0.0;
    for (std::size_t k = 0; k < thomas.size(); ++k)
        residual = std::max(residual, std::abs(residual_vec[k] - problem.interior()[k]));
    double agreement = 0.0;
    for (std::size_t k = 0; k < thomas.size(); ++k)
        agreement = std::max(agreement, std::abs(thomas[k] - spectral_solution[k]));
    auto unnormalized = thomas;
    for (double& v : unnormalized)
        v *= problem.scale();

    auto j = envelope();
    j["problem"] = report::problem_json(problem);
    j["result"] = {
        {"thomas", thomas},
        {"spectral", spectral_solution},
        {"unnormalized_rhs_solution", unnormalized},
        {"eigenvalues", spectral.lambdas},
        {"kappa", spectral.kappa},
        {"max_residual", residual},
        {"max_solver_disagreement", agreement},
    };
    j["timing"] = report::timing_json(false, 0.0);
    report::write_json(out, j);
    return kOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    detail::require(cfg.sweep_param == "frac-bits" || cfg.sweep_param == "amp" || cfg.sweep_param == "N",
                    "--param must be one of frac-bits, amp, N");
    const auto values = parse_int_list(cfg.sweep_values);

    struct Row {
        int value;
        std::string status = "ok";
        std::optional<hhl::HhlResult> result;
    };
    std::vector<Row> rows;
    for (int v : values) {
        Row row{v, "ok", std::nullopt};
        try {
            RunConfig c = cfg;
            std::optional<int> grid = cfg.grid;
            if (cfg.sweep_param == "frac-bits")
                c.frac_bits = v;
            else if (cfg.sweep_param == "amp")
                c.amp = v;
            else
                grid = v;
            const auto problem = load_problem(c, grid);
            row.result = hhl::run_hhl(problem, hhl_config(c, hhl::RotationMode::Compact));
        } catch (const BudgetExceeded& e) {
            row.status = std::string("budget_exceeded: ") + e.what();
        } catch (const ZeroProbability& e) {
            row.status = std::string("zero_probability: ") + e.what();
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
        rows.push_back(std::move(row));
    }

    if (cfg.format == "json") {
        auto j = envelope();
        j["sweep"] = {{"param", cfg.sweep_param}};
        report::json arr = report::json::array();
        for (const auto& r : rows) {
            report::json e = {{"value", r.value}, {"status", r.status}};
            if (r.result) {
                e["N"] = r.result->layout.grid;
                e["total_qubits"] = r.result->layout.total_qubits();
                e["max_relative_error"] = r.result->errors.max_relative_error;
                e["mean_relative_error"] = r.result->errors.mean_relative_error;
                e["state_fidelity"] = r.result->state_fidelity;
                e["success_probability"] = r.result->success_probability;
            }
            arr.push_back(std::move(e));
        }
        j["rows"] = std::move(arr);
        j["timing"] = report::timing_json(false, 0.0);
        report::write_json(out, j);
        return kOk;
    }

    out << cfg.sweep_param << ",N,total_qubits,max_relative_error,mean_relative_error,state_fidelity,success_probability,status\n";
    for (const auto& r : rows) {
        out << r.value << ',';
        if (r.result) {
            out << r.result->layout.grid << ',' << r.result->layout.total_qubits() << ','
                << report::format_double(r.result->errors.max_relative_error) << ','
                << report::format_double(r.result->errors.mean_relative_error) << ','
                << report::format_double(r.result->state_fidelity) << ','
                << report::format_double(r.result->success_probability) << ',';
        } else {
            out << ",,,,,,";
        }
        std::string status = r.status;
        for (char& ch : status)
            if (ch == ',' || ch == '\n')
                ch = ';';
        out << status << '\n';
    }
    return kOk;
}

inline int cmd_estimate(const RunConfig& cfg, std::ostream& out)
{
    const auto rules = load_rules(cfg);
    auto j = envelope();
    if (cfg.empty_circuit) {
        j["layout"] = nullptr;
        j["cost"] = report::cost_json(analysis::estimate_cost(analysis::AbstractCircuit{}, rules), cfg.accuracy, cfg.cnot_error);
    } else {
        detail::require(cfg.grid.has_value(), "--n is required");
        const auto layout = hhl::layout_registers(*cfg.grid, hhl_config(cfg, hhl::RotationMode::Faithful));
        j["layout"] = report::layout_json(layout);
        j["cost"] = report::cost_json(analysis::estimate_cost(layout, rules), cfg.accuracy, cfg.cnot_error);
    }
    j["timing"] = report::timing_json(false, 0.0);
    report::write_json(out, j);
    return kOk;
}

inline int cmd_noisy(const RunConfig& cfg, std::ostream& out)
{
    const auto problem = load_problem(cfg);
    const auto config = hhl_config(cfg, hhl::RotationMode::Compact);
    detail::require(config.mode == hhl::RotationMode::Compact, "noisy runs require --mode compact");
    const analysis::NoiseModel noise{cfg.cnot_error};
    analysis::NoisyRunConfig run;
    run.trajectories = cfg.trajectories;
    run.seed = cfg.seed;
    const auto start = std::chrono::steady_clock::now();
    const auto result = analysis::noisy_trajectories(problem, config, noise, run, load_rules(cfg));
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    auto j = envelope();
    j["problem"] = report::problem_json(problem);
    j["layout"] = report::layout_json(hhl::layout_registers(problem.grid(), config));
    j["result"] = report::noisy_json(result, noise, cfg.seed);
    j["timing"] = report::timing_json(cfg.timing, ms);
    report::write_json(out, j);
    return kOk;
}

// --- entry point ---

inline int dispatch(const RunConfig& cfg, std::ostream& out)
{
    detail::require(cfg.format == "json" || cfg.format == "csv", "--format must be json or csv");
    if (cfg.subcommand == "solve")
        return cmd_solve(cfg, out);
    if (cfg.subcommand == "classical")
        return cmd_classical(cfg, out);
    if (cfg.subcommand == "sweep")
        return cmd_sweep(cfg, out);
    if (cfg.subcommand == "estimate")
        return cmd_estimate(cfg, out);
    if (cfg.subcommand == "noisy")
        return cmd_noisy(cfg, out);
    throw ValidationError("unknown subcommand '" + cfg.subcommand + "'");
}

/// Runs a full dispatch with error mapping. Reports go to --out (or `out`), messages to `err`.
inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        if (cfg.out.empty())
            return dispatch(cfg, out);
        std::ostringstream buffer;
        const int rc = dispatch(cfg, buffer);
        std::ofstream file(cfg.out, std::ios::binary);
        if (!file)
            throw ValidationError("cannot write output file '" + cfg.out + "'");
        file << buffer.str();
        return rc;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const ZeroProbability& e) {
        err << "error: " << e.what() << '\n';
        return kZeroProbability;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

inline void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option_function<int>("--n", [&cfg](const int& v) { cfg.grid = v; }, "grid size N (power of two)");
    sub->add_option("--rhs", cfg.rhs, "right-hand side amplitudes: comma list or @file");
    sub->add_option("--rhs-kind", cfg.rhs_kind, "rhs when --rhs is absent: flat | reference | uniform | eigen:<j>");
    sub->add_option("--frac-bits", cfg.frac_bits, "fractional bits f of register E");
    sub->add_option("--amp", cfg.amp, "eigenvalue amplification exponent i");
    sub->add_option("--reg-a-bits", cfg.reg_a_bits, "register A width l (faithful mode, raised to m)");
    sub->add_option_function<std::string>("--mode", [&cfg](const std::string& v) { cfg.mode = v; }, "faithful | compact");
    sub->add_option("--qubit-budget", cfg.qubit_budget, "maximum simulated qubits");
    sub->add_option("--min-success", cfg.min_success, "treat P(ancilla = 1) at or below this as zero");
    sub->add_option("--cnot-error", cfg.cnot_error, "average CNOT error rate");
    sub->add_option("--accuracy", cfg.accuracy, "per-CNOT accuracy for the fidelity estimate");
    sub->add_option("--rules", cfg.rules_file, "cost rules override file (key = value)");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "json | csv");
    sub->add_flag("--timing", cfg.timing, "record wall-clock time in the report");
}

/// Parses argv and runs. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Quantum (HHL) solver for the 1-D Poisson equation"};
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "run the HHL circuit and compare with the classical solution");
    auto* classical = app.add_subcommand("classical", "Thomas and spectral classical solutions");
    auto* sweep = app.add_subcommand("sweep", "sweep frac-bits, amp or N; CSV table");
    auto* estimate = app.add_subcommand("estimate", "CNOT-count and hardware-fidelity estimate");
    auto* noisy = app.add_subcommand("noisy", "Pauli-trajectory noise experiment");
    for (auto* sub : {solve, classical, sweep, estimate, noisy})
        add_common(sub, cfg);
    sweep->add_option("--param", cfg.sweep_param, "frac-bits | amp | N")->required();
    sweep->add_option("--values", cfg.sweep_values, "comma-separated values")->required();
    estimate->add_flag("--empty-circuit", cfg.empty_circuit, "estimate an empty circuit (c = 0)");
    noisy->add_option("--seed", cfg.seed, "random seed");
    noisy->add_option("--trajectories", cfg.trajectories, "number of trajectories");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (cfg.subcommand == "sweep" && sweep->count("--format") == 0)
        cfg.format = "csv";
    return execute(cfg, out, err);
}

} // namespace qpoisson::cli

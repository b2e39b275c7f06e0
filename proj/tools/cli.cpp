#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "obm/errors.hpp"
#include "obm/incremental.hpp"
#include "obm/modeling_error.hpp"
#include "obm/signorini.hpp"

namespace obm::cli {

namespace {

const std::vector<std::string> kCommands = {"majorant",  "tables",    "increment",
                                            "coarsen",   "signorini", "solve"};

bool one_of(const std::string& s, std::initializer_list<const char*> options)
{
    for (const char* o : options)
        if (s == o)
            return true;
    return false;
}

void require(bool ok, const std::string& field, const std::string& why)
{
    if (!ok)
        throw DomainError("invalid " + field + ": " + why);
}

bool needs_delta(const RunConfig& c)
{
    return c.family == "w_delta" || c.tau == "delta" || c.tau == "hat";
}

}  // namespace

void RunConfig::validate() const
{
    require(std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end(), "command",
            "unknown command '" + command + "'");
    require(!alpha.empty(), "alpha", "at least one value is required");
    for (double a : alpha)
        require(a >= 0.5 && std::isfinite(a), "alpha", "values must be >= 0.5");
    try {
        quadrature.validate();
    } catch (const DomainError& e) {
        throw DomainError(std::string("invalid quadrature: ") + e.what());
    }

    if (command == "majorant") {
        require(one_of(family, {"v_eps", "w_delta", "exact"}), "family",
                "expected v_eps, w_delta or exact, got '" + family + "'");
        require(one_of(tau, {"exact", "delta", "hat", "zero"}), "tau",
                "expected exact, delta, hat or zero, got '" + tau + "'");
        if (family == "v_eps")
            require(eps >= 0.0 && eps <= 0.5, "eps", "must lie in [0, 0.5]");
        if (needs_delta(*this))
            require(delta > 0.0 && delta <= 0.5, "delta", "must lie in (0, 0.5]");
        if (tau == "delta")
            require(std::isfinite(xi) && std::isfinite(eta), "xi/eta", "must be finite");
    } else if (command == "tables") {
        require(one_of(which, {"1", "2", "3", "4", "5", "all"}), "which",
                "expected 1..5 or all, got '" + which + "'");
    } else if (command == "increment" || command == "solve") {
        require(nodes >= 3, "nodes", "need at least 3 grid nodes");
        require(steps >= 1, "steps", "need at least one time step");
        try {
            solver.validate();
        } catch (const DomainError& e) {
            throw DomainError(std::string("invalid solver: ") + e.what());
        }
    } else if (command == "coarsen") {
        require(std::isfinite(shift), "shift", "must be finite");
    } else if (command == "signorini") {
        require(perturb >= 0.0, "perturb", "must be >= 0 to stay above the thin obstacle");
        require(std::isfinite(flux_perturb), "flux_perturb", "must be finite");
    }
}

// ---------------------------------------------------------------------------
// Argument parsing.

namespace {

void load_json(const std::string& path, RunConfig& c)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("invalid config: cannot read '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("invalid config: " + std::string(e.what()));
    }
    auto get = [&j](const char* key, auto& dst) {
        if (j.contains(key))
            dst = j.at(key).get<std::remove_reference_t<decltype(dst)>>();
    };
    try {
        get("command", c.command);
        get("family", c.family);
        get("tau", c.tau);
        get("eps", c.eps);
        get("delta", c.delta);
        get("xi", c.xi);
        get("eta", c.eta);
        if (j.contains("alpha")) {
            if (j["alpha"].is_array())
                c.alpha = j["alpha"].get<std::vector<double>>();
            else
                c.alpha = {j["alpha"].get<double>()};
        }
        if (j.contains("which"))
            c.which = j["which"].is_number() ? std::to_string(j["which"].get<int>())
                                             : j["which"].get<std::string>();
        get("optimize", c.optimize);
        get("nodes", c.nodes);
        get("steps", c.steps);
        get("shift", c.shift);
        get("perturb", c.perturb);
        get("flux_perturb", c.flux_perturb);
        get("out", c.out);
        if (j.contains("quadrature")) {
            const auto& q = j["quadrature"];
            if (q.contains("base_cells"))
                c.quadrature.base_cells = q["base_cells"].get<int>();
            if (q.contains("refinement"))
                c.quadrature.refinement = q["refinement"].get<int>();
            if (q.contains("tol"))
                c.quadrature.tol = q["tol"].get<double>();
            if (q.contains("max_levels"))
                c.quadrature.max_levels = q["max_levels"].get<int>();
            if (q.contains("abs_floor"))
                c.quadrature.abs_floor = q["abs_floor"].get<double>();
        }
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            if (s.contains("relaxation"))
                c.solver.relaxation = s["relaxation"].get<double>();
            if (s.contains("tol"))
                c.solver.tol = s["tol"].get<double>();
            if (s.contains("max_iterations"))
                c.solver.max_iterations = s["max_iterations"].get<long>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("invalid config: " + std::string(e.what()));
    }
}

void add_options(CLI::App* app, RunConfig& c, std::string& config_path)
{
    app->add_option("--config", config_path, "JSON file with RunConfig keys; flags override it");
    app->add_option("--family", c.family, "v_eps, w_delta or exact");
    app->add_option("--tau", c.tau, "exact, delta, hat or zero");
    app->add_option("--eps", c.eps, "v_eps parameter in [0, 0.5]");
    app->add_option("--delta", c.delta, "time window in (0, 0.5]");
    app->add_option("--xi", c.xi, "tau_delta coefficient");
    app->add_option("--eta", c.eta, "tau_delta coefficient");
    app->add_option("--alpha", c.alpha, "one or more values >= 0.5")->expected(1, -1);
    app->add_option("--which", c.which, "table 1..5 or all");
    app->add_flag("!--no-optimize", c.optimize, "skip the (xi, eta) optimizer in tables 3 and 4");
    app->add_option("--nodes", c.nodes, "spatial grid nodes");
    app->add_option("--steps", c.steps, "uniform time steps");
    app->add_option("--relaxation", c.solver.relaxation, "PSOR relaxation in (0, 2)");
    app->add_option("--solver-tol", c.solver.tol, "PSOR complementarity tolerance");
    app->add_option("--max-iterations", c.solver.max_iterations, "PSOR sweep limit");
    app->add_option("--shift", c.shift, "source change on the coincidence set (coarsen); u is the exact "
                   "simplified solution only for shift <= 0");
    app->add_option("--perturb", c.perturb, "approximation perturbation (signorini)");
    app->add_option("--flux-perturb", c.flux_perturb, "flux perturbation (signorini)");
    app->add_option("--base-cells", c.quadrature.base_cells, "quadrature base cells");
    app->add_option("--quad-tol", c.quadrature.tol, "quadrature relative tolerance");
    app->add_option("--max-levels", c.quadrature.max_levels, "quadrature refinement levels");
    app->add_option("--out", c.out, "CSV output path");
}

std::string find_config(int argc, const char* const* argv)
{
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc)
            return argv[i + 1];
        if (a.rfind("--config=", 0) == 0)
            return a.substr(9);
    }
    return {};
}

}  // namespace

bool parse_args(int argc, const char* const* argv, RunConfig& cfg)
{
    if (argc > 1 && argv[1][0] != '-' &&
        std::find(kCommands.begin(), kCommands.end(), std::string(argv[1])) == kCommands.end())
        throw DomainError("invalid command: unknown command '" + std::string(argv[1]) +
                          "' (expected one of majorant, tables, increment, coarsen, signorini, "
                          "solve)");
    const std::string config = find_config(argc, argv);
    if (!config.empty())
        load_json(config, cfg);

    CLI::App app{"Functional error majorants for parabolic obstacle problems"};
    app.require_subcommand(0, 1);
    std::string config_path;
    add_options(&app, cfg, config_path);
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"majorant", "error and majorant for a benchmark approximation"},
        {"tables", "reproduce the benchmark tables"},
        {"increment", "solver run with both incremental majorants"},
        {"coarsen", "modeling-error bounds for a simplified source"},
        {"signorini", "majorant for a constructed thin-obstacle solution"},
        {"solve", "implicit Euler / projected SOR solve of the benchmark"},
    };
    for (const auto& [name, help] : subs)
        add_options(app.add_subcommand(name, help), cfg, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return false;
    } catch (const CLI::ParseError& e) {
        throw DomainError(std::string("invalid arguments: ") + e.what());
    }
    for (const auto* sub : app.get_subcommands())
        cfg.command = sub->get_name();
    if (cfg.command.empty())
        throw DomainError("invalid command: none given (expected one of majorant, tables, "
                          "increment, coarsen, signorini, solve)");
    return true;
}

// ---------------------------------------------------------------------------
// CSV.

std::string format_real(double v)
{
    if (std::isnan(v))
        return {};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, const std::string& path)
{
    for (const auto& r : rows)
        if (r.size() != header.size())
            throw Error("emit_csv: row width " + std::to_string(r.size()) +
                        " does not match header width " + std::to_string(header.size()));
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write CSV to '" + path + "'");
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i)
            out << (i ? "," : "") << fields[i];
        out << '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
    if (!out)
        throw Error("write to '" + path + "' failed");
}

namespace {

bool has_labels(const bench::Table& t)
{
    for (const auto& r : t.rows)
        if (!r.label.empty())
            return true;
    return false;
}

}  // namespace

std::vector<std::string> table_header(const bench::Table& table)
{
    std::vector<std::string> h;
    if (table.rows.empty())
        return h;
    if (has_labels(table))
        h.emplace_back("block");
    for (const auto& c : table.rows.front().cells) {
        h.push_back(c.name);
        if (c.referenced) {
            h.push_back(c.name + "_ref");
            h.push_back(c.name + "_dev");
        }
    }
    return h;
}

std::vector<std::vector<std::string>> table_rows(const bench::Table& table)
{
    std::vector<std::vector<std::string>> rows;
    const bool labels = has_labels(table);
    for (const auto& r : table.rows) {
        std::vector<std::string> f;
        if (labels)
            f.push_back(r.label);
        for (const auto& c : r.cells) {
            f.push_back(format_real(c.value));
            if (c.referenced) {
                f.push_back(c.reference ? format_real(c.reference->value) : std::string());
                f.push_back(format_real(c.deviation()));
            }
        }
        rows.push_back(std::move(f));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Commands.

namespace {

void print_table(std::ostream& os, const std::string& title, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows)
{
    os << title << '\n';
    std::vector<std::size_t> w(header.size());
    for (std::size_t i = 0; i < header.size(); ++i)
        w[i] = header[i].size();
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.size() && i < w.size(); ++i)
            w[i] = std::max(w[i], r[i].size());
    auto line = [&](const std::vector<std::string>& f) {
        for (std::size_t i = 0; i < f.size(); ++i)
            os << (i ? "  " : "") << std::setw(static_cast<int>(w[i])) << f[i];
        os << '\n';
    };
    line(header);
    for (const auto& r : rows)
        line(r);
}

struct Output {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool violation = false;
};

void check_bound(Output& o, double lhs, double rhs, const std::string& what, std::ostream& err)
{
    if (!bound_holds(lhs, rhs)) {
        o.violation = true;
        err << "WARNING: guaranteed bound violated for " << what << ": rhs " << format_real(rhs)
            << " < lhs " << format_real(lhs) << '\n';
    }
}

Output cmd_majorant(const RunConfig& c, std::ostream& err)
{
    const bool window = needs_delta(c);
    const double horizon = window ? c.delta : bench::kHorizon;
    SpaceTimeField v;
    if (c.family == "v_eps")
        v = bench::v_eps(c.eps);
    else if (c.family == "w_delta")
        v = bench::w_delta(c.delta);
    else
        v = bench::exact_solution();
    FluxField tau;
    if (c.tau == "exact")
        tau = bench::tau_exact();
    else if (c.tau == "delta")
        tau = bench::tau_delta(c.delta, c.xi, c.eta);
    else if (c.tau == "hat")
        tau = bench::tau_hat(c.delta);
    else
        tau = FluxField::zero();

    const bench::Evaluation ev = bench::evaluate(v, tau, horizon, 1.0, c.quadrature);
    Output o;
    o.header = {"alpha", "lhs", "rhs", "ieff", "eT_sq", "grad_sq", "e0_sq", "flux_gap",
                "residual_norm"};
    for (double a : c.alpha) {
        const ErrorMeasure lhs = make_error_measure(ev.lhs.eT_sq, ev.lhs.grad_sq, a);
        const MajorantBreakdown rhs = with_alpha(ev.rhs, a);
        o.rows.push_back({format_real(a), format_real(lhs.combined), format_real(rhs.total),
                          format_real(efficiency_index(lhs.combined, rhs.total)),
                          format_real(lhs.eT_sq), format_real(lhs.grad_sq),
                          format_real(rhs.e0_sq), format_real(rhs.flux_gap),
                          format_real(rhs.residual_norm)});
        check_bound(o, lhs.combined, rhs.total, "alpha=" + format_real(a), err);
    }
    return o;
}

std::string table_path(const std::string& out, int n, bool several)
{
    if (out.empty() || !several)
        return out;
    const auto dot = out.rfind(".csv");
    const std::string stem = dot == std::string::npos ? out : out.substr(0, dot);
    return stem + "_table" + std::to_string(n) + ".csv";
}

int cmd_tables(const RunConfig& c, std::ostream& os, std::ostream& err)
{
    std::vector<int> which;
    if (c.which == "all")
        which = {1, 2, 3, 4, 5};
    else
        which = {std::stoi(c.which)};
    bool violation = false;
    for (int n : which) {
        bench::TableOptions opts;
        opts.cfg = c.quadrature;
        opts.optimize = c.optimize;
        const bench::Table t = bench::reproduce_table(n, opts);
        const auto header = table_header(t);
        const auto rows = table_rows(t);
        print_table(os, "Table " + std::to_string(n), header, rows);
        for (const auto& r : t.rows)
            for (const auto& cell : r.cells)
                if (cell.name == "ieff" && cell.value < 1.0 - 1e-8) {
                    violation = true;
                    err << "WARNING: table " << n << " row has efficiency index below 1\n";
                }
        const std::string path = table_path(c.out, n, which.size() > 1);
        if (!path.empty())
            emit_csv(header, rows, path);
    }
    return violation ? kBoundViolation : kOk;
}

Output cmd_increment(const RunConfig& c, std::ostream& err)
{
    const ProblemData data = bench::problem();
    const TimePartition part = TimePartition::uniform(bench::kHorizon, c.steps);
    const SolveResult sol = solve_sequence(data, part, c.nodes, c.solver, c.quadrature);
    const SpaceTimeField v = interpolate_in_time(sol.approx);
    const ErrorMeasure e1 = combined_error_norm(bench::exact_solution(), v, 1.0, data, c.quadrature);

    Output o;
    o.header = {"alpha", "steps", "nodes", "error", "simple", "advanced"};
    for (double a : c.alpha) {
        const ErrorMeasure e = make_error_measure(e1.eT_sq, e1.grad_sq, a);
        IncrementalInputs in{sol.approx,
                             data.f,
                             data.phi,
                             data.u0,
                             data.box.domain(),
                             a,
                             data.friedrichs,
                             CoincidenceClassifier(CoincidenceClassifier::kSolverTol)};
        const double s = simple_incremental_majorant(in, sol.midpoint_fluxes(), c.quadrature).total;
        const double adv = advanced_incremental_majorant(in, sol.fluxes, c.quadrature).total;
        o.rows.push_back({format_real(a), std::to_string(c.steps), std::to_string(c.nodes),
                          format_real(e.combined), format_real(s), format_real(adv)});
        check_bound(o, e.combined, s, "simple incremental majorant", err);
        check_bound(o, e.combined, adv, "advanced incremental majorant", err);
    }
    return o;
}

Output cmd_coarsen(const RunConfig& c)
{
    // f~ = f + shift on the coincidence set of u, u0~ = u0; u~ = u is
    // supplied as the simplified solution, which is exact for shift <= 0.
    const ProblemData fine = bench::problem();
    ProblemData coarse = fine;
    const SpaceTimeField f = fine.f;
    const double shift = c.shift;
    coarse.f = SpaceTimeField(
        [f, shift](double x, double t) {
            return 4.0 * std::abs(x) > 2.0 * t + 1.0 ? f(x, t) : f(x, t) + shift;
        },
        {}, {}, f.regions(), "f_coarse");
    CoarseningPair pair{fine, coarse, bench::exact_solution(),
                        CoincidenceClassifier(CoincidenceClassifier::kAnalyticTol)};
    Output o;
    o.header = {"alpha", "shift", "sharp", "coarse"};
    for (double a : c.alpha)
        o.rows.push_back({format_real(a), format_real(shift),
                          format_real(coarsening_bound_sharp(pair, a, c.quadrature)),
                          format_real(coarsening_bound_coarse(pair, a, c.quadrature))});
    return o;
}

Output cmd_signorini(const RunConfig& c, std::ostream& err)
{
    const SyntheticSignorini s;
    const ThinObstacleData data = s.data();
    const SpaceTimeField u = s.solution();
    const double beta = c.perturb;
    const double L = s.length;
    // Raises v at the contact end, keeps v = 0 at x = L.
    const SpaceTimeField bump([beta, L](double x, double t) { return beta * t * (1.0 - x / L); },
                              [beta, L](double, double t) { return -beta * t / L; },
                              [beta, L](double x, double) { return beta * (1.0 - x / L); }, {},
                              "bump");
    const SpaceTimeField v = u + bump;
    const FluxField g = s.flux();
    const double gamma = c.flux_perturb;
    // Vanishes at the contact end, so tau.n keeps its sign there.
    const FluxField tau([g, gamma](double x, double t) { return g(x, t) + gamma * x * t; },
                        [g, gamma](double x, double t) { return g.div(x, t) + gamma * t; },
                        g.regions(), "tau");
    Output o;
    o.header = {"alpha", "lhs", "rhs", "boundary_term", "flux_gap", "residual_norm"};
    for (double a : c.alpha) {
        const SignoriniError e = signorini_error(u, v, a, data.box, c.quadrature);
        const SignoriniBreakdown b = signorini_majorant(
            v, tau, data, s.boundary(), a, CoincidenceClassifier(), c.quadrature);
        o.rows.push_back({format_real(a), format_real(e.combined), format_real(b.total),
                          format_real(b.boundary), format_real(b.flux_gap),
                          format_real(b.residual_norm)});
        check_bound(o, e.combined, b.total, "signorini alpha=" + format_real(a), err);
    }
    return o;
}

Output cmd_solve(const RunConfig& c, std::ostream& os)
{
    const ProblemData data = bench::problem();
    const TimePartition part = TimePartition::uniform(bench::kHorizon, c.steps);
    const SolveResult sol = solve_sequence(data, part, c.nodes, c.solver, c.quadrature);
    long sweeps = 0;
    double worst = 0.0;
    for (std::size_t k = 0; k < sol.iterations.size(); ++k) {
        sweeps += sol.iterations[k];
        worst = std::max(worst, sol.residuals[k]);
    }
    os << "steps " << c.steps << ", nodes " << c.nodes << ", total sweeps " << sweeps
       << ", worst complementarity residual " << format_real(worst) << '\n';
    Output o;
    o.header = {"t", "x", "v"};
    for (std::size_t k = 0; k < sol.nodal.size(); ++k)
        for (int i = 0; i < sol.grid.size(); ++i)
            o.rows.push_back({format_real(part.node(static_cast<int>(k))),
                              format_real(sol.grid.node(i)),
                              format_real(sol.nodal[k][static_cast<std::size_t>(i)])});
    return o;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& os, std::ostream& err)
{
    try {
        cfg.validate();
        if (cfg.command == "tables")
            return cmd_tables(cfg, os, err);
        Output o;
        if (cfg.command == "majorant")
            o = cmd_majorant(cfg, err);
        else if (cfg.command == "increment")
            o = cmd_increment(cfg, err);
        else if (cfg.command == "coarsen")
            o = cmd_coarsen(cfg);
        else if (cfg.command == "signorini")
            o = cmd_signorini(cfg, err);
        else
            o = cmd_solve(cfg, os);
        if (cfg.command != "solve")
            print_table(os, cfg.command, o.header, o.rows);
        if (!cfg.out.empty())
            emit_csv(o.header, o.rows, cfg.out);
        return o.violation ? kBoundViolation : kOk;
    } catch (const QuadratureError& e) {
        err << "error: " << e.what() << " (last estimates " << format_real(e.previous_estimate())
            << ", " << format_real(e.last_estimate()) << ")\n";
    } catch (const InadmissibleError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    }
    return kFailure;
}

}  // namespace obm::cli

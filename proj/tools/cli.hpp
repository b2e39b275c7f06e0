#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "obm/benchmark.hpp"
#include "obm/quadrature.hpp"
#include "obm/solver.hpp"

namespace obm::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kBoundViolation = 2 };

struct RunConfig {
    std::string command;  ///< majorant, tables, increment, coarsen, signorini, solve

    // majorant
    std::string family = "v_eps";  ///< v_eps, w_delta, exact
    std::string tau = "exact";     ///< exact, delta, hat, zero
    double eps = 0.5;
    double delta = 0.5;
    double xi = 0.0;
    double eta = 0.0;
    std::vector<double> alpha{1.0};

    // tables
    std::string which = "all";  ///< 1..5 or all
    bool optimize = true;

    // increment / solve
    int nodes = 201;
    int steps = 40;
    SolverConfig solver{};

    // coarsen
    double shift = 1.0;

    // signorini
    double perturb = 0.0;
    double flux_perturb = 0.0;

    QuadratureConfig quadrature{};
    std::string out;

    /// Parameter ranges for the selected command; throws DomainError naming
    /// the offending field.
    void validate() const;
};

/// Builds a RunConfig from argv. A --config JSON file is read first and
/// flags override it. Returns false when only help was requested.
bool parse_args(int argc, const char* const* argv, RunConfig& cfg);

/// Runs one command, writing CSV to cfg.out (if set) and a table to `os`.
int run(const RunConfig& cfg, std::ostream& os, std::ostream& err);

/// 6 significant digits; NaN becomes an empty field.
std::string format_real(double v);

/// Header plus rows; every row must have the header's width. Separator ',',
/// line terminator LF. Throws Error when the path cannot be written.
void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows, const std::string& path);

/// Table columns: optional block label, then per cell its value and, for
/// columns with printed reference values, the reference and the relative
/// deviation.
std::vector<std::string> table_header(const bench::Table& table);
std::vector<std::vector<std::string>> table_rows(const bench::Table& table);

}  // namespace obm::cli

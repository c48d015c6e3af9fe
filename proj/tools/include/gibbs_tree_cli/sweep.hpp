#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gibbs_tree/invariant_systems.hpp"
#include "gibbs_tree/measure_catalog.hpp"
#include "gibbs_tree/root_solver.hpp"

namespace gibbs_tree::cli {

struct SolutionRow {
    double x = 1.0;
    double y = 1.0;
    std::optional<double> z;
    std::optional<double> t;
    Classification classification = Classification::TRANSLATION_INVARIANT;
    double residual_full = 0.0;

    friend bool operator==(const SolutionRow&, const SolutionRow&) = default;
};

/// Solutions on one invariant set at one theta, sorted by x.
struct SweepRecord {
    double theta = 0.0;
    InvariantSetId set;
    std::vector<SolutionRow> solutions;

    std::size_t count() const noexcept { return solutions.size(); }
    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

inline constexpr const char* kSweepCsvHeader =
    "theta,set_kind,m,sol_index,x,y,z,t,classification,residual_full";

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Solves `set` at params.theta and classifies every solution.
SweepRecord make_record(const ModelParams& params, const InvariantSetId& set, const SolverConfig& config);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

/// Inverse of write_sweep_csv. Throws DomainError on malformed input.
std::vector<SweepRecord> read_sweep_csv(std::istream& in);

/// Scatter bifurcation diagram: theta on the abscissa, every solution x on the
/// ordinate, TI and P2 points in different colours.
void write_bifurcation_svg(std::ostream& out, const std::vector<SweepRecord>& records,
                           const std::string& title);

}  // namespace gibbs_tree::cli

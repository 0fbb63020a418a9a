#pragma once

#include "superosc/solver.hpp"
#include "superosc/types.hpp"
#include "superosc/wavefield.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace superosc {

struct SampleTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Self-contained record of one run: the full input echo plus named scalar
/// outputs and sample grids. Deterministic for fixed inputs.
struct ExperimentReport {
    std::string experiment;
    PhysicalConfig cfg;
    std::optional<ConstraintSet> constraints;
    SolveOptions solver;
    std::map<std::string, double> params;   // pbar, n, spacing, ...
    std::map<std::string, double> outputs;
    std::vector<SampleTable> tables;
    std::vector<std::string> notes;
};

struct SweepPoint {
    double sweep_value = 0.0;
    bool failed = false;
    std::string error_kind;
    std::map<std::string, double> outputs;
};

struct SweepResult {
    std::string experiment;
    PhysicalConfig cfg;
    SolveOptions solver;
    std::map<std::string, double> params;
    std::vector<SweepPoint> points;          // ordered by sweep variable
    std::map<std::string, double> fit;       // trend metadata
};

enum class SweepValues { Alternating, Template };

struct GridOptions {
    int points = 1001;  // per sample table axis
};

/// Match the ideal template at N equidistant points spanning the slit
/// (endpoints included) and report the momentum statistics of the emerging
/// wave, the error curve against the template, and solver diagnostics.
ExperimentReport run_amplitude_matching(const PhysicalConfig& cfg, double pbar, int n,
                                        const SolveOptions& opts = {},
                                        const GridOptions& grids = {});

/// Match the template's value and first N-1 derivatives at the slit centre.
ExperimentReport run_derivative_matching(const PhysicalConfig& cfg, double pbar, int n,
                                         const SolveOptions& opts = {},
                                         const GridOptions& grids = {});

/// Norm and conditioning growth with the constraint count at fixed node
/// spacing, plus the quadratic norm law around the consistent value c of an
/// appended constraint at the largest solved N. `pbar` only matters for
/// Template targets.
SweepResult run_cost_sweep(const PhysicalConfig& cfg, double node_spacing,
                           int n_lo, int n_hi, SweepValues values_mode,
                           double pbar = 0.0, const SolveOptions& opts = {});

/// Wave built from the smallest-eigenvalue eigenvector of the Gram matrix of
/// plane waves at the given nodes.
ExperimentReport run_extreme(const PhysicalConfig& cfg, const std::vector<double>& nodes,
                             const SolveOptions& opts = {},
                             const GridOptions& grids = {});

/// Amplitude matching across increasing N; reports sup/L2 errors against the
/// template and the maximum slope of the incident wave on the slit.
SweepResult run_convergence(const PhysicalConfig& cfg, double pbar,
                            const std::vector<int>& n_list,
                            const SolveOptions& opts = {});

}  // namespace superosc

#pragma once

// Decision layer over fitted laws: compute-optimal allocations for a budget,
// token-to-parameter experiment grids, and cross-family comparisons.

#include "scalekit/arch.hpp"
#include "scalekit/fit.hpp"
#include "scalekit/flops.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scalekit {

// Compute-optimal allocation N* = A' H^a, D* = B' H^b for budget H. The two
// power laws are independent, so C(N*, D*) need not equal H; realized_C and
// its relative deviation from H are reported when a config can be resolved.
struct AllocationPlan {
    double H = 0;
    double N_star = 0;
    double D_star = 0;
    double M_star = 0; // D_star / N_star
    PowerLawFit fit_N;
    PowerLawFit fit_D;
    std::optional<double> realized_C;
    std::optional<double> realized_dev; // realized_C / H - 1
};

// Resolves an arbitrary parameter count to a concrete architecture, e.g.
// nearest row of a shipped config table. Returns (id, config) or nullopt.
using ConfigLookup =
    std::function<std::optional<std::pair<std::string, ArchConfig>>(double N)>;

AllocationPlan compute_optimal_alloc(const PowerLawFit& fit_N, const PowerLawFit& fit_D,
                                     double H);

// As above, with realized training compute evaluated on the resolved config.
AllocationPlan compute_optimal_alloc(const PowerLawFit& fit_N, const PowerLawFit& fit_D,
                                     double H, const ConfigLookup& lookup,
                                     const CostFactors& f, double T_ctx,
                                     double backward_multiplier = 3.0);

// The seven token-to-parameter ratios of the fixed-ratio training design.
const std::vector<double>& default_token_param_ratios(); // 22 ... 2200

// One planned run: D = M * N, with training compute C when a config for N
// could be resolved.
struct GridPoint {
    double N = 0;
    double M = 0;
    double D = 0;
    std::optional<double> C;
    std::optional<std::string> config_id;
    std::optional<std::string> warning;
};

std::vector<GridPoint> plan_token_param_grid(const std::vector<double>& N_list,
                                             const std::vector<double>& M_list,
                                             const ConfigLookup& lookup,
                                             const CostFactors& f = {},
                                             double T_ctx = 8192,
                                             double backward_multiplier = 3.0);

// Predicted losses of two fitted families at their own allocations for the
// same budget. margin = loss_a - loss_b, so swapping inputs negates it.
struct BudgetComparison {
    double H = 0;
    double loss_a = 0;
    double loss_b = 0;
    double margin = 0;
};

BudgetComparison compare_at_budget(const LossSurfaceFit& surface_a,
                                   const LossSurfaceFit& surface_b, double H,
                                   const AllocationPlan& alloc_a,
                                   const AllocationPlan& alloc_b);

} // namespace scalekit

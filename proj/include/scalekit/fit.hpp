#pragma once

// Scaling-law fits over training-run records: the parametric loss surface
// L(N, D) = E + (A N^-alpha + B D^-beta)^gamma, IsoFLOP parabolas, plain
// power laws, fixed-ratio overtraining power laws, and Pareto frontiers.

#include "scalekit/arch.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scalekit {

// One training run. M is the token-to-parameter ratio D/N and must agree
// with it to 1e-9 relative.
struct RunRecord {
    ArchKind kind = ArchKind::transformer;
    double N = 0;     // parameters
    double D = 0;     // training tokens
    double T_ctx = 0; // context length
    double C = 0;     // training FLOPs
    double loss = 0;  // cross-entropy, nats
    double M = 0;     // D / N
};

// Builds a record with M derived from D/N. Throws invalid_input on
// non-positive N, D, C, or loss.
RunRecord make_run_record(ArchKind kind, double N, double D, double T_ctx,
                          double C, double loss);

void require_valid(const RunRecord& r); // throws invalid_input

// Fitted loss surface. E, A, B are stored as natural logs.
struct LossSurfaceFit {
    double logE = 0;
    double logA = 0;
    double logB = 0;
    double alpha = 0;
    double beta = 0;
    double gamma = 1;
    double huber_delta = 1e-3;
    double fit_mse = 0;    // mean squared natural-log residual at the optimum
    bool gamma_frozen = false;
    std::size_t grid_index = 0; // selected initialization (diagnostic)
};

// E + (A N^-alpha + B D^-beta)^gamma.
double predict_loss(const LossSurfaceFit& fit, double N, double D);

// Initialization grid for the loss-surface fit, iterated in row-major order
// with logA outermost and gamma innermost. Starts outside the optimizer
// bounds are clamped onto them.
struct GridSpec {
    std::vector<double> logA{0, 5, 10, 15, 20};
    std::vector<double> logB{0, 5, 10, 15, 20};
    std::vector<double> logE{-1, -0.5, 0, 0.5, 1};
    std::vector<double> alpha{0, 0.2, 0.5, 1};
    std::vector<double> beta{0, 0.2, 0.5, 1};
    std::vector<double> gamma{0, 0.5, 1, 1.5};

    std::size_t size() const;
};

struct SurfaceFitOptions {
    GridSpec grid{};
    bool freeze_gamma = false; // pin gamma = 1
    double tolerance = 1e-9;   // gradient/step tolerance of the local optimizer
    int max_iterations = 200;
    int threads = 0; // 0 = hardware concurrency; result is order-independent

    // Box constraints of the local optimizer.
    double logE_lo = -2, logE_hi = 2;
    double logAB_lo = -5, logAB_hi = 30;
    double alpha_lo = 0, alpha_hi = 2;
    double gamma_lo = 0.01, gamma_hi = 3;
};

// Minimizes sum_i Huber_delta(log Lhat(N_i, D_i) - log L_i) with a bounded
// local optimizer started from every grid point; among converged candidates
// returns the one with the lowest MSE of log residuals, ties broken by grid
// index. Requires >= 8 runs spanning >= 2 distinct N and >= 2 distinct D.
// Throws insufficient_data or no_convergence.
LossSurfaceFit fit_loss_surface(const std::vector<RunRecord>& runs, double huber_delta,
                                const SurfaceFitOptions& options = {});

// y = coefficient * x^exponent, least squares over (log10 x, log10 y).
struct PowerLawFit {
    double coefficient = 0;
    double exponent = 0;
    double r_squared = 0;
};

// Requires >= 2 points, all positive, at least 2 distinct x.
PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

double predict_power_law(const PowerLawFit& fit, double x);

// Quadratic over u = log10(x): loss = c2 u^2 + c1 u + c0. The optimum
// exists only when the parabola is convex; interior additionally requires
// the optimum to lie within the swept x range.
struct ParabolaFit {
    double c2 = 0, c1 = 0, c0 = 0;
    std::optional<double> optimum_x;
    std::optional<double> optimum_loss;
    bool interior = false;
};

// points are (x, loss) with x > 0; requires >= 3 distinct x values.
ParabolaFit fit_isoflop_profile(const std::vector<std::pair<double, double>>& points);

// Per-ratio power laws loss = lambda * C^-eta over runs bucketed by M within
// a relative tolerance. Buckets with fewer than 2 runs are skipped with a
// warning. Map keys are the geometric mean M of each bucket.
struct OvertrainingFit {
    std::map<double, PowerLawFit> by_ratio;
    std::vector<std::string> warnings;
};

OvertrainingFit fit_overtraining(const std::vector<RunRecord>& runs,
                                 double ratio_tolerance = 0.02);

// Decay exponent eta of a loss-vs-compute fit (loss falls as C^-eta).
double overtraining_eta(const PowerLawFit& fit);

// Runs not dominated in (C minimized, loss minimized), sorted by C.
// Duplicate points are all kept.
std::vector<RunRecord> pareto_frontier(std::vector<RunRecord> runs);

} // namespace scalekit

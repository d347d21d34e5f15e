#include "scalekit/fit.hpp"

#include "scalekit/errors.hpp"

#include <Eigen/Dense>
#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

namespace scalekit {

RunRecord make_run_record(ArchKind kind, double N, double D, double T_ctx, double C,
                          double loss) {
    RunRecord r;
    r.kind = kind;
    r.N = N;
    r.D = D;
    r.T_ctx = T_ctx;
    r.C = C;
    r.loss = loss;
    r.M = (N > 0) ? D / N : 0;
    require_valid(r);
    return r;
}

void require_valid(const RunRecord& r) {
    if (!(r.N > 0) || !(r.D > 0) || !(r.C > 0) || !(r.loss > 0))
        throw invalid_input("run record: N, D, C, loss must be positive");
    if (r.T_ctx < 0) throw invalid_input("run record: T_ctx must be >= 0");
    const double m = r.D / r.N;
    if (std::abs(r.M - m) > 1e-9 * m)
        throw invalid_input("run record: M inconsistent with D/N");
}

double predict_loss(const LossSurfaceFit& fit, double N, double D) {
    if (!(N > 0) || !(D > 0)) throw invalid_input("predict_loss: N, D must be positive");
    const double s = std::exp(fit.logA - fit.alpha * std::log(N)) +
                     std::exp(fit.logB - fit.beta * std::log(D));
    return std::exp(fit.logE) + std::pow(s, fit.gamma);
}

std::size_t GridSpec::size() const {
    return logA.size() * logB.size() * logE.size() * alpha.size() * beta.size() *
           gamma.size();
}

namespace {

// Natural-log residual of the surface prediction for one run.
struct SurfaceResidual {
    double lnN, lnD, lnL;

    template <class T>
    bool operator()(const T* logE, const T* logA, const T* logB, const T* alpha,
                    const T* beta, const T* gamma, T* residual) const {
        const T s = exp(*logA - *alpha * lnN) + exp(*logB - *beta * lnD);
        residual[0] = log(exp(*logE) + exp(*gamma * log(s))) - lnL;
        return true;
    }
};

struct SurfaceStart {
    double logE, logA, logB, alpha, beta, gamma;
};

struct SurfaceCandidate {
    bool converged = false;
    SurfaceStart params{};
    double mse = std::numeric_limits<double>::infinity();
};

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double log_mse(const SurfaceStart& p, const std::vector<RunRecord>& runs) {
    double acc = 0;
    for (const auto& r : runs) {
        const double s = std::exp(p.logA - p.alpha * std::log(r.N)) +
                         std::exp(p.logB - p.beta * std::log(r.D));
        const double res =
            std::log(std::exp(p.logE) + std::exp(p.gamma * std::log(s))) -
            std::log(r.loss);
        acc += res * res;
    }
    return acc / static_cast<double>(runs.size());
}

SurfaceCandidate run_one_start(const std::vector<RunRecord>& runs, double huber_delta,
                               const SurfaceFitOptions& opt, SurfaceStart start) {
    SurfaceCandidate cand;
    double logE = start.logE, logA = start.logA, logB = start.logB;
    double alpha = start.alpha, beta = start.beta;
    double gamma = opt.freeze_gamma ? 1.0 : start.gamma;

    ceres::Problem problem;
    for (const auto& r : runs) {
        auto* cost = new ceres::AutoDiffCostFunction<SurfaceResidual, 1, 1, 1, 1, 1, 1, 1>(
            new SurfaceResidual{std::log(r.N), std::log(r.D), std::log(r.loss)});
        problem.AddResidualBlock(cost, new ceres::HuberLoss(huber_delta), &logE, &logA,
                                 &logB, &alpha, &beta, &gamma);
    }
    problem.SetParameterLowerBound(&logE, 0, opt.logE_lo);
    problem.SetParameterUpperBound(&logE, 0, opt.logE_hi);
    for (double* block : {&logA, &logB}) {
        problem.SetParameterLowerBound(block, 0, opt.logAB_lo);
        problem.SetParameterUpperBound(block, 0, opt.logAB_hi);
    }
    for (double* block : {&alpha, &beta}) {
        problem.SetParameterLowerBound(block, 0, opt.alpha_lo);
        problem.SetParameterUpperBound(block, 0, opt.alpha_hi);
    }
    if (opt.freeze_gamma) {
        problem.SetParameterBlockConstant(&gamma);
    } else {
        problem.SetParameterLowerBound(&gamma, 0, opt.gamma_lo);
        problem.SetParameterUpperBound(&gamma, 0, opt.gamma_hi);
    }

    ceres::Solver::Options solver;
    solver.minimizer_type = ceres::TRUST_REGION;
    solver.linear_solver_type = ceres::DENSE_QR;
    solver.max_num_iterations = opt.max_iterations;
    solver.function_tolerance = opt.tolerance;
    solver.gradient_tolerance = opt.tolerance;
    solver.parameter_tolerance = opt.tolerance;
    solver.logging_type = ceres::SILENT;
    solver.minimizer_progress_to_stdout = false;

    ceres::Solver::Summary summary;
    ceres::Solve(solver, &problem, &summary);

    cand.converged = summary.termination_type == ceres::CONVERGENCE ||
                     summary.termination_type == ceres::USER_SUCCESS;
    cand.params = {logE, logA, logB, alpha, beta, gamma};
    if (cand.converged) cand.mse = log_mse(cand.params, runs);
    return cand;
}

} // namespace

LossSurfaceFit fit_loss_surface(const std::vector<RunRecord>& runs, double huber_delta,
                                const SurfaceFitOptions& options) {
    if (!(huber_delta > 0)) throw invalid_input("fit_loss_surface: huber_delta must be positive");
    for (const auto& r : runs) require_valid(r);
    std::set<double> distinct_N, distinct_D;
    for (const auto& r : runs) {
        distinct_N.insert(r.N);
        distinct_D.insert(r.D);
    }
    if (runs.size() < 8 || distinct_N.size() < 2 || distinct_D.size() < 2)
        throw insufficient_data(
            "fit_loss_surface: need >= 8 runs spanning >= 2 distinct N and D");
    const GridSpec& g = options.grid;
    if (g.logA.empty() || g.logB.empty() || g.logE.empty() || g.alpha.empty() ||
        g.beta.empty() || g.gamma.empty())
        throw invalid_input("fit_loss_surface: empty initialization grid axis");

    // Row-major start list: logA outermost, gamma innermost. Starts outside
    // the optimizer box are clamped onto it.
    std::vector<SurfaceStart> starts;
    starts.reserve(g.size());
    for (double la : g.logA)
        for (double lb : g.logB)
            for (double le : g.logE)
                for (double al : g.alpha)
                    for (double be : g.beta)
                        for (double ga : g.gamma)
                            starts.push_back({clamp(le, options.logE_lo, options.logE_hi),
                                              clamp(la, options.logAB_lo, options.logAB_hi),
                                              clamp(lb, options.logAB_lo, options.logAB_hi),
                                              clamp(al, options.alpha_lo, options.alpha_hi),
                                              clamp(be, options.alpha_lo, options.alpha_hi),
                                              clamp(ga, options.gamma_lo, options.gamma_hi)});

    std::vector<SurfaceCandidate> candidates(starts.size());
    unsigned n_threads = options.threads > 0
                             ? static_cast<unsigned>(options.threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(starts.size()));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < starts.size(); ++i)
            candidates[i] = run_one_start(runs, huber_delta, options, starts[i]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < starts.size(); i += n_threads)
                    candidates[i] = run_one_start(runs, huber_delta, options, starts[i]);
            });
        }
        for (auto& th : pool) th.join();
    }

    // Lowest MSE wins; the scan order breaks ties by grid index, so the
    // result is independent of thread scheduling.
    std::size_t best = starts.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (!candidates[i].converged) continue;
        if (best == starts.size() || candidates[i].mse < candidates[best].mse) best = i;
    }
    if (best == starts.size())
        throw no_convergence("fit_loss_surface: no initialization converged");

    const SurfaceCandidate& c = candidates[best];
    LossSurfaceFit fit;
    fit.logE = c.params.logE;
    fit.logA = c.params.logA;
    fit.logB = c.params.logB;
    fit.alpha = c.params.alpha;
    fit.beta = c.params.beta;
    fit.gamma = c.params.gamma;
    fit.huber_delta = huber_delta;
    fit.fit_mse = c.mse;
    fit.gamma_frozen = options.freeze_gamma;
    fit.grid_index = best;
    return fit;
}

PowerLawFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw invalid_input("fit_power_law: size mismatch");
    if (xs.size() < 2) throw insufficient_data("fit_power_law: need >= 2 points");
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!(xs[i] > 0) || !(ys[i] > 0))
            throw invalid_input("fit_power_law: inputs must be positive");
    if (std::set<double>(xs.begin(), xs.end()).size() < 2)
        throw insufficient_data("fit_power_law: need >= 2 distinct x");

    const double n = static_cast<double>(xs.size());
    double su = 0, sv = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        su += std::log10(xs[i]);
        sv += std::log10(ys[i]);
    }
    const double mu = su / n, mv = sv / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double du = std::log10(xs[i]) - mu;
        sxx += du * du;
        sxy += du * (std::log10(ys[i]) - mv);
    }
    const double slope = sxy / sxx;
    const double intercept = mv - slope * mu;

    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = std::log10(ys[i]);
        const double rhat = v - (slope * std::log10(xs[i]) + intercept);
        ss_res += rhat * rhat;
        ss_tot += (v - mv) * (v - mv);
    }

    PowerLawFit fit;
    fit.coefficient = std::pow(10.0, intercept);
    fit.exponent = slope;
    fit.r_squared = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot)
                               : (ss_res <= 1e-24 ? 1.0 : 0.0);
    return fit;
}

double predict_power_law(const PowerLawFit& fit, double x) {
    if (!(x > 0)) throw invalid_input("predict_power_law: x must be positive");
    return fit.coefficient * std::pow(x, fit.exponent);
}

ParabolaFit fit_isoflop_profile(const std::vector<std::pair<double, double>>& points) {
    std::set<double> distinct;
    for (const auto& [x, loss] : points) {
        (void)loss;
        if (!(x > 0)) throw invalid_input("fit_isoflop_profile: x must be positive");
        distinct.insert(x);
    }
    if (distinct.size() < 3)
        throw insufficient_data("fit_isoflop_profile: need >= 3 distinct x");

    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    double u_min = std::numeric_limits<double>::infinity(), u_max = -u_min;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double u = std::log10(points[static_cast<std::size_t>(i)].first);
        X(i, 0) = u * u;
        X(i, 1) = u;
        X(i, 2) = 1.0;
        y(i) = points[static_cast<std::size_t>(i)].second;
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
    }
    const Eigen::Vector3d c = X.colPivHouseholderQr().solve(y);

    ParabolaFit fit;
    fit.c2 = c(0);
    fit.c1 = c(1);
    fit.c0 = c(2);
    // Curvature whose effect across the sweep is below solver noise is a flat
    // profile, not a convex one; collinear data must not produce an optimum.
    double y_scale = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) y_scale = std::max(y_scale, std::abs(y(i)));
    const double span = u_max - u_min;
    if (fit.c2 > 0 && fit.c2 * span * span > 1e-12 * y_scale) {
        const double u_star = -fit.c1 / (2.0 * fit.c2);
        fit.optimum_x = std::pow(10.0, u_star);
        fit.optimum_loss = fit.c0 - fit.c1 * fit.c1 / (4.0 * fit.c2);
        fit.interior = u_star >= u_min && u_star <= u_max;
    }
    return fit;
}

OvertrainingFit fit_overtraining(const std::vector<RunRecord>& runs,
                                 double ratio_tolerance) {
    if (!(ratio_tolerance >= 0))
        throw invalid_input("fit_overtraining: tolerance must be >= 0");
    for (const auto& r : runs) require_valid(r);

    std::vector<RunRecord> sorted = runs;
    std::sort(sorted.begin(), sorted.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.M < b.M; });

    OvertrainingFit out;
    std::size_t i = 0;
    while (i < sorted.size()) {
        // Greedy bucket anchored at its smallest M.
        const double ref = sorted[i].M;
        std::size_t j = i;
        while (j < sorted.size() && std::abs(sorted[j].M - ref) <= ratio_tolerance * ref)
            ++j;
        const std::size_t count = j - i;
        double log_gm = 0;
        for (std::size_t k = i; k < j; ++k) log_gm += std::log(sorted[k].M);
        const double key = std::exp(log_gm / static_cast<double>(count));
        if (count < 2) {
            std::ostringstream msg;
            msg << "ratio group M=" << key << " skipped: fewer than 2 runs";
            out.warnings.push_back(msg.str());
        } else {
            std::vector<double> cs, losses;
            cs.reserve(count);
            losses.reserve(count);
            for (std::size_t k = i; k < j; ++k) {
                cs.push_back(sorted[k].C);
                losses.push_back(sorted[k].loss);
            }
            out.by_ratio[key] = fit_power_law(cs, losses);
        }
        i = j;
    }
    return out;
}

double overtraining_eta(const PowerLawFit& fit) { return -fit.exponent; }

std::vector<RunRecord> pareto_frontier(std::vector<RunRecord> runs) {
    std::stable_sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) {
        if (a.C != b.C) return a.C < b.C;
        return a.loss < b.loss;
    });

    std::vector<RunRecord> frontier;
    double best = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    while (i < runs.size()) {
        std::size_t j = i;
        while (j < runs.size() && runs[j].C == runs[i].C) ++j;
        // Within an equal-C group only the group minimum survives (kept with
        // its duplicates); it must also strictly beat every cheaper run.
        const double group_min = runs[i].loss;
        if (group_min < best) {
            for (std::size_t k = i; k < j && runs[k].loss == group_min; ++k)
                frontier.push_back(runs[k]);
            best = group_min;
        }
        i = j;
    }
    return frontier;
}

} // namespace scalekit

#include "scalekit/plan.hpp"

#include "scalekit/errors.hpp"

namespace scalekit {

AllocationPlan compute_optimal_alloc(const PowerLawFit& fit_N, const PowerLawFit& fit_D,
                                     double H) {
    if (!(H > 0)) throw invalid_input("compute_optimal_alloc: H must be positive");
    AllocationPlan plan;
    plan.H = H;
    plan.N_star = predict_power_law(fit_N, H);
    plan.D_star = predict_power_law(fit_D, H);
    plan.M_star = plan.D_star / plan.N_star;
    plan.fit_N = fit_N;
    plan.fit_D = fit_D;
    return plan;
}

AllocationPlan compute_optimal_alloc(const PowerLawFit& fit_N, const PowerLawFit& fit_D,
                                     double H, const ConfigLookup& lookup,
                                     const CostFactors& f, double T_ctx,
                                     double backward_multiplier) {
    AllocationPlan plan = compute_optimal_alloc(fit_N, fit_D, H);
    if (lookup && T_ctx > 0 && plan.D_star >= T_ctx) {
        if (auto resolved = lookup(plan.N_star)) {
            plan.realized_C = training_compute(resolved->second, T_ctx, plan.D_star, f,
                                               backward_multiplier);
            plan.realized_dev = *plan.realized_C / H - 1.0;
        }
    }
    return plan;
}

const std::vector<double>& default_token_param_ratios() {
    static const std::vector<double> ratios = {22, 44, 110, 220, 550, 1100, 2200};
    return ratios;
}

std::vector<GridPoint> plan_token_param_grid(const std::vector<double>& N_list,
                                             const std::vector<double>& M_list,
                                             const ConfigLookup& lookup,
                                             const CostFactors& f, double T_ctx,
                                             double backward_multiplier) {
    for (double n : N_list)
        if (!(n > 0)) throw invalid_input("plan_token_param_grid: N must be positive");
    for (double m : M_list)
        if (!(m > 0)) throw invalid_input("plan_token_param_grid: M must be positive");
    if (!(T_ctx > 0)) throw invalid_input("plan_token_param_grid: T_ctx must be positive");

    std::vector<GridPoint> grid;
    grid.reserve(N_list.size() * M_list.size());
    for (double N : N_list) {
        for (double M : M_list) {
            GridPoint p;
            p.N = N;
            p.M = M;
            p.D = M * N;
            if (auto resolved = lookup ? lookup(N) : std::nullopt) {
                p.config_id = resolved->first;
                if (p.D >= T_ctx) {
                    p.C = training_compute(resolved->second, T_ctx, p.D, f,
                                           backward_multiplier);
                } else {
                    p.warning = "D below one context length; compute omitted";
                }
            } else {
                p.warning = "no config resolvable for N; compute omitted";
            }
            grid.push_back(std::move(p));
        }
    }
    return grid;
}

BudgetComparison compare_at_budget(const LossSurfaceFit& surface_a,
                                   const LossSurfaceFit& surface_b, double H,
                                   const AllocationPlan& alloc_a,
                                   const AllocationPlan& alloc_b) {
    if (!(H > 0)) throw invalid_input("compare_at_budget: H must be positive");
    BudgetComparison cmp;
    cmp.H = H;
    cmp.loss_a = predict_loss(surface_a, alloc_a.N_star, alloc_a.D_star);
    cmp.loss_b = predict_loss(surface_b, alloc_b.N_star, alloc_b.D_star);
    cmp.margin = cmp.loss_a - cmp.loss_b;
    return cmp;
}

} // namespace scalekit

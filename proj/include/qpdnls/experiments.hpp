#pragma once

#include <string>
#include <vector>

#include "qpdnls/bounds.hpp"
#include "qpdnls/solver.hpp"

namespace qpdnls {

// Successive-iterate contraction measurement. weighted_diff is the sup of
// e^{kappa/4 |n|_1} |c_k - c_{k-1}| at the final mesh time, measured_ratio
// the step-to-step quotient, bound_ratio the theoretical contraction factor
// q(t), and bound_tail the absolute envelope C' q(t)^k.
struct CauchyRow {
    int k = 0;
    double weighted_diff = 0.0;
    double measured_ratio = 0.0;
    double bound_ratio = 0.0;
    double bound_tail = 0.0;
    bool within_ratio = true;
    bool within_tail = true;
};

struct CauchyResult {
    std::vector<CauchyRow> rows;
    double t = 0.0;
    double contraction = 0.0;
    double c_prime = 0.0;
    double t3 = 0.0;
    bool assertions_enabled = false;
    bool all_within = true;
    bool converging = true;
};

CauchyResult cauchy_ratio_experiment(const ProblemConfig& config, const DecayProfile& profile, int K);

// One run of the weak-nonlinearity study at a single epsilon, plus the
// derived norms of the deviation from the linear flow at t = |eps|^{eta-1}.
struct AsymptoticRow {
    double epsilon = 0.0;
    double t = 0.0;
    double sup_proxy = 0.0; // l1 sum of coefficient deviations, a sup-norm majorant
    double sobolev = 0.0;   // l2 norm of e^{varrho |n|} times the deviation
    double eta = 0.0;
    double varrho = 0.0;
    double sobolev_bound = 0.0;
    bool within_bound = false;
    bool decay_ok = false;
    bool reliable = true;
    bool unsupported_regime = false;
    double m_drift = 0.0, h_drift = 0.0, e_drift = 0.0;
    int steps = 0;
};

struct SweepResult {
    std::vector<AsymptoticRow> rows;
    double eta = 0.0, varrho = 0.0;
    double slope_sup = 0.0;
    double slope_sobolev = 0.0;
    bool monotone_sup = true;
    bool monotone_sobolev = true;
    bool slope_ok = false;
    bool all_within_bound = true;
};

struct SweepOptions {
    double dt_target = 1.0 / 256.0;
    int monitor_stride_divisor = 64; // monitors every steps/divisor steps
};

SweepResult asymptotic_sweep(const ProblemConfig& base, const DecayProfile& profile, double eta,
                             double varrho, const std::vector<double>& eps_list,
                             const SweepOptions& opts = {});

// Two independent trajectory producers compared in the weighted sup norm
// e^{kappa/4 |n|_1} over [0, min(t4, horizon)].
enum class UniquenessMode { picard_vs_rk4, box_doubling };

struct UniquenessReport {
    double max_weighted_diff = 0.0;
    double weight_rate = 0.0;
    double t4 = 0.0;
    double horizon = 0.0;
    std::string method_a, method_b;
    double threshold = 1e-9;
    bool pass = false;
    double worst_time = 0.0;
    LatticePoint worst_mode;
};

UniquenessReport uniqueness_probe(const ProblemConfig& config, const DecayProfile& profile,
                                  UniquenessMode mode, int picard_K = 4);

} // namespace qpdnls

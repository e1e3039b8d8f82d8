#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qpdnls/multiindex.hpp"
#include "qpdnls/state.hpp"

namespace qpdnls {

// Exponential envelope of the initial data: |c(n)| <= sqrt(B) e^{-kappa |n|_1}.
struct DecayProfile {
    double B = 1.0;
    double kappa = 1.0;

    DecayProfile() = default;
    DecayProfile(double b, double k);
};

// The explicit constants of the local theory for one parameter set.
//   C        decay envelope of every iterate, (3/2) sqrt(B) (12/kappa)^nu
//   t2       iterate-boundedness horizon
//   t3       contraction horizon
//   t1       min(t2, t3)
//   t4       uniqueness horizon, evaluated with C1 = C and rho = kappa/2
//   C_prime  prefactor of the contraction estimate
//   C_dprime geometric-tail prefactor C'/(1 - q), reported at the time
//            given in c_dprime_time (default t3/2, where q = 1/2)
struct ExistenceTimes {
    double C = 0.0;
    double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
    double C_prime = 0.0;
    double C_dprime = 0.0;
    double c_dprime_time = 0.0;
};

ExistenceTimes compute_constants(const DecayProfile& profile, int nu, double omega_norm,
                                 double t_for_c_dprime = -1.0);

// q(t) = 12 e C^2 (24/kappa)^{2nu+1} |omega| t, the per-step contraction ratio.
double contraction_factor(const DecayProfile& profile, int nu, double omega_norm, double t);

// Verified envelope over a trajectory window: fitted_constant is the max of
// |c(t,n)| e^{rate |n|_1} over all sampled (t,n); pass iff it stays at or
// below the threshold.
struct DecayCertificate {
    double rate = 0.0;
    double fitted_constant = 0.0;
    double threshold_constant = 0.0;
    bool pass = false;
    LatticePoint worst_mode;
    double worst_time = 0.0;
    std::pair<double, double> time_window{0.0, 0.0};
};

DecayCertificate check_decay(const Trajectory& trajectory, double rate, double threshold);

// Constrained weighted lattice sum over r-tuples with alternating sum n,
// truncated to |m_j|_1 <= radius per slot, against the closed bound
// e^{-kappa/2 |n|} (12/kappa)^{|alpha| + nu r} prod alpha_j!.
// by_radius records the truncated sum at increasing radii so the
// truncation error is visibly decreasing.
struct LatticeSumCheck {
    double truncated_sum = 0.0;
    double bound = 0.0;
    bool pass = false;
    std::vector<std::pair<std::int64_t, double>> by_radius;
};

LatticeSumCheck lattice_sum_check(int nu, int r, const MultiIndex& alpha, double kappa,
                                  const LatticePoint& n, std::int64_t radius);

// Unconstrained variant: separable product of one-slot sums, against
// (6/kappa)^{|alpha| + nu r} prod alpha_j!.
struct UnconstrainedSumCheck {
    double truncated_sum = 0.0;
    double bound = 0.0;
    bool pass = false;
};

UnconstrainedSumCheck lattice_sum_unconstrained(int nu, int r, const MultiIndex& alpha, double kappa,
                                                std::int64_t radius);

// Grid verification of the scalar inequalities used throughout:
//   y^m e^{-Ky} <= m! K^{-m}
//   sum_{m in Z} e^{-K|m|} <= 3/K
//   n! >= (n/e)^n
struct ScalarBoundItem {
    std::string name;
    std::string instance;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct ScalarBoundReport {
    std::vector<ScalarBoundItem> items;
    bool all_pass = true;
};

ScalarBoundReport scalar_bound_checks();

} // namespace qpdnls

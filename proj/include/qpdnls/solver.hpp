#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qpdnls/state.hpp"

namespace qpdnls {

using SpectralMap = std::map<std::int64_t, Complex>;

// Constrained alternating-conjugate product sum with 2p+1 factors: for each
// output mode n, the sum over factor tuples whose alternating sum is n of
// prod_j factor_j(n_j), conjugating even positions. Evaluated as a left
// fold over factors in a fixed support order, so results are reproducible
// and independent of the box size. Output modes outside out_box are dropped,
// or raise a BudgetError when error_on_clip is set (clip_who names the
// caller in the message).
SpectralMap alternating_convolution_mixed(std::span<const FourierState* const> factors,
                                          const TruncationBox& out_box, bool error_on_clip = false,
                                          const std::string& clip_who = {});

SpectralMap alternating_convolution(const FourierState& state, int p, const TruncationBox& out_box,
                                    bool error_on_clip = false, const std::string& clip_who = {});

// Right side of the coefficient system:
//   n -> -i <n>^2 c(n) + sgn * epsilon * i <n> * conv(n)
// with sgn = +1 for dnls_minus and -1 for gdnls_plus.
SpectralMap rhs(const FourierState& state, const ProblemConfig& config);

double sign_factor(ProblemConfig::Sign sign);

// Phase rotation e^{-i <n>^2 t} per mode; modulus preserved exactly.
FourierState linear_solution(const FourierState& initial, const FrequencyVector& omega, double t);

// Mass, momentum and energy in the spatial-mean sense: quadratic terms are
// plain weighted sums, the quartic and sextic terms are constrained
// alternating lattice sums evaluated through pair-correlation maps.
Monitors conserved_quantities(const FourierState& state, const FrequencyVector& omega);

// Brute-force variants for small supports; the pair-map route is checked
// against these in the tests.
double quartic_sum_direct(const FourierState& state);
Monitors conserved_quantities_direct(const FourierState& state, const FrequencyVector& omega);

// The iteration on the integral form, kept on a shared uniform mesh.
// iterates[k] is the k-th iterate sampled at every mesh time; iterate 0 is
// the linear solution. differences[k-1] holds iterate k minus iterate k-1,
// computed directly through the telescoped product expansion rather than by
// subtraction, so tiny differences carry no cancellation error.
struct PicardRun {
    std::vector<Trajectory> iterates;
    std::vector<Trajectory> differences;
};

PicardRun picard_run(const FourierState& initial, const ProblemConfig& config, int K);
std::vector<Trajectory> picard_iterate(const FourierState& initial, const ProblemConfig& config, int K);

// Interaction-picture integrator: a(t,n) = e^{i <n>^2 t} c(t,n) removes the
// linear rotation exactly, and a is stepped with classic fourth-order
// Runge-Kutta. Snapshots (and monitors) are stored every snapshot_stride
// steps; stride 0 keeps only the first and last states.
struct IntegrateOptions {
    int snapshot_stride = 1;
    bool with_monitors = true;
};

Trajectory integrate(const FourierState& initial, const ProblemConfig& config,
                     const IntegrateOptions& opts = {});

// sup over the union support of e^{rate |n|_1} |a(n) - b(n)|
double weighted_sup_diff(const FourierState& a, const FourierState& b, double rate);

// Cumulative quadrature of samples g_0..g_M on a uniform mesh of width h:
// out[m] approximates the integral up to node m.
std::vector<Complex> cumulative_quadrature(std::span<const Complex> g, double h,
                                           ProblemConfig::Quadrature rule);

} // namespace qpdnls

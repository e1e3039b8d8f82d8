#include "qpdnls/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "qpdnls/errors.hpp"

namespace qpdnls {

CauchyResult cauchy_ratio_experiment(const ProblemConfig& config, const DecayProfile& profile, int K) {
    if (K < 1) throw UsageError("contraction experiment needs K >= 1");
    const double omega_norm = config.omega.linf();
    const ExistenceTimes consts = compute_constants(profile, config.nu, omega_norm);

    CauchyResult result;
    result.t = config.t_end;
    result.t3 = consts.t3;
    result.c_prime = consts.C_prime;
    result.contraction = contraction_factor(profile, config.nu, omega_norm, config.t_end);
    result.assertions_enabled = config.t_end < consts.t3;

    const FourierState initial = config.build_initial();
    const PicardRun run = picard_run(initial, config, K);
    const double rate = profile.kappa / 4.0;

    double prev_wd = -1.0;
    int rising = 0;
    for (int k = 1; k <= K; ++k) {
        const Trajectory& delta = run.differences[static_cast<std::size_t>(k) - 1];
        CauchyRow row;
        row.k = k;
        row.weighted_diff = delta.states.back().weighted_sup(rate);
        row.bound_ratio = result.contraction;
        row.bound_tail = consts.C_prime * std::pow(result.contraction, k);
        if (k >= 2) {
            row.measured_ratio = prev_wd > 0.0 ? row.weighted_diff / prev_wd : 0.0;
            row.within_ratio = row.measured_ratio <= row.bound_ratio;
            if (row.measured_ratio > 1.0) ++rising;
        }
        row.within_tail = row.weighted_diff <= row.bound_tail;
        if (result.assertions_enabled && (!row.within_ratio || !row.within_tail))
            result.all_within = false;
        prev_wd = row.weighted_diff;
        result.rows.push_back(row);
    }
    result.converging = rising < std::max(1, K / 2);
    return result;
}

namespace {

double linear_fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    return denom == 0.0 ? 0.0 : (static_cast<double>(n) * sxy - sx * sy) / denom;
}

} // namespace

SweepResult asymptotic_sweep(const ProblemConfig& base, const DecayProfile& profile, double eta,
                             double varrho, const std::vector<double>& eps_list,
                             const SweepOptions& opts) {
    if (eta <= 0.0 || eta >= 1.0) throw ConfigError("eta must lie in (0,1)");
    const double gap = profile.kappa / 4.0 - 4.0 * varrho;
    if (!(gap > 0.0 && gap <= 1.0))
        throw ConfigError("varrho out of range: require 0 < kappa/4 - 4 varrho <= 1");
    if (eps_list.empty()) throw ConfigError("sweep needs at least one epsilon");

    const double omega_norm = base.omega.linf();
    const ExistenceTimes consts = compute_constants(profile, base.nu, omega_norm);
    const double bound_prefactor =
        3.0 / gap * std::pow(12.0 / profile.kappa, 6);

    SweepResult result;
    result.eta = eta;
    result.varrho = varrho;

    for (double eps : eps_list) {
        if (eps <= 0.0) throw ConfigError("sweep epsilons must be positive");
        AsymptoticRow row;
        row.epsilon = eps;
        row.eta = eta;
        row.varrho = varrho;
        row.t = std::pow(eps, -1.0 + eta);
        row.unsupported_regime = row.t * eps >= 1.0 - 1e-12;

        ProblemConfig cfg = base;
        cfg.epsilon = eps;
        cfg.t_end = row.t;
        cfg.steps = std::max(16, static_cast<int>(std::ceil(row.t / opts.dt_target)));
        row.steps = cfg.steps;

        // resolution guard: one step must resolve the fastest integrand phase
        double maxfreq = 0.0;
        for (const LatticePoint& p : cfg.box().enumerate())
            maxfreq = std::max(maxfreq, std::abs(pairing(p, cfg.omega)));
        row.reliable = cfg.dt() * 4.0 * maxfreq * maxfreq <= 1.0;

        const FourierState initial = cfg.build_initial();
        IntegrateOptions iopts;
        iopts.snapshot_stride = std::max(1, cfg.steps / std::max(1, opts.monitor_stride_divisor));
        iopts.with_monitors = true;
        const Trajectory traj = integrate(initial, cfg, iopts);

        const FourierState& final_state = traj.states.back();
        const FourierState linear = linear_solution(initial, cfg.omega, row.t);
        double sup_proxy = 0.0, sob2 = 0.0;
        {
            SpectralMap keys;
            for (const auto& [key, value] : final_state.data()) keys.emplace(key, Complex());
            for (const auto& [key, value] : linear.data()) keys.emplace(key, Complex());
            for (const auto& [key, unused] : keys) {
                auto ita = final_state.data().find(key);
                auto itb = linear.data().find(key);
                const Complex diff = (ita == final_state.data().end() ? Complex() : ita->second) -
                                     (itb == linear.data().end() ? Complex() : itb->second);
                const double mag = std::abs(diff);
                const double l1 = static_cast<double>(packed::l1(key, cfg.nu));
                sup_proxy += mag;
                const double w = std::exp(varrho * l1);
                sob2 += w * w * mag * mag;
            }
        }
        row.sup_proxy = sup_proxy;
        row.sobolev = std::sqrt(sob2);
        row.sobolev_bound = std::sqrt(bound_prefactor) * eps * row.t * omega_norm;
        row.within_bound = row.sobolev <= row.sobolev_bound;
        if (!row.within_bound) result.all_within_bound = false;

        row.decay_ok = check_decay(traj, profile.kappa / 2.0, consts.C).pass;

        if (!traj.monitors.empty()) {
            const Monitors m0 = traj.monitors.front();
            for (const Monitors& m : traj.monitors) {
                row.m_drift = std::max(row.m_drift, std::abs(m.M - m0.M) / std::max(std::abs(m0.M), 1e-300));
                row.h_drift = std::max(row.h_drift, std::abs(m.H - m0.H) / std::max(std::abs(m0.H), 1e-300));
                row.e_drift = std::max(row.e_drift, std::abs(m.E - m0.E) / std::max(std::abs(m0.E), 1e-300));
            }
        }
        result.rows.push_back(row);
    }

    // monotone trend with 5 percent slack, rows in the given epsilon order
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].epsilon < result.rows[i - 1].epsilon) {
            if (result.rows[i].sup_proxy > 1.05 * result.rows[i - 1].sup_proxy) result.monotone_sup = false;
            if (result.rows[i].sobolev > 1.05 * result.rows[i - 1].sobolev) result.monotone_sobolev = false;
        }
    }

    std::vector<double> lx, ly_sup, ly_sob;
    for (const AsymptoticRow& row : result.rows) {
        if (!row.reliable || row.sup_proxy <= 0.0 || row.sobolev <= 0.0) continue;
        lx.push_back(std::log(row.epsilon));
        ly_sup.push_back(std::log(row.sup_proxy));
        ly_sob.push_back(std::log(row.sobolev));
    }
    result.slope_sup = linear_fit_slope(lx, ly_sup);
    result.slope_sobolev = linear_fit_slope(lx, ly_sob);
    result.slope_ok = result.slope_sup >= 0.5 * eta && result.slope_sup <= 2.0 * eta;
    return result;
}

UniquenessReport uniqueness_probe(const ProblemConfig& config, const DecayProfile& profile,
                                  UniquenessMode mode, int picard_K) {
    const double omega_norm = config.omega.linf();
    const ExistenceTimes consts = compute_constants(profile, config.nu, omega_norm);

    UniquenessReport rep;
    rep.t4 = consts.t4;
    rep.weight_rate = profile.kappa / 4.0;
    rep.horizon = std::min(consts.t4, config.t_end);
    rep.worst_mode = LatticePoint::zero(config.nu);

    ProblemConfig cfg = config;
    cfg.t_end = rep.horizon;

    const FourierState initial = cfg.build_initial();

    auto track = [&rep](const FourierState& a, const FourierState& b) {
        const int nu = a.nu();
        auto scan = [&](const FourierState& x, const FourierState& y) {
            for (const auto& [key, value] : x.data()) {
                auto it = y.data().find(key);
                const Complex diff = value - (it == y.data().end() ? Complex() : it->second);
                const double d = std::exp(rep.weight_rate * static_cast<double>(packed::l1(key, nu))) *
                                 std::abs(diff);
                if (d > rep.max_weighted_diff) {
                    rep.max_weighted_diff = d;
                    rep.worst_time = a.time();
                    rep.worst_mode = packed::decode(key, nu);
                }
            }
        };
        scan(a, b);
        scan(b, a);
    };

    if (mode == UniquenessMode::picard_vs_rk4) {
        rep.method_a = "picard_limit";
        rep.method_b = "rk4_interaction";
        const PicardRun run = picard_run(initial, cfg, picard_K);
        const Trajectory& limit = run.iterates.back();
        ProblemConfig rcfg = cfg;
        rcfg.scheme = ProblemConfig::Scheme::rk4_interaction;
        IntegrateOptions iopts;
        iopts.snapshot_stride = 1;
        iopts.with_monitors = false;
        const Trajectory rk = integrate(initial, rcfg, iopts);
        for (std::size_t m = 0; m < limit.states.size(); ++m) track(limit.states[m], rk.states[m]);
    } else {
        rep.method_a = "box_radius_" + std::to_string(cfg.box_radius);
        rep.method_b = "box_radius_" + std::to_string(2 * cfg.box_radius);
        ProblemConfig big = cfg;
        big.box_radius = 2 * cfg.box_radius;
        // same truncated data embedded in the doubled box
        FourierState big_initial(0.0, big.box());
        for (const auto& [key, value] : initial.data()) big_initial.data()[key] = value;
        const PicardRun a = picard_run(initial, cfg, picard_K);
        const PicardRun b = picard_run(big_initial, big, picard_K);
        for (std::size_t m = 0; m < a.iterates.back().states.size(); ++m)
            track(a.iterates.back().states[m], b.iterates.back().states[m]);
    }
    rep.pass = rep.max_weighted_diff <= rep.threshold;
    return rep;
}

} // namespace qpdnls

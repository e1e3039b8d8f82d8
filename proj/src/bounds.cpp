#include "qpdnls/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qpdnls/artifacts.hpp"

namespace qpdnls {

DecayProfile::DecayProfile(double b, double k) : B(b), kappa(k) {
    if (B <= 0) throw ConfigError("decay profile needs B > 0");
    if (kappa <= 0 || kappa > 1) throw ConfigError("decay profile needs kappa in (0,1]");
}

ExistenceTimes compute_constants(const DecayProfile& profile, int nu, double omega_norm,
                                 double t_for_c_dprime) {
    if (nu < 1) throw ConfigError("nu must be >= 1");
    if (omega_norm <= 0) throw ConfigError("omega norm must be > 0");
    const double B = profile.B;
    const double kappa = profile.kappa;
    const double e = std::exp(1.0);

    ExistenceTimes out;
    out.C = 1.5 * std::sqrt(B) * std::pow(12.0 / kappa, nu);
    out.t2 = 4.0 * std::pow(kappa, 2 * nu + 1) /
             (81.0 * std::pow(12.0, 2 * nu + 1) * B * omega_norm);
    out.t3 = 1.0 / (12.0 * e * out.C * out.C * std::pow(24.0 / kappa, 2 * nu + 1) * omega_norm);
    out.t1 = std::min(out.t2, out.t3);

    // uniqueness horizon with envelope constant C and rate rho = kappa/2
    const double rho = kappa / 2.0;
    out.t4 = std::min(out.t1, 1.0 / (36.0 * out.C * out.C * e * std::pow(12.0 / rho, 2 * nu + 1) * omega_norm));

    out.C_prime = (1.0 / 3.0) * out.C * out.C * std::pow(24.0 / kappa, nu) * std::sqrt(e);
    out.c_dprime_time = t_for_c_dprime > 0 ? t_for_c_dprime : out.t3 / 2.0;
    const double q = contraction_factor(profile, nu, omega_norm, out.c_dprime_time);
    out.C_dprime = q < 1.0 ? out.C_prime / (1.0 - q) : std::numeric_limits<double>::infinity();
    return out;
}

double contraction_factor(const DecayProfile& profile, int nu, double omega_norm, double t) {
    const double C = 1.5 * std::sqrt(profile.B) * std::pow(12.0 / profile.kappa, nu);
    return 12.0 * std::exp(1.0) * C * C * std::pow(24.0 / profile.kappa, 2 * nu + 1) * omega_norm * t;
}

DecayCertificate check_decay(const Trajectory& trajectory, double rate, double threshold) {
    if (trajectory.empty()) throw UsageError("check_decay: empty trajectory");
    if (rate <= 0) throw UsageError("check_decay: rate must be > 0");
    DecayCertificate cert;
    cert.rate = rate;
    cert.threshold_constant = threshold;
    cert.time_window = {trajectory.front().time(), trajectory.back().time()};
    const int nu = trajectory.front().nu();
    cert.worst_mode = LatticePoint::zero(nu);
    for (const FourierState& s : trajectory.states) {
        for (const auto& [key, value] : s.data()) {
            const double fitted =
                std::abs(value) * std::exp(rate * static_cast<double>(packed::l1(key, nu)));
            if (fitted > cert.fitted_constant) {
                cert.fitted_constant = fitted;
                cert.worst_mode = packed::decode(key, nu);
                cert.worst_time = s.time();
            }
        }
    }
    cert.pass = cert.fitted_constant <= threshold;
    return cert;
}

namespace {

// sum over all m in the l1 ball of |m|^a e^{-kappa |m|}, one slot
double slot_sum(const std::vector<LatticePoint>& ball, std::uint32_t a, double kappa) {
    double s = 0.0;
    for (const LatticePoint& m : ball) {
        const double l1 = static_cast<double>(m.l1());
        s += std::pow(l1, static_cast<double>(a)) * std::exp(-kappa * l1);
    }
    return s;
}

double constrained_sum(int nu, int r, const MultiIndex& alpha, double kappa, const LatticePoint& n,
                       std::int64_t radius) {
    // free slots 1..r-1, last slot solved from the alternating-sum constraint
    const std::vector<LatticePoint> ball = TruncationBox(nu, radius).enumerate();
    std::vector<std::size_t> idx(static_cast<std::size_t>(r - 1), 0);
    double total = 0.0;
    while (true) {
        LatticePoint partial = LatticePoint::zero(nu);
        double prod = 1.0;
        for (int j = 0; j < r - 1; ++j) {
            const LatticePoint& m = ball[idx[static_cast<std::size_t>(j)]];
            const double l1 = static_cast<double>(m.l1());
            prod *= std::pow(l1, static_cast<double>(alpha[static_cast<std::size_t>(j)])) * std::exp(-kappa * l1);
            for (int i = 0; i < nu; ++i)
                partial.coords[static_cast<std::size_t>(i)] +=
                    (j % 2 == 0 ? m.coords[static_cast<std::size_t>(i)] : -m.coords[static_cast<std::size_t>(i)]);
        }
        // cas(m_1..m_r) = n  =>  m_r = (-1)^{r-1} (n - partial)
        LatticePoint last = LatticePoint::zero(nu);
        for (int i = 0; i < nu; ++i) {
            const Coord d = n.coords[static_cast<std::size_t>(i)] - partial.coords[static_cast<std::size_t>(i)];
            last.coords[static_cast<std::size_t>(i)] = (r % 2 == 1) ? d : -d;
        }
        if (last.l1() <= radius) {
            const double l1 = static_cast<double>(last.l1());
            total += prod * std::pow(l1, static_cast<double>(alpha[static_cast<std::size_t>(r - 1)])) *
                     std::exp(-kappa * l1);
        }
        int j = r - 2;
        for (; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] < ball.size()) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j < 0) break;
    }
    return total;
}

} // namespace

LatticeSumCheck lattice_sum_check(int nu, int r, const MultiIndex& alpha, double kappa,
                                  const LatticePoint& n, std::int64_t radius) {
    if (nu < 1 || r < 1) throw UsageError("lattice sum needs nu >= 1, r >= 1");
    if (static_cast<int>(alpha.size()) != r) throw UsageError("alpha must have one entry per slot");
    if (kappa <= 0 || kappa > 1) throw UsageError("lattice sum needs kappa in (0,1]");
    if (n.dim() != nu) throw UsageError("target point has wrong dimension");
    const double work = std::pow(static_cast<double>(TruncationBox::cardinality(nu, radius)),
                                 static_cast<double>(r - 1));
    if (work > 5e8)
        throw BudgetError("constrained lattice sum too large to enumerate", work, 5e8);

    LatticeSumCheck chk;
    for (std::int64_t rad = std::max<std::int64_t>(1, radius / 4); rad < radius; rad += std::max<std::int64_t>(1, radius / 4))
        chk.by_radius.emplace_back(rad, constrained_sum(nu, r, alpha, kappa, n, rad));
    chk.truncated_sum = constrained_sum(nu, r, alpha, kappa, n, radius);
    chk.by_radius.emplace_back(radius, chk.truncated_sum);

    chk.bound = std::exp(-kappa / 2.0 * static_cast<double>(n.l1())) *
                std::pow(12.0 / kappa, static_cast<double>(weight(alpha)) + static_cast<double>(nu) * r) *
                static_cast<double>(factorial_product(alpha));
    chk.pass = chk.truncated_sum <= chk.bound;
    return chk;
}

UnconstrainedSumCheck lattice_sum_unconstrained(int nu, int r, const MultiIndex& alpha, double kappa,
                                                std::int64_t radius) {
    if (static_cast<int>(alpha.size()) != r) throw UsageError("alpha must have one entry per slot");
    const std::vector<LatticePoint> ball = TruncationBox(nu, radius).enumerate();
    UnconstrainedSumCheck chk;
    chk.truncated_sum = 1.0;
    for (int j = 0; j < r; ++j) chk.truncated_sum *= slot_sum(ball, alpha[static_cast<std::size_t>(j)], kappa);
    chk.bound = std::pow(6.0 / kappa, static_cast<double>(weight(alpha)) + static_cast<double>(nu) * r) *
                static_cast<double>(factorial_product(alpha));
    chk.pass = chk.truncated_sum <= chk.bound;
    return chk;
}

ScalarBoundReport scalar_bound_checks() {
    ScalarBoundReport rep;
    auto add = [&rep](const std::string& name, const std::string& instance, double lhs, double rhs) {
        const bool ok = lhs <= rhs;
        rep.items.push_back(ScalarBoundItem{name, instance, lhs, rhs, ok});
        if (!ok) rep.all_pass = false;
    };

    // y^m e^{-Ky} <= m! / K^m on a log grid in y, including the maximizer m/K
    for (int m = 1; m <= 8; ++m) {
        for (int ki = 1; ki <= 10; ++ki) {
            const double K = 0.1 * ki;
            double lhs = 0.0;
            for (int gi = 0; gi <= 60; ++gi) {
                const double y = std::pow(10.0, -2.0 + 5.0 * gi / 60.0);
                lhs = std::max(lhs, std::pow(y, m) * std::exp(-K * y));
            }
            const double ystar = m / K;
            lhs = std::max(lhs, std::pow(ystar, m) * std::exp(-K * ystar));
            add("poly_times_exp", "m=" + std::to_string(m) + ";K=" + fmt_double(K), lhs,
                static_cast<double>(factorial(static_cast<std::uint32_t>(m))) * std::pow(1.0 / K, m));
        }
    }

    // sum over Z of e^{-K|m|} = (1+e^{-K})/(1-e^{-K}) <= 3/K
    for (int ki = 1; ki <= 10; ++ki) {
        const double K = 0.1 * ki;
        const double q = std::exp(-K);
        add("exp_sum_over_z", "K=" + fmt_double(K), (1.0 + q) / (1.0 - q), 3.0 / K);
    }

    // n! >= (n/e)^n, recorded as (n/e)^n <= n!
    for (std::uint32_t n = 1; n <= 20; ++n)
        add("factorial_stirling", "n=" + std::to_string(n),
            std::pow(static_cast<double>(n) / std::exp(1.0), static_cast<double>(n)),
            static_cast<double>(factorial(n)));

    return rep;
}

} // namespace qpdnls

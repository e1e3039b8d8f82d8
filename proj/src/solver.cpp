#include <algorithm>
#include <cmath>

#include "qpdnls/errors.hpp"
#include "qpdnls/solver.hpp"

namespace qpdnls {

std::vector<Complex> cumulative_quadrature(std::span<const Complex> g, double h,
                                           ProblemConfig::Quadrature rule) {
    const std::size_t n = g.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    if (n < 2) return out;
    if (rule == ProblemConfig::Quadrature::trapezoid) {
        for (std::size_t m = 1; m < n; ++m) out[m] = out[m - 1] + 0.5 * h * (g[m - 1] + g[m]);
        return out;
    }
    // cumulative composite Simpson: full panels for even nodes, a quadratic
    // half-panel rule for odd nodes
    if (n == 2) {
        out[1] = 0.5 * h * (g[0] + g[1]);
        return out;
    }
    out[1] = h / 12.0 * (5.0 * g[0] + 8.0 * g[1] - g[2]);
    for (std::size_t m = 2; m < n; ++m) {
        if (m % 2 == 0)
            out[m] = out[m - 2] + h / 3.0 * (g[m - 2] + 4.0 * g[m - 1] + g[m]);
        else
            out[m] = out[m - 1] + h / 12.0 * (5.0 * g[m] + 8.0 * g[m - 1] - g[m - 2]);
    }
    return out;
}

namespace {

// Duhamel application: given integrand samples F(s_m) for a fixed source
// trajectory, produce delta(t_m, n) = sgn eps i <n> e^{-i<n>^2 t_m} *
// cumquad_m [ e^{i<n>^2 s} F(s, n) ] for every mesh node and populated mode.
std::vector<FourierState> apply_duhamel(const std::vector<SpectralMap>& integrand,
                                        const ProblemConfig& config, const TruncationBox& box) {
    const std::size_t mesh = integrand.size();
    const double h = config.dt();
    const double sgn = sign_factor(config.sign);

    // union support of the integrand across the mesh
    std::vector<std::int64_t> keys;
    {
        SpectralMap probe;
        for (const SpectralMap& f : integrand)
            for (const auto& [key, value] : f) probe.emplace(key, Complex());
        keys.reserve(probe.size());
        for (const auto& [key, value] : probe) keys.push_back(key);
    }

    std::vector<FourierState> out;
    out.reserve(mesh);
    for (std::size_t m = 0; m < mesh; ++m) out.emplace_back(h * static_cast<double>(m), box);

    std::vector<Complex> g(mesh);
    for (const std::int64_t key : keys) {
        const double freq = pairing(packed::decode(key, config.nu), config.omega);
        const double freq2 = freq * freq;
        for (std::size_t m = 0; m < mesh; ++m) {
            auto it = integrand[m].find(key);
            const Complex f = it == integrand[m].end() ? Complex(0.0, 0.0) : it->second;
            g[m] = std::polar(1.0, freq2 * h * static_cast<double>(m)) * f;
        }
        const std::vector<Complex> q = cumulative_quadrature(g, h, config.quadrature);
        const Complex prefactor(0.0, sgn * config.epsilon * freq);
        for (std::size_t m = 0; m < mesh; ++m) {
            const Complex v = prefactor * std::polar(1.0, -freq2 * h * static_cast<double>(m)) * q[m];
            if (v != Complex(0.0, 0.0)) out[m].data()[key] = v;
        }
    }
    return out;
}

FourierState add_states(const FourierState& a, const FourierState& b) {
    FourierState out = a;
    for (const auto& [key, value] : b.data()) out.data()[key] += value;
    return out;
}

} // namespace

PicardRun picard_run(const FourierState& initial, const ProblemConfig& config, int K) {
    if (initial.time() != 0.0) throw UsageError("iteration starts from time 0 data");
    if (K < 0) throw UsageError("iterate count must be >= 0");
    const TruncationBox box = config.box();
    const std::size_t mesh = static_cast<std::size_t>(config.steps) + 1;
    const double h = config.dt();
    const std::size_t factor_count = static_cast<std::size_t>(2 * config.p + 1);

    PicardRun run;
    run.iterates.reserve(static_cast<std::size_t>(K) + 1);

    Trajectory linear;
    linear.states.reserve(mesh);
    for (std::size_t m = 0; m < mesh; ++m)
        linear.states.push_back(linear_solution(initial, config.omega, h * static_cast<double>(m)));
    run.iterates.push_back(std::move(linear));

    for (int k = 1; k <= K; ++k) {
        const std::string who = "iterate " + std::to_string(k);
        const Trajectory& prev = run.iterates.back();
        std::vector<SpectralMap> integrand(mesh);

        if (k == 1) {
            for (std::size_t m = 0; m < mesh; ++m)
                integrand[m] = alternating_convolution(prev.states[m], config.p, box, true, who);
        } else {
            // product difference expanded one slot at a time: slot J takes the
            // previous difference, slots before J the older iterate, slots
            // after J the newer one
            const Trajectory& older = run.iterates[static_cast<std::size_t>(k) - 2];
            const Trajectory& delta = run.differences.back();
            for (std::size_t m = 0; m < mesh; ++m) {
                for (std::size_t J = 0; J < factor_count; ++J) {
                    std::vector<const FourierState*> factors(factor_count);
                    for (std::size_t j = 0; j < factor_count; ++j) {
                        if (j < J)
                            factors[j] = &older.states[m];
                        else if (j == J)
                            factors[j] = &delta.states[m];
                        else
                            factors[j] = &prev.states[m];
                    }
                    SpectralMap part = alternating_convolution_mixed(factors, box, true, who);
                    for (const auto& [key, value] : part) integrand[m][key] += value;
                }
            }
        }

        std::vector<FourierState> delta_states = apply_duhamel(integrand, config, box);
        Trajectory delta;
        delta.states = std::move(delta_states);

        Trajectory next;
        next.states.reserve(mesh);
        for (std::size_t m = 0; m < mesh; ++m)
            next.states.push_back(add_states(run.iterates.back().states[m], delta.states[m]));
        run.differences.push_back(std::move(delta));
        run.iterates.push_back(std::move(next));
    }
    return run;
}

std::vector<Trajectory> picard_iterate(const FourierState& initial, const ProblemConfig& config, int K) {
    return picard_run(initial, config, K).iterates;
}

namespace {

struct DenseGrid {
    int nu;
    std::int64_t radius;
    std::vector<LatticePoint> points;   // lex order
    std::vector<double> freq, freq2;    // <n>, <n>^2 per point
    std::vector<int> cell_to_idx;       // rectangle (2R+1)^nu -> point index or -1
    std::int64_t side;

    DenseGrid(const TruncationBox& box, const FrequencyVector& omega)
        : nu(box.nu()), radius(box.radius()), side(2 * box.radius() + 1) {
        points = box.enumerate();
        std::int64_t cells = 1;
        for (int i = 0; i < nu; ++i) cells *= side;
        cell_to_idx.assign(static_cast<std::size_t>(cells), -1);
        for (std::size_t i = 0; i < points.size(); ++i) {
            cell_to_idx[static_cast<std::size_t>(cell_of(points[i]))] = static_cast<int>(i);
            freq.push_back(pairing(points[i], omega));
            freq2.push_back(freq.back() * freq.back());
        }
    }

    std::int64_t cell_of(const LatticePoint& p) const {
        std::int64_t c = 0;
        for (int i = 0; i < nu; ++i) c = c * side + (p.coords[static_cast<std::size_t>(i)] + radius);
        return c;
    }

    // index of a+(-b)+c, or -1 when outside the ball
    int combine(const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) const {
        std::int64_t cell = 0;
        for (int i = 0; i < nu; ++i) {
            const Coord v = a.coords[static_cast<std::size_t>(i)] - b.coords[static_cast<std::size_t>(i)] +
                            c.coords[static_cast<std::size_t>(i)];
            if (v < -radius || v > radius) return -1;
            cell = cell * side + (v + radius);
        }
        return cell_to_idx[static_cast<std::size_t>(cell)];
    }
};

// cubic convolution on the dense ball: out[n] += c[a] conj(c[b]) c[d] over
// a - b + d = n, n inside the ball
void dense_cubic_convolution(const DenseGrid& grid, const std::vector<Complex>& c,
                             std::vector<Complex>& out) {
    const std::size_t n = grid.points.size();
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    for (std::size_t ia = 0; ia < n; ++ia) {
        for (std::size_t ib = 0; ib < n; ++ib) {
            const Complex w = c[ia] * std::conj(c[ib]);
            for (std::size_t id = 0; id < n; ++id) {
                const int target = grid.combine(grid.points[ia], grid.points[ib], grid.points[id]);
                if (target >= 0) out[static_cast<std::size_t>(target)] += w * c[id];
            }
        }
    }
}

} // namespace

Trajectory integrate(const FourierState& initial, const ProblemConfig& config,
                     const IntegrateOptions& opts) {
    if (config.scheme != ProblemConfig::Scheme::rk4_interaction)
        throw UsageError("integrate() implements the rk4_interaction scheme");
    const TruncationBox box = config.box();
    const DenseGrid grid(box, config.omega);
    const std::size_t n = grid.points.size();
    const double dt = config.dt();
    const double sgn = sign_factor(config.sign);

    Trajectory traj;

    // step-size sanity: nonlinear rotation per step should stay well under one
    {
        double maxfreq = 0.0;
        for (double f : grid.freq) maxfreq = std::max(maxfreq, std::abs(f));
        const double mass = initial.l1_mass();
        const double stiff = std::abs(config.epsilon) * maxfreq * mass * mass * dt;
        if (stiff >= 0.5)
            traj.warnings.push_back("step-size sanity check tripped: |eps| max<n> mass^2 dt = " +
                                    std::to_string(stiff) + " >= 0.5");
    }

    // interaction variables on the dense ball; a == c at t = 0
    std::vector<Complex> a(n, Complex(0.0, 0.0));
    for (const auto& [key, value] : initial.data()) {
        const LatticePoint p = packed::decode(key, config.nu);
        a[static_cast<std::size_t>(grid.cell_to_idx[static_cast<std::size_t>(grid.cell_of(p))])] = value;
    }

    std::vector<Complex> c(n), conv(n), k1(n), k2(n), k3(n), k4(n), tmp(n);

    auto derivative = [&](const std::vector<Complex>& av, double tau, std::vector<Complex>& out) {
        for (std::size_t i = 0; i < n; ++i) c[i] = av[i] * std::polar(1.0, -grid.freq2[i] * tau);
        if (config.p == 1) {
            dense_cubic_convolution(grid, c, conv);
        } else {
            FourierState s(tau, box);
            for (std::size_t i = 0; i < n; ++i)
                if (c[i] != Complex(0.0, 0.0)) s.set(grid.points[i], c[i]);
            const SpectralMap m = alternating_convolution(s, config.p, box);
            std::fill(conv.begin(), conv.end(), Complex(0.0, 0.0));
            for (const auto& [key, value] : m) {
                const LatticePoint p = packed::decode(key, config.nu);
                conv[static_cast<std::size_t>(grid.cell_to_idx[static_cast<std::size_t>(grid.cell_of(p))])] = value;
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            out[i] = std::polar(1.0, grid.freq2[i] * tau) * Complex(0.0, sgn * config.epsilon * grid.freq[i]) *
                     conv[i];
    };

    auto snapshot = [&](double t) {
        FourierState s(t, box);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex v = a[i] * std::polar(1.0, -grid.freq2[i] * t);
            if (v != Complex(0.0, 0.0)) s.set(grid.points[i], v);
        }
        if (opts.with_monitors) traj.monitors.push_back(conserved_quantities(s, config.omega));
        traj.states.push_back(std::move(s));
    };

    snapshot(0.0);
    for (int step = 0; step < config.steps; ++step) {
        const double t = dt * static_cast<double>(step);
        derivative(a, t, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * dt * k1[i];
        derivative(tmp, t + 0.5 * dt, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * dt * k2[i];
        derivative(tmp, t + 0.5 * dt, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = a[i] + dt * k3[i];
        derivative(tmp, t + dt, k4);
        for (std::size_t i = 0; i < n; ++i)
            a[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const bool last = (step + 1 == config.steps);
        if (last || (opts.snapshot_stride > 0 && (step + 1) % opts.snapshot_stride == 0))
            snapshot(dt * static_cast<double>(step + 1));
    }
    return traj;
}

} // namespace qpdnls

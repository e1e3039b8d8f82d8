#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qpdnls/lattice.hpp"

#include "json.hpp"

namespace qpdnls {

using Complex = std::complex<double>;

// Finitely supported Fourier data at a fixed time. Keys are packed lattice
// points, so map order equals lexicographic coordinate order and every
// iteration over the support is reproducible. An absent key is amplitude 0.
class FourierState {
public:
    FourierState(double time, TruncationBox box) : time_(time), box_(std::move(box)) {}

    double time() const { return time_; }
    void set_time(double t) { time_ = t; }
    const TruncationBox& box() const { return box_; }
    int nu() const { return box_.nu(); }

    Complex amplitude(const LatticePoint& n) const;
    void set(const LatticePoint& n, Complex value);

    const std::map<std::int64_t, Complex>& data() const { return amp_; }
    std::map<std::int64_t, Complex>& data() { return amp_; }

    std::size_t support_size() const { return amp_.size(); }
    std::vector<LatticePoint> support() const;

    double l1_mass() const;                       // sum of |c(n)|
    double weighted_sup(double rate) const;       // max e^{rate |n|_1} |c(n)|
    double tail_mass(std::int64_t margin) const;  // sum of |c(n)| over |n|_1 > radius - margin

    // Drops exact zeros so support growth stays tied to reachable modes.
    void prune_zeros();

    static FourierState from_modes(const TruncationBox& box,
                                   const std::vector<std::pair<LatticePoint, Complex>>& modes);

    // c(n) = sqrt(B) e^{-kappa |n|_1} r(n) e^{i theta(n)} with r uniform in
    // [0,1) and theta uniform in [0,2pi), both drawn from a per-mode counter
    // hash of the seed, so the draw is independent of enumeration order.
    static FourierState random(const TruncationBox& box, double B, double kappa, std::uint64_t seed);

private:
    double time_;
    TruncationBox box_;
    std::map<std::int64_t, Complex> amp_;
};

struct Monitors {
    double M = 0.0;
    double H = 0.0;
    double E = 0.0;
};

struct Trajectory {
    std::vector<FourierState> states;   // strictly increasing times
    std::vector<Monitors> monitors;     // parallel to states when present
    std::vector<std::string> warnings;

    const FourierState& front() const { return states.front(); }
    const FourierState& back() const { return states.back(); }
    bool empty() const { return states.empty(); }
};

struct RandomInitial {
    double B = 1.0;
    double kappa = 1.0;
    std::uint64_t seed = 0;
};

struct InitialData {
    // modes when explicit, otherwise random
    std::vector<std::pair<LatticePoint, Complex>> modes;
    std::optional<RandomInitial> random;
};

struct ProblemConfig {
    int nu = 1;
    FrequencyVector omega;
    int p = 1;
    enum class Sign { dnls_minus, gdnls_plus } sign = Sign::dnls_minus;
    double epsilon = 1.0;
    std::int64_t box_radius = 8;
    double t_end = 1.0;
    int steps = 100;
    enum class Quadrature { trapezoid, simpson } quadrature = Quadrature::trapezoid;
    enum class Scheme { picard, rk4_interaction } scheme = Scheme::rk4_interaction;
    InitialData initial;

    TruncationBox box() const { return TruncationBox(nu, box_radius); }
    double dt() const { return t_end / steps; }
    FourierState build_initial() const;

    void validate() const;
    static ProblemConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static ProblemConfig load(const std::string& path);
};

} // namespace qpdnls

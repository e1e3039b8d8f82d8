#include "qpdnls/state.hpp"

#include <cmath>
#include <fstream>

#include "qpdnls/errors.hpp"

namespace qpdnls {

Complex FourierState::amplitude(const LatticePoint& n) const {
    if (n.dim() != box_.nu()) throw ConfigError("amplitude lookup with wrong dimension");
    auto it = amp_.find(packed::encode_checked(n));
    return it == amp_.end() ? Complex(0.0, 0.0) : it->second;
}

void FourierState::set(const LatticePoint& n, Complex value) {
    if (!box_.contains(n))
        throw ConfigError("mode " + n.str() + " outside box of radius " + std::to_string(box_.radius()));
    amp_[packed::encode_checked(n)] = value;
}

std::vector<LatticePoint> FourierState::support() const {
    std::vector<LatticePoint> out;
    out.reserve(amp_.size());
    for (const auto& [key, value] : amp_) out.push_back(packed::decode(key, box_.nu()));
    return out;
}

double FourierState::l1_mass() const {
    double s = 0.0;
    for (const auto& [key, value] : amp_) s += std::abs(value);
    return s;
}

double FourierState::weighted_sup(double rate) const {
    double m = 0.0;
    for (const auto& [key, value] : amp_) {
        const double w = std::exp(rate * static_cast<double>(packed::l1(key, box_.nu())));
        m = std::max(m, w * std::abs(value));
    }
    return m;
}

double FourierState::tail_mass(std::int64_t margin) const {
    const std::int64_t cut = box_.radius() - margin;
    double s = 0.0;
    for (const auto& [key, value] : amp_)
        if (packed::l1(key, box_.nu()) > cut) s += std::abs(value);
    return s;
}

void FourierState::prune_zeros() {
    for (auto it = amp_.begin(); it != amp_.end();) {
        if (it->second == Complex(0.0, 0.0))
            it = amp_.erase(it);
        else
            ++it;
    }
}

FourierState FourierState::from_modes(const TruncationBox& box,
                                      const std::vector<std::pair<LatticePoint, Complex>>& modes) {
    FourierState s(0.0, box);
    for (const auto& [n, c] : modes) s.set(n, c);
    return s;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_double(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

} // namespace

FourierState FourierState::random(const TruncationBox& box, double B, double kappa, std::uint64_t seed) {
    if (B <= 0) throw ConfigError("random data needs B > 0");
    if (kappa <= 0 || kappa > 1) throw ConfigError("random data needs kappa in (0,1]");
    FourierState s(0.0, box);
    const double root_b = std::sqrt(B);
    for (const LatticePoint& n : box.enumerate()) {
        const std::uint64_t key = static_cast<std::uint64_t>(packed::encode_checked(n));
        const std::uint64_t u1 = splitmix64(seed ^ splitmix64(key));
        const std::uint64_t u2 = splitmix64(u1 + 0x6A09E667F3BCC909ull);
        const double theta = 2.0 * M_PI * unit_double(u1);
        const double r = unit_double(u2);
        const double mag = root_b * std::exp(-kappa * static_cast<double>(n.l1())) * r;
        s.set(n, Complex(mag * std::cos(theta), mag * std::sin(theta)));
    }
    return s;
}

FourierState ProblemConfig::build_initial() const {
    if (initial.random) {
        const RandomInitial& r = *initial.random;
        return FourierState::random(box(), r.B, r.kappa, r.seed);
    }
    if (initial.modes.empty()) throw ConfigError("initial data has neither modes nor random block");
    return FourierState::from_modes(box(), initial.modes);
}

void ProblemConfig::validate() const {
    if (nu < 1) throw ConfigError("nu must be >= 1");
    if (omega.dim() != nu) throw ConfigError("omega length must equal nu");
    if (p < 1) throw ConfigError("nonlinearity power p must be >= 1");
    if (box_radius < 0) throw ConfigError("box_radius must be >= 0");
    if (t_end <= 0) throw ConfigError("t_end must be > 0");
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (!std::isfinite(epsilon)) throw ConfigError("epsilon must be finite");
    if (!initial.random && initial.modes.empty())
        throw ConfigError("initial data has neither modes nor random block");
}

namespace {

template <class T>
T require_key(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("config missing key '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

} // namespace

ProblemConfig ProblemConfig::from_json(const nlohmann::json& j) {
    ProblemConfig cfg;
    cfg.nu = require_key<int>(j, "nu");
    cfg.omega = FrequencyVector(require_key<std::vector<double>>(j, "omega"));
    cfg.p = j.value("p", 1);
    const std::string sign = j.value("sign", std::string("dnls_minus"));
    if (sign == "dnls_minus")
        cfg.sign = Sign::dnls_minus;
    else if (sign == "gdnls_plus")
        cfg.sign = Sign::gdnls_plus;
    else
        throw ConfigError("sign must be dnls_minus or gdnls_plus, got " + sign);
    cfg.epsilon = j.value("epsilon", 1.0);
    cfg.box_radius = require_key<std::int64_t>(j, "box_radius");
    cfg.t_end = require_key<double>(j, "t_end");
    cfg.steps = require_key<int>(j, "steps");
    const std::string quad = j.value("quadrature", std::string("trapezoid"));
    if (quad == "trapezoid")
        cfg.quadrature = Quadrature::trapezoid;
    else if (quad == "simpson")
        cfg.quadrature = Quadrature::simpson;
    else
        throw ConfigError("quadrature must be trapezoid or simpson, got " + quad);
    const std::string scheme = j.value("scheme", std::string("rk4_interaction"));
    if (scheme == "picard")
        cfg.scheme = Scheme::picard;
    else if (scheme == "rk4_interaction")
        cfg.scheme = Scheme::rk4_interaction;
    else
        throw ConfigError("scheme must be picard or rk4_interaction, got " + scheme);

    const nlohmann::json& init = j.contains("initial") ? j.at("initial") : nlohmann::json();
    if (init.is_null()) throw ConfigError("config missing key 'initial'");
    if (init.contains("modes")) {
        for (const auto& m : init.at("modes")) {
            const std::vector<Coord> coords = require_key<std::vector<Coord>>(m, "n");
            cfg.initial.modes.emplace_back(LatticePoint(coords),
                                           Complex(m.value("re", 0.0), m.value("im", 0.0)));
        }
    } else if (init.contains("random")) {
        const auto& r = init.at("random");
        RandomInitial ri;
        ri.B = require_key<double>(r, "B");
        ri.kappa = require_key<double>(r, "kappa");
        ri.seed = r.value("seed", 0ull);
        cfg.initial.random = ri;
    } else {
        throw ConfigError("initial must contain either 'modes' or 'random'");
    }
    cfg.validate();
    return cfg;
}

nlohmann::json ProblemConfig::to_json() const {
    nlohmann::json j;
    j["nu"] = nu;
    j["omega"] = omega.omega;
    j["p"] = p;
    j["sign"] = sign == Sign::dnls_minus ? "dnls_minus" : "gdnls_plus";
    j["epsilon"] = epsilon;
    j["box_radius"] = box_radius;
    j["t_end"] = t_end;
    j["steps"] = steps;
    j["quadrature"] = quadrature == Quadrature::trapezoid ? "trapezoid" : "simpson";
    j["scheme"] = scheme == Scheme::picard ? "picard" : "rk4_interaction";
    nlohmann::json init;
    if (initial.random) {
        init["random"] = {{"B", initial.random->B}, {"kappa", initial.random->kappa}, {"seed", initial.random->seed}};
    } else {
        nlohmann::json modes = nlohmann::json::array();
        for (const auto& [n, c] : initial.modes)
            modes.push_back({{"n", n.coords}, {"re", c.real()}, {"im", c.imag()}});
        init["modes"] = modes;
    }
    j["initial"] = init;
    return j;
}

ProblemConfig ProblemConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

} // namespace qpdnls

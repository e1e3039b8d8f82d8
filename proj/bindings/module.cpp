#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpdnls/artifacts.hpp"
#include "qpdnls/bounds.hpp"
#include "qpdnls/experiments.hpp"
#include "qpdnls/multiindex.hpp"
#include "qpdnls/solver.hpp"
#include "qpdnls/tree_term.hpp"

namespace py = pybind11;
using namespace qpdnls;

namespace {

LatticePoint point_from(const std::vector<Coord>& coords) {
    return LatticePoint(coords);
}

ProblemConfig config_from_json_str(const std::string& text) {
    return ProblemConfig::from_json(nlohmann::json::parse(text));
}

py::dict state_to_dict(const FourierState& s) {
    py::list modes, values;
    for (const auto& [key, value] : s.data()) {
        modes.append(packed::decode(key, s.nu()).coords);
        values.append(value);
    }
    py::dict d;
    d["time"] = s.time();
    d["modes"] = modes;
    d["values"] = values;
    return d;
}

} // namespace

PYBIND11_MODULE(_qpdnls, m) {
    m.doc() = "spectral toolkit for the derivative NLS with quasi-periodic initial data";

    // lattice
    m.def("pairing", [](const std::vector<Coord>& n, const std::vector<double>& omega) {
        return pairing(point_from(n), FrequencyVector(omega));
    });
    m.def("l1_norm", [](const std::vector<Coord>& n) { return point_from(n).l1(); });
    m.def("cas", [](const std::vector<std::vector<Coord>>& pts) {
        std::vector<LatticePoint> v;
        for (const auto& p : pts) v.push_back(point_from(p));
        return cas(v).coords;
    });
    m.def("box_points", [](int nu, std::int64_t radius) {
        py::list out;
        for (const LatticePoint& p : TruncationBox(nu, radius).enumerate()) out.append(p.coords);
        return out;
    });
    m.def("box_cardinality", &TruncationBox::cardinality);

    // branch calculus
    m.def("branch_sigma", [](const std::string& tree) {
        const Rational s = sigma(*BranchTree::parse(tree));
        return std::make_pair(s.num, s.den);
    });
    m.def("branch_ell", [](const std::string& tree) { return ell(*BranchTree::parse(tree)); });
    m.def("branch_dd", [](const std::string& tree) { return dd(*BranchTree::parse(tree)); });
    m.def("branch_count", &branch_count);
    m.def(
        "enumerate_branches",
        [](int k, std::uint64_t budget) {
            py::list out;
            for (const BranchPtr& g : enumerate_branches(k, budget)) out.append(g->str());
            return out;
        },
        py::arg("k"), py::arg("budget") = 1000000);
    m.def(
        "p_value",
        [](const std::string& tree, std::uint64_t budget) {
            const PValue v = p_value(*BranchTree::parse(tree), budget);
            py::dict d;
            d["by_enumeration"] = v.by_enumeration;
            d["by_recursion"] = v.by_recursion;
            d["members"] = v.member_count;
            return d;
        },
        py::arg("tree"), py::arg("budget") = 1000000);
    m.def("m_value", [](int k, double T) {
        const MValue v = m_value(k, T);
        py::dict d;
        d["full_sum"] = v.full_sum;
        d["inductive_split"] = v.inductive_split;
        return d;
    });
    m.def("factorial_sum_bound", [](int N, int L) {
        const FactorialSumCheck c = factorial_sum_bound_check(N, L);
        py::dict d;
        d["sum"] = c.exact_sum;
        d["bound"] = c.bound;
        d["strict"] = c.strict;
        return d;
    });

    // constants and bound checks
    m.def(
        "compute_constants",
        [](double B, double kappa, int nu, double omega_norm) {
            const ExistenceTimes c = compute_constants(DecayProfile(B, kappa), nu, omega_norm);
            py::dict d;
            d["C"] = c.C;
            d["t1"] = c.t1;
            d["t2"] = c.t2;
            d["t3"] = c.t3;
            d["t4"] = c.t4;
            d["C_prime"] = c.C_prime;
            d["C_dprime"] = c.C_dprime;
            return d;
        },
        py::arg("B"), py::arg("kappa"), py::arg("nu"), py::arg("omega_norm"));
    m.def("lattice_sum_check", [](int nu, int r, const std::vector<std::uint32_t>& alpha, double kappa,
                                  const std::vector<Coord>& n, std::int64_t radius) {
        const LatticeSumCheck c = lattice_sum_check(nu, r, alpha, kappa, point_from(n), radius);
        py::dict d;
        d["sum"] = c.truncated_sum;
        d["bound"] = c.bound;
        d["pass"] = c.pass;
        return d;
    });

    // solver surfaces, config given as a json string matching the CLI schema
    m.def("solve", [](const std::string& config_json) {
        const ProblemConfig cfg = config_from_json_str(config_json);
        const Trajectory traj = integrate(cfg.build_initial(), cfg,
                                          IntegrateOptions{std::max(1, cfg.steps / 64), true});
        py::dict d;
        py::list times, mm, hh, ee;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            times.append(traj.states[i].time());
            if (i < traj.monitors.size()) {
                mm.append(traj.monitors[i].M);
                hh.append(traj.monitors[i].H);
                ee.append(traj.monitors[i].E);
            }
        }
        d["times"] = times;
        d["M"] = mm;
        d["H"] = hh;
        d["E"] = ee;
        d["final"] = state_to_dict(traj.states.back());
        d["warnings"] = traj.warnings;
        return d;
    });
    m.def(
        "picard_weighted_diffs",
        [](const std::string& config_json, int K, double rate) {
            const ProblemConfig cfg = config_from_json_str(config_json);
            const PicardRun run = picard_run(cfg.build_initial(), cfg, K);
            py::list out;
            for (const Trajectory& d : run.differences) out.append(d.states.back().weighted_sup(rate));
            return out;
        },
        py::arg("config_json"), py::arg("K"), py::arg("rate"));
    m.def("linear_final", [](const std::string& config_json) {
        const ProblemConfig cfg = config_from_json_str(config_json);
        return state_to_dict(linear_solution(cfg.build_initial(), cfg.omega, cfg.t_end));
    });
    m.def("conserved", [](const std::string& config_json) {
        const ProblemConfig cfg = config_from_json_str(config_json);
        const Monitors mon = conserved_quantities(cfg.build_initial(), cfg.omega);
        return std::make_tuple(mon.M, mon.H, mon.E);
    });
    m.def(
        "tree_sum",
        [](const std::string& config_json, int k, const std::vector<Coord>& n, double t, int grid) {
            const ProblemConfig cfg = config_from_json_str(config_json);
            return tree_sum(k, point_from(n), t, cfg.build_initial(), cfg.omega, grid);
        },
        py::arg("config_json"), py::arg("k"), py::arg("n"), py::arg("t"), py::arg("grid") = 256);
    m.def("check_decay_on_solution", [](const std::string& config_json, double rate, double threshold) {
        const ProblemConfig cfg = config_from_json_str(config_json);
        const Trajectory traj = integrate(cfg.build_initial(), cfg, IntegrateOptions{1, false});
        const DecayCertificate cert = check_decay(traj, rate, threshold);
        py::dict d;
        d["fitted_constant"] = cert.fitted_constant;
        d["threshold_constant"] = cert.threshold_constant;
        d["pass"] = cert.pass;
        d["worst_mode"] = cert.worst_mode.coords;
        return d;
    });

    m.attr("__version__") = "0.1.0";
}

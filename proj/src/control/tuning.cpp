#include "fracid/control/tuning.hpp"

#include "fracid/errors.hpp"
#include "fracid/io/csv.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace fracid::control {

// ---------------------------------------------------------------- simplex

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadConfig& cfg) {
    const std::size_t n = x0.size();
    if (n == 0) throw ArgumentError("nelder_mead: empty starting point");
    NelderMeadResult r;
    auto eval = [&](const std::vector<double>& x) {
        ++r.evaluations;
        const double v = f(x);
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += x0[i] != 0.0 ? cfg.step_fraction * x0[i] : cfg.zero_step;
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);
    if (!std::isfinite(fv[0])) throw ArgumentError("nelder_mead: objective is not finite at the starting point");

    std::vector<std::size_t> idx(n + 1);
    auto order = [&] {
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> p2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            p2[i] = std::move(pts[idx[i]]);
            f2[i] = fv[idx[i]];
        }
        pts = std::move(p2);
        fv = std::move(f2);
    };
    auto converged = [&] {
        double diam = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[0][k]));
        return diam < cfg.x_tolerance && fv[n] - fv[0] < cfg.f_tolerance;
    };
    auto along = [&](const std::vector<double>& c, double t) {
        std::vector<double> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = c[k] + t * (pts[n][k] - c[k]);
        return x;
    };

    order();
    while (r.iterations < cfg.max_iterations) {
        if (converged()) {
            r.converged = true;
            break;
        }
        ++r.iterations;
        std::vector<double> c(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) c[k] += pts[i][k] / static_cast<double>(n);

        auto xr = along(c, -cfg.reflection);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            auto xe = along(c, -cfg.reflection * cfg.expansion);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[n] = std::move(xe);
                fv[n] = fe;
            } else {
                pts[n] = std::move(xr);
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            pts[n] = std::move(xr);
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            auto xc = along(c, outside ? -cfg.reflection * cfg.contraction : cfg.contraction);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[n])) {
                pts[n] = std::move(xc);
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[0][k] + cfg.shrink * (pts[i][k] - pts[0][k]);
                    fv[i] = eval(pts[i]);
                }
            }
        }
        order();
        r.trace.push_back(fv[0]);
    }
    if (!r.converged && converged()) r.converged = true;
    r.x = pts[0];
    r.f = fv[0];
    return r;
}

// ---------------------------------------------------------------- objective

void TuningProblem::validate() const {
    if (plants.empty()) throw ArgumentError("tuning needs at least one plant");
    if (N < 0) throw ArgumentError("tuning: N must be non-negative");
    if (restarts < 1) throw ArgumentError("tuning: restarts must be at least 1");
    if (!(initial_gain > 0.0) || !std::isfinite(initial_gain))
        throw ArgumentError("tuning: initial gain must be positive");
    const double t = target();
    if (!(t > 90.0 * q.value() && t < 180.0)) throw ArgumentError("tuning: target angle must lie in (90q, 180) degrees");
}

double objective_from_poles(const std::vector<WPlanePoleSet>& sets, double target) {
    double s = 0.0;
    for (const auto& set : sets) {
        const double cone = 90.0 * set.q.value();
        for (const auto& p : set.poles) {
            const double a = std::abs(p.arg_deg);
            double d = std::abs(a - target);
            if (a < cone) d += kConePenalty * (cone - a);
            s += d * d;
        }
    }
    return std::sqrt(s);
}

double objective_Jbar(std::span<const double> gains, const TuningProblem& problem) {
    ContinuousOrderPid c{problem.q, std::vector<double>(gains.begin(), gains.end())};
    std::vector<WPlanePoleSet> sets;
    try {
        for (const auto& p : problem.plants) sets.push_back(closed_loop_poles(p, c));
    } catch (const Error&) {
        return kObjectiveSentinel;
    }
    return objective_from_poles(sets, problem.target());
}

// ---------------------------------------------------------------- tune / verify

TuningReport verify(const ContinuousOrderPid& c, const std::vector<CommensurateFoTf>& plants, double target_angle_deg) {
    if (plants.empty()) throw ArgumentError("verify needs at least one plant");
    c.validate();
    TuningReport r;
    r.controller = c;
    r.target_angle_deg = target_angle_deg > 0.0 ? target_angle_deg : 180.0 * c.q.value();
    r.all_hyperdamped = true;
    r.all_stable = true;
    for (const auto& p : plants) {
        auto set = closed_loop_poles(p, c);
        r.min_angle_deg.push_back(set.min_abs_arg_deg());
        r.all_stable = r.all_stable && set.all_stable();
        // hyper-damping is judged against the sheet boundary of the base actually used
        r.all_hyperdamped = r.all_hyperdamped && set.all_hyperdamped(kHyperdampedTolDeg);
        r.poles.push_back(std::move(set));
    }
    r.objective = objective_from_poles(r.poles, r.target_angle_deg);
    return r;
}

TuningReport tune(const TuningProblem& problem, kernels::Backend backend) {
    problem.validate();
    const auto dim = static_cast<std::size_t>(problem.N) + 1;

    // All random draws happen here, serially, so the restarts can run in any order.
    std::mt19937_64 rng(problem.seed);
    std::uniform_real_distribution<double> pert(-0.5, 0.5);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(problem.restarts), std::vector<double>(dim));
    for (auto& s : starts)
        for (auto& x : s) x = problem.initial_gain * (1.0 + pert(rng));

    std::vector<NelderMeadResult> runs(starts.size());
    std::vector<std::optional<TuningReport>> checks(starts.size());
    kernels::for_each_index(backend, starts.size(), [&](std::size_t i) {
        auto f = [&](std::span<const double> g) { return objective_Jbar(g, problem); };
        runs[i] = nelder_mead(f, starts[i], problem.simplex);
        if (runs[i].f < kObjectiveSentinel) {
            try {
                checks[i] = verify(ContinuousOrderPid{problem.q, runs[i].x}, problem.plants, problem.target());
            } catch (const Error&) {
            }
        }
    });

    std::optional<std::size_t> best;
    bool best_hyper = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (!checks[i]) continue;
        const bool hyper = checks[i]->all_hyperdamped;
        if (!best || (hyper && !best_hyper) || (hyper == best_hyper && runs[i].f < runs[*best].f)) {
            best = i;
            best_hyper = hyper;
        }
    }
    if (!best) throw NumericalError("tune: every restart failed to find closed-loop roots");

    TuningReport r = std::move(*checks[*best]);
    r.objective = runs[*best].f;
    r.trace = runs[*best].trace;
    r.chosen_restart = *best;
    for (std::size_t i = 0; i < runs.size(); ++i)
        r.restarts.push_back(
            {runs[i].f, checks[i] && checks[i]->all_hyperdamped, runs[i].converged, runs[i].iterations});
    return r;
}

// ---------------------------------------------------------------- reports

namespace {

std::string name_of(const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : "plant" + std::to_string(i + 1);
}

} // namespace

std::string report_text(const TuningReport& r, const std::vector<std::string>& names) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "controller q = " << r.controller.q.to_string() << ", N = " << r.controller.N() << "\n";
    os << "gains (K_0 .. K_N):";
    for (double g : r.controller.gains) os << " " << g;
    os << "\n";
    os << "objective Jbar = " << r.objective << " (target " << r.target_angle_deg << " deg)\n";
    os << "all stable = " << (r.all_stable ? "true" : "false") << "\n";
    os << "all hyper-damped = " << (r.all_hyperdamped ? "true" : "false") << "\n";
    if (!r.restarts.empty()) {
        os << "restarts:\n";
        for (std::size_t i = 0; i < r.restarts.size(); ++i) {
            const auto& s = r.restarts[i];
            os << "  #" << i << " Jbar=" << s.objective << " hyper=" << (s.hyperdamped ? "yes" : "no")
               << " converged=" << (s.converged ? "yes" : "no") << " iterations=" << s.iterations
               << (i == r.chosen_restart ? "  <- chosen" : "") << "\n";
        }
    }
    for (std::size_t i = 0; i < r.poles.size(); ++i) {
        const auto& set = r.poles[i];
        os << name_of(names, i) << ": " << set.poles.size() << " closed-loop roots (base q = " << set.q.to_string()
           << "), min |arg| = " << r.min_angle_deg[i] << " deg\n";
        for (const auto& p : set.poles)
            os << "    arg " << std::setw(14) << p.arg_deg << "  |w| " << std::setw(14) << p.modulus << "  "
               << to_string(p.cls) << (p.boundary ? " (boundary)" : "") << "\n";
    }
    return os.str();
}

std::string min_angle_csv(const TuningReport& r, const std::vector<std::string>& names) {
    std::string out = "plant,min_angle_deg,stable,hyperdamped\n";
    for (std::size_t i = 0; i < r.poles.size(); ++i) {
        out += name_of(names, i) + "," + csv::format(r.min_angle_deg[i]) + "," +
               (r.poles[i].all_stable() ? "1" : "0") + "," +
               (r.poles[i].all_hyperdamped(kHyperdampedTolDeg) ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace fracid::control

#include "fracid/sysid/time_domain.hpp"

#include "fracid/fotf/model_io.hpp"
#include "fracid/fotf/polynomial.hpp"
#include "fracid/fotf/roots.hpp"
#include "fracid/io/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace fracid::sysid {

// ---------------------------------------------------------------- data

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> u, std::vector<double> y)
    : t_(std::move(t)), u_(std::move(u)), y_(std::move(y)), Ts_(0.0) {
    if (t_.size() != u_.size() || t_.size() != y_.size()) throw ArgumentError("time series: length mismatch");
    if (t_.size() < 2) throw ArgumentError("time series: need at least two samples");
    Ts_ = (t_.back() - t_.front()) / static_cast<double>(t_.size() - 1);
    if (!(Ts_ > 0.0)) throw ArgumentError("time series: time stamps must increase");
    for (std::size_t k = 0; k + 1 < t_.size(); ++k) {
        if (std::abs(t_[k + 1] - t_[k] - Ts_) > 1e-9) {
            std::ostringstream os;
            os << "time series: non-uniform spacing at sample " << k + 1;
            throw ArgumentError(os.str());
        }
    }
}

TimeSeries TimeSeries::from_signals(std::vector<double> u, std::vector<double> y, double Ts) {
    if (!(Ts > 0.0)) throw ArgumentError("time series: Ts must be positive");
    std::vector<double> t(u.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k) * Ts;
    return TimeSeries(std::move(t), std::move(u), std::move(y));
}

TimeSeries parse_time_series_csv(const std::string& text) {
    const auto table = csv::parse(text, {"t", "u", "y"});
    std::vector<double> t, u, y;
    for (const auto& r : table.rows) {
        t.push_back(r[0]);
        u.push_back(r[1]);
        y.push_back(r[2]);
    }
    return TimeSeries(std::move(t), std::move(u), std::move(y));
}

TimeSeries read_time_series_csv(const std::filesystem::path& path) {
    return parse_time_series_csv(read_file(path));
}

std::string to_csv(const TimeSeries& data) {
    return csv::write({"t", "u", "y"}, {data.t(), data.u(), data.y()});
}

// ---------------------------------------------------------------- specs

std::string_view to_string(Structure s) {
    switch (s) {
    case Structure::ARX: return "arx";
    case Structure::OE: return "oe";
    case Structure::ARMAX: return "armax";
    case Structure::BJ: return "bj";
    }
    return "?";
}

Structure parse_structure(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "arx") return Structure::ARX;
    if (lower == "oe") return Structure::OE;
    if (lower == "armax") return Structure::ARMAX;
    if (lower == "bj") return Structure::BJ;
    throw ArgumentError("unknown estimator structure '" + std::string(s) + "'");
}

void EstimatorSpec::validate() const {
    if (na < 0 || nb < 0 || nc < 0 || nd < 0 || nf < 0 || nk < 0)
        throw ArgumentError("estimator orders must be non-negative");
    auto require_zero = [&](int v, const char* name) {
        if (v != 0)
            throw ArgumentError(std::string(sysid::to_string(structure)) + " structure does not use " + name);
    };
    switch (structure) {
    case Structure::ARX:
        require_zero(nc, "nc");
        require_zero(nd, "nd");
        require_zero(nf, "nf");
        break;
    case Structure::ARMAX:
        require_zero(nd, "nd");
        require_zero(nf, "nf");
        break;
    case Structure::OE:
        require_zero(na, "na");
        require_zero(nc, "nc");
        require_zero(nd, "nd");
        break;
    case Structure::BJ: require_zero(na, "na"); break;
    }
    if (parameter_count() == 0) throw ArgumentError("estimator has no parameters");
}

std::string EstimatorSpec::to_string() const {
    std::ostringstream os;
    os << sysid::to_string(structure) << ":";
    bool first = true;
    auto put = [&](const char* n, int v, bool used) {
        if (!used) return;
        os << (first ? "" : ",") << n << "=" << v;
        first = false;
    };
    const bool a = structure == Structure::ARX || structure == Structure::ARMAX;
    put("na", na, a);
    put("nb", nb, true);
    put("nc", nc, structure == Structure::ARMAX || structure == Structure::BJ);
    put("nd", nd, structure == Structure::BJ);
    put("nf", nf, structure == Structure::OE || structure == Structure::BJ);
    put("nk", nk, true);
    return os.str();
}

EstimatorSpec EstimatorSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    EstimatorSpec s;
    s.structure = parse_structure(text.substr(0, colon));
    if (colon != std::string_view::npos) {
        std::string_view rest = text.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto item = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos) throw ArgumentError("bad estimator order '" + std::string(item) + "'");
            const auto key = item.substr(0, eq);
            const auto val = item.substr(eq + 1);
            int v = 0;
            auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
            if (ec != std::errc{} || p != val.data() + val.size())
                throw ArgumentError("bad estimator order '" + std::string(item) + "'");
            if (key == "na") s.na = v;
            else if (key == "nb") s.nb = v;
            else if (key == "nc") s.nc = v;
            else if (key == "nd") s.nd = v;
            else if (key == "nf") s.nf = v;
            else if (key == "nk") s.nk = v;
            else throw ArgumentError("unknown estimator order '" + std::string(key) + "'");
        }
    }
    s.validate();
    return s;
}

// ---------------------------------------------------------------- criteria

double aic(double V, std::size_t d, std::size_t N) {
    if (!(V > 0.0)) throw ArgumentError("aic: loss must be positive");
    if (N <= d) throw ArgumentError("aic: need more samples than parameters");
    return std::log(V) + 2.0 * static_cast<double>(d) / static_cast<double>(N);
}

double fpe(double V, std::size_t d, std::size_t N) {
    if (!(V > 0.0)) throw ArgumentError("fpe: loss must be positive");
    if (N <= d) throw ArgumentError("fpe: need more samples than parameters");
    const double r = static_cast<double>(d) / static_cast<double>(N);
    return V * (1.0 + r) / (1.0 - r);
}

// ---------------------------------------------------------------- helpers

namespace {

struct Polys {
    std::vector<double> A, B, C, D, F; // coefficients of q^0, q^-1, ...
};

Polys unpack(const EstimatorSpec& s, const Eigen::VectorXd& th) {
    Polys p;
    Eigen::Index i = 0;
    p.A.assign(1, 1.0);
    for (int k = 0; k < s.na; ++k) p.A.push_back(th[i++]);
    p.B.assign(static_cast<std::size_t>(s.nk), 0.0);
    for (int k = 0; k < s.nb; ++k) p.B.push_back(th[i++]);
    if (p.B.empty()) p.B.push_back(0.0);
    p.C.assign(1, 1.0);
    for (int k = 0; k < s.nc; ++k) p.C.push_back(th[i++]);
    p.D.assign(1, 1.0);
    for (int k = 0; k < s.nd; ++k) p.D.push_back(th[i++]);
    p.F.assign(1, 1.0);
    for (int k = 0; k < s.nf; ++k) p.F.push_back(th[i++]);
    return p;
}

// y = num/den x with zero initial conditions; den[0] == 1.
std::vector<double> filter(const std::vector<double>& num, const std::vector<double>& den, const std::vector<double>& x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < num.size() && i <= t; ++i) acc += num[i] * x[t - i];
        for (std::size_t i = 1; i < den.size() && i <= t; ++i) acc -= den[i] * y[t - i];
        y[t] = acc / den[0];
    }
    return y;
}

DiscreteTf backward_shift_tf(std::vector<double> num, std::vector<double> den, double Ts) {
    const std::size_t L = std::max(num.size(), den.size());
    num.resize(L, 0.0);
    den.resize(L, 0.0);
    return DiscreteTf(std::move(num), std::move(den), Ts);
}

std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> prediction_errors(const TimeSeries& data, const EstimatorSpec& s, const Eigen::VectorXd& th) {
    const auto p = unpack(s, th);
    const auto ay = filter(p.A, {1.0}, data.y());
    const auto bu = filter(p.B, p.F, data.u());
    std::vector<double> w(ay.size());
    for (std::size_t t = 0; t < w.size(); ++t) w[t] = ay[t] - bu[t];
    return filter(p.D, p.C, w);
}

double mean_square(const std::vector<double>& e) {
    double s = 0.0;
    for (double v : e) s += v * v;
    return e.empty() ? 0.0 : s / static_cast<double>(e.size());
}

// Reflects roots of the monic polynomial 1 + p1 q^-1 + ... outside the unit
// circle to 1/conj(r). Returns false if nothing changed.
bool reflect_unstable(std::vector<double>& p) {
    if (p.size() <= 1) return false;
    // poles are roots of z^n + p1 z^(n-1) + ... + pn, ascending = reversed p
    std::vector<double> asc(p.rbegin(), p.rend());
    auto roots = polynomial_roots(asc);
    bool changed = false;
    for (auto& r : roots) {
        if (std::abs(r) > 1.0) {
            r = 1.0 / std::conj(r);
            changed = true;
        }
    }
    if (!changed) return false;
    const auto rebuilt = poly::from_roots(roots);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rebuilt[p.size() - 1 - i];
    return true;
}

Eigen::VectorXd project(const EstimatorSpec& s, Eigen::VectorXd th) {
    const Eigen::Index off_c = s.na + s.nb;
    const Eigen::Index off_d = off_c + s.nc;
    const Eigen::Index off_f = off_d + s.nd;
    auto fix = [&](Eigen::Index off, int n) {
        if (n == 0) return;
        std::vector<double> p(static_cast<std::size_t>(n) + 1, 1.0);
        for (int k = 0; k < n; ++k) p[static_cast<std::size_t>(k) + 1] = th[off + k];
        if (reflect_unstable(p))
            for (int k = 0; k < n; ++k) th[off + k] = p[static_cast<std::size_t>(k) + 1];
    };
    fix(off_c, s.nc);
    fix(off_d, s.nd);
    fix(off_f, s.nf);
    return th;
}

FitResult assemble(const TimeSeries& data, const EstimatorSpec& s, Eigen::VectorXd th, std::vector<double> residuals) {
    const auto p = unpack(s, th);
    const double Ts = data.Ts();
    std::vector<double> gden = mul(p.A, p.F);
    std::vector<double> hnum = p.C, hden = mul(p.A, p.D);
    if (s.structure == Structure::OE) {
        hnum = {1.0};
        hden = {1.0};
    }
    const double V = mean_square(residuals);
    const auto N = residuals.size();
    const auto d = static_cast<std::size_t>(th.size());
    const double Vpos = std::max(V, std::numeric_limits<double>::min());
    FitResult r{s,
                backward_shift_tf(p.B, gden, Ts),
                backward_shift_tf(hnum, hden, Ts),
                std::move(th),
                V,
                N > d ? aic(Vpos, d, N) : std::numeric_limits<double>::infinity(),
                N > d ? fpe(Vpos, d, N) : std::numeric_limits<double>::infinity(),
                N,
                std::move(residuals),
                {},
                true};
    return r;
}

std::string column_name(const EstimatorSpec& s, std::size_t c) {
    const auto na = static_cast<std::size_t>(s.na);
    if (c < na) return "a" + std::to_string(c + 1);
    return "b" + std::to_string(c - na);
}

} // namespace

// ---------------------------------------------------------------- ARX

Regressor build_regressor(const TimeSeries& data, int na, int nb, int nk) {
    if (na < 0 || nb < 0 || nk < 0) throw ArgumentError("regressor orders must be non-negative");
    const std::size_t N = data.size();
    const std::size_t t0 = static_cast<std::size_t>(std::max(na, nb > 0 ? nk + nb - 1 : 0));
    if (N <= t0) throw ArgumentError("regressor: not enough samples for the orders");
    const auto rows = static_cast<Eigen::Index>(N - t0);
    Regressor r;
    r.phi.resize(rows, na + nb);
    r.target.resize(rows);
    r.first_index = t0;
    for (Eigen::Index i = 0; i < rows; ++i) {
        const std::size_t t = t0 + static_cast<std::size_t>(i);
        for (int k = 0; k < na; ++k) r.phi(i, k) = -data.y()[t - 1 - static_cast<std::size_t>(k)];
        for (int k = 0; k < nb; ++k) r.phi(i, na + k) = data.u()[t - static_cast<std::size_t>(nk + k)];
        r.target[i] = data.y()[t];
    }
    return r;
}

FitResult arx_fit(const TimeSeries& data, const EstimatorSpec& spec) {
    spec.validate();
    if (spec.structure != Structure::ARX) throw ArgumentError("arx_fit needs an ARX spec");
    const auto reg = build_regressor(data, spec.na, spec.nb, spec.nk);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(reg.phi);
    const auto rank = static_cast<std::size_t>(qr.rank());
    const auto cols = static_cast<std::size_t>(reg.phi.cols());
    if (rank < cols) {
        std::vector<std::size_t> bad;
        std::string names;
        for (std::size_t k = rank; k < cols; ++k) {
            const auto c = static_cast<std::size_t>(qr.colsPermutation().indices()[static_cast<Eigen::Index>(k)]);
            bad.push_back(c);
            names += (names.empty() ? "" : ", ") + column_name(spec, c);
        }
        std::sort(bad.begin(), bad.end());
        throw IdentifiabilityError("ARX regressor is rank deficient (rank " + std::to_string(rank) + " of " +
                                       std::to_string(cols) + "); dependent columns: " + names,
                                   std::move(bad));
    }
    Eigen::VectorXd th = qr.solve(reg.target);
    Eigen::VectorXd e = reg.target - reg.phi * th;
    return assemble(data, spec, std::move(th), std::vector<double>(e.data(), e.data() + e.size()));
}

// ---------------------------------------------------------------- PEM

FitResult pem_fit(const TimeSeries& data, const EstimatorSpec& spec, const PemOptions& opts) {
    spec.validate();
    if (spec.structure == Structure::ARX) throw ArgumentError("pem_fit handles ARMAX, BJ and OE");

    // Warm start from an ARX fit of compatible order.
    const int poles = spec.structure == Structure::ARMAX ? spec.na : spec.nf;
    const auto warm = arx_fit(data, EstimatorSpec::arx(poles, spec.nb, spec.nk));
    Eigen::VectorXd th = Eigen::VectorXd::Zero(spec.parameter_count());
    {
        Eigen::Index i = 0;
        const auto a = warm.theta.head(poles);
        const auto b = warm.theta.segment(poles, spec.nb);
        if (spec.structure == Structure::ARMAX) {
            th.segment(i, spec.na) = a;
            i += spec.na;
            th.segment(i, spec.nb) = b;
        } else {
            th.segment(i, spec.nb) = b;
            i += spec.nb + spec.nc + spec.nd;
            th.segment(i, spec.nf) = a;
        }
    }
    try {
        th = project(spec, th);
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("pem_fit: cannot stabilise ARX initialisation: ") + e.what());
    }

    auto eps = prediction_errors(data, spec, th);
    double V = mean_square(eps);
    if (!std::isfinite(V)) throw NumericalError("pem_fit: initial predictor is unstable");
    std::vector<double> trace{V};

    const auto N = static_cast<Eigen::Index>(eps.size());
    const Eigen::Index d = th.size();
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        if (V == 0.0) {
            converged = true;
            break;
        }
        Eigen::MatrixXd J(N, d);
        for (Eigen::Index k = 0; k < d; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(th[k]));
            Eigen::VectorXd tp = th, tm = th;
            tp[k] += h;
            tm[k] -= h;
            const auto ep = prediction_errors(data, spec, tp);
            const auto em = prediction_errors(data, spec, tm);
            for (Eigen::Index t = 0; t < N; ++t)
                J(t, k) = (ep[static_cast<std::size_t>(t)] - em[static_cast<std::size_t>(t)]) / (2.0 * h);
        }
        const Eigen::Map<const Eigen::VectorXd> ev(eps.data(), N);
        const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-ev);
        if (!step.allFinite()) break;

        bool accepted = false;
        for (double alpha = 1.0; alpha > 1e-10; alpha *= 0.5) {
            Eigen::VectorXd cand;
            try {
                cand = project(spec, th + alpha * step);
            } catch (const NumericalError&) {
                continue;
            }
            auto ec = prediction_errors(data, spec, cand);
            const double Vc = mean_square(ec);
            if (std::isfinite(Vc) && Vc < V) {
                const double rel = (V - Vc) / V;
                th = std::move(cand);
                eps = std::move(ec);
                V = Vc;
                trace.push_back(V);
                accepted = true;
                if (rel < opts.tolerance) converged = true;
                break;
            }
        }
        if (!accepted) converged = true; // no descent direction left at line-search resolution
        if (converged) break;
    }

    auto result = assemble(data, spec, th, std::move(eps));
    result.loss_trace = std::move(trace);
    result.converged = converged;
    if (!converged) {
        result.converged = false;
        throw PemConvergenceError("pem_fit: no convergence after " + std::to_string(it) + " iterations",
                                  std::move(result));
    }
    return result;
}

FitResult fit(const TimeSeries& data, const EstimatorSpec& spec, const PemOptions& opts) {
    return spec.structure == Structure::ARX ? arx_fit(data, spec) : pem_fit(data, spec, opts);
}

// ---------------------------------------------------------------- simulation

std::vector<double> simulate_discrete(const DiscreteTf& model, std::span<const double> u, std::span<const double> y0) {
    const auto& num = model.num();
    const auto& den = model.den();
    const std::size_t rel = den.size() - num.size(); // relative degree
    std::vector<double> y(u.size(), 0.0);
    auto y_at = [&](std::ptrdiff_t t) -> double {
        if (t >= 0) return y[static_cast<std::size_t>(t)];
        const auto lag = static_cast<std::size_t>(-t - 1);
        return lag < y0.size() ? y0[lag] : 0.0;
    };
    for (std::size_t t = 0; t < u.size(); ++t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < num.size(); ++i) {
            const std::size_t lag = rel + i;
            if (lag <= t) acc += num[i] * u[t - lag];
        }
        for (std::size_t i = 1; i < den.size(); ++i)
            acc -= den[i] * y_at(static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>(i));
        y[t] = acc / den[0];
    }
    return y;
}

// ---------------------------------------------------------------- sweep

std::vector<SweepEntry> structure_sweep(const TimeSeries& data, const std::vector<EstimatorSpec>& candidates,
                                        kernels::Backend backend) {
    if (candidates.empty()) throw ArgumentError("structure_sweep: no candidates");
    std::vector<SweepEntry> entries(candidates.size());
    kernels::for_each_index(backend, candidates.size(), [&](std::size_t i) {
        auto& e = entries[i];
        e.candidate = i;
        e.spec = candidates[i];
        try {
            e.result = fit(data, candidates[i]);
        } catch (const PemConvergenceError& err) {
            e.error = err.what();
        } catch (const Error& err) {
            e.error = err.what();
        }
    });
    auto rank_of = [](Structure s) {
        switch (s) {
        case Structure::ARX: return 0;
        case Structure::OE: return 1;
        case Structure::ARMAX: return 2;
        case Structure::BJ: return 3;
        }
        return 4;
    };
    std::stable_sort(entries.begin(), entries.end(), [&](const SweepEntry& a, const SweepEntry& b) {
        if (a.result.has_value() != b.result.has_value()) return a.result.has_value();
        if (!a.result) return false;
        if (a.result->aic != b.result->aic) return a.result->aic < b.result->aic;
        if (a.spec.parameter_count() != b.spec.parameter_count())
            return a.spec.parameter_count() < b.spec.parameter_count();
        return rank_of(a.spec.structure) < rank_of(b.spec.structure);
    });
    return entries;
}

// ---------------------------------------------------------------- synthetic data

TimeSeries regenerate_step_back(const DiscreteTf& model, double drop_fraction, double duration, double onset,
                                double noise_sigma, std::uint64_t seed) {
    if (!(duration > 0.0)) throw ArgumentError("regenerate: duration must be positive");
    if (noise_sigma < 0.0) throw ArgumentError("regenerate: noise sigma must be non-negative");
    const double Ts = model.Ts();
    const auto n = static_cast<std::size_t>(std::llround(duration / Ts)) + 1;
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = static_cast<double>(k) * Ts >= onset - 1e-12 ? drop_fraction : 0.0;
    auto y = simulate_discrete(model, u);
    if (noise_sigma > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (auto& v : y) v += noise(rng);
    }
    return TimeSeries::from_signals(std::move(u), std::move(y), Ts);
}

std::vector<double> prbs(std::size_t length, std::uint64_t seed, std::size_t hold) {
    if (hold == 0) throw ArgumentError("prbs: hold must be positive");
    std::mt19937_64 rng(seed);
    std::vector<double> u(length);
    double level = 1.0;
    for (std::size_t k = 0; k < length; ++k) {
        if (k % hold == 0 && (rng() & 1u)) level = -level;
        u[k] = level;
    }
    return u;
}

} // namespace fracid::sysid

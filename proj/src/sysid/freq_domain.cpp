#include "fracid/sysid/freq_domain.hpp"

#include "fracid/errors.hpp"
#include "fracid/fotf/model_io.hpp"
#include "fracid/io/csv.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fracid::sysid {

std::string_view to_string(Weighting w) { return w == Weighting::Uniform ? "uniform" : "vinagre"; }

Weighting parse_weighting(std::string_view s) {
    if (s == "uniform" || s == "levy") return Weighting::Uniform;
    if (s == "vinagre") return Weighting::Vinagre;
    throw ArgumentError("unknown weighting '" + std::string(s) + "' (uniform|vinagre)");
}

std::vector<double> vinagre_weights(std::span<const double> w) {
    if (w.size() < 2) throw ArgumentError("vinagre weights need at least two frequencies");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] > 0.0) || (i > 0 && !(w[i] > w[i - 1])))
            throw ArgumentError("vinagre weights need strictly increasing positive frequencies");
    }
    const std::size_t f = w.size() - 1;
    std::vector<double> out(w.size());
    out[0] = (w[1] - w[0]) / (2.0 * w[0] * w[0]);
    for (std::size_t p = 1; p < f; ++p) out[p] = (w[p + 1] - w[p - 1]) / (2.0 * w[p] * w[p]);
    out[f] = (w[f] - w[f - 1]) / (2.0 * w[f] * w[f]);
    return out;
}

namespace {

void check(const LevyProblem& pr) {
    if (pr.m < 0 || pr.n < 0) throw ArgumentError("levy: orders must be non-negative");
    if (pr.data.size() == 0) throw ArgumentError("levy: no frequency data");
}

std::vector<double> weights_for(const LevyProblem& pr) {
    if (pr.weighting == Weighting::Uniform) return std::vector<double>(pr.data.size(), 1.0);
    return vinagre_weights(pr.data.omegas());
}

void fill_rows(const LevyProblem& pr, std::size_t p, double weight, Eigen::Ref<Eigen::MatrixXd> A,
               Eigen::Ref<Eigen::Vector2d> rhs) {
    const double omega = pr.data.omegas()[p];
    const std::complex<double> G = pr.data.values()[p];
    const double s = std::sqrt(weight);
    const double q = pr.q.value();
    for (int k = 0; k <= pr.m; ++k) {
        const auto P = jw_power(omega, k * q);
        A(0, k) = s * P.real();
        A(1, k) = s * P.imag();
    }
    for (int k = 1; k <= pr.n; ++k) {
        const auto P = -G * jw_power(omega, k * q);
        A(0, pr.m + k) = s * P.real();
        A(1, pr.m + k) = s * P.imag();
    }
    rhs << s * G.real(), s * G.imag();
}

double condition_of(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 1.0;
    const double lo = sv[sv.size() - 1];
    if (A.rows() < A.cols() || lo == 0.0) return std::numeric_limits<double>::infinity();
    return sv[0] / lo;
}

} // namespace

LevyRows levy_rows(const LevyProblem& pr, std::size_t p) {
    check(pr);
    if (p >= pr.data.size()) throw ArgumentError("levy: frequency index out of range");
    const auto w = weights_for(pr);
    LevyRows r;
    r.A.resize(2, pr.m + pr.n + 1);
    fill_rows(pr, p, w[p], r.A, r.rhs);
    return r;
}

void levy_system(const LevyProblem& pr, Eigen::MatrixXd& A, Eigen::VectorXd& rhs) {
    check(pr);
    const auto w = weights_for(pr);
    const auto F = static_cast<Eigen::Index>(pr.data.size());
    A.resize(2 * F, pr.m + pr.n + 1);
    rhs.resize(2 * F);
    for (Eigen::Index p = 0; p < F; ++p)
        fill_rows(pr, static_cast<std::size_t>(p), w[static_cast<std::size_t>(p)], A.middleRows(2 * p, 2),
                  rhs.segment<2>(2 * p));
}

std::vector<double> residuals_by_freq(const FrequencyResponse& data, const CommensurateFoTf& model) {
    std::vector<double> r(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) r[i] = std::norm(data.values()[i] - eval_fo(model, data.omegas()[i]));
    return r;
}

double accuracy_J(const FrequencyResponse& data, const CommensurateFoTf& model) {
    const auto r = residuals_by_freq(data, model);
    double s = 0.0;
    for (double v : r) s += v;
    return s / static_cast<double>(r.size());
}

LevyFit solve_levy(const LevyProblem& pr) {
    Eigen::MatrixXd A;
    Eigen::VectorXd rhs;
    levy_system(pr, A, rhs);
    const double cond = condition_of(A);

    // Column equilibration: the basis columns span many decades in omega.
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();

    Eigen::VectorXd x;
    bool degenerate = false;
    if (pr.aggregation == Aggregation::Stacked) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(As);
        degenerate = cod.rank() < As.cols();
        x = cod.solve(rhs);
    } else {
        // Per-frequency normal equations summed into one square system.
        const Eigen::MatrixXd M = As.transpose() * As;
        const Eigen::VectorXd v = As.transpose() * rhs;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (lu.rank() < M.cols())
            throw NumericalError("levy: summed normal equations are singular; use the stacked aggregation");
        x = lu.solve(v);
    }
    x = x.cwiseQuotient(scale);
    if (!x.allFinite()) throw NumericalError("levy: solution is not finite");

    poly::Coeffs num(x.data(), x.data() + pr.m + 1);
    poly::Coeffs den(static_cast<std::size_t>(pr.n) + 1, 1.0);
    for (int k = 1; k <= pr.n; ++k) den[static_cast<std::size_t>(k)] = x[pr.m + k];
    CommensurateFoTf model(pr.q, std::move(num), std::move(den));

    auto res = residuals_by_freq(pr.data, model);
    double J = 0.0;
    for (double v : res) J += v;
    J /= static_cast<double>(res.size());
    return LevyFit{std::move(model), pr.m, pr.n, J, cond, std::move(res), degenerate};
}

int sweep_order(RationalOrder max_order, RationalOrder q) {
    const RationalOrder ratio = max_order / q;
    if (ratio.is_integer()) return static_cast<int>(ratio.num());
    if (q.is_integer()) return static_cast<int>(ratio.num() / ratio.den());
    throw ArgumentError("commensurate order " + q.to_string() + " does not divide the top order " +
                        max_order.to_string());
}

std::vector<SweepCell> q_sweep(const FrequencyResponse& data, RationalOrder max_order,
                               const std::vector<RationalOrder>& qs, Aggregation aggregation,
                               kernels::Backend backend, double condition_threshold) {
    if (qs.empty()) throw ArgumentError("q sweep: empty q list");
    std::vector<SweepCell> cells;
    for (const auto& q : qs) {
        const int order = sweep_order(max_order, q);
        for (auto w : {Weighting::Uniform, Weighting::Vinagre}) cells.push_back(SweepCell{q, w, order, order, {}, false, {}});
    }
    kernels::for_each_index(backend, cells.size(), [&](std::size_t i) {
        auto& c = cells[i];
        try {
            c.fit = solve_levy(LevyProblem{data, c.m, c.n, c.q, c.weighting, aggregation});
            c.ill_conditioned = !(c.fit->condition <= condition_threshold) || c.fit->degenerate;
        } catch (const Error& e) {
            c.error = e.what();
        }
    });
    return cells;
}

std::vector<OrderTerm> order_distribution(const CommensurateFoTf& tf, int m, int n) {
    const int top = std::max(m, n);
    std::vector<OrderTerm> out;
    for (int k = 0; k <= top; ++k) {
        OrderTerm t{k, k * tf.q().value(), std::nullopt, std::nullopt};
        const auto ku = static_cast<std::size_t>(k);
        if (k <= m) t.num = ku < tf.num().size() ? tf.num()[ku] : 0.0;
        if (k <= n) t.den = ku < tf.den().size() ? tf.den()[ku] : 0.0;
        out.push_back(t);
    }
    return out;
}

std::vector<OrderTerm> order_distribution(const LevyFit& fit) { return order_distribution(fit.model, fit.m, fit.n); }

CommensurateFoTf random_stable_model(RationalOrder q, int max_m, int max_n, std::mt19937_64& rng) {
    if (max_n < 1 || max_m < 0) throw ArgumentError("random model: need max_n >= 1 and max_m >= 0");
    std::uniform_int_distribution<int> pick_n(1, max_n);
    const int n = pick_n(rng);
    std::uniform_int_distribution<int> pick_m(0, std::min(max_m, n));
    const int m = pick_m(rng);
    std::uniform_real_distribution<double> modulus(0.5, 2.0), unit(-1.0, 1.0), coin(0.0, 1.0);
    const double lo = std::min(90.0 * q.value() + 10.0, 175.0);
    std::uniform_real_distribution<double> angle(lo, 179.0);
    std::vector<std::complex<double>> roots;
    while (static_cast<int>(roots.size()) < n) {
        if (n - static_cast<int>(roots.size()) >= 2 && coin(rng) < 0.7) {
            const auto r = std::polar(modulus(rng), angle(rng) * std::numbers::pi / 180.0);
            roots.push_back(r);
            roots.push_back(std::conj(r));
        } else {
            roots.emplace_back(-modulus(rng), 0.0);
        }
    }
    auto den = poly::from_roots(roots);
    const double d0 = den[0];
    for (auto& v : den) v /= d0;
    poly::Coeffs num(static_cast<std::size_t>(m) + 1);
    for (auto& v : num) v = unit(rng);
    if (num.back() == 0.0) num.back() = 1.0;
    return CommensurateFoTf(q, std::move(num), std::move(den));
}

FrequencyResponse parse_freq_csv(const std::string& text) {
    const auto table = csv::parse(text, {"omega", "re", "im"});
    std::vector<double> w;
    std::vector<std::complex<double>> g;
    for (const auto& r : table.rows) {
        w.push_back(r[0]);
        g.emplace_back(r[1], r[2]);
    }
    return FrequencyResponse(std::move(w), std::move(g));
}

FrequencyResponse read_freq_csv(const std::filesystem::path& path) { return parse_freq_csv(read_file(path)); }

std::string to_csv(const FrequencyResponse& data) {
    std::vector<double> re, im;
    for (const auto& v : data.values()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return csv::write({"omega", "re", "im"}, {data.omegas(), re, im});
}

} // namespace fracid::sysid

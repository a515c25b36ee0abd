#pragma once

#include "fracid/fotf/rational_order.hpp"
#include "fracid/fotf/transfer_function.hpp"
#include "fracid/kernels/parallel.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fracid::sysid {

enum class Weighting { Uniform, Vinagre };
enum class Aggregation { Summed, Stacked };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view s);

/// Fit N(w)/D(w), w = s^q, with deg N = m, deg D = n and D(0) = 1.
struct LevyProblem {
    FrequencyResponse data;
    int m = 0;
    int n = 0;
    RationalOrder q{1, 4};
    Weighting weighting = Weighting::Uniform;
    Aggregation aggregation = Aggregation::Stacked;
};

struct LevyFit {
    CommensurateFoTf model;
    int m = 0, n = 0;
    double J = 0.0;
    double condition = 0.0; // 2-norm condition of the weighted stacked matrix
    std::vector<double> residual_by_freq;
    bool degenerate = false; // stacked system was rank deficient
};

struct LevyRows {
    Eigen::MatrixXd A; // 2 x (m + n + 1)
    Eigen::Vector2d rhs;
};

/// Real and imaginary rows of G D - N = 0 at frequency index p, unknowns
/// [b_0..b_m, a_1..a_n], scaled by sqrt(w_p) when weighting is on.
LevyRows levy_rows(const LevyProblem& problem, std::size_t p);

/// Full stacked system (2 rows per frequency).
void levy_system(const LevyProblem& problem, Eigen::MatrixXd& A, Eigen::VectorXd& rhs);

LevyFit solve_levy(const LevyProblem& problem);

std::vector<double> vinagre_weights(std::span<const double> omegas);

/// Mean of |G - G_hat|^2 over the data frequencies.
double accuracy_J(const FrequencyResponse& data, const CommensurateFoTf& model);
std::vector<double> residuals_by_freq(const FrequencyResponse& data, const CommensurateFoTf& model);

struct SweepCell {
    RationalOrder q;
    Weighting weighting;
    int m = 0, n = 0;
    std::optional<LevyFit> fit;
    bool ill_conditioned = false;
    std::string error;
};

inline constexpr double kConditionThreshold = 1e12;

/// Orders for a sweep cell: top order / q. Integer q that does not divide the
/// top order gets the floor (q = 1 with top order 5/2 fits m = n = 2);
/// fractional q must divide it exactly.
int sweep_order(RationalOrder max_order, RationalOrder q);

/// Both weightings for each q, in input order (Uniform then Vinagre).
std::vector<SweepCell> q_sweep(const FrequencyResponse& data, RationalOrder max_order,
                               const std::vector<RationalOrder>& qs, Aggregation aggregation = Aggregation::Stacked,
                               kernels::Backend backend = kernels::Backend::OpenMP,
                               double condition_threshold = kConditionThreshold);

struct OrderTerm {
    int k = 0;
    double order = 0.0; // k q
    std::optional<double> num;
    std::optional<double> den;
};

/// Coefficients against their order k q; num has m + 1 entries and den n + 1.
std::vector<OrderTerm> order_distribution(const LevyFit& fit);
std::vector<OrderTerm> order_distribution(const CommensurateFoTf& tf, int m, int n);

/// Random stable model over base q: 1 <= n <= max_n poles (|arg| at least
/// 10 degrees outside the stability cone, modulus in [0.5, 2]), 0 <= m <= n,
/// normalised so den[0] = 1.
CommensurateFoTf random_stable_model(RationalOrder q, int max_m, int max_n, std::mt19937_64& rng);

FrequencyResponse parse_freq_csv(const std::string& text);
FrequencyResponse read_freq_csv(const std::filesystem::path& path);
std::string to_csv(const FrequencyResponse& data);

} // namespace fracid::sysid

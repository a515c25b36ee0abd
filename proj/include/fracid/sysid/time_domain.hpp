#pragma once

#include "fracid/errors.hpp"
#include "fracid/fotf/transfer_function.hpp"
#include "fracid/kernels/parallel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracid::sysid {

/// Uniformly sampled single-input single-output record.
class TimeSeries {
public:
    TimeSeries(std::vector<double> t, std::vector<double> u, std::vector<double> y);

    const std::vector<double>& t() const noexcept { return t_; }
    const std::vector<double>& u() const noexcept { return u_; }
    const std::vector<double>& y() const noexcept { return y_; }
    double Ts() const noexcept { return Ts_; }
    std::size_t size() const noexcept { return t_.size(); }

    static TimeSeries from_signals(std::vector<double> u, std::vector<double> y, double Ts);

private:
    std::vector<double> t_, u_, y_;
    double Ts_;
};

TimeSeries read_time_series_csv(const std::filesystem::path& path);
TimeSeries parse_time_series_csv(const std::string& text);
std::string to_csv(const TimeSeries& data);

// Model structures in the backward shift q^-1:
//   A y = B/F u + C/D e
// ARX: A, B.  ARMAX: A, B, C.  OE: B, F.  BJ: B, C, D, F.
enum class Structure { ARX, OE, ARMAX, BJ };

std::string_view to_string(Structure s);
Structure parse_structure(std::string_view s);

struct EstimatorSpec {
    Structure structure = Structure::ARX;
    int na = 0, nb = 0, nc = 0, nd = 0, nf = 0;
    int nk = 1;

    static EstimatorSpec arx(int na, int nb, int nk = 1) { return {Structure::ARX, na, nb, 0, 0, 0, nk}; }
    static EstimatorSpec armax(int na, int nb, int nc, int nk = 1) { return {Structure::ARMAX, na, nb, nc, 0, 0, nk}; }
    static EstimatorSpec oe(int nb, int nf, int nk = 1) { return {Structure::OE, 0, nb, 0, 0, nf, nk}; }
    static EstimatorSpec bj(int nb, int nc, int nd, int nf, int nk = 1) {
        return {Structure::BJ, 0, nb, nc, nd, nf, nk};
    }

    /// Throws ArgumentError if orders do not match the structure.
    void validate() const;
    int parameter_count() const { return na + nb + nc + nd + nf; }
    std::string to_string() const;

    /// "arx:na=2,nb=1,nk=1" style text.
    static EstimatorSpec parse(std::string_view text);
};

struct FitResult {
    EstimatorSpec spec;
    DiscreteTf model;       // deterministic part G
    DiscreteTf noise_model; // stochastic part H
    Eigen::VectorXd theta;  // [a, b, c, d, f]
    double V = 0.0;         // mean squared prediction error
    double aic = 0.0;
    double fpe = 0.0;
    std::size_t n_residuals = 0; // N used in AIC/FPE
    std::vector<double> residuals;
    std::vector<double> loss_trace; // PEM only: loss per accepted step
    bool converged = true;
};

/// Thrown by pem_fit when the iteration cap is hit; carries the best fit.
class PemConvergenceError : public NumericalError {
public:
    PemConvergenceError(const std::string& what, FitResult best) : NumericalError(what), best_(std::move(best)) {}
    const FitResult& best() const noexcept { return best_; }

private:
    FitResult best_;
};

struct Regressor {
    Eigen::MatrixXd phi;
    Eigen::VectorXd target;
    std::size_t first_index = 0; // sample index of row 0
};

/// Rows [-y(t-1) .. -y(t-na), u(t-nk) .. u(t-nk-nb+1)] for every t whose lags
/// all exist.
Regressor build_regressor(const TimeSeries& data, int na, int nb, int nk);

FitResult arx_fit(const TimeSeries& data, const EstimatorSpec& spec);

struct PemOptions {
    int max_iterations = 200;
    double tolerance = 1e-10; // relative loss decrease that counts as converged
};

FitResult pem_fit(const TimeSeries& data, const EstimatorSpec& spec, const PemOptions& opts = {});

/// Fits with arx_fit or pem_fit according to the structure.
FitResult fit(const TimeSeries& data, const EstimatorSpec& spec, const PemOptions& opts = {});

double aic(double V, std::size_t d, std::size_t N);
double fpe(double V, std::size_t d, std::size_t N);

/// Runs the difference equation with zero input history. `y0` holds output
/// lags y(-1), y(-2), ... (missing ones are zero).
std::vector<double> simulate_discrete(const DiscreteTf& model, std::span<const double> u,
                                      std::span<const double> y0 = {});

struct SweepEntry {
    std::size_t candidate = 0;
    EstimatorSpec spec;
    std::optional<FitResult> result;
    std::string error;
};

/// Fits every candidate and ranks by AIC (ties: fewer parameters, then
/// ARX < OE < ARMAX < BJ). Failed candidates are kept, ranked last.
std::vector<SweepEntry> structure_sweep(const TimeSeries& data, const std::vector<EstimatorSpec>& candidates,
                                        kernels::Backend backend = kernels::Backend::OpenMP);

/// Step of height `drop_fraction` starting at `onset` seconds, pushed through
/// `model`, with optional white output noise.
TimeSeries regenerate_step_back(const DiscreteTf& model, double drop_fraction, double duration = 14.0,
                                double onset = 1.0, double noise_sigma = 0.0, std::uint64_t seed = 0);

/// Random binary (+1/-1) sequence that switches with probability 1/2 every
/// `hold` samples.
std::vector<double> prbs(std::size_t length, std::uint64_t seed, std::size_t hold = 1);

} // namespace fracid::sysid

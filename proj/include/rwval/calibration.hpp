#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <span>
#include <vector>

#include "rwval/dates.hpp"
#include "rwval/market_data.hpp"
#include "rwval/mmm.hpp"

namespace rwval::calib {

/// Black-Scholes comparator for the discounted index:
/// dS̄ = theta^2 S̄ dt + theta S̄ dW, so log increments are
/// N(theta^2 dt / 2, theta^2 dt).
struct GbmParams {
    double theta = 0.0;  // volatility per sqrt(year)
    double std_err = 0.0;
    double log_likelihood = 0.0;

    void validate() const {
        if (!(theta > 0.0))
            throw DomainError("GbmParams: theta must be positive");
    }
};

struct GridEval {
    double alpha = 0.0;
    double eta = 0.0;
    double log_likelihood = 0.0;
};

struct FitOptions {
    double rel_tol = 1e-8;  // relative parameter step at convergence
    int max_iter = 100;
    int max_shrink = 10;  // grid-step halvings on concavity/ascent failure
    std::optional<std::array<double, 2>> initial;  // (alpha0, eta0) override
    bool keep_grid_history = false;
};

template <class ParamsT>
struct Report {
    ParamsT params;
    int iterations = 0;
    bool converged = false;
    std::array<double, 2> initial_guess{};
    // Offset of the final surrogate maximum from the converged center, in
    // parameter units; near zero when the fixed point has been reached.
    std::array<double, 2> surrogate_offset{};
    // Grid step (d alpha, d eta) of the final surrogate, after any halvings.
    std::array<double, 2> grid_step{};
    std::optional<std::vector<GridEval>> grid_history;
};

/// Cumulative empirical quadratic variation of sqrt(values):
/// out[j] = sum_{i<=j} (sqrt(v_i) - sqrt(v_{i-1}))^2, out[0] = 0.
Eigen::ArrayXd empirical_qv_sqrt(std::span<const double> values);
Eigen::ArrayXd empirical_qv_sqrt(const MarketSeries& series, MonthRange window);

/// Moment-match the empirical quadratic variation of sqrt(S̄*) against the
/// model clock at the half and full sample points: with k = floor(n/2) over
/// n transitions,
///   eta0   = ln(QV_{2k} / QV_k - 1) / (t_k - t_0),
///   alpha0 = QV_k * 4 eta0 / (e^{eta0 (t_k - t_0)} - 1).
/// Requires QV_{2k} / QV_k > 2 (shrinking or diffusive-flat variation makes
/// the exponential clock unidentifiable).
std::array<double, 2> initial_estimates(std::span<const double> times,
                                        std::span<const double> values);
std::array<double, 2> initial_estimates(const MarketSeries& series, MonthRange window);

/// Maximum likelihood fit of the MMM by iterated quadratic surrogates:
/// evaluate the log likelihood on the 5x5 grid {a + i da} x {e + j de},
/// i,j in -2..2 with da = a/4, de = e/4, least-squares fit
/// Q(x) = x'Ax - 2b'x + c and move to the surrogate maximum A^{-1}b until
/// the relative step drops below rel_tol. If the surrogate loses concavity
/// or the likelihood fails to ascend, the grid step is halved (up to
/// max_shrink times). Standard errors come from the Cramer-Rao bound
/// -(H)^{-1} with H = 2A taken from a final grid fit at the optimum.
Report<mmm::Params> fit_mmm(std::span<const double> times, std::span<const double> values,
                            const FitOptions& options = {});
Report<mmm::Params> fit_mmm(const MarketSeries& series, MonthRange window,
                            const FitOptions& options = {});

/// Exact Gaussian MLE for the GBM comparator. With log returns r_i over
/// steps dt_i, the likelihood in v = theta^2 has the unique positive root
///   v = 2 (sqrt(n^2 + T S) - n) / T,   T = sum dt_i,  S = sum r_i^2 / dt_i,
/// and observed information I(theta) = 2n / v + T at the maximum.
Report<GbmParams> fit_gbm(std::span<const double> times, std::span<const double> values);
Report<GbmParams> fit_gbm(const MarketSeries& series, MonthRange window);

/// Log likelihood of a discounted-index path under the GBM comparator.
double gbm_path_log_likelihood(const GbmParams& params, std::span<const double> times,
                               std::span<const double> values);

}  // namespace rwval::calib

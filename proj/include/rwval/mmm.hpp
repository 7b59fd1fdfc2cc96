#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "rwval/dates.hpp"
#include "rwval/errors.hpp"
#include "rwval/market_data.hpp"

namespace rwval::mmm {

/// Stylized minimal market model for the discounted index S̄*: a squared
/// Bessel process of dimension four run on the exponential clock
/// phi(t) = alpha (e^{eta t} - 1) / (4 eta), i.e. drift alpha_t = alpha e^{eta t}.
///
/// alpha is in units of the discounted index per year, so estimates are tied
/// to the normalization of the series they were fitted on; eta is per year.
/// Time is measured in years from the start of the calibration window.
struct Params {
    double alpha = 0.0;
    double eta = 0.0;
    std::optional<std::array<double, 2>> std_err;  // (se_alpha, se_eta)
    std::optional<double> log_likelihood;

    void validate() const {
        if (!(alpha > 0.0) || !(eta > 0.0))
            throw DomainError("mmm::Params: alpha and eta must be positive");
    }
};

/// Time change phi(t) = alpha (e^{eta t} - 1) / (4 eta), the quadratic
/// variation of sqrt(S̄*) accumulated by model time t >= 0.
double phi(const Params& params, double t);

/// phi(T) - phi(t) computed as (alpha / 4 eta) e^{eta t} expm1(eta (T - t)),
/// which stays accurate for short windows far from the time origin.
double phi_increment(const Params& params, double t, double T);

/// Diagnostic market price of risk theta_t = sqrt(alpha e^{eta t} / s_bar).
double market_price_of_risk(const Params& params, double t, double s_bar);

/// Express the same drift curve relative to an origin `shift_years` earlier:
/// alpha' = alpha e^{-eta shift_years}. Standard errors are dropped, they do
/// not transform independently.
Params re_anchored(const Params& params, double shift_years);

/// Log transition density of a squared Bessel(4) bridge expressed through
/// the quadratic-variation increment dphi = phi(T) - phi(t):
///   ln p = -ln(2 dphi) + (1/2) ln(x_T / x_t) - (x_t + x_T)/(2 dphi)
///          + ln I_1(sqrt(x_t x_T) / dphi).
double transition_log_density_by_qv(double dphi, double x_t, double x_T);

double transition_log_density(const Params& params, double t, double x_t, double T, double x_T);

/// Sum of transition log densities over consecutive observations. `times`
/// are model years; the pair (times[0], values[0]) anchors the clock.
double path_log_likelihood(const Params& params, std::span<const double> times,
                           std::span<const double> values);

/// Same over a date window of a series, with model time restarted at the
/// window start (this is the time origin the fitted alpha refers to).
double path_log_likelihood(const Params& params, const MarketSeries& series, MonthRange window);

/// Exact transition sampling: each step draws U ~ chi^2_{4, x/dphi} as
/// (Z1 + sqrt(lambda))^2 + Z2^2 + Z3^2 + Z4^2 and sets the next state to
/// dphi * U. No discretization error. Paths are seeded independently from
/// (seed, path index), so results do not depend on thread count.
///
/// Returns an n_paths x grid.size() matrix; `grid` must increase strictly
/// and start after t0.
Eigen::MatrixXd simulate_paths(const Params& params, double x0, double t0,
                               std::span<const double> grid, int n_paths, std::uint64_t seed);

}  // namespace rwval::mmm

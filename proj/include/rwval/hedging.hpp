#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "rwval/dates.hpp"
#include "rwval/market_data.hpp"
#include "rwval/mmm.hpp"
#include "rwval/pricing.hpp"

namespace rwval::hedge {

/// Self-financing hedge of a fair zero coupon bond, rebalanced at the
/// observation dates. All paths are stored so the self-financing identity
/// V̄_{k+1} = V̄_k + delta_k (S̄*_{k+1} - S̄*_k) can be re-derived exactly.
struct HedgeResult {
    std::vector<Month> dates;
    Eigen::ArrayXd portfolio_value;  // dollars
    Eigen::ArrayXd delta_units;      // d P̄ / d S̄*; 0 at maturity
    Eigen::ArrayXd index_fraction;   // pi_t = delta * S̄* / V̄
    Eigen::ArrayXd benchmarked_pnl;  // (V - P) / S*
    double terminal_pnl = 0.0;       // V_T - 1 dollar face
};

/// Discounted-unit hedge over an arbitrary time grid (model years) and
/// discounted-index path; d0T = D(t_0, T) anchors the bond price level.
/// Used directly for grid-refinement studies; hedge_zcb wraps it.
struct DiscountedHedgePath {
    Eigen::ArrayXd value;       // V̄ along the grid
    Eigen::ArrayXd delta;       // rebalancing deltas; 0 at maturity
    Eigen::ArrayXd fair_value;  // P̄(t, T) along the grid
};

DiscountedHedgePath hedge_discounted(const mmm::Params& params, double d0T,
                                     std::span<const double> times,
                                     std::span<const double> s_bar);

HedgeResult hedge_zcb(const mmm::Params& params, const MarketSeries& series, Month t0, Month T);

/// One row of the bond backtest: every monthly start date whose maturity
/// stays inside the window, hedged to maturity with fixed parameters.
struct BacktestSummary {
    int tenor_years = 0;
    double mean_d = 0.0;
    double mean_p = 0.0;
    double mean_diff = 0.0;  // mean_d - mean_p
    double mean_pnl = 0.0;   // dollars at maturity vs the 1-dollar face
    double std_pnl = 0.0;
    int n_windows = 0;
};

std::vector<BacktestSummary> backtest_zcb(const mmm::Params& params, const MarketSeries& series,
                                          MonthRange window, std::span<const int> tenors);

/// Deferred cash-linked annuity sweep: for every monthly purchase date in
/// start_window, value `payment_years` annual unit payments starting
/// `deferral_years` ahead. The risk-neutral discounted value is the payment
/// count; saving_pct = 100 (1 - rw / rn).
struct AnnuityBacktest {
    double mean_rw = 0.0;
    double std_rw = 0.0;
    double rn_value = 0.0;
    double mean_saving_pct = 0.0;
    double std_saving_pct = 0.0;
    int n_windows = 0;
};

AnnuityBacktest backtest_cash_annuity(const mmm::Params& params, const MarketSeries& series,
                                      MonthRange start_window, int deferral_years,
                                      int payment_years);

}  // namespace rwval::hedge

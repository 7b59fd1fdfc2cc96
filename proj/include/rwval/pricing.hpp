#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "rwval/calibration.hpp"
#include "rwval/dates.hpp"
#include "rwval/market_data.hpp"
#include "rwval/mmm.hpp"

namespace rwval::pricing {

/// Fair and savings zero coupon bond quotes for one (t, T) pair.
/// lambda = S̄*_t / (phi_T - phi_t) is the non-centrality that drives every
/// closed form; fair_bond = savings_bond * (1 - e^{-lambda/2}) < savings_bond.
struct ZcbQuote {
    Month t;
    Month T;
    double savings_bond = 0.0;     // D(t,T)
    double fair_bond = 0.0;        // P(t,T)
    double benchmarked_fair = 0.0; // P(t,T) / S*_t
    double lambda = 0.0;
};

enum class AnnuityKind { cash_linked, equity_linked_with_guarantee };

/// Annual-payment annuity bought at `purchase`; payments are pooled across
/// policyholders through the mortality index, so valuation only sees the
/// payment dates. guarantee_rate is the contractual growth rate of the
/// savings-account guarantee leg; it defaults to the calibrated eta.
struct AnnuitySpec {
    Month purchase;
    std::vector<Month> payments;
    AnnuityKind kind = AnnuityKind::cash_linked;
    std::optional<double> guarantee_rate;

    void validate() const;
};

/// 1 - exp(-2 eta s̄ / (alpha (e^{eta T} - e^{eta t}))), the fair-to-savings
/// bond ratio. Equals 1 - e^{-lambda/2} with lambda = s̄ / (phi_T - phi_t).
double fair_zcb_factor(const mmm::Params& params, double s_bar, double t, double T);

/// Fair bond quote at a historical date. D(t,T) uses the realized short
/// rates; when T lies beyond the series, `flat_rate` extends the savings
/// account at a constant rate (no extension -> OutOfRange).
ZcbQuote fair_zcb(const mmm::Params& params, const MarketSeries& series, Month t, Month T,
                  std::optional<double> flat_rate = {});

/// Hedge ratio d P̄(t,T) / d S̄*_t with P̄ discounted by the savings account
/// normalized to 1 at the valuation origin (d0T = D(origin, T)):
///   delta = d0T * exp(-2 eta s̄ / (alpha E)) * 2 eta / (alpha E),
///   E = e^{eta T} - e^{eta t}.
double zcb_delta(const mmm::Params& params, double s_bar, double t, double T, double d0T);

/// Discounted values of the cash-linked annuity at valuation date t:
/// real-world sum_{T in G, T > t} (1 - e^{-lambda(t,T)/2}) against the
/// risk-neutral count of remaining unit payments. Both are in units of the
/// savings account normalized at purchase.
std::pair<double, double> cash_annuity_value(const mmm::Params& params,
                                             const MarketSeries& series, Month t,
                                             const AnnuitySpec& spec);

/// Survivors of `death_times` past T plus the management-fee leg, each
/// paying mortality_index * s0_ratio. The pool telescopes to s0_ratio
/// independently of the death-time configuration; the ratio is formed
/// explicitly so this holds exactly in floating point.
double pooled_payoff_identity(std::span<const double> death_times, double T, double t0,
                              double s0_ratio);

/// MI_T = 1 / (1 + number of survivors past T).
double mortality_index(std::span<const double> death_times, double T);

/// E_t[(S̄_t/S̄_T - S̄_t / (S̄_{t0} e^{g (T-t0)}))^+] under the MMM:
///   chi2_{0,lambda}(kappa) - e^{-lambda/2} - (S̄_t / strike) chi2_{4,lambda}(kappa),
/// lambda = S̄_t / dphi, kappa = strike / dphi, strike = S̄_{t0} e^{g (T-t0)}.
/// g defaults to the calibrated eta.
double guarantee_put_expectation_mmm(const mmm::Params& params, double s_bar_t, double s_bar_t0,
                                     double t0, double t, double T,
                                     std::optional<double> guarantee_rate = {});

/// Discounted value (purchase-normalized savings units) of one payment of
/// the equity-linked annuity with guarantee:
///   (s̄_t/s̄_t0) (1 - chi2_{4,lambda}(kappa))
///   + e^{g (T-t0)} (chi2_{0,lambda}(kappa) - e^{-lambda/2}).
double equity_annuity_term_mmm(const mmm::Params& params, double s_bar_t, double s_bar_t0,
                               double t0, double t, double T, double guarantee_rate);

/// Same payment under the Black-Scholes comparator:
///   (s̄_t/s̄_t0) (1 - N(d2)) + e^{g (T-t0)} N(d1),
///   d1 = (ln(s̄_{t0} e^{g (T-t0)} / s̄_t) + theta^2 (T-t)/2) / (theta sqrt(T-t)).
double equity_annuity_term_bs(const calib::GbmParams& params, double s_bar_t, double s_bar_t0,
                              double t0, double t, double T, double guarantee_rate);

struct AnnuityValue {
    double value = 0.0;       // dollars, with index and savings account = $1 at purchase
    double discounted = 0.0;  // value / savings-account ratio since purchase
};

AnnuityValue equity_annuity_value_mmm(const mmm::Params& params, const MarketSeries& series,
                                      Month t, const AnnuitySpec& spec);

AnnuityValue equity_annuity_value_bs(const calib::GbmParams& params, const MarketSeries& series,
                                     Month t, const AnnuitySpec& spec, double guarantee_rate);

}  // namespace rwval::pricing

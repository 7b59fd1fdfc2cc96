#include "rwval/pricing.hpp"

#include <cmath>

#include "rwval/special_functions.hpp"

namespace rwval::pricing {

namespace {

/// alpha (e^{eta T} - e^{eta t}), factored so short windows far from the
/// origin keep full precision.
double growth_gap(const mmm::Params& p, double t, double T) {
    return p.alpha * std::exp(p.eta * t) * std::expm1(p.eta * (T - t));
}

}  // namespace

void AnnuitySpec::validate() const {
    Month prev = purchase;
    for (std::size_t i = 0; i < payments.size(); ++i) {
        if (!(payments[i] > prev))
            throw InvalidWindow("AnnuitySpec: payment dates must be strictly increasing and "
                                "after the purchase date (offender: " +
                                payments[i].str() + ")");
        prev = payments[i];
    }
}

double fair_zcb_factor(const mmm::Params& params, double s_bar, double t, double T) {
    params.validate();
    if (!(s_bar > 0.0)) throw DomainError("fair_zcb_factor: discounted index must be positive");
    if (!(t >= 0.0)) throw DomainError("fair_zcb_factor: t must be >= 0");
    if (!(T > t)) throw InvalidWindow("fair_zcb_factor: T must exceed t");
    return -std::expm1(-2.0 * params.eta * s_bar / growth_gap(params, t, T));
}

ZcbQuote fair_zcb(const mmm::Params& params, const MarketSeries& series, Month t, Month T,
                  std::optional<double> flat_rate) {
    if (!(t < T)) throw InvalidWindow("fair_zcb: t must precede T");

    const double s_bar = series.discounted_index_at(t);
    const double tau_t = series.year_fraction(t);
    const double tau_T = years_between(series.first(), T);

    double d;
    if (T <= series.last()) {
        d = savings_bond(series, t, T);
    } else if (flat_rate) {
        // Deterministic flat extension of the savings account beyond the data.
        d = savings_bond(series, t, series.last()) *
            std::exp(-*flat_rate * years_between(series.last(), T));
    } else {
        throw OutOfRange("fair_zcb: maturity " + T.str() +
                         " beyond series end; supply a flat extension rate");
    }

    ZcbQuote q;
    q.t = t;
    q.T = T;
    q.savings_bond = d;
    q.fair_bond = d * fair_zcb_factor(params, s_bar, tau_t, tau_T);
    q.benchmarked_fair = q.fair_bond / series.index_at(t);
    q.lambda = s_bar / mmm::phi_increment(params, tau_t, tau_T);
    return q;
}

double zcb_delta(const mmm::Params& params, double s_bar, double t, double T, double d0T) {
    params.validate();
    if (!(s_bar > 0.0)) throw DomainError("zcb_delta: discounted index must be positive");
    if (!(d0T > 0.0)) throw DomainError("zcb_delta: savings bond factor must be positive");
    if (!(t >= 0.0)) throw DomainError("zcb_delta: t must be >= 0");
    if (!(T > t)) throw InvalidWindow("zcb_delta: T must exceed t");
    const double w = 2.0 * params.eta / growth_gap(params, t, T);
    return d0T * std::exp(-w * s_bar) * w;
}

std::pair<double, double> cash_annuity_value(const mmm::Params& params,
                                             const MarketSeries& series, Month t,
                                             const AnnuitySpec& spec) {
    spec.validate();
    if (spec.kind != AnnuityKind::cash_linked)
        throw DomainError("cash_annuity_value: spec is not cash-linked");
    if (t < spec.purchase)
        throw InvalidWindow("cash_annuity_value: valuation before purchase date");

    const double s_bar = series.discounted_index_at(t);
    const double tau_t = series.year_fraction(t);

    double rw = 0.0;
    int remaining = 0;
    for (Month T : spec.payments) {
        if (T <= t) continue;  // payments on or before the valuation date are settled
        rw += fair_zcb_factor(params, s_bar, tau_t, years_between(series.first(), T));
        ++remaining;
    }
    return {rw, static_cast<double>(remaining)};
}

double mortality_index(std::span<const double> death_times, double T) {
    double survivors = 0.0;
    for (double tau : death_times)
        if (tau > T) survivors += 1.0;
    return 1.0 / (1.0 + survivors);
}

double pooled_payoff_identity(std::span<const double> death_times, double T, double t0,
                              double s0_ratio) {
    (void)t0;  // the pool forms at t0; only survival past T matters here
    double survivors = 0.0;
    for (double tau : death_times)
        if (tau > T) survivors += 1.0;
    // Fee leg plus one leg per survivor, each paying MI_T * s0_ratio with
    // MI_T = 1 / pool. Forming pool/pool keeps the telescoping exact.
    const double pool = 1.0 + survivors;
    return s0_ratio * (pool / pool);
}

double guarantee_put_expectation_mmm(const mmm::Params& params, double s_bar_t, double s_bar_t0,
                                     double t0, double t, double T,
                                     std::optional<double> guarantee_rate) {
    params.validate();
    if (!(s_bar_t > 0.0) || !(s_bar_t0 > 0.0))
        throw DomainError("guarantee_put_expectation_mmm: states must be positive");
    if (!(t0 <= t && t < T))
        throw InvalidWindow("guarantee_put_expectation_mmm: need t0 <= t < T");

    const double g = guarantee_rate.value_or(params.eta);
    const double dphi = mmm::phi_increment(params, t, T);
    const double lambda = s_bar_t / dphi;
    const double strike = s_bar_t0 * std::exp(g * (T - t0));
    const double kappa = strike / dphi;

    const double value = ncx2_cdf(0, lambda, kappa) - std::exp(-0.5 * lambda) -
                         s_bar_t / strike * ncx2_cdf(4, lambda, kappa);
    return std::max(0.0, value);
}

double equity_annuity_term_mmm(const mmm::Params& params, double s_bar_t, double s_bar_t0,
                               double t0, double t, double T, double guarantee_rate) {
    params.validate();
    if (!(s_bar_t > 0.0) || !(s_bar_t0 > 0.0))
        throw DomainError("equity_annuity_term_mmm: states must be positive");
    if (!(t0 <= t && t < T)) throw InvalidWindow("equity_annuity_term_mmm: need t0 <= t < T");

    const double dphi = mmm::phi_increment(params, t, T);
    const double lambda = s_bar_t / dphi;
    const double kappa = s_bar_t0 * std::exp(guarantee_rate * (T - t0)) / dphi;
    return s_bar_t / s_bar_t0 * (1.0 - ncx2_cdf(4, lambda, kappa)) +
           std::exp(guarantee_rate * (T - t0)) *
               (ncx2_cdf(0, lambda, kappa) - std::exp(-0.5 * lambda));
}

double equity_annuity_term_bs(const calib::GbmParams& params, double s_bar_t, double s_bar_t0,
                              double t0, double t, double T, double guarantee_rate) {
    params.validate();
    if (!(s_bar_t > 0.0) || !(s_bar_t0 > 0.0))
        throw DomainError("equity_annuity_term_bs: states must be positive");
    if (!(t0 <= t && t < T)) throw InvalidWindow("equity_annuity_term_bs: need t0 <= t < T");

    const double grown = std::exp(guarantee_rate * (T - t0));
    const double sd = params.theta * std::sqrt(T - t);
    const double d1 = (std::log(s_bar_t0 * grown / s_bar_t) + 0.5 * sd * sd) / sd;
    const double d2 = d1 - sd;
    return s_bar_t / s_bar_t0 * (1.0 - normal_cdf(d2)) + grown * normal_cdf(d1);
}

AnnuityValue equity_annuity_value_mmm(const mmm::Params& params, const MarketSeries& series,
                                      Month t, const AnnuitySpec& spec) {
    spec.validate();
    if (spec.kind != AnnuityKind::equity_linked_with_guarantee)
        throw DomainError("equity_annuity_value_mmm: spec is not equity-linked");
    if (t < spec.purchase)
        throw InvalidWindow("equity_annuity_value_mmm: valuation before purchase date");

    const double g = spec.guarantee_rate.value_or(params.eta);
    const double s_bar_t = series.discounted_index_at(t);
    const double s_bar_t0 = series.discounted_index_at(spec.purchase);
    const double tau_t = series.year_fraction(t);
    const double tau_t0 = series.year_fraction(spec.purchase);

    AnnuityValue out;
    for (Month T : spec.payments) {
        if (T <= t) continue;
        out.discounted += equity_annuity_term_mmm(params, s_bar_t, s_bar_t0, tau_t0, tau_t,
                                                  years_between(series.first(), T), g);
    }
    out.value = out.discounted * (series.savings_at(t) / series.savings_at(spec.purchase));
    return out;
}

AnnuityValue equity_annuity_value_bs(const calib::GbmParams& params, const MarketSeries& series,
                                     Month t, const AnnuitySpec& spec, double guarantee_rate) {
    spec.validate();
    if (spec.kind != AnnuityKind::equity_linked_with_guarantee)
        throw DomainError("equity_annuity_value_bs: spec is not equity-linked");
    if (t < spec.purchase)
        throw InvalidWindow("equity_annuity_value_bs: valuation before purchase date");

    const double s_bar_t = series.discounted_index_at(t);
    const double s_bar_t0 = series.discounted_index_at(spec.purchase);
    const double tau_t = series.year_fraction(t);
    const double tau_t0 = series.year_fraction(spec.purchase);

    AnnuityValue out;
    for (Month T : spec.payments) {
        if (T <= t) continue;
        out.discounted += equity_annuity_term_bs(params, s_bar_t, s_bar_t0, tau_t0, tau_t,
                                                 years_between(series.first(), T),
                                                 guarantee_rate);
    }
    out.value = out.discounted * (series.savings_at(t) / series.savings_at(spec.purchase));
    return out;
}

}  // namespace rwval::pricing

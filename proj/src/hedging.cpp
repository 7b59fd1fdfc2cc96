#include "rwval/hedging.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "rwval/detail/parallel.hpp"

namespace rwval::hedge {

namespace {

double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0));
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

DiscountedHedgePath hedge_discounted(const mmm::Params& params, double d0T,
                                     std::span<const double> times,
                                     std::span<const double> s_bar) {
    params.validate();
    if (!(d0T > 0.0)) throw DomainError("hedge_discounted: d0T must be positive");
    if (times.size() != s_bar.size())
        throw DomainError("hedge_discounted: times and path differ in length");
    if (times.size() < 2) throw InvalidWindow("hedge_discounted: need at least two dates");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw InvalidWindow("hedge_discounted: times must increase strictly");
    for (double s : s_bar)
        if (!(s > 0.0)) throw DomainError("hedge_discounted: discounted index must be positive");

    const auto n = static_cast<Eigen::Index>(times.size());
    const double maturity = times[times.size() - 1];

    DiscountedHedgePath path;
    path.value.resize(n);
    path.delta.resize(n);
    path.fair_value.resize(n);

    for (Eigen::Index k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        path.fair_value[k] =
            (k == n - 1)
                ? d0T  // the bond pays its face; the factor tends to 1
                : d0T * pricing::fair_zcb_factor(params, s_bar[i], times[i], maturity);
    }

    path.value[0] = path.fair_value[0];
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        path.delta[k] = pricing::zcb_delta(params, s_bar[i], times[i], maturity, d0T);
        path.value[k + 1] = path.value[k] + path.delta[k] * (s_bar[i + 1] - s_bar[i]);
    }
    path.delta[n - 1] = 0.0;  // paid out; nothing left in the index
    return path;
}

HedgeResult hedge_zcb(const mmm::Params& params, const MarketSeries& series, Month t0, Month T) {
    if (T - t0 < 1) throw InvalidWindow("hedge_zcb: maturity must be at least one month out");
    const std::size_t lo = series.index_of(t0);
    const std::size_t hi = series.index_of(T);
    const std::size_t n = hi - lo + 1;

    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i)
        times[i] = series.year_fraction(series.dates()[lo + i]);
    const std::span<const double> s_bar(series.discounted_index().data() + lo, n);

    const double d0T = savings_bond(series, t0, T);
    const DiscountedHedgePath core = hedge_discounted(params, d0T, times, s_bar);

    HedgeResult r;
    r.dates.assign(series.dates().begin() + static_cast<std::ptrdiff_t>(lo),
                   series.dates().begin() + static_cast<std::ptrdiff_t>(hi + 1));
    const auto en = static_cast<Eigen::Index>(n);
    r.portfolio_value.resize(en);
    r.index_fraction.resize(en);
    r.benchmarked_pnl.resize(en);
    r.delta_units = core.delta;

    const double s0_t0 = series.savings_at(t0);
    for (Eigen::Index k = 0; k < en; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const double savings_ratio = series.savings_account()[static_cast<Eigen::Index>(lo + i)] / s0_t0;
        r.portfolio_value[k] = core.value[k] * savings_ratio;
        r.index_fraction[k] = core.delta[k] * s_bar[i] / core.value[k];
        r.benchmarked_pnl[k] = (core.value[k] - core.fair_value[k]) / (s_bar[i] * s0_t0);
    }
    r.terminal_pnl = r.portfolio_value[en - 1] - 1.0;
    return r;
}

std::vector<BacktestSummary> backtest_zcb(const mmm::Params& params, const MarketSeries& series,
                                          MonthRange window, std::span<const int> tenors) {
    window.validate();
    series.index_of(window.from);
    series.index_of(window.to);

    std::vector<BacktestSummary> out;
    out.reserve(tenors.size());
    for (int tenor : tenors) {
        if (tenor < 1) throw DomainError("backtest_zcb: tenor must be at least one year");
        const int tenor_months = 12 * tenor;
        const int n_windows = window.months() - tenor_months + 1;
        if (n_windows < 1)
            throw EmptyBacktest("backtest_zcb: no " + std::to_string(tenor) +
                                "-year window fits between " + window.from.str() + " and " +
                                window.to.str());

        std::vector<double> d_values(static_cast<std::size_t>(n_windows));
        std::vector<double> p_values(static_cast<std::size_t>(n_windows));
        std::vector<double> pnls(static_cast<std::size_t>(n_windows));

        detail::parallel_for(static_cast<std::size_t>(n_windows), [&](std::size_t w) {
            const Month start = window.from + static_cast<int>(w);
            const Month maturity = start + tenor_months;
            const std::size_t lo = series.index_of(start);
            const std::size_t n = static_cast<std::size_t>(tenor_months) + 1;

            std::vector<double> times(n);
            for (std::size_t i = 0; i < n; ++i)
                times[i] = series.year_fraction(series.dates()[lo + i]);
            const std::span<const double> s_bar(series.discounted_index().data() + lo, n);

            const double d = savings_bond(series, start, maturity);
            const DiscountedHedgePath core = hedge_discounted(params, d, times, s_bar);
            d_values[w] = d;
            p_values[w] = core.fair_value[0];
            // Terminal dollars: V_T = V̄_T S0_T / S0_t0 = V̄_T / D(t0,T).
            pnls[w] = core.value[core.value.size() - 1] / d - 1.0;
        });

        BacktestSummary row;
        row.tenor_years = tenor;
        row.n_windows = n_windows;
        row.mean_d = mean_of(d_values);
        row.mean_p = mean_of(p_values);
        row.mean_diff = row.mean_d - row.mean_p;
        row.mean_pnl = mean_of(pnls);
        row.std_pnl = sample_std(pnls, row.mean_pnl);
        out.push_back(row);
    }
    return out;
}

AnnuityBacktest backtest_cash_annuity(const mmm::Params& params, const MarketSeries& series,
                                      MonthRange start_window, int deferral_years,
                                      int payment_years) {
    start_window.validate();
    if (deferral_years < 0) throw DomainError("backtest_cash_annuity: negative deferral");
    if (payment_years < 1) throw DomainError("backtest_cash_annuity: need at least one payment");
    series.index_of(start_window.from);
    series.index_of(start_window.to);

    const int n_starts = start_window.months() + 1;
    if (n_starts < 1) throw EmptyBacktest("backtest_cash_annuity: empty start window");

    // Annual payments from the deferral horizon; a zero deferral means the
    // first payment falls at the next observation rather than at purchase.
    const int first_offset_months = std::max(1, 12 * deferral_years);

    std::vector<double> rw(static_cast<std::size_t>(n_starts));
    detail::parallel_for(static_cast<std::size_t>(n_starts), [&](std::size_t w) {
        const Month t0 = start_window.from + static_cast<int>(w);
        const double s_bar = series.discounted_index_at(t0);
        const double tau0 = series.year_fraction(t0);
        double sum = 0.0;
        for (int j = 0; j < payment_years; ++j) {
            const double tau_pay = tau0 + (first_offset_months + 12 * j) / 12.0;
            sum += pricing::fair_zcb_factor(params, s_bar, tau0, tau_pay);
        }
        rw[w] = sum;
    });

    AnnuityBacktest out;
    out.n_windows = n_starts;
    out.rn_value = static_cast<double>(payment_years);
    out.mean_rw = mean_of(rw);
    out.std_rw = sample_std(rw, out.mean_rw);

    std::vector<double> savings(rw.size());
    for (std::size_t i = 0; i < rw.size(); ++i)
        savings[i] = 100.0 * (1.0 - rw[i] / out.rn_value);
    out.mean_saving_pct = mean_of(savings);
    out.std_saving_pct = sample_std(savings, out.mean_saving_pct);
    return out;
}

}  // namespace rwval::hedge

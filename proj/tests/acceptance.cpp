// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-8 are data-independent property checks; criteria 9-16
// reproduce the historical study and require the monthly market file
// (default data/shiller_monthly.csv, override with --data or
// RWVAL_SHILLER_CSV). Absent data they are reported as SKIP.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rwval/calibration.hpp"
#include "rwval/hedging.hpp"
#include "rwval/market_data.hpp"
#include "rwval/mmm.hpp"
#include "rwval/pricing.hpp"
#include "rwval/special_functions.hpp"

using namespace rwval;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

void skip(int criterion, const std::string& detail) {
    std::printf("SKIP criterion %2d: %s\n", criterion, detail.c_str());
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Parameters of the historical study, used by the fixed-parameter reproductions.
const mmm::Params kFitted{0.005860, 0.049496, {}, {}};
const double kGbmTheta = 0.130386814;

// ---------------------------------------------------------------------- C1
void criterion_1_inverse_moment_identities() {
    bool ok = true;
    std::string worst;
    const std::vector<double> lambdas{0.25, 1.0, 4.0, 16.0};
    const std::vector<double> xs{0.1, 1.0, 5.0, 50.0};
    std::mt19937_64 rng(1001);
    std::normal_distribution<double> normal;

    for (double lam : lambdas) {
        const Ncx2Params p{4, lam};
        oracle::MeanAccumulator total;
        std::vector<oracle::MeanAccumulator> below(xs.size()), above(xs.size());
        for (long draw = 0; draw < 10000000; ++draw) {
            const double u = oracle::sample_ncx2_4(rng, normal, lam);
            const double v = lam / u;
            total.add(v);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                below[i].add(u < xs[i] ? v : 0.0);
                above[i].add(u >= xs[i] ? v : 0.0);
            }
        }
        if (std::abs(inv_moment(p) - total.mean()) >= 3.0 * total.std_error()) {
            ok = false;
            worst = "E(lambda/U) off at lambda=" + fmt(lam);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double b = inv_moment_below(p, xs[i]);
            const double a = inv_moment_above(p, xs[i]);
            // the 1e-9 floor covers indicator events too rare to sample
            if (std::abs(b - below[i].mean()) >= 3.0 * below[i].std_error() + 1e-9 ||
                std::abs(a - above[i].mean()) >= 3.0 * above[i].std_error() + 1e-9) {
                ok = false;
                worst = "split moment off at lambda=" + fmt(lam) + " x=" + fmt(xs[i]);
            }
            if (std::abs(b + a - inv_moment(p)) > 1e-12) {
                ok = false;
                worst = "additivity broken at lambda=" + fmt(lam) + " x=" + fmt(xs[i]);
            }
        }
    }
    report(1, ok,
           "inverse-moment identities vs 1e7-draw Monte Carlo, 3 s.e., additivity 1e-12" +
               (ok ? std::string() : " [" + worst + "]"));
}

// ---------------------------------------------------------------------- C2
void criterion_2_guarantee_put_mmm() {
    // (lambda, kappa) spanning out/at/in-the-money around the mean lambda+4
    const std::vector<std::pair<double, double>> combos{{2.0, 0.5}, {2.0, 3.0},  {2.0, 6.0},
                                                        {8.0, 12.0}, {8.0, 25.0}, {0.5, 15.0}};
    const mmm::Params params{1.0, 0.05, {}, {}};
    const double T = 1.0;
    const double dphi = mmm::phi_increment(params, 0.0, T);

    bool ok = true;
    std::string worst;
    std::mt19937_64 rng(1002);
    std::normal_distribution<double> normal;
    for (const auto& [lam, kap] : combos) {
        const double s_t = lam * dphi;
        const double strike = kap * dphi;  // guarantee level via s_t0 at rate 0
        const double closed =
            pricing::guarantee_put_expectation_mmm(params, s_t, strike, 0.0, 0.0, T, 0.0);
        oracle::MeanAccumulator mc;
        for (long draw = 0; draw < 1000000; ++draw) {
            const double u = oracle::sample_ncx2_4(rng, normal, lam);
            mc.add(std::max(0.0, s_t / (dphi * u) - s_t / strike));
        }
        if (std::abs(closed - mc.mean()) >= 3.0 * mc.std_error()) {
            ok = false;
            worst = "lambda=" + fmt(lam) + " kappa=" + fmt(kap);
        }
    }
    report(2, ok, "guarantee put closed form vs exact-transition Monte Carlo, 6 moneyness points" +
                      (ok ? std::string() : " [" + worst + "]"));
}

// ---------------------------------------------------------------------- C3
void criterion_3_guarantee_term_bs() {
    struct Case {
        double theta, tau, g_term, ratio;  // ratio = s_t / s_t0
    };
    const std::vector<Case> combos{{0.2, 5.0, 0.25, 1.0},  {0.13, 10.0, 0.5, 1.3},
                                   {0.13, 2.0, 0.1, 0.8},  {0.3, 1.0, -0.2, 1.0},
                                   {0.13, 40.0, 2.0, 1.0}, {0.25, 15.0, 1.0, 0.6}};
    bool ok = true;
    std::string worst;
    std::mt19937_64 rng(1003);
    std::normal_distribution<double> normal;
    for (const auto& c : combos) {
        const calib::GbmParams gbm{c.theta, 0.0, 0.0};
        const double t0 = 0.0, T = c.tau + 1.0, t = 1.0;  // g rate fitted to g_term
        const double g = c.g_term / (T - t0);
        const double s_t0 = 1.0, s_t = c.ratio;
        const double closed = pricing::equity_annuity_term_bs(gbm, s_t, s_t0, t0, t, T, g);
        oracle::MeanAccumulator mc;
        for (long draw = 0; draw < 1000000; ++draw) {
            const double z = normal(rng);
            const double inv_ratio =
                std::exp(-0.5 * c.theta * c.theta * c.tau + c.theta * std::sqrt(c.tau) * z);
            mc.add(std::max(s_t / s_t0, inv_ratio * std::exp(c.g_term)));
        }
        if (std::abs(closed - mc.mean()) >= 3.0 * mc.std_error()) {
            ok = false;
            worst = "theta=" + fmt(c.theta) + " tau=" + fmt(c.tau);
        }
    }
    report(3, ok, "Black-Scholes annuity term vs GBM Monte Carlo, 6 parameter points" +
                      (ok ? std::string() : " [" + worst + "]"));
}

// ---------------------------------------------------------------------- C4
void criterion_4_fair_zcb() {
    bool identity_ok = true;
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 400; ++trial) {
        const double t = 80.0 * u01(rng);
        const double T = t + 1.0 + 80.0 * u01(rng);
        const double s = 0.1 + 6.0 * u01(rng);
        const double direct = pricing::fair_zcb_factor(kFitted, s, t, T);
        const double lambda = s / mmm::phi_increment(kFitted, t, T);
        if (std::abs(direct - inv_moment(Ncx2Params{4, lambda})) > 1e-14 * std::max(direct, 1e-30))
            identity_ok = false;
    }

    // Monte Carlo of D E[S_t / S_T] against the closed form
    const double t = 10.0, T = 45.0, s0 = 1.2;
    const std::vector<double> grid{T};
    const auto paths = mmm::simulate_paths(kFitted, s0, t, grid, 1000000, 1004);
    oracle::MeanAccumulator mc;
    for (int i = 0; i < paths.rows(); ++i) mc.add(s0 / paths(i, 0));
    const double factor = pricing::fair_zcb_factor(kFitted, s0, t, T);
    const bool mc_ok = std::abs(factor - mc.mean()) < 3.0 * mc.std_error();

    report(4, identity_ok && mc_ok,
           "fair bond: inverse-moment identity to 1e-14 and Monte Carlo within 3 s.e." +
               (identity_ok ? std::string() : " [identity]") +
               (mc_ok ? std::string() : " [monte carlo]"));
}

// ---------------------------------------------------------------------- C5
void criterion_5_delta() {
    bool fd_ok = true;
    const double d0T = 0.5;
    for (double t : {0.0, 20.0, 60.0}) {
        for (double dT : {5.0, 25.0, 60.0}) {
            for (double s : {0.4, 1.0, 2.5}) {
                const double T = t + dT;
                const double delta = pricing::zcb_delta(kFitted, s, t, T, d0T);
                const double h = 1e-5;
                const double fd = (pricing::fair_zcb_factor(kFitted, s + h, t, T) -
                                   pricing::fair_zcb_factor(kFitted, s - h, t, T)) /
                                  (2.0 * h) * d0T;
                if (delta >= 3e-5 * d0T) {
                    if (std::abs(delta - fd) > 1e-6 * std::abs(delta)) fd_ok = false;
                } else {
                    // below this the central difference is dominated by the
                    // eps/(2h) cancellation floor; require absolute agreement
                    if (std::abs(delta - fd) > 3e-11 * d0T) fd_ok = false;
                }
            }
        }
    }

    const auto pi = [&](double s, double T) {
        return pricing::zcb_delta(kFitted, s, 0.0, T, d0T) * s /
               (d0T * pricing::fair_zcb_factor(kFitted, s, 0.0, T));
    };
    const bool limits_ok = std::abs(pi(1e-7, 40.0) - 1.0) < 1e-5 && pi(50.0, 0.5) < 1e-10;

    report(5, fd_ok && limits_ok,
           "delta: finite differences to rel 1e-6 at h=1e-5; index fraction limits" +
               (fd_ok ? std::string() : " [fd]") + (limits_ok ? std::string() : " [limits]"));
}

// ---------------------------------------------------------------------- C6
void criterion_6_self_financing_and_pooling() {
    bool sf_ok = true;
    const auto series = fixtures::mmm_series(kFitted, 720, 0.04, 1006);
    for (int start = 0; start < 36; start += 7) {
        const Month t0 = series.first() + start;
        const Month T = t0 + 300 + start;
        const auto r = hedge::hedge_zcb(kFitted, series, t0, T);
        // re-derive the discounted value path from stored deltas
        const std::size_t lo = series.index_of(t0);
        const double d0T = savings_bond(series, t0, T);
        double v = d0T * pricing::fair_zcb_factor(kFitted, series.discounted_index_at(t0),
                                                  series.year_fraction(t0),
                                                  series.year_fraction(T));
        for (std::size_t k = 0; k + 1 < r.dates.size(); ++k) {
            const double s_now = series.discounted_index()[static_cast<Eigen::Index>(lo + k)];
            const double s_next =
                series.discounted_index()[static_cast<Eigen::Index>(lo + k + 1)];
            v += r.delta_units[static_cast<Eigen::Index>(k)] * (s_next - s_now);
            const double stored =
                r.portfolio_value[static_cast<Eigen::Index>(k + 1)] * series.savings_at(t0) /
                series.savings_account()[static_cast<Eigen::Index>(lo + k + 1)];
            if (std::abs(v - stored) > 4.0 * 1e-16 * std::abs(v)) sf_ok = false;
        }
    }

    bool pool_ok = true;
    std::mt19937_64 rng(1006);
    std::uniform_real_distribution<double> u(0.0, 80.0);
    std::uniform_int_distribution<int> count(0, 500);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> taus(static_cast<std::size_t>(count(rng)));
        for (auto& tau : taus) tau = u(rng);
        const double horizon = u(rng);
        const double ratio = 0.25 + u(rng);
        if (pricing::pooled_payoff_identity(taus, horizon, 0.0, ratio) != ratio) pool_ok = false;
    }

    report(6, sf_ok && pool_ok,
           "self-financing identity to round-off; pooled payoff exact over 1000 draws" +
               (sf_ok ? std::string() : " [self-financing]") +
               (pool_ok ? std::string() : " [pooling]"));
}

// ---------------------------------------------------------------------- C7
void criterion_7_calibration_recovery() {
    std::vector<double> times(2001);
    for (std::size_t i = 0; i < times.size(); ++i) times[i] = static_cast<double>(i) / 12.0;
    const std::vector<double> grid(times.begin() + 1, times.end());

    int ok_mmm = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto m =
            mmm::simulate_paths(kFitted, 1.0, 0.0, grid, 1, 5000 + static_cast<unsigned>(trial));
        std::vector<double> values(times.size());
        values[0] = 1.0;
        for (std::size_t i = 1; i < times.size(); ++i) values[i] = m(0, static_cast<int>(i) - 1);
        try {
            const auto r = calib::fit_mmm(times, values);
            const auto se = *r.params.std_err;
            if (std::abs(r.params.alpha - kFitted.alpha) < 3.0 * se[0] &&
                std::abs(r.params.eta - kFitted.eta) < 3.0 * se[1])
                ++ok_mmm;
        } catch (const Error&) {
        }
    }

    int ok_gbm = 0;
    std::mt19937_64 rng(1007);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(2001);
        values[0] = 1.0;
        for (std::size_t i = 1; i < values.size(); ++i)
            values[i] = values[i - 1] * std::exp(0.5 * kGbmTheta * kGbmTheta / 12.0 +
                                                 kGbmTheta * std::sqrt(1.0 / 12.0) * normal(rng));
        const auto r = calib::fit_gbm(times, values);
        if (std::abs(r.params.theta - kGbmTheta) < 3.0 * r.params.std_err) ++ok_gbm;
    }

    report(7, ok_mmm >= 95 && ok_gbm >= 95,
           "calibration recovery on 2000-step paths: mmm " + std::to_string(ok_mmm) +
               "/100, gbm " + std::to_string(ok_gbm) + "/100 within 3 s.e. (need 95)");
}

// ---------------------------------------------------------------------- C8
void criterion_8_density_normalization() {
    const std::vector<std::pair<double, double>> cases{{1.0, 0.25}, {0.5, 0.05}, {3.0, 1.5}};
    bool ok = true;
    std::string worst;
    for (const auto& [x_t, dphi] : cases) {
        const double mean = x_t + 4.0 * dphi;
        const double sd = dphi * std::sqrt(2.0 * (4.0 + 2.0 * x_t / dphi));
        const double hi = mean + 50.0 * sd;
        const double integral = oracle::integrate(
            [&, xt = x_t, dp = dphi](double u) {
                return u <= 0.0 ? 0.0 : std::exp(mmm::transition_log_density_by_qv(dp, xt, u));
            },
            1e-13, hi, 1e-11);
        if (std::abs(integral - 1.0) > 1e-8) {
            ok = false;
            worst = "x_t=" + fmt(x_t) + " dphi=" + fmt(dphi);
        }
    }
    report(8, ok, "transition density integrates to 1 within 1e-8 at 3 state points" +
                      (ok ? std::string() : " [" + worst + "]"));
}

// ------------------------------------------------------------- C9 ... C16
struct DataContext {
    MarketSeries series;
    calib::Report<mmm::Params> mmm_fit;
    calib::Report<calib::GbmParams> gbm_fit;
};

void criteria_data_dependent(const std::string& path) {
    if (!std::filesystem::exists(path)) {
        for (int c = 9; c <= 16; ++c)
            skip(c, "historical dataset not found at '" + path +
                        "' (tools/fetch_shiller.py downloads and converts it)");
        return;
    }

    const auto series = load_series(path);
    if (series.first() > Month(1871, 1) || series.last() < Month(2017, 3)) {
        for (int c = 9; c <= 16; ++c)
            skip(c, "dataset covers " + series.first().str() + ".." + series.last().str() +
                        ", need 1871-01..2017-03");
        return;
    }
    std::printf("INFO: dataset %s..%s, %zu months (1871-01..2017-03 is 1755)\n",
                series.first().str().c_str(), series.last().str().c_str(), series.size());
    const MonthRange fit_window{Month(1871, 1), Month(1932, 1)};
    const auto mmm_fit = calib::fit_mmm(series, fit_window);
    const auto gbm_fit = calib::fit_gbm(series, fit_window);

    // C9
    {
        const auto& p = mmm_fit.params;
        const bool ok = std::abs(p.alpha - 0.005860) <= 0.10 * 0.005860 &&
                        std::abs(p.eta - 0.049496) <= 0.10 * 0.049496 &&
                        std::abs(*p.log_likelihood - 1028.776695) <= 0.01 * 1028.776695;
        report(9, ok,
               "MMM fit 1871-01..1932-01: alpha=" + fmt(p.alpha) + " eta=" + fmt(p.eta) +
                   " loglik=" + fmt(*p.log_likelihood) +
                   " (targets 0.00586/0.049496/1028.78, tol 10%/10%/1%)");
    }

    // C10
    {
        const auto& g = gbm_fit.params;
        const bool ok = std::abs(g.theta - 0.130387) <= 0.05 * 0.130387 &&
                        std::abs(g.log_likelihood - 1019.842904) <= 0.01 * 1019.842904 &&
                        *mmm_fit.params.log_likelihood > g.log_likelihood;
        report(10, ok,
               "GBM fit: theta=" + fmt(g.theta) + " loglik=" + fmt(g.log_likelihood) +
                   " (targets 0.130387/1019.84, tol 5%/1%; MMM must dominate)");
    }

    const Month t0(1932, 1);
    const Month maturity(2017, 3);

    // C11
    {
        const auto quote = pricing::fair_zcb(kFitted, series, t0, maturity);
        const bool ok = std::abs(quote.savings_bond - 0.026596) <= 0.05 * 0.026596 &&
                        std::abs(quote.fair_bond - 0.000709) <= 0.25 * 0.000709 &&
                        quote.fair_bond / quote.savings_bond < 0.03;
        report(11, ok,
               "ZCB 1932-01 -> 2017-03: D=" + fmt(quote.savings_bond) +
                   " P=" + fmt(quote.fair_bond) + " ratio=" +
                   fmt(quote.fair_bond / quote.savings_bond) +
                   " (targets 0.026596/0.000709, ratio < 0.03)");
    }

    // C12 + C13
    {
        const std::vector<int> tenors{10, 15, 20, 25};
        const auto rows = hedge::backtest_zcb(kFitted, series, MonthRange{t0, maturity}, tenors);
        const double want_d[] = {0.6534, 0.5219, 0.4084, 0.3130};
        const double want_p[] = {0.6468, 0.4931, 0.3479, 0.2294};
        const double want_pnl[] = {-0.0004, -0.0057, -0.0144, -0.0226};
        const double want_std[] = {0.0078, 0.0108, 0.0138, 0.0168};

        bool ok12 = true, ok13 = true;
        std::string detail12, detail13;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (std::abs(rows[i].mean_d - want_d[i]) > 0.10 * want_d[i] ||
                std::abs(rows[i].mean_p - want_p[i]) > 0.10 * want_p[i])
                ok12 = false;
            if (std::abs(rows[i].mean_pnl - want_pnl[i]) > 0.01 ||
                std::abs(rows[i].std_pnl - want_std[i]) > 0.50 * want_std[i])
                ok13 = false;
        }
        const double saving_25 = 100.0 * rows[3].mean_diff / rows[3].mean_d;
        if (std::abs(saving_25 - 27.0) > 5.0) ok12 = false;
        detail12 = "bond table: 25y mean_D=" + fmt(rows[3].mean_d) +
                   " mean_P=" + fmt(rows[3].mean_p) + " saving=" + fmt(saving_25) +
                   "% (targets 0.3130/0.2294/~27%)";
        detail13 = "hedge P&L table: 25y mean=" + fmt(rows[3].mean_pnl) +
                   " std=" + fmt(rows[3].std_pnl) + " (targets -0.0226/0.0168)";
        report(12, ok12, detail12);
        report(13, ok13, detail13);
    }

    // C14
    {
        const auto r = hedge::hedge_zcb(kFitted, series, t0, maturity);
        double max_abs = 0.0;
        for (Eigen::Index i = 0; i < r.benchmarked_pnl.size(); ++i)
            max_abs = std::max(max_abs, std::abs(r.benchmarked_pnl[i]));
        const double terminal = r.portfolio_value[r.portfolio_value.size() - 1];
        const bool ok = max_abs < 1e-5 && terminal >= 0.90;
        report(14, ok,
               "85-year hedge: max |benchmarked P&L|=" + fmt(max_abs) + " terminal=" +
                   fmt(terminal) + " face (need <1e-5 and >=0.90)");
    }

    // C15
    {
        const auto sweep = hedge::backtest_cash_annuity(
            kFitted, series, MonthRange{Month(1871, 1), Month(1932, 1)}, 40, 45);
        const bool ok = std::abs(sweep.mean_rw - 13.672484) <= 0.15 * 13.672484 &&
                        std::abs(sweep.mean_saving_pct - 69.616702) <= 5.0;
        report(15, ok,
               "deferred annuity sweep: mean RW=" + fmt(sweep.mean_rw) + " saving=" +
                   fmt(sweep.mean_saving_pct) + "% (targets 13.67/69.62%)");
    }

    // C16
    {
        pricing::AnnuitySpec spec;
        spec.purchase = t0;
        spec.kind = pricing::AnnuityKind::equity_linked_with_guarantee;
        for (int i = 0; i < 45; ++i) spec.payments.push_back(Month(1972 + i, 1));
        spec.guarantee_rate = kFitted.eta;

        const calib::GbmParams gbm{kGbmTheta, 0.0, 0.0};
        const double v_mmm =
            pricing::equity_annuity_value_mmm(kFitted, series, t0, spec).discounted;
        const double v_bs =
            pricing::equity_annuity_value_bs(gbm, series, t0, spec, kFitted.eta).discounted;

        bool dominated = true;
        for (Month m = t0; m <= Month(1971, 12); m += 1) {
            const double a = pricing::equity_annuity_value_mmm(kFitted, series, m, spec).discounted;
            const double b =
                pricing::equity_annuity_value_bs(gbm, series, m, spec, kFitted.eta).discounted;
            if (!(a < b)) {
                dominated = false;
                break;
            }
        }

        const bool ok = std::abs(v_mmm - 88.853) <= 0.20 * 88.853 &&
                        std::abs(v_bs - 1181.076) <= 0.20 * 1181.076 && dominated;
        report(16, ok,
               "equity annuity with guarantee: MMM=" + fmt(v_mmm) + " BS=" + fmt(v_bs) +
                   " (targets 88.853/1181.076; MMM < BS monthly 1932-1971: " +
                   (dominated ? "yes" : "no") + ")");
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::string data_path = "data/shiller_monthly.csv";
    if (const char* env = std::getenv("RWVAL_SHILLER_CSV")) data_path = env;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--data") == 0) data_path = argv[i + 1];

    criterion_1_inverse_moment_identities();
    criterion_2_guarantee_put_mmm();
    criterion_3_guarantee_term_bs();
    criterion_4_fair_zcb();
    criterion_5_delta();
    criterion_6_self_financing_and_pooling();
    criterion_7_calibration_recovery();
    criterion_8_density_normalization();
    criteria_data_dependent(data_path);

    if (failures > 0) {
        std::printf("ACCEPTANCE: %d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("ACCEPTANCE: all executed criteria passed\n");
    return 0;
}

// rwval: real-world valuation of long-dated bonds and annuities on a
// monthly market series. Subcommands cover calibration, closed-form
// pricing, hedge simulation and historical backtests; every run writes its
// outputs plus a manifest echoing the resolved configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rwval/calibration.hpp"
#include "rwval/hedging.hpp"
#include "rwval/market_data.hpp"
#include "rwval/mmm.hpp"
#include "rwval/pricing.hpp"
#include "rwval/special_functions.hpp"
#include "rwval/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rwval;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string utc_now() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path resolve_data_path(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* dir = std::getenv("RWVAL_DATA_DIR"))
        return fs::path(dir) / "market_monthly.csv";
    throw IoError("no data file: pass --data or set RWVAL_DATA_DIR");
}

struct OutputWriter {
    fs::path dir;
    json manifest_config;
    std::string command;
    std::vector<std::string> outputs;

    explicit OutputWriter(std::string cmd, const std::string& out_dir)
        : dir(out_dir), command(std::move(cmd)) {
        fs::create_directories(dir);
    }

    std::ofstream open(const std::string& name) {
        outputs.push_back(name);
        std::ofstream out(dir / name);
        if (!out) throw IoError("cannot write " + (dir / name).string());
        return out;
    }

    void finish() {
        json manifest;
        manifest["tool"] = "rwval";
        manifest["version"] = kVersion;
        manifest["generated_at"] = utc_now();  // the only non-reproducible line
        manifest["command"] = command;
        manifest["config"] = manifest_config;
        manifest["outputs"] = outputs;
        std::ofstream out(dir / "manifest.json");
        out << manifest.dump(2) << "\n";
    }
};

// Model parameters come either as explicit flags or from an inline fit over
// a date window; the manifest records the resolved values either way.
struct MmmSource {
    double alpha = 0.0;
    double eta = 0.0;
    std::string fit_from, fit_to;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--alpha", alpha, "MMM drift scale (explicit)");
        cmd->add_option("--eta", eta, "MMM net growth rate (explicit)");
        cmd->add_option("--fit-from", fit_from, "calibrate alpha/eta from this month (YYYY-MM)");
        cmd->add_option("--fit-to", fit_to, "calibration window end (YYYY-MM)");
    }

    mmm::Params resolve(const MarketSeries& series, json& config) const {
        mmm::Params p;
        if (!fit_from.empty() || !fit_to.empty()) {
            if (fit_from.empty() || fit_to.empty())
                throw DomainError("--fit-from and --fit-to must be given together");
            const Month window_start = Month::parse(fit_from);
            const auto report =
                calib::fit_mmm(series, MonthRange{window_start, Month::parse(fit_to)});
            // The fit anchors alpha at the window start; pricing measures
            // model time from the first series date.
            p = mmm::re_anchored(report.params,
                                 years_between(series.first(), window_start));
            config["fit_window"] = {{"from", fit_from}, {"to", fit_to}};
            config["fit_converged"] = report.converged;
        } else {
            if (!(alpha > 0.0) || !(eta > 0.0))
                throw DomainError("pass --alpha/--eta or a --fit-from/--fit-to window");
            p.alpha = alpha;
            p.eta = eta;
        }
        config["alpha"] = p.alpha;
        config["eta"] = p.eta;
        return p;
    }
};

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << " = " << value << "\n";
}

std::vector<Month> parse_payments(const std::string& arg) {
    // "first:last:step_months" or a file with one YYYY-MM per line
    const auto c1 = arg.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = arg.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw DomainError("payment range must be first:last:step_months");
        const Month first = Month::parse(arg.substr(0, c1));
        const Month last = Month::parse(arg.substr(c1 + 1, c2 - c1 - 1));
        const int step = std::stoi(arg.substr(c2 + 1));
        if (step < 1) throw DomainError("payment step must be at least one month");
        std::vector<Month> out;
        for (Month m = first; m <= last; m += step) out.push_back(m);
        if (out.empty()) throw DomainError("empty payment range " + arg);
        return out;
    }
    std::ifstream in(arg);
    if (!in) throw IoError("cannot open payment file '" + arg + "'");
    std::vector<Month> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        out.push_back(Month::parse(line));
    }
    if (out.empty()) throw IoError("no payment dates in '" + arg + "'");
    return out;
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int run_calibrate(const std::string& model, const std::string& data, const std::string& from,
                  const std::string& to, double tol, int max_iter, const std::string& out_dir) {
    const auto series = load_series(resolve_data_path(data));
    const MonthRange window{Month::parse(from), Month::parse(to)};

    OutputWriter writer("calibrate", out_dir);
    writer.manifest_config = {{"model", model},
                              {"data", resolve_data_path(data).string()},
                              {"from", from},
                              {"to", to},
                              {"tol", tol},
                              {"max_iter", max_iter}};

    if (model == "mmm") {
        calib::FitOptions options;
        options.rel_tol = tol;
        options.max_iter = max_iter;
        const auto report = calib::fit_mmm(series, window, options);
        const auto& p = report.params;
        const auto se = p.std_err.value_or(std::array<double, 2>{0.0, 0.0});

        print_kv("model", "mmm");
        print_kv("window", from + ".." + to);
        print_kv("alpha", fmt(p.alpha));
        print_kv("alpha_std_err", fmt(se[0]));
        print_kv("eta", fmt(p.eta));
        print_kv("eta_std_err", fmt(se[1]));
        print_kv("log_likelihood", fmt(p.log_likelihood.value_or(0.0)));
        print_kv("iterations", std::to_string(report.iterations));
        print_kv("converged", report.converged ? "true" : "false");
        print_kv("initial_alpha", fmt(report.initial_guess[0]));
        print_kv("initial_eta", fmt(report.initial_guess[1]));

        auto out = writer.open("calibration_mmm.csv");
        out << "model,from,to,alpha,alpha_std_err,eta,eta_std_err,log_likelihood,iterations,"
               "converged\n";
        out << "mmm," << from << "," << to << "," << fmt(p.alpha) << "," << fmt(se[0]) << ","
            << fmt(p.eta) << "," << fmt(se[1]) << "," << fmt(p.log_likelihood.value_or(0.0))
            << "," << report.iterations << "," << (report.converged ? "true" : "false") << "\n";
    } else if (model == "gbm") {
        const auto report = calib::fit_gbm(series, window);
        const auto& p = report.params;

        print_kv("model", "gbm");
        print_kv("window", from + ".." + to);
        print_kv("theta", fmt(p.theta));
        print_kv("theta_std_err", fmt(p.std_err));
        print_kv("log_likelihood", fmt(p.log_likelihood));

        auto out = writer.open("calibration_gbm.csv");
        out << "model,from,to,theta,theta_std_err,log_likelihood\n";
        out << "gbm," << from << "," << to << "," << fmt(p.theta) << "," << fmt(p.std_err) << ","
            << fmt(p.log_likelihood) << "\n";
    } else {
        throw DomainError("unknown model '" + model + "' (expected mmm or gbm)");
    }
    writer.finish();
    return 0;
}

int run_price_zcb(const std::string& data, const std::string& t_str, const std::string& T_str,
                  const MmmSource& source, std::optional<double> flat_rate,
                  const std::string& out_dir) {
    const auto series = load_series(resolve_data_path(data));

    OutputWriter writer("price-zcb", out_dir);
    writer.manifest_config = {{"data", resolve_data_path(data).string()},
                              {"t", t_str},
                              {"T", T_str}};
    if (flat_rate) writer.manifest_config["flat_rate"] = *flat_rate;
    const auto params = source.resolve(series, writer.manifest_config);

    const auto quote =
        pricing::fair_zcb(params, series, Month::parse(t_str), Month::parse(T_str), flat_rate);

    print_kv("t", t_str);
    print_kv("T", T_str);
    print_kv("savings_bond", fmt(quote.savings_bond));
    print_kv("fair_bond", fmt(quote.fair_bond));
    print_kv("fair_to_savings_ratio", fmt(quote.fair_bond / quote.savings_bond));
    print_kv("benchmarked_fair", fmt(quote.benchmarked_fair));
    print_kv("lambda", fmt(quote.lambda));

    auto out = writer.open("zcb_quote.csv");
    out << "t,T,savings_bond,fair_bond,benchmarked_fair,lambda\n";
    out << t_str << "," << T_str << "," << fmt(quote.savings_bond) << ","
        << fmt(quote.fair_bond) << "," << fmt(quote.benchmarked_fair) << ","
        << fmt(quote.lambda) << "\n";
    writer.finish();
    return 0;
}

int run_hedge(const std::string& data, const std::string& t0_str, const std::string& T_str,
              const MmmSource& source, const std::string& out_dir) {
    const auto series = load_series(resolve_data_path(data));

    OutputWriter writer("hedge", out_dir);
    writer.manifest_config = {{"data", resolve_data_path(data).string()},
                              {"t0", t0_str},
                              {"T", T_str}};
    const auto params = source.resolve(series, writer.manifest_config);

    const Month t0 = Month::parse(t0_str);
    const Month T = Month::parse(T_str);
    const auto result = hedge::hedge_zcb(params, series, t0, T);

    double max_abs_bpnl = 0.0;
    for (Eigen::Index i = 0; i < result.benchmarked_pnl.size(); ++i)
        max_abs_bpnl = std::max(max_abs_bpnl, std::abs(result.benchmarked_pnl[i]));

    print_kv("t0", t0_str);
    print_kv("T", T_str);
    print_kv("initial_fair_value", fmt(result.portfolio_value[0]));
    print_kv("initial_savings_bond", fmt(savings_bond(series, t0, T)));
    print_kv("terminal_portfolio", fmt(result.portfolio_value[result.portfolio_value.size() - 1]));
    print_kv("terminal_pnl", fmt(result.terminal_pnl));
    print_kv("max_abs_benchmarked_pnl", fmt(max_abs_bpnl));

    auto out = writer.open("hedge_path.csv");
    out << "date,portfolio_value,delta_units,index_fraction,benchmarked_pnl\n";
    for (std::size_t i = 0; i < result.dates.size(); ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        out << result.dates[i].str() << "," << fmt(result.portfolio_value[k]) << ","
            << fmt(result.delta_units[k]) << "," << fmt(result.index_fraction[k]) << ","
            << fmt(result.benchmarked_pnl[k]) << "\n";
    }
    writer.finish();
    return 0;
}

int run_backtest(const std::string& data, const std::string& from, const std::string& to,
                 const std::string& tenors_csv, const MmmSource& source,
                 const std::string& out_dir) {
    const auto series = load_series(resolve_data_path(data));

    OutputWriter writer("backtest", out_dir);
    writer.manifest_config = {{"data", resolve_data_path(data).string()},
                              {"from", from},
                              {"to", to},
                              {"tenors", tenors_csv}};
    const auto params = source.resolve(series, writer.manifest_config);

    std::vector<int> tenors;
    {
        std::string token;
        std::istringstream in(tenors_csv);
        while (std::getline(in, token, ',')) tenors.push_back(std::stoi(token));
    }

    const auto rows = hedge::backtest_zcb(
        params, series, MonthRange{Month::parse(from), Month::parse(to)}, tenors);

    // terminal P&L is in nominal dollars at maturity against the 1-dollar face
    auto out = writer.open("backtest_zcb.csv");
    out << "tenor_years,mean_d,mean_p,mean_diff,mean_pnl,std_pnl,n_windows\n";
    for (const auto& row : rows) {
        out << row.tenor_years << "," << fmt(row.mean_d) << "," << fmt(row.mean_p) << ","
            << fmt(row.mean_diff) << "," << fmt(row.mean_pnl) << "," << fmt(row.std_pnl) << ","
            << row.n_windows << "\n";
        std::cout << "tenor " << row.tenor_years << "y: mean_D=" << fmt(row.mean_d)
                  << " mean_P=" << fmt(row.mean_p) << " mean_diff=" << fmt(row.mean_diff)
                  << " mean_pnl=" << fmt(row.mean_pnl) << " std_pnl=" << fmt(row.std_pnl)
                  << " windows=" << row.n_windows << "\n";
    }
    writer.finish();
    return 0;
}

int run_backtest_annuity(const std::string& data, const std::string& from, const std::string& to,
                         int deferral, int payments, const MmmSource& source,
                         const std::string& out_dir) {
    const auto series = load_series(resolve_data_path(data));

    OutputWriter writer("backtest-annuity", out_dir);
    writer.manifest_config = {{"data", resolve_data_path(data).string()},
                              {"from", from},
                              {"to", to},
                              {"deferral_years", deferral},
                              {"payment_years", payments}};
    const auto params = source.resolve(series, writer.manifest_config);

    const auto sweep = hedge::backtest_cash_annuity(
        params, series, MonthRange{Month::parse(from), Month::parse(to)}, deferral, payments);

    print_kv("n_windows", std::to_string(sweep.n_windows));
    print_kv("rn_value", fmt(sweep.rn_value));
    print_kv("mean_rw", fmt(sweep.mean_rw));
    print_kv("std_rw", fmt(sweep.std_rw));
    print_kv("mean_saving_pct", fmt(sweep.mean_saving_pct));
    print_kv("std_saving_pct", fmt(sweep.std_saving_pct));

    auto out = writer.open("backtest_annuity.csv");
    out << "deferral_years,payment_years,n_windows,rn_value,mean_rw,std_rw,mean_saving_pct,"
           "std_saving_pct\n";
    out << deferral << "," << payments << "," << sweep.n_windows << "," << fmt(sweep.rn_value)
        << "," << fmt(sweep.mean_rw) << "," << fmt(sweep.std_rw) << ","
        << fmt(sweep.mean_saving_pct) << "," << fmt(sweep.std_saving_pct) << "\n";
    writer.finish();
    return 0;
}

int run_annuity(const std::string& data, const std::string& kind, const std::string& t0_str,
                const std::string& payments_arg, const std::string& val_from,
                const std::string& val_to, const std::string& model, const MmmSource& source,
                double theta, std::optional<double> guarantee_rate, const std::string& out_dir) {
    const auto series = load_series(resolve_data_path(data));

    OutputWriter writer("annuity", out_dir);
    writer.manifest_config = {{"data", resolve_data_path(data).string()},
                              {"kind", kind},
                              {"t0", t0_str},
                              {"payments", payments_arg},
                              {"model", model}};

    pricing::AnnuitySpec spec;
    spec.purchase = Month::parse(t0_str);
    spec.payments = parse_payments(payments_arg);
    spec.guarantee_rate = guarantee_rate;
    if (guarantee_rate) writer.manifest_config["guarantee_rate"] = *guarantee_rate;

    const bool want_mmm = model == "mmm" || model == "both";
    const bool want_bs = model == "bs" || model == "both";
    if (!want_mmm && !want_bs)
        throw DomainError("unknown model '" + model + "' (expected mmm, bs or both)");

    // The MMM parameters also supply the default guarantee rate for BS
    // runs; the cash kind always needs them for the real-world leg.
    mmm::Params params;
    if (kind == "cash" || want_mmm || !guarantee_rate)
        params = source.resolve(series, writer.manifest_config);
    calib::GbmParams gbm;
    if (want_bs) {
        if (!(theta > 0.0)) throw DomainError("--theta required for the Black-Scholes model");
        gbm.theta = theta;
        writer.manifest_config["theta"] = theta;
    }

    const Month first_valuation = val_from.empty() ? spec.purchase : Month::parse(val_from);
    const Month default_last = std::min(series.last(), spec.payments.front() - 1);
    const Month last_valuation = val_to.empty() ? default_last : Month::parse(val_to);
    if (last_valuation < first_valuation) throw InvalidWindow("valuation range is empty");
    writer.manifest_config["valuation_from"] = first_valuation.str();
    writer.manifest_config["valuation_to"] = last_valuation.str();

    std::ofstream out;
    if (kind == "cash") {
        spec.kind = pricing::AnnuityKind::cash_linked;
        out = writer.open("annuity_cash.csv");
        out << "date,discounted_rw,discounted_rn\n";
        for (Month m = first_valuation; m <= last_valuation; m += 1) {
            const auto [rw, rn] = pricing::cash_annuity_value(params, series, m, spec);
            out << m.str() << "," << fmt(rw) << "," << fmt(rn) << "\n";
        }
    } else if (kind == "equity") {
        spec.kind = pricing::AnnuityKind::equity_linked_with_guarantee;
        const double g = guarantee_rate.value_or(params.eta);
        out = writer.open("annuity_equity.csv");
        out << "date";
        if (want_mmm) out << ",discounted_mmm";
        if (want_bs) out << ",discounted_bs";
        out << "\n";
        for (Month m = first_valuation; m <= last_valuation; m += 1) {
            out << m.str();
            if (want_mmm)
                out << ","
                    << fmt(pricing::equity_annuity_value_mmm(params, series, m, spec).discounted);
            if (want_bs)
                out << ","
                    << fmt(pricing::equity_annuity_value_bs(gbm, series, m, spec, g).discounted);
            out << "\n";
        }
    } else {
        throw DomainError("unknown kind '" + kind + "' (expected cash or equity)");
    }

    std::cout << "wrote " << writer.outputs.back() << " ("
              << (last_valuation - first_valuation) + 1 << " valuation dates)\n";
    writer.finish();
    return 0;
}

int run_simulate(double alpha, double eta, double x0, double t0, double horizon,
                 int steps_per_year, int n_paths, std::uint64_t seed,
                 const std::string& out_dir) {
    const mmm::Params params{alpha, eta, {}, {}};
    if (!(horizon > 0.0)) throw DomainError("--horizon must be positive");
    if (steps_per_year < 1) throw DomainError("--steps-per-year must be at least 1");

    const int steps = static_cast<int>(horizon * steps_per_year + 0.5);
    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k)
        grid[static_cast<std::size_t>(k)] = t0 + (k + 1) * horizon / static_cast<double>(steps);

    const auto paths = mmm::simulate_paths(params, x0, t0, grid, n_paths, seed);

    OutputWriter writer("simulate", out_dir);
    writer.manifest_config = {{"alpha", alpha},     {"eta", eta},
                              {"x0", x0},           {"t0", t0},
                              {"horizon", horizon}, {"steps_per_year", steps_per_year},
                              {"paths", n_paths},   {"seed", seed}};

    auto out = writer.open("paths.csv");
    out << "path";
    for (double t : grid) out << "," << fmt(t);
    out << "\n";
    for (int p = 0; p < n_paths; ++p) {
        out << p;
        for (int k = 0; k < steps; ++k) out << "," << fmt(paths(p, k));
        out << "\n";
    }
    std::cout << "wrote paths.csv (" << n_paths << " paths, " << steps << " steps)\n";
    writer.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"real-world valuation engine for long-dated bonds and annuities"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string data, out_dir = "out";
    app.add_option("--data", data, "market series CSV (date,index,short_rate)");
    app.add_option("--out-dir", out_dir, "output directory (default: out)");

    auto* cal = app.add_subcommand("calibrate", "fit model parameters by maximum likelihood");
    std::string cal_model, cal_from, cal_to;
    double cal_tol = 1e-8;
    int cal_max_iter = 100;
    cal->add_option("--model", cal_model, "mmm or gbm")->required();
    cal->add_option("--from", cal_from, "window start YYYY-MM")->required();
    cal->add_option("--to", cal_to, "window end YYYY-MM")->required();
    cal->add_option("--tol", cal_tol, "relative convergence tolerance");
    cal->add_option("--max-iter", cal_max_iter, "iteration cap");

    auto* zcb = app.add_subcommand("price-zcb", "fair vs savings zero coupon bond");
    std::string zcb_t, zcb_T;
    double zcb_flat_rate = std::nan("");
    MmmSource zcb_src;
    zcb->add_option("--t", zcb_t, "valuation month YYYY-MM")->required();
    zcb->add_option("--T", zcb_T, "maturity month YYYY-MM")->required();
    zcb->add_option("--flat-rate", zcb_flat_rate, "flat rate beyond the data end");
    zcb_src.add_flags(zcb);

    auto* hed = app.add_subcommand("hedge", "self-financing monthly hedge of a fair bond");
    std::string hed_t0, hed_T;
    MmmSource hed_src;
    hed->add_option("--t0", hed_t0, "inception YYYY-MM")->required();
    hed->add_option("--T", hed_T, "maturity YYYY-MM")->required();
    hed_src.add_flags(hed);

    auto* bt = app.add_subcommand("backtest", "bond hedge backtest over all monthly windows");
    std::string bt_from, bt_to, bt_tenors = "10,15,20,25";
    MmmSource bt_src;
    bt->add_option("--from", bt_from, "window start YYYY-MM")->required();
    bt->add_option("--to", bt_to, "window end YYYY-MM")->required();
    bt->add_option("--tenors", bt_tenors, "comma-separated tenor years");
    bt_src.add_flags(bt);

    auto* bta = app.add_subcommand("backtest-annuity", "deferred cash annuity value sweep");
    std::string bta_from, bta_to;
    int bta_deferral = 40, bta_payments = 45;
    MmmSource bta_src;
    bta->add_option("--from", bta_from, "first purchase month YYYY-MM")->required();
    bta->add_option("--to", bta_to, "last purchase month YYYY-MM")->required();
    bta->add_option("--deferral", bta_deferral, "years until the first payment");
    bta->add_option("--payments", bta_payments, "number of annual payments");
    bta_src.add_flags(bta);

    auto* ann = app.add_subcommand("annuity", "per-month discounted annuity values");
    std::string ann_kind, ann_t0, ann_payments, ann_from, ann_to, ann_model = "mmm";
    double ann_theta = 0.0, ann_guarantee = std::nan("");
    MmmSource ann_src;
    ann->add_option("--kind", ann_kind, "cash or equity")->required();
    ann->add_option("--t0", ann_t0, "purchase month YYYY-MM")->required();
    ann->add_option("--payments", ann_payments,
                    "payment dates: first:last:step_months or a file")
        ->required();
    ann->add_option("--valuation-from", ann_from, "first valuation month");
    ann->add_option("--valuation-to", ann_to, "last valuation month");
    ann->add_option("--model", ann_model, "mmm, bs or both (equity kind)");
    ann->add_option("--theta", ann_theta, "GBM volatility for the BS model");
    ann->add_option("--guarantee-rate", ann_guarantee,
                    "guarantee growth rate (default: calibrated eta)");
    ann_src.add_flags(ann);

    auto* sim = app.add_subcommand("simulate", "exact transition sampling of the model");
    double sim_alpha = 0.0, sim_eta = 0.0, sim_x0 = 1.0, sim_t0 = 0.0, sim_horizon = 10.0;
    int sim_spy = 12, sim_paths = 100;
    std::uint64_t sim_seed = 1;
    sim->add_option("--alpha", sim_alpha, "drift scale")->required();
    sim->add_option("--eta", sim_eta, "net growth rate")->required();
    sim->add_option("--x0", sim_x0, "initial discounted index");
    sim->add_option("--t0", sim_t0, "start time in model years");
    sim->add_option("--horizon", sim_horizon, "years to simulate");
    sim->add_option("--steps-per-year", sim_spy, "sampling frequency");
    sim->add_option("--paths", sim_paths, "number of paths");
    sim->add_option("--seed", sim_seed, "random seed");

    // accept --data/--out-dir after the subcommand as well
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*cal)
            return run_calibrate(cal_model, data, cal_from, cal_to, cal_tol, cal_max_iter,
                                 out_dir);
        if (*zcb)
            return run_price_zcb(
                data, zcb_t, zcb_T, zcb_src,
                std::isnan(zcb_flat_rate) ? std::nullopt : std::optional<double>(zcb_flat_rate),
                out_dir);
        if (*hed) return run_hedge(data, hed_t0, hed_T, hed_src, out_dir);
        if (*bt) return run_backtest(data, bt_from, bt_to, bt_tenors, bt_src, out_dir);
        if (*bta)
            return run_backtest_annuity(data, bta_from, bta_to, bta_deferral, bta_payments,
                                        bta_src, out_dir);
        if (*ann)
            return run_annuity(
                data, ann_kind, ann_t0, ann_payments, ann_from, ann_to, ann_model, ann_src,
                ann_theta,
                std::isnan(ann_guarantee) ? std::nullopt : std::optional<double>(ann_guarantee),
                out_dir);
        if (*sim)
            return run_simulate(sim_alpha, sim_eta, sim_x0, sim_t0, sim_horizon, sim_spy,
                                sim_paths, sim_seed, out_dir);
    } catch (const Error& e) {
        std::cerr << "error [" << e.category() << "]: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#include "rwval/calibration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <sstream>

namespace rwval::calib {

namespace {

struct Surrogate {
    bool concave = false;
    double step_u = 0.0;  // surrogate maximum offset from the grid center,
    double step_v = 0.0;  // in grid-step units
    Eigen::Matrix2d hessian;  // d^2 l / d(alpha,eta)^2 implied by the fit
    double center_value = 0.0;
};

/// Evaluate the log likelihood on the 5x5 grid around (a, e) and
/// least-squares fit q(u,v) = c0 u^2 + c1 uv + c2 v^2 + c3 u + c4 v + c5
/// in centered grid coordinates. The design matrix is fixed, so the fit is
/// a plain 25x6 solve.
Surrogate fit_surrogate(const std::function<double(double, double)>& loglik, double a, double e,
                        double da, double de, std::vector<GridEval>* history) {
    Eigen::Matrix<double, 25, 6> design;
    Eigen::Matrix<double, 25, 1> values;
    int row = 0;
    for (int i = -2; i <= 2; ++i) {
        for (int j = -2; j <= 2; ++j, ++row) {
            const double u = i;
            const double v = j;
            design.row(row) << u * u, u * v, v * v, u, v, 1.0;
            values(row) = loglik(a + i * da, e + j * de);
            if (history) history->push_back({a + i * da, e + j * de, values(row)});
        }
    }
    const Eigen::Matrix<double, 6, 1> c = design.colPivHouseholderQr().solve(values);

    Surrogate s;
    Eigen::Matrix2d h_grid;
    h_grid << 2.0 * c(0), c(1), c(1), 2.0 * c(2);
    s.concave = h_grid(0, 0) < 0.0 && h_grid.determinant() > 0.0;
    if (s.concave) {
        const Eigen::Vector2d step = h_grid.ldlt().solve(Eigen::Vector2d(-c(3), -c(4)));
        s.step_u = step(0);
        s.step_v = step(1);
    }
    s.hessian << h_grid(0, 0) / (da * da), h_grid(0, 1) / (da * de), h_grid(1, 0) / (da * de),
        h_grid(1, 1) / (de * de);
    s.center_value = c(5);
    return s;
}

void check_grid(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size())
        throw DomainError("calibration: times and values differ in length");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw InvalidWindow("calibration: times must increase strictly");
    for (double v : values)
        if (!(v > 0.0)) throw DomainError("calibration: discounted index must stay positive");
}

}  // namespace

Eigen::ArrayXd empirical_qv_sqrt(std::span<const double> values) {
    if (values.size() < 2)
        throw InsufficientData("empirical_qv_sqrt: need at least two observations");
    Eigen::ArrayXd qv(static_cast<Eigen::Index>(values.size()));
    qv[0] = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !(values[i - 1] > 0.0))
            throw DomainError("empirical_qv_sqrt: values must be positive");
        const double d = std::sqrt(values[i]) - std::sqrt(values[i - 1]);
        qv[static_cast<Eigen::Index>(i)] = qv[static_cast<Eigen::Index>(i - 1)] + d * d;
    }
    return qv;
}

Eigen::ArrayXd empirical_qv_sqrt(const MarketSeries& series, MonthRange window) {
    window.validate();
    const std::size_t lo = series.index_of(window.from);
    const std::size_t hi = series.index_of(window.to);
    return empirical_qv_sqrt(
        std::span<const double>(series.discounted_index().data() + lo, hi - lo + 1));
}

std::array<double, 2> initial_estimates(std::span<const double> times,
                                        std::span<const double> values) {
    check_grid(times, values);
    if (times.size() < 4)
        throw InsufficientData("initial_estimates: need at least four observations");

    const Eigen::ArrayXd qv = empirical_qv_sqrt(values);
    const std::size_t transitions = times.size() - 1;
    const std::size_t k = transitions / 2;
    const double t_k = times[k] - times[0];
    const double qv_k = qv[static_cast<Eigen::Index>(k)];
    const double qv_2k = qv[static_cast<Eigen::Index>(2 * k)];

    if (!(qv_k > 0.0))
        throw InitializationFailure("initial_estimates: no quadratic variation in half sample");
    const double ratio = qv_2k / qv_k;
    if (!(ratio > 2.0))
        throw InitializationFailure(
            "initial_estimates: quadratic-variation ratio " + std::to_string(ratio) +
            " <= 2, exponential growth of the clock not identifiable");

    const double eta0 = std::log(ratio - 1.0) / t_k;
    const double alpha0 = qv_k * 4.0 * eta0 / std::expm1(eta0 * t_k);
    return {alpha0, eta0};
}

std::array<double, 2> initial_estimates(const MarketSeries& series, MonthRange window) {
    window.validate();
    const std::size_t lo = series.index_of(window.from);
    const std::size_t hi = series.index_of(window.to);
    const std::size_t n = hi - lo + 1;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i) / 12.0;
    return initial_estimates(times,
                             std::span<const double>(series.discounted_index().data() + lo, n));
}

Report<mmm::Params> fit_mmm(std::span<const double> times, std::span<const double> values,
                            const FitOptions& options) {
    check_grid(times, values);
    if (times.size() < 2) throw InsufficientData("fit_mmm: need at least two observations");

    const std::array<double, 2> start =
        options.initial ? *options.initial : initial_estimates(times, values);
    double a = start[0];
    double e = start[1];
    if (!(a > 0.0) || !(e > 0.0))
        throw InitializationFailure("fit_mmm: initial estimates must be positive");

    // Likelihood with the clock anchored at the first observation.
    std::vector<double> shifted(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) shifted[i] = times[i] - times[0];
    const auto loglik = [&](double alpha, double eta) {
        return mmm::path_log_likelihood(mmm::Params{alpha, eta, {}, {}}, shifted, values);
    };

    Report<mmm::Params> report;
    report.initial_guess = start;
    if (options.keep_grid_history) report.grid_history.emplace();
    std::vector<GridEval>* history =
        options.keep_grid_history ? &*report.grid_history : nullptr;

    double ll_center = loglik(a, e);
    // The grid step tracks the current center (da = a/4) and halves when the
    // surrogate loses concavity or the likelihood fails to ascend; the
    // halving persists so later iterates keep the finer trust region.
    double scale = 1.0;
    int shrinks = 0;
    bool stalled = false;

    while (report.iterations < options.max_iter && !report.converged && !stalled) {
        const double da = scale * a / 4.0;
        const double de = scale * e / 4.0;
        const Surrogate s = fit_surrogate(loglik, a, e, da, de, history);

        if (!s.concave) {
            if (shrinks++ >= options.max_shrink) {
                std::ostringstream msg;
                msg << "fit_mmm: surrogate not concave at alpha=" << a << " eta=" << e
                    << " grid step (" << da << ", " << de << ") after " << shrinks - 1
                    << " shrinks";
                throw SurrogateNotConcave(msg.str());
            }
            scale *= 0.5;
            continue;
        }

        const double a_next = a + s.step_u * da;
        const double e_next = e + s.step_v * de;
        if (!(a_next > 0.0) || !(e_next > 0.0)) {
            std::ostringstream msg;
            msg << "fit_mmm: iterate left the positive orthant (alpha=" << a_next
                << ", eta=" << e_next << ")";
            throw DivergedEstimate(msg.str());
        }

        // Fixed point: the surrogate maximum already sits on the center.
        const double proposal =
            std::max(std::abs(a_next - a) / a, std::abs(e_next - e) / e);
        if (proposal < options.rel_tol) {
            report.converged = true;
            break;
        }

        const double ll_next = loglik(a_next, e_next);
        if (ll_next < ll_center) {
            // Overshoot: the regional quadratic promised more than the
            // surface delivers. Refine and retry; once refinement is
            // exhausted the center is the optimum at this resolution.
            if (shrinks++ >= options.max_shrink) {
                stalled = true;
                break;
            }
            scale *= 0.5;
            continue;
        }

        const double step = std::max(std::abs(a_next - a) / a_next, std::abs(e_next - e) / e_next);
        a = a_next;
        e = e_next;
        ll_center = ll_next;
        ++report.iterations;
        if (step < options.rel_tol) report.converged = true;
    }

    // Curvature at the optimum; also records how far the surrogate maximum
    // sits from the final center (should be ~0 when converged).
    const double da = scale * a / 4.0;
    const double de = scale * e / 4.0;
    const Surrogate fin = fit_surrogate(loglik, a, e, da, de, history);
    report.grid_step = {da, de};
    if (!fin.concave)
        throw SurrogateNotConcave("fit_mmm: curvature not negative definite at the optimum");
    report.surrogate_offset = {fin.step_u * da, fin.step_v * de};

    const Eigen::Matrix2d covariance = (-fin.hessian).inverse();
    mmm::Params params;
    params.alpha = a;
    params.eta = e;
    params.std_err = {{std::sqrt(covariance(0, 0)), std::sqrt(covariance(1, 1))}};
    params.log_likelihood = ll_center;
    report.params = params;
    return report;
}

Report<mmm::Params> fit_mmm(const MarketSeries& series, MonthRange window,
                            const FitOptions& options) {
    window.validate();
    const std::size_t lo = series.index_of(window.from);
    const std::size_t hi = series.index_of(window.to);
    const std::size_t n = hi - lo + 1;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i) / 12.0;
    return fit_mmm(times, std::span<const double>(series.discounted_index().data() + lo, n),
                   options);
}

double gbm_path_log_likelihood(const GbmParams& params, std::span<const double> times,
                               std::span<const double> values) {
    params.validate();
    check_grid(times, values);
    if (times.size() < 2)
        throw InsufficientData("gbm_path_log_likelihood: need at least two observations");

    // Lognormal transition density of the level (not of the log return), so
    // the value is directly comparable with the MMM path likelihood.
    const double v = params.theta * params.theta;
    double ll = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        const double r = std::log(values[i] / values[i - 1]);
        const double z = r - 0.5 * v * dt;
        ll += -std::log(values[i]) - 0.5 * std::log(2.0 * M_PI * v * dt) -
              z * z / (2.0 * v * dt);
    }
    return ll;
}

Report<GbmParams> fit_gbm(std::span<const double> times, std::span<const double> values) {
    check_grid(times, values);
    if (times.size() < 2) throw InsufficientData("fit_gbm: need at least two observations");

    const std::size_t n = times.size() - 1;
    double weighted_sq = 0.0;  // sum r_i^2 / dt_i
    double total_time = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dt = times[i] - times[i - 1];
        const double r = std::log(values[i] / values[i - 1]);
        weighted_sq += r * r / dt;
        total_time += dt;
    }
    if (!(weighted_sq > 0.0))
        throw InsufficientData("fit_gbm: constant path, volatility not identifiable");

    const double nd = static_cast<double>(n);
    const double v = 2.0 * (std::sqrt(nd * nd + total_time * weighted_sq) - nd) / total_time;

    GbmParams params;
    params.theta = std::sqrt(v);
    params.std_err = 1.0 / std::sqrt(2.0 * nd / v + total_time);
    params.log_likelihood = gbm_path_log_likelihood(params, times, values);

    Report<GbmParams> report;
    report.params = params;
    report.iterations = 1;
    report.converged = true;
    report.initial_guess = {std::sqrt(weighted_sq / nd), 0.0};
    return report;
}

Report<GbmParams> fit_gbm(const MarketSeries& series, MonthRange window) {
    window.validate();
    const std::size_t lo = series.index_of(window.from);
    const std::size_t hi = series.index_of(window.to);
    const std::size_t n = hi - lo + 1;
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i) / 12.0;
    return fit_gbm(times, std::span<const double>(series.discounted_index().data() + lo, n));
}

}  // namespace rwval::calib

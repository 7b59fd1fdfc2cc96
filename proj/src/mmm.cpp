#include "rwval/mmm.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rwval/detail/parallel.hpp"
#include "rwval/special_functions.hpp"

namespace rwval::mmm {

double phi(const Params& params, double t) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("phi: t must be >= 0");
    return params.alpha * std::expm1(params.eta * t) / (4.0 * params.eta);
}

double phi_increment(const Params& params, double t, double T) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("phi_increment: t must be >= 0");
    if (!(T > t)) throw InvalidWindow("phi_increment: T must exceed t");
    return params.alpha / (4.0 * params.eta) * std::exp(params.eta * t) *
           std::expm1(params.eta * (T - t));
}

double market_price_of_risk(const Params& params, double t, double s_bar) {
    params.validate();
    if (!(t >= 0.0)) throw DomainError("market_price_of_risk: t must be >= 0");
    if (!(s_bar > 0.0)) throw DomainError("market_price_of_risk: s_bar must be positive");
    return std::sqrt(params.alpha * std::exp(params.eta * t) / s_bar);
}

Params re_anchored(const Params& params, double shift_years) {
    params.validate();
    if (!(shift_years >= 0.0)) throw DomainError("re_anchored: shift must be >= 0");
    Params moved;
    moved.alpha = params.alpha * std::exp(-params.eta * shift_years);
    moved.eta = params.eta;
    moved.log_likelihood = params.log_likelihood;
    return moved;
}

double transition_log_density_by_qv(double dphi, double x_t, double x_T) {
    if (!(dphi > 0.0)) throw InvalidWindow("transition density needs a positive time change");
    if (!(x_t > 0.0) || !(x_T > 0.0))
        throw DomainError("transition density needs positive states");
    return -std::log(2.0 * dphi) + 0.5 * std::log(x_T / x_t) - (x_t + x_T) / (2.0 * dphi) +
           log_bessel_i1(std::sqrt(x_t * x_T) / dphi);
}

double transition_log_density(const Params& params, double t, double x_t, double T, double x_T) {
    if (!(T > t)) throw InvalidWindow("transition_log_density: T must exceed t");
    return transition_log_density_by_qv(phi_increment(params, t, T), x_t, x_T);
}

double path_log_likelihood(const Params& params, std::span<const double> times,
                           std::span<const double> values) {
    if (times.size() != values.size())
        throw DomainError("path_log_likelihood: times and values differ in length");
    if (times.size() < 2)
        throw InsufficientData("path_log_likelihood: need at least two observations");
    params.validate();

    double sum = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double dphi = phi_increment(params, times[i - 1], times[i]);
        sum += transition_log_density_by_qv(dphi, values[i - 1], values[i]);
    }
    return sum;
}

double path_log_likelihood(const Params& params, const MarketSeries& series, MonthRange window) {
    window.validate();
    const std::size_t lo = series.index_of(window.from);
    const std::size_t hi = series.index_of(window.to);
    const std::size_t n = hi - lo + 1;
    if (n < 2) throw InsufficientData("path_log_likelihood: window has fewer than 2 observations");

    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = static_cast<double>(i) / 12.0;
    return path_log_likelihood(
        params, times,
        std::span<const double>(series.discounted_index().data() + lo, n));
}

Eigen::MatrixXd simulate_paths(const Params& params, double x0, double t0,
                               std::span<const double> grid, int n_paths, std::uint64_t seed) {
    params.validate();
    if (!(x0 > 0.0)) throw DomainError("simulate_paths: x0 must be positive");
    if (n_paths < 1) throw DomainError("simulate_paths: need at least one path");
    if (grid.empty()) throw InvalidWindow("simulate_paths: empty time grid");

    std::vector<double> dphi(grid.size());
    double prev = t0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(grid[k] > prev))
            throw InvalidWindow("simulate_paths: grid must increase strictly from t0");
        dphi[k] = phi_increment(params, prev, grid[k]);
        prev = grid[k];
    }

    Eigen::MatrixXd paths(n_paths, static_cast<Eigen::Index>(grid.size()));
    detail::parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t path) {
        // Independent stream per path: deterministic under any thread count.
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(path),
                          static_cast<std::uint32_t>(path >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal;

        double x = x0;
        for (std::size_t k = 0; k < dphi.size(); ++k) {
            const double lambda = x / dphi[k];
            const double shifted = normal(rng) + std::sqrt(lambda);
            const double z2 = normal(rng);
            const double z3 = normal(rng);
            const double z4 = normal(rng);
            const double u = shifted * shifted + z2 * z2 + z3 * z3 + z4 * z4;
            x = dphi[k] * u;
            paths(static_cast<Eigen::Index>(path), static_cast<Eigen::Index>(k)) = x;
        }
    });
    return paths;
}

}  // namespace rwval::mmm

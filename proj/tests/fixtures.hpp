#pragma once

// Shared synthetic fixtures for pricing and hedging tests.

#include <cmath>
#include <cstdint>
#include <vector>

#include "rwval/market_data.hpp"
#include "rwval/mmm.hpp"

namespace fixtures {

/// Market series whose discounted index is an exact simulated MMM path and
/// whose short rate is constant.
inline rwval::MarketSeries mmm_series(const rwval::mmm::Params& params, int months, double rate,
                                      std::uint64_t seed,
                                      rwval::Month start = rwval::Month(1900, 1)) {
    std::vector<double> grid(static_cast<std::size_t>(months));
    for (int i = 0; i < months; ++i) grid[static_cast<std::size_t>(i)] = (i + 1) / 12.0;
    const auto paths = rwval::mmm::simulate_paths(params, 1.0, 0.0, grid, 1, seed);

    const int n = months + 1;
    std::vector<rwval::Month> dates;
    Eigen::ArrayXd index(n), rates(n);
    double savings = 1.0;
    for (int i = 0; i < n; ++i) {
        dates.push_back(start + i);
        const double discounted = (i == 0) ? 1.0 : paths(0, i - 1);
        index[i] = discounted * savings;
        rates[i] = rate;
        savings *= std::exp(rate / 12.0);
    }
    return rwval::MarketSeries::from_columns(std::move(dates), index, rates);
}

/// Market series following the zero-noise MMM mean path S_{k+1} = S_k + 4 dphi
/// with zero rates (index == discounted index).
inline rwval::MarketSeries smooth_mean_series(const rwval::mmm::Params& params, int months,
                                              rwval::Month start = rwval::Month(1900, 1)) {
    const int n = months + 1;
    std::vector<rwval::Month> dates;
    Eigen::ArrayXd index(n), rates(n);
    double x = 1.0;
    for (int i = 0; i < n; ++i) {
        dates.push_back(start + i);
        index[i] = x;
        rates[i] = 0.0;
        if (i + 1 < n)
            x += 4.0 * rwval::mmm::phi_increment(params, i / 12.0, (i + 1) / 12.0);
    }
    return rwval::MarketSeries::from_columns(std::move(dates), index, rates);
}

}  // namespace fixtures

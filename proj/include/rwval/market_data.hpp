#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "rwval/dates.hpp"
#include "rwval/errors.hpp"

namespace rwval {

struct IngestConfig {
    char delimiter = ',';
    double savings_normalization = 1.0;  // S0 at the first observation
};

/// Aligned monthly observations of a total-return index and a short rate,
/// with the derived savings account S0 and discounted index S0-units of the
/// index. Immutable after construction; safe to share across threads.
///
/// The savings account compounds the annualized short rate over each month:
///   S0[i+1] = S0[i] * exp(rate[i] / 12),
/// and the discounted index is index[i] / S0[i].
class MarketSeries {
public:
    /// Validate raw columns and derive the savings account and discounted
    /// index. Dates must be consecutive months; index levels must be > 0.
    static MarketSeries from_columns(std::vector<Month> dates, Eigen::ArrayXd index_level,
                                     Eigen::ArrayXd short_rate, double normalization = 1.0);

    std::size_t size() const { return dates_.size(); }
    Month first() const { return dates_.front(); }
    Month last() const { return dates_.back(); }
    bool contains(Month m) const { return m >= first() && m <= last(); }

    /// Position of a month in the series; throws OutOfRange when outside.
    std::size_t index_of(Month m) const;

    /// Model time in years since the first observation (months / 12).
    double year_fraction(Month m) const { return years_between(first(), m); }

    const std::vector<Month>& dates() const { return dates_; }
    const Eigen::ArrayXd& index_level() const { return index_level_; }
    const Eigen::ArrayXd& short_rate() const { return short_rate_; }
    const Eigen::ArrayXd& savings_account() const { return savings_account_; }
    const Eigen::ArrayXd& discounted_index() const { return discounted_index_; }

    double index_at(Month m) const { return index_level_[static_cast<Eigen::Index>(index_of(m))]; }
    double savings_at(Month m) const {
        return savings_account_[static_cast<Eigen::Index>(index_of(m))];
    }
    double discounted_index_at(Month m) const {
        return discounted_index_[static_cast<Eigen::Index>(index_of(m))];
    }

private:
    MarketSeries() = default;

    std::vector<Month> dates_;
    Eigen::ArrayXd index_level_;
    Eigen::ArrayXd short_rate_;
    Eigen::ArrayXd savings_account_;
    Eigen::ArrayXd discounted_index_;
};

/// Load a headered delimited file `date,index,short_rate` with dates as
/// YYYY-MM and the short rate as a decimal fraction. Missing or duplicate
/// months are an error, never interpolated.
MarketSeries load_series(const std::filesystem::path& path, const IngestConfig& config = {});

/// Savings bond D(t,T) = S0_t / S0_T along the realized short-rate path.
double savings_bond(const MarketSeries& series, Month t, Month T);

}  // namespace rwval

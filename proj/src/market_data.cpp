#include "rwval/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace rwval {

namespace {

constexpr double kMonthYearFraction = 1.0 / 12.0;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, delim)) out.push_back(trim(field));
    return out;
}

double parse_number(const std::string& field, long line_no, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size())
            throw InvalidDatum("trailing characters in " + std::string(what) + " '" + field +
                               "' at line " + std::to_string(line_no));
        return v;
    } catch (const InvalidDatum&) {
        throw;
    } catch (const std::exception&) {
        throw InvalidDatum("cannot parse " + std::string(what) + " '" + field + "' at line " +
                           std::to_string(line_no));
    }
}

}  // namespace

MarketSeries MarketSeries::from_columns(std::vector<Month> dates, Eigen::ArrayXd index_level,
                                        Eigen::ArrayXd short_rate, double normalization) {
    const auto n = static_cast<Eigen::Index>(dates.size());
    if (n == 0) throw MalformedSeries("series is empty");
    if (index_level.size() != n || short_rate.size() != n)
        throw MalformedSeries("column lengths differ");
    if (!(normalization > 0.0)) throw DomainError("savings normalization must be positive");

    for (Eigen::Index i = 1; i < n; ++i) {
        const int gap = dates[static_cast<std::size_t>(i)] - dates[static_cast<std::size_t>(i - 1)];
        if (gap == 0)
            throw MalformedSeries("duplicate month " + dates[static_cast<std::size_t>(i)].str());
        if (gap != 1)
            throw MalformedSeries("gap of " + std::to_string(gap) + " months before " +
                                  dates[static_cast<std::size_t>(i)].str());
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(index_level[i] > 0.0))
            throw InvalidDatum("non-positive index level at row " + std::to_string(i + 1) + " (" +
                               dates[static_cast<std::size_t>(i)].str() + ")");
        if (!std::isfinite(short_rate[i]))
            throw InvalidDatum("non-finite short rate at row " + std::to_string(i + 1));
    }

    MarketSeries s;
    s.dates_ = std::move(dates);
    s.index_level_ = std::move(index_level);
    s.short_rate_ = std::move(short_rate);

    // Compound the savings account forward; the rate observed at i applies
    // over the month (i, i+1].
    s.savings_account_.resize(n);
    s.savings_account_[0] = normalization;
    for (Eigen::Index i = 1; i < n; ++i)
        s.savings_account_[i] =
            s.savings_account_[i - 1] * std::exp(s.short_rate_[i - 1] * kMonthYearFraction);

    s.discounted_index_ = s.index_level_ / s.savings_account_;
    return s;
}

std::size_t MarketSeries::index_of(Month m) const {
    if (!contains(m))
        throw OutOfRange("date " + m.str() + " outside series [" + first().str() + ", " +
                         last().str() + "]");
    return static_cast<std::size_t>(m - first());
}

MarketSeries load_series(const std::filesystem::path& path, const IngestConfig& config) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open data file '" + path.string() + "'");

    std::string line;
    long line_no = 0;

    // Header row: date,index,short_rate (any delimiter configured).
    if (!std::getline(in, line)) throw MalformedSeries("empty file '" + path.string() + "'");
    ++line_no;
    {
        auto cols = split(line, config.delimiter);
        if (cols.size() != 3 || cols[0] != "date" || cols[1] != "index" ||
            cols[2] != "short_rate")
            throw MalformedSeries("expected header 'date,index,short_rate', got '" + trim(line) +
                                  "'");
    }

    std::vector<Month> dates;
    std::vector<double> index_level;
    std::vector<double> short_rate;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cols = split(line, config.delimiter);
        if (cols.size() != 3)
            throw MalformedSeries("expected 3 columns at line " + std::to_string(line_no));
        dates.push_back(Month::parse(cols[0]));
        index_level.push_back(parse_number(cols[1], line_no, "index"));
        short_rate.push_back(parse_number(cols[2], line_no, "short_rate"));
        if (!(index_level.back() > 0.0))
            throw InvalidDatum("non-positive index level at line " + std::to_string(line_no));
    }
    if (dates.empty()) throw MalformedSeries("no data rows in '" + path.string() + "'");

    Eigen::ArrayXd idx = Eigen::Map<Eigen::ArrayXd>(index_level.data(),
                                                    static_cast<Eigen::Index>(index_level.size()));
    Eigen::ArrayXd rate = Eigen::Map<Eigen::ArrayXd>(short_rate.data(),
                                                     static_cast<Eigen::Index>(short_rate.size()));
    return MarketSeries::from_columns(std::move(dates), std::move(idx), std::move(rate),
                                      config.savings_normalization);
}

double savings_bond(const MarketSeries& series, Month t, Month T) {
    if (t > T) throw InvalidWindow("savings_bond: t " + t.str() + " > T " + T.str());
    return series.savings_at(t) / series.savings_at(T);
}

}  // namespace rwval

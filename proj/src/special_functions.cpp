#include "rwval/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace rwval {

namespace {

// Neglected Poisson mixture mass when truncating the non-central series.
constexpr double kMixtureTailTol = 1e-14;

// Masses below this are flushed to zero: far beyond any tolerance here, and
// letting recurrences wander into denormals both stalls them (the smallest
// denormal times a ratio near 1 rounds back to itself) and costs microcode
// assists per operation.
constexpr double kMassFloor = 1e-300;

double log_poisson_pmf(double mean, double k) {
    return -mean + k * std::log(mean) - std::lgamma(k + 1.0);
}

}  // namespace

double log_bessel_i1(double z) {
    if (!(z > 0.0)) throw DomainError("log_bessel_i1: z must be positive");

    if (z < 20.0) {
        // I_1(z) = (z/2) sum_k q^k / (k! (k+1)!), q = (z/2)^2. Factoring out
        // the leading z/2 keeps tiny arguments away from underflow. All
        // terms are positive, so no cancellation.
        const double q = 0.25 * z * z;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 200; ++k) {
            term *= q / (static_cast<double>(k) * (k + 1.0));
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return std::log(0.5 * z) + std::log(sum);
    }

    // I_1(z) ~ e^z / sqrt(2 pi z) * (1 - 3/(8z) - 15/(2!(8z)^2) - ...).
    // The series is asymptotic; truncation at the smallest term leaves an
    // error of order e^{-2z}, far below double precision at the crossover.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (odd * odd - 4.0) / (8.0 * k * z);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * sum) break;
    }
    return z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(sum);
}

void Ncx2Params::validate() const {
    if (dof < 0 || dof % 2 != 0)
        throw DomainError("Ncx2Params: dof must be a nonnegative even integer, got " +
                          std::to_string(dof));
    if (!(noncentrality > 0.0))
        throw DomainError("Ncx2Params: noncentrality must be positive");
}

double ncx2_cdf(int dof, double noncentrality, double x) {
    return ncx2_cdf(Ncx2Params{dof, noncentrality}, x);
}

double ncx2_cdf(const Ncx2Params& params, double x) {
    params.validate();
    if (!(x >= 0.0)) throw DomainError("ncx2_cdf: x must be >= 0");

    const int m0 = params.dof / 2;
    const double h = 0.5 * params.noncentrality;  // Poisson mean of the mixture index

    // The j-th mixture component is a central chi-squared with dof + 2j
    // degrees of freedom; for dof + 2j = 0 it is the point mass at zero.
    if (x == 0.0) return m0 == 0 ? std::exp(-h) : 0.0;

    // Mixture window: expand outward from floor(h), always taking the
    // heavier frontier, until the geometric bound on the neglected tail
    // drops below tol relative to the captured mass. The relative test
    // keeps the loop immune to the absolute scale error of the seed weight
    // (the -h + j ln h - lgamma cancellation at large h).
    const long long j_center = static_cast<long long>(std::floor(h));
    const double w_center = std::exp(log_poisson_pmf(h, static_cast<double>(j_center)));
    std::vector<double> below;  // weights at j_center-1, j_center-2, ...
    std::vector<double> above;  // weights at j_center+1, j_center+2, ...
    long double covered = w_center;
    double w_lo = w_center;
    double w_hi = w_center;
    long long j_lo = j_center;
    long long j_hi = j_center;
    while (true) {
        const double cand_lo = (j_lo > 0) ? w_lo * static_cast<double>(j_lo) / h : 0.0;
        const double cand_hi = w_hi * h / static_cast<double>(j_hi + 1);
        if (cand_lo <= 0.0 && cand_hi <= 0.0) break;

        // frontier decay ratios bound the remaining tails geometrically
        const double r_lo = (j_lo > 1) ? static_cast<double>(j_lo - 1) / h : 0.0;
        const double r_hi = h / static_cast<double>(j_hi + 2);
        bool bounded = true;
        double tail_bound = 0.0;
        if (cand_lo > 0.0) {
            if (r_lo < 1.0) tail_bound += cand_lo / (1.0 - r_lo);
            else bounded = false;
        }
        if (cand_hi > 0.0) {
            if (r_hi < 1.0) tail_bound += cand_hi / (1.0 - r_hi);
            else bounded = false;
        }
        if (bounded && tail_bound < kMixtureTailTol * static_cast<double>(covered)) break;

        if (cand_lo > cand_hi) {
            --j_lo;
            w_lo = cand_lo;
            below.push_back(w_lo);
            covered += cand_lo;
        } else {
            ++j_hi;
            w_hi = cand_hi;
            above.push_back(w_hi);
            covered += cand_hi;
        }
    }

    // Central chi-squared CDF with even dof 2m is a Poisson survival:
    // F_{2m}(x) = P(Pois(x/2) >= m). Accumulate the survivals downward over
    // the window's m range; additions of positives keep relative accuracy
    // even deep in the left tail.
    const double p = 0.5 * x;
    const long long m_lo = m0 + j_lo;
    const long long m_hi = m0 + j_hi;
    const std::size_t width = static_cast<std::size_t>(m_hi - m_lo + 1);
    std::vector<double> tails(width);

    if (static_cast<double>(m_hi) < p - 10.0 * std::sqrt(p) - 30.0) {
        // Whole window sits far below the Poisson bulk: survivals are 1 to
        // well below double precision.
        std::fill(tails.begin(), tails.end(), 1.0);
    } else {
        std::vector<double> pmf(width);
        const long long i0 =
            std::clamp(static_cast<long long>(p), m_lo, m_hi);  // best-conditioned seed
        pmf[static_cast<std::size_t>(i0 - m_lo)] =
            std::exp(log_poisson_pmf(p, static_cast<double>(i0)));
        for (long long i = i0 + 1; i <= m_hi; ++i) {
            double v = pmf[static_cast<std::size_t>(i - 1 - m_lo)] * p / static_cast<double>(i);
            if (v < kMassFloor) v = 0.0;
            pmf[static_cast<std::size_t>(i - m_lo)] = v;
        }
        for (long long i = i0 - 1; i >= m_lo; --i) {
            double v =
                pmf[static_cast<std::size_t>(i + 1 - m_lo)] * static_cast<double>(i + 1) / p;
            if (v < kMassFloor) v = 0.0;
            pmf[static_cast<std::size_t>(i - m_lo)] = v;
        }

        // Mass strictly above the window.
        long double beyond = 0.0L;
        {
            double term = pmf[width - 1];
            long long i = m_hi + 1;
            while (term > 0.0) {
                term *= p / static_cast<double>(i);
                beyond += term;
                if (term < kMassFloor) break;
                if (static_cast<double>(i) > p && term < beyond * 1e-18) break;
                ++i;
            }
        }

        long double acc = beyond;
        for (long long m = m_hi; m >= m_lo; --m) {
            acc += pmf[static_cast<std::size_t>(m - m_lo)];
            tails[static_cast<std::size_t>(m - m_lo)] = static_cast<double>(acc);
        }
        if (m_lo == 0) tails[0] = 1.0;  // P(N >= 0), the dof-0 point mass
    }

    long double cdf = w_center * tails[static_cast<std::size_t>(j_center - j_lo)];
    for (std::size_t k = 0; k < below.size(); ++k)
        cdf += below[k] * tails[static_cast<std::size_t>(j_center - 1 - static_cast<long long>(k) -
                                                         m_lo + m0)];
    for (std::size_t k = 0; k < above.size(); ++k)
        cdf += above[k] * tails[static_cast<std::size_t>(j_center + 1 + static_cast<long long>(k) -
                                                         m_lo + m0)];

    // normalizing by the captured mass removes the seed weight's scale error
    return std::clamp(static_cast<double>(cdf / covered), 0.0, 1.0);
}

double inv_moment(const Ncx2Params& params) {
    params.validate();
    if (params.dof != 4)
        throw UnsupportedDof("inv_moment: identities hold for four degrees of freedom");
    return -std::expm1(-0.5 * params.noncentrality);
}

double inv_moment_below(const Ncx2Params& params, double x) {
    params.validate();
    if (params.dof != 4)
        throw UnsupportedDof("inv_moment_below: identities hold for four degrees of freedom");
    if (!(x >= 0.0)) throw DomainError("inv_moment_below: x must be >= 0");
    const double cdf0 = ncx2_cdf(0, params.noncentrality, x);
    return std::max(0.0, cdf0 - std::exp(-0.5 * params.noncentrality));
}

double inv_moment_above(const Ncx2Params& params, double x) {
    params.validate();
    if (params.dof != 4)
        throw UnsupportedDof("inv_moment_above: identities hold for four degrees of freedom");
    if (!(x >= 0.0)) throw DomainError("inv_moment_above: x must be >= 0");
    return 1.0 - ncx2_cdf(0, params.noncentrality, x);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace rwval

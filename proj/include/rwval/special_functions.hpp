#pragma once

#include "rwval/errors.hpp"

namespace rwval {

/// ln I_1(z) for z > 0, overflow-free for large z. Power series below the
/// crossover at z = 20, uniform asymptotic expansion above; both branches
/// keep the relative error of the log value near machine precision across
/// z in [1e-8, 1e6].
double log_bessel_i1(double z);

/// Non-central chi-squared parameter pair. Only even degrees of freedom
/// occur in this library (the squared Bessel dimension is four).
struct Ncx2Params {
    int dof = 4;                 // nu in {0, 2, 4, ...}
    double noncentrality = 0.0;  // lambda > 0

    void validate() const;
};

/// CDF of chi^2_{nu,lambda} at x >= 0 through the Poisson mixture of
/// even-dof central chi-squared CDFs,
///   chi2_{nu,lambda}(x) = sum_j pois(j; lambda/2) * P(Pois(x/2) >= nu/2 + j),
/// summed outward from j = floor(lambda/2) until the neglected Poisson
/// mass is below 1e-14. For nu = 0 the j = 0 component is the point mass
/// at zero, so chi2_{0,lambda}(0) = exp(-lambda/2) exactly.
double ncx2_cdf(const Ncx2Params& params, double x);
double ncx2_cdf(int dof, double noncentrality, double x);

/// E(lambda/U) = 1 - exp(-lambda/2) for U ~ chi^2_{4,lambda}.
double inv_moment(const Ncx2Params& params);

/// E(lambda/U * 1{U < x}) = chi2_{0,lambda}(x) - exp(-lambda/2).
double inv_moment_below(const Ncx2Params& params, double x);

/// E(lambda/U * 1{U >= x}) = 1 - chi2_{0,lambda}(x).
double inv_moment_above(const Ncx2Params& params, double x);

/// Standard normal CDF via erfc; absolute error below 1e-15.
double normal_cdf(double x);

}  // namespace rwval

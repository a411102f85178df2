#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trec/dataset.hpp"

namespace trec {

/// Floor applied to the residual variance before taking its log, so exact
/// fits keep a finite log-likelihood.
inline constexpr double kSigma2Floor = 1e-12;

struct OlsFit {
    std::vector<double> beta;  // intercept first, on time steps n = 1..N
    double sigma2 = 0.0;       // mean squared residual
    bool sigma2_clamped = false;
    double loglik = 0.0;
};

/// Least squares fit of a degree-`degree` polynomial in the time step
/// n = 1..N, solved through a QR decomposition of the design matrix.
OlsFit ols_fit(std::span<const double> y, int degree);

struct TrendFit {
    std::string variable;
    int degree = 1;                 // in {1, 2, 3}
    std::vector<double> beta;       // degree+1 coefficients on n = 1..N
    std::array<double, 4> gamma{};  // coefficients on time rescaled to [0,1]
    double sigma2 = 0.0;
    bool sigma2_clamped = false;
    double loglik = 0.0;
    double aic = 0.0;
    std::vector<double> fitted;
    std::vector<double> band_lower;
    std::vector<double> band_upper;
};

double aic_value(double loglik, int n_params);

/// Fits degrees 1..3 and keeps the AIC minimizer; ties go to the smaller
/// degree. Fills coefficients, fitted values, and the 95% band.
TrendFit select_degree(std::span<const double> y);

/// Re-expresses raw-time coefficients on time rescaled to [0,1]; entries
/// above the degree are exactly zero.
std::array<double, 4> standardized_coefficients(std::span<const double> beta,
                                                std::size_t n_steps);

/// Evaluates the polynomial at n = 1..N.
std::vector<double> polynomial_values(std::span<const double> beta, std::size_t n_steps);

/// 95% band for the mean trend: fitted +- t * s * sqrt(leverage).
std::pair<std::vector<double>, std::vector<double>> trend_band(const TrendFit& fit);

/// One fit per variable, in dataset order.
std::vector<TrendFit> fit_all(const CleanDataset& d);

}  // namespace trec

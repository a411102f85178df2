#include "trec/trend.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "trec/errors.hpp"

namespace trec {

namespace {

Eigen::MatrixXd design_matrix(std::size_t n_steps, int degree) {
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n_steps), degree + 1);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double n = static_cast<double>(i + 1);
        double power = 1.0;
        for (int k = 0; k <= degree; ++k) {
            z(static_cast<Eigen::Index>(i), k) = power;
            power *= n;
        }
    }
    return z;
}

}  // namespace

OlsFit ols_fit(std::span<const double> y, int degree) {
    if (degree < 0) throw NumericError("ols_fit: degree must be non-negative");
    const std::size_t n = y.size();
    if (n < static_cast<std::size_t>(degree) + 2) {
        throw NumericError("ols_fit: need at least degree + 2 observations, got " +
                           std::to_string(n));
    }

    const int p = degree + 1;
    const Eigen::MatrixXd z = design_matrix(n, degree);
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(n));

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::VectorXd rdiag = qr.matrixQR().topLeftCorner(p, p).diagonal();
    for (int k = 0; k < p; ++k) {
        if (std::abs(rdiag(k)) < 1e-10) {
            throw NumericError("ols_fit: rank-deficient design matrix");
        }
    }

    OlsFit fit;
    const Eigen::VectorXd beta = qr.solve(yv);
    fit.beta.assign(beta.data(), beta.data() + p);

    const double rss = (yv - z * beta).squaredNorm();
    fit.sigma2 = rss / static_cast<double>(n);
    if (fit.sigma2 < kSigma2Floor) {
        fit.sigma2 = kSigma2Floor;
        fit.sigma2_clamped = true;
    }
    fit.loglik = -0.5 * static_cast<double>(n) *
                 (std::log(2.0 * std::numbers::pi) + 1.0 + std::log(fit.sigma2));
    return fit;
}

double aic_value(double loglik, int n_params) {
    return -2.0 * loglik + 2.0 * static_cast<double>(n_params);
}

TrendFit select_degree(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 5) {
        throw NumericError("select_degree: need at least 5 time steps, got " +
                           std::to_string(n));
    }

    TrendFit best;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int degree = 1; degree <= 3; ++degree) {
        OlsFit f = ols_fit(y, degree);
        // Parameter count: degree+1 coefficients plus the residual variance.
        const double aic = aic_value(f.loglik, degree + 2);
        if (aic < best_aic) {
            best_aic = aic;
            best.degree = degree;
            best.beta = std::move(f.beta);
            best.sigma2 = f.sigma2;
            best.sigma2_clamped = f.sigma2_clamped;
            best.loglik = f.loglik;
            best.aic = aic;
        }
    }

    best.gamma = standardized_coefficients(best.beta, n);
    best.fitted = polynomial_values(best.beta, n);
    auto [lower, upper] = trend_band(best);
    best.band_lower = std::move(lower);
    best.band_upper = std::move(upper);
    return best;
}

std::array<double, 4> standardized_coefficients(std::span<const double> beta,
                                                std::size_t n_steps) {
    if (beta.empty() || beta.size() > 4) {
        throw NumericError("standardized_coefficients: expected 1..4 coefficients");
    }
    if (n_steps < 2) {
        throw NumericError("standardized_coefficients: need at least 2 time steps");
    }
    // n = 1 + h*s with h = N-1, so n^k expands through binomial coefficients.
    static constexpr double binom[4][4] = {
        {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    const double h = static_cast<double>(n_steps - 1);
    std::array<double, 4> gamma{};
    double h_pow = 1.0;
    for (std::size_t l = 0; l < beta.size(); ++l) {
        double acc = 0.0;
        for (std::size_t k = l; k < beta.size(); ++k) acc += beta[k] * binom[k][l];
        gamma[l] = acc * h_pow;
        h_pow *= h;
    }
    return gamma;
}

std::vector<double> polynomial_values(std::span<const double> beta, std::size_t n_steps) {
    std::vector<double> values(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double n = static_cast<double>(i + 1);
        double acc = 0.0;
        for (std::size_t k = beta.size(); k-- > 0;) acc = acc * n + beta[k];
        values[i] = acc;
    }
    return values;
}

std::pair<std::vector<double>, std::vector<double>> trend_band(const TrendFit& fit) {
    const std::size_t n = fit.fitted.size();
    const int p = fit.degree + 1;
    const int df = static_cast<int>(n) - p;
    if (df <= 0) {
        throw NumericError("trend_band: no residual degrees of freedom (N = " +
                           std::to_string(n) + ", p = " + std::to_string(p) + ")");
    }

    const double s = std::sqrt(static_cast<double>(n) * fit.sigma2 / df);
    const boost::math::students_t dist(df);
    const double tq = boost::math::quantile(dist, 0.975);

    const Eigen::MatrixXd z = design_matrix(n, fit.degree);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd rt = r.transpose();

    std::vector<double> lower(n);
    std::vector<double> upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::VectorXd zi = z.row(static_cast<Eigen::Index>(i)).transpose();
        // leverage z'(Z'Z)^{-1}z = ||R^{-T} z||^2
        const Eigen::VectorXd w = rt.triangularView<Eigen::Lower>().solve(zi);
        const double half = tq * s * std::sqrt(w.squaredNorm());
        lower[i] = fit.fitted[i] - half;
        upper[i] = fit.fitted[i] + half;
    }
    return {std::move(lower), std::move(upper)};
}

std::vector<TrendFit> fit_all(const CleanDataset& d) {
    std::vector<TrendFit> fits;
    fits.reserve(d.variables.size());
    for (const Column& var : d.variables) {
        try {
            TrendFit fit = select_degree(var.values);
            fit.variable = var.name;
            fits.push_back(std::move(fit));
        } catch (const NumericError& e) {
            throw NumericError(var.name + ": " + e.what());
        }
    }
    return fits;
}

}  // namespace trec

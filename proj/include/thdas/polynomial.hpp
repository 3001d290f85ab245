#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "thdas/error.hpp"

namespace thdas {

/// Real polynomial with coefficients stored in ascending degree (c0 ... cn).
template <typename Scalar>
class Polynomial {
public:
    using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Polynomial() : coeffs_(Coefficients::Zero(1)) {}

    explicit Polynomial(Coefficients ascending) : coeffs_(std::move(ascending)) {
        if (coeffs_.size() == 0) {
            throw ContractError("polynomial needs at least one coefficient");
        }
    }

    Polynomial(std::initializer_list<Scalar> ascending)
        : Polynomial(from_span(std::span<const Scalar>(ascending.begin(), ascending.size()), false)) {}

    /// Builds from coefficients printed highest degree first.
    static Polynomial from_descending(std::span<const Scalar> descending) {
        return from_span(descending, true);
    }
    static Polynomial from_descending(std::initializer_list<Scalar> descending) {
        return from_span(std::span<const Scalar>(descending.begin(), descending.size()), true);
    }

    Eigen::Index degree() const { return coeffs_.size() - 1; }
    const Coefficients& coefficients() const { return coeffs_; }
    Scalar coefficient(Eigen::Index power) const { return coeffs_[power]; }

    Scalar operator()(Scalar x) const;

private:
    static Polynomial from_span(std::span<const Scalar> values, bool descending) {
        Coefficients c(static_cast<Eigen::Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::size_t src = descending ? values.size() - 1 - i : i;
            c[static_cast<Eigen::Index>(i)] = values[src];
        }
        return Polynomial(std::move(c));
    }

    Coefficients coeffs_;
};

/// Horner evaluation.
template <typename Scalar>
Scalar eval_polynomial(const Polynomial<Scalar>& p, Scalar x) {
    const auto& c = p.coefficients();
    Scalar acc = c[c.size() - 1];
    for (Eigen::Index i = c.size() - 2; i >= 0; --i) {
        acc = acc * x + c[i];
    }
    return acc;
}

/// Element-wise Horner evaluation over an Eigen array expression.
template <typename Scalar, typename Derived>
Eigen::Array<Scalar, Eigen::Dynamic, 1> eval_polynomial(const Polynomial<Scalar>& p,
                                                        const Eigen::ArrayBase<Derived>& xs) {
    const auto& c = p.coefficients();
    Eigen::Array<Scalar, Eigen::Dynamic, 1> acc =
        Eigen::Array<Scalar, Eigen::Dynamic, 1>::Constant(xs.size(), c[c.size() - 1]);
    for (Eigen::Index i = c.size() - 2; i >= 0; --i) {
        acc = acc * xs.derived() + c[i];
    }
    return acc;
}

template <typename Scalar>
Scalar Polynomial<Scalar>::operator()(Scalar x) const {
    return eval_polynomial(*this, x);
}

template <typename Scalar>
Polynomial<Scalar> derivative(const Polynomial<Scalar>& p) {
    const auto& c = p.coefficients();
    if (c.size() == 1) {
        return Polynomial<Scalar>{Scalar(0)};
    }
    typename Polynomial<Scalar>::Coefficients d(c.size() - 1);
    for (Eigen::Index i = 1; i < c.size(); ++i) {
        d[i - 1] = static_cast<Scalar>(i) * c[i];
    }
    return Polynomial<Scalar>(std::move(d));
}

/// Invertible affine map y = gain * x + offset.
template <typename Scalar>
struct LinearMap {
    Scalar gain = Scalar(1);
    Scalar offset = Scalar(0);

    Scalar operator()(Scalar x) const { return gain * x + offset; }

    LinearMap inverse() const {
        if (gain == Scalar(0)) {
            throw ContractError("linear map with zero gain is not invertible");
        }
        return LinearMap{Scalar(1) / gain, -offset / gain};
    }
};

template <typename Scalar>
struct PolynomialFit {
    Polynomial<Scalar> polynomial;
    /// Ratio of smallest to largest pivot of the scaled design matrix.
    Scalar reciprocal_condition = Scalar(1);
    bool ill_conditioned = false;
};

/// Least-squares polynomial fit.
///
/// The abscissae are mapped affinely onto [-1, 1] before the Vandermonde
/// system is solved with column-pivoting Householder QR, and the solution is
/// expanded back to the monomial basis in x. This keeps a degree-5 fit on a
/// narrow interval such as [1, 3] well conditioned.
///
/// Throws `ContractError` when there are not more points than `degree`, when
/// the inputs differ in length, or when every x is identical.
template <typename Scalar>
PolynomialFit<Scalar> fit_polynomial(std::span<const Scalar> xs, std::span<const Scalar> ys, int degree) {
    if (degree < 0) {
        throw ContractError("polynomial degree must be non-negative");
    }
    if (xs.size() != ys.size()) {
        throw ContractError("fit needs equally many x and y values");
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    const Eigen::Index cols = degree + 1;
    if (n <= degree) {
        throw ContractError("underdetermined fit: " + std::to_string(n) + " points for degree " +
                            std::to_string(degree));
    }

    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> x(xs.data(), n);
    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> y(ys.data(), n);
    const Scalar lo = x.minCoeff();
    const Scalar hi = x.maxCoeff();
    if (!(hi > lo) && degree > 0) {
        throw ContractError("fit needs at least two distinct x values");
    }
    const Scalar center = (hi + lo) / Scalar(2);
    const Scalar half_width = hi > lo ? (hi - lo) / Scalar(2) : Scalar(1);

    const Eigen::Array<Scalar, Eigen::Dynamic, 1> t = (x.array() - center) / half_width;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> design(n, cols);
    design.col(0).setOnes();
    for (Eigen::Index j = 1; j < cols; ++j) {
        design.col(j) = design.col(j - 1).array() * t;
    }

    Eigen::ColPivHouseholderQR<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> qr(design);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> scaled = qr.solve(y);

    const auto diag = qr.matrixQR().diagonal().cwiseAbs();
    const Scalar rcond = diag.maxCoeff() > Scalar(0) ? diag.minCoeff() / diag.maxCoeff() : Scalar(0);

    // p(x) = sum_j a_j ((x - center) / half_width)^j, expanded binomially.
    typename Polynomial<Scalar>::Coefficients coeffs =
        Polynomial<Scalar>::Coefficients::Zero(cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Scalar scale = scaled[j] / std::pow(half_width, static_cast<Scalar>(j));
        Scalar binom = Scalar(1);
        for (Eigen::Index k = 0; k <= j; ++k) {
            coeffs[k] += scale * binom * std::pow(-center, static_cast<Scalar>(j - k));
            binom = binom * static_cast<Scalar>(j - k) / static_cast<Scalar>(k + 1);
        }
    }

    PolynomialFit<Scalar> fit;
    fit.polynomial = Polynomial<Scalar>(std::move(coeffs));
    fit.reciprocal_condition = rcond;
    fit.ill_conditioned = qr.rank() < cols || rcond < Scalar(1e3) * std::numeric_limits<Scalar>::epsilon();
    return fit;
}

/// Sign of p' sampled at `samples` evenly spaced points on [lo, hi]:
/// +1 strictly increasing, -1 strictly decreasing, 0 otherwise.
template <typename Scalar>
int monotone_direction(const Polynomial<Scalar>& p, Scalar lo, Scalar hi, int samples = 1000) {
    const Polynomial<Scalar> dp = derivative(p);
    const auto xs = Eigen::Array<Scalar, Eigen::Dynamic, 1>::LinSpaced(samples, lo, hi);
    const auto slopes = eval_polynomial(dp, xs);
    if ((slopes > Scalar(0)).all()) {
        return 1;
    }
    if ((slopes < Scalar(0)).all()) {
        return -1;
    }
    return 0;
}

/// Solves p(x) = y for x in [lo, hi] by bisection.
///
/// Throws `ContractError` if p is not strictly monotone on the interval and
/// `RangeError` if y lies outside [p(lo), p(hi)].
template <typename Scalar>
Scalar invert_monotone(const Polynomial<Scalar>& p, Scalar y, Scalar lo, Scalar hi,
                       Scalar x_tolerance = Scalar(1e-9)) {
    if (!(hi > lo)) {
        throw ContractError("inversion interval must satisfy lo < hi");
    }
    const int direction = monotone_direction(p, lo, hi);
    if (direction == 0) {
        throw ContractError("polynomial is not strictly monotone on the inversion interval");
    }
    const Scalar y_lo = p(lo);
    const Scalar y_hi = p(hi);
    const Scalar y_min = std::min(y_lo, y_hi);
    const Scalar y_max = std::max(y_lo, y_hi);
    const Scalar slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                         std::max({Scalar(1), std::abs(y_min), std::abs(y_max)});
    if (!(y >= y_min - slack && y <= y_max + slack)) {
        throw RangeError("value " + std::to_string(static_cast<double>(y)) + " outside invertible range [" +
                         std::to_string(static_cast<double>(y_min)) + ", " +
                         std::to_string(static_cast<double>(y_max)) + "]");
    }

    Scalar a = lo;
    Scalar b = hi;
    for (int iter = 0; iter < 200 && (b - a) > x_tolerance; ++iter) {
        const Scalar mid = a + (b - a) / Scalar(2);
        const bool below = direction > 0 ? p(mid) < y : p(mid) > y;
        if (below) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return a + (b - a) / Scalar(2);
}

}  // namespace thdas

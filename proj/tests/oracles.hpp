#pragma once
// Independent reference implementations used only by the tests. They share no
// code with the library beyond the state containers.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// exp(A) by scaling and squaring with a long Taylor series.
inline Mat expm(const Mat &a) {
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = int(std::ceil(std::log2(norm / 0.5)));
    }
    const Mat s = a / std::pow(2.0, squarings);
    Mat term = Mat::Identity(a.rows(), a.cols());
    Mat sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * s / double(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

inline Mat lower(int d) {
    Mat a = Mat::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        a(n - 1, n) = std::sqrt(double(n));
    }
    return a;
}

inline Mat kron(const Mat &x, const Mat &y) {
    Mat out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        }
    }
    return out;
}

// Physicists' Hermite functions by direct polynomial evaluation in long double.
inline double hermite_function(int n, double x) {
    long double h0 = 1.0L, h1 = 2.0L * x;
    if (n == 0) {
        h1 = h0;
    } else {
        for (int k = 1; k < n; ++k) {
            long double h2 = 2.0L * x * h1 - 2.0L * k * h0;
            h0 = h1;
            h1 = h2;
        }
    }
    long double norm = std::pow(M_PIl, -0.25L) / std::sqrt(std::pow(2.0L, n) * std::tgamma((long double)n + 1.0L));
    return double(norm * h1 * std::exp(-0.5L * x * x));
}

// P(N >= n) for N ~ Poisson(mu) by direct long-double summation of the tail.
inline long double poisson_tail(int n, long double mu) {
    if (n <= 0) {
        return 1.0L;
    }
    long double term = std::exp(-mu + n * std::log(mu) - std::lgamma((long double)n + 1.0L));
    long double sum = 0.0L;
    for (int k = n; k < n + 4000; ++k) {
        sum += term;
        term *= mu / (k + 1);
        if (term < sum * 1e-22L) {
            break;
        }
    }
    return sum;
}

// Simpson integral of f on [a, b] with n (even) intervals.
template <typename F>
double simpson(F &&f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

}  // namespace oracle

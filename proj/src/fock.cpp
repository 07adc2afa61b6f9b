#include "resmem/fock.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "resmem/errors.hpp"

namespace resmem {
namespace {

constexpr double kTailTolerance = 1e-10;

void require_dim(int dim) {
    if (dim < 2) {
        throw DimensionError("Fock dimension must be at least 2, got " + std::to_string(dim));
    }
}

// Squeezed vacuum amplitudes v_{2m} up to index `count` (exclusive), untruncated.
Eigen::VectorXd squeezed_vacuum_amplitudes(double r, int count) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(count);
    if (r == 0.0) {
        v[0] = 1.0;
        return v;
    }
    const double t = std::tanh(std::abs(r));
    const double sgn = r > 0 ? -1.0 : 1.0;
    const double log_pref = -0.5 * std::log(std::cosh(r));
    for (int m = 0; 2 * m < count; ++m) {
        double lg = m * std::log(t) + 0.5 * std::lgamma(2.0 * m + 1.0) - m * std::log(2.0) - std::lgamma(m + 1.0) + log_pref;
        v[2 * m] = ((m % 2 == 0) ? 1.0 : sgn) * std::exp(lg);
    }
    return v;
}

void check_squeeze(double r, int dim) {
    if (std::abs(r) > 2.0) {
        throw DimensionError("squeezing |r| must not exceed 2");
    }
    if (dim < 20) {
        throw DimensionError("squeezed states need dim >= 20");
    }
}

void check_tail(const Eigen::VectorXcd &amp, const char *what) {
    double tail = 1.0 - amp.squaredNorm();
    if (tail > kTailTolerance) {
        throw DimensionError(std::string(what) + ": truncated tail probability " + std::to_string(tail) +
                             " exceeds 1e-10; increase dim");
    }
}

}  // namespace

FockVector::FockVector(Eigen::VectorXcd amp) : amp_(std::move(amp)) { require_dim(dim()); }

FockVector FockVector::basis(int n, int dim) {
    require_dim(dim);
    if (n < 0 || n >= dim) {
        throw DimensionError("basis index out of range");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[n] = 1.0;
    return FockVector(std::move(v));
}

bool FockVector::is_normalized(double tol) const { return std::abs(amp_.squaredNorm() - 1.0) <= tol; }

FockVector FockVector::normalized() const {
    double n = amp_.norm();
    if (n == 0.0) {
        throw DomainError("cannot normalize the zero vector");
    }
    return FockVector(amp_ / n);
}

FockVector FockVector::resized(int new_dim) const {
    require_dim(new_dim);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(new_dim);
    int keep = std::min(new_dim, dim());
    v.head(keep) = amp_.head(keep);
    return FockVector(std::move(v));
}

DensityMatrix::DensityMatrix(Eigen::MatrixXcd rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols()) {
        throw DimensionError("density matrix must be square");
    }
    require_dim(dim());
}

DensityMatrix DensityMatrix::pure(const FockVector &psi) { return DensityMatrix(psi.amp() * psi.amp().adjoint()); }

bool DensityMatrix::is_normalized(double tol) const { return std::abs(trace() - 1.0) <= tol; }

bool DensityMatrix::is_hermitian(double tol) const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd h = 0.5 * (rho_ + rho_.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double tol) const { return is_hermitian(1e-10) && min_eigenvalue() >= -tol; }

DensityMatrix DensityMatrix::normalized() const {
    double t = trace();
    if (!(t > 0.0)) {
        throw DomainError("cannot normalize a density matrix with non-positive trace");
    }
    return DensityMatrix(rho_ / t);
}

DensityMatrix DensityMatrix::resized(int new_dim) const {
    require_dim(new_dim);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(new_dim, new_dim);
    int keep = std::min(new_dim, dim());
    r.topLeftCorner(keep, keep) = rho_.topLeftCorner(keep, keep);
    return DensityMatrix(std::move(r));
}

double DensityMatrix::mean_photon_number() const {
    double s = 0.0;
    for (int n = 0; n < dim(); ++n) {
        s += n * rho_(n, n).real();
    }
    return s;
}

double DensityMatrix::parity_expectation() const {
    double s = 0.0;
    for (int n = 0; n < dim(); ++n) {
        s += ((n % 2 == 0) ? 1.0 : -1.0) * rho_(n, n).real();
    }
    return s;
}

double DensityMatrix::edge_weight(int levels) const {
    double s = 0.0;
    for (int n = std::max(0, dim() - levels); n < dim(); ++n) {
        s += rho_(n, n).real();
    }
    return s;
}

FockVector coherent_state(Complex beta, int dim) {
    require_dim(dim);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    const double mod = std::abs(beta);
    if (mod == 0.0) {
        v[0] = 1.0;
        return FockVector(std::move(v));
    }
    const double phase = std::arg(beta);
    const double log_mod = std::log(mod);
    for (int n = 0; n < dim; ++n) {
        double lg = -0.5 * mod * mod + n * log_mod - 0.5 * std::lgamma(n + 1.0);
        v[n] = std::polar(std::exp(lg), n * phase);
    }
    return FockVector(std::move(v));
}

FockVector cat_state(Complex alpha, Parity s, int dim) {
    require_dim(dim);
    const double mod = std::abs(alpha);
    if (mod * mod + 6.0 * mod + 10.0 > dim) {
        throw DimensionError("cat amplitude " + std::to_string(mod) + " violates truncation guard for dim " +
                             std::to_string(dim));
    }
    const Complex i(0.0, 1.0);
    Eigen::VectorXcd v = coherent_state(i * alpha, dim).amp() + double(sign(s)) * coherent_state(-i * alpha, dim).amp();
    double n = v.norm();
    if (n < 1e-12) {
        throw DomainError("odd cat with zero amplitude is the zero vector");
    }
    return FockVector(v / n);
}

FockVector squeezed_vacuum(double r, int dim) {
    check_squeeze(r, dim);
    Eigen::VectorXcd v = squeezed_vacuum_amplitudes(r, dim).cast<Complex>();
    check_tail(v, "squeezed vacuum");
    return FockVector(v / v.norm());
}

FockVector squeezed_single_photon(double r, int dim) {
    check_squeeze(r, dim);
    // S|1> = S a^dag S^dag S|0> = (cosh r a^dag + sinh r a) S|0>.
    Eigen::VectorXd vac = squeezed_vacuum_amplitudes(r, dim + 2);
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    for (int n = 1; n < dim; n += 2) {
        v[n] = ch * std::sqrt(double(n)) * vac[n - 1] + sh * std::sqrt(double(n + 1)) * vac[n + 1];
    }
    check_tail(v, "squeezed single photon");
    return FockVector(v / v.norm());
}

double cat_squeezing_for_alpha(double alpha) {
    if (!(alpha >= 0.0)) {
        throw DomainError("cat amplitude must be non-negative");
    }
    double arg = 0.5 + std::sqrt(9.0 + 4.0 * alpha * alpha) / 6.0;
    return std::acosh(std::sqrt(arg));
}

double fidelity(const FockVector &a, const FockVector &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    return std::clamp(std::norm(a.amp().dot(b.amp())), 0.0, 1.0);
}

double fidelity(const FockVector &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    Complex v = a.amp().dot(b.rho() * a.amp());
    return std::clamp(v.real(), 0.0, 1.0);
}

double fidelity(const DensityMatrix &a, const FockVector &b) { return fidelity(b, a); }

double fidelity(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(0.5 * (a.rho() + a.rho().adjoint()));
    Eigen::VectorXd lam = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXcd sqrt_a = ea.eigenvectors() * lam.asDiagonal() * ea.eigenvectors().adjoint();
    Eigen::MatrixXcd m = sqrt_a * b.rho() * sqrt_a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    double s = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(s * s, 0.0, 1.0);
}

Eigen::MatrixXcd annihilation(int dim) {
    require_dim(dim);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(double(n));
    }
    return a;
}

Eigen::MatrixXcd number_operator(int dim) {
    require_dim(dim);
    Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
        n(k, k) = double(k);
    }
    return n;
}

Eigen::MatrixXcd position_operator(int dim) {
    Eigen::MatrixXcd a = annihilation(dim);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

Eigen::MatrixXcd momentum_operator(int dim) {
    Eigen::MatrixXcd a = annihilation(dim);
    return (a - a.adjoint()) / Complex(0.0, std::sqrt(2.0));
}

DensityMatrix rotate(const DensityMatrix &rho, double theta) {
    const int d = rho.dim();
    Eigen::MatrixXcd out(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            out(n, m) = rho(n, m) * std::polar(1.0, -theta * (n - m));
        }
    }
    return DensityMatrix(std::move(out));
}

}  // namespace resmem

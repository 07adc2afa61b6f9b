#include "resmem/gates.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "resmem/errors.hpp"

namespace resmem {
namespace {

constexpr double kProjectionNormTolerance = 1e-6;

// exp(theta (a^dag b - a b^dag)) on the block spanned by |n, N-n>.
Eigen::MatrixXd beamsplitter_block(int total, double theta) {
    const int size = total + 1;
    if (size == 1) {
        return Eigen::MatrixXd::Identity(1, 1);
    }
    // i*A is Hermitian tridiagonal; conjugating with diag(i^n) makes it the real
    // symmetric tridiagonal S with off-diagonal c_n = sqrt((n+1)(N-n)).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
    Eigen::VectorXd sub(size - 1);
    for (int n = 0; n < size - 1; ++n) {
        sub[n] = std::sqrt(double(n + 1) * double(total - n));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd &w = es.eigenvectors();
    const Eigen::VectorXd &lam = es.eigenvalues();

    // U = D W exp(-i theta lam) W^T D^dag with D = diag(i^n). Only the real part survives.
    Eigen::MatrixXd wc = w * (lam * theta).array().cos().matrix().asDiagonal();
    Eigen::MatrixXd ws = w * (lam * theta).array().sin().matrix().asDiagonal();
    Eigen::MatrixXd c = wc * w.transpose();
    Eigen::MatrixXd s = ws * w.transpose();
    Eigen::MatrixXd u(size, size);
    for (int n = 0; n < size; ++n) {
        for (int m = 0; m < size; ++m) {
            // i^(n-m) (C - i S)
            int k = ((n - m) % 4 + 4) % 4;
            switch (k) {
                case 0:
                    u(n, m) = c(n, m);
                    break;
                case 1:
                    u(n, m) = s(n, m);
                    break;
                case 2:
                    u(n, m) = -c(n, m);
                    break;
                default:
                    u(n, m) = -s(n, m);
                    break;
            }
        }
    }
    return u;
}

void check_normalized(const JointState &state) {
    if (std::abs(state.norm() * state.norm() - 1.0) > kProjectionNormTolerance) {
        throw ContractError("homodyne conditioning requires a normalized joint state");
    }
}

}  // namespace

JointState::JointState(Eigen::MatrixXcd amp) : amp_(std::move(amp)) {
    if (amp_.rows() < 2 || amp_.cols() < 2) {
        throw DimensionError("joint state dimensions must be at least 2");
    }
}

JointState JointState::product(const FockVector &a, const FockVector &b) {
    return JointState(a.amp() * b.amp().transpose());
}

bool JointState::is_normalized(double tol) const { return std::abs(amp_.squaredNorm() - 1.0) <= tol; }

double JointState::mean_total_photons() const {
    double s = 0.0;
    for (int i = 0; i < dim_a(); ++i) {
        for (int j = 0; j < dim_b(); ++j) {
            s += (i + j) * std::norm(amp_(i, j));
        }
    }
    return s;
}

DensityMatrix JointState::reduced(Mode keep) const {
    if (keep == Mode::A) {
        return DensityMatrix(amp_ * amp_.adjoint());
    }
    return DensityMatrix(amp_.transpose() * amp_.conjugate());
}

Beamsplitter::Beamsplitter(double theta, int dim) : theta_(theta), dim_(dim) {
    if (dim < 2) {
        throw DimensionError("beamsplitter dimension must be at least 2");
    }
    blocks_.reserve(2 * dim - 1);
    for (int total = 0; total <= 2 * (dim - 1); ++total) {
        blocks_.push_back(beamsplitter_block(total, theta));
    }
}

Beamsplitter Beamsplitter::from_transmittance(double T, int dim) {
    if (!(T >= 0.0 && T <= 1.0)) {
        throw DomainError("beamsplitter transmittance must lie in [0, 1]");
    }
    return Beamsplitter(std::acos(std::sqrt(T)), dim);
}

JointState Beamsplitter::apply(const JointState &state) const {
    if (state.dim_a() != dim_ || state.dim_b() != dim_) {
        throw DimensionError("beamsplitter: state dimension mismatch");
    }
    const Eigen::MatrixXcd &in = state.amp();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int total = 0; total <= 2 * (dim_ - 1); ++total) {
        const int lo = std::max(0, total - dim_ + 1);
        const int hi = std::min(total, dim_ - 1);
        const Eigen::MatrixXd &u = blocks_[total];
        Eigen::VectorXcd x = Eigen::VectorXcd::Zero(total + 1);
        bool any = false;
        for (int n = lo; n <= hi; ++n) {
            x[n] = in(n, total - n);
            any = any || x[n] != Complex(0.0);
        }
        if (!any) {
            continue;
        }
        Eigen::VectorXcd y = u.middleCols(lo, hi - lo + 1) * x.segment(lo, hi - lo + 1);
        for (int p = lo; p <= hi; ++p) {
            out(p, total - p) = y[p];
        }
    }
    return JointState(std::move(out));
}

JointState Beamsplitter::apply(const FockVector &a, const FockVector &b) const {
    if (a.dim() != b.dim()) {
        throw DimensionError("beamsplitter: input dimensions differ");
    }
    return apply(JointState::product(a, b));
}

JointState beamsplitter_apply(const FockVector &a, const FockVector &b, double T) {
    if (a.dim() != b.dim()) {
        throw DimensionError("beamsplitter: input dimensions differ");
    }
    return Beamsplitter::from_transmittance(T, a.dim()).apply(a, b);
}

Eigen::VectorXd hermite_functions(double x, int dim) {
    Eigen::VectorXd psi(dim);
    psi[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (dim > 1) {
        psi[1] = std::sqrt(2.0) * x * psi[0];
    }
    for (int n = 2; n < dim; ++n) {
        psi[n] = std::sqrt(2.0 / n) * x * psi[n - 1] - std::sqrt(double(n - 1) / n) * psi[n - 2];
    }
    return psi;
}

Eigen::RowVectorXcd quadrature_eigenbra(double x, double theta, int dim) {
    if (dim < 2) {
        throw DimensionError("eigenbra dimension must be at least 2");
    }
    Eigen::VectorXd psi = hermite_functions(x, dim);
    Eigen::RowVectorXcd e(dim);
    for (int n = 0; n < dim; ++n) {
        e[n] = std::polar(psi[n], -n * theta);
    }
    return e;
}

Projection homodyne_project(const JointState &state, Mode measured, double theta, double value) {
    check_normalized(state);
    Eigen::VectorXcd survivor;
    if (measured == Mode::B) {
        survivor = state.amp() * quadrature_eigenbra(value, theta, state.dim_b()).transpose();
    } else {
        survivor = state.amp().transpose() * quadrature_eigenbra(value, theta, state.dim_a()).transpose();
    }
    double density = survivor.squaredNorm();
    return Projection{FockVector(std::move(survivor)), density};
}

Eigen::MatrixXcd window_operator(int dim, double theta, double lo, double hi, double step) {
    if (!(lo < hi)) {
        throw DomainError("empty conditioning window");
    }
    lo = std::max(lo, -kQuadratureBound);
    hi = std::min(hi, kQuadratureBound);
    if (!(lo < hi) || !(step > 0.0)) {
        throw DomainError("empty conditioning window");
    }
    const int intervals = std::max(1, static_cast<int>(std::ceil((hi - lo) / step - 1e-9)));
    const double h = (hi - lo) / intervals;
    Eigen::MatrixXd k_real = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i <= intervals; ++i) {
        double x = lo + i * h;
        double w = (i == 0 || i == intervals) ? 0.5 * h : h;
        Eigen::VectorXd psi = hermite_functions(x, dim);
        k_real.noalias() += w * psi * psi.transpose();
    }
    // e_n = exp(-i n theta) psi_n, so K_nm = exp(-i (n-m) theta) K_real_nm.
    Eigen::MatrixXcd k(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            k(n, m) = k_real(n, m) * std::polar(1.0, -(n - m) * theta);
        }
    }
    return k;
}

WindowResult window_condition(const JointState &state, Mode measured, double theta, double lo, double hi,
                              double step) {
    check_normalized(state);
    const int measured_dim = measured == Mode::B ? state.dim_b() : state.dim_a();
    Eigen::MatrixXcd k = window_operator(measured_dim, theta, lo, hi, step);
    Eigen::MatrixXcd rho;
    if (measured == Mode::B) {
        rho = state.amp() * k * state.amp().adjoint();
    } else {
        rho = state.amp().transpose() * k * state.amp().conjugate();
    }
    double acceptance = rho.trace().real();
    if (!(acceptance > 1e-300)) {
        throw DomainError("conditioning window has zero acceptance");
    }
    rho /= acceptance;
    rho = 0.5 * (rho + rho.adjoint());
    return WindowResult{DensityMatrix(std::move(rho)), acceptance};
}

}  // namespace resmem

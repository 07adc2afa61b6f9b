#pragma once

#include <Eigen/Dense>
#include <complex>

namespace resmem {

using Complex = std::complex<double>;

inline constexpr int kDefaultDim = 60;

// Photon-number parity of a cat superposition |i a> + s|-i a>.
enum class Parity : int { Even = 1, Odd = -1 };

constexpr int sign(Parity s) { return static_cast<int>(s); }
constexpr Parity parity_power(Parity s, int k) { return (s == Parity::Odd && (k % 2) != 0) ? Parity::Odd : Parity::Even; }

// Truncated Fock-basis pure state. Amplitudes are not forced to unit norm;
// constructors in this module return normalized states.
class FockVector {
  public:
    explicit FockVector(Eigen::VectorXcd amp);

    static FockVector basis(int n, int dim);

    int dim() const { return static_cast<int>(amp_.size()); }
    const Eigen::VectorXcd &amp() const { return amp_; }
    Complex operator[](int n) const { return amp_[n]; }

    double norm() const { return amp_.norm(); }
    bool is_normalized(double tol = 1e-9) const;
    FockVector normalized() const;

    // Zero-padded or truncated copy in a different dimension.
    FockVector resized(int dim) const;

  private:
    Eigen::VectorXcd amp_;
};

// Truncated Fock-basis mixed state.
class DensityMatrix {
  public:
    explicit DensityMatrix(Eigen::MatrixXcd rho);

    static DensityMatrix pure(const FockVector &psi);

    int dim() const { return static_cast<int>(rho_.rows()); }
    const Eigen::MatrixXcd &rho() const { return rho_; }
    Complex operator()(int n, int m) const { return rho_(n, m); }

    double trace() const { return rho_.trace().real(); }
    bool is_normalized(double tol = 1e-9) const;
    bool is_hermitian(double tol = 1e-10) const;
    double min_eigenvalue() const;
    bool is_physical(double tol = 1e-8) const;
    DensityMatrix normalized() const;
    DensityMatrix resized(int dim) const;

    double population(int n) const { return rho_(n, n).real(); }
    double mean_photon_number() const;
    double parity_expectation() const;
    // Total population in the highest `levels` Fock levels.
    double edge_weight(int levels) const;

  private:
    Eigen::MatrixXcd rho_;
};

// <n|beta> for n < dim, computed with log-factorials (no renormalization).
FockVector coherent_state(Complex beta, int dim);

// (|i alpha> + s|-i alpha>)/N. Requires |alpha|^2 + 6|alpha| + 10 <= dim.
FockVector cat_state(Complex alpha, Parity s, int dim = kDefaultDim);

// S(r)|1> with S(r) = exp((r/2)(a^2 - a^dag^2)). Requires |r| <= 2, dim >= 20
// and a truncated tail probability below 1e-10.
FockVector squeezed_single_photon(double r, int dim = kDefaultDim);

// Squeezed vacuum S(r)|0>, same convention and tail guard.
FockVector squeezed_vacuum(double r, int dim = kDefaultDim);

// Squeezing r such that S(r)|1> approximates the odd cat of amplitude alpha
// placed on the imaginary axis.
double cat_squeezing_for_alpha(double alpha);

double fidelity(const FockVector &a, const FockVector &b);
double fidelity(const FockVector &a, const DensityMatrix &b);
double fidelity(const DensityMatrix &a, const FockVector &b);
// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix &a, const DensityMatrix &b);

// Operators under x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2), hbar = 1.
Eigen::MatrixXcd annihilation(int dim);
Eigen::MatrixXcd number_operator(int dim);
Eigen::MatrixXcd position_operator(int dim);
Eigen::MatrixXcd momentum_operator(int dim);

// exp(-i theta n) rho exp(i theta n).
DensityMatrix rotate(const DensityMatrix &rho, double theta);

}  // namespace resmem

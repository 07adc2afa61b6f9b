#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "resmem/fock.hpp"

namespace resmem {

enum class Mode { A, B };

// Two-mode pure state; amp(nA, nB) is the amplitude of |nA, nB>.
class JointState {
  public:
    explicit JointState(Eigen::MatrixXcd amp);

    static JointState product(const FockVector &a, const FockVector &b);

    int dim_a() const { return static_cast<int>(amp_.rows()); }
    int dim_b() const { return static_cast<int>(amp_.cols()); }
    const Eigen::MatrixXcd &amp() const { return amp_; }

    double norm() const { return amp_.norm(); }
    bool is_normalized(double tol = 1e-9) const;
    double mean_total_photons() const;

    DensityMatrix reduced(Mode keep) const;

  private:
    Eigen::MatrixXcd amp_;
};

// Two-mode beamsplitter U = exp(theta (a^dag b - a b^dag)) acting as
// a^dag -> cos(theta) a^dag - sin(theta) b^dag, b^dag -> sin(theta) a^dag + cos(theta) b^dag.
// With T = cos^2(theta) this is the resonator relation a' = sqrt(T) a + sqrt(1-T) B_in,
// B_out = -sqrt(1-T) a + sqrt(T) B_in. The unitary is exact inside each
// total-photon block; components pushed beyond the truncation are dropped.
class Beamsplitter {
  public:
    Beamsplitter(double theta, int dim);

    static Beamsplitter from_transmittance(double T, int dim);

    double theta() const { return theta_; }
    int dim() const { return dim_; }

    JointState apply(const JointState &state) const;
    JointState apply(const FockVector &a, const FockVector &b) const;

  private:
    double theta_;
    int dim_;
    // blocks_[N] is the (N+1)x(N+1) real orthogonal matrix on |n, N-n>, n = 0..N.
    std::vector<Eigen::MatrixXd> blocks_;
};

JointState beamsplitter_apply(const FockVector &a, const FockVector &b, double T);

// Components <x_theta|n> = exp(-i n theta) psi_n(x), x_theta = x cos(theta) + p sin(theta).
Eigen::RowVectorXcd quadrature_eigenbra(double x, double theta, int dim);

// Hermite functions psi_0..psi_{dim-1} at x by the normalized three-term recurrence.
Eigen::VectorXd hermite_functions(double x, int dim);

struct Projection {
    FockVector survivor;  // unnormalized
    double density;       // squared norm of survivor
};

// Projects `measured` onto <x_theta = value|.
Projection homodyne_project(const JointState &state, Mode measured, double theta, double value);

struct WindowResult {
    DensityMatrix survivor;
    double acceptance;
};

inline constexpr double kQuadratureBound = 12.0;
inline constexpr double kDefaultQuadratureStep = 1e-3;

// Integrates projected states over [lo, hi] (clipped to +-12) with the
// trapezoid rule at spacing <= step.
WindowResult window_condition(const JointState &state, Mode measured, double theta, double lo, double hi,
                              double step = kDefaultQuadratureStep);

// Positive operator K = sum_x w_x e(x)^T conj(e(x)) so that the conditioned
// (unnormalized) survivor is M K M^dag for a joint amplitude matrix M.
Eigen::MatrixXcd window_operator(int dim, double theta, double lo, double hi, double step = kDefaultQuadratureStep);

}  // namespace resmem

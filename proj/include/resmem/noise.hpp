#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "resmem/fock.hpp"

namespace resmem {

inline constexpr double kInfinite = std::numeric_limits<double>::infinity();

// Relaxation and pure-dephasing times; either may be infinite.
struct NoiseParams {
    double T1 = kInfinite;
    double Tphi = kInfinite;

    void validate() const;
};

struct CoherenceSeries {
    std::vector<double> t;
    std::vector<double> value;
};

// rho_nm(t) = sum_k rho_{n+k,m+k} sqrt(C(n+k,k) C(m+k,k)) (1-e^{-t/T1})^k
//             e^{-(n+m) t / 2T1} e^{-(n-m)^2 t / Tphi}
DensityMatrix evolve_closed_form(const DensityMatrix &rho, double t, const NoiseParams &params);

// Largest decay rate of the master-equation generator on a dim-level space.
double generator_rate_bound(int dim, const NoiseParams &params);

// Smallest RK4 step count satisfying rate * t / steps <= 1e-3.
long long oracle_steps_required(int dim, double t, const NoiseParams &params);

// Fixed-step RK4 on d rho/dt = (1/T1) D[a] rho + (2/Tphi) D[n] rho. The step
// propagator is built once and raised to the power `steps` by squaring.
DensityMatrix lindblad_oracle(const DensityMatrix &rho, double t, const NoiseParams &params, long long steps);

// Pure loss with transmission eta.
DensityMatrix apply_loss(const DensityMatrix &rho, double eta);

// (|rho_02| / sqrt(rho_00 rho_22))^(1/4).
double normalized_coherence(const DensityMatrix &rho);

// Exponential fit of rho_11(t) (or any decaying series) by log-linear least squares.
double fit_T1(const CoherenceSeries &series);

// Fits R(t) = R(0) e^{-t/Tphi}. With T1 given, R(t) is first divided by the
// coherence of the first state evolved under relaxation alone, which removes
// the residual T1 dependence of R. Returns +infinity for a constant R.
double fit_Tphi(const std::vector<DensityMatrix> &rho_series, const std::vector<double> &t,
                std::optional<double> T1 = std::nullopt);

CoherenceSeries coherence_series(const std::vector<DensityMatrix> &rho_series, const std::vector<double> &t);

}  // namespace resmem

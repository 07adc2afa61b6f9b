#include "resmem/breeding.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <string>

#include "resmem/errors.hpp"

namespace resmem {
namespace {

constexpr double kComponentCutoff = 1e-14;

double laguerre(int n, int a, double x) {
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 1.0 + a - x;
    for (int k = 1; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

void check_guard(double amplitude, int dim) {
    if (amplitude * amplitude + 6.0 * amplitude + 10.0 > dim) {
        throw DimensionError("bred amplitude " + std::to_string(amplitude) + " violates truncation guard for dim " +
                             std::to_string(dim));
    }
}

double measured_theta(Protocol protocol) { return protocol == Protocol::Cat ? std::numbers::pi / 2.0 : 0.0; }

double binomial(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

}  // namespace

void BreedingPlan::validate() const {
    if (steps < 1) {
        throw DomainError("breeding needs at least one step");
    }
    if (!(alpha >= 0.0)) {
        throw DomainError("cat amplitude must be non-negative");
    }
    if (conditioning.window && !(conditioning.lo < conditioning.hi)) {
        throw DomainError("empty conditioning window");
    }
    if (!(g > 0.0)) {
        throw DomainError("stabilizer spacing g must be positive");
    }
    check_guard(std::sqrt(steps + 1.0) * alpha, dim);
}

double step_transmittance(int k) {
    if (k < 1) {
        throw DomainError("breeding step index must be >= 1");
    }
    return double(k) / double(k + 1);
}

StepResult breed_step(const DensityMatrix &memory, const FockVector &input, int k, Protocol protocol,
                      const Conditioning &conditioning) {
    if (memory.dim() != input.dim()) {
        throw DimensionError("breed_step: memory and input dimensions differ");
    }
    return breed_step(memory, input, Beamsplitter::from_transmittance(step_transmittance(k), input.dim()), protocol,
                      conditioning);
}

StepResult breed_step(const DensityMatrix &memory, const FockVector &input, const Beamsplitter &bs, Protocol protocol,
                      const Conditioning &conditioning) {
    const int dim = input.dim();
    if (memory.dim() != dim || bs.dim() != dim) {
        throw DimensionError("breed_step: dimension mismatch");
    }
    const double theta = measured_theta(protocol);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (memory.rho() + memory.rho().adjoint()));
    const double total = memory.trace();
    Eigen::MatrixXcd k_op;
    if (conditioning.window) {
        k_op = window_operator(dim, theta, conditioning.lo, conditioning.hi);
    }

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const double w = es.eigenvalues()[j] / total;
        if (w < kComponentCutoff) {
            continue;
        }
        JointState joint = bs.apply(JointState::product(FockVector(es.eigenvectors().col(j)), input));
        if (conditioning.window) {
            out.noalias() += w * (joint.amp() * k_op * joint.amp().adjoint());
        } else {
            Eigen::VectorXcd v = homodyne_project(joint, Mode::B, theta, 0.0).survivor.amp();
            out.noalias() += w * (v * v.adjoint());
        }
    }
    const double density = out.trace().real();
    if (!(density > 1e-300)) {
        throw DomainError("breeding outcome has zero probability density");
    }
    out /= density;
    out = 0.5 * (out + out.adjoint()).eval();
    return StepResult{DensityMatrix(std::move(out)), density};
}

BreedingTrajectory run_breeding(const BreedingPlan &plan) {
    plan.validate();
    const FockVector input = cat_state(plan.alpha, plan.s, plan.dim);
    BreedingTrajectory traj;
    auto record = [&](const DensityMatrix &rho, double density) {
        auto [sx, sp] = gkp_stabilizer_expectation(rho, plan.g);
        traj.states.push_back(rho);
        traj.success_densities.push_back(density);
        traj.metrics.push_back(StepMetrics{sx, sp, rho.mean_photon_number(), rho.parity_expectation()});
    };
    record(DensityMatrix::pure(input), 1.0);
    for (int k = 1; k <= plan.steps; ++k) {
        StepResult r = breed_step(traj.states.back(), input, k, plan.protocol, plan.conditioning);
        record(r.state, r.success_density);
    }
    return traj;
}

FockVector theoretical_bred_state(int k, double alpha, Parity s, Protocol protocol, int dim) {
    if (k < 1) {
        throw DomainError("theoretical_bred_state needs k >= 1");
    }
    const double amplitude = std::sqrt(double(k)) * alpha;
    check_guard(amplitude, dim);
    const Complex i(0.0, 1.0);
    if (protocol == Protocol::Cat) {
        return cat_state(amplitude, parity_power(s, k), dim);
    }
    if (k == 1) {
        return cat_state(alpha, s, dim);
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    const double step = alpha / std::sqrt(double(k));
    for (int m = 0; m <= k; ++m) {
        double c = binomial(k, m) * ((sign(s) < 0 && m % 2 != 0) ? -1.0 : 1.0);
        v += c * coherent_state(i * double(2 * m - k) * step, dim).amp();
    }
    double n = v.norm();
    if (n < 1e-12) {
        throw DomainError("theoretical bred state vanishes");
    }
    return FockVector(v / n);
}

Eigen::MatrixXcd displacement_matrix(Complex beta, int dim) {
    if (dim < 2) {
        throw DimensionError("displacement dimension must be at least 2");
    }
    const double x = std::norm(beta);
    Eigen::MatrixXcd d(dim, dim);
    if (x == 0.0) {
        d.setIdentity();
        return d;
    }
    const double log_mod = 0.5 * std::log(x);
    const double phase = std::arg(beta);
    // <m|D|n> = sqrt(n!/m!) beta^(m-n) e^{-x/2} L_n^(m-n)(x) for m >= n, and
    // sqrt(m!/n!) (-conj beta)^(n-m) e^{-x/2} L_m^(n-m)(x) otherwise.
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            int lo = std::min(m, n);
            int diff = std::abs(m - n);
            double mag = std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + diff + 1.0)) + diff * log_mod - 0.5 * x);
            double ph = m >= n ? diff * phase : diff * (std::numbers::pi - phase);
            d(m, n) = mag * laguerre(lo, diff, x) * std::polar(1.0, ph);
        }
    }
    return d;
}

std::pair<double, double> gkp_stabilizer_expectation(const DensityMatrix &state, double g) {
    if (!(g > 0.0)) {
        throw DomainError("stabilizer spacing g must be positive");
    }
    const int dim = state.dim();
    const Complex sx = (state.rho() * displacement_matrix(Complex(0.0, g / std::sqrt(2.0)), dim)).trace();
    const Complex sp =
        (state.rho() * displacement_matrix(Complex(-std::sqrt(2.0) * std::numbers::pi / g, 0.0), dim)).trace();
    return {std::abs(sx), std::abs(sp)};
}

}  // namespace resmem

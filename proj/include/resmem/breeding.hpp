#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "resmem/fock.hpp"
#include "resmem/gates.hpp"

namespace resmem {

enum class Protocol { Cat, Gkp };

inline constexpr double kDefaultStabilizerG = 2.46;

// Ideal projection onto the quadrature value 0, or a window [lo, hi] on it.
struct Conditioning {
    bool window = false;
    double lo = 0.0;
    double hi = 0.0;

    static Conditioning ideal() { return {}; }
    static Conditioning range(double lo, double hi) { return {true, lo, hi}; }
};

struct BreedingPlan {
    Protocol protocol = Protocol::Cat;
    int steps = 1;
    double alpha = 1.0;
    Parity s = Parity::Odd;
    int dim = kDefaultDim;
    Conditioning conditioning;
    double g = kDefaultStabilizerG;

    // Throws DomainError / DimensionError when the plan cannot run.
    void validate() const;
};

struct StepMetrics {
    double stabilizer_x;
    double stabilizer_p;
    double mean_photons;
    double parity;
};

struct BreedingTrajectory {
    std::vector<DensityMatrix> states;  // input cat, then memory after each step
    std::vector<double> success_densities;  // 1 for the input entry
    std::vector<StepMetrics> metrics;
};

struct StepResult {
    DensityMatrix state;
    double success_density;
};

// Transmittance k/(k+1) used at breeding step k.
double step_transmittance(int k);

// Memory is mode A, input mode B; B is measured at p = 0 (cat) or x = 0 (gkp).
StepResult breed_step(const DensityMatrix &memory, const FockVector &input, int k, Protocol protocol,
                      const Conditioning &conditioning = Conditioning::ideal());
// Same with a prebuilt beamsplitter (must have transmittance k/(k+1)).
StepResult breed_step(const DensityMatrix &memory, const FockVector &input, const Beamsplitter &bs,
                      Protocol protocol, const Conditioning &conditioning);

BreedingTrajectory run_breeding(const BreedingPlan &plan);

// Closed-form state after combining k inputs (k - 1 breeding steps).
FockVector theoretical_bred_state(int k, double alpha, Parity s, Protocol protocol, int dim = kDefaultDim);

// <m|D(beta)|n> from the associated-Laguerre closed form.
Eigen::MatrixXcd displacement_matrix(Complex beta, int dim);

// (|<exp(i g x)>|, |<exp(2 pi i p / g)>|).
std::pair<double, double> gkp_stabilizer_expectation(const DensityMatrix &state, double g = kDefaultStabilizerG);

}  // namespace resmem

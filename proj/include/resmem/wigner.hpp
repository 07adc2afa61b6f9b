#pragma once

#include <Eigen/Dense>
#include <vector>

#include "resmem/fock.hpp"

namespace resmem {

struct WignerGrid {
    std::vector<double> xs;
    std::vector<double> ps;
    Eigen::MatrixXd w;  // w(i, j) = W(xs[j], ps[i])

    double dx() const { return xs.size() > 1 ? xs[1] - xs[0] : 0.0; }
    double dp() const { return ps.size() > 1 ? ps[1] - ps[0] : 0.0; }
    double integral() const;
};

inline constexpr double kDefaultWignerExtent = 5.0;
inline constexpr int kDefaultWignerPoints = 201;
inline constexpr double kNegativityThreshold = -1e-3;
inline constexpr double kDefaultProminence = 0.05;

std::vector<double> linspace(double lo, double hi, int n);

// Minimum half-width a grid must cover: sqrt(2<n> + 1) + 2.
double wigner_guard_radius(const DensityMatrix &rho);

// Laguerre-series Wigner function with W(0,0) = 1/pi for vacuum.
WignerGrid wigner_grid(const DensityMatrix &rho, const std::vector<double> &xs, const std::vector<double> &ps);
WignerGrid wigner_grid(const DensityMatrix &rho);

// Single-point evaluation (no coverage guard).
double wigner_point(const DensityMatrix &rho, double x, double p);

struct NegativityReport {
    double volume;
    int regions;
};

// Integrated negative part plus the number of 4-connected regions with W < threshold.
NegativityReport negativity_volume(const WignerGrid &grid, double threshold = kNegativityThreshold);

// <x_theta|rho|x_theta> on the given points.
std::vector<double> marginal(const DensityMatrix &rho, double theta, const std::vector<double> &grid);

// Local maxima whose topographic prominence is at least `prominence` times the global maximum.
int count_peaks(const std::vector<double> &density, double prominence = kDefaultProminence);

}  // namespace resmem

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "resmem/fock.hpp"
#include "resmem/memory.hpp"

namespace resmem {

struct HomodyneDataset {
    std::vector<double> theta;  // radians
    std::vector<double> x;
    std::uint64_t seed = 0;

    std::size_t size() const { return x.size(); }
};

struct TraceMatrix {
    Eigen::MatrixXd data;  // frames x samples
    double dt;
};

// 0, 30, ..., 150 degrees in radians.
std::vector<double> default_phases();

// Frame i uses phase i mod |phases| and draws x by inverse CDF from the
// marginal tabulated on [-12, 12] at step 1e-3, using stream (seed, i).
HomodyneDataset sample_homodyne(const DensityMatrix &rho, const std::vector<double> &phases, std::size_t n_frames,
                                std::uint64_t seed);

struct MleOptions {
    int iterations = 300;
    double plateau = 1e-9;  // stop when the per-frame log-likelihood gain drops below this
};

struct MleResult {
    DensityMatrix rho;
    std::vector<double> log_likelihood;  // initial value, then one entry per accepted iteration
    int iterations;
};

// Iterative R rho R reconstruction from the maximally mixed start. When a full
// step would lower the likelihood the diluted step (I + eps R) rho (I + eps R)
// is used with eps halved until it does not.
MleResult mle_reconstruct(const HomodyneDataset &data, int dim, const MleOptions &opt = {});

// Sum of log <x_theta|rho|x_theta> over the frames.
double log_likelihood(const HomodyneDataset &data, const DensityMatrix &rho);

struct PcaResult {
    TemporalMode mode;
    Eigen::VectorXd eigenvalues;  // descending
};

PcaResult pca_temporal_mode(const TraceMatrix &traces);

// trace_i(t) = g(t) q_i + N(0, noise_var/dt), row i from stream (seed, i).
TraceMatrix simulate_traces(const TemporalMode &mode, const std::vector<double> &quad_samples, double noise_var,
                            double dt, std::uint64_t seed);

}  // namespace resmem

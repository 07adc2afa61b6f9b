#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "resmem/errors.hpp"
#include "resmem/noise.hpp"
#include "resmem/rng.hpp"
#include "resmem/tomo.hpp"

using namespace resmem;

namespace {

// CDF of |psi_1(x)|^2 = 2 x^2 e^{-x^2} / sqrt(pi).
double fock1_cdf(double x) { return 0.5 * (1.0 + std::erf(x)) - x * std::exp(-x * x) / std::sqrt(std::numbers::pi); }

double ks_statistic(std::vector<double> xs, double (*cdf)(double)) {
    std::sort(xs.begin(), xs.end());
    const double n = double(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

TemporalMode decay_mode(int samples, double dt, double rate) {
    TemporalMode m{std::vector<double>(samples), std::vector<double>(samples), dt};
    for (int i = 0; i < samples; ++i) {
        m.t[i] = i * dt;
        m.g[i] = std::exp(-0.5 * rate * m.t[i]);
    }
    normalize_mode(m);
    return m;
}

}  // namespace

TEST(Tomo, DefaultPhases) {
    std::vector<double> p = default_phases();
    ASSERT_EQ(p.size(), 6u);
    EXPECT_NEAR(p[5], 150.0 * std::numbers::pi / 180.0, 1e-15);
}

TEST(Tomo, SingleFockSamplingPassesKs) {
    DensityMatrix one = DensityMatrix::pure(FockVector::basis(1, 10));
    for (double theta : {0.0, 1.1}) {
        HomodyneDataset d = sample_homodyne(one, {theta}, 20000, 5);
        // 1% critical value 1.63 / sqrt(n); |1> is phase invariant.
        EXPECT_LT(ks_statistic(d.x, fock1_cdf), 1.63 / std::sqrt(20000.0)) << theta;
    }
}

TEST(Tomo, SamplingIsDeterministicAndRoundRobin) {
    DensityMatrix rho = DensityMatrix::pure(coherent_state(0.5, 20));
    HomodyneDataset a = sample_homodyne(rho, default_phases(), 1200, 9);
    HomodyneDataset b = sample_homodyne(rho, default_phases(), 1200, 9);
    HomodyneDataset c = sample_homodyne(rho, default_phases(), 1200, 10);
    EXPECT_EQ(a.x, b.x);
    EXPECT_NE(a.x, c.x);
    EXPECT_DOUBLE_EQ(a.theta[7], default_phases()[1]);
    // Coherent state mean along theta: sqrt2 Re(beta e^{-i theta}).
    double sum0 = 0.0;
    int n0 = 0;
    for (std::size_t i = 0; i < a.size(); i += 6) {
        sum0 += a.x[i];
        ++n0;
    }
    EXPECT_NEAR(sum0 / n0, std::sqrt(2.0) * 0.5, 0.1);
    EXPECT_THROW(sample_homodyne(rho, {}, 10, 1), DomainError);
}

TEST(Tomo, MleRecoversSimpleStatesMonotonically) {
    for (int n : {0, 1}) {
        DensityMatrix truth = DensityMatrix::pure(FockVector::basis(n, 8));
        HomodyneDataset d = sample_homodyne(truth, default_phases(), 20000, 3);
        MleResult r = mle_reconstruct(d, 8);
        EXPECT_GT(fidelity(r.rho, truth), 0.98) << n;
        EXPECT_TRUE(r.rho.is_physical());
        for (std::size_t i = 1; i < r.log_likelihood.size(); ++i) {
            EXPECT_GE(r.log_likelihood[i], r.log_likelihood[i - 1]);
        }
        EXPECT_NEAR(log_likelihood(d, r.rho), r.log_likelihood.back(), 1e-6 * std::abs(r.log_likelihood.back()));
    }
}

TEST(Tomo, LossyPhotonPopulation) {
    DensityMatrix lossy = apply_loss(DensityMatrix::pure(FockVector::basis(1, 10)), 0.93);
    HomodyneDataset d = sample_homodyne(lossy, default_phases(), 50000, 4);
    MleResult r = mle_reconstruct(d, 10);
    EXPECT_NEAR(r.rho.population(1), 0.93, 0.02);
}

TEST(Tomo, MleGuards) {
    DensityMatrix rho = DensityMatrix::pure(FockVector::basis(0, 6));
    HomodyneDataset small = sample_homodyne(rho, default_phases(), 500, 1);
    EXPECT_THROW(mle_reconstruct(small, 6), DomainError);
    HomodyneDataset ok = sample_homodyne(rho, default_phases(), 1200, 1);
    EXPECT_THROW(mle_reconstruct(ok, 31), DimensionError);
    EXPECT_THROW(mle_reconstruct(ok, 1), DimensionError);
}

TEST(Tomo, PcaRecoversDecayMode) {
    const int samples = 60;
    const double dt = 1e-8;
    TemporalMode mode = decay_mode(samples, dt, 2.0 * std::numbers::pi * 1.5e6);
    std::vector<double> q(10000);
    CounterRng rng(77, 0);
    for (double &v : q) {
        v = rng.normal();
    }
    TraceMatrix tr = simulate_traces(mode, q, 0.1, dt, 21);
    PcaResult pca = pca_temporal_mode(tr);
    double ov = 0.0;
    for (int i = 0; i < samples; ++i) {
        ov += pca.mode.g[i] * mode.g[i] * dt;
    }
    EXPECT_GT(ov * ov, 0.99);
    EXPECT_GT(ov, 0.0);
    for (Eigen::Index i = 1; i < pca.eigenvalues.size(); ++i) {
        EXPECT_LE(pca.eigenvalues[i], pca.eigenvalues[i - 1]);
    }
}

TEST(Tomo, ProjectedVarianceAddsNoise) {
    const int samples = 40;
    const double dt = 1e-8;
    TemporalMode mode = decay_mode(samples, dt, 5e6);
    std::vector<double> q(10000);
    CounterRng rng(78, 0);
    for (double &v : q) {
        v = 0.7 * rng.normal();
    }
    const double noise_var = 0.2;
    TraceMatrix tr = simulate_traces(mode, q, noise_var, dt, 22);
    double mean = 0.0, sq = 0.0;
    for (Eigen::Index i = 0; i < tr.data.rows(); ++i) {
        double proj = 0.0;
        for (int j = 0; j < samples; ++j) {
            proj += tr.data(i, j) * mode.g[j] * dt;
        }
        mean += proj;
        sq += proj * proj;
    }
    const double n = double(tr.data.rows());
    const double var = sq / n - (mean / n) * (mean / n);
    double qvar = 0.0;
    for (double v : q) {
        qvar += v * v;
    }
    qvar /= n;
    // Rectangle projection weight; the mode is normalized with the trapezoid.
    double w = 0.0;
    for (double g : mode.g) {
        w += g * g * dt;
    }
    EXPECT_NEAR(var / (qvar * w * w + noise_var * w), 1.0, 0.03);
}

TEST(Tomo, PcaGuards) {
    TemporalMode mode = decay_mode(20, 1e-8, 5e6);
    std::vector<double> q(100, 1.0);
    TraceMatrix few = simulate_traces(mode, q, 0.1, 1e-8, 1);
    EXPECT_THROW(pca_temporal_mode(few), ContractError);
    std::vector<double> many(400);
    for (std::size_t i = 0; i < many.size(); ++i) {
        many[i] = std::sin(double(i));
    }
    TraceMatrix noiseless = simulate_traces(mode, many, 0.0, 1e-8, 1);
    EXPECT_THROW(pca_temporal_mode(noiseless), DomainError);
}

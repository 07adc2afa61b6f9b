#include <gtest/gtest.h>

#include <cmath>

#include "resmem/errors.hpp"
#include "resmem/gates.hpp"
#include "resmem/noise.hpp"
#include "resmem/rng.hpp"

using namespace resmem;

namespace {

using Mat = Eigen::MatrixXcd;

// d rho/dt = (1/T1) D[a] rho + (2/Tphi) D[n] rho, written out directly.
Mat lindblad_rhs(const Mat &rho, const Mat &a, const Mat &n, double g1, double gphi) {
    const Mat ad = a.adjoint();
    Mat out = g1 * (a * rho * ad - 0.5 * (ad * a * rho + rho * ad * a));
    out += gphi * (n * rho * n - 0.5 * (n * n * rho + rho * n * n));
    return out;
}

Mat rk4(Mat rho, double t, const NoiseParams &p, int steps) {
    const int d = int(rho.rows());
    Mat a = annihilation(d), n = number_operator(d);
    const double g1 = std::isinf(p.T1) ? 0.0 : 1.0 / p.T1;
    const double gphi = std::isinf(p.Tphi) ? 0.0 : 2.0 / p.Tphi;
    const double h = t / steps;
    for (int s = 0; s < steps; ++s) {
        Mat k1 = lindblad_rhs(rho, a, n, g1, gphi);
        Mat k2 = lindblad_rhs(rho + 0.5 * h * k1, a, n, g1, gphi);
        Mat k3 = lindblad_rhs(rho + 0.5 * h * k2, a, n, g1, gphi);
        Mat k4 = lindblad_rhs(rho + h * k3, a, n, g1, gphi);
        rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

DensityMatrix random_state(int dim, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            m(i, j) = Complex(rng.normal(), rng.normal());
        }
    }
    Mat rho = m * m.adjoint();
    return DensityMatrix(rho / rho.trace().real());
}

const NoiseParams kPaper{2.3e-6, 0.96e-6};

}  // namespace

TEST(Noise, ClosedFormMatchesIndependentRk4) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        DensityMatrix rho = random_state(6, seed);
        for (double t : {0.2e-6, 1.0e-6, 3.0 * kPaper.T1}) {
            const double rate = generator_rate_bound(6, kPaper);
            const int steps = int(std::ceil(rate * t / 0.01));
            Mat ref = rk4(rho.rho(), t, kPaper, steps);
            DensityMatrix cf = evolve_closed_form(rho, t, kPaper);
            EXPECT_LT((cf.rho() - ref).cwiseAbs().maxCoeff(), 1e-9) << seed << " " << t;
        }
    }
}

TEST(Noise, LibraryOracleAgreesWithClosedForm) {
    DensityMatrix rho = random_state(5, 7);
    const double t = 1.5e-6;
    const long long steps = oracle_steps_required(5, t, kPaper);
    DensityMatrix o = lindblad_oracle(rho, t, kPaper, steps);
    EXPECT_LT((o.rho() - evolve_closed_form(rho, t, kPaper).rho()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_THROW(lindblad_oracle(rho, t, kPaper, steps / 10), InstabilityError);
}

TEST(Noise, SemigroupTraceAndPositivity) {
    DensityMatrix rho = DensityMatrix::pure(squeezed_single_photon(0.5, 40));
    for (double t1 : {0.1e-6, 0.4e-6}) {
        for (double t2 : {0.05e-6, 0.7e-6}) {
            DensityMatrix a = evolve_closed_form(evolve_closed_form(rho, t1, kPaper), t2, kPaper);
            DensityMatrix b = evolve_closed_form(rho, t1 + t2, kPaper);
            EXPECT_LT((a.rho() - b.rho()).cwiseAbs().maxCoeff(), 1e-9);
            EXPECT_NEAR(b.trace(), 1.0, 1e-12);
            EXPECT_TRUE(b.is_physical());
        }
    }
    EXPECT_THROW(evolve_closed_form(rho, -1.0, kPaper), DomainError);
}

TEST(Noise, PureChannels) {
    DensityMatrix one = DensityMatrix::pure(FockVector::basis(1, 6));
    const double t = 0.8e-6;
    EXPECT_NEAR(evolve_closed_form(one, t, {kPaper.T1, kInfinite}).population(1), std::exp(-t / kPaper.T1), 1e-14);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(6);
    v[0] = v[1] = 1.0 / std::sqrt(2.0);
    DensityMatrix plus = DensityMatrix::pure(FockVector(v));
    DensityMatrix deph = evolve_closed_form(plus, t, {kInfinite, kPaper.Tphi});
    EXPECT_NEAR(std::abs(deph(0, 1)), 0.5 * std::exp(-t / kPaper.Tphi), 1e-14);
    EXPECT_NEAR(deph.population(1), 0.5, 1e-14);
    DensityMatrix same = evolve_closed_form(plus, t, {kInfinite, kInfinite});
    EXPECT_LT((same.rho() - plus.rho()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW((NoiseParams{-1.0, 1.0}).validate(), DomainError);
}

TEST(Noise, LossMatchesBeamsplitterWithVacuum) {
    const int dim = 30;
    FockVector psi = squeezed_single_photon(0.4, dim);
    for (double eta : {0.93, 0.5, 0.1}) {
        JointState j = Beamsplitter::from_transmittance(eta, dim).apply(psi, FockVector::basis(0, dim));
        DensityMatrix ref = j.reduced(Mode::A);
        DensityMatrix lossy = apply_loss(DensityMatrix::pure(psi), eta);
        EXPECT_LT((lossy.rho() - ref.rho()).cwiseAbs().maxCoeff(), 1e-12) << eta;
    }
    EXPECT_LT((apply_loss(DensityMatrix::pure(psi), 1.0).rho() - DensityMatrix::pure(psi).rho()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_THROW(apply_loss(DensityMatrix::pure(psi), 0.0), DomainError);
    EXPECT_THROW(apply_loss(DensityMatrix::pure(psi), 1.1), DomainError);
}

TEST(Noise, FitT1RecoversExactly) {
    CoherenceSeries s;
    for (int i = 0; i < 5; ++i) {
        s.t.push_back(i * 0.5e-6);
        s.value.push_back(std::exp(-s.t.back() / 2.3e-6));
    }
    EXPECT_NEAR(fit_T1(s), 2.3e-6, 1e-9 * 2.3e-6);
    CoherenceSeries flat{{0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
    EXPECT_THROW(fit_T1(flat), FitError);
    CoherenceSeries short_series{{0.0, 1.0}, {1.0, 0.5}};
    EXPECT_THROW(fit_T1(short_series), FitError);
}

TEST(Noise, FitTphiWithRelaxationCompensation) {
    DensityMatrix start = apply_loss(DensityMatrix::pure(squeezed_single_photon(0.5, 40)), 0.93);
    std::vector<double> ts;
    std::vector<DensityMatrix> series;
    for (int i = 0; i < 8; ++i) {
        ts.push_back(i * 0.2e-6);
        series.push_back(evolve_closed_form(start, ts.back(), kPaper));
    }
    EXPECT_NEAR(fit_Tphi(series, ts, kPaper.T1), 0.96e-6, 1e-9 * 0.96e-6);
    // Without compensation relaxation leaks into R(t).
    EXPECT_GT(std::abs(fit_Tphi(series, ts) - 0.96e-6), 1e-9);
    // Pure dephasing needs no compensation.
    std::vector<DensityMatrix> pure_series;
    for (double t : ts) {
        pure_series.push_back(evolve_closed_form(start, t, {kInfinite, kPaper.Tphi}));
    }
    EXPECT_NEAR(fit_Tphi(pure_series, ts), 0.96e-6, 1e-9 * 0.96e-6);
    std::vector<DensityMatrix> frozen(ts.size(), start);
    EXPECT_TRUE(std::isinf(fit_Tphi(frozen, ts)));
}

TEST(Noise, CoherenceNeedsTwoPhotonTerm) {
    EXPECT_THROW(normalized_coherence(DensityMatrix::pure(FockVector::basis(1, 5))), FitError);
    EXPECT_THROW(normalized_coherence(DensityMatrix::pure(FockVector::basis(0, 2))), DimensionError);
    EXPECT_NEAR(normalized_coherence(DensityMatrix::pure(squeezed_vacuum(0.3, 30))), 1.0, 1e-12);
}

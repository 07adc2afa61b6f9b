#include "resmem/tomo.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "resmem/errors.hpp"
#include "resmem/gates.hpp"
#include "resmem/log.hpp"
#include "resmem/rng.hpp"

namespace resmem {
namespace {

constexpr std::size_t kMinFrames = 1000;
constexpr int kMaxTomoDim = 30;
constexpr double kProbabilityFloor = 1e-300;

// Real part of e^{-i theta n} rho e^{i theta n}; the quadrature density is psi^T Re(rho_theta) psi.
Eigen::MatrixXd rotated_real(const Eigen::MatrixXcd &rho, double theta) {
    const int d = static_cast<int>(rho.rows());
    Eigen::MatrixXd out(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            out(n, m) = (rho(n, m) * std::polar(1.0, -theta * (n - m))).real();
        }
    }
    return out;
}

Eigen::MatrixXd hermite_table(const std::vector<double> &xs, int dim) {
    Eigen::MatrixXd psi(dim, static_cast<Eigen::Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        psi.col(static_cast<Eigen::Index>(i)) = hermite_functions(xs[i], dim);
    }
    return psi;
}

// Frames grouped by identical phase.
struct PhaseGroup {
    double theta;
    Eigen::MatrixXd psi;  // dim x frames
};

std::vector<PhaseGroup> group_frames(const HomodyneDataset &data, int dim) {
    std::map<double, std::vector<double>> by_phase;
    for (std::size_t i = 0; i < data.size(); ++i) {
        by_phase[data.theta[i]].push_back(data.x[i]);
    }
    std::vector<PhaseGroup> groups;
    for (auto &[theta, xs] : by_phase) {
        groups.push_back(PhaseGroup{theta, hermite_table(xs, dim)});
    }
    return groups;
}

struct Evaluation {
    double log_likelihood;
    Eigen::MatrixXcd r;
};

Evaluation evaluate(const std::vector<PhaseGroup> &groups, const Eigen::MatrixXcd &rho, bool want_r) {
    const int d = static_cast<int>(rho.rows());
    long double ll = 0.0L;
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d, d);
    for (const PhaseGroup &g : groups) {
        const Eigen::MatrixXd a = rotated_real(rho, g.theta) * g.psi;
        Eigen::VectorXd pr = (a.array() * g.psi.array()).colwise().sum().transpose();
        for (Eigen::Index i = 0; i < pr.size(); ++i) {
            pr[i] = std::max(pr[i], kProbabilityFloor);
            ll += std::log(static_cast<long double>(pr[i]));
        }
        if (want_r) {
            Eigen::MatrixXd rt = g.psi * pr.cwiseInverse().asDiagonal() * g.psi.transpose();
            for (int n = 0; n < d; ++n) {
                for (int m = 0; m < d; ++m) {
                    r(n, m) += rt(n, m) * std::polar(1.0, g.theta * (n - m));
                }
            }
        }
    }
    return {static_cast<double>(ll), r};
}

Eigen::MatrixXcd normalize_trace(Eigen::MatrixXcd m) {
    m = 0.5 * (m + m.adjoint()).eval();
    m /= m.trace().real();
    return m;
}

}  // namespace

std::vector<double> default_phases() {
    std::vector<double> p;
    for (int deg = 0; deg < 180; deg += 30) {
        p.push_back(deg * std::numbers::pi / 180.0);
    }
    return p;
}

HomodyneDataset sample_homodyne(const DensityMatrix &rho, const std::vector<double> &phases, std::size_t n_frames,
                                std::uint64_t seed) {
    if (!rho.is_normalized(1e-6)) {
        throw ContractError("homodyne sampling requires a normalized state");
    }
    if (phases.empty()) {
        throw DomainError("at least one measurement phase is required");
    }
    const int cells = static_cast<int>(std::llround(2.0 * kQuadratureBound / kDefaultQuadratureStep));
    std::vector<double> xs(cells + 1);
    for (int i = 0; i <= cells; ++i) {
        xs[i] = -kQuadratureBound + i * kDefaultQuadratureStep;
    }
    const Eigen::MatrixXd psi = hermite_table(xs, rho.dim());

    std::vector<std::vector<double>> cdfs;
    for (double theta : phases) {
        const Eigen::MatrixXd a = rotated_real(rho.rho(), theta) * psi;
        Eigen::VectorXd dens = (a.array() * psi.array()).colwise().sum().transpose().cwiseMax(0.0);
        std::vector<double> cdf(cells + 1, 0.0);
        for (int i = 1; i <= cells; ++i) {
            cdf[i] = cdf[i - 1] + 0.5 * kDefaultQuadratureStep * (dens[i - 1] + dens[i]);
        }
        const double total = cdf.back();
        if (!(total > 0.0)) {
            throw DomainError("quadrature distribution has zero mass");
        }
        for (double &c : cdf) {
            c /= total;
        }
        cdfs.push_back(std::move(cdf));
    }

    HomodyneDataset data{std::vector<double>(n_frames), std::vector<double>(n_frames), seed};
    for (std::size_t f = 0; f < n_frames; ++f) {
        const std::size_t k = f % phases.size();
        CounterRng rng(seed, f);
        const double u = rng.uniform();
        const std::vector<double> &cdf = cdfs[k];
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t j = std::clamp<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), 1, cdf.size() - 1);
        const double lo = cdf[j - 1], hi = cdf[j];
        const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
        data.theta[f] = phases[k];
        data.x[f] = xs[j - 1] + frac * kDefaultQuadratureStep;
    }
    return data;
}

double log_likelihood(const HomodyneDataset &data, const DensityMatrix &rho) {
    return evaluate(group_frames(data, rho.dim()), rho.rho(), false).log_likelihood;
}

MleResult mle_reconstruct(const HomodyneDataset &data, int dim, const MleOptions &opt) {
    if (data.size() < kMinFrames) {
        throw DomainError("tomography needs at least 1000 frames");
    }
    if (dim < 2 || dim > kMaxTomoDim) {
        throw DimensionError("tomography dimension must lie in [2, 30]");
    }
    const std::vector<PhaseGroup> groups = group_frames(data, dim);
    if (groups.size() < 2) {
        log_warning("mle_reconstruct: single measurement phase, reconstruction is ill-conditioned");
    }
    const double frames = static_cast<double>(data.size());

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(dim, dim) / double(dim);
    Evaluation cur = evaluate(groups, rho, true);
    MleResult result{DensityMatrix(rho), {cur.log_likelihood}, 0};
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

    for (int it = 0; it < opt.iterations; ++it) {
        const Eigen::MatrixXcd r = cur.r / frames;
        Eigen::MatrixXcd cand = normalize_trace(r * rho * r);
        Evaluation next = evaluate(groups, cand, true);
        double eps = 1.0;
        while (next.log_likelihood < cur.log_likelihood && eps > 1e-8) {
            const Eigen::MatrixXcd step = id + eps * r;
            cand = normalize_trace(step * rho * step);
            next = evaluate(groups, cand, true);
            eps *= 0.5;
        }
        if (next.log_likelihood < cur.log_likelihood) {
            break;
        }
        const double gain = (next.log_likelihood - cur.log_likelihood) / frames;
        rho = cand;
        cur = std::move(next);
        result.log_likelihood.push_back(cur.log_likelihood);
        result.iterations = it + 1;
        if (gain < opt.plateau) {
            break;
        }
    }
    result.rho = DensityMatrix(rho);
    return result;
}

PcaResult pca_temporal_mode(const TraceMatrix &traces) {
    const Eigen::Index frames = traces.data.rows();
    const Eigen::Index samples = traces.data.cols();
    if (samples < 2 || frames < 10 * samples) {
        throw ContractError("PCA needs at least ten frames per sample");
    }
    if (!(traces.dt > 0.0)) {
        throw DomainError("trace sample spacing must be positive");
    }
    const Eigen::RowVectorXd mean = traces.data.colwise().mean();
    const Eigen::MatrixXd centered = traces.data.rowwise() - mean;
    const Eigen::MatrixXd cov = centered.transpose() * centered / double(frames - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    const Eigen::VectorXd ev = es.eigenvalues().reverse();
    if (!(ev[samples - 1] > 1e-12 * ev[0])) {
        throw DomainError("rank-deficient trace covariance");
    }
    Eigen::VectorXd v = es.eigenvectors().col(samples - 1);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0.0) {
        v = -v;
    }
    TemporalMode mode{std::vector<double>(samples), std::vector<double>(samples), traces.dt};
    for (Eigen::Index i = 0; i < samples; ++i) {
        mode.t[i] = double(i) * traces.dt;
        mode.g[i] = v[i] / std::sqrt(traces.dt);
    }
    return {mode, ev};
}

TraceMatrix simulate_traces(const TemporalMode &mode, const std::vector<double> &quad_samples, double noise_var,
                            double dt, std::uint64_t seed) {
    if (!mode.is_normalized(1e-3)) {
        throw ContractError("trace synthesis requires a normalized mode");
    }
    if (!(dt > 0.0) || !(noise_var >= 0.0)) {
        throw DomainError("trace synthesis needs dt > 0 and noise_var >= 0");
    }
    const auto frames = static_cast<Eigen::Index>(quad_samples.size());
    const auto samples = static_cast<Eigen::Index>(mode.g.size());
    TraceMatrix tm{Eigen::MatrixXd(frames, samples), dt};
    const double sigma = std::sqrt(noise_var / dt);
    for (Eigen::Index i = 0; i < frames; ++i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        for (Eigen::Index j = 0; j < samples; ++j) {
            double noise = sigma > 0.0 ? sigma * rng.normal() : 0.0;
            tm.data(i, j) = mode.g[j] * quad_samples[i] + noise;
        }
    }
    return tm;
}

}  // namespace resmem

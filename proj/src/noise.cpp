#include "resmem/noise.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "resmem/errors.hpp"
#include "resmem/log.hpp"

namespace resmem {
namespace {

constexpr double kOracleStepBound = 1e-3;
constexpr double kEdgeWeightWarning = 1e-6;
constexpr int kEdgeLevels = 5;

double rate(double T) { return std::isinf(T) ? 0.0 : 1.0 / T; }

void check_state(const DensityMatrix &rho) {
    if (!rho.is_normalized(1e-6)) {
        throw ContractError("noise evolution requires a normalized density matrix");
    }
}

struct LinearFit {
    double slope;
    double intercept;
};

LinearFit log_linear_fit(const std::vector<double> &t, const std::vector<double> &y) {
    const std::size_t n = t.size();
    double st = 0.0, sy = 0.0;
    std::vector<double> ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        ly[i] = std::log(y[i]);
        st += t[i];
        sy += ly[i];
    }
    const double mt = st / n, my = sy / n;
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (ly[i] - my);
    }
    if (!(stt > 0.0)) {
        throw FitError("fit needs at least two distinct times");
    }
    const double slope = sty / stt;
    return {slope, my - slope * mt};
}

void check_series(const std::vector<double> &t, const std::vector<double> &y) {
    if (t.size() != y.size()) {
        throw FitError("time and value arrays differ in length");
    }
    if (t.size() < 3) {
        throw FitError("fit needs at least three points");
    }
    for (double v : y) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw FitError("fit needs positive finite values");
        }
    }
}

}  // namespace

void NoiseParams::validate() const {
    if (!(T1 > 0.0) || !(Tphi > 0.0)) {
        throw DomainError("T1 and Tphi must be positive or infinite");
    }
}

DensityMatrix evolve_closed_form(const DensityMatrix &rho, double t, const NoiseParams &params) {
    params.validate();
    if (!(t >= 0.0)) {
        throw DomainError("evolution time must be non-negative");
    }
    check_state(rho);
    const int d = rho.dim();
    if (rho.edge_weight(kEdgeLevels) > kEdgeWeightWarning) {
        log_warning("evolve_closed_form: weight " + std::to_string(rho.edge_weight(kEdgeLevels)) +
                    " in the top Fock levels; result may be inaccurate");
    }
    if (t == 0.0) {
        return rho;
    }
    const double g1 = rate(params.T1);
    const double gphi = rate(params.Tphi);
    const double p = -std::expm1(-g1 * t);
    const double log_p = p > 0.0 ? std::log(p) : 0.0;
    std::vector<double> lf(2 * d + 1);
    for (int i = 0; i <= 2 * d; ++i) {
        lf[i] = std::lgamma(i + 1.0);
    }
    auto log_binom = [&](int n, int k) { return lf[n] - lf[k] - lf[n - k]; };

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            const double base = -0.5 * (n + m) * g1 * t - double((n - m) * (n - m)) * gphi * t;
            Complex s = rho(n, m);
            if (p > 0.0) {
                for (int k = 1; n + k < d && m + k < d; ++k) {
                    double lc = 0.5 * (log_binom(n + k, k) + log_binom(m + k, k)) + k * log_p;
                    s += rho(n + k, m + k) * std::exp(lc);
                }
            }
            out(n, m) = s * std::exp(base);
        }
    }
    return DensityMatrix(std::move(out));
}

double generator_rate_bound(int dim, const NoiseParams &params) {
    params.validate();
    const double g1 = rate(params.T1);
    const double gphi = rate(params.Tphi);
    double best = 0.0;
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) {
            best = std::max(best, 0.5 * (n + m) * g1 + double((n - m) * (n - m)) * gphi);
        }
    }
    return best;
}

long long oracle_steps_required(int dim, double t, const NoiseParams &params) {
    const double r = generator_rate_bound(dim, params);
    return std::max(1LL, static_cast<long long>(std::ceil(r * t / kOracleStepBound)));
}

DensityMatrix lindblad_oracle(const DensityMatrix &rho, double t, const NoiseParams &params, long long steps) {
    params.validate();
    if (!(t >= 0.0)) {
        throw DomainError("evolution time must be non-negative");
    }
    if (steps < 1) {
        throw InstabilityError("oracle needs at least one step");
    }
    const int d = rho.dim();
    const double h = t / double(steps);
    if (generator_rate_bound(d, params) * h > kOracleStepBound * (1.0 + 1e-12)) {
        throw InstabilityError("oracle step too large: rate * dt exceeds 1e-3");
    }
    // Column-major vec: vec(A X B) = (B^T kron A) vec(X).
    const Eigen::MatrixXd a = annihilation(d).real();
    const Eigen::MatrixXd num = a.transpose() * a;
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    auto kron = [](const Eigen::MatrixXd &x, const Eigen::MatrixXd &y) {
        Eigen::MatrixXd k(x.rows() * y.rows(), x.cols() * y.cols());
        for (int i = 0; i < x.rows(); ++i) {
            for (int j = 0; j < x.cols(); ++j) {
                k.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
            }
        }
        return k;
    };
    auto dissipator = [&](const Eigen::MatrixXd &l) {
        const Eigen::MatrixXd ll = l.transpose() * l;
        return Eigen::MatrixXd(kron(l, l) - 0.5 * kron(id, ll) - 0.5 * kron(ll.transpose(), id));
    };
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(d * d, d * d);
    if (!std::isinf(params.T1)) {
        gen += dissipator(a) / params.T1;
    }
    if (!std::isinf(params.Tphi)) {
        gen += dissipator(num) * (2.0 / params.Tphi);
    }

    // One RK4 step of a linear system is the Taylor polynomial of degree 4.
    const Eigen::MatrixXd hl = h * gen;
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(d * d, d * d);
    Eigen::MatrixXd step = term;
    for (int k = 1; k <= 4; ++k) {
        term = (term * hl / double(k)).eval();
        step += term;
    }
    Eigen::MatrixXd prop = Eigen::MatrixXd::Identity(d * d, d * d);
    for (long long e = steps; e > 0; e >>= 1) {
        if (e & 1) {
            prop = (prop * step).eval();
        }
        if (e > 1) {
            step = (step * step).eval();
        }
    }
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.rho().data(), d * d);
    Eigen::VectorXcd w = prop.cast<Complex>() * v;
    return DensityMatrix(Eigen::Map<Eigen::MatrixXcd>(w.data(), d, d));
}

DensityMatrix apply_loss(const DensityMatrix &rho, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw DomainError("loss transmission must lie in (0, 1]");
    }
    if (eta == 1.0) {
        check_state(rho);
        return rho;
    }
    return evolve_closed_form(rho, -std::log(eta), NoiseParams{1.0, kInfinite});
}

double normalized_coherence(const DensityMatrix &rho) {
    if (rho.dim() < 3) {
        throw DimensionError("coherence needs at least three Fock levels");
    }
    const double c = std::abs(rho(0, 2));
    const double p = rho.population(0) * rho.population(2);
    if (!(c > 0.0) || !(p > 0.0)) {
        throw FitError("state has zero 0-2 coherence");
    }
    return std::pow(c / std::sqrt(p), 0.25);
}

double fit_T1(const CoherenceSeries &series) {
    check_series(series.t, series.value);
    LinearFit f = log_linear_fit(series.t, series.value);
    if (!(f.slope < 0.0)) {
        throw FitError("series does not decay");
    }
    return -1.0 / f.slope;
}

CoherenceSeries coherence_series(const std::vector<DensityMatrix> &rho_series, const std::vector<double> &t) {
    if (rho_series.size() != t.size()) {
        throw FitError("state and time arrays differ in length");
    }
    CoherenceSeries s{t, std::vector<double>(t.size())};
    for (std::size_t i = 0; i < t.size(); ++i) {
        s.value[i] = normalized_coherence(rho_series[i]);
    }
    return s;
}

double fit_Tphi(const std::vector<DensityMatrix> &rho_series, const std::vector<double> &t, std::optional<double> T1) {
    CoherenceSeries s = coherence_series(rho_series, t);
    if (T1) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            DensityMatrix ref = evolve_closed_form(rho_series.front(), t[i] - t.front(), NoiseParams{*T1, kInfinite});
            s.value[i] /= normalized_coherence(ref);
        }
    }
    check_series(s.t, s.value);
    LinearFit f = log_linear_fit(s.t, s.value);
    const double span = s.t.back() - s.t.front();
    if (std::abs(f.slope * span) < 1e-12) {
        return kInfinite;
    }
    if (f.slope > 0.0) {
        throw FitError("coherence grows with time");
    }
    return -1.0 / f.slope;
}

}  // namespace resmem

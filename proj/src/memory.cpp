#include "resmem/memory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "resmem/errors.hpp"
#include "resmem/log.hpp"

namespace resmem {
namespace {

constexpr double kTfTolerance = 1e-4;
constexpr double kMaxStepFraction = 0.01;

}  // namespace

double trapezoid_segment(double a, double b, double dt) {
    if ((a == 0.0) != (b == 0.0)) {
        return 0.0;
    }
    return 0.5 * dt * (a + b);
}

namespace {

double default_cap(const TemporalMode &mode, const ScheduleOptions &opt) {
    if (opt.gamma_cap > 0.0) {
        return opt.gamma_cap;
    }
    double peak = 0.0;
    for (double v : mode.g) {
        peak = std::max(peak, v * v);
    }
    return kCapFactor * peak;
}

void check_mode(const TemporalMode &mode) {
    if (mode.g.size() != mode.t.size() || mode.g.size() < 2 || !(mode.dt > 0.0)) {
        throw DimensionError("temporal mode needs at least two samples on a positive step");
    }
    if (std::all_of(mode.g.begin(), mode.g.end(), [](double v) { return v == 0.0; })) {
        throw DomainError("temporal mode is identically zero");
    }
    if (!mode.is_normalized()) {
        throw ContractError("temporal mode is not normalized");
    }
}

// Right-to-left cumulative trapezoid integral of g^2, R_i = int_{t_i}^{end}.
std::vector<double> remaining_norm(const TemporalMode &mode) {
    const std::size_t n = mode.g.size();
    std::vector<double> r(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        r[i] = r[i + 1] + trapezoid_segment(mode.g[i] * mode.g[i], mode.g[i + 1] * mode.g[i + 1], mode.dt);
    }
    return r;
}

// gamma = g^2 / D with the divergent edge (D below threshold) pinned to the cap.
CouplingSchedule ratio_schedule(const TemporalMode &mode, const std::vector<double> &denom, double cap, double threshold,
                                const char *what) {
    CouplingSchedule s{mode.t, std::vector<double>(mode.g.size(), 0.0), cap, mode.dt};
    int capped = 0;
    for (std::size_t i = 0; i < mode.g.size(); ++i) {
        const double g2 = mode.g[i] * mode.g[i];
        if (g2 == 0.0) {
            continue;
        }
        if (denom[i] < threshold) {
            s.gamma[i] = cap;
            continue;
        }
        double v = g2 / denom[i];
        if (v > cap) {
            v = cap;
            ++capped;
        }
        s.gamma[i] = v;
    }
    if (capped > 0) {
        log_warning(std::string(what) + ": coupling capped at " + std::to_string(capped) + " grid points");
    }
    return s;
}

std::vector<double> cumulative_gamma(const CouplingSchedule &sched) {
    std::vector<double> lam(sched.gamma.size(), 0.0);
    for (std::size_t i = 1; i < lam.size(); ++i) {
        lam[i] = lam[i - 1] + trapezoid_segment(sched.gamma[i - 1], sched.gamma[i], sched.dt);
    }
    return lam;
}

void check_tf(const CouplingSchedule &sched, double Tf) {
    if (!(Tf >= 0.0 && Tf < 1.0)) {
        throw DomainError("Tf must lie in [0, 1)");
    }
    if (sched.gamma.size() < 2) {
        throw DimensionError("schedule needs at least two samples");
    }
    double f_end = transmission_amplitude(sched).back();
    if (std::abs(f_end * f_end - Tf) > kTfTolerance) {
        throw ContractError("schedule final transmission " + std::to_string(f_end * f_end) + " inconsistent with Tf " +
                            std::to_string(Tf));
    }
}

double overlap(const std::vector<double> &a, const std::vector<double> &b) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ab += a[i] * b[i];
        aa += a[i] * a[i];
        bb += b[i] * b[i];
    }
    if (aa == 0.0 || bb == 0.0) {
        return 0.0;
    }
    return std::clamp(ab * ab / (aa * bb), 0.0, 1.0);
}

CouplingSchedule resample(const CouplingSchedule &sched, double dt) {
    const double start = sched.t.front();
    const double stop = sched.t.back();
    Grid grid = Grid::span(start, stop, dt);
    CouplingSchedule out{grid.times(), std::vector<double>(grid.n), sched.gamma_cap, dt};
    for (int i = 0; i < grid.n; ++i) {
        double u = (out.t[i] - start) / sched.dt;
        auto j = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, double(sched.gamma.size() - 2)));
        double f = std::clamp(u - double(j), 0.0, 1.0);
        out.gamma[i] = (1.0 - f) * sched.gamma[j] + f * sched.gamma[j + 1];
    }
    return out;
}

}  // namespace

Grid Grid::span(double start, double stop, double dt) {
    if (!(dt > 0.0) || !(stop > start)) {
        throw DomainError("grid needs stop > start and dt > 0");
    }
    int n = static_cast<int>(std::llround((stop - start) / dt)) + 1;
    return Grid{start, dt, n};
}

std::vector<double> Grid::times() const {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) {
        t[i] = time(i);
    }
    return t;
}

double TemporalMode::norm2() const {
    double s = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        s += trapezoid_segment(g[i - 1] * g[i - 1], g[i] * g[i], dt);
    }
    return s;
}

bool TemporalMode::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

void normalize_mode(TemporalMode &mode) {
    double n2 = mode.norm2();
    if (!(n2 > 0.0)) {
        throw DomainError("temporal mode is identically zero");
    }
    double s = 1.0 / std::sqrt(n2);
    for (double &v : mode.g) {
        v *= s;
    }
}

void MemoryHardware::validate() const {
    if (!(L > 0.0) || !(V_pi > 0.0) || !(c > 0.0)) {
        throw DomainError("memory hardware needs L > 0, V_pi > 0 and c > 0");
    }
}

TemporalMode standard_wavepacket(WavepacketKind kind, double gamma0, double t0, const Grid &grid) {
    if (!(gamma0 > 0.0)) {
        throw DomainError("gamma0 must be positive");
    }
    if (grid.n < 2 || !(grid.dt > 0.0)) {
        throw DimensionError("grid needs at least two points");
    }
    const double margin = 8.0 / gamma0;
    const double eps = 1e-9 * grid.dt;
    bool ok = true;
    switch (kind) {
        case WavepacketKind::ExpRising:
            ok = grid.start <= -margin + eps && grid.stop() >= -eps;
            break;
        case WavepacketKind::ExpDecaying:
            ok = grid.start <= eps && grid.stop() >= margin - eps;
            break;
        case WavepacketKind::TimeBin:
            if (!(t0 > 0.0)) {
                throw DomainError("time-bin length must be positive");
            }
            ok = grid.start <= eps && grid.stop() >= t0 - eps;
            break;
    }
    if (!ok) {
        throw DomainError("grid too short for the wavepacket support");
    }
    auto snap = [&](double t) { return std::abs(t) < 1e-6 * grid.dt ? 0.0 : t; };
    auto shape = [&](double t) {
        t = snap(t);
        switch (kind) {
            case WavepacketKind::ExpRising:
                return t <= 0.0 ? std::exp(0.5 * gamma0 * t) : 0.0;
            case WavepacketKind::ExpDecaying:
                return t >= 0.0 ? std::exp(-0.5 * gamma0 * t) : 0.0;
            case WavepacketKind::TimeBin:
                return (t >= 0.0 && snap(t - t0) <= 0.0) ? std::exp(0.5 * gamma0 * t) : 0.0;
        }
        return 0.0;
    };
    return sample_mode(shape, grid);
}

std::vector<double> cumulative_norm(const TemporalMode &mode) {
    std::vector<double> c(mode.g.size(), 0.0);
    for (std::size_t i = 1; i < c.size(); ++i) {
        c[i] = c[i - 1] + trapezoid_segment(mode.g[i - 1] * mode.g[i - 1], mode.g[i] * mode.g[i], mode.dt);
    }
    return c;
}

CouplingSchedule write_pulse(const TemporalMode &g_in, const ScheduleOptions &opt) {
    check_mode(g_in);
    return ratio_schedule(g_in, cumulative_norm(g_in), default_cap(g_in, opt), opt.threshold, "write_pulse");
}

CouplingSchedule read_pulse(const TemporalMode &g_out, const ScheduleOptions &opt) {
    check_mode(g_out);
    return ratio_schedule(g_out, remaining_norm(g_out), default_cap(g_out, opt), opt.threshold, "read_pulse");
}

CouplingSchedule entangle_pulse(const TemporalMode &g_in, double Tf, const ScheduleOptions &opt) {
    if (!(Tf > 0.0 && Tf < 1.0)) {
        throw DomainError("entangling Tf must lie in (0, 1)");
    }
    check_mode(g_in);
    std::vector<double> denom = cumulative_norm(g_in);
    const double offset = Tf / (1.0 - Tf);
    for (double &v : denom) {
        v += offset;
    }
    return ratio_schedule(g_in, denom, default_cap(g_in, opt), 0.0, "entangle_pulse");
}

std::vector<double> transmission_amplitude(const CouplingSchedule &sched) {
    std::vector<double> f = cumulative_gamma(sched);
    for (double &v : f) {
        v = std::exp(-0.5 * v);
    }
    return f;
}

TemporalMode output_mode_from_schedule(const CouplingSchedule &sched, double Tf) {
    check_tf(sched, Tf);
    std::vector<double> f = transmission_amplitude(sched);
    TemporalMode m{sched.t, std::vector<double>(f.size()), sched.dt};
    for (std::size_t i = 0; i < f.size(); ++i) {
        m.g[i] = f[i] * std::sqrt(sched.gamma[i]);
    }
    normalize_mode(m);
    return m;
}

TemporalMode input_mode_from_schedule(const CouplingSchedule &sched, double Tf) {
    check_tf(sched, Tf);
    std::vector<double> lam = cumulative_gamma(sched);
    TemporalMode m{sched.t, std::vector<double>(lam.size()), sched.dt};
    for (std::size_t i = 0; i < lam.size(); ++i) {
        m.g[i] = std::sqrt(sched.gamma[i]) * std::exp(-0.5 * (lam.back() - lam[i]));
    }
    normalize_mode(m);
    return m;
}

NetworkResult simulate_network(const CouplingSchedule &sched, double dt) {
    if (sched.gamma.size() < 2 || sched.t.size() != sched.gamma.size()) {
        throw DimensionError("schedule needs at least two samples");
    }
    if (!(dt > 0.0)) {
        throw DomainError("simulation step must be positive");
    }
    const CouplingSchedule s = std::abs(dt - sched.dt) > 1e-9 * dt ? resample(sched, dt) : sched;
    const std::size_t slices = s.gamma.size() - 1;

    // Slice i covers [t_i, t_{i+1}] with the interval-averaged rate.
    std::vector<double> x(slices);
    double max_x = 0.0;
    for (std::size_t i = 0; i < slices; ++i) {
        x[i] = trapezoid_segment(s.gamma[i], s.gamma[i + 1], s.dt);
        if (!(x[i] >= 0.0)) {
            throw DomainError("coupling rate must be non-negative");
        }
        if (x[i] >= 1.0) {
            throw InstabilityError("gamma*dt >= 1 in the network simulator");
        }
        max_x = std::max(max_x, x[i]);
    }
    if (max_x > kMaxStepFraction) {
        log_warning("simulate_network: max gamma*dt = " + std::to_string(max_x) + " exceeds 0.01");
    }

    // a_final = c_a a0 + sum_i w_i b_i; out_i = d_i a0 + ...
    std::vector<double> w(slices), d(slices);
    double c_a = 1.0;
    for (std::size_t i = 0; i < slices; ++i) {
        d[i] = -std::sqrt(x[i]) * c_a;
        c_a *= std::sqrt(1.0 - x[i]);
    }
    double tail = 1.0;
    for (std::size_t i = slices; i-- > 0;) {
        w[i] = std::sqrt(x[i]) * tail;
        tail *= std::sqrt(1.0 - x[i]);
    }

    std::vector<double> mid(slices);
    for (std::size_t i = 0; i < slices; ++i) {
        mid[i] = 0.5 * (s.t[i] + s.t[i + 1]);
    }
    NetworkResult r{c_a * c_a, 1.0, 1.0, TemporalMode{mid, d, s.dt}, TemporalMode{mid, w, s.dt}};
    for (double &v : r.out_mode.g) {
        v = -v;
    }
    if (1.0 - r.effective_Tf < 1e-15) {
        return r;
    }
    normalize_mode(r.out_mode);
    normalize_mode(r.in_mode);

    // Continuum modes implied by the same schedule, evaluated at slice midpoints.
    std::vector<double> lam = cumulative_gamma(s);
    std::vector<double> a_in(slices), a_out(slices);
    for (std::size_t i = 0; i < slices; ++i) {
        const double gm = x[i] / s.dt;
        const double lm = 0.5 * (lam[i] + lam[i + 1]);
        a_in[i] = std::sqrt(gm) * std::exp(-0.5 * (lam.back() - lm));
        a_out[i] = std::sqrt(gm) * std::exp(-0.5 * lm);
    }
    r.in_overlap = overlap(w, a_in);
    r.out_overlap = overlap(d, a_out);
    return r;
}

double multimode_overlap(double T0) {
    if (!(T0 > 0.0 && T0 < 1.0)) {
        throw DomainError("output coupler transmittance must lie in (0, 1)");
    }
    const double root = std::sqrt(T0 / -std::log1p(-T0)) * 2.0 / (1.0 + std::sqrt(1.0 - T0));
    return root * root;
}

double gamma_from_voltage(const MemoryHardware &hw, double V) {
    hw.validate();
    return hw.c / hw.L * (1.0 - std::cos(std::numbers::pi * V / hw.V_pi));
}

double voltage_from_gamma(const MemoryHardware &hw, double gamma) {
    hw.validate();
    const double gmax = 2.0 * hw.c / hw.L;
    if (!(gamma >= 0.0 && gamma <= gmax)) {
        throw DomainError("gamma outside [0, 2c/L]");
    }
    return hw.V_pi * std::acos(std::clamp(1.0 - gamma * hw.L / hw.c, -1.0, 1.0)) / std::numbers::pi;
}

}  // namespace resmem

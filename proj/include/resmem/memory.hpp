#pragma once

#include <vector>

namespace resmem {

// Uniform time grid t_i = start + i*dt, i = 0..n-1.
struct Grid {
    double start;
    double dt;
    int n;

    static Grid span(double start, double stop, double dt);
    double time(int i) const { return start + i * dt; }
    double stop() const { return time(n - 1); }
    std::vector<double> times() const;
};

// Trapezoid on one interval. An interval with exactly one zero endpoint is a
// support edge (a jump in the sampled function) and contributes nothing.
double trapezoid_segment(double a, double b, double dt);

struct TemporalMode {
    std::vector<double> t;
    std::vector<double> g;
    double dt;

    // Trapezoid integral of g^2.
    double norm2() const;
    bool is_normalized(double tol = 1e-6) const;
};

struct CouplingSchedule {
    std::vector<double> t;
    std::vector<double> gamma;
    double gamma_cap;
    double dt;
};

struct MemoryHardware {
    double L = 4.35;
    double V_pi = 1.0;
    double gamma0 = 2.0 * 3.14159265358979323846 * 1.5e6;
    double c = 299792458.0;

    void validate() const;
};

enum class WavepacketKind { ExpRising, ExpDecaying, TimeBin };

// exp_rising: e^{g0 t/2} for t <= 0; exp_decaying: e^{-g0 t/2} for t >= 0;
// time_bin: e^{g0 t/2} on [0, t0]. Normalized by trapezoid on the grid.
TemporalMode standard_wavepacket(WavepacketKind kind, double gamma0, double t0, const Grid &grid);

// Rescales to unit trapezoid norm; throws DomainError for an all-zero mode.
void normalize_mode(TemporalMode &mode);

// Samples an arbitrary shape on the grid and normalizes it.
template <class F>
TemporalMode sample_mode(F &&shape, const Grid &grid);

inline constexpr double kCapFactor = 100.0;
inline constexpr double kNormThreshold = 1e-6;

struct ScheduleOptions {
    // <= 0 selects kCapFactor * max(g^2), i.e. 100 gamma0 for the standard shapes.
    double gamma_cap = 0.0;
    double threshold = kNormThreshold;
};

CouplingSchedule write_pulse(const TemporalMode &g_in, const ScheduleOptions &opt = {});
CouplingSchedule read_pulse(const TemporalMode &g_out, const ScheduleOptions &opt = {});
CouplingSchedule entangle_pulse(const TemporalMode &g_in, double Tf, const ScheduleOptions &opt = {});

// exp(-1/2 int_{t_start}^{t_i} gamma), trapezoid.
std::vector<double> transmission_amplitude(const CouplingSchedule &sched);

// Modes coupled by a schedule whose final F^2 equals Tf (checked to 1e-4):
// g_out ~ F(t) sqrt(gamma), g_in ~ sqrt(gamma) exp(-1/2 int_t^{tf} gamma).
TemporalMode output_mode_from_schedule(const CouplingSchedule &sched, double Tf);
TemporalMode input_mode_from_schedule(const CouplingSchedule &sched, double Tf);

// Cumulative trapezoid integral of g^2 from the grid start.
std::vector<double> cumulative_norm(const TemporalMode &mode);

struct NetworkResult {
    double effective_Tf;
    double in_overlap;
    double out_overlap;
    TemporalMode out_mode;  // simulated output weights on the initial memory mode
    TemporalMode in_mode;   // simulated input weights landing in the memory
};

// Cascaded beamsplitter chain over the time slices. The schedule is linearly
// interpolated when dt differs from its own step.
NetworkResult simulate_network(const CouplingSchedule &sched, double dt);

// Overlap between the single-mode readout and the staircase output of a
// resonator with output coupler transmittance T0.
double multimode_overlap(double T0);

// gamma = (c/L)(1 - cos(pi V / V_pi)) and its principal-branch inverse.
double gamma_from_voltage(const MemoryHardware &hw, double V);
double voltage_from_gamma(const MemoryHardware &hw, double gamma);

template <class F>
TemporalMode sample_mode(F &&shape, const Grid &grid) {
    TemporalMode m{grid.times(), std::vector<double>(grid.n), grid.dt};
    for (int i = 0; i < grid.n; ++i) {
        m.g[i] = shape(m.t[i]);
    }
    normalize_mode(m);
    return m;
}

}  // namespace resmem

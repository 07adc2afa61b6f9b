#pragma once

#include <vector>

namespace resmem {

// Rate in events per second.
struct PerSecond {
    double value;
};

struct RateModel {
    double r0;       // heralding rate, 1/s
    double delta;    // wavepacket FWHM bandwidth, 1/s
    double k_match;  // storage / mode-match parameter
    double p1;       // heralding probability per mode

    static RateModel from_rates(double r0, double delta, double r_bs);
    void validate() const;
};

// r_bs = k r0^2 / delta.
PerSecond interference_rate(double r0, double delta, double k_match);
double k_from_rates(double r0, double delta, double r_bs);

// p1 = r0 / delta.
double heralding_probability(double r0, double delta);

double fwhm_from_hwhm(double hwhm);

// p_n = P(N >= n) / max(k, 1) with N ~ Poisson(k p1), via the regularized
// lower incomplete gamma function.
double success_probability(int n, double k_match, double p1);

struct ScalingRow {
    int n;
    double k_match;
    double p_n;
    double rate_per_s;  // p_n * delta
};

inline constexpr int kMaxScalingN = 64;

std::vector<ScalingRow> scaling_curve(int n_max, const std::vector<double> &k_list, double p1, double delta = 0.0);

}  // namespace resmem

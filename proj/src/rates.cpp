#include "resmem/rates.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "resmem/errors.hpp"

namespace resmem {

RateModel RateModel::from_rates(double r0, double delta, double r_bs) {
    RateModel m{r0, delta, k_from_rates(r0, delta, r_bs), heralding_probability(r0, delta)};
    m.validate();
    return m;
}

void RateModel::validate() const {
    if (!(r0 >= 0.0) || !(delta > 0.0) || !(k_match >= 0.0) || !(p1 >= 0.0)) {
        throw DomainError("rate model parameters must be non-negative with delta > 0");
    }
    if (p1 > 1.0) {
        throw DomainError("heralding probability exceeds 1");
    }
}

PerSecond interference_rate(double r0, double delta, double k_match) {
    if (!(r0 > 0.0) || !(delta > 0.0) || !(k_match >= 0.0)) {
        throw DomainError("interference_rate needs r0 > 0, delta > 0, k >= 0");
    }
    return {k_match * r0 * r0 / delta};
}

double k_from_rates(double r0, double delta, double r_bs) {
    if (!(r0 > 0.0) || !(delta > 0.0) || !(r_bs >= 0.0)) {
        throw DomainError("k_from_rates needs r0 > 0, delta > 0, r_bs >= 0");
    }
    return r_bs * delta / (r0 * r0);
}

double heralding_probability(double r0, double delta) {
    if (!(r0 >= 0.0) || !(delta > 0.0)) {
        throw DomainError("heralding_probability needs r0 >= 0 and delta > 0");
    }
    const double p1 = r0 / delta;
    if (p1 > 1.0) {
        throw DomainError("heralding probability r0/delta exceeds 1");
    }
    return p1;
}

double fwhm_from_hwhm(double hwhm) {
    if (!(hwhm >= 0.0)) {
        throw DomainError("bandwidth must be non-negative");
    }
    return 2.0 * hwhm;
}

double success_probability(int n, double k_match, double p1) {
    if (n < 1) {
        throw DomainError("success_probability needs n >= 1");
    }
    if (!(k_match >= 0.0) || !(p1 >= 0.0 && p1 <= 1.0)) {
        throw DomainError("success_probability needs k >= 0 and p1 in [0, 1]");
    }
    const double lambda = k_match * p1;
    if (lambda == 0.0) {
        return 0.0;
    }
    return boost::math::gamma_p(double(n), lambda) / std::max(k_match, 1.0);
}

std::vector<ScalingRow> scaling_curve(int n_max, const std::vector<double> &k_list, double p1, double delta) {
    if (n_max < 1 || n_max > kMaxScalingN) {
        throw DomainError("scaling_curve needs 1 <= n_max <= 64");
    }
    std::vector<ScalingRow> rows;
    for (double k : k_list) {
        for (int n = 1; n <= n_max; ++n) {
            double p = success_probability(n, k, p1);
            rows.push_back({n, k, p, p * delta});
        }
    }
    return rows;
}

}  // namespace resmem

#include "resmem/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "resmem/errors.hpp"
#include "resmem/gates.hpp"

namespace resmem {
namespace {

void check_uniform(const std::vector<double> &v, const char *what) {
    if (v.size() < 2) {
        throw DimensionError(std::string(what) + " grid needs at least two points");
    }
    const double h = v[1] - v[0];
    if (!(h > 0.0)) {
        throw DomainError(std::string(what) + " grid must be increasing");
    }
    for (std::size_t i = 2; i < v.size(); ++i) {
        if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            throw DomainError(std::string(what) + " grid must be uniform");
        }
    }
}

}  // namespace

double WignerGrid::integral() const { return w.sum() * dx() * dp(); }

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) {
        throw DimensionError("linspace needs at least two points");
    }
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * double(i) / double(n - 1);
    }
    return v;
}

double wigner_guard_radius(const DensityMatrix &rho) { return std::sqrt(2.0 * rho.mean_photon_number() + 1.0) + 2.0; }

double wigner_point(const DensityMatrix &rho, double x, double p) {
    const int dim = rho.dim();
    const double b = 2.0 * (x * x + p * p);
    const double phi = std::atan2(p, x);
    const double log_b = b > 0.0 ? std::log(b) : 0.0;
    double total = 0.0;
    for (int d = 0; d < dim; ++d) {
        // Normalized L_m^d: sqrt(m!/(m+d)!) B^{d/2} e^{-B/2} L_m^d(B).
        double l0;
        if (b == 0.0) {
            l0 = d == 0 ? 1.0 : 0.0;
        } else {
            l0 = std::exp(0.5 * d * log_b - 0.5 * b - 0.5 * std::lgamma(d + 1.0));
        }
        double lm1 = 0.0;
        double lm = l0;
        Complex acc = 0.0;
        for (int m = 0; m + d < dim; ++m) {
            if (m > 0) {
                double next = ((2.0 * (m - 1) + 1.0 + d - b) * lm - std::sqrt(double(m - 1) * double(m - 1 + d)) * lm1) /
                              std::sqrt(double(m) * double(m + d));
                lm1 = lm;
                lm = next;
            }
            const double sgn = (m % 2 == 0) ? 1.0 : -1.0;
            acc += sgn * lm * rho(m, m + d);
        }
        if (d == 0) {
            total += acc.real();
        } else {
            total += 2.0 * (acc * std::polar(1.0, d * phi)).real();
        }
    }
    return total / std::numbers::pi;
}

WignerGrid wigner_grid(const DensityMatrix &rho, const std::vector<double> &xs, const std::vector<double> &ps) {
    check_uniform(xs, "x");
    check_uniform(ps, "p");
    const double r = wigner_guard_radius(rho);
    if (xs.front() > -r || xs.back() < r || ps.front() > -r || ps.back() < r) {
        throw DomainError("Wigner grid does not cover the state support (needs half-width " + std::to_string(r) + ")");
    }
    WignerGrid g{xs, ps, Eigen::MatrixXd(ps.size(), xs.size())};
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            g.w(i, j) = wigner_point(rho, xs[j], ps[i]);
        }
    }
    return g;
}

WignerGrid wigner_grid(const DensityMatrix &rho) {
    auto axis = linspace(-kDefaultWignerExtent, kDefaultWignerExtent, kDefaultWignerPoints);
    return wigner_grid(rho, axis, axis);
}

NegativityReport negativity_volume(const WignerGrid &grid, double threshold) {
    const int rows = static_cast<int>(grid.w.rows());
    const int cols = static_cast<int>(grid.w.cols());
    double vol = 0.0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            vol += std::max(0.0, -grid.w(i, j));
        }
    }
    vol *= grid.dx() * grid.dp();

    std::vector<char> seen(std::size_t(rows) * cols, 0);
    int regions = 0;
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            if (seen[i * cols + j] || !(grid.w(i, j) < threshold)) {
                continue;
            }
            ++regions;
            std::queue<std::pair<int, int>> q;
            q.emplace(i, j);
            seen[i * cols + j] = 1;
            while (!q.empty()) {
                auto [a, b] = q.front();
                q.pop();
                const int da[4] = {1, -1, 0, 0};
                const int db[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int na = a + da[k], nb = b + db[k];
                    if (na < 0 || nb < 0 || na >= rows || nb >= cols) {
                        continue;
                    }
                    if (!seen[na * cols + nb] && grid.w(na, nb) < threshold) {
                        seen[na * cols + nb] = 1;
                        q.emplace(na, nb);
                    }
                }
            }
        }
    }
    return {vol, regions};
}

std::vector<double> marginal(const DensityMatrix &rho, double theta, const std::vector<double> &grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Eigen::RowVectorXcd e = quadrature_eigenbra(grid[i], theta, rho.dim());
        out[i] = std::max(0.0, (e * rho.rho() * e.adjoint())(0, 0).real());
    }
    return out;
}

int count_peaks(const std::vector<double> &density, double prominence) {
    const int n = static_cast<int>(density.size());
    if (n == 0) {
        return 0;
    }
    const double top = *std::max_element(density.begin(), density.end());
    if (!(top > 0.0)) {
        return 0;
    }
    const double need = prominence * top;
    int count = 0;
    int i = 0;
    while (i < n) {
        // Plateau [i, j).
        int j = i + 1;
        while (j < n && density[j] == density[i]) {
            ++j;
        }
        const bool left_lower = i == 0 || density[i - 1] < density[i];
        const bool right_lower = j == n || density[j] < density[i];
        if (left_lower && right_lower) {
            const double h = density[i];
            double left_min = h;
            bool left_higher = false;
            for (int k = i - 1; k >= 0; --k) {
                if (density[k] > h) {
                    left_higher = true;
                    break;
                }
                left_min = std::min(left_min, density[k]);
            }
            double right_min = h;
            bool right_higher = false;
            for (int k = j; k < n; ++k) {
                if (density[k] > h) {
                    right_higher = true;
                    break;
                }
                right_min = std::min(right_min, density[k]);
            }
            // The key col is the higher of the two minima toward higher ground;
            // a side with no higher ground does not bound the prominence.
            double base;
            if (left_higher && right_higher) {
                base = std::max(left_min, right_min);
            } else if (left_higher) {
                base = left_min;
            } else if (right_higher) {
                base = right_min;
            } else {
                base = std::min(left_min, right_min);
            }
            if (h - base >= need) {
                ++count;
            }
        }
        i = j;
    }
    return count;
}

}  // namespace resmem

#include "toricmem/surface.h"

#include <cmath>
#include <stdexcept>

#include "toricmem/analysis.h"

namespace toricmem {

SurfaceParams SurfaceParams::make(double L, double N, bool symmetrized) {
    if (!(L >= 2.0) || !(N >= 2.0)) {
        throw std::invalid_argument("surface needs L >= 2 and N >= 2");
    }
    SurfaceParams p;
    p.L = L;
    p.N = N;
    p.kink_density = (symmetrized ? 16.0 : 8.0) / (L * L);
    return p;
}

PerimeterTable::PerimeterTable(double kink_density, int r_max) : rho_(kink_density) {
    if (kink_density < 0.0) {
        throw std::invalid_argument("kink density must be non-negative");
    }
    c_.push_back(0.0);
    area_.push_back(0.0);
    extend(r_max);
}

void PerimeterTable::extend(int r) {
    // sum_{s<r} c(s)(r - s) = r S0 - S1 over s < r; the s = r term vanishes.
    while (r_max() < r) {
        const double prev_c = c_.back();
        const double prev_s = static_cast<double>(c_.size() - 1);
        sum_c_ += prev_c;
        sum_sc_ += prev_s * prev_c;
        const double x = static_cast<double>(c_.size());
        const double c = 4.0 * x + rho_ * (x * sum_c_ - sum_sc_);
        area_.push_back(area_.back() + 0.5 * (prev_c + c));
        c_.push_back(c);
    }
}

double perimeter_recursion(int r, const SurfaceParams &params) {
    if (r < 0) {
        throw std::invalid_argument("radius must be non-negative");
    }
    return PerimeterTable(params.kink_density, r).c(r);
}

double perimeter_closed_form(double r, const SurfaceParams &params) {
    if (params.kink_density <= 0.0) {
        return 4.0 * r;
    }
    const double s = std::sqrt(params.kink_density);
    return 4.0 / s * std::sinh(s * r);
}

double enclosed_area(int r, const SurfaceParams &params) {
    if (r < 0) {
        throw std::invalid_argument("radius must be non-negative");
    }
    return PerimeterTable(params.kink_density, r).area(r);
}

double minimal_loop_length(const SurfaceParams &params) {
    if (!(params.N >= 2.0) || !(params.area_fraction > 0.0)) {
        throw std::invalid_argument("minimal loop needs N >= 2 and a positive area fraction");
    }
    const double target = params.area_fraction * params.L * params.L * params.N;
    PerimeterTable t(params.kink_density, 64);
    int r = 1;
    while (true) {
        if (r > t.r_max()) {
            t.extend(2 * t.r_max());
        }
        if (t.area(r) >= target) {
            break;
        }
        ++r;
    }
    const double lo = t.area(r - 1);
    const double hi = t.area(r);
    return (r - 1) + (target - lo) / (hi - lo);
}

double minimal_loop_asymptote(double L, double N, bool symmetrized) {
    return L * std::log(N) / (symmetrized ? 4.0 : std::sqrt(8.0));
}

ThresholdMultiplier threshold_multiplier(const SurfaceParams &params, double beta) {
    const double top = std::log(params.L * std::log(params.N)) / std::log(3.0);
    if (!(top >= 1.0)) {
        throw std::invalid_argument("threshold multiplier needs log_3(L log N) >= 1");
    }
    ThresholdMultiplier m;
    m.levels = static_cast<int>(std::floor(top));
    // The level past the integer part enters with the fractional weight, which keeps the
    // product continuous as L log N crosses a power of 3.
    const double frac = top - m.levels;
    int r_top = 1;
    for (int j = 0; j <= m.levels; ++j) {
        r_top *= 3;
    }
    PerimeterTable t(params.kink_density, r_top);
    double log_product = 0.0;
    int r = 1;
    for (int j = 1; j <= m.levels + 1; ++j) {
        r *= 3;
        const double flat = 2.0 * static_cast<double>(r) * r;
        const double weight = j <= m.levels ? 1.0 : frac;
        log_product += weight * std::pow(1.0 / r, beta) * std::log(flat / t.area(r));
    }
    m.product = std::exp(log_product);
    m.closed_form = 8.0 * std::exp(-12.0 * std::pow(std::log(params.N), 1.0 - beta) / std::pow(params.L, beta));
    return m;
}

ThresholdMultiplier threshold_multiplier(const SurfaceParams &params) {
    return threshold_multiplier(params, default_beta());
}

double walk_multiplier(double v) {
    if (!(v > 4.0 && v < 5.0)) {
        throw std::invalid_argument("walk growth rate must lie in (4, 5)");
    }
    return 4.0 / v;
}

}  // namespace toricmem

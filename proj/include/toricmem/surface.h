#ifndef TORICMEM_SURFACE_H
#define TORICMEM_SURFACE_H

#include <vector>

namespace toricmem {

struct SurfaceParams {
    /// Lattice scale of one handle.
    double L = 32.0;
    /// Number of handles.
    double N = 1000.0;
    /// Kinks per unit area: 8/L^2 for a single cut-and-pair, 16/L^2 symmetrized.
    double kink_density = 8.0 / (32.0 * 32.0);
    /// Share of the total area L^2 N the minimal loop must enclose.
    double area_fraction = 0.5;

    /// Throws std::invalid_argument for L < 2 or N < 2.
    static SurfaceParams make(double L, double N, bool symmetrized = false);
};

/// c(r) and the enclosed area a(r) for r = 0..r_max from c(r) = 4r + rho sum_{s<=r} c(s)(r - s).
/// a(r) sums c with the trapezoid rule, so a flat surface gives a(r) = 2r^2.
class PerimeterTable {
   public:
    PerimeterTable(double kink_density, int r_max);
    /// Grows the table until r_max >= r.
    void extend(int r);
    int r_max() const {
        return static_cast<int>(c_.size()) - 1;
    }
    double c(int r) const {
        return c_.at(r);
    }
    double area(int r) const {
        return area_.at(r);
    }

   private:
    double rho_;
    std::vector<double> c_;
    std::vector<double> area_;
    double sum_c_ = 0.0;
    double sum_sc_ = 0.0;
};

/// c(r) from the recursion. Throws std::invalid_argument for r < 0.
double perimeter_recursion(int r, const SurfaceParams &params);

/// (4/sqrt(rho)) sinh(sqrt(rho) r); L sqrt(2) sinh(sqrt(8) r/L) at rho = 8/L^2.
double perimeter_closed_form(double r, const SurfaceParams &params);

/// Trapezoid area enclosed at radius r.
double enclosed_area(int r, const SurfaceParams &params);

/// Radius at which a(r) reaches area_fraction L^2 N, linear between integer radii.
double minimal_loop_length(const SurfaceParams &params);

/// L log N / sqrt(8), or L log N / 4 symmetrized: large-N form of minimal_loop_length.
double minimal_loop_asymptote(double L, double N, bool symmetrized);

struct ThresholdMultiplier {
    /// prod_{j=1}^{J} [2 (3^j)^2 / a(3^j)]^((1/3^j)^beta) up to J = log_3(L log N); a fractional
    /// J raises the last factor to the fractional part.
    double product = 1.0;
    /// 8 exp(-12 (log N)^(1-beta) / L^beta).
    double closed_form = 0.0;
    int levels = 0;
};

/// Throws std::invalid_argument when log_3(L log N) < 1.
ThresholdMultiplier threshold_multiplier(const SurfaceParams &params, double beta);
ThresholdMultiplier threshold_multiplier(const SurfaceParams &params);

/// 4/v, the threshold multiplier when self-avoiding walks grow like v^r. Needs 4 < v < 5.
double walk_multiplier(double v);

}  // namespace toricmem

#endif

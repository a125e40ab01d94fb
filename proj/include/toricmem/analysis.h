#ifndef TORICMEM_ANALYSIS_H
#define TORICMEM_ANALYSIS_H

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace toricmem {

/// log 2 / log 3, the chain-growth exponent.
inline double default_beta() {
    return std::log(2.0) / std::log(3.0);
}

// ---------------------------------------------------------------------------------------------
// 1d/2d chain lengths and counting sums

struct CantorLength {
    int64_t value = 0;
    /// False when n has none of the forms 2^L, 2^L - 2^M; value is then floor(n^(1/beta)).
    bool exact = false;
};

/// Longest chain n errors can grow into: 3^L - 3^M 2^(L-M) for n = 2^L - 2^M, 3^L for n = 2^L.
CantorLength cantor_length(int64_t n);

/// Longest joined pair of an [m]-chain and an [n-m]-chain, 1 <= m <= n/2.
double l_ss(double m, double n, double beta = default_beta());

/// Sum over m=1..n-1 of (m_<^(1/beta) + 1), m_< = min(m, n-m).
double sigma1(int64_t n, double beta = default_beta());
/// Sum over m=1..n-1 of 2 m_<^(1/beta) (m_<^(1/beta) + 1) + 1.
double sigma2(int64_t n, double beta = default_beta());

/// Controls for the infinite products over doubling levels.
struct ProductControl {
    /// Stop once the estimated remaining tail of the log-product falls below this.
    double tail_tolerance = 1e-6;
    /// Hard cap on the last level L included.
    int max_depth = 60;
};

/// h1(1) prod_{L>=1} sigma1(2^L)^(2^-L) with h1(1) = 1.
double h1_rate(const ProductControl &ctl = {}, double beta = default_beta());
/// h2(4)^(1/4) prod_{L>=3} sigma2(2^L)^(2^-L) with h2(4) = 4997.
double h2_rate(const ProductControl &ctl = {}, double beta = default_beta());
/// Same iteration halted at h2(2^base_level) = base_value.
double h2_rate_from(int base_level, double base_value, const ProductControl &ctl = {},
                    double beta = default_beta());

// ---------------------------------------------------------------------------------------------
// Spacetime geometry

/// Vertices of the star-metric ball: sum over |dT| <= [l/alpha] of 2[x]([x]+1)+1, x = l - alpha|dT|.
/// Radii of 3000 and above use the mean of the floor over its fractional part (relative error < 1e-8).
double octa_volume(double l_star, double alpha);

/// Upper bound on the star-metric length of a chain of n real errors and nbar ghosts, a step
/// function in n/nbar that is homogeneous of degree 1/beta.
double lstar_max(double n, double nbar, double alpha, double beta = default_beta());

/// gamma(n_hat) with lstar_max(n, n/n_hat) = gamma n^(1/beta); the ghost-side analogue
/// gammabar(n_hat) = lstar_max(n_hat, 1) for n_hat < 1.
double chain_gamma(double n_hat, double alpha, double beta = default_beta());

/// Sum over m=0..n, mb=0..nbar of octa_volume(min(lstar_max(m,mb), lstar_max(n-m,nbar-mb))).
double sigma3(int64_t n, int64_t nbar, double alpha, double beta = default_beta());

/// log sigma3 along the doubling sequence (2^L n0, 2^L nb0). Levels whose double sum exceeds
/// exact_term_cap terms are extrapolated from the last exact level by the asymptotic growth
/// 2^(d + 3/beta), d the number of nonzero arguments. Optionally transposed (arguments swapped).
class Sigma3Source {
   public:
    explicit Sigma3Source(double alpha, double beta = default_beta(), bool transposed = false,
                          int64_t exact_term_cap = int64_t{1} << 21);

    double log_level(int64_t n0, int64_t nb0, int level) const;
    double value(int64_t n, int64_t nbar) const;
    Sigma3Source transpose() const;
    double alpha() const {
        return alpha_;
    }
    double beta() const {
        return beta_;
    }
    bool transposed() const {
        return transposed_;
    }

   private:
    double alpha_;
    double beta_;
    bool transposed_;
    int64_t cap_;
    mutable std::map<std::pair<int64_t, int64_t>, double> cache_;
};

// ---------------------------------------------------------------------------------------------
// Small-case chain counts and composition factors

/// h3(n, nbar) for the base cases the recursion bottoms out on.
class H3Table {
   public:
    H3Table() = default;
    explicit H3Table(std::map<std::pair<int64_t, int64_t>, double> values) : values_(std::move(values)) {}

    void set(int64_t n, int64_t nbar, double value);
    bool has(int64_t n, int64_t nbar) const;
    /// Throws std::invalid_argument naming the entry if absent.
    double at(int64_t n, int64_t nbar) const;
    H3Table transpose() const;
    const std::map<std::pair<int64_t, int64_t>, double> &values() const {
        return values_;
    }

   private:
    std::map<std::pair<int64_t, int64_t>, double> values_;
};

/// Fills h3(2^N, 0) and h3(2^N, 1) for N <= 4 (and mirrored entries) from the base entries:
/// h3(2n,0) <= sigma3(2n,0) h3(n,0)^2 and h3(2n,1) <= 2 sigma3(2n,0) h3(n,0) h3(n,1).
/// Existing entries are kept. Needs (1,0),(2,0),(4,0),(1,1),(2,1) and their mirrors.
H3Table complete_h3_table(const H3Table &base, const Sigma3Source &sigma);

struct ChainBoundParams {
    double alpha = 2.4;
    double beta = default_beta();
    ProductControl product;
    H3Table h3;
    /// Start the composition product at L = N+1 as published; false starts it at L = 1, which
    /// is what iterating the recursion down to h3(n_hat, 1) gives.
    bool published_product_start = true;
};

/// Published small-case values: h3(4,0) = 5105.
H3Table published_h3_entries();

/// g(n_hat, 1) for n_hat = 2^M, M >= 0, with recursion limit N = min(M, 4).
double g_factor(int M, const ChainBoundParams &params, const Sigma3Source &sigma);
/// g_bar(n_hat, 1) for n_hat = 2^-M, M >= 0.
double gbar_factor(int M, const ChainBoundParams &params, const Sigma3Source &sigma);
/// g(infinity, 1) = h3(4,0)^(1/4) prod_{L>=3} sigma3(2^L,0)^(2^-L).
double g_factor_limit(const ChainBoundParams &params, const Sigma3Source &sigma);
/// g_bar(0, 1), the ghost-only limit.
double gbar_factor_limit(const ChainBoundParams &params, const Sigma3Source &sigma);

/// g(n_hat, q) = g(n_hat, 1) q^(1/n_hat).
inline double g_at(double g1, double n_hat, double q) {
    return g1 * std::pow(q, 1.0 / n_hat);
}
/// g_bar(n_hat, p) = g_bar(n_hat, 1) p^n_hat.
inline double gbar_at(double gbar1, double n_hat, double p) {
    return gbar1 * std::pow(p, n_hat);
}

struct ThresholdCurve {
    /// Real errors per ghost; 0 and infinity are the limits.
    double n_hat = 1.0;
    /// g(n_hat,1) for n_hat >= 1, g_bar(n_hat,1) below.
    double g_value = 0.0;
    double gamma = 0.0;
    /// Largest p with contributions of this composition still summable at measurement rate q.
    double p_boundary(double q) const;
};

struct ThresholdRegion {
    std::vector<ThresholdCurve> curves;
    /// 1/g(infinity,1): cut-off on p at any q > 0.
    double ankle = 0.0;
    /// 1/g_bar(0,1): cut-off on q at any p > 0.
    double toe = 0.0;
    /// sqrt(2/g(1,1)): where the n_hat = 1 curve meets the line p = 2q.
    double p_c_half_line = 0.0;

    /// True iff (q, p) lies under every curve and inside the ankle and toe cut-offs.
    bool contains(double q, double p) const;
    /// Largest composition factor p*g(n_hat,q) or q*gbar(n_hat,p) over the curves; < 1 inside.
    double worst_base(double q, double p, const ThresholdCurve **which = nullptr) const;
};

/// Curves for n_hat = 2^M and 2^-M, M = 0..max_M, plus both limits.
ThresholdRegion threshold_region(const ChainBoundParams &params, const Sigma3Source &sigma,
                                 int max_M = 16);

// ---------------------------------------------------------------------------------------------
// Failure bounds

/// e^(-2/beta): above this fraction of p_c the 2d exponent k^beta applies.
double saturation_fraction_2d(double beta = default_beta());

enum class ExponentSelector { HalfK, FullK };

/// FullK when p >= e^(-2/beta) p_c.
ExponentSelector saturation_exponent_2d(double p, double p_c, double beta = default_beta());

/// k^2 (p/p_c)^((k/2)^beta). Throws std::domain_error for p > p_c or p <= 0.
double failure_bound_2d(int k, double p, double p_c, double beta = default_beta());

/// failure_bound_2d, or k^(2+beta) (p/p_c)^(k^beta) once the exponent saturates.
double saturated_failure_estimate_2d(int k, double p, double p_c, double beta = default_beta());

/// 2 e^(-2/beta): saturation point in 3d.
double saturation_fraction_3d(double beta = default_beta());

/// 2 (3/(2 gamma))^beta with gamma = 2 + alpha: exponent coefficient of k^beta on the line p = 2q.
double exponent_coefficient_3d(double alpha, double beta = default_beta());

/// (p/p_c)^(c k^beta) with c = exponent_coefficient_3d.
double failure_estimate_3d(int k, double p, double p_c, double alpha, double beta = default_beta());

struct FailureBound3d {
    double value = 0.0;
    double p_c = 0.0;
    double q_c = 0.0;
    double gamma = 0.0;
    double gamma_bar = 0.0;
    double exponent_p = 0.0;
    double exponent_q = 0.0;
};

/// k^3 (p/p_c)^e + k^3 (q/q_c)^ebar with p_c, q_c from the dominant composition. The exponents are
/// (k/2 gamma)^beta, improved to (3k/2 gamma)^beta once p/p_c >= 2e^(-2/beta) (likewise for q).
/// Throws std::domain_error outside the sub-threshold region.
FailureBound3d failure_bound_3d(int k, double p, double q, const ThresholdRegion &region,
                                double beta = default_beta());

}  // namespace toricmem

#endif

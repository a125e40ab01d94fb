#include "toricmem/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace toricmem {

namespace {

bool is_power_of_two(int64_t n) {
    return n > 0 && (n & (n - 1)) == 0;
}

int log2_exact(int64_t n) {
    int L = 0;
    while ((int64_t{1} << L) < n) {
        L++;
    }
    return L;
}

int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    for (int i = 0; i < e; i++) {
        r *= b;
    }
    return r;
}

/// Sum of m^s for m = 1..M: direct up to a cut, Euler-Maclaurin beyond it.
double power_sum(int64_t M, double s) {
    constexpr int64_t cut = 2048;
    if (M <= 0) {
        return 0.0;
    }
    double direct = 0.0;
    int64_t top = std::min(M, cut);
    for (int64_t m = 1; m <= top; m++) {
        direct += std::pow(static_cast<double>(m), s);
    }
    if (M <= cut) {
        return direct;
    }
    double a = static_cast<double>(cut);
    double b = static_cast<double>(M);
    auto f = [&](double x) { return std::pow(x, s); };
    auto f1 = [&](double x) { return s * std::pow(x, s - 1.0); };
    auto f3 = [&](double x) { return s * (s - 1.0) * (s - 2.0) * std::pow(x, s - 3.0); };
    double integral = (std::pow(b, s + 1.0) - std::pow(a, s + 1.0)) / (s + 1.0);
    double em = integral + (f(a) + f(b)) / 2.0 + (f1(b) - f1(a)) / 12.0 - (f3(b) - f3(a)) / 720.0;
    return direct - f(a) + em;
}

/// Sum over m=1..n-1 of f(min(m, n-m)) written as power sums; f(x) = sum_i c_i x^(s_i).
double symmetric_sum(int64_t n, const std::vector<std::pair<double, double>> &terms) {
    if (n < 2) {
        throw std::invalid_argument("chain sum needs n >= 2");
    }
    auto F = [&](int64_t M) {
        double v = 0.0;
        for (auto [c, s] : terms) {
            v += c * (s == 0.0 ? static_cast<double>(M) : power_sum(M, s));
        }
        return v;
    };
    int64_t h = n / 2;
    if (n % 2 == 1) {
        return 2.0 * F(h);
    }
    double mid = 0.0;
    for (auto [c, s] : terms) {
        mid += c * std::pow(static_cast<double>(h), s);
    }
    return 2.0 * F(h - 1) + mid;
}

/// Sum over L >= first of 2^-L term(L), stopping once the estimated tail is below tolerance.
double log_product(int first, int last_cap, const std::function<double(int)> &term,
                   const ProductControl &ctl) {
    double sum = 0.0;
    double prev = 0.0;
    for (int L = first; L <= last_cap; L++) {
        double t = std::ldexp(term(L), -L);
        sum += t;
        if (L > first && prev != 0.0) {
            double rho = t / prev;
            if (rho > 0.0 && rho < 1.0 && std::fabs(t) * rho / (1.0 - rho) < ctl.tail_tolerance) {
                break;
            }
        }
        prev = t;
    }
    return sum;
}

using HLookup = std::function<double(int64_t, int64_t)>;
using SLookup = std::function<double(int64_t, int64_t, int)>;

/// log g(2^M, 1) from real-side lookups; the ghost side passes transposed lookups.
double log_g_core(int M, const HLookup &h, const SLookup &log_sigma, const ChainBoundParams &params) {
    if (M < 0 || M > 40) {
        throw std::invalid_argument("g_factor: M out of range");
    }
    int N = std::min(M, 4);
    int64_t n_hat = int64_t{1} << M;
    int64_t base = int64_t{1} << N;
    int start = params.published_product_start ? N + 1 : 1;
    double composition = log_product(
        start, params.product.max_depth, [&](int L) { return log_sigma(n_hat, 1, L); },
        params.product);
    double inner = static_cast<double>(M - N) * std::log(2.0) + std::log(h(base, 1)) -
                   std::log(h(base, 0)) + composition;
    double outer = std::ldexp(std::log(h(base, 0)), -N);
    for (int L = N + 1; L <= M; L++) {
        outer += std::ldexp(log_sigma(1, 0, L), -L);
    }
    return inner / static_cast<double>(n_hat) + outer;
}

double log_g_limit_core(const HLookup &h, const SLookup &log_sigma, const ChainBoundParams &params) {
    constexpr int N = 4;
    double tail = log_product(
        N + 1, params.product.max_depth, [&](int L) { return log_sigma(1, 0, L); }, params.product);
    return std::ldexp(std::log(h(int64_t{1} << N, 0)), -N) + tail;
}

HLookup real_h(const ChainBoundParams &params) {
    return [&params](int64_t a, int64_t b) { return params.h3.at(a, b); };
}
HLookup ghost_h(const ChainBoundParams &params) {
    return [&params](int64_t a, int64_t b) { return params.h3.at(b, a); };
}
SLookup real_s(const Sigma3Source &sigma) {
    return [&sigma](int64_t a, int64_t b, int L) { return sigma.log_level(a, b, L); };
}
SLookup ghost_s(const Sigma3Source &sigma) {
    return [&sigma](int64_t a, int64_t b, int L) { return sigma.log_level(b, a, L); };
}

}  // namespace

CantorLength cantor_length(int64_t n) {
    if (n < 1) {
        throw std::invalid_argument("cantor_length: n must be positive");
    }
    if (n > (int64_t{1} << 39)) {
        throw std::invalid_argument("cantor_length: n too large for exact arithmetic");
    }
    if (is_power_of_two(n)) {
        return {ipow(3, log2_exact(n)), true};
    }
    // n = 2^L - 2^M: the low bits are zeros below a block of ones.
    int M = 0;
    while (((n >> M) & 1) == 0) {
        M++;
    }
    int64_t shifted = (n >> M) + 1;
    if (is_power_of_two(shifted)) {
        int L = log2_exact(shifted) + M;
        return {ipow(3, L) - ipow(3, M) * (int64_t{1} << (L - M)), true};
    }
    double bound = std::pow(static_cast<double>(n), 1.0 / default_beta());
    return {static_cast<int64_t>(std::floor(bound)), false};
}

double l_ss(double m, double n, double beta) {
    if (!(m >= 1.0) || !(m <= n / 2.0)) {
        throw std::invalid_argument("l_ss: need 1 <= m <= n/2");
    }
    double ib = 1.0 / beta;
    return (2.0 / m) * ((n - m) * std::pow(n, ib) - n * std::pow(n - m, ib));
}

double sigma1(int64_t n, double beta) {
    double ib = 1.0 / beta;
    return symmetric_sum(n, {{1.0, ib}, {1.0, 0.0}});
}

double sigma2(int64_t n, double beta) {
    double ib = 1.0 / beta;
    return symmetric_sum(n, {{2.0, 2.0 * ib}, {2.0, ib}, {1.0, 0.0}});
}

double h1_rate(const ProductControl &ctl, double beta) {
    double s = log_product(
        1, ctl.max_depth, [&](int L) { return std::log(sigma1(int64_t{1} << L, beta)); }, ctl);
    return std::exp(s);
}

double h2_rate_from(int base_level, double base_value, const ProductControl &ctl, double beta) {
    if (base_level < 0 || base_value <= 0.0) {
        throw std::invalid_argument("h2_rate_from: bad base");
    }
    double s = log_product(
        base_level + 1, ctl.max_depth,
        [&](int L) { return std::log(sigma2(int64_t{1} << L, beta)); }, ctl);
    return std::exp(std::ldexp(std::log(base_value), -base_level) + s);
}

double h2_rate(const ProductControl &ctl, double beta) {
    return h2_rate_from(2, 4997.0, ctl, beta);
}

void H3Table::set(int64_t n, int64_t nbar, double value) {
    if (!(value > 0.0)) {
        throw std::invalid_argument("H3Table: entries must be positive");
    }
    values_[{n, nbar}] = value;
}

bool H3Table::has(int64_t n, int64_t nbar) const {
    return values_.count({n, nbar}) > 0;
}

double H3Table::at(int64_t n, int64_t nbar) const {
    auto it = values_.find({n, nbar});
    if (it == values_.end()) {
        std::ostringstream msg;
        msg << "missing small-case chain count h3(" << n << "," << nbar << ")";
        throw std::invalid_argument(msg.str());
    }
    return it->second;
}

H3Table H3Table::transpose() const {
    H3Table t;
    for (const auto &[key, v] : values_) {
        t.values_[{key.second, key.first}] = v;
    }
    return t;
}

H3Table published_h3_entries() {
    H3Table t;
    t.set(4, 0, 5105.0);
    return t;
}

H3Table complete_h3_table(const H3Table &base, const Sigma3Source &sigma) {
    H3Table t = base;
    // side 0 fills (2^N, 0) and (2^N, 1); side 1 fills the mirrored entries.
    for (int side = 0; side < 2; side++) {
        auto key = [side](int64_t a, int64_t b) {
            return side == 0 ? std::make_pair(a, b) : std::make_pair(b, a);
        };
        auto get = [&](int64_t a, int64_t b) {
            auto [x, y] = key(a, b);
            return t.at(x, y);
        };
        auto split = [&](int64_t a) {
            auto [x, y] = key(a, 0);
            return sigma.value(x, y);
        };
        for (int64_t n = 8; n <= 16; n *= 2) {
            auto [x, y] = key(n, 0);
            if (!t.has(x, y)) {
                double h = get(n / 2, 0);
                t.set(x, y, split(n) * h * h);
            }
        }
        for (int64_t n = 4; n <= 16; n *= 2) {
            auto [x, y] = key(n, 1);
            if (!t.has(x, y)) {
                t.set(x, y, 2.0 * split(n) * get(n / 2, 0) * get(n / 2, 1));
            }
        }
    }
    return t;
}

double g_factor(int M, const ChainBoundParams &params, const Sigma3Source &sigma) {
    return std::exp(log_g_core(M, real_h(params), real_s(sigma), params));
}

double gbar_factor(int M, const ChainBoundParams &params, const Sigma3Source &sigma) {
    return std::exp(log_g_core(M, ghost_h(params), ghost_s(sigma), params));
}

double g_factor_limit(const ChainBoundParams &params, const Sigma3Source &sigma) {
    return std::exp(log_g_limit_core(real_h(params), real_s(sigma), params));
}

double gbar_factor_limit(const ChainBoundParams &params, const Sigma3Source &sigma) {
    return std::exp(log_g_limit_core(ghost_h(params), ghost_s(sigma), params));
}

double ThresholdCurve::p_boundary(double q) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (q <= 0.0) {
        return n_hat >= 1.0 ? (std::isinf(n_hat) ? 1.0 / g_value : inf) : inf;
    }
    if (std::isinf(n_hat)) {
        return 1.0 / g_value;
    }
    if (n_hat >= 1.0) {
        return 1.0 / g_at(g_value, n_hat, q);
    }
    if (n_hat == 0.0) {
        return q * g_value < 1.0 ? inf : 0.0;
    }
    return std::pow(1.0 / (g_value * q), 1.0 / n_hat);
}

double ThresholdRegion::worst_base(double q, double p, const ThresholdCurve **which) const {
    double worst = 0.0;
    const ThresholdCurve *arg = nullptr;
    for (const auto &c : curves) {
        double b = 0.0;
        if (std::isinf(c.n_hat)) {
            b = p * c.g_value;
        } else if (c.n_hat >= 1.0) {
            b = p * g_at(c.g_value, c.n_hat, q);
        } else if (c.n_hat == 0.0) {
            b = q * c.g_value;
        } else {
            b = q * gbar_at(c.g_value, c.n_hat, p);
        }
        if (arg == nullptr || b > worst) {
            worst = b;
            arg = &c;
        }
    }
    if (which) {
        *which = arg;
    }
    return worst;
}

bool ThresholdRegion::contains(double q, double p) const {
    return worst_base(q, p) < 1.0;
}

ThresholdRegion threshold_region(const ChainBoundParams &params, const Sigma3Source &sigma, int max_M) {
    if (max_M < 0) {
        throw std::invalid_argument("threshold_region: max_M must be non-negative");
    }
    ThresholdRegion region;
    for (int M = 0; M <= max_M; M++) {
        double n_hat = std::ldexp(1.0, M);
        double g = g_factor(M, params, sigma);
        region.curves.push_back({n_hat, g, chain_gamma(n_hat, params.alpha, params.beta)});
        if (M == 0) {
            region.p_c_half_line = std::sqrt(2.0 / g);
        }
    }
    double ginf = g_factor_limit(params, sigma);
    region.curves.push_back({std::numeric_limits<double>::infinity(), ginf, 1.0});
    region.ankle = 1.0 / ginf;
    // n_hat = 1 is shared: both expressions coincide there.
    for (int M = 1; M <= max_M; M++) {
        double n_hat = std::ldexp(1.0, -M);
        double gb = gbar_factor(M, params, sigma);
        region.curves.push_back({n_hat, gb, chain_gamma(n_hat, params.alpha, params.beta)});
    }
    double gb0 = gbar_factor_limit(params, sigma);
    region.curves.push_back({0.0, gb0, chain_gamma(0.0, params.alpha, params.beta)});
    region.toe = 1.0 / gb0;
    return region;
}

double saturation_fraction_2d(double beta) {
    return std::exp(-2.0 / beta);
}

ExponentSelector saturation_exponent_2d(double p, double p_c, double beta) {
    return p >= saturation_fraction_2d(beta) * p_c ? ExponentSelector::FullK : ExponentSelector::HalfK;
}

double failure_bound_2d(int k, double p, double p_c, double beta) {
    if (k < 2) {
        throw std::invalid_argument("failure_bound_2d: k must be at least 2");
    }
    if (!(p > 0.0) || p > p_c) {
        throw std::domain_error("failure_bound_2d: needs 0 < p <= p_c");
    }
    double kk = static_cast<double>(k);
    return kk * kk * std::pow(p / p_c, std::pow(kk / 2.0, beta));
}

double saturated_failure_estimate_2d(int k, double p, double p_c, double beta) {
    double bound = failure_bound_2d(k, p, p_c, beta);
    if (saturation_exponent_2d(p, p_c, beta) == ExponentSelector::HalfK) {
        return bound;
    }
    double kk = static_cast<double>(k);
    return std::pow(kk, 2.0 + beta) * std::pow(p / p_c, std::pow(kk, beta));
}

double saturation_fraction_3d(double beta) {
    return 2.0 * std::exp(-2.0 / beta);
}

double exponent_coefficient_3d(double alpha, double beta) {
    return 2.0 * std::pow(3.0 / (2.0 * (2.0 + alpha)), beta);
}

double failure_estimate_3d(int k, double p, double p_c, double alpha, double beta) {
    if (k < 1 || !(p >= 0.0) || !(p_c > 0.0)) {
        throw std::invalid_argument("failure_estimate_3d: bad arguments");
    }
    double e = exponent_coefficient_3d(alpha, beta) * std::pow(static_cast<double>(k), beta);
    return std::pow(p / p_c, e);
}

FailureBound3d failure_bound_3d(int k, double p, double q, const ThresholdRegion &region, double beta) {
    if (k < 2 || p < 0.0 || q < 0.0) {
        throw std::invalid_argument("failure_bound_3d: bad arguments");
    }
    FailureBound3d out;
    if (p == 0.0 && q == 0.0) {
        return out;
    }
    double kk = static_cast<double>(k);
    double k3 = kk * kk * kk;
    // Dominant composition on each side.
    double best_p = 0.0;
    double best_q = 0.0;
    const ThresholdCurve *cp = nullptr;
    const ThresholdCurve *cq = nullptr;
    for (const auto &c : region.curves) {
        if (c.n_hat >= 1.0) {
            double b = std::isinf(c.n_hat) ? p * c.g_value : p * g_at(c.g_value, c.n_hat, q);
            if (cp == nullptr || b > best_p) {
                best_p = b;
                cp = &c;
            }
        } else {
            double b = c.n_hat == 0.0 ? q * c.g_value : q * gbar_at(c.g_value, c.n_hat, p);
            if (cq == nullptr || b > best_q) {
                best_q = b;
                cq = &c;
            }
        }
    }
    if (best_p >= 1.0 || best_q >= 1.0) {
        throw std::domain_error("failure_bound_3d: (p, q) outside the sub-threshold region");
    }
    double sat = saturation_fraction_3d(beta);
    auto exponent = [&](double ratio, double gamma) {
        double scale = ratio >= sat ? 3.0 : 1.0;
        return std::pow(scale * kk / (2.0 * gamma), beta);
    };
    if (cp && p > 0.0) {
        out.p_c = p / best_p;
        out.gamma = cp->gamma;
        out.exponent_p = exponent(best_p, cp->gamma);
        out.value += k3 * std::pow(best_p, out.exponent_p);
    }
    if (cq && q > 0.0) {
        out.q_c = q / best_q;
        out.gamma_bar = cq->gamma;
        out.exponent_q = exponent(best_q, cq->gamma);
        out.value += k3 * std::pow(best_q, out.exponent_q);
    }
    return out;
}

}  // namespace toricmem

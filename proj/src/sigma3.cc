#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "toricmem/analysis.h"

namespace toricmem {

namespace {

constexpr double kFloorSlack = 1e-12;
constexpr double kContinuumRadius = 3000.0;

}  // namespace

double octa_volume(double l_star, double alpha) {
    if (l_star < 0.0) {
        throw std::invalid_argument("octa_volume: negative radius");
    }
    if (alpha <= 0.0) {
        throw std::invalid_argument("octa_volume: alpha must be positive");
    }
    double J = std::floor(l_star / alpha + kFloorSlack);
    if (l_star < kContinuumRadius) {
        double v = 0.0;
        for (int64_t j = -static_cast<int64_t>(J); j <= static_cast<int64_t>(J); j++) {
            double r = std::floor(l_star - alpha * static_cast<double>(std::llabs(j)) + kFloorSlack);
            v += 2.0 * r * (r + 1.0) + 1.0;
        }
        return v;
    }
    // Mean of 2[x]([x]+1)+1 over the fractional part of x is 2x^2 + 2/3.
    double s1 = J * (J + 1.0) / 2.0;
    double s2 = J * (J + 1.0) * (2.0 * J + 1.0) / 6.0;
    return (2.0 * J + 1.0) * (2.0 * l_star * l_star + 2.0 / 3.0) - 8.0 * l_star * alpha * s1 +
           4.0 * alpha * alpha * s2;
}

double lstar_max(double n, double nbar, double alpha, double beta) {
    if (n < 0.0 || nbar < 0.0) {
        throw std::invalid_argument("lstar_max: negative count");
    }
    double ib = 1.0 / beta;
    if (nbar == 0.0) {
        return std::pow(n, ib);
    }
    double ghost_cells = (7.0 + 8.0 * alpha) * std::pow(nbar / 6.0, ib);
    if (n == 0.0) {
        return ghost_cells;
    }
    double r = n / nbar;
    double nb = std::pow(nbar, ib);
    if (r < 1.0 / 6.0) {
        return (6.0 + 2.0 * alpha) * std::pow(n, ib) + ghost_cells;
    }
    // Between the published compositions the value at the next one up is used.
    if (r <= 1.0) {
        return (2.0 + alpha) * nb;
    }
    if (r <= 2.0) {
        return (3.0 + 2.0 * alpha) * nb;
    }
    if (r < 4.0) {
        return (std::pow(4.0, ib) + 2.0 * alpha + 2.0) * nb;
    }
    return std::pow(n, ib) + (2.0 * alpha + 2.0) * nb;
}

double chain_gamma(double n_hat, double alpha, double beta) {
    if (std::isinf(n_hat)) {
        return 1.0;
    }
    if (n_hat >= 1.0) {
        return lstar_max(n_hat, 1.0, alpha, beta) / std::pow(n_hat, 1.0 / beta);
    }
    return lstar_max(n_hat, 1.0, alpha, beta);
}

double sigma3(int64_t n, int64_t nbar, double alpha, double beta) {
    if (n < 0 || nbar < 0) {
        throw std::invalid_argument("sigma3: negative count");
    }
    size_t cols = static_cast<size_t>(nbar) + 1;
    std::vector<double> ls(static_cast<size_t>(n + 1) * cols);
    for (int64_t m = 0; m <= n; m++) {
        for (int64_t mb = 0; mb <= nbar; mb++) {
            ls[static_cast<size_t>(m) * cols + static_cast<size_t>(mb)] =
                lstar_max(static_cast<double>(m), static_cast<double>(mb), alpha, beta);
        }
    }
    double total = 0.0;
    for (int64_t m = 0; m <= n; m++) {
        for (int64_t mb = 0; mb <= nbar; mb++) {
            double a = ls[static_cast<size_t>(m) * cols + static_cast<size_t>(mb)];
            double b = ls[static_cast<size_t>(n - m) * cols + static_cast<size_t>(nbar - mb)];
            total += octa_volume(std::min(a, b), alpha);
        }
    }
    return total;
}

Sigma3Source::Sigma3Source(double alpha, double beta, bool transposed, int64_t exact_term_cap)
    : alpha_(alpha), beta_(beta), transposed_(transposed), cap_(exact_term_cap) {
    if (exact_term_cap < 1) {
        throw std::invalid_argument("Sigma3Source: term cap must be positive");
    }
}

Sigma3Source Sigma3Source::transpose() const {
    return Sigma3Source(alpha_, beta_, !transposed_, cap_);
}

double Sigma3Source::value(int64_t n, int64_t nbar) const {
    if (transposed_) {
        std::swap(n, nbar);
    }
    auto key = std::make_pair(n, nbar);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        return it->second;
    }
    double v = sigma3(n, nbar, alpha_, beta_);
    cache_.emplace(key, v);
    return v;
}

double Sigma3Source::log_level(int64_t n0, int64_t nb0, int level) const {
    if (n0 < 0 || nb0 < 0 || (n0 == 0 && nb0 == 0) || level < 0) {
        throw std::invalid_argument("Sigma3Source::log_level: bad arguments");
    }
    // Highest level whose double sum fits the cap.
    auto terms = [&](int L) {
        double s = std::ldexp(1.0, L);
        return (static_cast<double>(n0) * s + 1.0) * (static_cast<double>(nb0) * s + 1.0);
    };
    int exact = level;
    while (exact > 0 && terms(exact) > static_cast<double>(cap_)) {
        exact--;
    }
    double base = std::log(value(n0 << exact, nb0 << exact));
    if (exact == level) {
        return base;
    }
    double dims = (n0 > 0 ? 1.0 : 0.0) + (nb0 > 0 ? 1.0 : 0.0);
    double growth = (dims + 3.0 / beta_) * std::log(2.0);
    return base + static_cast<double>(level - exact) * growth;
}

}  // namespace toricmem

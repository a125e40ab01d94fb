#include "toricmem/fitting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace toricmem {

namespace {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
    double var_slope = 0.0;
    double var_intercept = 0.0;
    double cov = 0.0;
    double rss = 0.0;
};

// Weighted regression of y on x. With known inverse variances as weights the covariance is the
// inverse normal matrix; otherwise it is scaled by the residual variance.
Line regress(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &w,
             bool known_variance) {
    double sw = 0, sx = 0, sy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double mx = sx / sw;
    const double my = sy / sw;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += w[i] * (x[i] - mx) * (x[i] - mx);
        sxy += w[i] * (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw InsufficientData("regression needs at least two distinct abscissae");
    }
    Line l;
    l.slope = sxy / sxx;
    l.intercept = my - l.slope * mx;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - l.intercept - l.slope * x[i];
        l.rss += w[i] * r * r;
    }
    const double scale = known_variance ? 1.0 : l.rss / static_cast<double>(x.size() - 2);
    l.var_slope = scale / sxx;
    l.var_intercept = scale * (1.0 / sw + mx * mx / sxx);
    l.cov = -scale * mx / sxx;
    return l;
}

}  // namespace

PerKFit fit_per_k(const std::vector<RatePoint> &points, int k, double f_max, double f_min) {
    std::vector<double> x, y, w;
    for (const auto &pt : points) {
        if (pt.rate > 0.0 && pt.rate <= f_max && pt.rate >= f_min && pt.rate < 1.0 && pt.p > 0.0 &&
            pt.trials > 0.0) {
            x.push_back(std::log(pt.p));
            y.push_back(std::log(pt.rate));
            w.push_back(pt.trials * pt.rate / (1.0 - pt.rate));
        }
    }
    if (x.size() < 3) {
        throw InsufficientData("per-k fit for k=" + std::to_string(k) + " has " + std::to_string(x.size()) +
                               " usable points, needs 3");
    }
    const Line l = regress(x, y, w, true);
    if (!(l.slope > 0.0)) {
        throw InsufficientData("per-k fit for k=" + std::to_string(k) + " has non-positive exponent");
    }
    PerKFit f;
    f.k = k;
    f.exponent = l.slope;
    f.exponent_stderr = std::sqrt(l.var_slope);
    // log p_c = -b/E; first-order propagation of (E, b).
    const double E = l.slope;
    const double b = l.intercept;
    f.p_c = std::exp(-b / E);
    const double var_log_pc =
        l.var_intercept / (E * E) + b * b * l.var_slope / (E * E * E * E) - 2.0 * b * l.cov / (E * E * E);
    f.p_c_stderr = f.p_c * std::sqrt(std::max(0.0, var_log_pc));
    f.f_min = f_min;
    f.f_max = f_max;
    f.points = static_cast<int>(x.size());
    f.residual = l.rss;
    return f;
}

PerKFit fit_per_k(const std::vector<FailureSample> &samples, double f_max, double f_min) {
    if (samples.empty()) {
        throw InsufficientData("per-k fit has no samples");
    }
    std::vector<RatePoint> pts;
    for (const auto &s : samples) {
        if (s.k != samples.front().k) {
            throw std::invalid_argument("per-k fit mixes lattice sizes");
        }
        pts.push_back({s.p, s.rate(), static_cast<double>(s.trials)});
    }
    return fit_per_k(pts, samples.front().k, f_max, f_min);
}

BetaFit fit_beta(const std::vector<PerKFit> &per_k) {
    std::set<int> ks;
    std::vector<double> x, y, w;
    for (const auto &f : per_k) {
        ks.insert(f.k);
        x.push_back(std::log(static_cast<double>(f.k)));
        y.push_back(std::log(f.exponent));
        w.push_back(1.0);
    }
    if (ks.size() < 3) {
        throw InsufficientData("beta fit needs at least 3 distinct k");
    }
    const Line l = regress(x, y, w, false);
    BetaFit b;
    b.slope = l.slope;
    b.intercept = l.intercept;
    b.slope_stderr = std::sqrt(l.var_slope);
    b.intercept_stderr = std::sqrt(l.var_intercept);
    b.points = static_cast<int>(x.size());
    return b;
}

ScalingFit fit_scaling_at(const std::vector<FailureSample> &samples, double f_min, double f_max) {
    std::map<int, std::vector<FailureSample>> by_k;
    for (const auto &s : samples) {
        by_k[s.k].push_back(s);
    }
    ScalingFit out;
    out.f_min = f_min;
    out.f_max = f_max;
    for (const auto &[k, group] : by_k) {
        out.per_k.push_back(fit_per_k(group, f_max, f_min));
    }
    out.beta = fit_beta(out.per_k);
    out.cuts_tried = 1;
    return out;
}

ScalingFit fit_scaling(const std::vector<FailureSample> &samples, double f_max) {
    std::set<double> cuts = {0.0};
    for (const auto &s : samples) {
        const double r = s.rate();
        if (r > 0.0 && r <= f_max) {
            cuts.insert(r);
        }
    }
    ScalingFit best;
    double best_err = std::numeric_limits<double>::infinity();
    int tried = 0;
    bool found = false;
    for (double cut : cuts) {
        ScalingFit f;
        try {
            f = fit_scaling_at(samples, cut, f_max);
        } catch (const InsufficientData &) {
            continue;
        }
        ++tried;
        if (f.beta.slope_stderr < best_err) {
            best_err = f.beta.slope_stderr;
            best = std::move(f);
            found = true;
        }
    }
    if (!found) {
        throw InsufficientData("no lower cut leaves 3 points for every k");
    }
    best.cuts_tried = tried;
    return best;
}

}  // namespace toricmem

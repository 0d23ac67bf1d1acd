#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "clr/ratcode.hpp"
#include "clr/simplex.hpp"

namespace clr {

namespace {

constexpr double kEps = 1e-12;

struct FitData {
    Eigen::ArrayXd th, de, ath, erfv, ex;
};

FitData build_grid(const AlphaFitGrid& g) {
    if (g.n_theta < 2 || g.n_ratio < 2) throw std::invalid_argument("grid needs at least 2x2 points");
    const int m = g.n_theta * g.n_ratio;
    FitData d;
    d.th.resize(2 * m);
    d.de.resize(2 * m);
    for (int i = 0; i < g.n_theta; ++i) {
        double e = g.theta_exp_min +
                   (g.theta_exp_max - g.theta_exp_min) * i / static_cast<double>(g.n_theta - 1);
        double t = std::exp2(e);
        for (int j = 0; j < g.n_ratio; ++j) {
            double r = g.ratio_min +
                       (g.ratio_max - g.ratio_min) * j / static_cast<double>(g.n_ratio - 1);
            int idx = i * g.n_ratio + j;
            d.th[idx] = t;
            d.de[idx] = t / r;
            d.th[m + idx] = -t;
            d.de[m + idx] = t / r;
        }
    }
    d.ath = d.th.abs().max(kEps);
    d.erfv = (10.0 * ((d.ath - d.de) / d.ath) + 1.0).unaryExpr([](double x) { return std::erf(x); });
    d.ex.resize(2 * m);
    for (int i = 0; i < 2 * m; ++i) d.ex[i] = alpha_len(d.th[i], d.de[i]);
    return d;
}

Eigen::ArrayXd smooth_surface(const FitData& d, double c1, double c2) {
    Eigen::ArrayXd inner = (d.th * d.th + c2).max(kEps);
    Eigen::ArrayXd lg2 = inner.log2().max(kEps).log2();
    Eigen::ArrayXd tau = (c1 * lg2 - 1.0).abs();
    return ((tau * (d.erfv * d.ath + d.de)).max(kEps) / d.de).max(kEps).log2();
}

double surface_mae(const FitData& d, const AlphaApproxConstants& c) {
    Eigen::ArrayXd g = smooth_surface(d, c.c1, c.c2);
    return (c.c0 * g + 1.0 - d.ex).abs().mean();
}

}  // namespace

double alpha_smooth_mean_abs_error(const AlphaApproxConstants& c, const AlphaFitGrid& grid) {
    FitData d = build_grid(grid);
    double acc = 0.0;
    for (int i = 0; i < d.th.size(); ++i) acc += std::abs(alpha_smooth(d.th[i], d.de[i], c) - d.ex[i]);
    return acc / static_cast<double>(d.th.size());
}

AlphaFitResult fit_alpha_constants(const AlphaFitGrid& grid) {
    FitData d = build_grid(grid);

    // Phase 1: closed-form c0 over a (c1, c2) lattice, ranked by mean abs error.
    std::vector<double> c1s, c2s;
    for (int i = 0; i < 25; ++i) c1s.push_back(0.02 + (1.0 - 0.02) * i / 24.0);
    for (int i = 0; i < 24; ++i) c1s.push_back(1.1 + (8.0 - 1.1) * i / 23.0);
    for (int i = 0; i < 41; ++i) c2s.push_back(std::exp2(-4.0 + 20.0 * i / 40.0));

    struct Row {
        double mae, c0, c1, c2;
        bool operator<(const Row& o) const { return mae < o.mae; }
    };
    std::vector<Row> rows;
    Eigen::ArrayXd target = d.ex - 1.0;
    for (double c1 : c1s) {
        for (double c2 : c2s) {
            Eigen::ArrayXd g = smooth_surface(d, c1, c2);
            double dn = (g * g).sum();
            if (dn < 1e-9) continue;
            double c0 = (target * g).sum() / dn;
            double mae = (c0 * g + 1.0 - d.ex).abs().mean();
            rows.push_back({mae, c0, c1, c2});
        }
    }
    std::sort(rows.begin(), rows.end());

    // Phase 2: Nelder-Mead polish from the best basins plus fixed starts.
    std::vector<std::vector<double>> starts;
    for (std::size_t i = 0; i < rows.size() && i < 5; ++i) {
        starts.push_back({rows[i].c0, rows[i].c1, rows[i].c2});
    }
    starts.push_back({1.44, 0.3, 2.0});
    starts.push_back({1.44, 0.25, 1.2});
    starts.push_back({2.9, 0.1, 1.0});
    starts.push_back({1.5, 0.2, 300.0});

    auto objective = [&](const std::vector<double>& c) {
        return surface_mae(d, {c[0], c[1], c[2]});
    };
    SimplexOptions opt;
    opt.tol = 1e-8;
    opt.max_iterations = 3000;
    AlphaApproxConstants best{};
    double best_mae = std::numeric_limits<double>::infinity();
    for (const auto& s : starts) {
        auto r = simplex_minimize(objective, s, opt);
        if (r.value < best_mae) {
            best_mae = r.value;
            best = {r.x[0], r.x[1], r.x[2]};
        }
    }

    AlphaFitResult res;
    res.constants = best;
    res.mean_abs_error_bits = alpha_smooth_mean_abs_error(best, grid);
    return res;
}

}  // namespace clr

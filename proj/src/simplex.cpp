#include "clr/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace clr {

SimplexResult simplex_minimize(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& start, const SimplexOptions& opt) {
    const int n = static_cast<int>(start.size());
    const int cap = opt.max_iterations > 0 ? opt.max_iterations : 400 * n;

    std::vector<std::vector<double>> v(n + 1, start);
    for (int i = 0; i < n; ++i) {
        if (start[i] != 0.0) v[i + 1][i] *= 1.05;
        else v[i + 1][i] = 0.00025;
    }
    std::vector<double> fv(n + 1);
    for (int i = 0; i <= n; ++i) fv[i] = f(v[i]);

    std::vector<int> order(n + 1);
    auto sort_vertices = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    };

    SimplexResult res;
    int iter = 0;
    for (; iter < cap; ++iter) {
        sort_vertices();
        int best = order[0], worst = order[n];
        if (fv[worst] - fv[best] <= opt.tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (int i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (int j = 0; j < n; ++j) centroid[j] += v[i][j];
        }
        for (int j = 0; j < n; ++j) centroid[j] /= n;

        auto blend = [&](double t, const std::vector<double>& far) {
            std::vector<double> p(n);
            for (int j = 0; j < n; ++j) p[j] = centroid[j] + t * (far[j] - centroid[j]);
            return p;
        };

        std::vector<double> xr = blend(-opt.reflection, v[worst]);
        double fr = f(xr);
        if (fr < fv[best]) {
            std::vector<double> xe = blend(-opt.reflection * opt.expansion, v[worst]);
            double fe = f(xe);
            if (fe < fr) { v[worst] = std::move(xe); fv[worst] = fe; }
            else { v[worst] = std::move(xr); fv[worst] = fr; }
            continue;
        }
        if (fr < fv[order[n - 1]]) {
            v[worst] = std::move(xr);
            fv[worst] = fr;
            continue;
        }
        bool outside = fr < fv[worst];
        std::vector<double> xc = outside ? blend(-opt.reflection * opt.contraction, v[worst])
                                         : blend(opt.contraction, v[worst]);
        double fc = f(xc);
        if (fc < (outside ? fr : fv[worst])) {
            v[worst] = std::move(xc);
            fv[worst] = fc;
            continue;
        }
        for (int i = 0; i <= n; ++i) {
            if (i == best) continue;
            for (int j = 0; j < n; ++j) v[i][j] = v[best][j] + opt.shrink * (v[i][j] - v[best][j]);
            fv[i] = f(v[i]);
        }
    }

    sort_vertices();
    res.x = v[order[0]];
    res.value = fv[order[0]];
    res.iterations = iter;
    return res;
}

}  // namespace clr

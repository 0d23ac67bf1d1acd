#include "clr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "clr/sphere.hpp"

namespace clr {

Eigen::VectorXd CLRModel::full_theta(int n_features, bool sharp) const {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(n_features);
    const Eigen::VectorXd& src = sharp ? theta_sharp : theta;
    for (std::size_t i = 0; i < active_features.size(); ++i) full[active_features[i]] = src[i];
    return full;
}

Eigen::VectorXd ols_init(const DesignMatrix& d) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(d.X.transpose(),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.solve(d.y);
}

Eigen::VectorXd initial_delta(const DesignMatrix& d, const Eigen::VectorXd& theta) {
    double sdy = std::sqrt((d.y.array() - d.y.mean()).square().mean());
    Eigen::VectorXd rms =
        d.X.array().square().rowwise().mean().max(1e-12).sqrt().matrix();
    Eigen::VectorXd de(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        de[i] = std::max(std::abs(theta[i]) / 2.0, 1e-3 * sdy / rms[i]);
        de[i] = std::max(de[i], 1e-12);
    }
    return de;
}

namespace {

struct RoundResult {
    Eigen::VectorXd theta, delta;
    double bits = 0.0;
};

RoundResult optimize_round(const DesignMatrix& sub, const OptimizerConfig& cfg,
                           const AlphaApproxConstants& c) {
    const int m = sub.n_features();
    Eigen::VectorXd th0 = ols_init(sub);
    Eigen::VectorXd de0 = initial_delta(sub, th0);

    std::vector<double> z0(2 * m);
    for (int i = 0; i < m; ++i) {
        z0[i] = th0[i];
        z0[m + i] = std::log(de0[i]);
    }
    auto f = [&](const std::vector<double>& z) {
        Eigen::VectorXd th(m), de(m);
        for (int i = 0; i < m; ++i) {
            th[i] = z[i];
            de[i] = std::exp(z[m + i]);
        }
        return clr_objective(sub, th, de, c).total_bits;
    };
    SimplexOptions so = cfg.simplex;
    if (so.max_iterations == 0) so.max_iterations = 400 * 2 * m;
    auto r = simplex_minimize(f, z0, so);

    RoundResult out;
    out.theta.resize(m);
    out.delta.resize(m);
    for (int i = 0; i < m; ++i) {
        out.theta[i] = r.x[i];
        out.delta[i] = std::exp(r.x[m + i]);
    }
    out.bits = r.value;
    return out;
}

void finalize(CLRModel& model, const DesignMatrix& d) {
    const int m = static_cast<int>(model.active_features.size());
    model.theta_sharp.resize(m);
    DesignMatrix sub = d.take_rows(model.active_features);
    for (int i = 0; i < m; ++i) {
        model.theta_sharp[i] = alpha_encode(model.theta[i], model.delta[i]).value();
    }
    try {
        model.exact_bits = exact_description_length(sub, model.theta, model.delta);
        model.has_exact_bits = true;
    } catch (const CapacityError&) {
        model.has_exact_bits = false;
        model.exact_bits = 0;
    }
}

double empty_model_bits(const DesignMatrix& d) {
    double n = static_cast<double>(d.n_obs());
    double floor = n * 0.25 * d.delta_y * d.delta_y;
    return h_bar(d.n_obs(), std::max(d.y.squaredNorm(), floor), d.delta_y);
}

}  // namespace

CLRModel fit_clr(const DesignMatrix& d, const OptimizerConfig& cfg, const AlphaApproxConstants& c,
                 int bias_index) {
    const int K = d.n_features();
    std::vector<int> active(K);
    std::iota(active.begin(), active.end(), 0);

    CLRModel model;
    model.bias_index = bias_index;

    for (int round = 0; round < cfg.max_cull_rounds; ++round) {
        if (active.empty()) break;
        DesignMatrix sub = d.take_rows(active);
        RoundResult r = optimize_round(sub, cfg, c);

        std::vector<int> keep;
        for (std::size_t i = 0; i < active.size(); ++i) {
            if (active[i] == bias_index || r.delta[i] <= std::abs(r.theta[i])) {
                keep.push_back(static_cast<int>(i));
            }
        }
        if (keep.size() == active.size() || round == cfg.max_cull_rounds - 1) {
            model.active_features = active;
            model.theta = r.theta;
            model.delta = r.delta;
            model.description_length_bits = r.bits;
            model.round_limit_hit = keep.size() != active.size();
            finalize(model, d);
            return model;
        }
        std::vector<int> next;
        next.reserve(keep.size());
        for (int i : keep) next.push_back(active[i]);
        active = std::move(next);
    }

    // every feature culled away: code the raw target
    model.active_features.clear();
    model.theta.resize(0);
    model.delta.resize(0);
    model.theta_sharp.resize(0);
    model.description_length_bits = empty_model_bits(d);
    try {
        model.exact_bits =
            exact_description_length(d.take_rows({}), Eigen::VectorXd(), Eigen::VectorXd());
        model.has_exact_bits = true;
    } catch (const CapacityError&) {
        model.has_exact_bits = false;
    }
    return model;
}

}  // namespace clr

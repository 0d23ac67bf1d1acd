#include "clr/bench.hpp"

#include <chrono>
#include <cmath>

#include "clr/objective.hpp"

namespace clr {

namespace {

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

double population_sd(const Eigen::VectorXd& v) {
    double m = v.mean();
    return std::sqrt((v.array() - m).square().sum() / static_cast<double>(v.size()));
}

void mean_sd(const std::vector<double>& xs, double* mean, double* sd) {
    if (xs.empty()) {
        *mean = *sd = 0.0;
        return;
    }
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    *mean = m;
    *sd = std::sqrt(v / static_cast<double>(xs.size()));
}

MethodStats stats_from(const std::string& method, const std::vector<SimRow>& rows, bool clr) {
    MethodStats s;
    s.method = method;
    std::vector<double> nz, mse, ratio;
    for (const auto& r : rows) {
        if (r.failed) continue;
        nz.push_back(clr ? r.clr_nonzero : r.l2_nonzero);
        mse.push_back(clr ? r.clr_mse : r.l2_mse);
        ratio.push_back(clr ? r.clr_resid_ratio : r.l2_resid_ratio);
        s.seconds += clr ? r.clr_seconds : r.l2_seconds;
    }
    mean_sd(nz, &s.nonzero_mean, &s.nonzero_sd);
    mean_sd(mse, &s.mse_mean, &s.mse_sd);
    mean_sd(ratio, &s.resid_ratio_mean, &s.resid_ratio_sd);
    return s;
}

}  // namespace

double sim_delta_y(const Eigen::VectorXd& y) {
    return 1e-6 * std::max(population_sd(y), 1e-12);
}

void SimReport::recompute() {
    clr = stats_from("CLR", rows, true);
    l2 = stats_from("L2", rows, false);
}

SimReport run_sim_suite(const SimSpec& spec, const std::string& name, const OptimizerConfig& cfg,
                        const AlphaApproxConstants& c) {
    SimReport report;
    report.name = name;
    report.spec = spec;
    const int p = static_cast<int>(spec.beta.size());

    std::vector<RawDataset> sets = generate_sim(spec);
    for (int r = 0; r < static_cast<int>(sets.size()); ++r) {
        SimRow row;
        row.dataset = r;
        try {
            ExpandedDesign e = expand_features(sets[r], FeatureProductSpec::identity_and_bias());
            DesignMatrix d =
                DesignMatrix::make(e.X, sets[r].target, sim_delta_y(sets[r].target), 0.0);

            double t0 = now_seconds();
            CLRModel model = fit_clr(d, cfg, c, e.bias_index);
            row.clr_seconds = now_seconds() - t0;
            Eigen::VectorXd full = model.full_theta(d.n_features());
            for (int i = 0; i < p; ++i) row.clr_nonzero += full[i] != 0.0 ? 1 : 0;
            row.clr_mse = (full.head(p) - spec.beta).squaredNorm() / p;
            Eigen::VectorXd resid = d.y - d.X.transpose() * full;
            row.clr_resid_ratio =
                std::sqrt(resid.squaredNorm() / d.n_obs()) / spec.sigma;
            row.clr_bits = model.description_length_bits;

            t0 = now_seconds();
            Eigen::VectorXd l2 = ols_init(d);
            row.l2_seconds = now_seconds() - t0;
            for (int i = 0; i < p; ++i) row.l2_nonzero += l2[i] != 0.0 ? 1 : 0;
            row.l2_mse = (l2.head(p) - spec.beta).squaredNorm() / p;
            Eigen::VectorXd l2_resid = d.y - d.X.transpose() * l2;
            row.l2_resid_ratio =
                std::sqrt(l2_resid.squaredNorm() / d.n_obs()) / spec.sigma;
        } catch (const std::exception& ex) {
            row.failed = true;
            row.error = ex.what();
        }
        report.rows.push_back(std::move(row));
    }
    report.recompute();
    return report;
}

GeneralizationRow run_generalization(const RawDataset& data, const std::string& name,
                                     double train_fraction, std::uint64_t seed,
                                     const FeatureProductSpec& features,
                                     const OptimizerConfig& cfg, const AlphaApproxConstants& c) {
    GeneralizationRow row;
    row.name = name;
    try {
        SplitResult parts = split(data, train_fraction, seed);
        ExpandedDesign train = expand_features(parts.train, features);
        ExpandedDesign test = expand_features(parts.test, features);
        row.n_train = parts.train.n_obs();
        row.n_test = parts.test.n_obs();
        row.n_vars = data.n_vars();
        row.n_features = static_cast<int>(train.names.size()) - (train.bias_index >= 0 ? 1 : 0);

        double dy = estimate_delta_y(parts.train.target);
        double offset = parts.train.target.minCoeff();
        DesignMatrix d = DesignMatrix::make(train.X, parts.train.target, dy, offset);

        double t0 = now_seconds();
        CLRModel model = fit_clr(d, cfg, c, train.bias_index);
        row.clr_seconds = now_seconds() - t0;
        for (int idx : model.active_features) {
            if (idx != train.bias_index) ++row.clr_kept;
        }
        row.clr_sparsity =
            row.n_features > 0 ? static_cast<double>(row.clr_kept) / row.n_features : 0.0;

        Eigen::VectorXd full = model.full_theta(d.n_features());
        Eigen::VectorXd l2 = ols_init(d);
        auto sd_ratio = [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           const Eigen::VectorXd& th) {
            Eigen::VectorXd resid = y - X.transpose() * th;
            double m = y.mean();
            double denom = std::sqrt((y.array() - m).square().sum() / y.size());
            double rm = resid.mean();
            double num = std::sqrt((resid.array() - rm).square().sum() / resid.size());
            return denom > 0.0 ? num / denom : 0.0;
        };
        row.clr_train_ratio = sd_ratio(train.X, parts.train.target, full);
        row.clr_test_ratio = sd_ratio(test.X, parts.test.target, full);
        row.l2_train_ratio = sd_ratio(train.X, parts.train.target, l2);
        row.l2_test_ratio = sd_ratio(test.X, parts.test.target, l2);
    } catch (const std::exception& ex) {
        row.failed = true;
        row.error = ex.what();
    }
    return row;
}

}  // namespace clr

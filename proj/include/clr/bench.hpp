#pragma once

#include <string>
#include <vector>

#include "clr/data.hpp"
#include "clr/optimize.hpp"

namespace clr {

// Step for continuous simulated targets, which carry no intrinsic grid: far
// below the noise scale so discretization never influences the fit.
double sim_delta_y(const Eigen::VectorXd& y);

struct SimRow {
    int dataset = 0;
    bool failed = false;
    std::string error;
    int clr_nonzero = 0;        // coefficients kept among the true inputs, bias excluded
    double clr_mse = 0.0;       // mean squared coefficient error against the truth
    double clr_resid_ratio = 0.0;  // rms residual over the true noise scale
    double clr_bits = 0.0;
    double clr_seconds = 0.0;
    int l2_nonzero = 0;
    double l2_mse = 0.0;
    double l2_resid_ratio = 0.0;
    double l2_seconds = 0.0;
};

struct MethodStats {
    std::string method;
    double nonzero_mean = 0.0, nonzero_sd = 0.0;
    double mse_mean = 0.0, mse_sd = 0.0;
    double resid_ratio_mean = 0.0, resid_ratio_sd = 0.0;
    double seconds = 0.0;
};

struct SimReport {
    std::string name;
    SimSpec spec;
    std::vector<SimRow> rows;
    MethodStats clr, l2;

    // aggregates over the non-failed rows; kept in sync by recompute()
    void recompute();
};

SimReport run_sim_suite(const SimSpec& spec, const std::string& name,
                        const OptimizerConfig& cfg = {},
                        const AlphaApproxConstants& c = default_alpha_constants());

struct GeneralizationRow {
    std::string name;
    bool failed = false;
    std::string error;
    int n_train = 0, n_test = 0;
    int n_vars = 0;      // raw input variables
    int n_features = 0;  // expanded candidates excluding the bias
    int clr_kept = 0;    // surviving non-bias features
    double clr_sparsity = 0.0;  // clr_kept / n_features
    double clr_train_ratio = 0.0, clr_test_ratio = 0.0;  // sd(resid) / sd(target)
    double l2_train_ratio = 0.0, l2_test_ratio = 0.0;
    double clr_seconds = 0.0;
};

GeneralizationRow run_generalization(const RawDataset& data, const std::string& name,
                                     double train_fraction, std::uint64_t seed,
                                     const FeatureProductSpec& features,
                                     const OptimizerConfig& cfg = {},
                                     const AlphaApproxConstants& c = default_alpha_constants());

}  // namespace clr

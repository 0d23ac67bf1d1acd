#pragma once

#include <vector>

#include "clr/objective.hpp"
#include "clr/simplex.hpp"

namespace clr {

struct OptimizerConfig {
    SimplexOptions simplex;     // tol is in bits; max_iterations 0 -> 400 * dim
    int max_cull_rounds = 20;
    std::uint64_t seed = 1234;  // used by callers that generate replications
};

struct CLRModel {
    std::vector<int> active_features;  // indices into the full design
    Eigen::VectorXd theta;             // per active feature
    Eigen::VectorXd delta;
    Eigen::VectorXd theta_sharp;       // quantized coefficients actually coded
    double description_length_bits = 0.0;
    bool has_exact_bits = false;
    long long exact_bits = 0;
    bool round_limit_hit = false;
    int bias_index = -1;

    // Scatter theta_sharp (or theta) back to the full feature space.
    Eigen::VectorXd full_theta(int n_features, bool sharp = false) const;
};

// Minimum-norm least squares via SVD.
Eigen::VectorXd ols_init(const DesignMatrix& d);

// Starting quantization widths: half the coefficient, floored by a small
// multiple of the target scale over the feature scale.
Eigen::VectorXd initial_delta(const DesignMatrix& d, const Eigen::VectorXd& theta);

// Alternate simplex descent on (theta, log delta) with culling of features
// whose width exceeds their coefficient; the bias row is exempt.
CLRModel fit_clr(const DesignMatrix& d, const OptimizerConfig& cfg, const AlphaApproxConstants& c,
                 int bias_index = -1);

}  // namespace clr

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "clr/ratcode.hpp"

namespace clr {

// Rows are features, columns are observations.
struct DesignMatrix {
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    double delta_y = 1.0;
    double offset = 0.0;  // quantization anchor for y
    Eigen::VectorXd gram_diag;

    static DesignMatrix make(Eigen::MatrixXd X, Eigen::VectorXd y, double delta_y,
                             double offset = 0.0);
    int n_features() const { return static_cast<int>(X.rows()); }
    int n_obs() const { return static_cast<int>(X.cols()); }
    DesignMatrix take_rows(const std::vector<int>& rows) const;
};

struct ObjectiveEval {
    double param_bits = 0.0;
    double residual_bits = 0.0;
    double total_bits = 0.0;
    double s_sq = 0.0;     // effective squared residual radius, after the floor
    double penalty = 0.0;  // expected squared perturbation from quantizing theta
};

double residual_norm_sq(const DesignMatrix& d, const Eigen::VectorXd& theta);

// Index of x on the grid anchored at offset with step delta_y.  Throws
// CapacityError when the index leaves the exactly representable range.
std::int64_t grid_index(double x, double offset, double delta_y);

// Grid index gaps between y and the prediction from exactly coded parameters.
std::vector<std::int64_t> quantized_residuals(const DesignMatrix& d,
                                              const Eigen::VectorXd& theta_sharp);

// E |X^T d|^2 for d_i uniform on [-delta_i, delta_i]: sum_i diag(XX^T)_i delta_i^2 / 3.
double expected_perturbation(const DesignMatrix& d, const Eigen::VectorXd& delta);

ObjectiveEval clr_objective(const DesignMatrix& d, const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& delta, const AlphaApproxConstants& c);

// Bits actually spent: quantized parameters, then the universal code of the
// quantized residual vector's lattice rank.
long long exact_description_length(const DesignMatrix& d, const Eigen::VectorXd& theta,
                                   const Eigen::VectorXd& delta);

}  // namespace clr

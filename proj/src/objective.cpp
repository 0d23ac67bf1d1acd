#include "clr/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "clr/sphere.hpp"

namespace clr {

DesignMatrix DesignMatrix::make(Eigen::MatrixXd X, Eigen::VectorXd y, double delta_y,
                                double offset) {
    if (X.cols() != y.size()) throw std::invalid_argument("X and y disagree on observations");
    if (!(delta_y > 0.0)) throw std::invalid_argument("delta_y must be positive");
    if (!X.allFinite() || !y.allFinite()) throw std::invalid_argument("non-finite input");
    DesignMatrix d;
    d.X = std::move(X);
    d.y = std::move(y);
    d.delta_y = delta_y;
    d.offset = offset;
    d.gram_diag = d.X.rowwise().squaredNorm();
    return d;
}

DesignMatrix DesignMatrix::take_rows(const std::vector<int>& rows) const {
    DesignMatrix d;
    d.X.resize(rows.size(), X.cols());
    d.gram_diag.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.X.row(i) = X.row(rows[i]);
        d.gram_diag[i] = gram_diag[rows[i]];
    }
    d.y = y;
    d.delta_y = delta_y;
    d.offset = offset;
    return d;
}

double residual_norm_sq(const DesignMatrix& d, const Eigen::VectorXd& theta) {
    if (theta.size() != d.X.rows()) throw std::invalid_argument("theta size mismatch");
    return (d.y - d.X.transpose() * theta).squaredNorm();
}

double expected_perturbation(const DesignMatrix& d, const Eigen::VectorXd& delta) {
    if (delta.size() != d.X.rows()) throw std::invalid_argument("delta size mismatch");
    return (d.gram_diag.array() * delta.array().square()).sum() / 3.0;
}

ObjectiveEval clr_objective(const DesignMatrix& d, const Eigen::VectorXd& theta,
                            const Eigen::VectorXd& delta, const AlphaApproxConstants& c) {
    ObjectiveEval ev;
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        ev.param_bits += alpha_smooth(theta[i], delta[i], c);
    }
    ev.penalty = expected_perturbation(d, delta);
    double n = static_cast<double>(d.n_obs());
    double floor = n * 0.25 * d.delta_y * d.delta_y;
    ev.s_sq = std::max(residual_norm_sq(d, theta) + ev.penalty, floor);
    ev.residual_bits = h_bar(d.n_obs(), ev.s_sq, d.delta_y);
    ev.total_bits = ev.param_bits + ev.residual_bits;
    return ev;
}

std::int64_t grid_index(double x, double offset, double delta_y) {
    double r = (x - offset) / delta_y;
    if (!(std::abs(r) < 9.0e15)) throw CapacityError("quantized value exceeds exact range");
    return std::llround(r);
}

std::vector<std::int64_t> quantized_residuals(const DesignMatrix& d,
                                              const Eigen::VectorXd& theta_sharp) {
    if (theta_sharp.size() != d.X.rows()) throw std::invalid_argument("theta size mismatch");
    Eigen::VectorXd pred = d.X.transpose() * theta_sharp;
    std::vector<std::int64_t> e(d.n_obs());
    for (int j = 0; j < d.n_obs(); ++j) {
        e[j] = grid_index(d.y[j], d.offset, d.delta_y) - grid_index(pred[j], d.offset, d.delta_y);
    }
    return e;
}

long long exact_description_length(const DesignMatrix& d, const Eigen::VectorXd& theta,
                                   const Eigen::VectorXd& delta) {
    if (theta.size() != d.X.rows() || delta.size() != d.X.rows()) {
        throw std::invalid_argument("theta/delta size mismatch");
    }
    long long bits = 0;
    Eigen::VectorXd sharp(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        RationalCode c = alpha_encode(theta[i], delta[i]);
        bits += c.length();
        sharp[i] = c.value();
    }
    bits += length_u_big(spiral_rank(quantized_residuals(d, sharp)));
    return bits;
}

}  // namespace clr

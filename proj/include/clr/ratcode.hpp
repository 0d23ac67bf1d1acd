#pragma once

#include <cstdint>

#include "clr/intcode.hpp"

namespace clr {

// Quantized rational q * 2^k; the wire format is U(q) followed by U(k).
struct RationalCode {
    std::int64_t q = 0;
    int k = 0;
    double value() const;
    int length() const;
};

RationalCode alpha_encode(double theta, double delta);
double alpha_decode(const RationalCode& c);
int alpha_len(double theta, double delta);
void write_alpha(BitWriter& w, const RationalCode& c);
RationalCode read_alpha(BitReader& r);

struct AlphaApproxConstants {
    double c0 = 0, c1 = 0, c2 = 0;
};

// Constants produced by the frozen fit below; kept in sync by the tests.
AlphaApproxConstants default_alpha_constants();

// Smooth surrogate for alpha_len, differentiable away from theta = 0.
double alpha_smooth(double theta, double delta, const AlphaApproxConstants& c);

struct AlphaFitGrid {
    // |theta| log-spaced, ratio |theta|/delta linear, both signs of theta.
    double theta_exp_min = -8.0, theta_exp_max = 8.0;
    double ratio_min = 1.0, ratio_max = 256.0;
    int n_theta = 500, n_ratio = 100;
};

struct AlphaFitResult {
    AlphaApproxConstants constants;
    double mean_abs_error_bits = 0.0;
};

// Deterministic two-phase fit: a closed-form-c0 scan over a (c1, c2) lattice,
// then Nelder-Mead polish of the top basins plus a few fixed starts.
AlphaFitResult fit_alpha_constants(const AlphaFitGrid& grid = {});

double alpha_smooth_mean_abs_error(const AlphaApproxConstants& c, const AlphaFitGrid& grid = {});

}  // namespace clr

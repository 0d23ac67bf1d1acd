#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "clr/objective.hpp"
#include "clr/optimize.hpp"

namespace clr {

struct CodecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Container layout, all little-endian:
//   "CLR1" | u32 version | u64 n_obs | u64 k_active | f64 delta_y | f64 offset
//   | k_active x u32 feature index
// followed by a bit stream: one rational code per active coefficient (mantissa
// then exponent), then the signed universal code of the residual lattice rank,
// zero-padded to a byte boundary.
inline constexpr std::uint32_t kCodecVersion = 1;

std::size_t header_bytes(std::size_t k_active);

// Serializes the model against the full design the indices refer to.  The bit
// stream length equals exact_description_length for the active submatrix.
std::vector<std::uint8_t> encode_model(const DesignMatrix& full, const CLRModel& model);

struct DecodedModel {
    std::uint64_t n_obs = 0;
    double delta_y = 0.0;
    double offset = 0.0;
    std::vector<int> active_features;
    Eigen::VectorXd theta_sharp;  // exact mantissa * 2^exponent coefficient values
    Eigen::VectorXd target;       // reconstructed grid-aligned target values
};

// Inverts encode_model given the same full design matrix (features x obs).
DecodedModel decode_model(const std::vector<std::uint8_t>& bytes, const Eigen::MatrixXd& X_full);

}  // namespace clr

#pragma once

#include <cstdint>
#include <vector>

#include "clr/intcode.hpp"

namespace clr {

// Work cap for lattice tables: dim * radius_sq, plus a cell ceiling that keeps
// the memo's memory bounded.
inline constexpr double kLatticeBudget = 1e8;
inline constexpr double kLatticeCellCap = 8e6;

struct LatticeCount {
    int dimension = 0;
    std::int64_t radius_sq = 0;
    BigInt count;
};

// Number of integer points of squared norm <= radius_sq in Z^dimension.
LatticeCount lattice_count(int dimension, std::int64_t radius_sq);

// Rank of an integer vector in the spiral order: by squared norm, ties broken
// lexicographically with the natural signed order on each coordinate.
BigInt spiral_rank(const std::vector<std::int64_t>& v);
std::vector<std::int64_t> spiral_unrank(int dimension, const BigInt& rank);

// Bits for the universal code of a residual vector's rank.
int spherical_code_len(const std::vector<std::int64_t>& residual);

double sphere_volume_log2(int dimension, double radius);

// Smooth residual cost: log-volume of the dimension-ball of squared radius
// s_sq, measured in quanta of delta_y.
double h_bar(int dimension, double s_sq, double delta_y);

// Residual cost with the noise scale itself coded: minimizes over a log grid
// of quantization widths for sigma.
double h_applied(int dimension, double sigma);

}  // namespace clr

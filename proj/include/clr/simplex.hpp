#pragma once

#include <functional>
#include <vector>

namespace clr {

struct SimplexOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double tol = 1e-3;        // stop when the vertex value spread falls below this
    int max_iterations = 0;   // 0 means 400 * dimension
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex.  The start vertex is perturbed per coordinate
// (factor 1.05, or 0.00025 for zero coordinates) to span the initial simplex.
SimplexResult simplex_minimize(const std::function<double(const std::vector<double>&)>& f,
                               const std::vector<double>& start,
                               const SimplexOptions& opt = {});

}  // namespace clr

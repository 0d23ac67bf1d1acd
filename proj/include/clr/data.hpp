#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace clr {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RawDataset {
    Eigen::MatrixXd observations;  // rows are input variables, columns are rows of the file
    Eigen::VectorXd target;
    std::vector<std::string> variable_names;
    std::string target_name;
    std::vector<std::string> warnings;

    int n_vars() const { return static_cast<int>(observations.rows()); }
    int n_obs() const { return static_cast<int>(observations.cols()); }
};

// Parses a numeric CSV with a header row.  Non-numeric columns other than the
// target are dropped with a warning; a non-numeric target is an error.
RawDataset load_csv(const std::string& path, const std::string& target_column);
void save_csv(const RawDataset& data, const std::string& path);

// Largest grid step that all target values sit on (floating GCD of the sorted
// unique gaps); falls back to range / 2^16 when the gaps share no usable step.
double estimate_delta_y(const Eigen::VectorXd& target);

enum class FeatureFn { Identity, Square, PairwiseProduct };

struct FeatureGroup {
    FeatureFn fn = FeatureFn::Identity;
    std::vector<int> vars;  // empty means all input variables
};

struct FeatureProductSpec {
    std::vector<FeatureGroup> groups;
    bool include_bias = true;

    static FeatureProductSpec identity_and_bias();
    static FeatureProductSpec squares_and_bias();
};

struct ExpandedDesign {
    Eigen::MatrixXd X;  // features x observations
    std::vector<std::string> names;
    int bias_index = -1;
};

ExpandedDesign expand_features(const RawDataset& data, const FeatureProductSpec& spec);

struct SimSpec {
    Eigen::VectorXd beta;
    double sigma = 1.0;
    double rho = 0.5;  // AR(1) correlation between input variables
    int n_obs = 20;
    int n_datasets = 50;
    std::uint64_t seed = 1234;

    static SimSpec sim1();
    static SimSpec sim2();
    static SimSpec sim3();
};

// Independent replications; dataset r is drawn from a generator seeded with
// seed + r.  The named constructors offset their seeds so the three suites
// never share a stream.
std::vector<RawDataset> generate_sim(const SimSpec& spec);

struct SplitResult {
    RawDataset train, test;
};

// Shuffled split with ceil(fraction * n) rows in train.
SplitResult split(const RawDataset& data, double train_fraction, std::uint64_t seed);

}  // namespace clr

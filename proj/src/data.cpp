#include "clr/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Cholesky>

namespace clr {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool parse_double(const std::string& s, double* out) {
    if (s.empty()) return false;
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end != c + s.size()) return false;
    *out = v;
    return true;
}

}  // namespace

RawDataset load_csv(const std::string& path, const std::string& target_column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty file: " + path);
    std::vector<std::string> header = split_csv_line(line);
    if (header.empty()) throw DataError("empty header: " + path);

    std::vector<std::vector<std::string>> cells;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto row = split_csv_line(line);
        if (row.size() != header.size()) {
            throw DataError("row " + std::to_string(cells.size() + 2) + " has " +
                            std::to_string(row.size()) + " cells, header has " +
                            std::to_string(header.size()));
        }
        cells.push_back(std::move(row));
    }
    const int n = static_cast<int>(cells.size());
    if (n < 2) throw DataError("need at least two rows: " + path);

    int target_col = -1;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == target_column) target_col = static_cast<int>(j);
    }
    if (target_col < 0) throw DataError("no column named '" + target_column + "'");

    RawDataset data;
    std::vector<int> numeric_cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        bool numeric = true;
        double v;
        for (int i = 0; i < n && numeric; ++i) numeric = parse_double(cells[i][j], &v);
        if (static_cast<int>(j) == target_col) {
            if (!numeric) throw DataError("target column '" + target_column + "' is not numeric");
            continue;
        }
        if (numeric) {
            numeric_cols.push_back(static_cast<int>(j));
            data.variable_names.push_back(header[j]);
        } else {
            data.warnings.push_back("dropped non-numeric column '" + header[j] + "'");
        }
    }
    if (numeric_cols.empty()) throw DataError("no numeric input columns: " + path);

    data.observations.resize(numeric_cols.size(), n);
    data.target.resize(n);
    data.target_name = target_column;
    for (int i = 0; i < n; ++i) {
        double v;
        for (std::size_t k = 0; k < numeric_cols.size(); ++k) {
            parse_double(cells[i][numeric_cols[k]], &v);
            data.observations(k, i) = v;
        }
        parse_double(cells[i][target_col], &v);
        data.target[i] = v;
    }
    if (!data.observations.allFinite() || !data.target.allFinite()) {
        throw DataError("non-finite values in " + path);
    }
    return data;
}

void save_csv(const RawDataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    for (const auto& name : data.variable_names) out << name << ",";
    out << data.target_name << "\n";
    char buf[64];
    for (int i = 0; i < data.n_obs(); ++i) {
        for (int k = 0; k < data.n_vars(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", data.observations(k, i));
            out << buf << ",";
        }
        std::snprintf(buf, sizeof buf, "%.17g", data.target[i]);
        out << buf << "\n";
    }
}

double estimate_delta_y(const Eigen::VectorXd& target) {
    if (target.size() < 2) throw DataError("need at least two target values");
    std::set<double> uniq(target.data(), target.data() + target.size());
    if (uniq.size() < 2) throw DataError("constant target");
    double lo = *uniq.begin(), hi = *uniq.rbegin();
    double range = hi - lo;
    double fallback = range / 65536.0;
    double tol = 1e-9 * range;

    double g = 0.0;
    for (double v : uniq) {
        double d = v - lo;
        if (d <= 0.0) continue;
        while (d > tol) {
            double t = std::fmod(g, d);
            g = d;
            d = t;
        }
    }
    if (g < fallback) return fallback;
    for (double v : uniq) {
        double r = (v - lo) / g;
        if (std::abs(r - std::round(r)) > 1e-6 * std::max(std::abs(r), 1.0)) return fallback;
    }
    return g;
}

FeatureProductSpec FeatureProductSpec::identity_and_bias() {
    FeatureProductSpec s;
    s.groups.push_back({FeatureFn::Identity, {}});
    return s;
}

FeatureProductSpec FeatureProductSpec::squares_and_bias() {
    FeatureProductSpec s;
    s.groups.push_back({FeatureFn::Identity, {}});
    s.groups.push_back({FeatureFn::Square, {}});
    return s;
}

ExpandedDesign expand_features(const RawDataset& data, const FeatureProductSpec& spec) {
    const int j = data.n_vars();
    std::vector<Eigen::VectorXd> rows;
    std::vector<std::string> names;
    for (const auto& g : spec.groups) {
        std::vector<int> vars = g.vars;
        if (vars.empty()) {
            vars.resize(j);
            std::iota(vars.begin(), vars.end(), 0);
        }
        for (int v : vars) {
            if (v < 0 || v >= j) throw DataError("feature group references unknown variable");
        }
        switch (g.fn) {
            case FeatureFn::Identity:
                for (int v : vars) {
                    rows.push_back(data.observations.row(v).transpose());
                    names.push_back(data.variable_names[v]);
                }
                break;
            case FeatureFn::Square:
                for (int v : vars) {
                    rows.push_back(data.observations.row(v).array().square().matrix().transpose());
                    names.push_back(data.variable_names[v] + "^2");
                }
                break;
            case FeatureFn::PairwiseProduct:
                for (std::size_t a = 0; a < vars.size(); ++a) {
                    for (std::size_t b = a + 1; b < vars.size(); ++b) {
                        rows.push_back((data.observations.row(vars[a]).array() *
                                        data.observations.row(vars[b]).array())
                                           .matrix()
                                           .transpose());
                        names.push_back(data.variable_names[vars[a]] + "*" +
                                        data.variable_names[vars[b]]);
                    }
                }
                break;
        }
    }
    ExpandedDesign out;
    if (spec.include_bias) {
        rows.push_back(Eigen::VectorXd::Ones(data.n_obs()));
        names.push_back("bias");
        out.bias_index = static_cast<int>(rows.size()) - 1;
    }
    if (rows.empty()) throw DataError("feature expansion produced nothing");
    out.X.resize(rows.size(), data.n_obs());
    for (std::size_t i = 0; i < rows.size(); ++i) out.X.row(i) = rows[i].transpose();
    out.names = std::move(names);
    return out;
}

SimSpec SimSpec::sim1() {
    SimSpec s;
    s.beta.resize(8);
    s.beta << 3, 1.5, 0, 0, 2, 0, 0, 0;
    s.sigma = 3.0;
    s.seed = 1234 + 1000 * 1;
    return s;
}

SimSpec SimSpec::sim2() {
    SimSpec s;
    s.beta = Eigen::VectorXd::Constant(8, 0.85);
    s.sigma = 3.0;
    s.seed = 1234 + 1000 * 2;
    return s;
}

SimSpec SimSpec::sim3() {
    SimSpec s;
    s.beta = Eigen::VectorXd::Zero(8);
    s.beta[0] = 5.0;
    s.sigma = 2.0;
    s.seed = 1234 + 1000 * 3;
    return s;
}

std::vector<RawDataset> generate_sim(const SimSpec& spec) {
    const int p = static_cast<int>(spec.beta.size());
    if (p < 1) throw DataError("empty coefficient vector");
    if (spec.n_obs < 2 || spec.n_datasets < 1) throw DataError("bad sim sizes");
    Eigen::MatrixXd cov(p, p);
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) cov(a, b) = std::pow(spec.rho, std::abs(a - b));
    Eigen::MatrixXd L = Eigen::LLT<Eigen::MatrixXd>(cov).matrixL();

    std::vector<RawDataset> out;
    out.reserve(spec.n_datasets);
    for (int r = 0; r < spec.n_datasets; ++r) {
        std::mt19937_64 rng(spec.seed + static_cast<std::uint64_t>(r));
        std::normal_distribution<double> nd(0.0, 1.0);
        RawDataset d;
        d.observations.resize(p, spec.n_obs);
        d.target.resize(spec.n_obs);
        Eigen::VectorXd z(p);
        for (int i = 0; i < spec.n_obs; ++i) {
            for (int a = 0; a < p; ++a) z[a] = nd(rng);
            d.observations.col(i) = L * z;
            d.target[i] = d.observations.col(i).dot(spec.beta) + spec.sigma * nd(rng);
        }
        for (int a = 0; a < p; ++a) d.variable_names.push_back("x" + std::to_string(a + 1));
        d.target_name = "y";
        out.push_back(std::move(d));
    }
    return out;
}

SplitResult split(const RawDataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
        throw DataError("train fraction must be inside (0, 1)");
    }
    const int n = data.n_obs();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    const int n_train = static_cast<int>(std::ceil(train_fraction * n));
    if (n_train < 1 || n_train >= n) throw DataError("split leaves an empty side");

    auto take = [&](int from, int count) {
        RawDataset d;
        d.observations.resize(data.n_vars(), count);
        d.target.resize(count);
        for (int i = 0; i < count; ++i) {
            d.observations.col(i) = data.observations.col(idx[from + i]);
            d.target[i] = data.target[idx[from + i]];
        }
        d.variable_names = data.variable_names;
        d.target_name = data.target_name;
        return d;
    };
    return {take(0, n_train), take(n_train, n - n_train)};
}

}  // namespace clr

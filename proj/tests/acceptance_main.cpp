// End-to-end acceptance checks.  Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "clr/bench.hpp"
#include "clr/codec.hpp"
#include "clr/data.hpp"
#include "clr/intcode.hpp"
#include "clr/objective.hpp"
#include "clr/optimize.hpp"
#include "clr/ratcode.hpp"
#include "clr/sphere.hpp"

using namespace clr;

namespace {

int g_failures = 0;

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("%s: %s (%s)\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// --- 1. simulation suites against least squares -----------------------------

void check_sim_replication() {
    double t0 = now_seconds();
    SimReport s1 = run_sim_suite(SimSpec::sim1(), "SIM1");
    SimReport s2 = run_sim_suite(SimSpec::sim2(), "SIM2");
    SimReport s3 = run_sim_suite(SimSpec::sim3(), "SIM3");
    double elapsed = now_seconds() - t0;
    int failed_rows = 0;
    for (const auto* r : {&s1, &s2, &s3}) {
        for (const auto& row : r->rows) failed_rows += row.failed ? 1 : 0;
    }
    bool ok = s3.clr.nonzero_mean >= 0.5 && s3.clr.nonzero_mean <= 3.5 &&
              s3.clr.mse_mean < s3.l2.mse_mean && s1.clr.nonzero_mean > 0.0 &&
              s1.clr.nonzero_mean < 8.0 && failed_rows == 0 && elapsed < 600.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "SIM3 nonzero %.2f in [0.5,3.5], SIM3 mse %.3f < L2 %.3f, SIM1 nonzero %.2f in "
                  "(0,8), %d failed rows, %.1fs",
                  s3.clr.nonzero_mean, s3.clr.mse_mean, s3.l2.mse_mean, s1.clr.nonzero_mean,
                  failed_rows, elapsed);
    report("simulation replication", ok, buf);
}

// --- 2. smooth rational-code approximation quality ---------------------------

void check_alpha_surface() {
    double t0 = now_seconds();
    AlphaFitGrid grid;  // 500 x 100 x signs = 10^5 points
    double mae = alpha_smooth_mean_abs_error(default_alpha_constants(), grid);
    double elapsed = now_seconds() - t0;
    bool ok = mae <= 1.5 && elapsed < 60.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "mean |smooth - exact| = %.4f bits over 100000 pairs, %.1fs",
                  mae, elapsed);
    report("smooth parameter-code surface", ok, buf);
}

// --- 3. sphere volume vs exact counts ----------------------------------------

void check_sphere_approximation() {
    double t0 = now_seconds();
    double worst = 0.0, worst_rank_gap = 0.0;
    for (int n = 2; n <= 6; ++n) {
        for (int r = 5; r <= 10; ++r) {
            std::int64_t s2 = static_cast<std::int64_t>(r) * r;
            LatticeCount c = lattice_count(n, s2);
            double exact = std::log2(c.count.convert_to<double>());
            double approx = h_bar(n, static_cast<double>(s2), 1.0);
            worst = std::max(worst, std::abs(approx - exact));
            double rank_bits = length_u_big(BigInt(c.count - 1));
            worst_rank_gap = std::max(worst_rank_gap, std::abs(approx - rank_bits));
        }
    }
    double elapsed = now_seconds() - t0;
    bool ok = worst <= 3.0 && elapsed < 60.0;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "max |h_bar - lg2 count| = %.2f bits for N in 2..6, r in 5..10; coded-rank gap "
                  "up to %.2f bits, %.2fs",
                  worst, worst_rank_gap, elapsed);
    report("sphere volume approximation", ok, buf);
}

// --- 4. Kraft sum, prefix freeness, tail behavior ----------------------------

void check_code_soundness() {
    long double partial = 0.0L;
    for (std::uint64_t n = 0; n <= 1000000; ++n) {
        partial += std::exp2l(-static_cast<long double>(length_un(n)));
    }
    std::vector<long double> fib = {0.0L, 1.0L, 1.0L};
    for (int i = 3; i <= 120; ++i) fib.push_back(fib[i - 1] + fib[i - 2]);
    long double ftail = 0.0L;
    for (int k = 1; k <= 118; ++k) {
        if (fib[k + 1] <= 1000001.0L) continue;
        ftail += fib[k] * std::exp2l(-static_cast<long double>(k + 2));
    }
    long double bound = partial + ftail + std::exp2l(-4.0L);

    std::vector<std::string> words;
    words.reserve(10001);
    for (std::uint64_t n = 0; n <= 10000; ++n) words.push_back(encode_un(n).bits);
    std::sort(words.begin(), words.end());
    bool prefix_free = true;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) {
        if (words[i + 1].compare(0, words[i].size(), words[i]) == 0) prefix_free = false;
    }

    std::uint64_t s = f_switch_point();
    bool switched_exact = true;
    for (std::uint64_t n = s; n < s + 5000; ++n) {
        if (length_un(n) != 4 + length_e(n)) switched_exact = false;
    }
    for (std::uint64_t n : std::vector<std::uint64_t>{s + 1000000, s * 2, s * 1000}) {
        if (length_un(n) != 4 + length_e(n)) switched_exact = false;
    }

    bool ok = bound <= 1.0L && partial > 0.9L && prefix_free && switched_exact;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "Kraft partial %.6f, bound %.6f <= 1; prefix-free to 10^4; escape length exact "
                  "from switch %llu",
                  static_cast<double>(partial), static_cast<double>(bound),
                  static_cast<unsigned long long>(s));
    report("universal integer code soundness", ok, buf);
}

// --- 5. rational reconstruction contract --------------------------------------

void check_alpha_reconstruction() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> exp_dist(-8.0, 8.0);
    std::uniform_real_distribution<double> ratio_dist(0.0, 8.0);
    int failures = 0;
    double bias_sum = 0.0;
    const int trials = 100000;
    for (int t = 0; t < trials; ++t) {
        double theta = std::pow(2.0, exp_dist(rng)) * (rng() & 1 ? 1.0 : -1.0);
        double delta = std::abs(theta) / std::pow(2.0, ratio_dist(rng));
        double sharp = alpha_encode(theta, delta).value();
        if (!(std::abs(sharp - theta) < delta)) ++failures;
        bias_sum += (sharp - theta) / delta;
    }
    double bias = bias_sum / trials;
    bool ok = failures == 0 && std::abs(bias) <= 0.05;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d/%d outside delta, mean signed gap %.4f delta units",
                  failures, trials, bias);
    report("rational code reconstruction", ok, buf);
}

// --- 6. loss-less codec round trips -------------------------------------------

bool roundtrip_exact(const DesignMatrix& d, const CLRModel& model, std::size_t* bytes_out,
                     long long* payload_out, long long* naive_out) {
    std::vector<std::uint8_t> bytes = encode_model(d, model);
    DesignMatrix act = d.take_rows(model.active_features);
    long long exact = exact_description_length(act, model.theta, model.delta);
    if (bytes.size() !=
        header_bytes(model.active_features.size()) + static_cast<std::size_t>((exact + 7) / 8)) {
        return false;
    }
    DecodedModel back = decode_model(bytes, d.X);
    for (int j = 0; j < d.n_obs(); ++j) {
        double snapped =
            d.offset + d.delta_y * static_cast<double>(grid_index(d.y[j], d.offset, d.delta_y));
        if (back.target[j] != snapped) return false;
    }
    *bytes_out = bytes.size();
    *payload_out = exact;
    long long naive = 0;
    for (int j = 0; j < d.n_obs(); ++j) naive += length_u(grid_index(d.y[j], d.offset, d.delta_y));
    *naive_out = naive;
    return true;
}

std::string write_temp_csv(const std::string& stem, const std::string& body) {
    std::string path = "/tmp/clr_acceptance_" + stem + ".csv";
    std::ofstream out(path);
    out << body;
    return path;
}

void check_codec_roundtrip() {
    double t0 = now_seconds();
    OptimizerConfig cfg;
    int bad = 0, payload_wins = 0;
    // simulation instances, targets snapped to a coarse grid first
    std::vector<RawDataset> sets = generate_sim(SimSpec::sim1());
    for (auto& ds : sets) {
        double dy = 0.1;
        double offset = std::floor(ds.target.minCoeff() * 10.0) / 10.0;
        for (int j = 0; j < ds.n_obs(); ++j) {
            ds.target[j] = offset + dy * std::llround((ds.target[j] - offset) / dy);
        }
        ExpandedDesign e = expand_features(ds, FeatureProductSpec::identity_and_bias());
        DesignMatrix d = DesignMatrix::make(e.X, ds.target, dy, offset);
        CLRModel m = fit_clr(d, cfg, default_alpha_constants(), e.bias_index);
        std::size_t nbytes = 0;
        long long payload = 0, naive = 0;
        if (!roundtrip_exact(d, m, &nbytes, &payload, &naive)) {
            ++bad;
        } else if (payload <= naive) {
            ++payload_wins;
        }
    }
    // constructed CSV files through the full ingestion path
    std::vector<std::string> paths;
    {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> nd;
        std::string body = "temp,label,pressure,flow\n";
        for (int i = 0; i < 36; ++i) {
            double a = nd(rng), b = nd(rng);
            double y = 0.25 * std::llround(4.0 * (1.5 * a - 0.5 * b + nd(rng) * 0.3));
            char line[160];
            std::snprintf(line, sizeof line, "%.17g,s%d,%.17g,%.17g\n", a, i % 3, b, y);
            body += line;
        }
        paths.push_back(write_temp_csv("plant", body));
    }
    {
        std::string body = "dose,mass\n";
        for (int i = 0; i < 24; ++i) {
            char line[96];
            std::snprintf(line, sizeof line, "%d,%d\n", i, 3 * i + (i % 5) - 2);
            body += line;
        }
        paths.push_back(write_temp_csv("integer", body));
    }
    {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> nd;
        std::string body = "x1,x2,score\n";
        for (int i = 0; i < 30; ++i) {
            double a = nd(rng), b = nd(rng);
            double y = 0.05 * std::llround((2.0 * a * a + b + 0.2 * nd(rng)) / 0.05);
            char line[160];
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", a, b, y);
            body += line;
        }
        paths.push_back(write_temp_csv("quadratic", body));
    }
    int csv_bad = 0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        RawDataset raw = load_csv(paths[i], i == 0 ? "flow" : i == 1 ? "mass" : "score");
        FeatureProductSpec spec = i == 2 ? FeatureProductSpec::squares_and_bias()
                                         : FeatureProductSpec::identity_and_bias();
        ExpandedDesign e = expand_features(raw, spec);
        DesignMatrix d = DesignMatrix::make(e.X, raw.target, estimate_delta_y(raw.target),
                                            raw.target.minCoeff());
        CLRModel m = fit_clr(d, cfg, default_alpha_constants(), e.bias_index);
        std::size_t nbytes = 0;
        long long payload = 0, naive = 0;
        if (!roundtrip_exact(d, m, &nbytes, &payload, &naive)) ++csv_bad;
        std::remove(paths[i].c_str());
    }
    double elapsed = now_seconds() - t0;
    bool ok = bad == 0 && csv_bad == 0;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "%d/50 sim mismatches, %d/3 csv mismatches, payload <= naive on %d/50, %.1fs",
                  bad, csv_bad, payload_wins, elapsed);
    report("loss-less codec round trip", ok, buf);
}

// --- 7. expected perturbation vs Monte Carlo ----------------------------------

void check_perturbation_mc() {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        int k = 2 + static_cast<int>(rng() % 7);
        int n = 15 + static_cast<int>(rng() % 30);
        Eigen::MatrixXd X(k, n);
        for (int i = 0; i < X.size(); ++i) X.data()[i] = nd(rng);
        Eigen::VectorXd y(n);
        for (int j = 0; j < n; ++j) y[j] = nd(rng);
        Eigen::VectorXd delta(k);
        for (int i = 0; i < k; ++i) delta[i] = 0.1 + 0.9 * std::abs(ud(rng));
        DesignMatrix d = DesignMatrix::make(X, y, 0.01, 0.0);
        double analytic = expected_perturbation(d, delta);

        Eigen::MatrixXd G = X * X.transpose();
        const int draws = 1000000;
        double acc = 0.0;
        Eigen::VectorXd v(k);
        for (int t = 0; t < draws; ++t) {
            for (int i = 0; i < k; ++i) v[i] = delta[i] * ud(rng);
            acc += v.dot(G * v);
        }
        double mc = acc / draws;
        worst = std::max(worst, std::abs(mc - analytic) / analytic);
    }
    bool ok = worst <= 0.01;
    char buf[128];
    std::snprintf(buf, sizeof buf, "max relative gap %.4f over 10 gram matrices, 10^6 draws each",
                  worst);
    report("expected perturbation Monte Carlo", ok, buf);
}

// --- 8. objective smoothness ----------------------------------------------------

void check_objective_smoothness() {
    std::mt19937_64 rng(47);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    AlphaApproxConstants c = default_alpha_constants();
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        int k = 1 + static_cast<int>(rng() % 8);
        int n = 25;
        Eigen::MatrixXd X(k, n);
        for (int i = 0; i < X.size(); ++i) X.data()[i] = nd(rng);
        Eigen::VectorXd y(n);
        for (int j = 0; j < n; ++j) y[j] = 3.0 * nd(rng);
        DesignMatrix d = DesignMatrix::make(X, y, 1e-4, 0.0);

        Eigen::VectorXd z(2 * k);
        for (int i = 0; i < k; ++i) {
            double theta = (0.5 + 3.5 * ud(rng)) * (rng() & 1 ? 1.0 : -1.0);
            z[i] = theta;
            z[k + i] = std::log(std::abs(theta) / std::pow(2.0, 1.0 + 5.0 * ud(rng)));
        }
        auto f = [&](const Eigen::VectorXd& zz) {
            Eigen::VectorXd th = zz.head(k);
            Eigen::VectorXd de = zz.tail(k).array().exp();
            return clr_objective(d, th, de, c).total_bits;
        };
        for (int i = 0; i < 2 * k; ++i) {
            double h = 1e-3 * std::max(1.0, std::abs(z[i]));
            auto central = [&](double step) {
                Eigen::VectorXd zp = z, zm = z;
                zp[i] += step;
                zm[i] -= step;
                return (f(zp) - f(zm)) / (2.0 * step);
            };
            double g1 = central(h);
            double g2 = central(h / 2.0);
            worst = std::max(worst, std::abs(g1 - g2) / std::max(std::abs(g2), 1.0));
        }
    }
    bool ok = worst <= 1e-4;
    char buf[128];
    std::snprintf(buf, sizeof buf, "max step-halving drift %.2e over 100 random points", worst);
    report("objective smoothness", ok, buf);
}

// --- 9. least-squares initializer ------------------------------------------------

void check_ols() {
    std::mt19937_64 rng(53);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (int rep = 0; rep < 30; ++rep) {
        int k = 2 + static_cast<int>(rng() % 10);
        int n = 4 + static_cast<int>(rng() % 40);
        Eigen::MatrixXd X(k, n);
        for (int i = 0; i < X.size(); ++i) X.data()[i] = nd(rng);
        if (rep % 3 == 1 && k >= 2) X.row(1) = 2.0 * X.row(0);  // rank-deficient
        if (rep % 3 == 2 && k >= 3) X.row(2).setZero();
        Eigen::VectorXd y(n);
        for (int j = 0; j < n; ++j) y[j] = nd(rng);
        DesignMatrix d = DesignMatrix::make(X, y, 0.01, 0.0);
        Eigen::VectorXd theta = ols_init(d);
        double g = (X * (y - X.transpose() * theta)).norm();
        double scale = std::max(X.norm() * y.norm(), 1e-300);
        worst = std::max(worst, g / scale);
    }
    bool ok = worst <= 1e-6;
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "max normalized residual-gradient norm %.2e over 30 instances", worst);
    report("least-squares initializer", ok, buf);
}

}  // namespace

int main() {
    double t0 = now_seconds();
    check_sim_replication();
    check_alpha_surface();
    check_sphere_approximation();
    check_code_soundness();
    check_alpha_reconstruction();
    check_codec_roundtrip();
    check_perturbation_mc();
    check_objective_smoothness();
    check_ols();
    std::printf("%d of 9 criteria failed, total %.1fs\n", g_failures, now_seconds() - t0);
    return g_failures == 0 ? 0 : 1;
}

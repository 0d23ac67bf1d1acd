#include "clr/sphere.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "clr/ratcode.hpp"

namespace clr {

namespace {

std::int64_t isqrt64(std::int64_t x) {
    if (x < 0) throw std::domain_error("isqrt of negative");
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(x)));
    while (r > 0 && r * r > x) --r;
    while ((r + 1) * (r + 1) <= x) ++r;
    return r;
}

// Shell counts S_m(t) = #{z in Z^m : |z|^2 = t} and their running sums,
// grown monotonically and shared process-wide.
class LatticeTable {
public:
    static LatticeTable& instance() {
        static LatticeTable t;
        return t;
    }

    void ensure(int dim, std::int64_t s2) {
        if (dim < 0 || s2 < 0) throw std::domain_error("negative lattice request");
        double work = static_cast<double>(dim) * static_cast<double>(s2);
        if (work > kLatticeBudget) throw CapacityError("lattice request over work budget");
        double cells = static_cast<double>(dim + 1) * static_cast<double>(s2 + 1);
        if (cells > kLatticeCellCap) throw CapacityError("lattice table too large");

        std::int64_t want_cols = s2 + 1;
        if (want_cols > cols_) {
            for (std::size_t m = 0; m < shells_.size(); ++m) extend_row(static_cast<int>(m), want_cols);
            cols_ = want_cols;
        }
        while (static_cast<int>(shells_.size()) <= dim) {
            shells_.emplace_back();
            balls_.emplace_back();
            extend_row(static_cast<int>(shells_.size()) - 1, cols_);
        }
    }

    const BigInt& shell(int m, std::int64_t t) const { return shells_[m][t]; }

    BigInt ball(int m, std::int64_t t) const {
        if (t < 0) return 0;
        return balls_[m][t];
    }

    std::int64_t cols() const { return cols_; }

    std::mutex& mutex() { return mu_; }

private:
    void extend_row(int m, std::int64_t want_cols) {
        auto& row = shells_[m];
        auto& cum = balls_[m];
        row.reserve(want_cols);
        cum.reserve(want_cols);
        for (std::int64_t t = static_cast<std::int64_t>(row.size()); t < want_cols; ++t) {
            BigInt s;
            if (m == 0) {
                s = (t == 0) ? 1 : 0;
            } else {
                const auto& below = shells_[m - 1];
                s = below[t];
                for (std::int64_t k = 1; k * k <= t; ++k) s += 2 * below[t - k * k];
            }
            row.push_back(s);
            cum.push_back(t == 0 ? row[0] : cum[t - 1] + row[t]);
        }
    }

    std::vector<std::vector<BigInt>> shells_;
    std::vector<std::vector<BigInt>> balls_;
    std::int64_t cols_ = 0;
    std::mutex mu_;
};

std::int64_t norm_sq(const std::vector<std::int64_t>& v) {
    std::int64_t s2 = 0;
    for (auto x : v) {
        if (std::abs(x) > (1ll << 30)) throw CapacityError("lattice coordinate too large");
        s2 += x * x;
    }
    return s2;
}

}  // namespace

LatticeCount lattice_count(int dimension, std::int64_t radius_sq) {
    if (dimension < 1) throw std::domain_error("dimension must be positive");
    auto& tab = LatticeTable::instance();
    std::lock_guard<std::mutex> lk(tab.mutex());
    tab.ensure(dimension, radius_sq);
    return {dimension, radius_sq, tab.ball(dimension, radius_sq)};
}

BigInt spiral_rank(const std::vector<std::int64_t>& v) {
    const int n = static_cast<int>(v.size());
    if (n < 1) throw std::domain_error("empty vector");
    std::int64_t s2 = norm_sq(v);
    auto& tab = LatticeTable::instance();
    std::lock_guard<std::mutex> lk(tab.mutex());
    tab.ensure(n, s2);

    BigInt rank = tab.ball(n, s2 - 1);
    std::int64_t rem = s2;
    for (int i = 0; i < n; ++i) {
        std::int64_t lo = -isqrt64(rem);
        for (std::int64_t k = lo; k < v[i]; ++k) {
            rank += tab.shell(n - 1 - i, rem - k * k);
        }
        rem -= v[i] * v[i];
    }
    return rank;
}

std::vector<std::int64_t> spiral_unrank(int dimension, const BigInt& rank) {
    if (dimension < 1) throw std::domain_error("dimension must be positive");
    if (rank < 0) throw std::domain_error("negative rank");
    auto& tab = LatticeTable::instance();
    std::lock_guard<std::mutex> lk(tab.mutex());

    std::int64_t hi = 4;
    tab.ensure(dimension, hi);
    while (tab.ball(dimension, hi) <= rank) {
        hi *= 2;
        tab.ensure(dimension, hi);
    }
    std::int64_t s2 = 0;
    {
        std::int64_t a = 0, b = hi;  // smallest s2 with ball > rank
        while (a < b) {
            std::int64_t mid = a + (b - a) / 2;
            if (tab.ball(dimension, mid) > rank) b = mid;
            else a = mid + 1;
        }
        s2 = a;
    }

    BigInt r = rank - tab.ball(dimension, s2 - 1);
    std::vector<std::int64_t> v(dimension, 0);
    std::int64_t rem = s2;
    for (int i = 0; i < dimension; ++i) {
        std::int64_t root = isqrt64(rem);
        bool placed = false;
        for (std::int64_t k = -root; k <= root; ++k) {
            const BigInt& c = tab.shell(dimension - 1 - i, rem - k * k);
            if (r < c) {
                v[i] = k;
                rem -= k * k;
                placed = true;
                break;
            }
            r -= c;
        }
        if (!placed) throw std::logic_error("unrank walk fell off the shell");
    }
    return v;
}

int spherical_code_len(const std::vector<std::int64_t>& residual) {
    return length_u_big(spiral_rank(residual));
}

double sphere_volume_log2(int dimension, double radius) {
    if (dimension < 1) throw std::domain_error("dimension must be positive");
    if (!(radius > 0.0)) throw std::domain_error("radius must be positive");
    double n = dimension;
    return 0.5 * n * std::log2(M_PI) - std::lgamma(0.5 * n + 1.0) / std::log(2.0) +
           n * std::log2(radius);
}

double h_bar(int dimension, double s_sq, double delta_y) {
    if (!(delta_y > 0.0)) throw std::domain_error("delta_y must be positive");
    double s = std::max(s_sq, 1e-12);
    return sphere_volume_log2(dimension, std::sqrt(s) / delta_y);
}

double h_applied(int dimension, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
    double n = dimension;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 120; ++i) {
        double ds = sigma * std::pow(1e-6, 1.0 - i / 120.0);
        double v = n * std::log2(sigma + ds) + alpha_len(sigma, ds);
        best = std::min(best, v);
    }
    return 0.5 * n * std::log2(2.0 * M_PI * std::exp(1.0)) + best;
}

}  // namespace clr

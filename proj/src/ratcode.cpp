#include "clr/ratcode.hpp"

#include <cmath>
#include <stdexcept>

namespace clr {

namespace {
constexpr double kEps = 1e-12;
constexpr double kMaxMantissa = 4.611686018427387904e18;  // 2^62
}  // namespace

double RationalCode::value() const { return std::ldexp(static_cast<double>(q), k); }

int RationalCode::length() const { return length_u(q) + length_u(k); }

RationalCode alpha_encode(double theta, double delta) {
    if (!std::isfinite(theta)) throw std::domain_error("theta must be finite");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::domain_error("delta must be positive");
    int k = std::ilogb(delta);
    double scaled = std::ldexp(theta, -k);
    if (!(std::abs(scaled) < kMaxMantissa)) {
        throw CapacityError("mantissa does not fit 64 bits");
    }
    RationalCode c;
    c.q = std::llround(scaled);
    c.k = c.q == 0 ? 0 : k;
    return c;
}

double alpha_decode(const RationalCode& c) { return c.value(); }

int alpha_len(double theta, double delta) { return alpha_encode(theta, delta).length(); }

void write_alpha(BitWriter& w, const RationalCode& c) {
    write_u(w, c.q);
    write_u(w, c.k);
}

RationalCode read_alpha(BitReader& r) {
    RationalCode c;
    c.q = decode_u(r);
    std::int64_t k = decode_u(r);
    c.k = static_cast<int>(k);
    return c;
}

AlphaApproxConstants default_alpha_constants() { return {2.5222, 0.0491, -470.7123}; }

double alpha_smooth(double theta, double delta, const AlphaApproxConstants& c) {
    double ath = std::max(std::abs(theta), kEps);
    double er = std::erf(10.0 * ((ath - delta) / ath) + 1.0);
    double inner = std::max(theta * theta + c.c2, kEps);
    double lg2 = std::log2(std::max(std::log2(inner), kEps));
    double tau = std::abs(c.c1 * lg2 - 1.0);
    return c.c0 * std::log2(std::max(std::max(tau * (er * ath + delta), kEps) / delta, kEps)) + 1.0;
}

}  // namespace clr

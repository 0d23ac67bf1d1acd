#include "clr/intcode.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

namespace clr {

namespace {

// Fibonacci numbers, F[1] = F[2] = 1, as far as 64 bits allow.
const std::vector<std::uint64_t>& fib() {
    static const std::vector<std::uint64_t> f = [] {
        std::vector<std::uint64_t> v{0, 1, 1};
        while (true) {
            std::uint64_t a = v[v.size() - 1], b = v[v.size() - 2];
            if (a > std::numeric_limits<std::uint64_t>::max() - b) break;
            v.push_back(a + b);
        }
        return v;
    }();
    return f;
}

// First canonical codeword of each block; block k has F_k words of width k+2.
const std::vector<std::uint64_t>& first_codes() {
    static const std::vector<std::uint64_t> fc = [] {
        const auto& F = fib();
        std::vector<std::uint64_t> v{0, 0b100};
        for (int k = 1; k + 2 < 64; ++k) v.push_back((v[k] + F[k]) << 1);
        return v;
    }();
    return fc;
}

// Block index of a nonzero position: F_{k+1} <= pos < F_{k+2}.
int block_of(std::uint64_t pos) {
    const auto& F = fib();
    for (int k = 1; k + 2 < static_cast<int>(F.size()); ++k) {
        if (pos < F[k + 2]) return k;
    }
    throw CapacityError("position out of range for the F scheme");
}

// (pattern, width) for a position's codeword.
std::pair<std::uint64_t, int> f_pattern(std::uint64_t pos) {
    if (pos == 0) return {0, 1};
    int k = block_of(pos);
    const auto& FC = first_codes();
    if (k >= static_cast<int>(FC.size())) throw CapacityError("F codeword wider than 64 bits");
    return {FC[k] + (pos - fib()[k + 1]), k + 2};
}

std::string pattern_to_string(std::uint64_t pattern, int width) {
    std::string s(width, '0');
    for (int i = 0; i < width; ++i) {
        if ((pattern >> (width - 1 - i)) & 1u) s[i] = '1';
    }
    return s;
}

constexpr std::uint64_t kEscapePos = 2;  // the len-4 word "1010"

std::uint64_t value_to_pos(std::uint64_t n) { return n < 2 ? n : n + 1; }

int length_f_value(std::uint64_t n) { return length_f(value_to_pos(n)); }

std::uint64_t compute_switch() {
    // Both length functions are piecewise constant; compare them at every
    // breakpoint (F block starts, powers of two) and take the earliest value
    // from which the escape branch never loses.
    const auto& F = fib();
    std::vector<std::uint64_t> ev;
    for (std::size_t k = 1; k + 1 < F.size(); ++k) {
        if (F[k + 1] >= 3) ev.push_back(F[k + 1] - 1);
    }
    for (int j = 1; j <= 61; ++j) ev.push_back(1ull << j);
    ev.push_back(2);
    std::sort(ev.begin(), ev.end());
    ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
    ev.erase(std::remove_if(ev.begin(), ev.end(),
                            [](std::uint64_t v) { return v < 2 || v >= (1ull << 61); }),
             ev.end());

    std::uint64_t best = 0;
    for (std::size_t i = ev.size(); i-- > 0;) {
        int diff = length_f_value(ev[i]) - (4 + length_e(ev[i]));
        if (diff < 0) break;
        best = ev[i];
    }
    return best;
}

void write_pos(BitWriter& w, std::uint64_t pos) {
    auto [pat, width] = f_pattern(pos);
    w.push_bits(pat, width);
}

// Elias delta body shared by the plain and big readers: returns the decoded
// bit length L after the unary/binary prefix.
std::uint64_t read_delta_length(BitReader& r) {
    int zeros = 0;
    while (r.read_bit() == 0) {
        if (++zeros > 63) throw CapacityError("delta prefix too long");
    }
    return (1ull << zeros) | r.read_bits(zeros);
}

}  // namespace

Codeword encode_f(std::uint64_t pos) {
    auto [pat, width] = f_pattern(pos);
    return {pattern_to_string(pat, width)};
}

int length_f(std::uint64_t pos) {
    if (pos == 0) return 1;
    return block_of(pos) + 2;
}

Codeword encode_e(std::uint64_t n) {
    if (n == 0) throw std::domain_error("E scheme starts at 1");
    int L = std::bit_width(n);
    int LL = std::bit_width(static_cast<unsigned>(L));
    std::string s(LL - 1, '0');
    s += pattern_to_string(static_cast<std::uint64_t>(L), LL);
    if (L > 1) s += pattern_to_string(n & ((1ull << (L - 1)) - 1), L - 1);
    return {s};
}

int length_e(std::uint64_t n) {
    if (n == 0) throw std::domain_error("E scheme starts at 1");
    int L = std::bit_width(n);
    int LL = std::bit_width(static_cast<unsigned>(L));
    return (L - 1) + 2 * (LL - 1) + 1;
}

void write_e_big(BitWriter& w, const BigInt& n) {
    if (n <= 0) throw std::domain_error("E scheme starts at 1");
    std::uint64_t L = boost::multiprecision::msb(n) + 1;
    int LL = std::bit_width(L);
    for (int i = 0; i < LL - 1; ++i) w.push_bit(0);
    w.push_bits(L, LL);
    for (std::uint64_t i = L - 1; i-- > 0;) {
        w.push_bit(boost::multiprecision::bit_test(n, static_cast<unsigned>(i)) ? 1 : 0);
    }
}

BigInt read_e_big(BitReader& r) {
    std::uint64_t L = read_delta_length(r);
    if (L > (1ull << 32)) throw CapacityError("delta payload too long");
    BigInt n = 1;
    for (std::uint64_t i = 1; i < L; ++i) n = (n << 1) | r.read_bit();
    return n;
}

int length_e_big(const BigInt& n) {
    if (n <= 0) throw std::domain_error("E scheme starts at 1");
    std::uint64_t L = boost::multiprecision::msb(n) + 1;
    int LL = std::bit_width(L);
    return static_cast<int>((L - 1) + 2 * (LL - 1) + 1);
}

std::uint64_t f_switch_point() {
    static const std::uint64_t s = compute_switch();
    return s;
}

Codeword encode_un(std::uint64_t n) {
    if (n >= f_switch_point()) {
        Codeword esc = encode_f(kEscapePos);
        return {esc.bits + encode_e(n).bits};
    }
    return encode_f(value_to_pos(n));
}

int length_un(std::uint64_t n) {
    if (n >= f_switch_point()) return 4 + length_e(n);
    return length_f_value(n);
}

void write_un(BitWriter& w, std::uint64_t n) {
    if (n >= f_switch_point()) {
        write_pos(w, kEscapePos);
        int L = std::bit_width(n);
        int LL = std::bit_width(static_cast<unsigned>(L));
        for (int i = 0; i < LL - 1; ++i) w.push_bit(0);
        w.push_bits(static_cast<std::uint64_t>(L), LL);
        if (L > 1) w.push_bits(n & ((1ull << (L - 1)) - 1), L - 1);
        return;
    }
    write_pos(w, value_to_pos(n));
}

void write_un_big(BitWriter& w, const BigInt& n) {
    if (n < f_switch_point()) {
        write_un(w, n.convert_to<std::uint64_t>());
        return;
    }
    write_pos(w, kEscapePos);
    write_e_big(w, n);
}

std::uint64_t read_un(BitReader& r) {
    BigInt n = read_un_big(r);
    if (n > std::numeric_limits<std::uint64_t>::max()) throw CapacityError("value exceeds 64 bits");
    return n.convert_to<std::uint64_t>();
}

BigInt read_un_big(BitReader& r) {
    if (r.read_bit() == 0) return 0;
    const auto& F = fib();
    const auto& FC = first_codes();
    std::uint64_t acc = 1;
    int len = 1;
    while (true) {
        acc = (acc << 1) | static_cast<std::uint64_t>(r.read_bit());
        ++len;
        if (len < 3) continue;
        int k = len - 2;
        if (k >= static_cast<int>(FC.size())) throw CapacityError("malformed F codeword");
        if (acc >= FC[k] && acc - FC[k] < F[k]) {
            std::uint64_t pos = F[k + 1] + (acc - FC[k]);
            if (pos == kEscapePos) return read_e_big(r);
            return pos < 2 ? pos : pos - 1;
        }
    }
}

int length_un_big(const BigInt& n) {
    if (n < f_switch_point()) return length_un(n.convert_to<std::uint64_t>());
    return 4 + length_e_big(n);
}

std::uint64_t zigzag(std::int64_t z) {
    if (z >= 0) return 2 * static_cast<std::uint64_t>(z);
    return 2 * (static_cast<std::uint64_t>(-(z + 1)) + 1) - 1;
}

std::int64_t unzigzag(std::uint64_t n) {
    if (n % 2 == 0) return static_cast<std::int64_t>(n / 2);
    return -static_cast<std::int64_t>((n - 1) / 2) - 1;
}

Codeword encode_u(std::int64_t z) { return encode_un(zigzag(z)); }

int length_u(std::int64_t z) { return length_un(zigzag(z)); }

void write_u(BitWriter& w, std::int64_t z) { write_un(w, zigzag(z)); }

std::int64_t decode_u(BitReader& r) {
    BigInt n = read_un_big(r);
    if (n > zigzag(std::numeric_limits<std::int64_t>::min())) {
        throw CapacityError("value exceeds 64 bits");
    }
    return unzigzag(n.convert_to<std::uint64_t>());
}

namespace {
BigInt zigzag_big(const BigInt& z) {
    BigInt n;
    if (z >= 0) n = 2 * z;
    else n = 2 * -z - 1;
    return n;
}
}  // namespace

void write_u_big(BitWriter& w, const BigInt& z) { write_un_big(w, zigzag_big(z)); }

BigInt read_u_big(BitReader& r) {
    BigInt n = read_un_big(r);
    if (n % 2 == 0) return n / 2;
    return -((n - 1) / 2) - 1;
}

int length_u_big(const BigInt& z) { return length_un_big(zigzag_big(z)); }

}  // namespace clr

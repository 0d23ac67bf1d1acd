#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "clr/bitio.hpp"

namespace clr {

using BigInt = boost::multiprecision::cpp_int;

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Codeword {
    std::string bits;  // '0'/'1', MSB first
    std::size_t length() const { return bits.size(); }
};

// F scheme: canonical prefix code whose length schedule follows the Fibonacci
// numbers.  Position 0 gets the single-bit word "0"; block k (k >= 1) holds
// F_k words of length k + 2.
Codeword encode_f(std::uint64_t pos);
int length_f(std::uint64_t pos);

// E scheme: Elias delta, defined for n >= 1.
Codeword encode_e(std::uint64_t n);
int length_e(std::uint64_t n);
void write_e_big(BitWriter& w, const BigInt& n);
BigInt read_e_big(BitReader& r);
int length_e_big(const BigInt& n);

// U_n: F below the switch point, escape word + E at and above it.  One F
// position is reserved for the escape, so values shift by one around it.
std::uint64_t f_switch_point();
Codeword encode_un(std::uint64_t n);
int length_un(std::uint64_t n);
void write_un(BitWriter& w, std::uint64_t n);
void write_un_big(BitWriter& w, const BigInt& n);
std::uint64_t read_un(BitReader& r);
BigInt read_un_big(BitReader& r);
int length_un_big(const BigInt& n);

// U: signed integers through the interleaving 0, -1, 1, -2, 2, ...
std::uint64_t zigzag(std::int64_t z);
std::int64_t unzigzag(std::uint64_t n);
Codeword encode_u(std::int64_t z);
int length_u(std::int64_t z);
void write_u(BitWriter& w, std::int64_t z);
std::int64_t decode_u(BitReader& r);
// Nonnegative big variant (used for lattice ranks).
void write_u_big(BitWriter& w, const BigInt& z);
BigInt read_u_big(BitReader& r);
int length_u_big(const BigInt& z);

}  // namespace clr

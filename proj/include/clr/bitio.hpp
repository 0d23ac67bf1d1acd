#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace clr {

// MSB-first append-only bit buffer.
class BitWriter {
public:
    void push_bit(int b) {
        if (nbits_ % 8 == 0) bytes_.push_back(0);
        if (b) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (nbits_ % 8));
        ++nbits_;
    }

    void push_bits(std::uint64_t value, int width) {
        for (int i = width - 1; i >= 0; --i) push_bit(static_cast<int>((value >> i) & 1u));
    }

    void push_string(const std::string& bits) {
        for (char c : bits) push_bit(c == '1');
    }

    std::size_t bit_count() const { return nbits_; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t nbits_ = 0;
};

class BitReader {
public:
    BitReader(const std::uint8_t* data, std::size_t nbits) : data_(data), nbits_(nbits) {}
    explicit BitReader(const std::vector<std::uint8_t>& bytes, std::size_t nbits)
        : data_(bytes.data()), nbits_(nbits) {}

    int read_bit() {
        if (pos_ >= nbits_) throw std::out_of_range("bit stream exhausted");
        int b = (data_[pos_ / 8] >> (7 - pos_ % 8)) & 1;
        ++pos_;
        return b;
    }

    std::uint64_t read_bits(int width) {
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) v = (v << 1) | static_cast<std::uint64_t>(read_bit());
        return v;
    }

    std::size_t consumed() const { return pos_; }
    std::size_t remaining() const { return nbits_ - pos_; }

private:
    const std::uint8_t* data_;
    std::size_t nbits_;
    std::size_t pos_ = 0;
};

}  // namespace clr

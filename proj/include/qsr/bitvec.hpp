#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "qsr/errors.hpp"

namespace qsr {

// Fixed-length bit vector used for error patterns and syndromes.
// The packed key is little-endian (bit i lives in byte i/8, position i%8),
// fixed width ceil(n/8) bytes, so it is injective and order-stable across
// platforms and usable as a hash-map key.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int size() const { return n_; }

    bool get(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }

    void set(int i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v)
            w_[i >> 6] |= m;
        else
            w_[i >> 6] &= ~m;
    }

    void flip(int i) { w_[i >> 6] ^= uint64_t{1} << (i & 63); }

    void clear() {
        for (auto& w : w_) w = 0;
    }

    void xor_with(const BitVec& o) {
        for (size_t j = 0; j < w_.size(); ++j) w_[j] ^= o.w_[j];
    }

    int popcount() const {
        int c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return c;
    }

    // Parity of |this AND other| (mod-2 overlap).
    bool parity_and(const BitVec& o) const {
        uint64_t acc = 0;
        for (size_t j = 0; j < w_.size(); ++j) acc ^= w_[j] & o.w_[j];
        return std::popcount(acc) & 1;
    }

    bool any() const {
        for (uint64_t w : w_)
            if (w) return true;
        return false;
    }

    bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }

    std::string packed_key() const {
        std::string s((n_ + 7) / 8, '\0');
        for (size_t b = 0; b < s.size(); ++b)
            s[b] = static_cast<char>((w_[b >> 3] >> ((b & 7) * 8)) & 0xffu);
        return s;
    }

    static BitVec from_packed(const std::string& key, int n) {
        if (static_cast<int>(key.size()) != (n + 7) / 8)
            throw DomainError("packed key width does not match bit count");
        BitVec v(n);
        for (size_t b = 0; b < key.size(); ++b)
            v.w_[b >> 3] |= uint64_t(static_cast<uint8_t>(key[b])) << ((b & 7) * 8);
        int spare = n & 7;
        if (spare) {
            // Reject keys with junk above the declared width.
            if (static_cast<uint8_t>(key.back()) >> spare)
                throw DomainError("packed key has bits beyond declared width");
        }
        return v;
    }

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string bytes = packed_key();
        std::string out;
        out.reserve(bytes.size() * 2);
        for (char c : bytes) {
            uint8_t b = static_cast<uint8_t>(c);
            out.push_back(digits[b >> 4]);
            out.push_back(digits[b & 0xf]);
        }
        return out;
    }

    static BitVec from_hex(const std::string& hex, int n) {
        if (static_cast<int>(hex.size()) != 2 * ((n + 7) / 8))
            throw ParseError("hex syndrome has wrong width for " + std::to_string(n) + " bits");
        std::string bytes(hex.size() / 2, '\0');
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            throw ParseError(std::string("invalid hex character '") + c + "'");
        };
        for (size_t b = 0; b < bytes.size(); ++b)
            bytes[b] = static_cast<char>((nibble(hex[2 * b]) << 4) | nibble(hex[2 * b + 1]));
        return from_packed(bytes, n);
    }

  private:
    int n_ = 0;
    std::vector<uint64_t> w_;
};

using ErrorPattern = BitVec;
using Syndrome = BitVec;

}  // namespace qsr

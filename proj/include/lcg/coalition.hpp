#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcg {

// Coalitions are packed into one machine word, so at most 64 agents.
inline constexpr int kMaxAgents = 64;

// A set of agent indices 0..n-1 encoded as a bitmask.
class Coalition {
  public:
    constexpr Coalition() = default;

    static constexpr Coalition from_mask(std::uint64_t mask) {
        Coalition c;
        c.mask_ = mask;
        return c;
    }

    static Coalition single(int i) {
        check_index(i);
        return from_mask(std::uint64_t{1} << i);
    }

    // The grand coalition over n agents.
    static Coalition full(int n) {
        if (n < 0 || n > kMaxAgents)
            throw std::invalid_argument("Coalition::full: agent count out of range");
        if (n == 0) return {};
        return from_mask(~std::uint64_t{0} >> (kMaxAgents - n));
    }

    constexpr std::uint64_t mask() const { return mask_; }
    constexpr bool empty() const { return mask_ == 0; }
    int size() const { return std::popcount(mask_); }

    bool contains(int i) const {
        check_index(i);
        return (mask_ >> i) & 1u;
    }

    Coalition with(int i) const {
        check_index(i);
        return from_mask(mask_ | (std::uint64_t{1} << i));
    }

    Coalition without(int i) const {
        check_index(i);
        return from_mask(mask_ & ~(std::uint64_t{1} << i));
    }

    bool subset_of(Coalition other) const { return (mask_ & ~other.mask_) == 0; }

    friend Coalition operator|(Coalition a, Coalition b) { return from_mask(a.mask_ | b.mask_); }
    friend Coalition operator&(Coalition a, Coalition b) { return from_mask(a.mask_ & b.mask_); }
    // Set difference.
    friend Coalition operator-(Coalition a, Coalition b) { return from_mask(a.mask_ & ~b.mask_); }
    friend bool operator==(Coalition a, Coalition b) { return a.mask_ == b.mask_; }
    friend bool operator!=(Coalition a, Coalition b) { return a.mask_ != b.mask_; }

    // Member indices in ascending order.
    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint64_t m = mask_; m != 0; m &= m - 1)
            out.push_back(std::countr_zero(m));
        return out;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i : members()) {
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        return s + "}";
    }

  private:
    static void check_index(int i) {
        if (i < 0 || i >= kMaxAgents)
            throw std::out_of_range("Coalition: agent index out of range");
    }

    std::uint64_t mask_ = 0;
};

} // namespace lcg

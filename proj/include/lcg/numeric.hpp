#pragma once

#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lcg {

// Exact arithmetic throughout: permutation counts reach 64! and Shapley
// values are rationals with denominator dividing n!.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Factorials 0!..limit! precomputed once per computation.
class FactorialTable {
  public:
    explicit FactorialTable(int limit) : fact_(static_cast<std::size_t>(check(limit)) + 1) {
        fact_[0] = 1;
        for (int k = 1; k <= limit; ++k) fact_[static_cast<std::size_t>(k)] = fact_[static_cast<std::size_t>(k - 1)] * k;
    }

    int limit() const { return static_cast<int>(fact_.size()) - 1; }

    const BigInt& factorial(int k) const {
        if (k < 0 || k > limit()) throw std::out_of_range("FactorialTable: argument out of range");
        return fact_[static_cast<std::size_t>(k)];
    }

    BigInt binomial(int n, int k) const {
        if (n < 0 || n > limit()) throw std::out_of_range("FactorialTable: binomial n out of range");
        if (k < 0 || k > n) return 0;
        return factorial(n) / (factorial(k) * factorial(n - k));
    }

  private:
    static int check(int limit) {
        if (limit < 0) throw std::invalid_argument("FactorialTable: negative limit");
        return limit;
    }

    std::vector<BigInt> fact_;
};

} // namespace lcg

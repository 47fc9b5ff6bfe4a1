#pragma once

#include <stdexcept>
#include <string>

namespace lcg {

// A size guard was exceeded (e.g. brute force requested above its cap).
struct guard_error : std::invalid_argument {
    explicit guard_error(const std::string& what) : std::invalid_argument(what) {}
};

// No feasible assignment exists for the given requests and box supply.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lcg

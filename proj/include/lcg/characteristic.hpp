#pragma once

#include <cstdint>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

#include "lcg/coalition.hpp"

namespace lcg {

// Coalition -> exact integer cost. Implementations must be pure: repeated
// evaluation of the same coalition returns the same value, and evaluate({})
// must be 0.
class CharacteristicFunction {
  public:
    virtual ~CharacteristicFunction() = default;
    virtual int agent_count() const = 0;
    virtual std::int64_t evaluate(Coalition c) const = 0;
};

// Memoizing front for a characteristic function. Every Shapley engine works
// through one of these; the distinct-evaluation count it keeps is the
// hardware-independent cost metric reported in benchmarks.
//
// Concurrent evaluation is allowed: lookups take a shared lock, the inner
// evaluation runs unlocked (so two threads may race on the same fresh
// coalition and both compute it; purity makes the results agree), and the
// first insert wins.
class MemoizedGame final : public CharacteristicFunction {
  public:
    explicit MemoizedGame(const CharacteristicFunction& inner) : inner_(&inner) {}

    int agent_count() const override { return inner_->agent_count(); }

    std::int64_t evaluate(Coalition c) const override {
        {
            std::shared_lock lock(mutex_);
            auto it = cache_.find(c.mask());
            if (it != cache_.end()) return it->second;
        }
        const std::int64_t value = inner_->evaluate(c);
        std::unique_lock lock(mutex_);
        auto [it, inserted] = cache_.emplace(c.mask(), value);
        if (!inserted && it->second != value)
            throw std::logic_error("MemoizedGame: impure characteristic function");
        return it->second;
    }

    // Number of distinct coalitions evaluated so far.
    std::size_t distinct_evaluations() const {
        std::shared_lock lock(mutex_);
        return cache_.size();
    }

    void clear() {
        std::unique_lock lock(mutex_);
        cache_.clear();
    }

  private:
    const CharacteristicFunction* inner_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<std::uint64_t, std::int64_t> cache_;
};

} // namespace lcg

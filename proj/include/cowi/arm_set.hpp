#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace cowi {

// Fixed-universe set of arm indices [0, n) backed by 64-bit words.
class ArmSet {
public:
    ArmSet() = default;
    explicit ArmSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}
    ArmSet(std::size_t universe, std::initializer_list<int> arms) : ArmSet(universe) {
        for (int a : arms) insert(a);
    }

    std::size_t universe() const { return universe_; }

    bool contains(int arm) const {
        const auto a = static_cast<std::size_t>(arm);
        return (words_[a / 64] >> (a % 64)) & 1u;
    }

    void insert(int arm) {
        const auto a = static_cast<std::size_t>(arm);
        words_[a / 64] |= std::uint64_t{1} << (a % 64);
    }

    void erase(int arm) {
        const auto a = static_cast<std::size_t>(arm);
        words_[a / 64] &= ~(std::uint64_t{1} << (a % 64));
    }

    std::size_t size() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    ArmSet& operator|=(const ArmSet& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
        return *this;
    }
    ArmSet& operator&=(const ArmSet& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
        return *this;
    }
    // set difference
    ArmSet& operator-=(const ArmSet& o) {
        for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
        return *this;
    }

    friend ArmSet operator|(ArmSet a, const ArmSet& b) { return a |= b; }
    friend ArmSet operator&(ArmSet a, const ArmSet& b) { return a &= b; }
    friend ArmSet operator-(ArmSet a, const ArmSet& b) { return a -= b; }
    friend bool operator==(const ArmSet&, const ArmSet&) = default;

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (std::size_t a = 0; a < universe_; ++a)
            if (contains(static_cast<int>(a))) out.push_back(static_cast<int>(a));
        return out;
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            auto w = words_[k];
            while (w) {
                const int bit = std::countr_zero(w);
                f(static_cast<int>(k * 64 + static_cast<std::size_t>(bit)));
                w &= w - 1;
            }
        }
    }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace cowi

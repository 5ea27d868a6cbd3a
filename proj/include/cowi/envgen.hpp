#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cowi/instance.hpp"
#include "cowi/rng.hpp"

namespace cowi {

// Feedback source for a fixed instance. Every unordered pair owns an
// independent counter-based substream keyed by (seed, i, j), so the outcomes
// seen for a pair do not depend on how queries to other pairs interleave.
// Not thread-safe; one oracle serves one run.
class SeededOracle {
public:
    SeededOracle(PreferenceInstance inst, std::uint64_t seed)
        : inst_(std::move(inst)), seed_(seed), keys_(inst_.num_pairs()), counters_(inst_.num_pairs(), 0) {
        const std::size_t n = inst_.n();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) keys_[pair_index(n, i, j)] = rng::derive_key(seed, {i, j});
    }

    Outcome sample(int i, int j) {
        if (i == j) throw std::invalid_argument("an arm cannot duel itself");
        const auto a = std::size_t(std::min(i, j));
        const auto b = std::size_t(std::max(i, j));
        const std::size_t p = pair_index(inst_.n(), a, b);
        const double u = rng::to_unit(rng::draw_bits(keys_[p], counters_[p]++));
        const PreferenceTriple& t = inst_.upper_triples()[p];
        Outcome o = u < t.p_succ ? Outcome::win : (u < t.p_succ + t.p_cong ? Outcome::indifferent : Outcome::loss);
        return i < j ? o : reversed(o);
    }

    std::uint64_t draws(int i, int j) const {
        return counters_[pair_index(inst_.n(), std::size_t(std::min(i, j)), std::size_t(std::max(i, j)))];
    }
    std::uint64_t total_draws() const { return std::accumulate(counters_.begin(), counters_.end(), std::uint64_t{0}); }

    const PreferenceInstance& instance() const { return inst_; }
    std::uint64_t seed() const { return seed_; }

private:
    PreferenceInstance inst_;
    std::uint64_t seed_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> counters_;
};

// ---------------------------------------------------------------------------
// Instance classes
// ---------------------------------------------------------------------------

// P1: |p_succ − 1/2| >= 0.1.  P2: 0.05 <= |p_succ − 1/2| <= 0.3.  *CW: plus a Condorcet winner.
// All without indifference mass.
enum class InstanceClass { p1, p2, p1cw, p2cw };

inline std::string to_string(InstanceClass c) {
    switch (c) {
    case InstanceClass::p1: return "p1";
    case InstanceClass::p2: return "p2";
    case InstanceClass::p1cw: return "p1cw";
    default: return "p2cw";
    }
}

inline std::optional<InstanceClass> parse_instance_class(const std::string& s) {
    if (s == "p1") return InstanceClass::p1;
    if (s == "p2") return InstanceClass::p2;
    if (s == "p1cw") return InstanceClass::p1cw;
    if (s == "p2cw") return InstanceClass::p2cw;
    return std::nullopt;
}

class RejectionBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t cw_rejection_budget = 1'000'000;

// Arm that beats every other arm by strict preference probability > 1/2, if any.
inline std::optional<int> condorcet_winner(const PreferenceInstance& inst) {
    for (std::size_t r = 0; r < inst.n(); ++r) {
        bool all = true;
        for (std::size_t j = 0; j < inst.n() && all; ++j)
            if (j != r && !(inst(r, j).p_succ > 0.5)) all = false;
        if (all) return int(r);
    }
    return std::nullopt;
}

inline bool class_member(InstanceClass c, const PreferenceInstance& inst) {
    const bool hard = c == InstanceClass::p2 || c == InstanceClass::p2cw;
    for (const auto& t : inst.upper_triples()) {
        if (t.p_cong != 0.0) return false;
        const double off = std::abs(t.p_succ - 0.5);
        if (!hard && off < 0.1) return false;
        if (hard && (off < 0.05 || off > 0.3)) return false;
    }
    if (c == InstanceClass::p1cw || c == InstanceClass::p2cw) return condorcet_winner(inst).has_value();
    return true;
}

namespace detail {

inline PreferenceInstance draw_no_indifference(bool hard, std::size_t n, std::uint64_t key) {
    rng::Stream s(key);
    std::vector<PreferenceTriple> t(pair_count(n));
    for (auto& x : t) {
        double p;
        if (!hard) {
            // uniform on [0, 0.4] ∪ [0.6, 1]
            const double u = s.uniform(0.0, 0.8);
            p = u < 0.4 ? u : u + 0.2;
        } else {
            const double off = s.uniform(0.05, 0.3);
            p = (s() >> 63) ? 0.5 + off : 0.5 - off;
        }
        x = {p, 0.0, 1.0 - p};
    }
    return PreferenceInstance(n, std::move(t));
}

} // namespace detail

// Independent per-pair uniform draws over the class's feasible set; the CW
// classes reject whole instances until a Condorcet winner exists.
inline PreferenceInstance gen_class(InstanceClass c, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("need at least two arms");
    const bool hard = c == InstanceClass::p2 || c == InstanceClass::p2cw;
    const bool cw = c == InstanceClass::p1cw || c == InstanceClass::p2cw;
    if (!cw) return detail::draw_no_indifference(hard, n, rng::derive_key(seed, {0x636C617373ULL, 0}));
    for (std::uint64_t attempt = 0; attempt < cw_rejection_budget; ++attempt) {
        auto inst = detail::draw_no_indifference(hard, n, rng::derive_key(seed, {0x636C617373ULL, attempt + 1}));
        if (condorcet_winner(inst)) return inst;
    }
    throw RejectionBudgetExceeded("no instance with a Condorcet winner after " +
                                  std::to_string(cw_rejection_budget) + " attempts");
}

struct TransitiveParams {
    double gap_min = 0.1;
    double gap_max = 0.3;
    double indiff_fraction = 0.0; // probability that the next arm in the ranking ties with the previous one
};

// Random total preorder over the arms; pairs in different tie blocks get the
// better-ranked arm's win as mode, pairs inside a block get indifference as
// mode, with mode-minus-runner-up gap drawn uniformly from [gap_min, gap_max].
inline PreferenceInstance gen_transitive(std::size_t n, const TransitiveParams& p, std::uint64_t seed,
                                         std::vector<int>* block_of = nullptr) {
    if (n < 2) throw std::invalid_argument("need at least two arms");
    if (!(p.gap_min > 0.0 && p.gap_min <= p.gap_max && p.gap_max < 2.0 / 3.0))
        throw std::invalid_argument("gap range must satisfy 0 < gap_min <= gap_max < 2/3");
    if (!(p.indiff_fraction >= 0.0 && p.indiff_fraction <= 1.0))
        throw std::invalid_argument("indifference fraction must lie in [0,1]");

    rng::Stream s(rng::derive_key(seed, {0x7472616E73ULL}));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = n - 1; k > 0; --k) std::swap(order[k], order[s.below(k + 1)]);

    std::vector<int> block(n, 0);
    int current = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (r > 0 && !(s.uniform() < p.indiff_fraction)) ++current;
        block[std::size_t(order[r])] = current;
    }

    std::vector<PreferenceTriple> t(pair_count(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double g = s.uniform(p.gap_min, p.gap_max);
            // top t in [(1+2g)/3, (1+g)/2) keeps runner-up t−g above the remainder 1−2t+g > 0
            const double top = s.uniform((1.0 + 2.0 * g) / 3.0, (1.0 + g) / 2.0);
            const double second = top - g;
            const double third = 1.0 - top - second;
            Outcome mode;
            if (block[i] == block[j])
                mode = Outcome::indifferent;
            else
                mode = block[i] < block[j] ? Outcome::win : Outcome::loss;
            double v[3];
            const int m = outcome_index(mode) - 1;
            const int a = (m + 1) % 3, b = (m + 2) % 3;
            const bool flip = (s() >> 63) != 0;
            v[m] = top;
            v[flip ? b : a] = second;
            v[flip ? a : b] = third;
            t[pair_index(n, i, j)] = {v[0], v[1], v[2]};
        }
    if (block_of) *block_of = block;
    return PreferenceInstance(n, std::move(t));
}

} // namespace cowi

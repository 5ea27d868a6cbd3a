#pragma once
/*
Sequential mode identification for a ternary distribution.

The test monitors the two most frequent outcomes S_(1) >= S_(2) and stops as
soon as the Beta(S_(1)+1, S_(2)+1) density at 1/2 drops to delta/2, i.e. once
1/2 leaves the prior-posterior-ratio confidence sequence of the pairwise
Bernoulli test between the top two categories (delta is split over K-1 = 2
such tests). All density evaluations stay in the log domain.
*/

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "cowi/instance.hpp"
#include "cowi/special.hpp"

namespace cowi {

class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(std::uint64_t samples)
        : std::runtime_error("sample budget of " + std::to_string(samples) +
                             " exhausted before the mode test stopped (likely a mode tie)"),
          samples_(samples) {}
    std::uint64_t samples() const { return samples_; }

private:
    std::uint64_t samples_;
};

class DegenerateGap : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct TernaryCounts {
    std::uint64_t s1 = 0; // first arm preferred
    std::uint64_t s2 = 0; // indifferent
    std::uint64_t s3 = 0; // second arm preferred

    std::uint64_t total() const { return s1 + s2 + s3; }

    std::uint64_t operator[](Outcome o) const {
        switch (o) {
        case Outcome::win: return s1;
        case Outcome::indifferent: return s2;
        default: return s3;
        }
    }

    TernaryCounts plus(Outcome o) const {
        TernaryCounts c = *this;
        switch (o) {
        case Outcome::win: ++c.s1; break;
        case Outcome::indifferent: ++c.s2; break;
        case Outcome::loss: ++c.s3; break;
        }
        return c;
    }

    // Descending order statistics S_(1) >= S_(2) >= S_(3).
    std::array<std::uint64_t, 3> sorted() const {
        std::array<std::uint64_t, 3> s{s1, s2, s3};
        std::sort(s.begin(), s.end(), std::greater<>{});
        return s;
    }

    // Lowest-index category among the most frequent ones.
    Outcome argmax() const {
        if (s1 >= s2 && s1 >= s3) return Outcome::win;
        if (s2 >= s3) return Outcome::indifferent;
        return Outcome::loss;
    }

    friend bool operator==(const TernaryCounts&, const TernaryCounts&) = default;
};

struct PprDecision {
    bool stopped = false;
    Outcome mode = Outcome::win; // meaningful only when stopped
    std::uint64_t samples_used = 0;
};

// ln f_Beta(1/2; a, b) = ln Γ(a+b) − ln Γ(a) − ln Γ(b) − (a+b−2) ln 2, for integers a, b >= 1.
inline double log_beta_pdf_at_half(std::uint64_t a, std::uint64_t b) {
    if (a < 1 || b < 1) throw std::domain_error("Beta parameters must be >= 1");
    return special::log_gamma_int(a + b) - special::log_gamma_int(a) - special::log_gamma_int(b) -
           static_cast<double>(a + b - 2) * special::ln2;
}

// ln f_Beta(theta; a, b) for integer a, b >= 1 and theta in [0,1]; −∞ outside the support.
inline double log_beta_pdf(double theta, std::uint64_t a, std::uint64_t b) {
    if (a < 1 || b < 1) throw std::domain_error("Beta parameters must be >= 1");
    if (!(theta >= 0.0 && theta <= 1.0)) return -INFINITY;
    double v = special::log_gamma_int(a + b) - special::log_gamma_int(a) - special::log_gamma_int(b);
    if (a > 1) {
        if (theta == 0.0) return -INFINITY;
        v += static_cast<double>(a - 1) * std::log(theta);
    }
    if (b > 1) {
        if (theta == 1.0) return -INFINITY;
        v += static_cast<double>(b - 1) * std::log1p(-theta);
    }
    return v;
}

inline void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("error probability must lie in (0,1)");
}

// True iff the stop rule fires for the given counts at error probability delta.
inline bool ppr_should_stop(const TernaryCounts& c, double delta) {
    const auto s = c.sorted();
    return log_beta_pdf_at_half(s[0] + 1, s[1] + 1) <= std::log(delta / 2.0);
}

// One observation of the 1-vs-1 test: returns the updated counts and the decision.
inline std::pair<TernaryCounts, PprDecision> ppr_step(const TernaryCounts& counts, Outcome outcome, double delta) {
    check_delta(delta);
    const TernaryCounts next = counts.plus(outcome);
    PprDecision d;
    d.samples_used = next.total();
    if (ppr_should_stop(next, delta)) {
        assert(next.sorted()[0] > next.sorted()[1]);
        d.stopped = true;
        d.mode = next.argmax();
    }
    return {next, d};
}

template <class F>
concept OutcomeSource = requires(F f) {
    { f() } -> std::convertible_to<Outcome>;
};

// Draws from `source` until the mode is identified. Throws BudgetExceeded when a
// budget is given and spent without stopping.
template <OutcomeSource Source>
PprDecision ppr_1v1_run(Source&& source, double delta, std::optional<std::uint64_t> budget = std::nullopt) {
    check_delta(delta);
    const double log_threshold = std::log(delta / 2.0);
    TernaryCounts c;
    for (;;) {
        if (budget && c.total() >= *budget) throw BudgetExceeded(c.total());
        c = c.plus(source());
        const auto s = c.sorted();
        // f_Beta(1/2; a, a) >= 1 for all a, so equal leaders can never stop.
        if (s[0] == s[1]) continue;
        if (log_beta_pdf_at_half(s[0] + 1, s[1] + 1) <= log_threshold) {
            return PprDecision{true, c.argmax(), c.total()};
        }
    }
}

// Membership of theta in the PPR confidence set of a Bernoulli parameter after
// s_success successes and s_fail failures (uniform prior).
inline bool bernoulli_confidence_set_contains(std::uint64_t s_success, std::uint64_t s_fail, double theta,
                                              double delta) {
    check_delta(delta);
    return log_beta_pdf(theta, s_success + 1, s_fail + 1) > std::log(delta);
}

inline constexpr double t0_c1 = 194.07;
inline constexpr double t0_c2 = 79.86;

// Expected-sample upper bound of the 1-vs-1 test on a triple with a unique mode.
inline double t0_bound(const PreferenceTriple& triple, double delta) {
    check_delta(delta);
    const auto p = triple.sorted();
    const double gap = p[0] - p[1];
    if (gap <= prob_tolerance) throw DegenerateGap("t0 bound undefined: the two largest probabilities tie");
    return t0_c1 * p[0] * std::log(std::sqrt(2.0 * t0_c2 / delta) * p[0] / gap) / (gap * gap);
}

} // namespace cowi

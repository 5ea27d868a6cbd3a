#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cowi/arm_set.hpp"
#include "cowi/instance.hpp"
#include "cowi/ppr.hpp"

namespace cowi {

// Per-arm bookkeeping of the identification loop. Scores are in half-points.
//   compared[i]    D(i): arms whose relation to i is settled, including i itself
//   defeated[i]    W(i), indifferent[i] I(i), superior[i] L(i)
// Invariants: W, I, L are disjoint subsets of D(i) \ {i};
//             cp_hat(i) = 2|W(i)| + |I(i)|;  cp_bar(i) = 2(n − |D(i)|) + cp_hat(i).
struct SolverState {
    std::size_t n = 0;
    std::vector<ArmSet> compared;
    std::vector<ArmSet> defeated;
    std::vector<ArmSet> indifferent;
    std::vector<ArmSet> superior;
    std::vector<int> cp_hat;
    std::vector<int> cp_bar;

    explicit SolverState(std::size_t arms)
        : n(arms), compared(arms, ArmSet(arms)), defeated(arms, ArmSet(arms)), indifferent(arms, ArmSet(arms)),
          superior(arms, ArmSet(arms)), cp_hat(arms, 0), cp_bar(arms, 2 * (int(arms) - 1)) {
        if (arms < 2) throw std::invalid_argument("need at least two arms");
        for (std::size_t i = 0; i < arms; ++i) compared[i].insert(int(i));
    }

    void refresh_potential(int i) {
        const auto a = std::size_t(i);
        cp_bar[a] = 2 * (int(n) - int(compared[a].size())) + cp_hat[a];
    }
};

namespace detail {

inline void require_uncompared(const SolverState& s, int i, int j) {
    if (i == j || i < 0 || j < 0 || std::size_t(i) >= s.n || std::size_t(j) >= s.n)
        throw std::invalid_argument("score update needs two distinct valid arms");
    if (s.compared[std::size_t(i)].contains(j))
        throw std::invalid_argument("score update on an already compared pair (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
}

// Adds the not-yet-compared members of each candidate set to arm a's relation
// sets and credits the new wins and indifferences to cp_hat(a).
inline void absorb(SolverState& s, int a, const ArmSet& wins, const ArmSet& ties, const ArmSet& losses) {
    const auto k = std::size_t(a);
    const ArmSet w = wins - s.compared[k];
    const ArmSet t = ties - s.compared[k];
    const ArmSet l = (losses - s.compared[k]) - w - t;
    s.defeated[k] |= w;
    s.indifferent[k] |= t;
    s.superior[k] |= l;
    s.compared[k] |= w;
    s.compared[k] |= t;
    s.compared[k] |= l;
    s.cp_hat[k] += 2 * int(w.size()) + int(t.size());
}

} // namespace detail

// Plain update after a decided duel between i and j.
inline void scores_update(SolverState& s, int i, int j, Outcome k) {
    detail::require_uncompared(s, i, j);
    const ArmSet none(s.n);
    const ArmSet only_i(s.n, {i});
    const ArmSet only_j(s.n, {j});
    switch (k) {
    case Outcome::win:
        detail::absorb(s, i, only_j, none, none);
        detail::absorb(s, j, none, none, only_i);
        break;
    case Outcome::indifferent:
        detail::absorb(s, i, none, only_j, none);
        detail::absorb(s, j, none, only_i, none);
        break;
    case Outcome::loss:
        detail::absorb(s, i, none, none, only_j);
        detail::absorb(s, j, only_i, none, none);
        break;
    }
    s.refresh_potential(i);
    s.refresh_potential(j);
}

namespace detail {

// Closes every arm's known relations under the four transitivity axioms
// (strict, IP, PI, indifference) until nothing changes. Arms already in D(a)
// keep their settled relation.
inline void close_transitively(SolverState& s) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t a = 0; a < s.n; ++a) {
            ArmSet wins(s.n), ties(s.n), losses(s.n);
            s.defeated[a].for_each([&](int b) {
                wins |= s.defeated[std::size_t(b)];
                wins |= s.indifferent[std::size_t(b)];
            });
            s.indifferent[a].for_each([&](int b) {
                wins |= s.defeated[std::size_t(b)];
                ties |= s.indifferent[std::size_t(b)];
                losses |= s.superior[std::size_t(b)];
            });
            s.superior[a].for_each([&](int b) {
                losses |= s.superior[std::size_t(b)];
                losses |= s.indifferent[std::size_t(b)];
            });
            const std::size_t before = s.compared[a].size();
            absorb(s, int(a), wins, ties, losses);
            if (s.compared[a].size() != before) {
                s.refresh_potential(int(a));
                changed = true;
            }
        }
    }
}

} // namespace detail

// Update that also credits the relations implied by transitivity: the two-arm
// step below, then closure over all arms so third arms learn the deduced
// relations too. Arms already in D(a) keep their settled relation and are not
// counted twice.
inline void transitive_scores_update(SolverState& s, int i, int j, Outcome k) {
    detail::require_uncompared(s, i, j);
    const auto a = std::size_t(i);
    const auto b = std::size_t(j);
    const ArmSet none(s.n);
    // snapshots: all right-hand sides refer to the sets before this update
    const ArmSet Wi = s.defeated[a], Ii = s.indifferent[a], Li = s.superior[a];
    const ArmSet Wj = s.defeated[b], Ij = s.indifferent[b], Lj = s.superior[b];
    const ArmSet only_i(s.n, {i});
    const ArmSet only_j(s.n, {j});
    switch (k) {
    case Outcome::win:
        detail::absorb(s, i, Wj | Ij | only_j, none, none);
        detail::absorb(s, j, none, none, Li | Ii | only_i);
        break;
    case Outcome::indifferent:
        detail::absorb(s, i, Wj, Ij | only_j, Lj);
        detail::absorb(s, j, Wi, Ii | only_i, Li);
        break;
    case Outcome::loss:
        detail::absorb(s, j, Wi | Ii | only_i, none, none);
        detail::absorb(s, i, none, none, Lj | Ij | only_j);
        break;
    }
    s.refresh_potential(i);
    s.refresh_potential(j);
    detail::close_transitively(s);
}

// Lowest-index arm i with cp_hat(i) >= cp_bar(j) for every j != i.
inline std::optional<int> termination_check(const SolverState& s) {
    for (std::size_t i = 0; i < s.n; ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < s.n && ok; ++j)
            if (j != i && s.cp_hat[i] < s.cp_bar[j]) ok = false;
        if (ok) return int(i);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Run traces
// ---------------------------------------------------------------------------

struct DuelRecord {
    std::uint64_t round = 0; // 1-based
    int first = 0;           // i_t
    int second = 0;          // j_t
    std::uint64_t samples = 0;
    Outcome outcome = Outcome::win;

    friend bool operator==(const DuelRecord&, const DuelRecord&) = default;
};

struct RunTrace {
    std::vector<DuelRecord> duels;
    int returned_arm = -1;
    std::uint64_t total_samples = 0;
    std::uint64_t rounds = 0;

    friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

class RunBudgetExceeded : public BudgetExceeded {
public:
    RunBudgetExceeded(std::uint64_t samples, RunTrace partial)
        : BudgetExceeded(samples), partial_(std::move(partial)) {}
    const RunTrace& partial_trace() const { return partial_; }

private:
    RunTrace partial_;
};

class RoundOverflow : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Anything that can answer a duel between two arms.
template <class O>
concept PairOracle = requires(O o, int i, int j) {
    { o.sample(i, j) } -> std::convertible_to<Outcome>;
};

enum class Algorithm { pocowista, tra_pocowista };

inline std::string to_string(Algorithm a) { return a == Algorithm::pocowista ? "pocowista" : "tra"; }

struct SolverOptions {
    std::optional<std::uint64_t> budget;  // per duel (pair) sample cap
    bool declared_transitive = false;     // enforce the n-round bound of the transitive variant
};

namespace detail {

inline std::uint64_t choose2(std::size_t n) { return std::uint64_t(n) * (n - 1) / 2; }

inline int argmax_lowest(const std::vector<int>& v, const ArmSet* exclude) {
    int best = -1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (exclude && exclude->contains(int(i))) continue;
        if (best < 0 || v[i] > v[std::size_t(best)]) best = int(i);
    }
    return best;
}

template <PairOracle Oracle, class Update>
RunTrace identify(std::size_t n, Oracle& oracle, double pair_delta, const SolverOptions& opt, Update update,
                  std::uint64_t round_cap) {
    SolverState state(n);
    RunTrace trace;
    while (!termination_check(state)) {
        const int i = argmax_lowest(state.cp_bar, nullptr);
        const int j = argmax_lowest(state.cp_hat, &state.compared[std::size_t(i)]);
        if (j < 0) throw std::logic_error("no uncompared opponent for the selected arm");
        if (round_cap > 0 && trace.rounds >= round_cap)
            throw RoundOverflow("transitive run exceeded " + std::to_string(round_cap) + " rounds");
        PprDecision d;
        try {
            d = ppr_1v1_run([&] { return static_cast<Outcome>(oracle.sample(i, j)); }, pair_delta, opt.budget);
        } catch (const BudgetExceeded& e) {
            trace.total_samples += e.samples();
            throw RunBudgetExceeded(trace.total_samples, trace);
        }
        ++trace.rounds;
        trace.total_samples += d.samples_used;
        trace.duels.push_back({trace.rounds, i, j, d.samples_used, d.mode});
        update(state, i, j, d.mode);
    }
    // The certified arm maximizes cp_hat; among tied maximizers only it is
    // guaranteed to be a winner, so it takes the tie.
    trace.returned_arm = *termination_check(state);
    return trace;
}

} // namespace detail

// POtential COpeland WInner STays: per-pair error delta / C(n,2).
template <PairOracle Oracle>
RunTrace pocowista(std::size_t n, Oracle& oracle, double delta, const SolverOptions& opt = {}) {
    check_delta(delta);
    return detail::identify(n, oracle, delta / double(detail::choose2(n)), opt, scores_update, 0);
}

// Transitive variant: per-pair error delta / n and deduction-based updates.
template <PairOracle Oracle>
RunTrace tra_pocowista(std::size_t n, Oracle& oracle, double delta, const SolverOptions& opt = {}) {
    check_delta(delta);
    // a round cap of 0 disables the check
    const std::uint64_t cap = opt.declared_transitive ? n : 0;
    return detail::identify(n, oracle, delta / double(n), opt, transitive_scores_update, cap);
}

template <PairOracle Oracle>
RunTrace solve(Algorithm alg, std::size_t n, Oracle& oracle, double delta, const SolverOptions& opt = {}) {
    return alg == Algorithm::pocowista ? pocowista(n, oracle, delta, opt) : tra_pocowista(n, oracle, delta, opt);
}

} // namespace cowi

#pragma once
/*
Sample-complexity calculators.

Lower bounds hold for every algorithm that returns a Copeland winner with
probability >= 1 − delta on instances with a unique winner i*:

  ln(1/(2.4 delta)) · Σ_{j≠i*} factor_j · min_{z} 1/div(j,z)

where z ranges over the arms beating j (and those indifferent to j), div is a
KL divergence to the instance with the (j,z) mode flipped, and factor_j is a
combinatorial ratio that depends on |L(j)|, |I(j)| and the Copeland deficit
d_j. Upper bounds sum the per-duel expected-sample bound of the mode test.
*/

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cowi/instance.hpp"
#include "cowi/ppr.hpp"
#include "cowi/solvers.hpp"
#include "cowi/special.hpp"

namespace cowi {

class NotApplicable : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class PreconditionViolated : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParameterOutOfRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// KL toolbox
// ---------------------------------------------------------------------------

namespace detail {

// p·ln(p/q) with 0·ln(0/q) = 0 and +∞ when q = 0 < p.
inline double kl_term(double p, double q) {
    if (p <= 0.0) return 0.0;
    if (q <= 0.0) return infinity;
    return p * std::log(p / q);
}

} // namespace detail

inline double kl_bernoulli(double p, double q) {
    return detail::kl_term(p, q) + detail::kl_term(1.0 - p, 1.0 - q);
}

inline double kl_categorical3(const PreferenceTriple& p, const PreferenceTriple& q) {
    return detail::kl_term(p.p_succ, q.p_succ) + detail::kl_term(p.p_cong, q.p_cong) +
           detail::kl_term(p.p_prec, q.p_prec);
}

// Divergence to the closest mode flip of the ordered pair (j,k): the larger of the
// KLs against the triple with (succ,cong) swapped and with (succ,prec) swapped.
inline double d_jk(const PreferenceInstance& inst, int j, int k) {
    const PreferenceTriple t = inst(std::size_t(j), std::size_t(k));
    if (!(t.p_succ > 0.0 && t.p_cong > 0.0 && t.p_prec > 0.0))
        throw PreconditionViolated("divergence needs strictly positive probabilities");
    const PreferenceTriple swap_cong{t.p_cong, t.p_succ, t.p_prec};
    const PreferenceTriple swap_prec{t.p_prec, t.p_cong, t.p_succ};
    return std::max(kl_categorical3(t, swap_cong), kl_categorical3(t, swap_prec));
}

// κ_{j,z} = kl(P_succ^(j,z), 1 − P_succ^(j,z)) for instances without indifferences.
inline double kappa(const PreferenceInstance& inst, int j, int z) {
    const double p = inst(std::size_t(j), std::size_t(z)).p_succ;
    return kl_bernoulli(p, 1.0 - p);
}

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

struct ArmTerm {
    int arm = -1;
    double factor = 0.0;          // combinatorial multiplier
    double min_inverse_div = 0.0; // min over the relevant opponents of 1/divergence
    double contribution = 0.0;    // log term · factor · min_inverse_div
    bool skipped = false;         // every divergence was zero
};

struct BoundComponent {
    bool applicable = false;
    std::string method; // which bound produced the value
    std::string reason; // why not applicable, or why trivial
    double value = 0.0;
    std::vector<ArmTerm> per_arm;
    std::vector<std::string> flags;
};

struct BoundReport {
    double delta = 0.0;
    BoundComponent lower_simple;
    BoundComponent lower_detailed;
    BoundComponent lower_natural; // informational only
    std::optional<double> upper_pocowista;
    std::string upper_reason;
    std::optional<double> upper_tra; // filled from a trace when one is supplied
};

inline double log_confidence_term(double delta) {
    check_delta(delta);
    return std::log(1.0 / (2.4 * delta));
}

// ---------------------------------------------------------------------------
// Combinatorial factors
// ---------------------------------------------------------------------------

struct PsiSets {
    std::vector<std::pair<int, int>> psi;        // (i, l) pairs
    std::vector<std::pair<int, int>> psi_prime;  // winner indifferent to j
    std::vector<std::pair<int, int>> psi_dprime; // winner beats j
};

// |I(j)| = n_indiff, |L(j)| = n_sup, deficit d_j = half_gap / 2.
inline PsiSets psi_sets(int n_indiff, int n_sup, int half_gap) {
    PsiSets s;
    for (int i = 0; i <= n_indiff; ++i)
        for (int l = 0; l <= n_sup; ++l) {
            const int w = i + 2 * l;
            if (w >= half_gap + 1) s.psi.emplace_back(i, l);
            if (i <= n_indiff - 1 && w >= half_gap - 1) s.psi_prime.emplace_back(i, l);
            if (l <= n_sup - 1 && w >= half_gap - 3) s.psi_dprime.emplace_back(i, l);
        }
    return s;
}

inline PsiSets psi_sets(const PreferenceInstance& inst, int j) {
    const auto prof = copeland_profile(inst);
    if (!prof.unique_winner()) throw NotApplicable("Ψ sets need a unique Copeland winner");
    const auto rel = relation_sets(inst);
    const auto a = std::size_t(j);
    return psi_sets(int(rel.indifferent[a].size()), int(rel.superior[a].size()), prof.half_gaps[a]);
}

namespace detail {

// C(n1,k1)·C(n2,k2), or an inactive term.
struct BinomProduct {
    int n1, k1, n2, k2;
    bool active = true;
};

// num / Σ den over products of binomial coefficients. Exact integers while all
// upper arguments are <= 64, log-domain otherwise.
inline double binomial_ratio(const BinomProduct& num, std::initializer_list<BinomProduct> den) {
    auto valid = [](const BinomProduct& b) {
        return b.n1 >= 0 && b.n2 >= 0 && b.k1 >= 0 && b.k2 >= 0 && b.k1 <= b.n1 && b.k2 <= b.n2;
    };
    int largest = std::max(num.n1, num.n2);
    for (const auto& d : den) largest = std::max({largest, d.n1, d.n2});
    if (!valid(num)) throw std::logic_error("binomial ratio numerator out of range");

    if (largest <= 64) {
        auto prod = [](const BinomProduct& b) -> special::uint128 {
            return (special::uint128)special::binomial_exact(unsigned(b.n1), unsigned(b.k1)) *
                   special::binomial_exact(unsigned(b.n2), unsigned(b.k2));
        };
        special::uint128 total = 0;
        for (const auto& d : den)
            if (d.active && valid(d)) total += prod(d);
        if (total == 0) throw std::logic_error("binomial ratio with empty denominator");
        return double(prod(num)) / double(total);
    }
    auto lprod = [](const BinomProduct& b) {
        return special::log_binomial(std::uint64_t(b.n1), std::uint64_t(b.k1)) +
               special::log_binomial(std::uint64_t(b.n2), std::uint64_t(b.k2));
    };
    const double ln_num = lprod(num);
    double s = 0.0;
    for (const auto& d : den)
        if (d.active && valid(d)) s += std::exp(lprod(d) - ln_num);
    if (s == 0.0) throw std::logic_error("binomial ratio with empty denominator");
    return 1.0 / s;
}

} // namespace detail

struct CFactors {
    double c = 0.0;        // max over Ψ, 0 if empty
    double c_prime = 0.0;  // max over Ψ'
    double c_dprime = 0.0; // max over Ψ''
};

inline CFactors c_factors(int n_indiff, int n_sup, const PsiSets& psi) {
    using detail::BinomProduct;
    const int I = n_indiff, L = n_sup;
    CFactors f;
    for (auto [i, l] : psi.psi)
        f.c = std::max(f.c, detail::binomial_ratio({I, i, L, l},
                                                   {{I - 1, i - 1, L, l, i >= 1}, {I, i, L - 1, l - 1, l >= 1}}));
    for (auto [i, l] : psi.psi_prime)
        f.c_prime = std::max(f.c_prime, detail::binomial_ratio({I - 1, i, L, l}, {{I - 1, i, L, l},
                                                                                 {I - 2, i - 1, L, l, i >= 1},
                                                                                 {I - 1, i, L - 1, l - 1, l >= 1}}));
    for (auto [i, l] : psi.psi_dprime)
        f.c_dprime = std::max(f.c_dprime, detail::binomial_ratio({I, i, L - 1, l}, {{I, i, L - 1, l},
                                                                                   {I - 1, i - 1, L - 1, l, i >= 1},
                                                                                   {I, i, L - 2, l - 1, l >= 1}}));
    return f;
}

// ---------------------------------------------------------------------------
// Lower bounds
// ---------------------------------------------------------------------------

namespace detail {

inline int unique_winner_or_throw(const CopelandProfile& prof) {
    if (!prof.unique_winner()) throw NotApplicable("the Copeland winner is not unique");
    return prof.copeland_set.front();
}

// min over z in `opponents` of 1/div(j,z), ignoring zero divergences.
template <class Div>
std::pair<double, bool> min_inverse(const ArmSet& opponents, int j, Div div, std::vector<std::string>& flags) {
    double best = infinity;
    bool any = false;
    opponents.for_each([&](int z) {
        const double d = div(j, z);
        if (d <= 0.0) {
            flags.push_back("pair (" + std::to_string(j + 1) + "," + std::to_string(z + 1) +
                            ") has zero divergence; excluded from the minimum");
            return;
        }
        any = true;
        best = std::min(best, 1.0 / d);
    });
    return {any ? best : 0.0, any};
}

template <class FactorFn, class Div>
BoundComponent assemble(const PreferenceInstance& inst, double delta, std::string method, bool with_indiff_set,
                        FactorFn factor_of, Div div) {
    const auto prof = copeland_profile(inst);
    const int winner = unique_winner_or_throw(prof);
    const auto rel = relation_sets(inst);
    const double lead = log_confidence_term(delta);
    BoundComponent out;
    out.applicable = true;
    out.method = std::move(method);
    for (std::size_t j = 0; j < inst.n(); ++j) {
        if (int(j) == winner) continue;
        ArmTerm term;
        term.arm = int(j);
        term.factor = factor_of(int(j), winner, prof, rel);
        const ArmSet opponents = with_indiff_set ? (rel.superior[j] | rel.indifferent[j]) : rel.superior[j];
        auto [inv, any] = min_inverse(opponents, int(j), div, out.flags);
        term.min_inverse_div = inv;
        term.skipped = !any;
        term.contribution = any ? lead * term.factor * inv : 0.0;
        out.value += term.contribution;
        out.per_arm.push_back(term);
    }
    return out;
}

} // namespace detail

// Bound for instances without indifference mass (κ-based, integer deficits).
inline BoundComponent lower_bound_no_indiff(const PreferenceInstance& inst, double delta) {
    if (!has_no_indifferences(inst)) throw NotApplicable("instance has indifference mass");
    for (const auto& t : inst.upper_triples())
        if (!(t.p_succ > 0.0 && t.p_succ < 1.0)) throw NotApplicable("strict preference probabilities must lie in (0,1)");
    auto factor = [](int j, int winner, const CopelandProfile& prof, const RelationSets& rel) {
        const auto a = std::size_t(j);
        const int L = int(rel.superior[a].size());
        const int d = prof.half_gaps[a] / 2;
        const double first = L >= d + 1 ? double(L) / double(d + 1) : 0.0;
        double second = 0.0;
        if (rel.superior[a].contains(winner)) second = d == 1 ? 1.0 : double(L - 1) / double(L + d - 2);
        return std::max(first, second);
    };
    return detail::assemble(inst, delta, "no-indifference bound (kappa)", false, factor,
                            [&](int j, int z) { return kappa(inst, j, z); });
}

// Detailed bound with Ψ, Ψ', Ψ'' for strictly positive instances.
inline BoundComponent lower_bound_detailed(const PreferenceInstance& inst, double delta) {
    if (!strictly_positive(inst)) throw NotApplicable("all outcome probabilities must be strictly positive");
    auto factor = [](int j, int winner, const CopelandProfile& prof, const RelationSets& rel) {
        const auto a = std::size_t(j);
        const int I = int(rel.indifferent[a].size()), L = int(rel.superior[a].size());
        const auto f = c_factors(I, L, psi_sets(I, L, prof.half_gaps[a]));
        double v = f.c;
        if (rel.indifferent[a].contains(winner)) v = std::max(v, f.c_prime);
        if (rel.superior[a].contains(winner)) v = std::max(v, f.c_dprime);
        return v;
    };
    return detail::assemble(inst, delta, "detailed bound (Psi, Psi', Psi'')", true, factor,
                            [&](int j, int z) { return d_jk(inst, j, z); });
}

// Simplified indifference-aware bound that keeps only the Ψ term; can be 0.
inline BoundComponent lower_bound_simple_indiff(const PreferenceInstance& inst, double delta) {
    if (!strictly_positive(inst)) throw NotApplicable("all outcome probabilities must be strictly positive");
    auto factor = [](int j, int, const CopelandProfile& prof, const RelationSets& rel) {
        const auto a = std::size_t(j);
        const int I = int(rel.indifferent[a].size()), L = int(rel.superior[a].size());
        return c_factors(I, L, psi_sets(I, L, prof.half_gaps[a])).c;
    };
    auto out = detail::assemble(inst, delta, "simplified bound (Psi only)", true, factor,
                                [&](int j, int z) { return d_jk(inst, j, z); });
    if (out.value == 0.0) out.reason = "trivial: Psi(j) is empty for every non-winner j";
    return out;
}

// Sum of all inverse divergences; reported for orientation, not a proven bound.
inline BoundComponent lower_bound_natural(const PreferenceInstance& inst, double delta) {
    const bool positive = strictly_positive(inst);
    if (!positive && !has_no_indifferences(inst))
        throw NotApplicable("needs strictly positive triples or no indifference mass");
    const auto prof = copeland_profile(inst);
    const int winner = detail::unique_winner_or_throw(prof);
    const auto rel = relation_sets(inst);
    BoundComponent out;
    out.applicable = true;
    out.method = "sum of inverse divergences (informational)";
    const double lead = log_confidence_term(delta);
    for (std::size_t j = 0; j < inst.n(); ++j) {
        if (int(j) == winner) continue;
        ArmTerm term;
        term.arm = int(j);
        term.factor = 1.0;
        double s = 0.0;
        (rel.superior[j] | rel.indifferent[j]).for_each([&](int z) {
            const double d = positive ? d_jk(inst, int(j), z) : kappa(inst, int(j), z);
            if (d > 0.0) s += 1.0 / d;
        });
        term.min_inverse_div = s;
        term.contribution = lead * s;
        out.value += term.contribution;
        out.per_arm.push_back(term);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Upper bounds
// ---------------------------------------------------------------------------

inline double upper_bound_pocowista(const PreferenceInstance& inst, double delta) {
    check_delta(delta);
    const double pair_delta = delta / double(pair_count(inst.n()));
    std::vector<std::string> bad;
    double total = 0.0;
    for (std::size_t i = 0; i < inst.n(); ++i)
        for (std::size_t j = i + 1; j < inst.n(); ++j) {
            const auto t = inst(i, j);
            if (t.gap() <= prob_tolerance) {
                bad.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
                continue;
            }
            total += t0_bound(t, pair_delta);
        }
    if (!bad.empty()) {
        std::string msg = "pairs without a unique mode:";
        for (const auto& b : bad) msg += " " + b;
        throw DegenerateGap(msg);
    }
    return total;
}

// Σ over the executed duels of t0 at per-pair error delta/n.
inline double upper_bound_tra_from_trace(const PreferenceInstance& inst, const RunTrace& trace, double delta) {
    check_delta(delta);
    if (trace.rounds > inst.n() && is_transitive(inst))
        throw RoundOverflow("trace of a transitive instance uses more than n duels");
    const double pair_delta = delta / double(inst.n());
    double total = 0.0;
    for (const auto& d : trace.duels) total += t0_bound(inst(std::size_t(d.first), std::size_t(d.second)), pair_delta);
    return total;
}

// ---------------------------------------------------------------------------
// Worst-case instances
// ---------------------------------------------------------------------------

// Arm 0 wins against everyone outside a set of n−1−⌈n/2+f⌉ arms; the remaining
// arms play a parity-based round robin. Entries are 1/2 ± gap (no indifference)
// or 1/3+2·gap / 1/3−gap with indifference fixed at 1/3−gap.
inline PreferenceInstance worst_case_instance(std::size_t n, double gap, int f, bool with_indifferences) {
    if (!(gap > 0.0 && gap < 1.0 / 6.0)) throw ParameterOutOfRange("gap must lie in (0, 1/6)");
    if (n < 4) throw ParameterOutOfRange("need at least four arms");
    if (f < 1 || 2 * f > int(n) - 2) throw ParameterOutOfRange("f must satisfy 1 <= f <= n/2 - 1");
    const int target = int((n + 1) / 2) + f; // ⌈n/2 + f⌉
    const int losses = int(n) - 1 - target;
    if (losses < 0) throw ParameterOutOfRange("n - 1 - ceil(n/2 + f) must be non-negative");

    const PreferenceTriple strong = with_indifferences
                                        ? PreferenceTriple{1.0 / 3.0 + 2.0 * gap, 1.0 / 3.0 - gap, 1.0 / 3.0 - gap}
                                        : PreferenceTriple{0.5 + gap, 0.0, 0.5 - gap};
    const PreferenceTriple weak = strong.reversed();

    auto inst = PreferenceInstance::uniform(n, strong);
    for (std::size_t y = 1; y < n; ++y) {
        const bool in_l = y >= n - std::size_t(losses);
        inst.set(0, y, in_l ? weak : strong);
    }
    for (std::size_t x = 1; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) inst.set(x, y, (x + y) % 2 == 0 ? strong : weak);

    const auto prof = copeland_profile(inst);
    if (!prof.unique_winner() || prof.copeland_set.front() != 0 || prof.half_scores[0] != 2 * target)
        throw ParameterOutOfRange("parameters too small for the construction to single out arm 1");
    return inst;
}

// ---------------------------------------------------------------------------
// Full report
// ---------------------------------------------------------------------------

inline BoundReport bound_report(const PreferenceInstance& inst, double delta) {
    check_delta(delta);
    BoundReport r;
    r.delta = delta;
    auto attempt = [](BoundComponent& slot, auto&& fn) {
        try {
            slot = fn();
        } catch (const NotApplicable& e) {
            slot = BoundComponent{};
            slot.reason = e.what();
        }
    };
    const bool no_indiff = has_no_indifferences(inst);
    const bool positive = strictly_positive(inst);
    attempt(r.lower_simple, [&] {
        if (no_indiff) return lower_bound_no_indiff(inst, delta);
        if (positive) return lower_bound_simple_indiff(inst, delta);
        throw NotApplicable("needs strictly positive triples or no indifference mass");
    });
    attempt(r.lower_detailed, [&] {
        if (positive) return lower_bound_detailed(inst, delta);
        if (no_indiff) return lower_bound_no_indiff(inst, delta);
        throw NotApplicable("needs strictly positive triples or no indifference mass");
    });
    attempt(r.lower_natural, [&] { return lower_bound_natural(inst, delta); });
    try {
        r.upper_pocowista = upper_bound_pocowista(inst, delta);
    } catch (const DegenerateGap& e) {
        r.upper_reason = e.what();
    }
    return r;
}

} // namespace cowi

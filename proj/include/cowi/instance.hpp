#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cowi/arm_set.hpp"

// Arms are 0-based everywhere in the library. The JSON/CSV formats and the CLI
// use 1-based arm labels; conversion happens only at those boundaries.

namespace cowi {

// Two probabilities closer than this are treated as equal (mode ties, simplex checks).
inline constexpr double prob_tolerance = 1e-12;

// Ternary duel feedback from the first arm's point of view.
enum class Outcome : std::uint8_t { win = 1, indifferent = 2, loss = 3 };

inline Outcome reversed(Outcome o) {
    switch (o) {
    case Outcome::win: return Outcome::loss;
    case Outcome::loss: return Outcome::win;
    default: return o;
    }
}

inline int outcome_index(Outcome o) { return static_cast<int>(o); }

inline Outcome outcome_from_index(int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("outcome index must be 1, 2 or 3");
    return static_cast<Outcome>(k);
}

// Distribution of the feedback when arm i is dueled against arm j.
struct PreferenceTriple {
    double p_succ = 0.0; // i preferred
    double p_cong = 0.0; // indifferent
    double p_prec = 0.0; // j preferred

    double operator[](Outcome o) const {
        switch (o) {
        case Outcome::win: return p_succ;
        case Outcome::indifferent: return p_cong;
        default: return p_prec;
        }
    }

    PreferenceTriple reversed() const { return {p_prec, p_cong, p_succ}; }

    // Descending order statistics P_(1) >= P_(2) >= P_(3).
    std::array<double, 3> sorted() const {
        std::array<double, 3> s{p_succ, p_cong, p_prec};
        std::sort(s.begin(), s.end(), [](double a, double b) { return a > b; });
        return s;
    }

    double gap() const {
        const auto s = sorted();
        return s[0] - s[1];
    }

    // Strict mode; empty when the two largest probabilities tie within prob_tolerance.
    std::optional<Outcome> mode() const {
        const std::array<double, 3> p{p_succ, p_cong, p_prec};
        const auto top = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
        for (std::size_t k = 0; k < 3; ++k)
            if (k != top && p[top] - p[k] <= prob_tolerance) return std::nullopt;
        return static_cast<Outcome>(top + 1);
    }

    friend bool operator==(const PreferenceTriple&, const PreferenceTriple&) = default;
};

// Index of unordered pair {i, j}, i < j, in lexicographic order.
inline std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }

// The family of per-pair triples. Only the i<j direction is stored; the (j,i)
// triple is its reversal, so P_succ^(j,i) = P_prec^(i,j) holds by construction.
class PreferenceInstance {
public:
    PreferenceInstance() = default;

    PreferenceInstance(std::size_t n, std::vector<PreferenceTriple> upper)
        : n_(n), upper_(std::move(upper)) {
        if (n < 2) throw std::invalid_argument("instance needs at least two arms");
        if (upper_.size() != pair_count(n))
            throw std::invalid_argument("instance needs exactly n(n-1)/2 pair triples");
    }

    // Every pair set to the same triple (i<j orientation).
    static PreferenceInstance uniform(std::size_t n, PreferenceTriple t) {
        return PreferenceInstance(n, std::vector<PreferenceTriple>(pair_count(n), t));
    }

    std::size_t n() const { return n_; }
    std::size_t num_pairs() const { return upper_.size(); }

    // Ordered-pair access.
    PreferenceTriple operator()(std::size_t i, std::size_t j) const {
        if (i == j || i >= n_ || j >= n_) throw std::out_of_range("invalid arm pair");
        return i < j ? upper_[pair_index(n_, i, j)] : upper_[pair_index(n_, j, i)].reversed();
    }

    void set(std::size_t i, std::size_t j, PreferenceTriple t) {
        if (i == j || i >= n_ || j >= n_) throw std::out_of_range("invalid arm pair");
        if (i < j)
            upper_[pair_index(n_, i, j)] = t;
        else
            upper_[pair_index(n_, j, i)] = t.reversed();
    }

    const std::vector<PreferenceTriple>& upper_triples() const { return upper_; }

    PreferenceInstance reversed() const {
        auto r = upper_;
        for (auto& t : r) t = t.reversed();
        return PreferenceInstance(n_, std::move(r));
    }

    friend bool operator==(const PreferenceInstance&, const PreferenceInstance&) = default;

private:
    std::size_t n_ = 0;
    std::vector<PreferenceTriple> upper_;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationIssue {
    enum class Severity { warning, fatal };
    Severity severity;
    std::string message;
    int i = -1; // 0-based arms of the offending pair, if any
    int j = -1;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;

    bool ok() const {
        return std::none_of(issues.begin(), issues.end(),
                            [](const auto& x) { return x.severity == ValidationIssue::Severity::fatal; });
    }
    std::size_t count(ValidationIssue::Severity s) const {
        return static_cast<std::size_t>(
            std::count_if(issues.begin(), issues.end(), [s](const auto& x) { return x.severity == s; }));
    }
    std::size_t fatal_count() const { return count(ValidationIssue::Severity::fatal); }
    std::size_t warning_count() const { return count(ValidationIssue::Severity::warning); }
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(ValidationReport report)
        : std::runtime_error(summarize(report)), report_(std::move(report)) {}
    const ValidationReport& report() const { return report_; }

private:
    static std::string summarize(const ValidationReport& r) {
        std::ostringstream os;
        os << "invalid instance:";
        for (const auto& x : r.issues)
            if (x.severity == ValidationIssue::Severity::fatal) os << ' ' << x.message << ';';
        return os.str();
    }
    ValidationReport report_;
};

// A pair entry as it appears in a file: 0-based arms, any orientation accepted
// by the checker so that malformed input can be reported rather than rejected early.
struct PairEntry {
    int i = 0;
    int j = 0;
    PreferenceTriple triple;
};

namespace detail {

inline std::string pair_label(int i, int j) {
    return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

inline void check_triple(const PreferenceTriple& t, int i, int j, ValidationReport& rep) {
    using S = ValidationIssue::Severity;
    const std::string where = pair_label(i, j);
    for (double p : {t.p_succ, t.p_cong, t.p_prec}) {
        if (!std::isfinite(p) || p < -prob_tolerance || p > 1.0 + prob_tolerance) {
            rep.issues.push_back({S::fatal, "probability out of [0,1] at pair " + where, i, j});
            return;
        }
    }
    const double sum = t.p_succ + t.p_cong + t.p_prec;
    if (std::abs(sum - 1.0) > prob_tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "probabilities at pair " << where << " sum to " << sum;
        rep.issues.push_back({S::fatal, os.str(), i, j});
        return;
    }
    if (!t.mode())
        rep.issues.push_back({S::warning, "mode tie at pair " + where + " (identification not guaranteed)", i, j});
}

} // namespace detail

// Structural and probabilistic checks over raw file entries.
inline ValidationReport validate(std::size_t n, const std::vector<PairEntry>& entries) {
    using S = ValidationIssue::Severity;
    ValidationReport rep;
    if (n < 2) {
        rep.issues.push_back({S::fatal, "instance needs at least two arms"});
        return rep;
    }
    std::vector<int> seen(pair_count(n), 0);
    for (const auto& e : entries) {
        if (e.i < 0 || e.j < 0 || static_cast<std::size_t>(e.i) >= n || static_cast<std::size_t>(e.j) >= n) {
            rep.issues.push_back({S::fatal, "arm index out of range at pair " + detail::pair_label(e.i, e.j), e.i, e.j});
            continue;
        }
        if (e.i >= e.j) {
            rep.issues.push_back({S::fatal, "pair " + detail::pair_label(e.i, e.j) + " must satisfy i < j", e.i, e.j});
            continue;
        }
        auto& s = seen[pair_index(n, static_cast<std::size_t>(e.i), static_cast<std::size_t>(e.j))];
        if (++s > 1) rep.issues.push_back({S::fatal, "duplicate pair " + detail::pair_label(e.i, e.j), e.i, e.j});
        detail::check_triple(e.triple, e.i, e.j, rep);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (seen[pair_index(n, i, j)] == 0)
                rep.issues.push_back({S::fatal, "missing pair " + detail::pair_label(int(i), int(j)), int(i), int(j)});
    return rep;
}

inline ValidationReport validate(const PreferenceInstance& inst) {
    ValidationReport rep;
    for (std::size_t i = 0; i < inst.n(); ++i)
        for (std::size_t j = i + 1; j < inst.n(); ++j) detail::check_triple(inst(i, j), int(i), int(j), rep);
    return rep;
}

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

// Copeland scores in half-points: +2 per dominated opponent, +1 per opponent
// whose strict mode is indifference, 0 for tied modes.
struct CopelandProfile {
    std::vector<int> half_scores;
    std::vector<int> copeland_set;
    std::vector<int> half_gaps; // 2·d_j

    double score(int arm) const { return half_scores[static_cast<std::size_t>(arm)] / 2.0; }
    double gap(int arm) const { return half_gaps[static_cast<std::size_t>(arm)] / 2.0; }
    int max_half_score() const { return *std::max_element(half_scores.begin(), half_scores.end()); }
    bool is_winner(int arm) const {
        return std::find(copeland_set.begin(), copeland_set.end(), arm) != copeland_set.end();
    }
    bool unique_winner() const { return copeland_set.size() == 1; }
};

inline CopelandProfile copeland_profile(const PreferenceInstance& inst) {
    const std::size_t n = inst.n();
    CopelandProfile prof;
    prof.half_scores.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto m = inst(i, j).mode();
            if (!m) continue;
            switch (*m) {
            case Outcome::win: prof.half_scores[i] += 2; break;
            case Outcome::loss: prof.half_scores[j] += 2; break;
            case Outcome::indifferent:
                prof.half_scores[i] += 1;
                prof.half_scores[j] += 1;
                break;
            }
        }
    const int best = prof.max_half_score();
    prof.half_gaps.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        prof.half_gaps[j] = best - prof.half_scores[j];
        if (prof.half_gaps[j] == 0) prof.copeland_set.push_back(static_cast<int>(j));
    }
    return prof;
}

// superior[j] = L(j): arms whose strict mode against j is a win.
// indifferent[j] = I(j): arms whose strict mode against j is indifference.
// dominated[j]: arms j beats by strict mode.
struct RelationSets {
    std::vector<ArmSet> superior;
    std::vector<ArmSet> indifferent;
    std::vector<ArmSet> dominated;
};

inline RelationSets relation_sets(const PreferenceInstance& inst) {
    const std::size_t n = inst.n();
    RelationSets r{std::vector<ArmSet>(n, ArmSet(n)), std::vector<ArmSet>(n, ArmSet(n)),
                   std::vector<ArmSet>(n, ArmSet(n))};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto m = inst(i, j).mode();
            if (!m) continue;
            const int a = int(i), b = int(j);
            switch (*m) {
            case Outcome::win:
                r.dominated[i].insert(b);
                r.superior[j].insert(a);
                break;
            case Outcome::loss:
                r.dominated[j].insert(a);
                r.superior[i].insert(b);
                break;
            case Outcome::indifferent:
                r.indifferent[i].insert(b);
                r.indifferent[j].insert(a);
                break;
            }
        }
    return r;
}

// True when no pair puts positive mass on indifference.
inline bool has_no_indifferences(const PreferenceInstance& inst) {
    return std::all_of(inst.upper_triples().begin(), inst.upper_triples().end(),
                       [](const PreferenceTriple& t) { return t.p_cong == 0.0; });
}

inline bool strictly_positive(const PreferenceInstance& inst) {
    return std::all_of(inst.upper_triples().begin(), inst.upper_triples().end(), [](const PreferenceTriple& t) {
        return t.p_succ > 0.0 && t.p_cong > 0.0 && t.p_prec > 0.0;
    });
}

// ---------------------------------------------------------------------------
// Transitivity
// ---------------------------------------------------------------------------

enum class TransitivityAxiom : int {
    strict = 1,      // i≻j, j≻k ⇒ i≻k
    ip = 2,          // i≅j, j≻k ⇒ i≻k
    pi = 3,          // i≻j, j≅k ⇒ i≻k
    indifference = 4 // i≅j, j≅k ⇒ i≅k
};

struct TransitivityViolation {
    TransitivityAxiom axiom;
    int i, j, k;
};

// First violated axiom over ordered distinct triples (i, j, k) in lexicographic
// order, or empty when the instance is transitive.
inline std::optional<TransitivityViolation> check_transitivity(const PreferenceInstance& inst) {
    const std::size_t n = inst.n();
    std::vector<std::optional<Outcome>> mode(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) mode[i * n + j] = inst(i, j).mode();
    auto m = [&](std::size_t a, std::size_t b) { return mode[a * n + b]; };
    constexpr auto W = Outcome::win;
    constexpr auto I = Outcome::indifferent;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto ij = m(i, j);
            if (!ij || *ij == Outcome::loss) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const auto jk = m(j, k);
                const auto ik = m(i, k);
                auto fail = [&](TransitivityAxiom ax) {
                    return TransitivityViolation{ax, int(i), int(j), int(k)};
                };
                if (*ij == W && jk == W && ik != W) return fail(TransitivityAxiom::strict);
                if (*ij == I && jk == W && ik != W) return fail(TransitivityAxiom::ip);
                if (*ij == W && jk == I && ik != W) return fail(TransitivityAxiom::pi);
                if (*ij == I && jk == I && ik != I) return fail(TransitivityAxiom::indifference);
            }
        }
    return std::nullopt;
}

inline bool is_transitive(const PreferenceInstance& inst) { return !check_transitivity(inst).has_value(); }

inline double min_gap(const PreferenceInstance& inst) {
    double g = 1.0;
    for (const auto& t : inst.upper_triples()) g = std::min(g, t.gap());
    return g;
}

} // namespace cowi

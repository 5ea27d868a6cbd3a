#pragma once
// Repeated seeded runs of a solver and their aggregation.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cowi/bounds.hpp"
#include "cowi/envgen.hpp"
#include "cowi/instance.hpp"
#include "cowi/solvers.hpp"

namespace cowi {

enum class SourceKind { p1, p2, p1cw, p2cw, transitive, worstcase, file };

inline std::string to_string(SourceKind k) {
    switch (k) {
    case SourceKind::p1: return "p1";
    case SourceKind::p2: return "p2";
    case SourceKind::p1cw: return "p1cw";
    case SourceKind::p2cw: return "p2cw";
    case SourceKind::transitive: return "transitive";
    case SourceKind::worstcase: return "worstcase";
    default: return "file";
    }
}

inline std::optional<SourceKind> parse_source_kind(const std::string& s) {
    for (auto k : {SourceKind::p1, SourceKind::p2, SourceKind::p1cw, SourceKind::p2cw, SourceKind::transitive,
                   SourceKind::worstcase, SourceKind::file})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

inline constexpr std::uint64_t default_pair_budget = 10'000'000;

struct WorstCaseParams {
    double gap = 0.1;
    int f = 1;
    bool with_indifferences = false;
};

struct ExperimentConfig {
    Algorithm algorithm = Algorithm::pocowista;
    SourceKind source = SourceKind::p1;
    std::optional<PreferenceInstance> instance; // file mode
    std::size_t n = 20;
    double delta = 0.1;
    std::uint64_t reps = 100;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> budget = default_pair_budget;
    unsigned threads = 0; // 0: hardware concurrency
    TransitiveParams transitive;
    WorstCaseParams worstcase;
    bool keep_traces = false;
};

struct RunRecord {
    std::uint64_t rep = 0;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    std::uint64_t rounds = 0;
    int returned_arm = -1; // 0-based, -1 when the budget ran out
    bool correct = false;
    bool budget_exceeded = false;
    std::optional<RunTrace> trace;
};

struct SummaryRow {
    std::uint64_t repetitions = 0;
    std::uint64_t completed = 0;
    std::uint64_t budget_exceeded = 0;
    double mean_samples = 0.0;
    double std_samples = 0.0; // unbiased, over completed runs
    double error_rate = 0.0;  // wrong returns / completed runs
    double mean_rounds = 0.0;
};

inline void check_config(const ExperimentConfig& c) {
    check_delta(c.delta);
    if (c.reps < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (c.source == SourceKind::file) {
        if (!c.instance) throw std::invalid_argument("file mode needs an instance");
    } else if (c.n < 2) {
        throw std::invalid_argument("need at least two arms");
    }
}

// Instance for repetition seed `s`.
inline PreferenceInstance make_instance(const ExperimentConfig& c, std::uint64_t s) {
    switch (c.source) {
    case SourceKind::p1: return gen_class(InstanceClass::p1, c.n, s);
    case SourceKind::p2: return gen_class(InstanceClass::p2, c.n, s);
    case SourceKind::p1cw: return gen_class(InstanceClass::p1cw, c.n, s);
    case SourceKind::p2cw: return gen_class(InstanceClass::p2cw, c.n, s);
    case SourceKind::transitive: return gen_transitive(c.n, c.transitive, s);
    case SourceKind::worstcase:
        return worst_case_instance(c.n, c.worstcase.gap, c.worstcase.f, c.worstcase.with_indifferences);
    default: return *c.instance;
    }
}

inline RunRecord run_once(const ExperimentConfig& c, std::uint64_t rep) {
    RunRecord r;
    r.rep = rep;
    r.seed = c.seed + rep;
    const PreferenceInstance inst = make_instance(c, r.seed);
    const CopelandProfile truth = copeland_profile(inst);
    SeededOracle oracle(inst, r.seed);
    SolverOptions opt;
    opt.budget = c.budget;
    opt.declared_transitive = c.algorithm == Algorithm::tra_pocowista && is_transitive(inst);
    try {
        RunTrace t = solve(c.algorithm, inst.n(), oracle, c.delta, opt);
        r.samples = t.total_samples;
        r.rounds = t.rounds;
        r.returned_arm = t.returned_arm;
        r.correct = truth.is_winner(t.returned_arm);
        if (c.keep_traces) r.trace = std::move(t);
    } catch (const RunBudgetExceeded& e) {
        r.budget_exceeded = true;
        r.samples = e.partial_trace().total_samples;
        r.rounds = e.partial_trace().rounds;
        if (c.keep_traces) r.trace = e.partial_trace();
    }
    return r;
}

// All repetitions, ordered by rep regardless of scheduling.
inline std::vector<RunRecord> run_experiment(const ExperimentConfig& c) {
    check_config(c);
    std::vector<RunRecord> out(c.reps);
    unsigned workers = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = unsigned(std::min<std::uint64_t>(workers, c.reps));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::uint64_t rep = next.fetch_add(1);
            if (rep >= c.reps) return;
            try {
                out[rep] = run_once(c, rep);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = c.reps;
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

inline SummaryRow summarize(const std::vector<RunRecord>& runs) {
    SummaryRow s;
    s.repetitions = runs.size();
    double sum = 0.0, rounds = 0.0;
    std::uint64_t wrong = 0;
    for (const auto& r : runs) {
        if (r.budget_exceeded) {
            ++s.budget_exceeded;
            continue;
        }
        ++s.completed;
        sum += double(r.samples);
        rounds += double(r.rounds);
        if (!r.correct) ++wrong;
    }
    if (s.completed == 0) {
        s.mean_samples = s.std_samples = s.error_rate = s.mean_rounds = std::nan("");
        return s;
    }
    const double k = double(s.completed);
    s.mean_samples = sum / k;
    s.mean_rounds = rounds / k;
    s.error_rate = double(wrong) / k;
    if (s.completed > 1) {
        double ss = 0.0;
        for (const auto& r : runs)
            if (!r.budget_exceeded) ss += (double(r.samples) - s.mean_samples) * (double(r.samples) - s.mean_samples);
        s.std_samples = std::sqrt(ss / (k - 1.0));
    }
    return s;
}

// Shortest representation that reads back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline const char* csv_header = "algorithm,class,n,delta,rep,seed,samples,rounds,returned_arm,correct,budget_exceeded";

inline void write_csv(std::ostream& os, const ExperimentConfig& c, const std::vector<RunRecord>& runs) {
    const std::size_t n = c.source == SourceKind::file ? c.instance->n() : c.n;
    os << csv_header << '\n';
    for (const auto& r : runs) {
        os << to_string(c.algorithm) << ',' << to_string(c.source) << ',' << n << ',' << format_double(c.delta) << ','
           << r.rep << ',' << r.seed << ',' << r.samples << ',' << r.rounds << ',';
        if (r.returned_arm >= 0) os << r.returned_arm + 1;
        os << ',' << (r.correct ? 1 : 0) << ',' << (r.budget_exceeded ? 1 : 0) << '\n';
    }
}

} // namespace cowi

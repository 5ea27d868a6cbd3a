// Command-line front end: run experiments, compute bounds, generate and check instances.
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cowi/cowi.hpp"

namespace {

using namespace cowi;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_runtime = 2;

struct Options {
    std::string algorithm = "pocowista";
    std::string source = "p1";
    std::string instance_path;
    std::size_t n = 20;
    double delta = 0.1;
    std::uint64_t reps = 100;
    std::uint64_t seed = 0;
    std::uint64_t budget = default_pair_budget;
    std::string out;
    std::string format;
    unsigned threads = 0;
    double indiff_fraction = 0.0;
    double gap_min = 0.1;
    double gap_max = 0.3;
    double gap = 0.1;
    int f = 1;
    bool with_indifferences = false;
    std::string trace_path;
    bool traces = false;
};

// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw FileError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
};

std::string arm_list(const std::vector<int>& arms) {
    std::string s = "{";
    for (std::size_t k = 0; k < arms.size(); ++k) s += (k ? "," : "") + std::to_string(arms[k] + 1);
    return s + "}";
}

void print_profile(std::ostream& os, const PreferenceInstance& inst) {
    const auto prof = copeland_profile(inst);
    os << "copeland scores:";
    for (std::size_t a = 0; a < inst.n(); ++a) os << ' ' << prof.score(int(a));
    os << "\ncopeland set: " << arm_list(prof.copeland_set) << '\n';
}

void print_issues(std::ostream& os, const ValidationReport& rep) {
    for (const auto& x : rep.issues)
        os << (x.severity == ValidationIssue::Severity::fatal ? "error: " : "warning: ") << x.message << '\n';
}

PreferenceInstance generate(const Options& o) {
    const auto kind = parse_source_kind(o.source);
    if (!kind || *kind == SourceKind::file) throw std::invalid_argument("unknown class '" + o.source + "'");
    ExperimentConfig c;
    c.source = *kind;
    c.n = o.n;
    c.transitive = {o.gap_min, o.gap_max, o.indiff_fraction};
    c.worstcase = {o.gap, o.f, o.with_indifferences};
    return make_instance(c, o.seed);
}

int cmd_run(const Options& o) {
    ExperimentConfig c;
    if (o.algorithm == "pocowista")
        c.algorithm = Algorithm::pocowista;
    else if (o.algorithm == "tra")
        c.algorithm = Algorithm::tra_pocowista;
    else
        throw std::invalid_argument("unknown algorithm '" + o.algorithm + "'");
    if (!o.instance_path.empty()) {
        c.source = SourceKind::file;
        ValidationReport rep;
        c.instance = load_instance(o.instance_path, &rep);
        print_issues(std::cerr, rep);
    } else {
        const auto kind = parse_source_kind(o.source);
        if (!kind || *kind == SourceKind::file) throw std::invalid_argument("unknown class '" + o.source + "'");
        c.source = *kind;
    }
    c.n = o.n;
    c.delta = o.delta;
    c.reps = o.reps;
    c.seed = o.seed;
    c.budget = o.budget == 0 ? std::nullopt : std::optional<std::uint64_t>(o.budget);
    c.threads = o.threads;
    c.transitive = {o.gap_min, o.gap_max, o.indiff_fraction};
    c.worstcase = {o.gap, o.f, o.with_indifferences};
    c.keep_traces = o.traces;

    const auto runs = run_experiment(c);
    const auto s = summarize(runs);
    const std::string format = o.format.empty() ? "csv" : o.format;

    Sink sink(o.out);
    if (format == "csv") {
        write_csv(sink.stream(), c, runs);
    } else if (format == "json") {
        json arr = json::array();
        for (const auto& r : runs) {
            json j = {{"rep", r.rep},
                      {"seed", r.seed},
                      {"samples", r.samples},
                      {"rounds", r.rounds},
                      {"returned_arm", r.returned_arm < 0 ? json(nullptr) : json(r.returned_arm + 1)},
                      {"correct", r.correct},
                      {"budget_exceeded", r.budget_exceeded}};
            if (r.trace) j["trace"] = trace_to_json(*r.trace);
            arr.push_back(j);
        }
        json doc = {{"algorithm", to_string(c.algorithm)},
                    {"class", to_string(c.source)},
                    {"n", c.source == SourceKind::file ? c.instance->n() : c.n},
                    {"delta", c.delta},
                    {"reps", c.reps},
                    {"seed", c.seed},
                    {"summary",
                     {{"mean_samples", s.mean_samples},
                      {"std_samples", s.std_samples},
                      {"error_rate", s.error_rate},
                      {"mean_rounds", s.mean_rounds},
                      {"completed", s.completed},
                      {"budget_exceeded", s.budget_exceeded}}},
                    {"runs", arr}};
        sink.stream() << doc.dump(2) << '\n';
    } else {
        throw std::invalid_argument("unknown format '" + format + "'");
    }

    std::ostream& info = sink.to_file() ? std::cout : std::cerr;
    info << std::setprecision(10) << "algorithm=" << to_string(c.algorithm) << " class=" << to_string(c.source)
         << " delta=" << c.delta << " reps=" << s.repetitions << " completed=" << s.completed
         << " budget_exceeded=" << s.budget_exceeded << "\nmean_samples=" << s.mean_samples
         << " std_samples=" << s.std_samples << " error_rate=" << s.error_rate << " mean_rounds=" << s.mean_rounds
         << '\n';
    return exit_ok;
}

void print_component(std::ostream& os, const std::string& name, const BoundComponent& c) {
    os << std::left << std::setw(16) << name;
    if (!c.applicable) {
        os << "not applicable (" << c.reason << ")\n";
        return;
    }
    os << c.value << "  [" << c.method << "]";
    if (!c.reason.empty()) os << "  " << c.reason;
    os << '\n';
    for (const auto& a : c.per_arm)
        os << "    arm " << a.arm + 1 << ": factor " << a.factor << ", min 1/div " << a.min_inverse_div
           << ", contribution " << a.contribution << (a.skipped ? " (skipped)" : "") << '\n';
    for (const auto& f : c.flags) os << "    note: " << f << '\n';
}

int cmd_bounds(const Options& o) {
    if (o.instance_path.empty()) throw std::invalid_argument("--instance is required");
    ValidationReport rep;
    const auto inst = load_instance(o.instance_path, &rep);
    print_issues(std::cerr, rep);
    auto report = bound_report(inst, o.delta);
    if (!o.trace_path.empty()) {
        std::ifstream in(o.trace_path);
        if (!in) throw FileError("cannot open " + o.trace_path);
        json j;
        in >> j;
        report.upper_tra = upper_bound_tra_from_trace(inst, trace_from_json(j), o.delta);
    }
    Sink sink(o.out);
    if (o.format == "json") {
        sink.stream() << bound_report_to_json(report).dump(2) << '\n';
        return exit_ok;
    }
    auto& os = sink.stream();
    os << std::setprecision(10) << "delta " << report.delta << '\n';
    print_component(os, "lower_simple", report.lower_simple);
    print_component(os, "lower_detailed", report.lower_detailed);
    print_component(os, "lower_natural", report.lower_natural);
    os << std::left << std::setw(16) << "upper_pocowista";
    if (report.upper_pocowista)
        os << *report.upper_pocowista << '\n';
    else
        os << "not applicable (" << report.upper_reason << ")\n";
    if (report.upper_tra) os << std::setw(16) << "upper_tra" << *report.upper_tra << '\n';
    return exit_ok;
}

int cmd_gen(const Options& o) {
    const auto inst = generate(o);
    if (o.out.empty())
        std::cout << instance_to_json(inst).dump(2) << '\n';
    else
        save_instance(inst, o.out);
    print_profile(o.out.empty() ? std::cerr : std::cout, inst);
    return exit_ok;
}

int cmd_validate(const Options& o) {
    if (o.instance_path.empty()) throw std::invalid_argument("an instance path is required");
    const auto file = read_instance_file(o.instance_path);
    const auto rep = validate_file(file);
    print_issues(std::cout, rep);
    if (!rep.ok()) {
        std::cout << "invalid: " << rep.fatal_count() << " error(s)\n";
        return exit_invalid;
    }
    const auto inst = to_instance(file);
    std::cout << std::setprecision(10) << "valid: n=" << inst.n() << ", " << rep.warning_count() << " warning(s)\n"
              << "min gap: " << min_gap(inst) << '\n';
    if (const auto v = check_transitivity(inst))
        std::cout << "transitivity: violated (axiom " << int(v->axiom) << " at arms " << v->i + 1 << "," << v->j + 1
                  << "," << v->k + 1 << ")\n";
    else
        std::cout << "transitivity: holds\n";
    print_profile(std::cout, inst);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Copeland winner identification with ternary duel feedback"};
    app.require_subcommand(1);
    Options o;

    auto* run = app.add_subcommand("run", "repeat a solver on generated or fixed instances");
    run->add_option("--algorithm", o.algorithm, "pocowista | tra")->capture_default_str();
    run->add_option("--class", o.source, "p1 | p2 | p1cw | p2cw | transitive | worstcase")->capture_default_str();
    run->add_option("--instance", o.instance_path, "fixed instance file (overrides --class)");
    run->add_option("--n", o.n, "number of arms")->capture_default_str();
    run->add_option("--delta", o.delta, "error probability")->capture_default_str();
    run->add_option("--reps", o.reps, "repetitions")->capture_default_str();
    run->add_option("--seed", o.seed, "base seed; repetition r uses seed+r")->capture_default_str();
    run->add_option("--budget", o.budget, "per-pair sample cap, 0 for none")->capture_default_str();
    run->add_option("--out", o.out, "per-run output file (default stdout)");
    run->add_option("--format", o.format, "csv | json");
    run->add_option("--threads", o.threads, "worker threads, 0 for all cores");
    run->add_flag("--traces", o.traces, "include full traces (json format)");

    auto* bounds = app.add_subcommand("bounds", "sample-complexity bounds of an instance");
    bounds->add_option("--instance", o.instance_path, "instance file")->required();
    bounds->add_option("--delta", o.delta, "error probability")->capture_default_str();
    bounds->add_option("--trace", o.trace_path, "trace JSON of a transitive-variant run");
    bounds->add_option("--format", o.format, "text | json");
    bounds->add_option("--out", o.out, "output file (default stdout)");

    auto* gen = app.add_subcommand("gen", "write a generated instance");
    gen->add_option("--class", o.source, "p1 | p2 | p1cw | p2cw | transitive | worstcase")->capture_default_str();
    gen->add_option("--n", o.n, "number of arms")->capture_default_str();
    gen->add_option("--seed", o.seed, "seed")->capture_default_str();
    gen->add_option("--out", o.out, "output file (default stdout)");

    for (auto* sub : {run, gen}) {
        sub->add_option("--indiff-fraction", o.indiff_fraction, "transitive: tie probability between neighbours");
        sub->add_option("--gap-min", o.gap_min, "transitive: smallest mode gap");
        sub->add_option("--gap-max", o.gap_max, "transitive: largest mode gap");
        sub->add_option("--gap", o.gap, "worstcase: probability offset in (0,1/6)");
        sub->add_option("--f", o.f, "worstcase: winner margin parameter");
        sub->add_flag("--with-indifferences", o.with_indifferences, "worstcase: variant with indifference mass");
    }

    auto* validate = app.add_subcommand("validate", "check an instance file");
    validate->add_option("instance", o.instance_path, "instance file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_runtime;
    }

    try {
        if (*run) return cmd_run(o);
        if (*bounds) return cmd_bounds(o);
        if (*gen) return cmd_gen(o);
        return cmd_validate(o);
    } catch (const ValidationError& e) {
        std::cerr << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_runtime;
    }
}

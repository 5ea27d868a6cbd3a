#pragma once
// JSON (de)serialization of instances, traces and bound reports.
// Files use 1-based arm labels.

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cowi/bounds.hpp"
#include "cowi/instance.hpp"
#include "cowi/solvers.hpp"

namespace cowi {

using json = nlohmann::json;

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raw file contents before any checks beyond JSON well-formedness.
struct InstanceFile {
    std::size_t n = 0;
    std::vector<PairEntry> entries; // 0-based
};

inline InstanceFile parse_instance_json(const json& j) {
    InstanceFile f;
    try {
        const auto n = j.at("n").get<long long>();
        f.n = n < 0 ? 0 : std::size_t(n); // validate() rejects n < 2
        for (const auto& p : j.at("pairs")) {
            PairEntry e;
            e.i = p.at("i").get<int>() - 1;
            e.j = p.at("j").get<int>() - 1;
            e.triple = {p.at("p_succ").get<double>(), p.at("p_cong").get<double>(), p.at("p_prec").get<double>()};
            f.entries.push_back(e);
        }
    } catch (const json::exception& e) {
        throw FileError(std::string("malformed instance JSON: ") + e.what());
    }
    return f;
}

inline InstanceFile read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FileError(path + ": " + e.what());
    }
    return parse_instance_json(j);
}

// Structure and probabilities; warnings are kept.
inline ValidationReport validate_file(const InstanceFile& f) { return validate(f.n, f.entries); }

// Builds the instance; throws ValidationError on any fatal issue.
inline PreferenceInstance to_instance(const InstanceFile& f, ValidationReport* report = nullptr) {
    ValidationReport rep = validate_file(f);
    if (report) *report = rep;
    if (!rep.ok()) throw ValidationError(rep);
    std::vector<PreferenceTriple> upper(pair_count(f.n));
    for (const auto& e : f.entries) upper[pair_index(f.n, std::size_t(e.i), std::size_t(e.j))] = e.triple;
    return PreferenceInstance(f.n, std::move(upper));
}

inline PreferenceInstance load_instance(const std::string& path, ValidationReport* report = nullptr) {
    return to_instance(read_instance_file(path), report);
}

inline json instance_to_json(const PreferenceInstance& inst) {
    json pairs = json::array();
    for (std::size_t i = 0; i < inst.n(); ++i)
        for (std::size_t j = i + 1; j < inst.n(); ++j) {
            const auto t = inst(i, j);
            pairs.push_back({{"i", i + 1}, {"j", j + 1}, {"p_succ", t.p_succ}, {"p_cong", t.p_cong}, {"p_prec", t.p_prec}});
        }
    return {{"n", inst.n()}, {"pairs", pairs}};
}

// nlohmann prints doubles with round-trip precision, so save/load is exact.
inline void save_instance(const PreferenceInstance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write " + path);
    out << instance_to_json(inst).dump(2) << '\n';
    if (!out) throw FileError("write failed for " + path);
}

inline json trace_to_json(const RunTrace& t) {
    json duels = json::array();
    for (const auto& d : t.duels)
        duels.push_back({{"round", d.round},
                         {"i", d.first + 1},
                         {"j", d.second + 1},
                         {"samples", d.samples},
                         {"outcome", outcome_index(d.outcome)}});
    return {{"duels", duels},
            {"returned_arm", t.returned_arm < 0 ? json(nullptr) : json(t.returned_arm + 1)},
            {"total_samples", t.total_samples},
            {"rounds", t.rounds}};
}

inline RunTrace trace_from_json(const json& j) {
    RunTrace t;
    try {
        for (const auto& d : j.at("duels"))
            t.duels.push_back({d.at("round").get<std::uint64_t>(), d.at("i").get<int>() - 1, d.at("j").get<int>() - 1,
                               d.at("samples").get<std::uint64_t>(), outcome_from_index(d.at("outcome").get<int>())});
        const auto& r = j.at("returned_arm");
        t.returned_arm = r.is_null() ? -1 : r.get<int>() - 1;
        t.total_samples = j.at("total_samples").get<std::uint64_t>();
        t.rounds = j.at("rounds").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw FileError(std::string("malformed trace JSON: ") + e.what());
    }
    return t;
}

inline json component_to_json(const BoundComponent& c) {
    json j = {{"applicable", c.applicable}};
    if (c.applicable) {
        j["value"] = c.value;
        j["method"] = c.method;
        json arms = json::array();
        for (const auto& a : c.per_arm)
            arms.push_back({{"arm", a.arm + 1},
                            {"factor", a.factor},
                            {"min_inverse_divergence", a.min_inverse_div},
                            {"contribution", a.contribution},
                            {"skipped", a.skipped}});
        j["per_arm"] = arms;
        if (!c.flags.empty()) j["flags"] = c.flags;
    }
    if (!c.reason.empty()) j["reason"] = c.reason;
    return j;
}

inline json bound_report_to_json(const BoundReport& r) {
    json j = {{"delta", r.delta},
              {"lower_simple", component_to_json(r.lower_simple)},
              {"lower_detailed", component_to_json(r.lower_detailed)},
              {"lower_natural", component_to_json(r.lower_natural)}};
    if (r.upper_pocowista)
        j["upper_pocowista"] = {{"applicable", true}, {"value", *r.upper_pocowista}};
    else
        j["upper_pocowista"] = {{"applicable", false}, {"reason", r.upper_reason}};
    if (r.upper_tra) j["upper_tra"] = {{"applicable", true}, {"value", *r.upper_tra}};
    return j;
}

} // namespace cowi

#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "amenable/coloring.hpp"
#include "amenable/group.hpp"
#include "amenable/runner.hpp"
#include "amenable/step_function.hpp"

namespace amenable::runner::detail {

// Reads one JSON object, validating values and recording the resolved form
// (defaults included). Unknown keys are rejected by finish().
class Section {
public:
    Section(const Json& raw, std::string path);

    double number(const std::string& key, double def, double lo, double hi, bool lo_open = false,
                  bool hi_open = false);
    std::int64_t integer(const std::string& key, std::int64_t def, std::int64_t lo, std::int64_t hi);
    bool flag(const std::string& key, bool def);
    std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& options);
    std::vector<double> numbers(const std::string& key, const std::vector<double>& def, double lo, double hi,
                                std::size_t min_len = 1);
    std::vector<std::int64_t> integers(const std::string& key, const std::vector<std::int64_t>& def,
                                       std::int64_t lo, std::int64_t hi, std::size_t min_len = 1);
    // nested object (missing means empty); resolve it and hand back with put()
    Section section(const std::string& key);
    void put(const std::string& key, Json value);
    bool has(const std::string& key) const { return raw_.contains(key); }
    const Json& raw(const std::string& key) const { return raw_.at(key); }
    [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

    Json finish();
    const std::string& path() const { return path_; }

private:
    const Json& value(const std::string& key);
    Json raw_;
    std::string path_;
    std::set<std::string> used_;
    Json out_ = Json::object();
};

// shortest round-trip decimal form
std::string num(double x);
std::string num(std::uint64_t x);

class Csv {
public:
    explicit Csv(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    std::string str() const { return text_; }

private:
    std::size_t width_;
    std::string text_;
};

std::string step_csv(const StepFunction& f, const std::string& x_name, const std::string& y_name);

// "Z", "Z2", "Z3", "H"
GroupModel group_by_name(const std::string& name);
std::string group_choice(Section& s, const std::string& key, const std::string& def,
                         const std::vector<std::string>& allowed = {"Z", "Z2", "Z3", "H"});
// Lattice shapes give boxes ∏[0, n_i); Heisenberg accepts [n] (the standard
// Følner box) or [a, b, c].
FiniteSubset shape_set(const GroupModel& g, const std::vector<std::int64_t>& shape);
std::vector<std::int64_t> shape_of(Section& s, const std::string& key, const std::string& group,
                                   const std::vector<std::int64_t>& def);
Json element_json(const Element& x, const GroupModel& g);

// {"rule": "iid", "weights": [...]} | {"rule": "bits", "probs": [...]} |
// {"rule": "periodic", "periods": [...], "table": [...], "alphabet": n} | {"rule": "constant", ...}
Json resolve_coloring(Section s, std::uint64_t seed_default, bool require_random);
Coloring make_coloring(const Json& resolved);

struct Common {
    std::uint64_t seed = 1;
    std::size_t max_matrix_size = 6000;
    double max_pattern_bits = 24;
    std::size_t max_configuration_bits = 22;
    std::size_t max_family = 200000;
};
Common common_of(const Json& resolved);

struct ExperimentKind {
    std::string name;
    std::string description;
    std::function<void(Section&, const Json& common)> resolve;
    std::function<RunArtifacts(const Json& params, const Common& common)> run;
};

std::vector<ExperimentKind> tiling_kinds();
std::vector<ExperimentKind> analysis_kinds();

// uniform in [0,1) keyed by words, for config-seeded random instances
double unit(std::uint64_t seed, std::initializer_list<std::int64_t> key);

}  // namespace amenable::runner::detail

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <sstream>

#include "amenable/errors.hpp"
#include "amenable/parallel.hpp"
#include "amenable/rng.hpp"
#include "amenable/spectral.hpp"
#include "amenable/tiling.hpp"
#include "internal.hpp"

namespace amenable::runner {

namespace detail {

Section::Section(const Json& raw, std::string path) : raw_(raw.is_null() ? Json::object() : raw), path_(std::move(path)) {
    if (!raw_.is_object()) throw ConfigError(path_ + ": expected an object");
}

void Section::fail(const std::string& key, const std::string& msg) const {
    throw ConfigError((path_.empty() ? key : path_ + "." + key) + ": " + msg);
}

const Json& Section::value(const std::string& key) {
    used_.insert(key);
    return raw_.at(key);
}

double Section::number(const std::string& key, double def, double lo, double hi, bool lo_open, bool hi_open) {
    double v = def;
    if (raw_.contains(key)) {
        const auto& j = value(key);
        if (!j.is_number()) fail(key, "expected a number");
        v = j.get<double>();
    }
    const bool ok = (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi) && std::isfinite(v);
    if (!ok)
        fail(key, "value " + num(v) + " outside " + (lo_open ? "(" : "[") + num(lo) + ", " + num(hi) +
                      (hi_open ? ")" : "]"));
    out_[key] = v;
    return v;
}

std::int64_t Section::integer(const std::string& key, std::int64_t def, std::int64_t lo, std::int64_t hi) {
    std::int64_t v = def;
    if (raw_.contains(key)) {
        const auto& j = value(key);
        if (!j.is_number_integer()) fail(key, "expected an integer");
        v = j.get<std::int64_t>();
    }
    if (v < lo || v > hi) fail(key, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
    out_[key] = v;
    return v;
}

bool Section::flag(const std::string& key, bool def) {
    bool v = def;
    if (raw_.contains(key)) {
        const auto& j = value(key);
        if (!j.is_boolean()) fail(key, "expected true or false");
        v = j.get<bool>();
    }
    out_[key] = v;
    return v;
}

std::string Section::choice(const std::string& key, const std::string& def, const std::vector<std::string>& options) {
    std::string v = def;
    if (raw_.contains(key)) {
        const auto& j = value(key);
        if (!j.is_string()) fail(key, "expected a string");
        v = j.get<std::string>();
    }
    if (std::find(options.begin(), options.end(), v) == options.end()) {
        std::string all;
        for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
        fail(key, "'" + v + "' is not one of {" + all + "}");
    }
    out_[key] = v;
    return v;
}

std::vector<double> Section::numbers(const std::string& key, const std::vector<double>& def, double lo, double hi,
                                     std::size_t min_len) {
    std::vector<double> v = def;
    if (raw_.contains(key)) {
        const auto& j = value(key);
        if (!j.is_array()) fail(key, "expected a list of numbers");
        v.clear();
        for (const auto& e : j) {
            if (!e.is_number()) fail(key, "expected a list of numbers");
            v.push_back(e.get<double>());
        }
    }
    if (v.size() < min_len) fail(key, "needs at least " + std::to_string(min_len) + " entries");
    for (double x : v)
        if (!(x >= lo && x <= hi)) fail(key, "entry " + num(x) + " outside [" + num(lo) + ", " + num(hi) + "]");
    out_[key] = v;
    return v;
}

std::vector<std::int64_t> Section::integers(const std::string& key, const std::vector<std::int64_t>& def,
                                            std::int64_t lo, std::int64_t hi, std::size_t min_len) {
    std::vector<std::int64_t> v = def;
    if (raw_.contains(key)) {
        const auto& j = value(key);
        if (!j.is_array()) fail(key, "expected a list of integers");
        v.clear();
        for (const auto& e : j) {
            if (!e.is_number_integer()) fail(key, "expected a list of integers");
            v.push_back(e.get<std::int64_t>());
        }
    }
    if (v.size() < min_len) fail(key, "needs at least " + std::to_string(min_len) + " entries");
    for (auto x : v)
        if (x < lo || x > hi)
            fail(key, "entry " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out_[key] = v;
    return v;
}

Section Section::section(const std::string& key) {
    const Json empty = Json::object();
    const Json& raw = raw_.contains(key) ? value(key) : empty;
    if (!raw.is_object()) fail(key, "expected an object");
    return Section(raw, path_.empty() ? key : path_ + "." + key);
}

void Section::put(const std::string& key, Json v) {
    used_.insert(key);
    out_[key] = std::move(v);
}

Json Section::finish() {
    for (auto it = raw_.begin(); it != raw_.end(); ++it)
        if (!used_.count(it.key())) fail(it.key(), "unknown key");
    return out_;
}

std::string num(double x) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string num(std::uint64_t x) { return std::to_string(x); }

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

void Csv::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += "\n";
}

std::string step_csv(const StepFunction& f, const std::string& x_name, const std::string& y_name) {
    Csv c({x_name, y_name});
    c.row({"-inf", num(f.base())});
    const auto lv = f.levels();
    for (std::size_t i = 0; i < f.breakpoints().size(); ++i) c.row({num(f.breakpoints()[i]), num(lv[i])});
    return c.str();
}

GroupModel group_by_name(const std::string& name) {
    if (name == "Z") return GroupModel::lattice(1);
    if (name == "Z2") return GroupModel::lattice(2);
    if (name == "Z3") return GroupModel::lattice(3);
    if (name == "H") return GroupModel::heisenberg();
    throw ConfigError("unknown group '" + name + "'");
}

std::string group_choice(Section& s, const std::string& key, const std::string& def,
                         const std::vector<std::string>& allowed) {
    return s.choice(key, def, allowed);
}

FiniteSubset shape_set(const GroupModel& g, const std::vector<std::int64_t>& shape) {
    if (g.kind() == GroupKind::Heisenberg && shape.size() == 1) return folner_set(g, shape[0]);
    std::vector<Element> out;
    std::array<std::int64_t, 3> n{1, 1, 1};
    for (std::size_t i = 0; i < shape.size(); ++i) n[i] = shape[i];
    for (std::int64_t a = 0; a < n[0]; ++a)
        for (std::int64_t b = 0; b < n[1]; ++b)
            for (std::int64_t c = 0; c < n[2]; ++c) {
                const std::int64_t co[3] = {a, b, c};
                out.push_back(g.element(std::span<const std::int64_t>(co, shape.size())));
            }
    return FiniteSubset(std::move(out));
}

std::vector<std::int64_t> shape_of(Section& s, const std::string& key, const std::string& group,
                                   const std::vector<std::int64_t>& def) {
    auto v = s.integers(key, def, 1, 2000000);
    const std::size_t rank = group == "Z" ? 1 : group == "Z2" ? 2 : 3;
    const bool ok = v.size() == rank || (group == "H" && v.size() == 1);
    if (!ok) s.fail(key, "shape must list " + std::to_string(rank) + " side lengths for " + group);
    double total = 1;
    for (auto x : v) total *= static_cast<double>(x);
    if (group == "H" && v.size() == 1) total = std::pow(static_cast<double>(v[0]), 4);
    if (total > 5e6) s.fail(key, "set of " + num(total) + " elements is above the 5e6 window limit");
    return v;
}

Json element_json(const Element& x, const GroupModel& g) {
    Json a = Json::array();
    for (int i = 0; i < g.rank(); ++i) a.push_back(x.c[static_cast<std::size_t>(i)]);
    return a;
}

Json resolve_coloring(Section s, std::uint64_t seed_default, bool require_random) {
    const auto rule = s.choice("rule", "iid", {"iid", "bits", "periodic", "constant"});
    if (require_random && rule != "iid" && rule != "bits")
        s.fail("rule", "this experiment needs a random coloring (iid or bits)");
    if (rule == "iid") {
        s.integer("seed", static_cast<std::int64_t>(seed_default), 0, INT64_MAX);
        auto w = s.numbers("weights", {0.5, 0.5}, 0.0, 1.0);
        double sum = 0;
        for (double x : w) sum += x;
        if (std::abs(sum - 1.0) > 1e-9) s.fail("weights", "weights must sum to 1");
    } else if (rule == "bits") {
        s.integer("seed", static_cast<std::int64_t>(seed_default), 0, INT64_MAX);
        auto p = s.numbers("probs", {0.5}, 0.0, 1.0);
        if (p.size() > 16) s.fail("probs", "at most 16 bits");
    } else if (rule == "periodic") {
        const auto a = s.integer("alphabet", 2, 1, 1 << 16);
        auto periods = s.integers("periods", {2}, 1, 1 << 20);
        if (periods.size() > 3) s.fail("periods", "at most three periods");
        std::int64_t cells = 1;
        for (auto p : periods) cells *= p;
        std::vector<std::int64_t> def(static_cast<std::size_t>(cells));
        for (std::int64_t i = 0; i < cells; ++i) def[static_cast<std::size_t>(i)] = i % a;
        auto table = s.integers("table", def, 0, a - 1);
        if (static_cast<std::int64_t>(table.size()) != cells) s.fail("table", "needs one color per period cell");
    } else {
        const auto a = s.integer("alphabet", 1, 1, 1 << 16);
        s.integer("value", 0, 0, a - 1);
    }
    return s.finish();
}

Coloring make_coloring(const Json& c) {
    const auto rule = c.at("rule").get<std::string>();
    if (rule == "iid") return Coloring::iid(c.at("seed").get<std::uint64_t>(), c.at("weights").get<std::vector<double>>());
    if (rule == "bits")
        return Coloring::bernoulli_bits(c.at("seed").get<std::uint64_t>(), c.at("probs").get<std::vector<double>>());
    if (rule == "periodic") {
        std::vector<Color> table;
        for (auto x : c.at("table")) table.push_back(x.get<Color>());
        return Coloring::periodic(c.at("alphabet").get<Color>(), c.at("periods").get<std::vector<std::int64_t>>(),
                                  table);
    }
    return Coloring::constant(c.at("alphabet").get<Color>(), c.at("value").get<Color>());
}

Common common_of(const Json& r) {
    Common c;
    c.seed = r.at("seed").get<std::uint64_t>();
    const auto& caps = r.at("caps");
    c.max_matrix_size = caps.at("max_matrix_size").get<std::size_t>();
    c.max_pattern_bits = caps.at("max_pattern_bits").get<double>();
    c.max_configuration_bits = caps.at("max_configuration_bits").get<std::size_t>();
    c.max_family = caps.at("max_family").get<std::size_t>();
    return c;
}

double unit(std::uint64_t seed, std::initializer_list<std::int64_t> key) { return CounterRng(seed).uniform(key); }

const std::vector<ExperimentKind>& kinds() {
    static const std::vector<ExperimentKind> all = [] {
        auto a = tiling_kinds();
        auto b = analysis_kinds();
        a.insert(a.end(), b.begin(), b.end());
        return a;
    }();
    return all;
}

const ExperimentKind& kind_named(const std::string& name) {
    for (const auto& k : kinds())
        if (k.name == name) return k;
    throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace detail

using namespace detail;

const std::vector<ExperimentInfo>& experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto& k : kinds()) v.push_back({k.name, k.description});
        return v;
    }();
    return infos;
}

Json resolve_config(const Json& raw) {
    if (!raw.is_object()) throw ConfigError("config must be a JSON object");
    Section top(raw, "");
    std::vector<std::string> names;
    for (const auto& k : kinds()) names.push_back(k.name);
    if (!raw.contains("experiment")) throw ConfigError("experiment: missing");
    const auto kind = top.choice("experiment", "", names);
    top.integer("seed", 1, 0, INT64_MAX);
    top.integer("threads", 0, 0, 1024);
    if (raw.contains("output_dir") && !raw.at("output_dir").is_string())
        throw ConfigError("output_dir: expected a string");
    top.put("output_dir", raw.value("output_dir", std::string("out")));

    auto caps = top.section("caps");
    caps.integer("max_matrix_size", static_cast<std::int64_t>(kMaxDenseSize), 1, 20000);
    caps.integer("max_pattern_bits", 24, 1, 30);
    caps.integer("max_configuration_bits", 22, 1, 30);
    caps.integer("max_family", 200000, 1, 100000000);
    top.put("caps", caps.finish());

    auto params = top.section("params");
    Json common = top.finish();
    kind_named(kind).resolve(params, common);
    common["params"] = params.finish();
    return common;
}

RunArtifacts execute(const Json& resolved) {
    set_worker_threads(resolved.at("threads").get<unsigned>());
    const auto& kind = kind_named(resolved.at("experiment").get<std::string>());
    auto art = kind.run(resolved.at("params"), common_of(resolved));
    art.resolved = resolved;
    return art;
}

namespace {

Json checks_json(const Report& r) {
    Json a = Json::array();
    for (const auto& c : r.checks()) {
        Json j;
        j["name"] = c.name;
        j["measured"] = c.measured;
        j["relation"] = c.relation;
        j["bound"] = c.bound;
        j["asserted"] = c.asserted;
        j["passed"] = c.passed;
        a.push_back(std::move(j));
    }
    return a;
}

std::string failure_text(const Check& c) {
    return c.name + " (measured " + num(c.measured) + " " + c.relation + " " + num(c.bound) + " fails)";
}

}  // namespace

std::string summary_json(const RunArtifacts& a) {
    Json s;
    s["config"] = a.resolved;
    s["status"] = a.verification.all_passed() ? "passed" : "failed";
    s["results"] = a.results;
    Json files = Json::array();
    for (const auto& [name, _] : a.files) files.push_back(name);
    s["files"] = files;
    return s.dump(2) + "\n";
}

std::string verification_json(const RunArtifacts& a) {
    Json v;
    v["config"] = a.resolved;
    v["passed"] = a.verification.all_passed();
    const auto* f = a.verification.first_failure();
    v["first_failure"] = f ? Json(f->name) : Json(nullptr);
    v["checks"] = checks_json(a.verification);
    return v.dump(2) + "\n";
}

RunOutcome run_json(const Json& raw, const std::filesystem::path& out_override) {
    RunOutcome out;
    Json resolved;
    try {
        resolved = resolve_config(raw);
    } catch (const ConfigError& e) {
        return {kInvalidConfig, std::string("invalid config: ") + e.what(), {}};
    }
    std::filesystem::path dir = out_override.empty() ? std::filesystem::path(resolved.at("output_dir").get<std::string>())
                                                     : out_override;
    if (const char* env = std::getenv("AMENABLE_OUTPUT_DIR"); env && out_override.empty() && *env) dir = env;
    out.results_dir = dir / "results";

    RunArtifacts art;
    try {
        art = execute(resolved);
    } catch (const ResourceCapExceeded& e) {
        return {kResourceCap, std::string("resource cap exceeded: ") + e.what(), {}};
    } catch (const TilingError& e) {
        return {kAssertionFailed, std::string("construction failed: ") + e.what(), {}};
    } catch (const std::bad_alloc&) {
        return {kResourceCap, "resource cap exceeded: out of memory", {}};
    } catch (const std::exception& e) {
        return {kInternalError, std::string("internal error: ") + e.what(), {}};
    }

    std::filesystem::create_directories(out.results_dir);
    auto write = [&](const std::string& name, const std::string& text) {
        const auto path = out.results_dir / name;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream f(path, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + path.string());
    };
    for (const auto& [name, text] : art.files) write(name, text);
    write("summary.json", summary_json(art));
    write("verification.json", verification_json(art));

    if (const auto* f = art.verification.first_failure()) {
        out.exit_code = kAssertionFailed;
        out.message = "assertion failed: " + failure_text(*f);
    } else {
        out.message = "passed " + std::to_string(art.verification.checks().size()) + " checks; results in " +
                      out.results_dir.string();
    }
    return out;
}

RunOutcome run_file(const std::filesystem::path& config, const std::filesystem::path& out_override) {
    std::ifstream in(config);
    if (!in) return {kInvalidConfig, "invalid config: cannot open " + config.string(), {}};
    Json raw;
    try {
        raw = Json::parse(in);
    } catch (const Json::parse_error& e) {
        return {kInvalidConfig, std::string("invalid config: ") + e.what(), {}};
    }
    return run_json(raw, out_override);
}

RunOutcome verify_file(const std::filesystem::path& report) {
    std::ifstream in(report);
    if (!in) return {kInvalidConfig, "cannot open " + report.string(), {}};
    Json v;
    try {
        v = Json::parse(in);
    } catch (const Json::parse_error& e) {
        return {kInvalidConfig, std::string("unreadable report: ") + e.what(), {}};
    }
    if (!v.contains("checks") || !v.at("checks").is_array()) return {kInvalidConfig, "report has no checks", {}};
    std::size_t n = 0;
    try {
        for (const auto& c : v.at("checks")) {
            ++n;
            const auto name = c.value("name", std::string("?"));
            const auto& m = c.at("measured");
            const auto& b = c.at("bound");
            const bool ok = m.is_number() && b.is_number() &&
                            holds(m.get<double>(), c.at("relation").get<std::string>(), b.get<double>());
            if (ok != c.at("passed").get<bool>())
                return {kAssertionFailed, "check " + name + " disagrees with its recorded outcome", {}};
            if (!ok && c.at("asserted").get<bool>()) return {kAssertionFailed, "assertion failed: " + name, {}};
        }
    } catch (const Json::exception& e) {
        return {kInvalidConfig, std::string("malformed check: ") + e.what(), {}};
    }
    return {kOk, "all " + std::to_string(n) + " checks hold", {}};
}

}  // namespace amenable::runner

#include "amenable/report.hpp"

#include <algorithm>
#include <stdexcept>

namespace amenable {

bool holds(double measured, const std::string& relation, double bound) {
    if (relation == "<") return measured < bound;
    if (relation == "<=") return measured <= bound;
    if (relation == ">=") return measured >= bound;
    if (relation == ">") return measured > bound;
    if (relation == "==") return measured == bound;
    throw std::invalid_argument("unknown relation " + relation);
}

Check& Report::add(std::string name, double measured, std::string relation, double bound, bool asserted) {
    Check c{std::move(name), measured, bound, relation, holds(measured, relation, bound), asserted};
    checks_.push_back(std::move(c));
    return checks_.back();
}

Check& Report::add_flag(std::string name, bool ok, bool asserted) {
    return add(std::move(name), ok ? 1.0 : 0.0, "==", 1.0, asserted);
}

void Report::append(const Report& other, const std::string& prefix) {
    for (auto c : other.checks_) {
        c.name = prefix + c.name;
        checks_.push_back(std::move(c));
    }
}

bool Report::all_passed() const { return first_failure() == nullptr; }

const Check* Report::find(const std::string& name) const {
    auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
    return it == checks_.end() ? nullptr : &*it;
}

const Check* Report::first_failure() const {
    auto it = std::find_if(checks_.begin(), checks_.end(), [](const Check& c) { return c.asserted && !c.passed; });
    return it == checks_.end() ? nullptr : &*it;
}

}  // namespace amenable

#pragma once

#include <string>
#include <vector>

namespace amenable {

// One inequality checked against measured data. Checks with asserted == false
// are informational (their hypotheses did not hold) and never fail a report.
struct Check {
    std::string name;
    double measured = 0;
    double bound = 0;
    std::string relation;  // "<", "<=", ">=", "==", ">"
    bool passed = true;
    bool asserted = true;
};

class Report {
public:
    // evaluates `measured relation bound`
    Check& add(std::string name, double measured, std::string relation, double bound, bool asserted = true);
    Check& add_flag(std::string name, bool ok, bool asserted = true);
    void append(const Report& other, const std::string& prefix = "");

    bool all_passed() const;
    const std::vector<Check>& checks() const { return checks_; }
    const Check* find(const std::string& name) const;
    // first asserted failing check, or nullptr
    const Check* first_failure() const;

private:
    std::vector<Check> checks_;
};

bool holds(double measured, const std::string& relation, double bound);

}  // namespace amenable

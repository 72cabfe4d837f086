#pragma once

#include <functional>
#include <string>
#include <vector>

namespace amenable {

// Bounded right-continuous step function
//   f(E) = base + Σ_{x_i <= E} jump_i
// with strictly increasing breakpoints x_i. Closed under linear combinations,
// which is all the ergodic machinery needs from its value space.
class StepFunction {
public:
    StepFunction() = default;
    static StepFunction constant(double c);
    // E ↦ #{i : points[i] <= E}, with multiplicity
    static StepFunction counting(std::vector<double> points);
    // f = levels[i] on [breakpoints[i], breakpoints[i+1]), base before the first
    static StepFunction from_levels(double base, const std::vector<double>& breakpoints,
                                    const std::vector<double>& levels);

    double operator()(double e) const;
    double base() const { return base_; }
    double at_infinity() const;
    const std::vector<double>& breakpoints() const { return xs_; }
    const std::vector<double>& jumps() const { return jumps_; }
    // value on [x_i, x_{i+1})
    std::vector<double> levels() const;

    StepFunction operator+(const StepFunction& o) const;
    StepFunction operator-(const StepFunction& o) const;
    StepFunction operator*(double a) const;
    StepFunction& operator+=(const StepFunction& o) { return *this = *this + o; }

    double sup_norm() const;
    bool nondecreasing() const;
    bool operator==(const StepFunction& o) const = default;

    // "E,value" rows, one per breakpoint, preceded by a header
    std::string to_csv(const std::string& x_name = "E", const std::string& y_name = "value") const;

private:
    double base_ = 0.0;
    std::vector<double> xs_;
    std::vector<double> jumps_;
};

double sup_distance(const StepFunction& f, const StepFunction& g);

// sup over [lo, hi] of |f - ref| for a continuous reference. On each piece f
// is constant, so for monotone ref the supremum sits at the piece ends; other
// references are also probed at `extra_samples` interior points per piece.
double sup_distance(const StepFunction& f, const std::function<double(double)>& ref, double lo, double hi,
                    int extra_samples = 0);

}  // namespace amenable

#include "amenable/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace amenable {

StepFunction StepFunction::constant(double c) {
    StepFunction f;
    f.base_ = c;
    return f;
}

StepFunction StepFunction::counting(std::vector<double> points) {
    std::sort(points.begin(), points.end());
    StepFunction f;
    for (double x : points) {
        if (!std::isfinite(x)) throw std::invalid_argument("counting function needs finite points");
        if (!f.xs_.empty() && f.xs_.back() == x)
            f.jumps_.back() += 1.0;
        else {
            f.xs_.push_back(x);
            f.jumps_.push_back(1.0);
        }
    }
    return f;
}

StepFunction StepFunction::from_levels(double base, const std::vector<double>& breakpoints,
                                       const std::vector<double>& levels) {
    if (breakpoints.size() != levels.size()) throw std::invalid_argument("breakpoints and levels differ in length");
    StepFunction f;
    f.base_ = base;
    double prev = base;
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (i > 0 && !(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("breakpoints must be strictly increasing");
        const double j = levels[i] - prev;
        prev = levels[i];
        if (j == 0.0) continue;
        f.xs_.push_back(breakpoints[i]);
        f.jumps_.push_back(j);
    }
    return f;
}

double StepFunction::operator()(double e) const {
    const auto n = static_cast<std::size_t>(std::upper_bound(xs_.begin(), xs_.end(), e) - xs_.begin());
    double v = base_;
    for (std::size_t i = 0; i < n; ++i) v += jumps_[i];
    return v;
}

double StepFunction::at_infinity() const {
    double v = base_;
    for (double j : jumps_) v += j;
    return v;
}

std::vector<double> StepFunction::levels() const {
    std::vector<double> out;
    out.reserve(xs_.size());
    double v = base_;
    for (double j : jumps_) out.push_back(v += j);
    return out;
}

StepFunction StepFunction::operator+(const StepFunction& o) const {
    StepFunction r;
    r.base_ = base_ + o.base_;
    r.xs_.reserve(xs_.size() + o.xs_.size());
    r.jumps_.reserve(xs_.size() + o.xs_.size());
    std::size_t i = 0, k = 0;
    auto push = [&](double x, double j) {
        if (!r.xs_.empty() && r.xs_.back() == x) {
            r.jumps_.back() += j;
            if (r.jumps_.back() == 0.0) {
                r.xs_.pop_back();
                r.jumps_.pop_back();
            }
        } else if (j != 0.0) {
            r.xs_.push_back(x);
            r.jumps_.push_back(j);
        }
    };
    while (i < xs_.size() || k < o.xs_.size()) {
        if (k == o.xs_.size() || (i < xs_.size() && xs_[i] <= o.xs_[k])) {
            push(xs_[i], jumps_[i]);
            ++i;
        } else {
            push(o.xs_[k], o.jumps_[k]);
            ++k;
        }
    }
    return r;
}

StepFunction StepFunction::operator-(const StepFunction& o) const { return *this + o * -1.0; }

StepFunction StepFunction::operator*(double a) const {
    if (a == 0.0) return StepFunction{};
    StepFunction r = *this;
    r.base_ *= a;
    for (double& j : r.jumps_) j *= a;
    return r;
}

double StepFunction::sup_norm() const {
    double m = std::abs(base_), v = base_;
    for (double j : jumps_) m = std::max(m, std::abs(v += j));
    return m;
}

bool StepFunction::nondecreasing() const {
    return std::all_of(jumps_.begin(), jumps_.end(), [](double j) { return j >= 0.0; });
}

std::string StepFunction::to_csv(const std::string& x_name, const std::string& y_name) const {
    std::ostringstream os;
    os << std::setprecision(17) << x_name << ',' << y_name << '\n';
    double v = base_;
    for (std::size_t i = 0; i < xs_.size(); ++i) os << xs_[i] << ',' << (v += jumps_[i]) << '\n';
    return os.str();
}

double sup_distance(const StepFunction& f, const StepFunction& g) { return (f - g).sup_norm(); }

double sup_distance(const StepFunction& f, const std::function<double(double)>& ref, double lo, double hi,
                    int extra_samples) {
    if (!(hi >= lo)) throw std::invalid_argument("empty interval");
    // pieces of f restricted to [lo, hi]
    std::vector<double> cuts{lo};
    for (double x : f.breakpoints())
        if (x > lo && x < hi) cuts.push_back(x);
    cuts.push_back(hi);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double v = f(a);
        worst = std::max({worst, std::abs(v - ref(a)), std::abs(v - ref(b))});
        for (int s = 1; s <= extra_samples; ++s) {
            const double e = a + (b - a) * s / (extra_samples + 1);
            worst = std::max(worst, std::abs(v - ref(e)));
        }
    }
    return std::max(worst, std::abs(f(hi) - ref(hi)));
}

}  // namespace amenable

#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hkit {

// A real kernel on [0,1]^2 together with the smoothness metadata the
// integrators need: whether eval(t, .) has a derivative jump at s = t, and any
// further fixed breakpoints in s.
struct Kernel {
  std::function<double(double, double)> eval;
  bool diagonal_kink = true;
  std::vector<double> extra_breaks;
  // Optional envelope Phi(s) >= sup_t |k(t,s)| (closed form when known).
  std::function<double(double)> envelope;

  double operator()(double t, double s) const { return eval(t, s); }

  std::vector<double> breaks_at(double t) const {
    std::vector<double> b = extra_breaks;
    if (diagonal_kink) b.push_back(t);
    return b;
  }
};

// Nonnegative weight g(s). Remembers whether it is identically one so closed
// forms can be used.
class Weight {
 public:
  Weight() : Weight(one()) {}
  Weight(std::function<double(double)> fn, std::string name, bool is_one = false)
      : fn_(std::move(fn)), name_(std::move(name)), is_one_(is_one) {}

  static Weight one() {
    return Weight([](double) { return 1.0; }, "one", true);
  }
  static Weight linear() {
    return Weight([](double s) { return s; }, "linear");
  }

  double operator()(double s) const { return fn_(s); }
  bool is_one() const { return is_one_; }
  const std::string& name() const { return name_; }

 private:
  std::function<double(double)> fn_;
  std::string name_;
  bool is_one_ = false;
};

}  // namespace hkit

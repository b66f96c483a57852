#include "heavistep/elementary_ops.hpp"

#include "heavistep/step_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace heavistep {

namespace {

void check_non_negative(double x, const LatticeSpec& spec, const char* what) {
  if (!(x >= 0.0) || x > spec.max_input()) {
    throw std::out_of_range(std::string(what) + ": input " + std::to_string(x) +
                            " outside [0, (M-1)*eps]");
  }
}

// Number of lattice points i*eps (0 <= i < M) strictly below x.
int lattice_count(double x, const LatticeSpec& spec) {
  const double eps = spec.step();
  int count = 0;
  for (int i = 0; i < spec.M; ++i) count += theta(x - i * eps);
  return count;
}

}  // namespace

LatticeSpec::LatticeSpec(int m, Rational step) : M(m), eps(step) {
  if (m < 1) throw std::invalid_argument("lattice bound M must be >= 1");
  if (step <= 0) throw std::invalid_argument("lattice step eps must be > 0");
}

double LatticeSpec::max_input() const { return (M - 1) * step(); }

bool operator==(const LatticeSpec& a, const LatticeSpec& b) {
  return a.M == b.M && a.eps == b.eps;
}

double identity_sum(double x, const LatticeSpec& spec) {
  if (!std::isfinite(x) || std::abs(x) > spec.max_input()) {
    throw std::out_of_range("identity_sum: |x| exceeds (M-1)*eps");
  }
  return spec.step() * (lattice_count(x, spec) - lattice_count(-x, spec));
}

double add_or(double x, double y, const LatticeSpec& spec) {
  check_non_negative(x, spec, "add_or");
  check_non_negative(y, spec, "add_or");
  const double eps = spec.step();
  long long ors = 0;
  long long ands = 0;
  for (int i = 0; i < spec.M; ++i) {
    for (int j = 0; j < spec.M; ++j) {
      ors += or_gate(x - i * eps, y - j * eps);
      ands += and_gate(x - i * eps, y - j * eps);
    }
  }
  return eps * static_cast<double>(ors + ands) / spec.M;
}

double multiply(double x, double y, const LatticeSpec& spec) {
  check_non_negative(x, spec, "multiply");
  check_non_negative(y, spec, "multiply");
  const double eps = spec.step();
  long long count = 0;
  for (int i = 0; i < spec.M; ++i) {
    for (int j = 0; j < spec.M; ++j) {
      count += theta(theta(x - i * eps) + theta(y - j * eps) - 1);
    }
  }
  return eps * eps * static_cast<double>(count);
}

std::int64_t divide_floor(std::int64_t x, std::int64_t y, const LatticeSpec& spec) {
  if (y == 0) throw std::invalid_argument("divide_floor: division by zero");
  if (x < 1 || y < 1) throw std::out_of_range("divide_floor: needs positive integers");
  if (x > spec.M) throw std::out_of_range("divide_floor: dividend exceeds M");
  std::int64_t q = 0;
  for (std::int64_t i = 1; i <= spec.M; ++i) {
    q += theta(static_cast<double>(x - i * y + 1));
  }
  return q;
}

std::int64_t int_root(double x, int alpha, const LatticeSpec& spec) {
  if (alpha < 1) throw std::invalid_argument("int_root: alpha must be >= 1");
  if (!(x > 0.0) || x > std::pow(static_cast<double>(spec.M), alpha)) {
    throw std::out_of_range("int_root: x outside (0, M^alpha]");
  }
  std::int64_t r = 0;
  for (int i = 0; i <= spec.M; ++i) {
    r += theta(x - std::pow(static_cast<double>(i), alpha));
  }
  return r;
}

double zero_of(std::span<const FunctionSample> samples) {
  double total = 0.0;
  bool crossed = false;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    if (samples[k + 1].x < samples[k].x) {
      throw std::invalid_argument("zero_of: samples must be sorted by x");
    }
    const int jump = theta(samples[k + 1].fx) - theta(samples[k].fx);
    if (jump != 0) {
      crossed = true;
      total += samples[k].x * jump;
    }
  }
  if (!crossed) throw std::domain_error("zero_of: no root in window");
  return total;
}

}  // namespace heavistep

#include "heavistep/step_core.hpp"

#include <cmath>
#include <stdexcept>

namespace heavistep {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::domain_error(std::string(what) + ": non-finite argument");
  }
}

void require_sigmoid(const Activation& act, const char* what) {
  if (act.kind != ActivationKind::sigmoid) {
    throw std::invalid_argument(std::string(what) + ": activation is not a sigmoid");
  }
}

}  // namespace

Activation Activation::sigmoid(double K, double xi) {
  if (!(K > 0.0) || !std::isfinite(K) || !std::isfinite(xi)) {
    throw std::invalid_argument("sigmoid activation needs finite K > 0 and finite xi");
  }
  return {ActivationKind::sigmoid, K, xi};
}

Activation Activation::sigmoid_unsquared(double k, double xi) {
  if (!(k > 0.0)) throw std::invalid_argument("sigmoid activation needs k > 0");
  return sigmoid(std::sqrt(k), xi);
}

Activation Activation::tanh_scale(double Lambda, double xi) {
  if (!(Lambda > 0.0)) throw std::invalid_argument("tanh scale needs Lambda > 0");
  return sigmoid(std::sqrt(2.0 / Lambda), xi);
}

int theta(double x) {
  require_finite(x, "theta");
  return x > 0.0 ? 1 : 0;
}

double sigma(double x, const Activation& act) {
  require_sigmoid(act, "sigma");
  require_finite(x, "sigma");
  const double z = act.gain() * (x - act.xi);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double sigma_complement(double x, const Activation& act) {
  require_sigmoid(act, "sigma_complement");
  require_finite(x, "sigma_complement");
  const double z = act.gain() * (x - act.xi);
  if (z <= 0.0) return 1.0 / (1.0 + std::exp(z));
  const double e = std::exp(-z);
  return e / (1.0 + e);
}

double sigma_prime(double x, const Activation& act) {
  return act.gain() * sigma(x, act) * sigma_complement(x, act);
}

double activate(double x, const Activation& act) {
  return act.is_sigmoid() ? sigma(x, act) : static_cast<double>(theta(x));
}

double activate_prime(double x, const Activation& act) {
  if (!act.is_sigmoid()) {
    throw std::domain_error("Heaviside activation is non-differentiable");
  }
  return sigma_prime(x, act);
}

int and_gate(double a, double b) { return theta(theta(a) + theta(b) - 1); }

int or_gate(double a, double b) { return theta(theta(a) + theta(b)); }

}  // namespace heavistep

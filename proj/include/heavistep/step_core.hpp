// Scalar step and sigmoid primitives plus Heaviside logic gates.
//
// Convention: theta(0) == 0. Every lattice-exactness statement in this
// library depends on it.

#ifndef HEAVISTEP_STEP_CORE_HPP
#define HEAVISTEP_STEP_CORE_HPP

namespace heavistep {

enum class ActivationKind { heaviside, sigmoid };

/// Activation used by both network layers.
///
/// The sigmoid is sigma(x) = 1 / (1 + exp(-K^2 (x - xi))). The unsquared
/// form 1 / (1 + exp(-k x)) is the same family with K = sqrt(k); use
/// Activation::sigmoid_unsquared for it.
struct Activation {
  ActivationKind kind = ActivationKind::heaviside;
  double K = 1.0;   // sharpness, sigmoid only
  double xi = 0.0;  // centering shift, sigmoid only

  static Activation heaviside() { return {}; }
  static Activation sigmoid(double K, double xi = 0.0);
  static Activation sigmoid_unsquared(double k, double xi = 0.0);
  /// (1 + tanh((x - xi) / Lambda)) / 2, i.e. K^2 = 2 / Lambda.
  static Activation tanh_scale(double Lambda, double xi = 0.0);

  double gain() const { return K * K; }
  bool is_sigmoid() const { return kind == ActivationKind::sigmoid; }
};

/// 1 if x > 0, else 0. Throws std::domain_error on non-finite input.
int theta(double x);

/// Shifted sigmoid. Saturates to 0 or 1 without overflow.
double sigma(double x, const Activation& act);

/// 1 - sigma(x), evaluated without cancellation.
double sigma_complement(double x, const Activation& act);

/// d sigma / dx = K^2 sigma (1 - sigma).
double sigma_prime(double x, const Activation& act);

/// theta or sigma depending on act.kind.
double activate(double x, const Activation& act);

/// Derivative of activate; throws std::domain_error for heaviside.
double activate_prime(double x, const Activation& act);

int and_gate(double a, double b);
int or_gate(double a, double b);

}  // namespace heavistep

#endif  // HEAVISTEP_STEP_CORE_HPP

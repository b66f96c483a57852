// Trainable two-layer network
//
//   f(x) = sum_j w2_j act( sum_i w1_ji act(w0_i . x + b0_i) + b1_j ) + b2
//
// with a hand-derived gradient of the squared loss and a central-difference
// oracle for it.

#ifndef HEAVISTEP_NETWORK_HPP
#define HEAVISTEP_NETWORK_HPP

#include "heavistep/dataset.hpp"
#include "heavistep/matrix.hpp"
#include "heavistep/step_core.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace heavistep {

struct ParamShape {
  std::size_t inputs = 0;  // d
  std::size_t layer1 = 0;  // N1
  std::size_t layer2 = 0;  // N2

  /// Number of scalar parameters.
  std::size_t size() const;
  bool operator==(const ParamShape&) const = default;
};

/// Weight block shared by parameters and gradients. Flat order is
/// w0 (row-major), b0, w1 (row-major), b1, w2, b2.
struct NetworkWeights {
  Matrix w0;               // N1 x d
  std::vector<double> b0;  // N1
  Matrix w1;               // N2 x N1
  std::vector<double> b1;  // N2
  std::vector<double> w2;  // N2
  double b2 = 0.0;

  ParamShape shape() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  double norm() const;
  /// Throws std::invalid_argument on inconsistent dimensions.
  void check_consistent() const;
};

struct NetworkParams : NetworkWeights {
  Activation act;

  static NetworkParams zeros(const ParamShape& shape, const Activation& act);
  static NetworkParams from_flat(const ParamShape& shape, std::span<const double> flat,
                                 const Activation& act);
  /// Dimensions consistent and every entry finite.
  void validate() const;
};

struct ParamGradient : NetworkWeights {
  static ParamGradient zeros(const ParamShape& shape);
};

/// Human-readable name of flat parameter index, e.g. "w1[2][0]".
std::string parameter_name(const ParamShape& shape, std::size_t index);

/// Correctly rounded sum, independent of term order.
double exact_sum(std::span<const double> terms);

double forward(const NetworkParams& params, std::span<const double> x);

/// Sum of squared residuals in sample order.
double loss(const NetworkParams& params, const Dataset& data);
double loss(const NetworkParams& params, const Dataset& data,
            std::span<const std::size_t> batch);

/// Analytic gradient of loss; throws std::domain_error for Heaviside activation.
ParamGradient grad(const NetworkParams& params, const Dataset& data);
ParamGradient grad(const NetworkParams& params, const Dataset& data,
                   std::span<const std::size_t> batch);

/// Largest per-coordinate deviation between grad and a central-difference
/// estimate with step h, measured as |a - n| / max(1, |a|, |n|).
double grad_check(const NetworkParams& params, const Dataset& data, double h);

}  // namespace heavistep

#endif  // HEAVISTEP_NETWORK_HPP

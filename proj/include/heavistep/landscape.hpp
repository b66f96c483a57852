// Loss-landscape diagnostics: slices, finite-difference Hessians, canyon
// anisotropy, the closed-form identity and wavelet models, sigmoid artifact
// roots, the sigmoid-pair valley curve and the one-layer Heaviside transform.

#ifndef HEAVISTEP_LANDSCAPE_HPP
#define HEAVISTEP_LANDSCAPE_HPP

#include "heavistep/dataset.hpp"
#include "heavistep/matrix.hpp"
#include "heavistep/network.hpp"
#include "heavistep/objective.hpp"
#include "heavistep/step_core.hpp"
#include "heavistep/training.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace heavistep {

// ---------------------------------------------------------------------------
// Slices and curvature

struct AxisSpec {
  std::size_t index = 0;  // flat parameter index
  double lo = 0.0;
  double hi = 0.0;
  std::size_t resolution = 2;

  double at(std::size_t i) const;
};

struct LossSurfaceGrid {
  AxisSpec a, b;
  Matrix values;  // a.resolution x b.resolution
  std::vector<double> base;
};

/// Loss on a 2-D grid through `base`, all other parameters frozen.
LossSurfaceGrid loss_slice_2d(const Objective& objective, std::span<const double> base,
                              const AxisSpec& a, const AxisSpec& b);

/// Central differences of the analytic gradient with per-coordinate step
/// rel_step * (1 + |theta_i|), symmetrized. Throws std::domain_error on
/// non-finite entries.
Matrix hessian(const Objective& objective, std::span<const double> theta, double rel_step = 1e-4);

struct HessianReport {
  std::vector<double> eigenvalues;  // descending
  double tol = 0.0;
  std::size_t degeneracy_count = 0;  // |lambda| < tol
  /// lambda_max over the smallest eigenvalue above tol; empty when no
  /// eigenvalue exceeds tol.
  std::optional<double> anisotropy;
};

/// tol defaults to 1e-8 * max |lambda|.
HessianReport canyon_report(std::vector<double> spectrum, std::optional<double> tol = std::nullopt);

// ---------------------------------------------------------------------------
// Identity map y = W (w x - b) fitted to y = x on [0, X]

/// Integral over [0, X] of (x - W (w x - b))^2.
double identity_canyon_loss(double X, double W, double w, double b);

/// Minimum over W: b^2 X^3 / (4 (X^2 w^2 - 3 X b w + 3 b^2)).
double identity_canyon_min(double X, double w, double b);

/// Rate (2 X^3 / 3)(W^2 + w^2) at which W w - 1 decays under gradient flow.
double identity_decay_rate(double X, double W, double w);

/// identity_canyon_loss as an objective over (W, w, b).
class IdentityCanyonObjective : public Objective {
 public:
  explicit IdentityCanyonObjective(double X);
  std::size_t dimension() const override { return 3; }
  double loss(std::span<const double> theta) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;
  std::string parameter_name(std::size_t index) const override;

 private:
  double X_;
};

/// Sampled version: sum_a weight * (x_a - W (w x_a - b))^2 over inputs x_a.
/// midpoint_lattice(X, n) uses cell midpoints of [0, X] with weight X/n so
/// the sum is a quadrature of the integral above.
class IdentitySampleObjective : public Objective {
 public:
  IdentitySampleObjective(std::vector<double> inputs, double weight);
  static IdentitySampleObjective midpoint_lattice(double X, std::size_t n);

  std::size_t dimension() const override { return 3; }
  double loss(std::span<const double> theta) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;
  std::size_t term_count() const override { return inputs_.size(); }
  std::vector<double> batch_gradient(std::span<const double> theta,
                                     std::span<const std::size_t> terms) const override;
  std::string parameter_name(std::size_t index) const override;

 private:
  std::vector<double> inputs_;
  double weight_;
};

// ---------------------------------------------------------------------------
// Gaussian wavelet fit of exp(-x^2) by exp(-alpha (x - beta)^2)

/// sqrt(pi/2) + sqrt(pi/(2 alpha)) - 2 sqrt(pi/(1+alpha)) exp(-alpha beta^2/(1+alpha)).
double wavelet_loss(double alpha, double beta);

class WaveletObjective : public Objective {
 public:
  std::size_t dimension() const override { return 2; }
  double loss(std::span<const double> theta) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;
  std::string parameter_name(std::size_t index) const override;
};

// ---------------------------------------------------------------------------
// Sigmoid artifacts

struct RootScan {
  std::vector<double> roots;  // bisection-refined, ascending
  std::vector<std::pair<double, double>> brackets;
  /// Smallest distance between consecutive roots (infinity for < 2 roots).
  double min_gap = 0.0;
};

/// Sign changes of sigma(x) - x on `resolution` equispaced points of the
/// domain. Requires (K^2 / 4) * spacing <= 1.
RootScan sigmoid_artifact_roots(const Activation& act, Interval domain, std::size_t resolution);

/// Smoothed lattice identity sum_{a=0..terms-1} eps sigma(x - a eps) - x.
double smoothed_identity_error(double x, const Activation& act, double eps, int terms);

struct CurvePoint {
  double a = 0.0;
  double b = 0.0;
};

/// Points of sigma(a) + sigma(b) = sigma(a0) + sigma(b0) for `resolution`
/// values of a in a_range; b by logit inversion (complement form when the
/// level exceeds 1). Values of a without a solution are skipped.
std::vector<CurvePoint> valley_curve(const Activation& act, double a0, double b0, Interval a_range,
                                     std::size_t resolution);

/// Distance to {a >= 1, b = 1} U {a = 1, b >= 1}.
double distance_to_two_rays(double a, double b);

// ---------------------------------------------------------------------------
// Canyon hierarchy example: a 1-1-2 sigmoid network whose loss, sliced in
// its two layer-2 input weights (x, y) = w1 / 8, is
//   sum_i (s(c_i x - 10.4) + s(c_i y - 10.4) - t_i)^2.

struct FiveTermConfiguration {
  NetworkParams params;
  Dataset data;
  std::size_t dim_x = 0;  // flat index of w1[0][0]
  std::size_t dim_y = 0;  // flat index of w1[1][0]
  double weight_scale = 8.0;  // parameter value = scale * slice coordinate
};

FiveTermConfiguration five_term_configuration();

// ---------------------------------------------------------------------------
// One-layer Heaviside transform I(x) = sum_k w_k act(x - p_k), p_k = origin + k * spacing

struct TransformGrid {
  std::size_t nodes = 0;
  double origin = 0.0;
  double spacing = 1.0;

  double position(std::size_t k) const { return origin + static_cast<double>(k) * spacing; }
};

/// Squared loss of the transform weights over 1-D samples.
class TransformObjective : public Objective {
 public:
  TransformObjective(const Dataset& targets, const TransformGrid& grid, const Activation& act);
  std::size_t dimension() const override { return grid_.nodes; }
  double loss(std::span<const double> w) const override;
  std::vector<double> gradient(std::span<const double> w) const override;
  std::size_t term_count() const override { return targets_.size(); }
  std::vector<double> batch_gradient(std::span<const double> w,
                                     std::span<const std::size_t> terms) const override;

 private:
  Dataset targets_;
  TransformGrid grid_;
  Matrix basis_;  // samples x nodes
};

struct TransformFit {
  std::vector<double> positions;
  std::vector<double> weights;
  double width = 0.0;
  Trajectory trajectory;
};

/// Trains only the weights, from zero, by the given schedule.
TransformFit heaviside_transform_fit(const Dataset& targets, const TransformGrid& grid,
                                     const Activation& act, const Schedule& sched);

/// Participation ratio (sum |w|)^2 / sum w^2, in [1, N]. Throws on a zero vector.
double spectrum_width(std::span<const double> w);

}  // namespace heavistep

#endif  // HEAVISTEP_LANDSCAPE_HPP

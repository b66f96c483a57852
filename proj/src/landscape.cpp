#include "heavistep/landscape.hpp"

#include "heavistep/eigen.hpp"
#include "heavistep/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace heavistep {

double AxisSpec::at(std::size_t i) const {
  if (resolution < 2) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(resolution - 1);
}

LossSurfaceGrid loss_slice_2d(const Objective& objective, std::span<const double> base,
                              const AxisSpec& a, const AxisSpec& b) {
  const std::size_t dim = objective.dimension();
  if (base.size() != dim || a.index >= dim || b.index >= dim) {
    throw std::invalid_argument("slice axes must index valid parameters");
  }
  if (a.resolution < 1 || b.resolution < 1) throw std::invalid_argument("empty slice grid");
  LossSurfaceGrid grid{a, b, Matrix(a.resolution, b.resolution), {base.begin(), base.end()}};
  parallel_for(a.resolution, [&](std::size_t i) {
    std::vector<double> theta(base.begin(), base.end());
    theta[a.index] = a.at(i);
    for (std::size_t j = 0; j < b.resolution; ++j) {
      theta[b.index] = b.at(j);
      grid.values(i, j) = objective.loss(theta);
    }
  });
  return grid;
}

Matrix hessian(const Objective& objective, std::span<const double> theta, double rel_step) {
  const std::size_t n = objective.dimension();
  if (theta.size() != n) throw std::invalid_argument("hessian: point has the wrong dimension");
  Matrix raw(n, n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> x(theta.begin(), theta.end());
    const double h = rel_step * (1.0 + std::abs(theta[i]));
    x[i] = theta[i] + h;
    const auto up = objective.gradient(x);
    x[i] = theta[i] - h;
    const auto down = objective.gradient(x);
    for (std::size_t k = 0; k < n; ++k) raw(k, i) = (up[k] - down[k]) / (2.0 * h);
  });
  Matrix sym(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      sym(i, k) = 0.5 * (raw(i, k) + raw(k, i));
      if (!std::isfinite(sym(i, k))) throw std::domain_error("hessian has non-finite entries");
    }
  }
  return sym;
}

HessianReport canyon_report(std::vector<double> spectrum, std::optional<double> tol) {
  std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
  HessianReport report;
  double largest = 0.0;
  for (double v : spectrum) largest = std::max(largest, std::abs(v));
  report.tol = tol.value_or(1e-8 * largest);
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("canyon tolerance must be positive");
  for (double v : spectrum) {
    if (std::abs(v) < report.tol) ++report.degeneracy_count;
  }
  double smallest_above = std::numeric_limits<double>::infinity();
  for (double v : spectrum) {
    if (v > report.tol) smallest_above = std::min(smallest_above, v);
  }
  if (!spectrum.empty() && std::isfinite(smallest_above) && report.tol > 0.0) {
    report.anisotropy = spectrum.front() / smallest_above;
  }
  report.eigenvalues = std::move(spectrum);
  return report;
}

// --- identity model --------------------------------------------------------

namespace {

void require_positive_X(double X) {
  if (!(X > 0.0)) throw std::invalid_argument("training domain X must be positive");
}

}  // namespace

double identity_canyon_loss(double X, double W, double w, double b) {
  require_positive_X(X);
  // Integrand (p x + q)^2 with p = 1 - W w, q = W b.
  const double p = 1.0 - W * w;
  const double q = W * b;
  return p * p * X * X * X / 3.0 + p * q * X * X + q * q * X;
}

double identity_canyon_min(double X, double w, double b) {
  require_positive_X(X);
  const double denom = X * X * w * w - 3.0 * X * b * w + 3.0 * b * b;
  if (denom == 0.0) throw std::domain_error("identity canyon minimum: degenerate denominator (w = b = 0)");
  return b * b * X * X * X / (4.0 * denom);
}

double identity_decay_rate(double X, double W, double w) {
  require_positive_X(X);
  return 2.0 * X * X * X / 3.0 * (W * W + w * w);
}

IdentityCanyonObjective::IdentityCanyonObjective(double X) : X_(X) { require_positive_X(X); }

double IdentityCanyonObjective::loss(std::span<const double> t) const {
  return identity_canyon_loss(X_, t[0], t[1], t[2]);
}

std::vector<double> IdentityCanyonObjective::gradient(std::span<const double> t) const {
  const double W = t[0], w = t[1], b = t[2];
  const double p = 1.0 - W * w;
  const double q = W * b;
  const double dp = 2.0 * p * X_ * X_ * X_ / 3.0 + q * X_ * X_;
  const double dq = p * X_ * X_ + 2.0 * q * X_;
  return {-w * dp + b * dq, -W * dp, W * dq};
}

std::string IdentityCanyonObjective::parameter_name(std::size_t index) const {
  static const char* names[] = {"W", "w", "b"};
  return index < 3 ? names[index] : Objective::parameter_name(index);
}

IdentitySampleObjective::IdentitySampleObjective(std::vector<double> inputs, double weight)
    : inputs_(std::move(inputs)), weight_(weight) {
  if (inputs_.empty()) throw std::invalid_argument("identity model needs samples");
}

IdentitySampleObjective IdentitySampleObjective::midpoint_lattice(double X, std::size_t n) {
  require_positive_X(X);
  if (n == 0) throw std::invalid_argument("identity model needs samples");
  std::vector<double> xs(n);
  for (std::size_t a = 0; a < n; ++a) xs[a] = (static_cast<double>(a) + 0.5) * X / static_cast<double>(n);
  return IdentitySampleObjective(std::move(xs), X / static_cast<double>(n));
}

double IdentitySampleObjective::loss(std::span<const double> t) const {
  double total = 0.0;
  for (double x : inputs_) {
    const double r = x - t[0] * (t[1] * x - t[2]);
    total += weight_ * r * r;
  }
  return total;
}

std::vector<double> IdentitySampleObjective::batch_gradient(std::span<const double> t,
                                                            std::span<const std::size_t> terms) const {
  const double W = t[0], w = t[1], b = t[2];
  std::vector<double> g(3, 0.0);
  for (std::size_t idx : terms) {
    const double x = inputs_.at(idx);
    const double r = x - W * (w * x - b);
    const double c = 2.0 * weight_ * r;
    g[0] -= c * (w * x - b);
    g[1] -= c * W * x;
    g[2] += c * W;
  }
  return g;
}

std::vector<double> IdentitySampleObjective::gradient(std::span<const double> t) const {
  std::vector<std::size_t> all(inputs_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return batch_gradient(t, all);
}

std::string IdentitySampleObjective::parameter_name(std::size_t index) const {
  static const char* names[] = {"W", "w", "b"};
  return index < 3 ? names[index] : Objective::parameter_name(index);
}

// --- wavelet model ---------------------------------------------------------

double wavelet_loss(double alpha, double beta) {
  if (!(alpha > 0.0)) throw std::domain_error("wavelet_loss needs alpha > 0");
  constexpr double pi = std::numbers::pi;
  const double overlap = std::exp(-alpha * beta * beta / (1.0 + alpha));
  return std::sqrt(pi / 2.0) + std::sqrt(pi / (2.0 * alpha)) -
         2.0 * std::sqrt(pi / (1.0 + alpha)) * overlap;
}

double WaveletObjective::loss(std::span<const double> t) const { return wavelet_loss(t[0], t[1]); }

std::vector<double> WaveletObjective::gradient(std::span<const double> t) const {
  const double alpha = t[0], beta = t[1];
  if (!(alpha > 0.0)) throw std::domain_error("wavelet gradient needs alpha > 0");
  constexpr double pi = std::numbers::pi;
  const double sp = std::sqrt(pi);
  const double E = std::exp(-alpha * beta * beta / (1.0 + alpha));
  const double inv = 1.0 / (1.0 + alpha);
  const double dA = -0.5 * std::sqrt(pi / 2.0) * std::pow(alpha, -1.5);
  // B = 2 sqrt(pi) (1+alpha)^(-1/2) E
  const double dB_dalpha =
      2.0 * sp * (-0.5 * std::pow(inv, 1.5) * E - std::sqrt(inv) * E * beta * beta * inv * inv);
  const double dB_dbeta = 2.0 * sp * std::sqrt(inv) * E * (-2.0 * alpha * beta * inv);
  return {dA - dB_dalpha, -dB_dbeta};
}

std::string WaveletObjective::parameter_name(std::size_t index) const {
  return index == 0 ? "alpha" : index == 1 ? "beta" : Objective::parameter_name(index);
}

// --- sigmoid artifacts -----------------------------------------------------

RootScan sigmoid_artifact_roots(const Activation& act, Interval domain, std::size_t resolution) {
  if (!act.is_sigmoid()) throw std::invalid_argument("root scan needs a sigmoid");
  if (resolution < 2 || !(domain.hi > domain.lo)) throw std::invalid_argument("bad scan grid");
  const double dx = (domain.hi - domain.lo) / static_cast<double>(resolution - 1);
  if (act.gain() / 4.0 * dx > 1.0) {
    throw std::invalid_argument("scan grid too coarse for this sigmoid sharpness");
  }
  auto f = [&act](double x) { return sigma(x, act) - x; };
  RootScan scan;
  double x_prev = domain.lo;
  double f_prev = f(x_prev);
  for (std::size_t i = 1; i < resolution; ++i) {
    const double x = domain.lo + dx * static_cast<double>(i);
    const double fx = f(x);
    if (f_prev == 0.0) {
      scan.roots.push_back(x_prev);
      scan.brackets.emplace_back(x_prev, x_prev);
    } else if ((f_prev < 0.0) != (fx < 0.0) && fx != 0.0) {
      double lo = x_prev, hi = x, flo = f_prev;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      scan.roots.push_back(0.5 * (lo + hi));
      scan.brackets.emplace_back(x_prev, x);
    }
    x_prev = x;
    f_prev = fx;
  }
  if (f_prev == 0.0) {
    scan.roots.push_back(x_prev);
    scan.brackets.emplace_back(x_prev, x_prev);
  }
  scan.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < scan.roots.size(); ++i) {
    scan.min_gap = std::min(scan.min_gap, scan.roots[i] - scan.roots[i - 1]);
  }
  return scan;
}

double smoothed_identity_error(double x, const Activation& act, double eps, int terms) {
  double sum = 0.0;
  for (int a = 0; a < terms; ++a) sum += eps * sigma(x - a * eps, act);
  return sum - x;
}

std::vector<CurvePoint> valley_curve(const Activation& act, double a0, double b0, Interval a_range,
                                     std::size_t resolution) {
  if (!act.is_sigmoid()) throw std::invalid_argument("valley curve needs a sigmoid");
  if (resolution < 2) throw std::invalid_argument("valley curve needs resolution >= 2");
  const double level = sigma(a0, act) + sigma(b0, act);
  const double co_level = sigma_complement(a0, act) + sigma_complement(b0, act);
  // Near 2 the level itself rounds; the complement form keeps the gap.
  if (!(level > 0.0) || !(co_level > 0.0)) {
    throw std::domain_error("valley level must lie strictly inside (0, 2)");
  }
  std::vector<CurvePoint> points;
  for (std::size_t i = 0; i < resolution; ++i) {
    const double a = a_range.lo + (a_range.hi - a_range.lo) * static_cast<double>(i) /
                                      static_cast<double>(resolution - 1);
    double b;
    if (level <= 1.0) {
      // sigma(b) = level - sigma(a)
      const double p = level - sigma(a, act);
      const double one_minus_p = (1.0 - level) + sigma(a, act);
      if (!(p > 0.0) || !(one_minus_p > 0.0)) continue;
      b = act.xi + std::log(p / one_minus_p) / act.gain();
    } else {
      // 1 - sigma(b) = co_level - (1 - sigma(a))
      const double q = co_level - sigma_complement(a, act);
      const double one_minus_q = (1.0 - co_level) + sigma_complement(a, act);
      if (!(q > 0.0) || !(one_minus_q > 0.0)) continue;
      b = act.xi + std::log(one_minus_q / q) / act.gain();
    }
    if (std::isfinite(b)) points.push_back({a, b});
  }
  return points;
}

double distance_to_two_rays(double a, double b) {
  const double to_horizontal = a >= 1.0 ? std::abs(b - 1.0) : std::hypot(a - 1.0, b - 1.0);
  const double to_vertical = b >= 1.0 ? std::abs(a - 1.0) : std::hypot(a - 1.0, b - 1.0);
  return std::min(to_horizontal, to_vertical);
}

// --- five-term canyon example ------------------------------------------------

FiveTermConfiguration five_term_configuration() {
  static constexpr double slopes[] = {1.343852919, 4.000000000, 6.656147081, 7.686674218,
                                      7.934699431};
  static constexpr double targets[] = {0.0002333160548, 0.003317602160, 0.04623154732,
                                       0.1243831929, 0.1566536472};
  FiveTermConfiguration cfg;
  const auto act = Activation::sigmoid(1.0, 0.0);
  cfg.params = NetworkParams::zeros({1, 1, 2}, act);
  cfg.params.w0(0, 0) = 1.0;
  cfg.params.w1(0, 0) = cfg.weight_scale * 10.4 / 4.0;
  cfg.params.w1(1, 0) = cfg.weight_scale * 10.4 / 4.0;
  cfg.params.b1 = {-10.4, -10.4};
  cfg.params.w2 = {1.0, 1.0};
  for (std::size_t i = 0; i < 5; ++i) {
    // Layer-1 output sigma(u) must equal slope / scale.
    const double h = slopes[i] / cfg.weight_scale;
    cfg.data.samples.push_back({{std::log(h / (1.0 - h))}, targets[i]});
  }
  cfg.data.provenance = {"five-term", "canyon hierarchy slice in (w1[0][0], w1[1][0]) / 8", 0};
  cfg.dim_x = 2;
  cfg.dim_y = 3;
  return cfg;
}

// --- Heaviside transform -----------------------------------------------------

TransformObjective::TransformObjective(const Dataset& targets, const TransformGrid& grid,
                                       const Activation& act)
    : targets_(targets), grid_(grid) {
  targets_.validate();
  if (targets_.dimension() != 1) throw std::invalid_argument("transform targets must be 1-D");
  if (grid.nodes == 0) throw std::invalid_argument("transform needs at least one node");
  basis_ = Matrix(targets_.size(), grid.nodes);
  for (std::size_t a = 0; a < targets_.size(); ++a) {
    for (std::size_t k = 0; k < grid.nodes; ++k) {
      basis_(a, k) = activate(targets_.samples[a].x[0] - grid.position(k), act);
    }
  }
}

double TransformObjective::loss(std::span<const double> w) const {
  double total = 0.0;
  for (std::size_t a = 0; a < targets_.size(); ++a) {
    const auto row = basis_.row(a);
    double out = 0.0;
    for (std::size_t k = 0; k < grid_.nodes; ++k) out += w[k] * row[k];
    const double r = out - targets_.samples[a].y;
    total += r * r;
  }
  return total;
}

std::vector<double> TransformObjective::batch_gradient(std::span<const double> w,
                                                       std::span<const std::size_t> terms) const {
  std::vector<double> g(grid_.nodes, 0.0);
  for (std::size_t a : terms) {
    const auto row = basis_.row(a);
    double out = 0.0;
    for (std::size_t k = 0; k < grid_.nodes; ++k) out += w[k] * row[k];
    const double c = 2.0 * (out - targets_.samples.at(a).y);
    for (std::size_t k = 0; k < grid_.nodes; ++k) g[k] += c * row[k];
  }
  return g;
}

std::vector<double> TransformObjective::gradient(std::span<const double> w) const {
  std::vector<std::size_t> all(targets_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return batch_gradient(w, all);
}

TransformFit heaviside_transform_fit(const Dataset& targets, const TransformGrid& grid,
                                     const Activation& act, const Schedule& sched) {
  TransformObjective objective(targets, grid, act);
  TransformFit fit;
  fit.trajectory = descend(objective, std::vector<double>(grid.nodes, 0.0), sched);
  fit.weights = fit.trajectory.final_theta;
  for (std::size_t k = 0; k < grid.nodes; ++k) fit.positions.push_back(grid.position(k));
  fit.width = spectrum_width(fit.weights);
  return fit;
}

double spectrum_width(std::span<const double> w) {
  double l1 = 0.0, l2 = 0.0;
  for (double v : w) {
    l1 += std::abs(v);
    l2 += v * v;
  }
  if (l2 == 0.0) throw std::domain_error("spectrum width of a zero vector");
  return l1 * l1 / l2;
}

}  // namespace heavistep

#include "heavistep/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace heavistep {

std::size_t ParamShape::size() const {
  return layer1 * inputs + layer1 + layer2 * layer1 + layer2 + layer2 + 1;
}

ParamShape NetworkWeights::shape() const { return {w0.cols(), w0.rows(), w1.rows()}; }

void NetworkWeights::check_consistent() const {
  const auto s = shape();
  if (b0.size() != s.layer1 || w1.cols() != s.layer1 || b1.size() != s.layer2 ||
      w2.size() != s.layer2) {
    throw std::invalid_argument("network weights have inconsistent dimensions");
  }
}

std::vector<double> NetworkWeights::flatten() const {
  check_consistent();
  std::vector<double> flat;
  flat.reserve(shape().size());
  flat.insert(flat.end(), w0.data().begin(), w0.data().end());
  flat.insert(flat.end(), b0.begin(), b0.end());
  flat.insert(flat.end(), w1.data().begin(), w1.data().end());
  flat.insert(flat.end(), b1.begin(), b1.end());
  flat.insert(flat.end(), w2.begin(), w2.end());
  flat.push_back(b2);
  return flat;
}

void NetworkWeights::assign(std::span<const double> flat) {
  check_consistent();
  if (flat.size() != shape().size()) {
    throw std::invalid_argument("flat parameter vector has the wrong length");
  }
  auto it = flat.begin();
  auto take = [&it](std::span<double> dst) {
    std::copy_n(it, dst.size(), dst.begin());
    it += static_cast<std::ptrdiff_t>(dst.size());
  };
  take(w0.data());
  take(b0);
  take(w1.data());
  take(b1);
  take(w2);
  b2 = *it;
}

double NetworkWeights::norm() const {
  const auto flat = flatten();
  return std::sqrt(std::inner_product(flat.begin(), flat.end(), flat.begin(), 0.0));
}

namespace {

NetworkWeights zero_weights(const ParamShape& s) {
  NetworkWeights w;
  w.w0 = Matrix(s.layer1, s.inputs);
  w.b0.assign(s.layer1, 0.0);
  w.w1 = Matrix(s.layer2, s.layer1);
  w.b1.assign(s.layer2, 0.0);
  w.w2.assign(s.layer2, 0.0);
  w.b2 = 0.0;
  return w;
}

}  // namespace

NetworkParams NetworkParams::zeros(const ParamShape& shape, const Activation& act) {
  NetworkParams p;
  static_cast<NetworkWeights&>(p) = zero_weights(shape);
  p.act = act;
  return p;
}

NetworkParams NetworkParams::from_flat(const ParamShape& shape, std::span<const double> flat,
                                       const Activation& act) {
  auto p = zeros(shape, act);
  p.assign(flat);
  return p;
}

void NetworkParams::validate() const {
  check_consistent();
  for (double v : flatten()) {
    if (!std::isfinite(v)) throw std::invalid_argument("network parameter is not finite");
  }
}

ParamGradient ParamGradient::zeros(const ParamShape& shape) {
  ParamGradient g;
  static_cast<NetworkWeights&>(g) = zero_weights(shape);
  return g;
}

std::string parameter_name(const ParamShape& s, std::size_t index) {
  auto two = [](const char* name, std::size_t r, std::size_t c) {
    return std::string(name) + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
  };
  auto one = [](const char* name, std::size_t i) {
    return std::string(name) + "[" + std::to_string(i) + "]";
  };
  if (index < s.layer1 * s.inputs) return two("w0", index / s.inputs, index % s.inputs);
  index -= s.layer1 * s.inputs;
  if (index < s.layer1) return one("b0", index);
  index -= s.layer1;
  if (index < s.layer2 * s.layer1) return two("w1", index / s.layer1, index % s.layer1);
  index -= s.layer2 * s.layer1;
  if (index < s.layer2) return one("b1", index);
  index -= s.layer2;
  if (index < s.layer2) return one("w2", index);
  index -= s.layer2;
  if (index == 0) return "b2";
  throw std::out_of_range("parameter index out of range");
}

double exact_sum(std::span<const double> terms) {
  // Shewchuk partials with a correctly rounded final pass.
  std::vector<double> partials;
  for (double x : terms) {
    std::size_t i = 0;
    for (double y : partials) {
      if (std::abs(x) < std::abs(y)) std::swap(x, y);
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) partials[i++] = lo;
      x = hi;
    }
    partials.resize(i);
    partials.push_back(x);
  }
  std::size_t n = partials.size();
  if (n == 0) return 0.0;
  double hi = partials[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials[--n];
    hi = x + y;
    const double yr = hi - x;
    lo = y - yr;
    if (lo != 0.0) break;
  }
  if (n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

namespace {

// Per-sample forward state reused across samples.
struct Activations {
  std::vector<double> z1, h1, z2, h2, terms;
  double out = 0.0;
};

void run_forward(const NetworkParams& p, std::span<const double> x, Activations& a) {
  const auto s = p.shape();
  if (x.size() != s.inputs) throw std::invalid_argument("input dimension mismatch");
  a.z1.resize(s.layer1);
  a.h1.resize(s.layer1);
  a.z2.resize(s.layer2);
  a.h2.resize(s.layer2);
  for (std::size_t i = 0; i < s.layer1; ++i) {
    double z = p.b0[i];
    const auto row = p.w0.row(i);
    for (std::size_t k = 0; k < s.inputs; ++k) z += row[k] * x[k];
    a.z1[i] = z;
    a.h1[i] = activate(z, p.act);
  }
  for (std::size_t j = 0; j < s.layer2; ++j) {
    const auto row = p.w1.row(j);
    a.terms.assign(s.layer1 + 1, 0.0);
    for (std::size_t i = 0; i < s.layer1; ++i) a.terms[i] = row[i] * a.h1[i];
    a.terms[s.layer1] = p.b1[j];
    a.z2[j] = exact_sum(a.terms);
    a.h2[j] = activate(a.z2[j], p.act);
  }
  a.terms.assign(s.layer2 + 1, 0.0);
  for (std::size_t j = 0; j < s.layer2; ++j) a.terms[j] = p.w2[j] * a.h2[j];
  a.terms[s.layer2] = p.b2;
  a.out = exact_sum(a.terms);
}

void check_data(const NetworkParams& p, const Dataset& data) {
  if (data.empty()) throw std::invalid_argument("loss of an empty dataset");
  if (data.dimension() != p.shape().inputs) {
    throw std::invalid_argument("dataset dimension does not match network inputs");
  }
}

std::vector<std::size_t> all_indices(const Dataset& data) {
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

double forward(const NetworkParams& params, std::span<const double> x) {
  params.check_consistent();
  Activations a;
  run_forward(params, x, a);
  return a.out;
}

double loss(const NetworkParams& params, const Dataset& data) {
  return loss(params, data, all_indices(data));
}

double loss(const NetworkParams& params, const Dataset& data, std::span<const std::size_t> batch) {
  params.check_consistent();
  check_data(params, data);
  Activations a;
  double total = 0.0;
  for (std::size_t idx : batch) {
    const auto& s = data.samples.at(idx);
    run_forward(params, s.x, a);
    const double r = a.out - s.y;
    total += r * r;
  }
  return total;
}

ParamGradient grad(const NetworkParams& params, const Dataset& data) {
  return grad(params, data, all_indices(data));
}

ParamGradient grad(const NetworkParams& params, const Dataset& data,
                   std::span<const std::size_t> batch) {
  if (!params.act.is_sigmoid()) {
    throw std::domain_error("gradient requested for a non-differentiable Heaviside network");
  }
  params.check_consistent();
  check_data(params, data);
  const auto s = params.shape();
  auto g = ParamGradient::zeros(s);
  Activations a;
  std::vector<double> delta2(s.layer2), delta1(s.layer1);
  for (std::size_t idx : batch) {
    const auto& sample = data.samples.at(idx);
    run_forward(params, sample.x, a);
    const double dout = 2.0 * (a.out - sample.y);
    g.b2 += dout;
    for (std::size_t j = 0; j < s.layer2; ++j) {
      g.w2[j] += dout * a.h2[j];
      delta2[j] = dout * params.w2[j] * sigma_prime(a.z2[j], params.act);
      g.b1[j] += delta2[j];
      auto grow = g.w1.row(j);
      for (std::size_t i = 0; i < s.layer1; ++i) grow[i] += delta2[j] * a.h1[i];
    }
    for (std::size_t i = 0; i < s.layer1; ++i) {
      double back = 0.0;
      for (std::size_t j = 0; j < s.layer2; ++j) back += params.w1(j, i) * delta2[j];
      delta1[i] = back * sigma_prime(a.z1[i], params.act);
      g.b0[i] += delta1[i];
      auto grow = g.w0.row(i);
      for (std::size_t k = 0; k < s.inputs; ++k) grow[k] += delta1[i] * sample.x[k];
    }
  }
  return g;
}

double grad_check(const NetworkParams& params, const Dataset& data, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check step must be positive");
  const auto analytic = grad(params, data).flatten();
  auto flat = params.flatten();
  const auto shape = params.shape();
  double worst = 0.0;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double saved = flat[k];
    flat[k] = saved + h;
    const double up = loss(NetworkParams::from_flat(shape, flat, params.act), data);
    flat[k] = saved - h;
    const double down = loss(NetworkParams::from_flat(shape, flat, params.act), data);
    flat[k] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double scale = std::max({1.0, std::abs(analytic[k]), std::abs(numeric)});
    worst = std::max(worst, std::abs(analytic[k] - numeric) / scale);
  }
  return worst;
}

}  // namespace heavistep

// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (capped at 1).

#include "heavistep/determinant.hpp"
#include "heavistep/eigen.hpp"
#include "heavistep/elementary_ops.hpp"
#include "heavistep/landscape.hpp"
#include "heavistep/network.hpp"
#include "heavistep/polynet.hpp"
#include "heavistep/rng.hpp"
#include "heavistep/training.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace heavistep;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

std::uint64_t stream_key(std::uint64_t root, std::uint64_t stream) { return CounterRng(root).split(stream).key(); }

// Every lattice point of the box [0, hi_0] x ... x [0, hi_{d-1}].
std::vector<std::vector<Rational>> lattice_points(const std::vector<Rational>& hi) {
  std::vector<std::vector<Rational>> points{{}};
  for (const auto& h : hi) {
    std::vector<std::vector<Rational>> next;
    for (const auto& p : points) {
      for (std::int64_t k = 0; Rational(k) <= h; ++k) {
        auto q = p;
        q.push_back(Rational(k));
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

Outcome lattice_exactness() {
  std::size_t checked = 0;
  const auto id = identity_params(11);
  for (int x = 0; x <= 10; ++x) {
    const std::vector<Rational> in{Rational(x)};
    if (eval_step(id, in) != Rational(x)) return {false, "identity net wrong at " + std::to_string(x)};
    ++checked;
  }
  const LatticeSpec m13(13);
  for (int x = 0; x <= 12; ++x) {
    for (int y = 0; y <= 12; ++y) {
      if (multiply(x, y, m13) != double(x * y)) {
        return {false, "multiply wrong at " + std::to_string(x) + "," + std::to_string(y)};
      }
      ++checked;
    }
  }
  CounterRng rng(stream_key(1, 1));
  for (int i = 0; i < 50; ++i) {
    const int vars = 1 + static_cast<int>(rng.below(3));
    Polynomial poly(vars);
    const int terms = 1 + static_cast<int>(rng.below(4));
    for (int t = 0; t < terms; ++t) {
      Polynomial::Exponents e(vars, 0);
      const int degree = static_cast<int>(rng.below(4));
      for (int k = 0; k < degree; ++k) ++e[rng.below(vars)];
      const auto num = static_cast<std::int64_t>(rng.below(11)) - 5;
      poly.add_term(e, Rational(num == 0 ? 1 : num, 1 + static_cast<std::int64_t>(rng.below(3))));
    }
    if (poly.empty()) poly.add_term(Polynomial::Exponents(vars, 0), Rational(1));
    const auto net = heavisidize(poly, LatticeSpec(5));
    for (const auto& p : lattice_points(net.valid_domain)) {
      if (eval_step(net, p) != poly.evaluate(std::span<const Rational>(p))) {
        return {false, "polynomial " + poly.to_string() + " differs"};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " lattice points exact"};
}

Outcome determinant_ansatz() {
  const auto net2 = det_ansatz(2, LatticeSpec(4));
  std::size_t checked = 0;
  for (int code = 0; code < 256; ++code) {
    std::vector<std::int64_t> e(4);
    std::vector<Rational> x(4);
    for (int i = 0; i < 4; ++i) {
      e[i] = (code >> (2 * i)) & 3;
      x[i] = Rational(e[i]);
    }
    if (eval_step(net2, x) != Rational(cofactor_determinant(e, 2))) return {false, "2x2 mismatch"};
    ++checked;
  }
  const auto net3 = det_ansatz(3, LatticeSpec(4));
  CounterRng rng(stream_key(2, 1));
  for (int m = 0; m < 200; ++m) {
    std::vector<std::int64_t> e(9);
    std::vector<Rational> x(9);
    for (int i = 0; i < 9; ++i) {
      e[i] = static_cast<std::int64_t>(rng.below(5));
      x[i] = Rational(e[i]);
    }
    if (eval_step(net3, x) != Rational(cofactor_determinant(e, 3))) return {false, "3x3 mismatch"};
    ++checked;
  }
  return {true, std::to_string(checked) + " matrices exact"};
}

Outcome canyon_bottom() {
  const double X = 2.0, w = 1.3, b = 0.7;
  // Golden-section search over W on a bracket far wider than the minimizer.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -100.0, hi = 100.0;
  for (int it = 0; it < 300; ++it) {
    const double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    if (identity_canyon_loss(X, c, w, b) < identity_canyon_loss(X, d, w, b)) hi = d;
    else lo = c;
  }
  const double numeric = identity_canyon_loss(X, 0.5 * (lo + hi), w, b);
  const double closed = identity_canyon_min(X, w, b);
  const double rel = std::abs(numeric - closed) / closed;
  const double zero = identity_canyon_min(X, w, 0.0);
  return {rel <= 1e-8 && zero == 0.0,
          "min = " + fmt(closed) + ", relative error " + fmt(rel) + ", b=0 gives " + fmt(zero)};
}

Outcome decay_rate() {
  const double X = 1.0, W0 = 1.3, w0 = 1.0;
  // Midpoint lattice data on [0, X]; b stays frozen at 0.
  const auto obj = IdentitySampleObjective::midpoint_lattice(X, 1000);
  Schedule s;
  s.eta = 1e-3;
  s.steps = 4000;
  s.frozen = {false, false, true};
  s.keep_params = true;
  const auto traj = descend(obj, {W0, w0, 0.0}, s);
  if (traj.aborted) return {false, "descent aborted"};
  const double r0 = std::abs(W0 * w0 - 1.0);
  double predicted_sum = 0.0;
  for (const auto& rec : traj.records) {
    const auto& p = *rec.params;
    predicted_sum += identity_decay_rate(X, p[0], p[1]);
    const double r = std::abs(p[0] * p[1] - 1.0);
    if (rec.step > 0 && r <= r0 / 10.0) {
      const double measured = std::log(r0 / r) / (s.eta * static_cast<double>(rec.step));
      const double predicted = predicted_sum / static_cast<double>(rec.step + 1);
      const double dev = std::abs(measured - predicted) / predicted;
      return {dev <= 0.15, "measured " + fmt(measured) + " vs (2/3)(W^2+w^2) = " + fmt(predicted) + " over " +
                               std::to_string(rec.step) + " steps, deviation " + fmt(100 * dev) + "%"};
    }
  }
  return {false, "no decade of decay within " + std::to_string(s.steps) + " steps"};
}

double identity_anisotropy(double X) {
  const std::vector<double> t{1.0, 1.0, 0.0};
  return canyon_report(eigen_spectrum(hessian(IdentityCanyonObjective(X), t))).anisotropy.value_or(0.0);
}

Outcome anisotropy_growth() {
  const double a5 = identity_anisotropy(5.0), a10 = identity_anisotropy(10.0);
  return {a10 > 100.0 && a10 >= 3.0 * a5,
          "X=5: " + fmt(a5) + ", X=10: " + fmt(a10) + ", growth " + fmt(a10 / a5) + "x"};
}

Outcome wavelet_contrast() {
  WaveletObjective obj;
  Schedule s;
  s.eta = 0.1;
  s.steps = 3000;
  s.snapshot_every = 0;
  const auto traj = descend(obj, {2.0, 0.5}, s);
  if (traj.aborted) return {false, "descent aborted"};
  const auto& m = traj.final_theta;
  const double dist = std::hypot(m[0] - 1.0, m[1]);
  const auto r = canyon_report(eigen_spectrum(hessian(obj, m)));
  const double an = r.anisotropy.value_or(INFINITY);
  return {dist <= 1e-3 && an < 10.0, "distance to (1,0) " + fmt(dist) + ", anisotropy " + fmt(an)};
}

Outcome smoothing_artifacts() {
  const Interval domain{-1.0, 2.0};
  const auto low = sigmoid_artifact_roots(Activation::sigmoid(3.0, 0.2 / 3.0), domain, 30001).roots.size();
  const auto high = sigmoid_artifact_roots(Activation::sigmoid(3.0, 1.1 / 3.0), domain, 30001).roots.size();
  return {low == 1 && high == 3,
          "xi=0.2/3: " + std::to_string(low) + " root(s), xi=1.1/3: " + std::to_string(high) + " root(s)"};
}

Outcome gradient_oracle() {
  CounterRng rng(stream_key(8, 1));
  double worst = 0.0;
  for (int c = 0; c < 20; ++c) {
    const ParamShape shape{1 + rng.below(3), 1 + rng.below(6), 1 + rng.below(6)};
    const auto act = Activation::sigmoid(rng.uniform(0.5, 3.0), rng.uniform(-0.5, 0.5));
    auto params = NetworkParams::zeros(shape, act);
    auto flat = params.flatten();
    for (auto& v : flat) v = rng.uniform(-1.0, 1.0);
    params.assign(flat);
    Dataset data;
    for (int i = 0; i < 10; ++i) {
      Sample smp;
      for (std::size_t k = 0; k < shape.inputs; ++k) smp.x.push_back(rng.uniform(-2.0, 2.0));
      smp.y = rng.uniform(-2.0, 2.0);
      data.samples.push_back(std::move(smp));
    }
    worst = std::max(worst, grad_check(params, data, 1e-5));
  }
  return {worst < 1e-6, "max relative error " + fmt(worst) + " over 20 configurations"};
}

Outcome ansatz_vs_random() {
  const auto act = Activation::sigmoid(4.0, 0.25);
  struct Case {
    int n;
    int M;
  };
  std::string detail;
  bool pass = true;
  for (const Case cs : {Case{1, 6}, Case{2, 4}}) {
    const auto net = det_ansatz(cs.n, LatticeSpec(cs.M));
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto data = gen_det_dataset(50, cs.n, cs.M, stream_key(seed, 1));
      const auto ansatz = init_params(net.shape(), AnsatzInit{net, act});
      const double ansatz_loss = loss(ansatz, data);
      const auto random = init_params(net.shape(), RandomInit{0.1, stream_key(seed, 2), act});
      Schedule s;
      s.eta = 1e-3;
      s.steps = 2000;
      s.snapshot_every = 0;
      const auto traj = descend(random, data, s);
      const double random_loss = traj.aborted ? INFINITY : traj.records.back().loss;
      pass = pass && ansatz_loss < random_loss;
      detail += (detail.empty() ? "" : "; ") + std::to_string(cs.n) + "x" + std::to_string(cs.n) + " seed " +
                std::to_string(seed) + ": " + fmt(ansatz_loss) + " < " + fmt(random_loss);
    }
  }
  return {pass, detail};
}

Outcome holdout_mismatch() {
  const auto act = Activation::sigmoid(4.0, 0.25);
  const auto shape = det_ansatz(2, LatticeSpec(4)).shape();
  int worse = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto train = gen_det_dataset(50, 2, 4, stream_key(seed, 1));
    const auto test = gen_det_dataset(50, 2, 4, stream_key(seed, 4));
    const auto params = init_params(shape, RandomInit{0.1, stream_key(seed, 2), act});
    Schedule s;
    s.eta = 1e-3;
    s.steps = 2000;
    s.snapshot_every = 0;
    const auto traj = descend(params, train, s);
    if (traj.aborted) {
      detail += " seed " + std::to_string(seed) + " aborted;";
      continue;
    }
    const auto h = holdout_eval(*traj.final_params, train, test);
    worse += h.test_loss > h.train_loss;
    detail += " " + fmt(h.train_loss) + "/" + fmt(h.test_loss) + ";";
  }
  return {worse >= 8, std::to_string(worse) + " of 10 seeds with test > train (train/test:" + detail + ")"};
}

Outcome gauge_equivalence() {
  const int M = 8;
  const auto base = identity_params(M);
  for (int c = 0; c < M; ++c) {
    const auto shifted = shift_equivalent(base, c);
    for (const auto& p : lattice_points(base.valid_domain)) {
      if (eval_step(shifted, p) != eval_step(base, p)) return {false, "shift " + std::to_string(c) + " differs"};
    }
  }
  const auto smooth = embed(base, Activation::sigmoid(12.0, 0.5));
  Dataset data;
  for (const auto& p : lattice_points(base.valid_domain)) data.samples.push_back({{to_double(p[0])}, to_double(p[0])});
  const double g = grad(smooth, data).norm();
  return {g < 1e-6, "all shifts c < " + std::to_string(M) + " agree; smoothed gradient norm " + fmt(g)};
}

double transform_width(std::size_t N, double hi, const std::function<double(double)>& f) {
  const double eps = hi / static_cast<double>(N - 1);
  const auto act = Activation::sigmoid(std::sqrt(40.0 / eps), eps / 2.0);
  Dataset data;
  for (std::size_t a = 0; a < N; ++a) {
    const double x = static_cast<double>(a) * eps;
    data.samples.push_back({{x}, f(x)});
  }
  Schedule s;
  s.eta = 1e-3;
  s.steps = 100000;
  s.snapshot_every = 0;
  const auto fit = heaviside_transform_fit(data, {N, -eps, eps}, act, s);
  return fit.trajectory.aborted ? NAN : fit.width;
}

Outcome transform_width_trend() {
  const std::size_t N = 40;
  const double id = transform_width(N, double(N - 1), [](double x) { return x; });
  const double cst = transform_width(N, double(N - 1), [](double) { return 1.0; });
  std::vector<double> widths;
  for (double omega : {0.5, 1.0, 2.0, 4.0}) {
    widths.push_back(transform_width(N, 10.0, [omega](double x) { return std::sin(omega * x); }));
  }
  std::size_t inversions = 0;
  for (std::size_t i = 1; i < widths.size(); ++i) inversions += widths[i] < widths[i - 1];
  const bool strictly_decreasing = inversions == widths.size() - 1;
  std::string detail = "identity " + fmt(id) + ", constant " + fmt(cst) + ", sin widths";
  for (double w : widths) detail += " " + fmt(w);
  detail += " (" + std::to_string(inversions) + " inversion(s))";
  return {id >= 0.9 * N && cst <= 0.1 * N && !strictly_decreasing && inversions <= 1, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"lattice exactness", lattice_exactness},
      {"determinant ansatz", determinant_ansatz},
      {"canyon bottom formula", canyon_bottom},
      {"decay-rate law", decay_rate},
      {"anisotropy growth", anisotropy_growth},
      {"wavelet contrast", wavelet_contrast},
      {"smoothing artifacts", smoothing_artifacts},
      {"gradient oracle", gradient_oracle},
      {"ansatz vs random initialization", ansatz_vs_random},
      {"hold-out mismatch", holdout_mismatch},
      {"gauge equivalence", gauge_equivalence},
      {"spectrum-width trend", transform_width_trend},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

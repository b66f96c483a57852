#include "heavistep/training.hpp"

#include "heavistep/determinant.hpp"
#include "heavistep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace heavistep {

namespace {

std::vector<std::size_t> draw_without_replacement(CounterRng rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

double masked_norm(std::span<const double> g, const std::vector<bool>& frozen) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (frozen.empty() || !frozen[i]) s += g[i] * g[i];
  }
  return std::sqrt(s);
}

}  // namespace

std::vector<std::size_t> batch_indices(const Schedule& sched, std::size_t term_count,
                                       std::size_t step) {
  const CounterRng root(sched.seed);
  switch (sched.mode) {
    case DescentMode::full: {
      std::vector<std::size_t> all(term_count);
      std::iota(all.begin(), all.end(), std::size_t{0});
      return all;
    }
    case DescentMode::minibatch:
      return draw_without_replacement(root.split(step), term_count, sched.batch);
    case DescentMode::per_sample: {
      const std::size_t epoch = (step - 1) / term_count;
      const auto order = draw_without_replacement(root.split(epoch), term_count, term_count);
      return {order[(step - 1) % term_count]};
    }
  }
  throw std::logic_error("unknown descent mode");
}

Trajectory descend(const Objective& objective, std::vector<double> theta, const Schedule& sched) {
  const std::size_t dim = objective.dimension();
  if (theta.size() != dim) throw std::invalid_argument("initial point has the wrong dimension");
  if (!(sched.eta > 0.0)) throw std::invalid_argument("step size eta must be positive");
  if (!sched.frozen.empty() && sched.frozen.size() != dim) {
    throw std::invalid_argument("freeze mask has the wrong length");
  }
  const std::size_t terms = objective.term_count();
  if (sched.mode == DescentMode::minibatch && (sched.batch == 0 || sched.batch > terms)) {
    throw std::invalid_argument("minibatch size must be in [1, dataset size]");
  }
  if (sched.mode != DescentMode::full && terms < 1) {
    throw std::invalid_argument("stochastic modes need a per-sample objective");
  }
  for (double v : theta) {
    if (!std::isfinite(v)) throw std::invalid_argument("initial parameters are not finite");
  }

  Trajectory traj;
  traj.eta = sched.eta;
  std::vector<double> full_grad = objective.gradient(theta);
  double current_loss = objective.loss(theta);

  auto record = [&](std::size_t step) {
    TrajectoryRecord r;
    r.step = step;
    r.loss = current_loss;
    r.grad_norm = masked_norm(full_grad, sched.frozen);
    if (sched.keep_params) r.params = theta;
    traj.records.push_back(std::move(r));
  };
  record(0);

  const bool full = sched.mode == DescentMode::full;
  for (std::size_t step = 1; step <= sched.steps; ++step) {
    std::vector<double> g;
    if (full) {
      g = full_grad;
    } else {
      const auto batch = batch_indices(sched, terms, step);
      g = objective.batch_gradient(theta, batch);
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (sched.frozen.empty() || !sched.frozen[i]) theta[i] -= sched.eta * g[i];
    }
    current_loss = objective.loss(theta);
    const bool diverged = !std::isfinite(current_loss) || current_loss > kDivergenceLoss;
    const bool snapshot = step == sched.steps ||
                          (sched.snapshot_every > 0 && step % sched.snapshot_every == 0);
    if (full || snapshot || diverged) {
      if (diverged) {
        full_grad.assign(dim, std::numeric_limits<double>::quiet_NaN());
      } else {
        full_grad = objective.gradient(theta);
      }
    }
    if (diverged) {
      traj.aborted = true;
      std::ostringstream msg;
      msg << "divergence at step " << step << ": loss = " << current_loss;
      traj.abort_reason = msg.str();
      record(step);
      break;
    }
    if (snapshot) record(step);
  }
  traj.final_theta = std::move(theta);
  return traj;
}

Trajectory descend(const NetworkParams& params0, const Dataset& data, const Schedule& sched) {
  if (!params0.act.is_sigmoid()) {
    throw std::domain_error("descent needs a differentiable (sigmoid) activation");
  }
  NetworkObjective objective(params0, data);
  auto traj = descend(objective, objective.initial(), sched);
  traj.final_params = objective.params_at(traj.final_theta);
  return traj;
}

Dataset gen_poly_dataset(const Polynomial& poly, const std::vector<Interval>& domain,
                         std::size_t n, GridKind grid, std::uint64_t seed) {
  const auto vars = static_cast<std::size_t>(poly.num_vars());
  if (domain.size() != vars) throw std::invalid_argument("domain needs one interval per variable");
  for (const auto& iv : domain) {
    if (!(iv.lo <= iv.hi)) throw std::invalid_argument("empty domain interval");
  }
  Dataset data;
  std::ostringstream desc;
  desc << "poly=" << poly.to_string() << " grid=" << (grid == GridKind::integer ? "integer" : "uniform_real")
       << " n=" << n << " domain=";
  for (const auto& iv : domain) desc << "[" << iv.lo << "," << iv.hi << "]";
  data.provenance = {"poly", desc.str(), seed};
  CounterRng rng(seed);

  if (grid == GridKind::uniform_real) {
    for (std::size_t a = 0; a < n; ++a) {
      Sample s;
      for (const auto& iv : domain) s.x.push_back(rng.uniform(iv.lo, iv.hi));
      s.y = poly.evaluate(std::span<const double>(s.x));
      data.samples.push_back(std::move(s));
    }
    return data;
  }

  std::vector<std::int64_t> lo, count;
  std::size_t total = 1;
  for (const auto& iv : domain) {
    const auto first = static_cast<std::int64_t>(std::ceil(iv.lo));
    const auto last = static_cast<std::int64_t>(std::floor(iv.hi));
    if (last < first) throw std::invalid_argument("domain interval contains no integer");
    lo.push_back(first);
    count.push_back(last - first + 1);
    total *= static_cast<std::size_t>(last - first + 1);
  }
  if (n > total) {
    throw std::invalid_argument("requested more integer samples than lattice points");
  }
  std::vector<std::size_t> picks;
  if (n == total) {
    picks.resize(total);
    std::iota(picks.begin(), picks.end(), std::size_t{0});
  } else {
    // Distinct lattice indices by rejection; fine for desk-scale lattices.
    std::set<std::size_t> seen;
    while (picks.size() < n) {
      const auto k = static_cast<std::size_t>(rng.below(total));
      if (seen.insert(k).second) picks.push_back(k);
    }
  }
  for (std::size_t k : picks) {
    std::vector<Rational> point(vars);
    std::size_t rest = k;
    for (std::size_t i = vars; i-- > 0;) {
      point[i] = lo[i] + static_cast<std::int64_t>(rest % static_cast<std::size_t>(count[i]));
      rest /= static_cast<std::size_t>(count[i]);
    }
    Sample s;
    for (const auto& r : point) s.x.push_back(to_double(r));
    s.y = to_double(poly.evaluate(std::span<const Rational>(point)));
    data.samples.push_back(std::move(s));
  }
  return data;
}

Dataset gen_det_dataset(std::size_t n_matrices, int size, int entry_bound, std::uint64_t seed) {
  if (size < 1 || size > 3) throw std::invalid_argument("determinant size must be 1, 2 or 3");
  if (entry_bound < 1) throw std::invalid_argument("entry bound must be >= 1");
  Dataset data;
  std::ostringstream desc;
  desc << "det size=" << size << " entries=[0," << entry_bound << ") n=" << n_matrices;
  data.provenance = {"det", desc.str(), seed};
  CounterRng rng(seed);
  const auto entries = static_cast<std::size_t>(size * size);
  std::vector<std::int64_t> m(entries);
  for (std::size_t a = 0; a < n_matrices; ++a) {
    Sample s;
    for (auto& v : m) {
      v = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(entry_bound)));
      s.x.push_back(static_cast<double>(v));
    }
    s.y = static_cast<double>(cofactor_determinant(m, size));
    data.samples.push_back(std::move(s));
  }
  return data;
}

NetworkParams init_params(const ParamShape& dims, const InitScheme& scheme) {
  if (const auto* r = std::get_if<RandomInit>(&scheme)) {
    if (r->scale < 0.0) throw std::invalid_argument("random init scale must be >= 0");
    CounterRng rng(r->seed);
    std::vector<double> flat(dims.size());
    for (auto& v : flat) v = r->scale == 0.0 ? 0.0 : rng.uniform(-r->scale, r->scale);
    return NetworkParams::from_flat(dims, flat, r->act);
  }
  const auto& a = std::get<AnsatzInit>(scheme);
  if (!(a.net.shape() == dims)) {
    throw std::invalid_argument("ansatz network shape does not match requested dimensions");
  }
  return embed(a.net, a.act);
}

HoldoutResult holdout_eval(const NetworkParams& params, const Dataset& train, const Dataset& test) {
  return {loss(params, train), loss(params, test)};
}

std::vector<GrowthStage> grow_train(const NetworkParams& params0, const Dataset& data,
                                    const std::vector<std::size_t>& sizes, const Schedule& sched) {
  std::vector<GrowthStage> stages;
  NetworkParams current = params0;
  for (std::size_t n : sizes) {
    if (n == 0 || n > data.size()) throw std::invalid_argument("growth stage size out of range");
    Dataset prefix;
    prefix.provenance = data.provenance;
    prefix.samples.assign(data.samples.begin(), data.samples.begin() + static_cast<std::ptrdiff_t>(n));
    auto traj = descend(current, prefix, sched);
    const auto before = current.flatten();
    const auto after = traj.final_params->flatten();
    double drift = 0.0;
    for (std::size_t i = 0; i < before.size(); ++i) drift += (after[i] - before[i]) * (after[i] - before[i]);
    stages.push_back({n, traj.records.back().loss, std::sqrt(drift), traj.aborted});
    current = *traj.final_params;
    if (traj.aborted) break;
  }
  return stages;
}

}  // namespace heavistep

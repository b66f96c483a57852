// Steepest descent (explicit Euler, t = steps * eta), dataset generators,
// initialization schemes and hold-out evaluation.

#ifndef HEAVISTEP_TRAINING_HPP
#define HEAVISTEP_TRAINING_HPP

#include "heavistep/dataset.hpp"
#include "heavistep/network.hpp"
#include "heavistep/objective.hpp"
#include "heavistep/polynet.hpp"
#include "heavistep/polynomial.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace heavistep {

inline constexpr double kDivergenceLoss = 1e12;

enum class DescentMode { full, minibatch, per_sample };

struct Schedule {
  DescentMode mode = DescentMode::full;
  std::size_t batch = 0;  // k, minibatch only
  double eta = 1e-3;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  /// Record every this many steps (0: initial and final only).
  std::size_t snapshot_every = 1;
  bool keep_params = false;
  /// Optional per-parameter mask; frozen parameters never move.
  std::vector<bool> frozen;
};

struct TrajectoryRecord {
  std::size_t step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;  // over trainable coordinates, full objective
  std::optional<std::vector<double>> params;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::vector<double> final_theta;
  std::optional<NetworkParams> final_params;
  double eta = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

/// Descent on any objective. Minibatches are drawn without replacement from
/// stream split(step) of CounterRng(seed); per-sample mode walks a
/// permutation drawn from stream split(epoch). Aborts when the loss exceeds
/// kDivergenceLoss or stops being finite.
Trajectory descend(const Objective& objective, std::vector<double> theta0, const Schedule& sched);

/// Network convenience wrapper; requires a sigmoid activation.
Trajectory descend(const NetworkParams& params0, const Dataset& data, const Schedule& sched);

/// Indices used at a given step (1-based) for minibatch or per-sample mode.
std::vector<std::size_t> batch_indices(const Schedule& sched, std::size_t term_count,
                                       std::size_t step);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class GridKind { integer, uniform_real };

/// Integer grid: when n equals the number of lattice points they are listed
/// in lexicographic order, otherwise n distinct points are drawn. Uniform
/// grid: n points drawn uniformly from the box. Targets are poly(x).
Dataset gen_poly_dataset(const Polynomial& poly, const std::vector<Interval>& domain,
                         std::size_t n, GridKind grid, std::uint64_t seed);

/// Random size x size integer matrices with entries in [0, entry_bound) and
/// exact determinant targets.
Dataset gen_det_dataset(std::size_t n_matrices, int size, int entry_bound, std::uint64_t seed);

struct RandomInit {
  double scale = 0.1;
  std::uint64_t seed = 0;
  Activation act;
};

struct AnsatzInit {
  StepNet net;
  Activation act;
};

using InitScheme = std::variant<RandomInit, AnsatzInit>;

/// Random: i.i.d. uniform in [-scale, scale] in flat parameter order.
/// Ansatz: embed(net, act). Throws std::invalid_argument on a shape mismatch.
NetworkParams init_params(const ParamShape& dims, const InitScheme& scheme);

struct HoldoutResult {
  double train_loss = 0.0;
  double test_loss = 0.0;
};

HoldoutResult holdout_eval(const NetworkParams& params, const Dataset& train, const Dataset& test);

/// Exploratory: train on growing prefixes of `data`, each stage continuing
/// from the previous parameters. No convergence claim is attached.
struct GrowthStage {
  std::size_t samples = 0;
  double loss = 0.0;
  double drift = 0.0;  // parameter distance from the previous stage
  bool aborted = false;
};

std::vector<GrowthStage> grow_train(const NetworkParams& params0, const Dataset& data,
                                    const std::vector<std::size_t>& sizes, const Schedule& sched);

}  // namespace heavistep

#endif  // HEAVISTEP_TRAINING_HPP

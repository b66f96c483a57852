#include "heavistep/determinant.hpp"
#include "heavistep/landscape.hpp"
#include "heavistep/training.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace heavistep;

namespace {

Dataset lattice_identity(int M) {
  Dataset d;
  for (int x = 0; x <= M; ++x) d.samples.push_back({{static_cast<double>(x)}, static_cast<double>(x)});
  return d;
}

}  // namespace

TEST_CASE("zero-step schedule records only the initial state") {
  const auto params = embed(identity_params(4), Activation::sigmoid(4.0, 0.25));
  Schedule s;
  s.steps = 0;
  const auto traj = descend(params, lattice_identity(4), s);
  REQUIRE(traj.records.size() == 1);
  CHECK(traj.records[0].step == 0);
  CHECK(traj.records[0].loss == loss(params, lattice_identity(4)));
  CHECK(traj.final_params->flatten() == params.flatten());
}

TEST_CASE("full-batch descent is monotone on a convex slice") {
  IdentityCanyonObjective obj(1.0);
  Schedule s;
  s.eta = 1e-2;
  s.steps = 500;
  s.frozen = {false, true, true};
  const auto traj = descend(obj, {0.2, 1.0, 0.3}, s);
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    CHECK(traj.records[i].loss <= traj.records[i - 1].loss);
  }
  CHECK(traj.final_theta[1] == 1.0);
  CHECK(traj.final_theta[2] == 0.3);
}

TEST_CASE("per-sample descent drives the scalar model to one") {
  // y = alpha x fitted to y = x one sample at a time.
  auto obj = IdentitySampleObjective::midpoint_lattice(1.0, 16);
  Schedule s;
  s.mode = DescentMode::per_sample;
  s.eta = 0.5;
  s.steps = 4000;
  s.seed = 3;
  s.frozen = {false, true, true};
  const auto traj = descend(obj, {0.1, 1.0, 0.0}, s);
  CHECK(std::abs(traj.final_theta[0] - 1.0) < 1e-6);
}

TEST_CASE("descent is deterministic in every mode") {
  const auto params = embed(det_ansatz(2, LatticeSpec(3)), Activation::sigmoid(2.0, 0.5));
  const auto data = gen_det_dataset(20, 2, 3, 9);
  for (auto mode : {DescentMode::full, DescentMode::minibatch, DescentMode::per_sample}) {
    Schedule s;
    s.mode = mode;
    s.batch = 5;
    s.eta = 1e-3;
    s.steps = 30;
    s.seed = 42;
    const auto a = descend(params, data, s);
    const auto b = descend(params, data, s);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].loss == b.records[i].loss);
      CHECK(a.records[i].grad_norm == b.records[i].grad_norm);
    }
    CHECK(a.final_theta == b.final_theta);
  }
}

TEST_CASE("minibatches are drawn without replacement and depend on the seed") {
  Schedule s;
  s.mode = DescentMode::minibatch;
  s.batch = 8;
  s.seed = 7;
  const auto b1 = batch_indices(s, 20, 1);
  const auto b2 = batch_indices(s, 20, 2);
  CHECK(std::set<std::size_t>(b1.begin(), b1.end()).size() == 8);
  CHECK(b1 != b2);
  CHECK(b1 == batch_indices(s, 20, 1));
  s.seed = 8;
  CHECK(b1 != batch_indices(s, 20, 1));
}

TEST_CASE("per-sample order visits every sample once per epoch") {
  Schedule s;
  s.mode = DescentMode::per_sample;
  s.seed = 1;
  std::set<std::size_t> seen;
  for (std::size_t step = 1; step <= 10; ++step) seen.insert(batch_indices(s, 10, step).at(0));
  CHECK(seen.size() == 10);
}

TEST_CASE("divergence guard aborts") {
  const auto params = embed(identity_params(4), Activation::sigmoid(1.0, 0.25));
  Schedule s;
  s.eta = 1e3;
  s.steps = 200;
  const auto traj = descend(params, lattice_identity(4), s);
  CHECK(traj.aborted);
  CHECK_FALSE(traj.abort_reason.empty());
  CHECK(traj.records.size() < 201);
}

TEST_CASE("schedule validation") {
  const auto params = embed(identity_params(4), Activation::sigmoid(1.0, 0.25));
  Schedule s;
  s.eta = 0.0;
  CHECK_THROWS(descend(params, lattice_identity(4), s));
  s.eta = 1e-3;
  s.mode = DescentMode::minibatch;
  s.batch = 99;
  CHECK_THROWS(descend(params, lattice_identity(4), s));
  const auto step = to_network_params(identity_params(4), Activation::heaviside());
  CHECK_THROWS(descend(step, lattice_identity(4), Schedule{}));
}

TEST_CASE("gen_poly_dataset") {
  const auto x = Polynomial::parse("x1");
  const auto d = gen_poly_dataset(x, {{0.0, 6.0}}, 7, GridKind::integer, 0);
  REQUIRE(d.size() == 7);
  for (int i = 0; i <= 6; ++i) {
    CHECK(d.samples[static_cast<std::size_t>(i)].x[0] == i);
    CHECK(d.samples[static_cast<std::size_t>(i)].y == i);
  }
  const auto p = Polynomial::parse("x1^2+3*x1");
  const auto r = gen_poly_dataset(p, {{0.0, 5.0}}, 10, GridKind::uniform_real, 5);
  CHECK(r.size() == 10);
  for (const auto& s : r.samples) {
    CHECK(s.x[0] >= 0.0);
    CHECK(s.x[0] <= 5.0);
    CHECK(s.y == s.x[0] * s.x[0] + 3.0 * s.x[0]);
  }
  const auto again = gen_poly_dataset(p, {{0.0, 5.0}}, 10, GridKind::uniform_real, 5);
  for (std::size_t i = 0; i < 10; ++i) CHECK(again.samples[i].x == r.samples[i].x);
  const auto sub = gen_poly_dataset(p, {{0.0, 5.0}}, 4, GridKind::integer, 2);
  std::set<double> distinct;
  for (const auto& s : sub.samples) distinct.insert(s.x[0]);
  CHECK(distinct.size() == 4);
  CHECK_THROWS(gen_poly_dataset(p, {{0.0, 5.0}}, 7, GridKind::integer, 2));
  CHECK(r.provenance.seed == 5);
}

TEST_CASE("gen_det_dataset") {
  const auto d1 = gen_det_dataset(10, 1, 6, 1);
  for (const auto& s : d1.samples) CHECK(s.y == s.x[0]);
  const auto d2 = gen_det_dataset(200, 2, 4, 2);
  for (const auto& s : d2.samples) {
    CHECK(s.y >= -9);
    CHECK(s.y <= 9);
    CHECK(s.y == s.x[0] * s.x[3] - s.x[1] * s.x[2]);
  }
  const auto d3 = gen_det_dataset(400, 3, 2, 3);
  std::size_t singular = 0;
  for (const auto& s : d3.samples) {
    std::vector<std::int64_t> m(s.x.begin(), s.x.end());
    CHECK(s.y == cofactor_determinant(m, 3));
    for (double v : s.x) CHECK((v == 0.0 || v == 1.0));
    singular += s.y == 0.0;
  }
  // Roughly two thirds of random 0/1 3x3 matrices are singular.
  CHECK(singular > 200);
  CHECK(singular < 400);
  CHECK_THROWS(gen_det_dataset(5, 4, 3, 0));
}

TEST_CASE("init_params") {
  const auto net = identity_params(6);
  const auto act = Activation::sigmoid(4.0, 0.25);
  const auto ansatz = init_params(net.shape(), AnsatzInit{net, act});
  CHECK(loss(ansatz, lattice_identity(6)) < 0.5);
  const auto zero = init_params(net.shape(), RandomInit{0.0, 3, act});
  CHECK(zero.norm() == 0.0);
  const auto r1 = init_params(net.shape(), RandomInit{0.5, 1, act});
  const auto r2 = init_params(net.shape(), RandomInit{0.5, 1, act});
  CHECK(r1.flatten() == r2.flatten());
  for (double v : r1.flatten()) CHECK(std::abs(v) <= 0.5);
  CHECK_THROWS(init_params({1, 2, 3}, AnsatzInit{net, act}));
}

TEST_CASE("holdout_eval") {
  const auto step = to_network_params(det_ansatz(2, LatticeSpec(4)), Activation::heaviside());
  const auto train = gen_det_dataset(30, 2, 4, 1);
  const auto test = gen_det_dataset(30, 2, 4, 2);
  const auto exact = holdout_eval(step, train, test);
  CHECK(exact.train_loss == 0.0);
  CHECK(exact.test_loss == 0.0);
  const auto random = init_params(step.shape(), RandomInit{0.1, 5, Activation::sigmoid(1.0)});
  const auto r = holdout_eval(random, train, test);
  CHECK(r.train_loss > 10.0);
  CHECK(r.test_loss > 10.0);
  CHECK(r.train_loss / r.test_loss > 0.2);
  CHECK(r.train_loss / r.test_loss < 5.0);
}

TEST_CASE("grow_train continues from the previous stage") {
  const auto params = embed(identity_params(6), Activation::sigmoid(2.0, 0.5));
  const auto data = gen_poly_dataset(Polynomial::parse("x1"), {{0.0, 6.0}}, 7, GridKind::integer, 0);
  Schedule s;
  s.eta = 1e-3;
  s.steps = 20;
  const auto stages = grow_train(params, data, {3, 5, 7}, s);
  REQUIRE(stages.size() == 3);
  CHECK(stages[0].samples == 3);
  CHECK(stages[2].samples == 7);
  for (const auto& st : stages) CHECK(st.drift > 0.0);
  CHECK_THROWS(grow_train(params, data, {8}, s));
}

#include "heavistep/csv.hpp"
#include "heavistep/polynet.hpp"
#include "heavistep/rng.hpp"
#include "heavistep/weight_file.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>

using namespace heavistep;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("heavistep_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_number round trips") {
  CounterRng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(200)) - 100);
    const auto s = format_number(x);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(3.0) == "3");
  CHECK_THROWS_AS(format_number(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("csv layout") {
  CsvTable t({"step", "loss"});
  t.add_row({0.0, 1.5});
  t.add_row({1.0, std::numeric_limits<double>::infinity()});
  CHECK(t.str() == "step,loss\n0,1.5\n1,inf\n");
  CHECK_THROWS(t.add_row({1.0}));
}

TEST_CASE("atomic write leaves no temporary behind") {
  const auto dir = scratch_dir("atomic");
  const auto path = dir / "a.csv";
  write_atomic(path, "x\n1\n");
  write_atomic(path, "x\n2\n");
  CHECK(read_text(path) == "x\n2\n");
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    (void)entry;
    ++count;
  }
  CHECK(count == 1);
  CHECK_THROWS(read_text(dir / "missing.csv"));
}

TEST_CASE("step net round trip is exact") {
  const auto net = heavisidize(Polynomial::parse("x1^2 - 1/3*x1*x2 + 2"), LatticeSpec(4, Rational(1, 2)));
  const auto dir = scratch_dir("stepnet");
  save_step_net(dir / "n.json", net);
  const auto back = load_step_net(dir / "n.json");
  CHECK(back.w0 == net.w0);
  CHECK(back.b0 == net.b0);
  CHECK(back.w1 == net.w1);
  CHECK(back.b1 == net.b1);
  CHECK(back.w2 == net.w2);
  CHECK(back.b2 == net.b2);
  CHECK(back.spec == net.spec);
  CHECK(back.valid_domain == net.valid_domain);
  CHECK(is_step_net_json(read_text(dir / "n.json")));
}

TEST_CASE("network round trip evaluates identically") {
  CounterRng rng(11);
  auto params = NetworkParams::zeros({2, 3, 4}, Activation::sigmoid(2.5, 0.125));
  auto flat = params.flatten();
  for (auto& v : flat) v = rng.uniform(-3.0, 3.0);
  params.assign(flat);
  const auto dir = scratch_dir("network");
  save_network(dir / "p.json", params);
  const auto back = load_network(dir / "p.json");
  CHECK(back.flatten() == params.flatten());
  CHECK(back.act.K == params.act.K);
  CHECK(back.act.xi == params.act.xi);
  CHECK_FALSE(is_step_net_json(read_text(dir / "p.json")));
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x{rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)};
    CHECK(forward(back, x) == forward(params, x));
  }
}

TEST_CASE("step net loads as a heaviside network") {
  const auto net = identity_params(5);
  const auto params = network_from_json(step_net_to_json(net));
  CHECK_FALSE(params.act.is_sigmoid());
  for (int x = 0; x <= 4; ++x) {
    const std::vector<double> in{double(x)};
    CHECK(forward(params, in) == double(x));
  }
}

TEST_CASE("malformed weight files are rejected") {
  CHECK_THROWS_AS(network_from_json("{"), WeightFileError);
  CHECK_THROWS_AS(network_from_json("{\"format\": \"other\"}"), WeightFileError);
  auto text = network_to_json(NetworkParams::zeros({1, 2, 2}, Activation::sigmoid(1.0)));
  const auto pos = text.find("\"version\": 1");
  REQUIRE(pos != std::string::npos);
  CHECK_THROWS_AS(network_from_json(text.replace(pos, 12, "\"version\": 9")), WeightFileError);
  CHECK_THROWS_AS(step_net_from_json(network_to_json(NetworkParams::zeros({1, 2, 2}, Activation::sigmoid(1.0)))),
                  WeightFileError);
  const auto dir = scratch_dir("bad");
  write_atomic(dir / "b.json", "[1, 2]");
  CHECK_THROWS_AS(load_network(dir / "b.json"), WeightFileError);
}

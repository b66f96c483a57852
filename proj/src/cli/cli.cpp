#include "heavistep/cli.hpp"

#include "heavistep/csv.hpp"
#include "heavistep/determinant.hpp"
#include "heavistep/eigen.hpp"
#include "heavistep/landscape.hpp"
#include "heavistep/parallel.hpp"
#include "heavistep/polynet.hpp"
#include "heavistep/rng.hpp"
#include "heavistep/training.hpp"
#include "heavistep/weight_file.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>

namespace heavistep {

namespace {

namespace fs = std::filesystem;

// Raised for bad flag values discovered after parsing; maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Console numbers: shortest text that reads back to the same double.
std::string show(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
    }
  }
  if (values.empty()) throw UsageError(std::string("empty ") + what);
  return values;
}

Interval parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(std::string(what) + " must look like lo:hi");
  const auto lo = parse_list(text.substr(0, colon), what);
  const auto hi = parse_list(text.substr(colon + 1), what);
  if (lo.size() != 1 || hi.size() != 1 || !(lo[0] < hi[0])) {
    throw UsageError(std::string(what) + " must look like lo:hi with lo < hi");
  }
  return {lo[0], hi[0]};
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream ss;
  ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return ss.str();
}

// Shared state of one subcommand run.
struct Run {
  std::ostream& out;
  std::ostream& err;
  RunManifest manifest;
  std::string prefix;

  fs::path artifact(const std::string& suffix) {
    fs::path p = prefix + suffix;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    manifest.artifacts.push_back(p.string());
    return p;
  }
};

// Seeds of independent consumers, all derived from the single --seed flag.
struct Seeds {
  std::uint64_t root = 0;
  std::uint64_t data() const { return CounterRng(root).split(1).key(); }
  std::uint64_t init() const { return CounterRng(root).split(2).key(); }
  std::uint64_t schedule() const { return CounterRng(root).split(3).key(); }
  std::uint64_t test() const { return CounterRng(root).split(4).key(); }
};

// --- shared flag groups ------------------------------------------------------

struct TargetFlags {
  std::string poly;
  int det = 0;
  int M = 0;
  std::string eps = "1";

  void add(CLI::App* app, bool require_M = true) {
    auto* p = app->add_option("--poly", poly, "polynomial in x1..x9, e.g. \"2*x1^2+5*x1+3\"");
    auto* d = app->add_option("--det", det, "determinant of an n x n matrix (n = 1..3)")
                  ->check(CLI::Range(1, 3));
    p->excludes(d);
    auto* m = app->add_option("--M", M, "lattice truncation (terms per sum)")->check(CLI::Range(2, 1000));
    if (require_M) m->required();
    app->add_option("--eps", eps, "lattice step as integer, fraction or decimal");
  }
  bool has_target() const { return !poly.empty() || det > 0; }
  LatticeSpec spec() const {
    Rational e;
    try {
      e = parse_rational(eps);
    } catch (const std::invalid_argument& ex) {
      throw UsageError(std::string("--eps: ") + ex.what());
    }
    return LatticeSpec(M, e);
  }
  StepNet ansatz() const {
    if (!has_target()) throw UsageError("one of --poly or --det is required");
    if (det > 0) return det_ansatz(det, spec());
    return heavisidize(Polynomial::parse(poly), spec());
  }
};

struct DataFlags {
  std::size_t samples = 0;
  int entry_bound = 0;
  std::string grid = "integer";

  void add(CLI::App* app) {
    app->add_option("--samples", samples,
                     "training samples (0: full integer lattice for --poly, 50 for --det)");
    app->add_option("--entry-bound", entry_bound, "determinant entries drawn from [0, bound) (0: M)");
    app->add_option("--grid", grid, "sample grid for --poly")->check(CLI::IsMember({"integer", "real"}));
  }

  Dataset make(const TargetFlags& t, std::uint64_t seed, std::size_t override_n = 0) const {
    if (!t.has_target()) throw UsageError("one of --poly or --det is required");
    const auto spec = t.spec();
    if (t.det > 0) {
      const std::size_t n = override_n ? override_n : (samples ? samples : 50);
      return gen_det_dataset(n, t.det, entry_bound ? entry_bound : spec.M, seed);
    }
    const auto p = Polynomial::parse(t.poly);
    const double hi = spec.M * spec.step();
    std::vector<Interval> domain(static_cast<std::size_t>(p.num_vars()), Interval{0.0, hi});
    std::size_t n = override_n ? override_n : samples;
    const auto kind = grid == "real" ? GridKind::uniform_real : GridKind::integer;
    if (n == 0) {
      if (kind == GridKind::uniform_real) throw UsageError("--grid real needs --samples");
      n = 1;
      for (std::size_t i = 0; i < domain.size(); ++i) n *= static_cast<std::size_t>(std::floor(hi)) + 1;
    }
    return gen_poly_dataset(p, domain, n, kind, seed);
  }
};

struct InitFlags {
  std::string init = "ansatz";
  double scale = 0.1;
  double K = 4.0;
  double xi = 0.25;
  std::string weights;

  void add(CLI::App* app) {
    app->add_option("--init", init, "initialization scheme")->check(CLI::IsMember({"ansatz", "random"}));
    app->add_option("--init-scale", scale, "random init: uniform in [-scale, scale]");
    app->add_option("--K", K, "sigmoid sharpness")->check(CLI::PositiveNumber);
    app->add_option("--xi", xi, "sigmoid centering shift");
    app->add_option("--weights", weights, "start from a weight file instead of --poly/--det")
        ->check(CLI::ExistingFile);
  }

  Activation act() const { return Activation::sigmoid(K, xi); }

  NetworkParams make(const TargetFlags& t, std::uint64_t seed) const {
    if (!weights.empty()) {
      auto p = load_network(weights);
      if (!p.act.is_sigmoid()) p.act = act();
      if (init == "random") {
        return init_params(p.shape(), RandomInit{scale, seed, p.act});
      }
      return p;
    }
    const auto net = t.ansatz();
    if (init == "random") return init_params(net.shape(), RandomInit{scale, seed, act()});
    return init_params(net.shape(), AnsatzInit{net, act()});
  }
};

struct ScheduleFlags {
  std::string mode = "full";
  std::size_t k = 8;
  double eta = 1e-3;
  std::size_t steps = 1000;
  std::size_t snapshot_every = 1;
  bool freeze_b2 = false;

  void add(CLI::App* app, double default_eta, std::size_t default_steps) {
    eta = default_eta;
    steps = default_steps;
    app->add_option("--mode", mode, "descent mode")
        ->check(CLI::IsMember({"full", "minibatch", "per_sample"}));
    app->add_option("--k", k, "minibatch size");
    app->add_option("--eta", eta, "step size")->check(CLI::PositiveNumber);
    app->add_option("--steps", steps, "number of descent steps");
    app->add_option("--snapshot-every", snapshot_every, "record every n steps (0: first and last)");
    app->add_flag("--freeze-b2", freeze_b2, "keep the output bias fixed");
  }

  Schedule make(std::uint64_t seed, std::size_t dim) const {
    Schedule s;
    s.mode = mode == "minibatch" ? DescentMode::minibatch
             : mode == "per_sample" ? DescentMode::per_sample
                                    : DescentMode::full;
    s.batch = k;
    s.eta = eta;
    s.steps = steps;
    s.seed = seed;
    s.snapshot_every = snapshot_every;
    if (freeze_b2) {
      s.frozen.assign(dim, false);
      s.frozen.back() = true;
    }
    return s;
  }
};

void write_trajectory(const Trajectory& traj, const fs::path& path) {
  CsvTable csv({"step", "loss", "grad_norm"});
  for (const auto& r : traj.records) {
    csv.add_row({static_cast<double>(r.step), r.loss, r.grad_norm});
  }
  csv.write(path);
}

void print_report(std::ostream& out, const HessianReport& r) {
  out << "hessian: lambda_max = " << show(r.eigenvalues.empty() ? 0.0 : r.eigenvalues.front())
      << ", degeneracy = " << r.degeneracy_count << ", tol = " << show(r.tol)
      << ", anisotropy = " << (r.anisotropy ? show(*r.anisotropy) : std::string("none")) << '\n';
}

HessianReport write_spectrum(const Objective& obj, std::span<const double> theta,
                             std::optional<double> tol, const fs::path& path) {
  const auto spectrum = eigen_spectrum(hessian(obj, theta));
  CsvTable csv({"index", "eigenvalue"});
  auto report = canyon_report(spectrum, tol);
  for (std::size_t i = 0; i < report.eigenvalues.size(); ++i) {
    csv.add_row({static_cast<double>(i), report.eigenvalues[i]});
  }
  csv.write(path);
  return report;
}

// --- subcommands -------------------------------------------------------------

int cmd_build(Run& run, const TargetFlags& t) {
  const auto net = t.ansatz();
  const auto shape = net.shape();
  save_step_net(run.artifact(".weights.json"), net);
  run.out << "N1 = " << shape.layer1 << "\nN2 = " << shape.layer2 << '\n';
  return kExitOk;
}

struct VerifyFlags {
  std::string weights;
  std::string oracle;
  std::size_t samples = 200;
  std::size_t exhaustive_limit = 200000;
};

int cmd_verify(Run& run, const VerifyFlags& f, std::uint64_t seed) {
  const auto net = load_step_net(f.weights);
  const std::size_t d = net.shape().inputs;
  const Rational eps = net.spec.eps;

  std::function<Rational(std::span<const Rational>)> oracle;
  if (f.oracle == "identity") {
    if (d != 1) throw UsageError("identity oracle needs a one-input network");
    oracle = [](std::span<const Rational> x) { return x[0]; };
  } else if (f.oracle.rfind("poly:", 0) == 0) {
    auto p = std::make_shared<Polynomial>(Polynomial::parse(f.oracle.substr(5), static_cast<int>(d)));
    if (static_cast<std::size_t>(p->num_vars()) != d) {
      throw UsageError("oracle polynomial uses more variables than the network has inputs");
    }
    oracle = [p](std::span<const Rational> x) { return p->evaluate(x); };
  } else if (f.oracle.rfind("det:", 0) == 0) {
    const int n = std::stoi(f.oracle.substr(4));
    if (n < 1 || static_cast<std::size_t>(n * n) != d) {
      throw UsageError("determinant oracle size does not match the network inputs");
    }
    oracle = [n, eps](std::span<const Rational> x) {
      // Entries are k * eps, so det = eps^n det(k).
      std::vector<std::int64_t> k(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        const Rational q = x[i] / eps;
        k[i] = q.numerator();
      }
      Rational scale{1};
      for (int i = 0; i < n; ++i) scale *= eps;
      return scale * Rational(cofactor_determinant(k, n));
    };
  } else {
    throw UsageError("--oracle must be identity, poly:<expr> or det:<n>");
  }

  std::vector<std::int64_t> counts(d);
  double total = 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    const Rational q = net.valid_domain[i] / eps;
    counts[i] = q.numerator() / q.denominator() + 1;
    total *= static_cast<double>(counts[i]);
  }
  const bool exhaustive = total <= static_cast<double>(f.exhaustive_limit);
  const std::size_t n_points = exhaustive ? static_cast<std::size_t>(total) : f.samples;
  run.manifest.flags["verify.mode"] = exhaustive ? "exhaustive" : "random";

  std::vector<std::vector<Rational>> points(n_points, std::vector<Rational>(d));
  CounterRng rng(seed);
  for (std::size_t a = 0; a < n_points; ++a) {
    std::size_t rest = a;
    for (std::size_t i = d; i-- > 0;) {
      std::int64_t k;
      if (exhaustive) {
        k = static_cast<std::int64_t>(rest % static_cast<std::size_t>(counts[i]));
        rest /= static_cast<std::size_t>(counts[i]);
      } else {
        k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(counts[i])));
      }
      points[a][i] = eps * Rational(k);
    }
  }
  std::vector<Rational> got(n_points), want(n_points);
  parallel_for(n_points, [&](std::size_t a) {
    got[a] = eval_step(net, points[a]);
    want[a] = oracle(points[a]);
  });

  std::vector<std::string> header;
  for (std::size_t i = 0; i < d; ++i) header.push_back("x" + std::to_string(i + 1));
  header.push_back("net");
  header.push_back("oracle");
  CsvTable csv(header);
  std::size_t failures = 0;
  for (std::size_t a = 0; a < n_points; ++a) {
    if (got[a] == want[a]) continue;
    ++failures;
    std::vector<double> row;
    for (const auto& v : points[a]) row.push_back(to_double(v));
    row.push_back(to_double(got[a]));
    row.push_back(to_double(want[a]));
    csv.add_row(row);
    if (failures <= 10) {
      run.out << "mismatch at (";
      for (std::size_t i = 0; i < d; ++i) run.out << (i ? ", " : "") << to_string(points[a][i]);
      run.out << "): net = " << to_string(got[a]) << ", oracle = " << to_string(want[a]) << '\n';
    }
  }
  csv.write(run.artifact(".verify.csv"));
  if (failures) {
    run.out << "FAIL: " << failures << " of " << n_points << " points differ\n";
    return kExitVerifyFailed;
  }
  run.out << "PASS: " << n_points << " points checked\n";
  return kExitOk;
}

int cmd_train(Run& run, const TargetFlags& t, const DataFlags& df, const InitFlags& inf,
              const ScheduleFlags& sf, std::size_t test_samples, const Seeds& seeds) {
  const auto params = inf.make(t, seeds.init());
  const auto data = df.make(t, seeds.data());
  if (params.shape().inputs != data.dimension()) {
    throw UsageError("network inputs do not match the dataset dimension");
  }
  const auto sched = sf.make(seeds.schedule(), params.shape().size());
  const auto traj = descend(params, data, sched);
  write_trajectory(traj, run.artifact(".trajectory.csv"));
  const auto& first = traj.records.front();
  const auto& last = traj.records.back();
  run.out << "initial loss = " << show(first.loss) << '\n';
  if (traj.aborted) {
    run.out << "aborted at step " << last.step << ": " << traj.abort_reason << '\n';
    run.manifest.status = "diverged: " + traj.abort_reason;
    return kExitDiverged;
  }
  save_network(run.artifact(".weights.json"), *traj.final_params);
  run.out << "final loss = " << show(last.loss) << " after " << last.step << " steps\n";
  if (test_samples > 0) {
    const auto test = df.make(t, seeds.test(), test_samples);
    const auto h = holdout_eval(*traj.final_params, data, test);
    run.out << "train loss = " << show(h.train_loss)
            << ", test loss = " << show(h.test_loss) << '\n';
  }
  return kExitOk;
}

struct LandscapeFlags {
  std::string model = "identity";
  double X = 10.0;
  std::string point;
  std::size_t quadrature = 0;
  std::string slice;
  std::string range_a = "-2:2";
  std::string range_b = "-2:2";
  std::size_t resolution = 101;
  bool hessian = false;
  std::optional<double> tol;
};

int cmd_landscape(Run& run, const LandscapeFlags& f, const TargetFlags& t, const DataFlags& df,
                  const InitFlags& inf, const Seeds& seeds) {
  std::unique_ptr<Objective> obj;
  std::vector<double> theta;
  if (f.model == "identity") {
    if (f.quadrature > 0) {
      obj = std::make_unique<IdentitySampleObjective>(IdentitySampleObjective::midpoint_lattice(f.X, f.quadrature));
    } else {
      obj = std::make_unique<IdentityCanyonObjective>(f.X);
    }
    theta = {1.0, 1.0, 0.0};
  } else if (f.model == "wavelet") {
    obj = std::make_unique<WaveletObjective>();
    theta = {1.0, 0.0};
  } else if (f.model == "five-term") {
    auto cfg = five_term_configuration();
    theta = cfg.params.flatten();
    obj = std::make_unique<NetworkObjective>(cfg.params, cfg.data);
  } else {
    auto params = inf.make(t, seeds.init());
    auto data = df.make(t, seeds.data());
    theta = params.flatten();
    obj = std::make_unique<NetworkObjective>(params, data);
  }
  if (!f.point.empty()) {
    theta = parse_list(f.point, "--point");
    if (theta.size() != obj->dimension()) {
      throw UsageError("--point needs " + std::to_string(obj->dimension()) + " values");
    }
  }
  if (f.slice.empty() && !f.hessian) throw UsageError("request --slice, --hessian or both");
  if (!f.slice.empty()) {
    const auto idx = parse_list(f.slice, "--slice");
    if (idx.size() != 2) throw UsageError("--slice needs two parameter indices");
    for (double v : idx) {
      if (v < 0 || v != std::floor(v) || v >= static_cast<double>(obj->dimension())) {
        throw UsageError("--slice index out of range");
      }
    }
    const auto ra = parse_range(f.range_a, "--range-a");
    const auto rb = parse_range(f.range_b, "--range-b");
    AxisSpec a{static_cast<std::size_t>(idx[0]), ra.lo, ra.hi, f.resolution};
    AxisSpec b{static_cast<std::size_t>(idx[1]), rb.lo, rb.hi, f.resolution};
    const auto grid = loss_slice_2d(*obj, theta, a, b);
    CsvTable csv({"a", "b", "loss"});
    for (std::size_t i = 0; i < a.resolution; ++i) {
      for (std::size_t j = 0; j < b.resolution; ++j) csv.add_row({a.at(i), b.at(j), grid.values(i, j)});
    }
    csv.write(run.artifact(".grid.csv"));
    run.out << "slice " << obj->parameter_name(a.index) << " x " << obj->parameter_name(b.index) << ": "
            << a.resolution * b.resolution << " points\n";
  }
  if (f.hessian) {
    const auto report = write_spectrum(*obj, theta, f.tol, run.artifact(".spectrum.csv"));
    print_report(run.out, report);
  }
  return kExitOk;
}

struct SmoothFlags {
  double K = 3.0;
  std::string alphas = "0.2,1.0,1.1";
  std::string domain = "-1:2";
  std::size_t resolution = 30001;
  std::string eps_list = "1,0.5,0.4";
  int terms = 10;
  std::size_t profile_points = 201;
};

int cmd_smooth(Run& run, const SmoothFlags& f) {
  const auto alphas = parse_list(f.alphas, "--alphas");
  const auto domain = parse_range(f.domain, "--domain");
  CsvTable roots({"alpha", "xi", "roots", "min_gap"});
  for (double alpha : alphas) {
    const auto act = Activation::sigmoid(f.K, alpha / f.K);
    const auto scan = sigmoid_artifact_roots(act, domain, f.resolution);
    roots.add_row({alpha, act.xi, static_cast<double>(scan.roots.size()), scan.min_gap});
    run.out << "alpha = " << show(alpha) << ": " << scan.roots.size() << " root(s)\n";
  }
  roots.write(run.artifact(".roots.csv"));

  // Profiles of the smoothed lattice identity: xi = +1/K, -1/K and the
  // step-rescaled eps/K.
  const auto eps_values = parse_list(f.eps_list, "--eps-list");
  CsvTable profile({"eps", "xi", "x", "error"});
  CsvTable summary({"eps", "xi", "max_lattice_error"});
  for (double eps : eps_values) {
    if (!(eps > 0.0)) throw UsageError("--eps-list values must be positive");
    for (double xi : {1.0 / f.K, -1.0 / f.K, eps / f.K}) {
      const auto act = Activation::sigmoid(f.K, xi);
      const double hi = (f.terms - 1) * eps;
      for (std::size_t i = 0; i < f.profile_points; ++i) {
        const double x = hi * static_cast<double>(i) / static_cast<double>(f.profile_points - 1);
        profile.add_row({eps, xi, x, smoothed_identity_error(x, act, eps, f.terms)});
      }
      double worst = 0.0;
      for (int a = 0; a < f.terms; ++a) {
        worst = std::max(worst, std::abs(smoothed_identity_error(a * eps, act, eps, f.terms)));
      }
      summary.add_row({eps, xi, worst});
      run.out << "eps = " << show(eps) << ", xi = " << show(xi)
              << ": max lattice error = " << show(worst) << '\n';
    }
  }
  profile.write(run.artifact(".profile.csv"));
  summary.write(run.artifact(".lattice_error.csv"));
  return kExitOk;
}

struct WaveletFlags {
  std::string alpha_range = "0.25:3";
  std::string beta_range = "-2:2";
  std::size_t resolution = 81;
  std::string start = "2,0.5";
  double eta = 0.1;
  std::size_t steps = 3000;
};

int cmd_wavelet(Run& run, const WaveletFlags& f) {
  WaveletObjective obj;
  const auto ra = parse_range(f.alpha_range, "--alpha-range");
  const auto rb = parse_range(f.beta_range, "--beta-range");
  if (!(ra.lo > 0.0)) throw UsageError("--alpha-range must stay above 0");
  const auto grid = loss_slice_2d(obj, std::vector<double>{1.0, 0.0}, AxisSpec{0, ra.lo, ra.hi, f.resolution},
                                  AxisSpec{1, rb.lo, rb.hi, f.resolution});
  CsvTable csv({"a", "b", "loss"});
  for (std::size_t i = 0; i < f.resolution; ++i) {
    for (std::size_t j = 0; j < f.resolution; ++j) {
      csv.add_row({grid.a.at(i), grid.b.at(j), grid.values(i, j)});
    }
  }
  csv.write(run.artifact(".grid.csv"));

  const auto start = parse_list(f.start, "--start");
  if (start.size() != 2) throw UsageError("--start needs alpha,beta");
  Schedule sched;
  sched.eta = f.eta;
  sched.steps = f.steps;
  const auto traj = descend(obj, start, sched);
  write_trajectory(traj, run.artifact(".trajectory.csv"));
  if (traj.aborted) {
    run.out << "aborted: " << traj.abort_reason << '\n';
    run.manifest.status = "diverged: " + traj.abort_reason;
    return kExitDiverged;
  }
  const auto& m = traj.final_theta;
  run.out << "minimizer: alpha = " << show(m[0]) << ", beta = " << show(m[1])
          << ", distance to (1, 0) = " << show(std::hypot(m[0] - 1.0, m[1])) << '\n';
  const auto report = write_spectrum(obj, m, std::nullopt, run.artifact(".spectrum.csv"));
  print_report(run.out, report);
  return kExitOk;
}

struct TransformFlags {
  std::string target = "identity";
  std::string omegas = "1";
  double value = 1.0;
  std::size_t N = 40;
  std::optional<double> hi;
  std::optional<double> K;
  double eta = 1e-3;
  std::size_t steps = 100000;
};

int cmd_transform(Run& run, const TransformFlags& f) {
  if (f.N < 2) throw UsageError("--N must be at least 2");
  const double hi = f.hi.value_or(f.target == "sin" ? 10.0 : static_cast<double>(f.N - 1));
  if (!(hi > 0.0)) throw UsageError("--hi must be positive");
  const double eps = hi / static_cast<double>(f.N - 1);
  // Node k sits at (k - 1) eps and switches at (k - 1/2) eps; sharpness
  // makes the switch span a small fraction of the step.
  const double K = f.K.value_or(std::sqrt(40.0 / eps));
  const auto act = Activation::sigmoid(K, eps / 2.0);
  const TransformGrid grid{f.N, -eps, eps};
  const std::vector<double> omegas =
      f.target == "sin" ? parse_list(f.omegas, "--omega") : std::vector<double>{0.0};

  Schedule sched;
  sched.eta = f.eta;
  sched.steps = f.steps;
  sched.snapshot_every = 0;

  CsvTable spectrum({"omega", "index", "position", "weight"});
  CsvTable widths({"omega", "width", "final_loss"});
  std::vector<double> width_values;
  for (double omega : omegas) {
    Dataset data;
    data.provenance = {"transform", f.target, 0};
    for (std::size_t a = 0; a < f.N; ++a) {
      const double x = static_cast<double>(a) * eps;
      const double y = f.target == "identity" ? x : f.target == "constant" ? f.value : std::sin(omega * x);
      data.samples.push_back({{x}, y});
    }
    const auto fit = heaviside_transform_fit(data, grid, act, sched);
    if (fit.trajectory.aborted) {
      run.out << "aborted: " << fit.trajectory.abort_reason << '\n';
      run.manifest.status = "diverged: " + fit.trajectory.abort_reason;
      spectrum.write(run.artifact(".spectrum.csv"));
      return kExitDiverged;
    }
    for (std::size_t k = 0; k < f.N; ++k) {
      spectrum.add_row({omega, static_cast<double>(k), fit.positions[k], fit.weights[k]});
    }
    widths.add_row({omega, fit.width, fit.trajectory.records.back().loss});
    width_values.push_back(fit.width);
    run.out << (f.target == "sin" ? "omega = " + show(omega) + ": " : std::string())
            << "width = " << show(fit.width) << " of N = " << f.N << '\n';
  }
  spectrum.write(run.artifact(".spectrum.csv"));
  widths.write(run.artifact(".width.csv"));
  if (width_values.size() > 1) {
    std::size_t inversions = 0;
    for (std::size_t i = 1; i < width_values.size(); ++i) inversions += width_values[i] < width_values[i - 1];
    run.out << "trend: " << inversions << " inversion(s) across " << width_values.size() << " frequencies\n";
  }
  return kExitOk;
}

int cmd_grow(Run& run, const TargetFlags& t, const DataFlags& df, const InitFlags& inf,
             const ScheduleFlags& sf, const std::string& sizes_text, const Seeds& seeds) {
  std::vector<std::size_t> sizes;
  for (double v : parse_list(sizes_text, "--sizes")) {
    if (!(v >= 1.0) || v != std::floor(v)) throw UsageError("--sizes must be positive integers");
    sizes.push_back(static_cast<std::size_t>(v));
  }
  const auto params = inf.make(t, seeds.init());
  const auto data = df.make(t, seeds.data(), *std::max_element(sizes.begin(), sizes.end()));
  const auto sched = sf.make(seeds.schedule(), params.shape().size());
  const auto stages = grow_train(params, data, sizes, sched);
  CsvTable csv({"samples", "loss", "drift", "aborted"});
  bool aborted = false;
  for (const auto& s : stages) {
    csv.add_row({static_cast<double>(s.samples), s.loss, s.drift, s.aborted ? 1.0 : 0.0});
    run.out << "samples = " << s.samples << ": loss = " << show(s.loss)
            << ", drift = " << show(s.drift) << '\n';
    aborted = aborted || s.aborted;
  }
  csv.write(run.artifact(".growth.csv"));
  if (aborted) {
    run.manifest.status = "diverged: growth stage aborted";
    return kExitDiverged;
  }
  return kExitOk;
}

void record_flags(const CLI::App* sub, RunManifest& m) {
  for (const auto* opt : sub->get_options()) {
    const auto name = opt->get_name();
    if (name == "--help" || name.empty()) continue;
    if (opt->count() > 0) {
      m.flags[name] = join(opt->results(), ",");
    } else {
      m.flags[name] = opt->get_default_str();
    }
  }
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heaviside step networks: compile, smooth, train and probe loss landscapes", "heavistep"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", HEAVISTEP_VERSION);

  std::string prefix;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", prefix, "artifact path prefix (default: the subcommand name)");
    sub->add_option("--seed", seed, "root seed for every random stream");
  };

  TargetFlags target;
  DataFlags data;
  InitFlags init;
  ScheduleFlags sched;

  auto* build = app.add_subcommand("build", "compile a polynomial or determinant into a step network");
  common(build);
  target.add(build);

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "compare a step network with an exact oracle on its lattice");
  common(verify);
  verify->add_option("--weights", verify_flags.weights, "step network weight file")
      ->required()
      ->check(CLI::ExistingFile);
  verify->add_option("--oracle", verify_flags.oracle, "identity, poly:<expr> or det:<n>")->required();
  verify->add_option("--samples", verify_flags.samples, "random points when the lattice is too large");
  verify->add_option("--exhaustive-limit", verify_flags.exhaustive_limit,
                     "largest lattice checked point by point");

  std::size_t test_samples = 0;
  auto* train = app.add_subcommand("train", "train a sigmoid network by steepest descent");
  common(train);
  target.add(train, false);
  data.add(train);
  init.add(train);
  sched.add(train, 1e-3, 1000);
  train->add_option("--test-samples", test_samples, "fresh samples for a hold-out loss");

  LandscapeFlags land;
  auto* landscape = app.add_subcommand("landscape", "loss slices and Hessian spectra");
  common(landscape);
  landscape->add_option("--model", land.model, "objective")
      ->check(CLI::IsMember({"identity", "wavelet", "five-term", "network"}));
  landscape->add_option("--X", land.X, "identity model: training interval [0, X]")->check(CLI::PositiveNumber);
  landscape->add_option("--quadrature", land.quadrature, "identity model: midpoint samples (0: exact integral)");
  landscape->add_option("--point", land.point, "comma-separated parameter vector");
  landscape->add_option("--slice", land.slice, "two parameter indices i,j");
  landscape->add_option("--range-a", land.range_a, "lo:hi of the first slice axis");
  landscape->add_option("--range-b", land.range_b, "lo:hi of the second slice axis");
  landscape->add_option("--resolution", land.resolution, "points per slice axis")->check(CLI::Range(2, 100000));
  landscape->add_flag("--hessian", land.hessian, "write the Hessian spectrum");
  landscape->add_option("--tol", land.tol, "degeneracy tolerance (default 1e-8 * lambda_max)");
  target.add(landscape, false);
  data.add(landscape);
  init.add(landscape);

  SmoothFlags smooth_flags;
  auto* smooth = app.add_subcommand("smooth", "sigmoid smoothing artifacts");
  common(smooth);
  smooth->add_option("--K", smooth_flags.K, "sigmoid sharpness")->check(CLI::PositiveNumber);
  smooth->add_option("--alphas", smooth_flags.alphas, "xi = alpha / K values for the root table");
  smooth->add_option("--domain", smooth_flags.domain, "lo:hi scanned for roots of sigma(x) - x");
  smooth->add_option("--resolution", smooth_flags.resolution, "scan points")->check(CLI::Range(2, 100000000));
  smooth->add_option("--eps-list", smooth_flags.eps_list, "lattice steps for the error profiles");
  smooth->add_option("--terms", smooth_flags.terms, "lattice terms")->check(CLI::Range(1, 100000));
  smooth->add_option("--profile-points", smooth_flags.profile_points, "points per profile")
      ->check(CLI::Range(2, 1000000));

  WaveletFlags wav;
  auto* wavelet = app.add_subcommand("wavelet", "Gaussian wavelet fit landscape");
  common(wavelet);
  wavelet->add_option("--alpha-range", wav.alpha_range, "lo:hi of alpha");
  wavelet->add_option("--beta-range", wav.beta_range, "lo:hi of beta");
  wavelet->add_option("--resolution", wav.resolution, "points per axis")->check(CLI::Range(2, 100000));
  wavelet->add_option("--start", wav.start, "descent start alpha,beta");
  wavelet->add_option("--eta", wav.eta, "step size")->check(CLI::PositiveNumber);
  wavelet->add_option("--steps", wav.steps, "descent steps");

  TransformFlags tr;
  auto* transform = app.add_subcommand("transform", "one-layer Heaviside transform spectrum");
  common(transform);
  transform->add_option("--target", tr.target, "target function")
      ->check(CLI::IsMember({"identity", "constant", "sin"}));
  transform->add_option("--omega", tr.omegas, "sin target: comma-separated frequencies");
  transform->add_option("--value", tr.value, "constant target value");
  transform->add_option("--N", tr.N, "number of transform nodes");
  transform->add_option("--hi", tr.hi, "upper end of the sample interval");
  transform->add_option("--K", tr.K, "sigmoid sharpness (default: switch width 1/20 of the step)");
  transform->add_option("--eta", tr.eta, "step size")->check(CLI::PositiveNumber);
  transform->add_option("--steps", tr.steps, "descent steps");

  std::string sizes = "10,20,40";
  auto* grow = app.add_subcommand("grow", "exploratory: train on a growing dataset");
  common(grow);
  target.add(grow, false);
  data.add(grow);
  init.add(grow);
  ScheduleFlags grow_sched;
  grow_sched.add(grow, 1e-3, 500);
  grow->add_option("--sizes", sizes, "comma-separated dataset sizes");

  std::string manifest_path, replay_out;
  auto* replay = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  replay->add_option("--manifest", manifest_path, "run manifest")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "write artifacts under this prefix instead");

  const auto original = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (replay->parsed()) {
    RunManifest m;
    try {
      m = load_manifest(manifest_path);
    } catch (const std::exception& ex) {
      err << "error: " << ex.what() << '\n';
      return kExitUsage;
    }
    auto again = m.argv;
    if (!replay_out.empty()) {
      auto it = std::find(again.begin(), again.end(), "--out");
      if (it != again.end() && it + 1 != again.end()) {
        *(it + 1) = replay_out;
      } else {
        again.push_back("--out");
        again.push_back(replay_out);
      }
    }
    return run_cli(again, out, err);
  }

  CLI::App* sub = app.get_subcommands().front();
  if (prefix.empty()) prefix = sub->get_name();
  Run run{out, err, {}, prefix};
  run.manifest.subcommand = sub->get_name();
  run.manifest.argv = original;
  run.manifest.version = HEAVISTEP_VERSION;
  run.manifest.started_utc = utc_now();
  run.manifest.workers = worker_count();
  record_flags(sub, run.manifest);
  const Seeds seeds{seed};
  run.manifest.seeds = {{"root", seed},
                        {"data", seeds.data()},
                        {"init", seeds.init()},
                        {"schedule", seeds.schedule()},
                        {"test", seeds.test()}};

  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (sub == build) code = cmd_build(run, target);
    else if (sub == verify) code = cmd_verify(run, verify_flags, seeds.data());
    else if (sub == train) code = cmd_train(run, target, data, init, sched, test_samples, seeds);
    else if (sub == landscape) code = cmd_landscape(run, land, target, data, init, seeds);
    else if (sub == smooth) code = cmd_smooth(run, smooth_flags);
    else if (sub == wavelet) code = cmd_wavelet(run, wav);
    else if (sub == transform) code = cmd_transform(run, tr);
    else if (sub == grow) code = cmd_grow(run, target, data, init, grow_sched, sizes, seeds);
  } catch (const ParseError& ex) {
    err << "error: " << ex.what() << " at position " << ex.position() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  run.manifest.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  run.manifest.exit_code = code;
  if (run.manifest.status.empty()) {
    run.manifest.status = code == kExitOk ? "ok" : code == kExitVerifyFailed ? "verification failed" : "error";
  }
  const fs::path manifest_file = run.prefix + ".manifest.json";
  try {
    save_manifest(manifest_file, run.manifest);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }
  out << "manifest: " << manifest_file.string() << '\n';
  return code;
}

}  // namespace heavistep

#include "heavistep/polynet.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace heavistep {

ParamShape StepNet::shape() const { return {w0.cols(), w0.rows(), w1.rows()}; }

void StepNet::check_consistent() const {
  const auto s = shape();
  if (b0.size() != s.layer1 || w1.cols() != s.layer1 || b1.size() != s.layer2 ||
      w2.size() != s.layer2 || valid_domain.size() != s.inputs) {
    throw std::invalid_argument("step network has inconsistent dimensions");
  }
}

namespace {

// Layer 1 with nodes theta(x_i - s*eps) for every input i and shift s < M.
StepNet lattice_first_layer(std::size_t inputs, const LatticeSpec& spec) {
  StepNet net;
  net.spec = spec;
  const std::size_t m = static_cast<std::size_t>(spec.M);
  net.w0 = DenseMatrix<Rational>(inputs * m, inputs);
  net.b0.assign(inputs * m, Rational{0});
  for (std::size_t i = 0; i < inputs; ++i) {
    for (std::size_t s = 0; s < m; ++s) {
      net.w0(i * m + s, i) = 1;
      net.b0[i * m + s] = -Rational(static_cast<std::int64_t>(s)) * spec.eps;
    }
  }
  net.valid_domain.assign(inputs, Rational(spec.M) * spec.eps);
  return net;
}

Rational power(const Rational& base, int n) {
  Rational r{1};
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

// Appends layer-2 nodes for a product of the given input slots: one node per
// shift tuple in [0, M)^slots.size(), each with output weight `weight`.
void append_product_nodes(std::span<const std::size_t> slots, const Rational& weight, int M,
                          std::vector<std::vector<std::size_t>>& rows,
                          std::vector<Rational>& b1, std::vector<Rational>& w2) {
  const std::size_t n = slots.size();
  std::vector<std::size_t> shift(n, 0);
  const Rational bias = -(Rational(static_cast<std::int64_t>(n)) - 1);
  for (;;) {
    std::vector<std::size_t> row;
    row.reserve(n);
    for (std::size_t k = 0; k < n; ++k) row.push_back(slots[k] * M + shift[k]);
    rows.push_back(std::move(row));
    b1.push_back(bias);
    w2.push_back(weight);
    std::size_t k = 0;
    while (k < n && ++shift[k] == static_cast<std::size_t>(M)) shift[k++] = 0;
    if (k == n) break;
  }
}

void fill_second_layer(StepNet& net, const std::vector<std::vector<std::size_t>>& rows,
                       std::vector<Rational> b1, std::vector<Rational> w2) {
  net.w1 = DenseMatrix<Rational>(rows.size(), net.w0.rows());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t node : rows[j]) net.w1(j, node) += 1;
  }
  net.b1 = std::move(b1);
  net.w2 = std::move(w2);
  net.b2 = 0;
}

}  // namespace

std::size_t heavisidized_node_count(const Polynomial& poly, int M) {
  std::size_t total = 0;
  for (const auto& [e, c] : poly.terms()) {
    std::size_t nodes = 1;
    for (int k = 0; k < total_degree(e); ++k) nodes *= static_cast<std::size_t>(M);
    total += nodes;
  }
  return total;
}

StepNet heavisidize(const Polynomial& poly, const LatticeSpec& spec) {
  if (spec.M < 2) throw std::invalid_argument("heavisidize needs M >= 2");
  if (poly.empty()) throw std::invalid_argument("heavisidize of the zero polynomial");
  auto net = lattice_first_layer(static_cast<std::size_t>(poly.num_vars()), spec);
  std::vector<std::vector<std::size_t>> rows;
  std::vector<Rational> b1, w2;
  for (const auto& [e, c] : poly.terms()) {
    std::vector<std::size_t> slots;
    for (int i = 0; i < poly.num_vars(); ++i) {
      for (int k = 0; k < e[i]; ++k) slots.push_back(static_cast<std::size_t>(i));
    }
    append_product_nodes(slots, c * power(spec.eps, total_degree(e)), spec.M, rows, b1, w2);
  }
  fill_second_layer(net, rows, std::move(b1), std::move(w2));
  return net;
}

StepNet det_ansatz(int n, const LatticeSpec& spec) {
  if (n < 1 || n > 3) throw std::invalid_argument("det_ansatz supports n in {1, 2, 3}");
  const auto entries = static_cast<std::size_t>(n * n);
  auto net = lattice_first_layer(entries, spec);
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> rows;
  std::vector<Rational> b1, w2;
  const Rational scale = power(spec.eps, n);
  do {
    int inversions = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) inversions += perm[a] > perm[b] ? 1 : 0;
    }
    std::vector<std::size_t> slots;
    for (int r = 0; r < n; ++r) slots.push_back(static_cast<std::size_t>(r * n + perm[r]));
    append_product_nodes(slots, inversions % 2 == 0 ? scale : -scale, spec.M, rows, b1, w2);
  } while (std::next_permutation(perm.begin(), perm.end()));
  fill_second_layer(net, rows, std::move(b1), std::move(w2));
  return net;
}

StepNet identity_params(int M) {
  if (M < 1) throw std::invalid_argument("identity_params needs M >= 1");
  const LatticeSpec spec(M);
  auto net = lattice_first_layer(1, spec);
  const auto m = static_cast<std::size_t>(M);
  net.w1 = DenseMatrix<Rational>::identity(m);
  net.b1.assign(m, Rational{0});
  net.w2.assign(m, Rational{1});
  net.b2 = 0;
  return net;
}

StepNet square_params_m4() {
  StepNet net;
  net.spec = LatticeSpec(4);
  net.w0 = DenseMatrix<Rational>(4, 1, Rational{1});
  net.b0 = {0, 0, -1, -1};
  net.w1 = DenseMatrix<Rational>(4, 4);
  const int pattern[4][4] = {{1, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 1}};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) net.w1(r, c) = pattern[r][c];
  }
  net.b1.assign(4, Rational{-1});
  net.w2.assign(4, Rational{1});
  net.valid_domain = {Rational{2}};
  return net;
}

StepNet shift_equivalent(const StepNet& net, int c) {
  net.check_consistent();
  const auto s = net.shape();
  const bool identity_family =
      s.inputs == 1 && s.layer1 == s.layer2 && net.w1 == DenseMatrix<Rational>::identity(s.layer1) &&
      std::all_of(net.b1.begin(), net.b1.end(), [](const Rational& b) { return b == 0; });
  if (!identity_family) {
    throw std::invalid_argument("shift_equivalent needs an identity-family network");
  }
  if (c < 0 || c >= net.spec.M) {
    throw std::invalid_argument("shift c must satisfy 0 <= c < M");
  }
  if (c == 0) return net;
  const auto shift = static_cast<std::size_t>(c);
  StepNet out = net;
  out.w1 = DenseMatrix<Rational>(s.layer2 + shift, s.layer1);
  out.b1.assign(s.layer2 + shift, Rational{0});
  out.w2.assign(s.layer2 + shift, Rational{0});
  for (std::size_t j = 0; j < shift; ++j) {
    out.b1[j] = -1;
    out.w2[j] = net.w2.front();
  }
  for (std::size_t j = shift; j < s.layer2 + shift; ++j) {
    out.w1(j, j - shift) = 1;
    out.w2[j] = net.w2[j - shift];
  }
  return out;
}

Rational eval_step(const StepNet& net, std::span<const Rational> x) {
  net.check_consistent();
  const auto s = net.shape();
  if (x.size() != s.inputs) throw std::invalid_argument("input dimension mismatch");
  for (std::size_t i = 0; i < s.inputs; ++i) {
    if (x[i] < 0 || x[i] > net.valid_domain[i]) {
      throw std::out_of_range("input " + std::to_string(i) + " = " + to_string(x[i]) +
                              " outside [0, " + to_string(net.valid_domain[i]) + "]");
    }
  }
  std::vector<char> fired1(s.layer1, 0);
  for (std::size_t i = 0; i < s.layer1; ++i) {
    Rational z = net.b0[i];
    const auto row = net.w0.row(i);
    for (std::size_t k = 0; k < s.inputs; ++k) {
      if (row[k] != 0) z += row[k] * x[k];
    }
    fired1[i] = z > 0;
  }
  Rational out = net.b2;
  for (std::size_t j = 0; j < s.layer2; ++j) {
    Rational z = net.b1[j];
    const auto row = net.w1.row(j);
    for (std::size_t i = 0; i < s.layer1; ++i) {
      if (fired1[i] && row[i] != 0) z += row[i];
    }
    if (z > 0) out += net.w2[j];
  }
  return out;
}

NetworkParams to_network_params(const StepNet& net, const Activation& act) {
  net.check_consistent();
  auto p = NetworkParams::zeros(net.shape(), act);
  auto convert = [](std::span<const Rational> src, std::span<double> dst) {
    std::transform(src.begin(), src.end(), dst.begin(), [](const Rational& r) { return to_double(r); });
  };
  convert(net.w0.data(), p.w0.data());
  convert(net.b0, p.b0);
  convert(net.w1.data(), p.w1.data());
  convert(net.b1, p.b1);
  convert(net.w2, p.w2);
  p.b2 = to_double(net.b2);
  return p;
}

NetworkParams embed(const StepNet& net, const Activation& act) {
  if (!act.is_sigmoid()) throw std::invalid_argument("embed needs a sigmoid activation");
  return to_network_params(net, act);
}

}  // namespace heavistep

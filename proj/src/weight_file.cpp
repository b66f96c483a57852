#include "heavistep/weight_file.hpp"

#include "heavistep/csv.hpp"

#include <json.hpp>

#include <functional>

namespace heavistep {

namespace {

constexpr const char* kFormat = "heavistep-weights";
constexpr int kVersion = 1;

// Minimal pretty printer; nlohmann's dump does not offer %.17g numbers.
class Emitter {
 public:
  void number(double x) { out_ += format_number(x); }
  void text(std::string_view s) {
    out_ += '"';
    out_ += s;
    out_ += '"';
  }
  void raw(std::string_view s) { out_ += s; }
  void key(std::string_view k, int indent) {
    newline(indent);
    text(k);
    out_ += ": ";
  }
  void newline(int indent) {
    out_ += '\n';
    out_.append(static_cast<std::size_t>(indent) * 2, ' ');
  }
  template <class F>
  void list(std::size_t n, F&& item) {
    out_ += '[';
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out_ += ", ";
      item(i);
    }
    out_ += ']';
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

struct Blocks {
  std::function<double(std::size_t, std::size_t)> w0, w1;
  std::function<double(std::size_t)> b0, b1, w2;
  double b2 = 0.0;
  ParamShape shape;
  Activation act;
  std::optional<LatticeSpec> lattice;
  std::vector<double> domain;
};

std::string emit(const Blocks& b) {
  Emitter e;
  e.raw("{");
  e.key("format", 1);
  e.text(kFormat);
  e.raw(",");
  e.key("version", 1);
  e.raw(std::to_string(kVersion));
  e.raw(",");
  e.key("layers", 1);
  e.raw("[");
  auto layer = [&](std::size_t rows, std::size_t cols, const auto& w, const auto& bias, bool last) {
    e.newline(2);
    e.raw("{\"w\": [");
    for (std::size_t r = 0; r < rows; ++r) {
      if (r) e.raw(",");
      e.newline(4);
      e.list(cols, [&](std::size_t c) { e.number(w(r, c)); });
    }
    e.newline(3);
    e.raw("], \"b\": ");
    e.list(rows, [&](std::size_t r) { e.number(bias(r)); });
    e.raw(last ? "}" : "},");
  };
  layer(b.shape.layer1, b.shape.inputs, b.w0, b.b0, false);
  layer(b.shape.layer2, b.shape.layer1, b.w1, b.b1, true);
  e.newline(1);
  e.raw("],");
  e.key("activation", 1);
  e.raw("{\"kind\": ");
  e.text(b.act.is_sigmoid() ? "sigmoid" : "heaviside");
  e.raw(", \"K\": ");
  e.number(b.act.K);
  e.raw(", \"xi\": ");
  e.number(b.act.xi);
  e.raw("},");
  e.key("output", 1);
  e.raw("{\"w2\": ");
  e.list(b.shape.layer2, [&](std::size_t j) { e.number(b.w2(j)); });
  e.raw(", \"b2\": ");
  e.number(b.b2);
  e.raw("},");
  e.key("lattice", 1);
  if (b.lattice) {
    e.raw("{\"M\": ");
    e.raw(std::to_string(b.lattice->M));
    e.raw(", \"eps\": ");
    e.number(b.lattice->step());
    e.raw("},");
  } else {
    e.raw("null,");
  }
  e.key("valid_domain", 1);
  if (b.lattice) {
    e.list(b.domain.size(), [&](std::size_t i) { e.number(b.domain[i]); });
  } else {
    e.raw("null");
  }
  e.newline(0);
  e.raw("}\n");
  return e.take();
}

using json = nlohmann::json;

json parse_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& ex) {
    throw WeightFileError(std::string("weight file is not valid JSON: ") + ex.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormat) {
    throw WeightFileError("not a heavistep weight file");
  }
  if (doc.value("version", 0) != kVersion) throw WeightFileError("unsupported weight file version");
  for (const char* field : {"layers", "activation", "output"}) {
    if (!doc.contains(field)) throw WeightFileError(std::string("weight file lacks '") + field + "'");
  }
  if (!doc["layers"].is_array() || doc["layers"].size() != 2) {
    throw WeightFileError("weight file must have exactly two layers");
  }
  return doc;
}

double number_at(const json& j, const char* what) {
  if (!j.is_number()) throw WeightFileError(std::string("expected a number in ") + what);
  return j.get<double>();
}

std::vector<double> vector_at(const json& j, const char* what) {
  if (!j.is_array()) throw WeightFileError(std::string("expected an array in ") + what);
  std::vector<double> v;
  for (const auto& x : j) v.push_back(number_at(x, what));
  return v;
}

Matrix matrix_at(const json& j, std::size_t cols_hint, const char* what) {
  if (!j.is_array()) throw WeightFileError(std::string("expected a matrix in ") + what);
  const std::size_t rows = j.size();
  std::size_t cols = rows ? j[0].size() : cols_hint;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = vector_at(j[r], what);
    if (row.size() != cols) throw WeightFileError(std::string("ragged matrix in ") + what);
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
  }
  return m;
}

Activation activation_at(const json& j) {
  const auto kind = j.value("kind", "");
  if (kind == "heaviside") return Activation::heaviside();
  if (kind == "sigmoid") {
    return Activation::sigmoid(number_at(j.at("K"), "activation.K"), number_at(j.at("xi"), "activation.xi"));
  }
  throw WeightFileError("unknown activation kind '" + kind + "'");
}

Rational exact(double x) {
  try {
    return recover_rational(x);
  } catch (const std::domain_error&) {
    throw WeightFileError("step network weight " + format_number(x) + " is not a recoverable rational");
  }
}

}  // namespace

std::string step_net_to_json(const StepNet& net) {
  net.check_consistent();
  Blocks b;
  b.shape = net.shape();
  b.w0 = [&](std::size_t r, std::size_t c) { return to_double(net.w0(r, c)); };
  b.w1 = [&](std::size_t r, std::size_t c) { return to_double(net.w1(r, c)); };
  b.b0 = [&](std::size_t i) { return to_double(net.b0[i]); };
  b.b1 = [&](std::size_t i) { return to_double(net.b1[i]); };
  b.w2 = [&](std::size_t i) { return to_double(net.w2[i]); };
  b.b2 = to_double(net.b2);
  b.act = Activation::heaviside();
  b.lattice = net.spec;
  for (const auto& d : net.valid_domain) b.domain.push_back(to_double(d));
  return emit(b);
}

std::string network_to_json(const NetworkParams& params) {
  params.validate();
  Blocks b;
  b.shape = params.shape();
  b.w0 = [&](std::size_t r, std::size_t c) { return params.w0(r, c); };
  b.w1 = [&](std::size_t r, std::size_t c) { return params.w1(r, c); };
  b.b0 = [&](std::size_t i) { return params.b0[i]; };
  b.b1 = [&](std::size_t i) { return params.b1[i]; };
  b.w2 = [&](std::size_t i) { return params.w2[i]; };
  b.b2 = params.b2;
  b.act = params.act;
  return emit(b);
}

NetworkParams network_from_json(std::string_view text) {
  const auto doc = parse_document(text);
  const auto& l0 = doc["layers"][0];
  const auto& l1 = doc["layers"][1];
  NetworkParams p;
  p.act = activation_at(doc["activation"]);
  p.w0 = matrix_at(l0.at("w"), 0, "layers[0].w");
  p.b0 = vector_at(l0.at("b"), "layers[0].b");
  p.w1 = matrix_at(l1.at("w"), p.w0.rows(), "layers[1].w");
  p.b1 = vector_at(l1.at("b"), "layers[1].b");
  p.w2 = vector_at(doc["output"].at("w2"), "output.w2");
  p.b2 = number_at(doc["output"].at("b2"), "output.b2");
  try {
    p.validate();
  } catch (const std::invalid_argument& ex) {
    throw WeightFileError(std::string("inconsistent weight file: ") + ex.what());
  }
  return p;
}

bool is_step_net_json(std::string_view text) {
  const auto doc = parse_document(text);
  return doc.contains("lattice") && doc["lattice"].is_object() &&
         doc["activation"].value("kind", "") == "heaviside";
}

StepNet step_net_from_json(std::string_view text) {
  const auto doc = parse_document(text);
  if (!doc.contains("lattice") || !doc["lattice"].is_object()) {
    throw WeightFileError("weight file has no lattice block; it is not a step network");
  }
  if (doc["activation"].value("kind", "") != "heaviside") {
    throw WeightFileError("step network files must use the heaviside activation");
  }
  const auto p = network_from_json(text);
  const auto& lat = doc["lattice"];
  if (!lat.contains("M") || !lat["M"].is_number_integer()) throw WeightFileError("lattice.M must be an integer");
  StepNet net;
  try {
    net.spec = LatticeSpec(lat["M"].get<int>(), exact(number_at(lat.at("eps"), "lattice.eps")));
  } catch (const std::invalid_argument& ex) {
    throw WeightFileError(std::string("bad lattice: ") + ex.what());
  }
  const auto s = p.shape();
  net.w0 = DenseMatrix<Rational>(s.layer1, s.inputs);
  net.w1 = DenseMatrix<Rational>(s.layer2, s.layer1);
  for (std::size_t r = 0; r < s.layer1; ++r) {
    for (std::size_t c = 0; c < s.inputs; ++c) net.w0(r, c) = exact(p.w0(r, c));
    net.b0.push_back(exact(p.b0[r]));
  }
  for (std::size_t r = 0; r < s.layer2; ++r) {
    for (std::size_t c = 0; c < s.layer1; ++c) net.w1(r, c) = exact(p.w1(r, c));
    net.b1.push_back(exact(p.b1[r]));
    net.w2.push_back(exact(p.w2[r]));
  }
  net.b2 = exact(p.b2);
  if (!doc.contains("valid_domain") || !doc["valid_domain"].is_array()) {
    throw WeightFileError("step network file lacks valid_domain");
  }
  for (double d : vector_at(doc["valid_domain"], "valid_domain")) net.valid_domain.push_back(exact(d));
  try {
    net.check_consistent();
  } catch (const std::invalid_argument& ex) {
    throw WeightFileError(std::string("inconsistent step network: ") + ex.what());
  }
  return net;
}

void save_step_net(const std::filesystem::path& path, const StepNet& net) {
  write_atomic(path, step_net_to_json(net));
}

StepNet load_step_net(const std::filesystem::path& path) { return step_net_from_json(read_text(path)); }

void save_network(const std::filesystem::path& path, const NetworkParams& params) {
  write_atomic(path, network_to_json(params));
}

NetworkParams load_network(const std::filesystem::path& path) {
  return network_from_json(read_text(path));
}

}  // namespace heavistep

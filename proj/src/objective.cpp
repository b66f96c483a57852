#include "heavistep/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace heavistep {

std::vector<double> Objective::batch_gradient(std::span<const double> theta,
                                              std::span<const std::size_t> terms) const {
  if (term_count() != 1 || terms.size() != 1 || terms[0] != 0) {
    throw std::logic_error("objective does not support per-term gradients");
  }
  return gradient(theta);
}

std::string Objective::parameter_name(std::size_t index) const {
  return "p" + std::to_string(index);
}

NetworkObjective::NetworkObjective(NetworkParams params, Dataset data)
    : base_(std::move(params)), shape_(base_.shape()), data_(std::move(data)) {
  base_.validate();
  data_.validate();
  if (data_.dimension() != shape_.inputs) {
    throw std::invalid_argument("dataset dimension does not match network inputs");
  }
}

NetworkParams NetworkObjective::params_at(std::span<const double> theta) const {
  return NetworkParams::from_flat(shape_, theta, base_.act);
}

double NetworkObjective::loss(std::span<const double> theta) const {
  return heavistep::loss(params_at(theta), data_);
}

std::vector<double> NetworkObjective::gradient(std::span<const double> theta) const {
  return grad(params_at(theta), data_).flatten();
}

std::vector<double> NetworkObjective::batch_gradient(std::span<const double> theta,
                                                     std::span<const std::size_t> terms) const {
  return grad(params_at(theta), data_, terms).flatten();
}

std::string NetworkObjective::parameter_name(std::size_t index) const {
  return heavistep::parameter_name(shape_, index);
}

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace heavistep

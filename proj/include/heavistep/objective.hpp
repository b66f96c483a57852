// Differentiable scalar objectives over a flat parameter vector. Descent,
// Hessians and loss slices are written once against this interface.

#ifndef HEAVISTEP_OBJECTIVE_HPP
#define HEAVISTEP_OBJECTIVE_HPP

#include "heavistep/dataset.hpp"
#include "heavistep/network.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace heavistep {

class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const = 0;
  virtual double loss(std::span<const double> theta) const = 0;
  virtual std::vector<double> gradient(std::span<const double> theta) const = 0;

  /// Number of additive terms (samples). 1 for closed-form objectives.
  virtual std::size_t term_count() const { return 1; }
  /// Gradient of the listed terms only. The default supports only the
  /// single-term case.
  virtual std::vector<double> batch_gradient(std::span<const double> theta,
                                             std::span<const std::size_t> terms) const;

  virtual std::string parameter_name(std::size_t index) const;
};

/// Squared loss of a NetworkParams template over a dataset.
class NetworkObjective : public Objective {
 public:
  NetworkObjective(NetworkParams params, Dataset data);

  std::size_t dimension() const override { return shape_.size(); }
  double loss(std::span<const double> theta) const override;
  std::vector<double> gradient(std::span<const double> theta) const override;
  std::size_t term_count() const override { return data_.size(); }
  std::vector<double> batch_gradient(std::span<const double> theta,
                                     std::span<const std::size_t> terms) const override;
  std::string parameter_name(std::size_t index) const override;

  NetworkParams params_at(std::span<const double> theta) const;
  std::vector<double> initial() const { return base_.flatten(); }
  const Dataset& data() const { return data_; }

 private:
  NetworkParams base_;
  ParamShape shape_;
  Dataset data_;
};

double euclidean_norm(std::span<const double> v);

}  // namespace heavistep

#endif  // HEAVISTEP_OBJECTIVE_HPP

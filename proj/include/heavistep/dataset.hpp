// Training samples with enough provenance to regenerate them.

#ifndef HEAVISTEP_DATASET_HPP
#define HEAVISTEP_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace heavistep {

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

struct Provenance {
  std::string generator;    // e.g. "poly", "det", "manual"
  std::string description;  // generator parameters in human-readable form
  std::uint64_t seed = 0;
};

struct Dataset {
  std::vector<Sample> samples;
  Provenance provenance;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  /// Input dimension; throws on an empty dataset.
  std::size_t dimension() const;
  /// Throws std::invalid_argument if inputs differ in dimension or are not finite.
  void validate() const;
};

}  // namespace heavistep

#endif  // HEAVISTEP_DATASET_HPP

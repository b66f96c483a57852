// Weight files: one JSON document per network.
//
//   {
//     "format": "heavistep-weights", "version": 1,
//     "layers": [{"w": [[...]], "b": [...]}, {"w": [[...]], "b": [...]}],
//     "activation": {"kind": "heaviside" | "sigmoid", "K": ..., "xi": ...},
//     "output": {"w2": [...], "b2": ...},
//     "lattice": {"M": ..., "eps": ...} | null,
//     "valid_domain": [...] | null
//   }
//
// Numbers carry 17 significant digits. Step networks store their rational
// weights as decimals; loading recovers the exact rationals.

#ifndef HEAVISTEP_WEIGHT_FILE_HPP
#define HEAVISTEP_WEIGHT_FILE_HPP

#include "heavistep/network.hpp"
#include "heavistep/polynet.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace heavistep {

class WeightFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string step_net_to_json(const StepNet& net);
std::string network_to_json(const NetworkParams& params);

/// Requires a heaviside activation and a lattice block.
StepNet step_net_from_json(std::string_view text);
/// Accepts any weight file; step networks load with their stored activation.
NetworkParams network_from_json(std::string_view text);
/// True when the document has a lattice block and a heaviside activation.
bool is_step_net_json(std::string_view text);

void save_step_net(const std::filesystem::path& path, const StepNet& net);
StepNet load_step_net(const std::filesystem::path& path);
void save_network(const std::filesystem::path& path, const NetworkParams& params);
NetworkParams load_network(const std::filesystem::path& path);

}  // namespace heavistep

#endif  // HEAVISTEP_WEIGHT_FILE_HPP

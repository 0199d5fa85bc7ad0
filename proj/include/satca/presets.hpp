#pragma once

#include <cstdint>
#include <string>

#include "satca/model.hpp"

namespace satca {

enum class Preset {
  kPaper8,   // 8 beams, 2 carriers per beam, 30-35 users per beam, 5% high demand
  kEvolve2,  // 2 beams, 20 users per beam, two demand profiles
  kTiny,     // at most 4 carriers and 4 users, random prev_association and Q
};

// Throws std::invalid_argument for an unknown name.
Preset parse_preset(const std::string& name);
std::string to_string(Preset p);

// Deterministic in (preset, seed). Common parameters: 54 MHz carriers,
// 10 W per beam, 19.5 GHz downlink, roll-off 0.2, delta_max 2.
Scenario generate_scenario(Preset preset, std::uint64_t seed);

}  // namespace satca

#pragma once

#include <cstdint>
#include <vector>

#include "flvbridge/bytes.hpp"

namespace bridge::sim {

struct ChannelConfig {
    double loss_prob = 0.0;
    double reorder_prob = 0.0;
    double dup_prob = 0.0;
    int reorder_depth = 3; // max forward displacement, in positions
    uint64_t seed = 0;
};

// Drops, displaces and duplicates packets, in that order, with seeded
// randomness: same config + input always yields the same output.
// Throws ConfigError for probabilities outside [0,1] or negative depth.
std::vector<Bytes> channel_transmit(const ChannelConfig& cfg, const std::vector<Bytes>& packets);

} // namespace bridge::sim

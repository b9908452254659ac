#include "flvbridge/channel.hpp"

#include <algorithm>
#include <random>

#include "flvbridge/errors.hpp"

namespace bridge::sim {

std::vector<Bytes> channel_transmit(const ChannelConfig& cfg, const std::vector<Bytes>& packets) {
    auto valid_prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!valid_prob(cfg.loss_prob) || !valid_prob(cfg.reorder_prob) || !valid_prob(cfg.dup_prob))
        throw ConfigError("channel probabilities must lie in [0,1]");
    if (cfg.reorder_depth < 0)
        throw ConfigError("reorder depth must be non-negative");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    // Phase 1: iid loss.
    std::vector<Bytes> kept;
    kept.reserve(packets.size());
    for (const auto& p : packets)
        if (coin(rng) >= cfg.loss_prob)
            kept.push_back(p);

    // Phase 2: forward displacement by 1..depth positions.
    if (cfg.reorder_prob > 0.0 && cfg.reorder_depth >= 1 && kept.size() > 1) {
        std::uniform_int_distribution<int> depth(1, cfg.reorder_depth);
        for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
            if (coin(rng) >= cfg.reorder_prob)
                continue;
            const std::size_t target = std::min(i + depth(rng), kept.size() - 1);
            std::rotate(kept.begin() + i, kept.begin() + i + 1, kept.begin() + target + 1);
        }
    }

    // Phase 3: back-to-back duplication.
    std::vector<Bytes> out;
    out.reserve(kept.size());
    for (auto& p : kept) {
        const bool dup = coin(rng) < cfg.dup_prob;
        out.push_back(std::move(p));
        if (dup)
            out.push_back(out.back());
    }
    return out;
}

} // namespace bridge::sim

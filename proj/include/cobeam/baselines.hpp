#pragma once

// Reference schemes: non-coordinated one-shot precoders (matched filter,
// per-cell zero forcing) and a simultaneous-update coordinated variant where
// every BS rebuilds its beams from the same previous round, exchanging M
// units of taxation information per round and running a few inner
// refinements.  The simultaneous variant has no monotonicity guarantee.

#include <cstdint>

#include "cobeam/sbf.hpp"

namespace cobeam::baselines {

// w_{m,i} = sqrt(budget/N) * h / ||h||.  Throws ZeroChannel on a vanishing
// direct channel.
BeamSet matched_filter(const ChannelSet& channels, const NetworkConfig& cfg);

// Per-cell ZF: beam directions are the columns of C (C^H C)^-1 for the
// stacked in-cell channel matrix C, so in-cell cross terms vanish; equal
// power budget/N per user.  Requires N <= K and full-rank C.
BeamSet zero_forcing(const ChannelSet& channels, const NetworkConfig& cfg);

// Simultaneous coordinated updates; info_units = M per outer iteration.
// Stops on the same windowed criterion as the sequential loop,
// |R(t+1) - R(t+1-M)| < stop_tol over its own outer iterations.
RunTrace run_icbf_variant(const ChannelSet& channels,
                          const NetworkConfig& cfg, const BeamSet& init,
                          std::uint64_t seed);

}  // namespace cobeam::baselines

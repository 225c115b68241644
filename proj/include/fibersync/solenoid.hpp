#pragma once

#include <cstdint>
#include <vector>

#include "fibersync/base_map.hpp"
#include "fibersync/circle.hpp"
#include "json.hpp"

namespace fibersync {

// Preimage branch word; digit i selects the branch taken at backward step i.
using BranchWord = std::vector<int>;

// Truncated solenoid coordinate: a base point with its finite backward
// orbit y_{-1}, ..., y_{-n}, satisfying g(y_{-i-1}) = y_{-i}.
struct SolenoidSample {
  CirclePoint y0;
  BranchWord word;
  std::vector<CirclePoint> backward;

  int depth() const { return static_cast<int>(backward.size()); }
  nlohmann::json to_json() const;
};

// Deterministic backward orbit along the given branch word.
SolenoidSample backward_orbit(const ExpandingBase& g, CirclePoint y0, const BranchWord& word);

// nu-approximate sampler: y0 = g^burn_in(uniform), digits i.i.d. uniform.
// Exact for linear bases with any burn-in (Lebesgue is invariant).
SolenoidSample sample_solenoid(const ExpandingBase& g, int depth, int burn_in,
                               std::uint64_t rng_seed);

// Shift forward: new y0 = g(y0), depth grows by one.
SolenoidSample advance(const ExpandingBase& g, const SolenoidSample& s);

// Max defect of the defining relation g(y_{-i-1}) = y_{-i} over the sample.
double relation_defect(const ExpandingBase& g, const SolenoidSample& s);

}  // namespace fibersync

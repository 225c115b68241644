#include "fibersync/solenoid.hpp"

#include <cmath>
#include <stdexcept>

#include "fibersync/rng.hpp"

namespace fibersync {

nlohmann::json SolenoidSample::to_json() const {
  return {{"y0", y0.value}, {"digits", word}};
}

SolenoidSample backward_orbit(const ExpandingBase& g, CirclePoint y0, const BranchWord& word) {
  SolenoidSample s;
  s.y0 = y0;
  s.word = word;
  s.backward.reserve(word.size());
  CirclePoint cur = y0;
  for (int digit : word) {
    if (digit < 0 || digit >= g.degree()) throw std::invalid_argument("invalid branch");
    cur = g.preimages(cur)[digit];
    s.backward.push_back(cur);
  }
  return s;
}

SolenoidSample sample_solenoid(const ExpandingBase& g, int depth, int burn_in,
                               std::uint64_t rng_seed) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  Rng rng(rng_seed);
  CirclePoint y0(rng.next_double());
  for (int i = 0; i < burn_in; ++i) y0 = g.apply(y0);
  BranchWord word(depth);
  for (int& digit : word) digit = rng.next_int(g.degree());
  return backward_orbit(g, y0, word);
}

SolenoidSample advance(const ExpandingBase& g, const SolenoidSample& s) {
  SolenoidSample out;
  out.y0 = g.apply(s.y0);
  // branch digit of the old y0 among the preimages of the new y0
  auto pre = g.preimages(out.y0);
  int digit = 0;
  double best = 2.0;
  for (int k = 0; k < static_cast<int>(pre.size()); ++k) {
    double d = circle_dist(pre[k], s.y0);
    if (d < best) {
      best = d;
      digit = k;
    }
  }
  out.word.reserve(s.word.size() + 1);
  out.word.push_back(digit);
  out.word.insert(out.word.end(), s.word.begin(), s.word.end());
  out.backward.reserve(s.backward.size() + 1);
  out.backward.push_back(s.y0);
  out.backward.insert(out.backward.end(), s.backward.begin(), s.backward.end());
  return out;
}

double relation_defect(const ExpandingBase& g, const SolenoidSample& s) {
  double worst = 0.0;
  CirclePoint prev = s.y0;
  for (const CirclePoint& p : s.backward) {
    worst = std::max(worst, circle_dist(g.apply(p), prev));
    prev = p;
  }
  return worst;
}

}  // namespace fibersync

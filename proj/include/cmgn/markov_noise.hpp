#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cmgn/rng.hpp"

namespace cmgn {

// Two-state Markov-Gaussian source. `p` is the probability of staying in the
// current state; each state emits Normal(mu, sigma) with sigma read as a
// standard deviation.
struct MarkovParams {
  double p = 0.815;
  double mu0 = 2.0;
  double sigma0 = 1.0;
  double mu1 = -2.0;
  double sigma1 = 1.0;

  void validate() const;
};

// Returns `current` if u < p, else the other state.
int next_state(int current, double p, double u);

// One draw from the state's Gaussian. sigma == 0 yields mu exactly and
// consumes no randomness.
double sample_state(int state, const MarkovParams& params, Rng& rng);

// Stateful chain. The initial state is a fair coin flip (top bit of the first
// generator output). Each step after the first draws one uniform for the
// transition, then the state's Gaussian.
class MarkovChain {
 public:
  MarkovChain(const MarkovParams& params, std::uint64_t seed);

  double next();
  int state() const { return state_; }

 private:
  MarkovParams params_;
  Rng rng_;
  int state_;
  bool started_ = false;
};

std::vector<double> generate_sequence(const MarkovParams& params,
                                      std::size_t length, std::uint64_t seed);

}  // namespace cmgn

#include "cmgn/markov_noise.hpp"

#include <cmath>
#include <string>

#include "cmgn/errors.hpp"

namespace cmgn {

void MarkovParams::validate() const {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("transition probability must be in (0, 1), got " +
                          std::to_string(p));
  }
  if (!(sigma0 >= 0.0) || !(sigma1 >= 0.0)) {
    throw InvalidArgument("state standard deviations must be non-negative");
  }
  if (!std::isfinite(mu0) || !std::isfinite(mu1) || !std::isfinite(sigma0) ||
      !std::isfinite(sigma1)) {
    throw InvalidArgument("state parameters must be finite");
  }
}

int next_state(int current, double p, double u) {
  return u < p ? current : 1 - current;
}

double sample_state(int state, const MarkovParams& params, Rng& rng) {
  const double mu = state == 0 ? params.mu0 : params.mu1;
  const double sigma = state == 0 ? params.sigma0 : params.sigma1;
  if (sigma == 0.0) return mu;
  return mu + sigma * rng.gaussian();
}

MarkovChain::MarkovChain(const MarkovParams& params, std::uint64_t seed)
    : params_(params), rng_(seed) {
  params_.validate();
  state_ = static_cast<int>(rng_.next_u64() >> 63);
}

double MarkovChain::next() {
  if (started_) {
    state_ = next_state(state_, params_.p, rng_.uniform());
  }
  started_ = true;
  return sample_state(state_, params_, rng_);
}

std::vector<double> generate_sequence(const MarkovParams& params,
                                      std::size_t length, std::uint64_t seed) {
  if (length == 0) throw InvalidArgument("sequence length must be at least 1");
  MarkovChain chain(params, seed);
  std::vector<double> out(length);
  for (double& v : out) v = chain.next();
  return out;
}

}  // namespace cmgn

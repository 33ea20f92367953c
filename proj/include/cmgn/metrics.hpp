#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "cmgn/image.hpp"
#include "cmgn/pattern_gen.hpp"

namespace cmgn {

struct BandingOptions {
  // Jump threshold in codewords; unset: half the inferred quantization step.
  std::optional<double> threshold;
  // On smooth inputs an edge only counts when `plateau` equal codewords sit
  // on each side of the jump.
  int plateau = 2;
  // Half-width of the horizontal running mean used for noise power.
  int smooth_radius = 8;
};

struct BandingReport {
  std::size_t step_count = 0;
  double step_energy = 0.0;  // sum of (|jump| - threshold) over counted edges
  std::size_t distinct_codewords = 0;
  double noise_power = 0.0;  // mean squared deviation from the running mean
  int quantization_step = 1;
  double threshold = 0.5;
};

// GCD of the gaps between consecutive distinct codewords (1 for a constant
// plane).
int inferred_quantization_step(const CodewordPlane& plane);

// Counts horizontal codeword jumps above the threshold. With expected_smooth
// the input is declared to be a smooth gradient, so only jumps between flat
// plateaus (false contours) are counted.
BandingReport banding_index(const CodewordPlane& plane, bool expected_smooth,
                            const BandingOptions& opts = {});

struct PatternStats {
  double mean = 0.0;
  double variance = 0.0;
  // Fraction of gradient energy (central differences) at pixels whose
  // gradient points within 22.5 degrees of the horizontal or vertical axis.
  // About 0.5 for isotropic texture, higher for axis-aligned stripes.
  double orientation_ratio = 0.0;
  double run_length_mean = 0.0;  // same-sign runs along rows
};

PatternStats pattern_stats(const Plane<float>& field);
PatternStats pattern_stats(const NoiseBlock& block);

// Fraction of non-overlapping tile x tile windows whose mean magnitude exceeds
// `threshold`.
double tile_mean_fraction(const Plane<float>& field, int tile, double threshold);

// Mean length of maximal same-sign runs in a sequence (zero counts as
// positive).
double mean_sign_run_length(std::span<const double> values);

}  // namespace cmgn

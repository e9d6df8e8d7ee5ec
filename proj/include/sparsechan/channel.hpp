#pragma once

#include <cstdint>
#include <vector>

#include "sparsechan/linalg.hpp"

namespace sparsechan {

// BPSK probe sequence (+1/-1 symbols). Lengths of the form 2^m - 1 are
// generated as maximal-length LFSR sequences; any other length falls back to
// seeded Bernoulli symbols.
struct ProbeConfig {
  int length = 300;
  std::uint64_t seed = 1;
};

// Sparse fading-tap channel surrogate: K active delays drawn uniformly,
// complex tap gains following a per-block AR(1) with an exponential
// power-delay profile (normalized to unit total power).
struct ChannelConfig {
  int n_taps = 500;              // delay-spread length N
  int sparsity = 15;             // active paths K
  double amplitude_decay = 0.02; // power-delay profile exponent per sample
  double fading_rate = 0.9;      // AR(1) coefficient in [0, 1)
  std::uint64_t seed = 1;
};

// Two-component Gaussian mixture noise: with probability q a sample is drawn
// from the impulsive component of variance sigma_i2, otherwise from the
// background WGN of variance sigma_w2.
struct NoiseConfig {
  double q = 0.0;
  double sigma_w2 = 1.0;
  double sigma_i2 = 0.0;
  std::uint64_t seed = 1;
};

struct SnrReport {
  double snr_db = 0.0;
  double inr_db = 0.0;   // -inf when sigma_i2 = 0
  double sinr_db = 0.0;  // uses the mixture's average noise power
};

struct SimulatedInstance {
  MeasurementModel model;
  ComplexVector x_true;
};

ComplexVector generate_probe(const ProbeConfig& cfg);

// n_blocks consecutive CIR vectors; the support is fixed across blocks and
// every block has exactly cfg.sparsity nonzero taps.
std::vector<ComplexVector> generate_channel(const ChannelConfig& cfg,
                                            int n_blocks);

ComplexVector generate_gmn(int n, const NoiseConfig& cfg);

// SNR = sigma_s2/sigma_w2, INR = sigma_i2/sigma_w2, and the effective
// SINR = sigma_s2 / ((1-q) sigma_w2 + q sigma_i2), all in dB.
SnrReport snr_accounting(double sigma_s2, const NoiseConfig& cfg);

// Builds A from the probe and synthesizes y = A x_true + n.
SimulatedInstance synthesize_instance(const ComplexVector& probe,
                                      const ComplexVector& channel_block,
                                      const NoiseConfig& noise_cfg, int m_obs);

// Same, with a prebuilt convolution matrix (shared across trials).
SimulatedInstance synthesize_instance(const ComplexMatrix& A,
                                      const ComplexVector& channel_block,
                                      const NoiseConfig& noise_cfg);

}  // namespace sparsechan

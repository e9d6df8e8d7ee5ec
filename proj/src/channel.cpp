#include "sparsechan/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sparsechan/rng.hpp"

namespace sparsechan {

namespace {

// Stream tags for deriving independent RNG streams from one seed.
constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;
constexpr std::uint64_t kDelayStream = 0x64656c6179ULL;
constexpr std::uint64_t kFadeStream = 0x66616465ULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

// Feedback taps giving the full 2^m - 1 period for register lengths 2..16,
// each verified by exhaustive state enumeration under the shift-right update
// below.
const std::vector<int>* lfsr_taps(int m) {
  static const std::vector<std::vector<int>> taps = {
      {},      {},           {2, 1},        {3, 1},        {4, 1},
      {5, 3, 2, 1},          {6, 1},        {7, 1},        {8, 3, 2, 1},
      {9, 5, 2, 1},          {10, 5, 2, 1}, {11, 4, 2, 1}, {12, 11, 3, 1},
      {13, 3, 2, 1},         {14, 4, 3, 1}, {15, 1},       {16, 5, 2, 1}};
  if (m < 2 || m > 16) return nullptr;
  return &taps[m];
}

int log2_if_mersenne(int length) {
  for (int m = 2; m <= 16; ++m)
    if (length == (1 << m) - 1) return m;
  return 0;
}

}  // namespace

ComplexVector generate_probe(const ProbeConfig& cfg) {
  if (cfg.length < 1) throw std::invalid_argument("ProbeConfig: length >= 1");
  ComplexVector out(cfg.length);

  const int m = log2_if_mersenne(cfg.length);
  if (const std::vector<int>* taps = m ? lfsr_taps(m) : nullptr) {
    // m-sequence; any nonzero initial state yields the same sequence up to a
    // cyclic shift, so the seed selects the phase.
    std::uint32_t state =
        static_cast<std::uint32_t>(mix_seed(cfg.seed, kProbeStream)) &
        ((1u << m) - 1);
    if (state == 0) state = 1;
    for (int i = 0; i < cfg.length; ++i) {
      const std::uint32_t bit = state & 1u;
      out[i] = bit ? -1.0 : 1.0;
      std::uint32_t fb = 0;
      for (int tap : *taps) fb ^= (state >> (tap - 1)) & 1u;
      state = (state >> 1) | (fb << (m - 1));
    }
  } else {
    Rng rng(cfg.seed, kProbeStream);
    for (int i = 0; i < cfg.length; ++i)
      out[i] = (rng.next_u64() & 1u) ? -1.0 : 1.0;
  }
  return out;
}

std::vector<ComplexVector> generate_channel(const ChannelConfig& cfg,
                                            int n_blocks) {
  if (cfg.n_taps < 1) throw std::invalid_argument("ChannelConfig: n_taps >= 1");
  if (cfg.sparsity < 1 || cfg.sparsity > cfg.n_taps)
    throw std::invalid_argument("ChannelConfig: 1 <= sparsity <= n_taps");
  if (!(cfg.fading_rate >= 0.0) || !(cfg.fading_rate < 1.0))
    throw std::invalid_argument("ChannelConfig: fading_rate in [0, 1)");
  if (n_blocks < 1) throw std::invalid_argument("generate_channel: n_blocks >= 1");

  // K distinct delays, uniform over [0, N).
  Rng delay_rng(cfg.seed, kDelayStream);
  std::vector<int> delays;
  std::vector<char> used(cfg.n_taps, 0);
  while (static_cast<int>(delays.size()) < cfg.sparsity) {
    const int d = static_cast<int>(delay_rng.below(cfg.n_taps));
    if (!used[d]) {
      used[d] = 1;
      delays.push_back(d);
    }
  }
  std::sort(delays.begin(), delays.end());

  // Exponential power-delay profile, normalized to unit total power.
  const int k = cfg.sparsity;
  std::vector<double> power(k);
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    power[i] = std::exp(-cfg.amplitude_decay * delays[i]);
    total += power[i];
  }
  for (double& p : power) p /= total;

  // Stationary AR(1) per tap: h_b = a h_{b-1} + sqrt(1-a^2) w_b with
  // w_b ~ CN(0, p), started from the stationary distribution.
  Rng fade_rng(cfg.seed, kFadeStream);
  const double a = cfg.fading_rate;
  const double innov = std::sqrt(1.0 - a * a);
  std::vector<Complex> gains(k);
  for (int i = 0; i < k; ++i) gains[i] = fade_rng.complex_gaussian(power[i]);

  std::vector<ComplexVector> blocks;
  blocks.reserve(n_blocks);
  for (int b = 0; b < n_blocks; ++b) {
    if (b > 0)
      for (int i = 0; i < k; ++i)
        gains[i] = a * gains[i] + innov * fade_rng.complex_gaussian(power[i]);
    ComplexVector cir(cfg.n_taps, Complex(0.0, 0.0));
    for (int i = 0; i < k; ++i) cir[delays[i]] = gains[i];
    blocks.push_back(std::move(cir));
  }
  return blocks;
}

ComplexVector generate_gmn(int n, const NoiseConfig& cfg) {
  if (n < 1) throw std::invalid_argument("generate_gmn: n >= 1");
  if (!(cfg.q >= 0.0) || !(cfg.q <= 1.0))
    throw std::invalid_argument("NoiseConfig: q in [0, 1]");
  if (!(cfg.sigma_w2 > 0.0) || !(cfg.sigma_i2 >= 0.0))
    throw std::invalid_argument("NoiseConfig: bad variances");

  Rng rng(cfg.seed, kNoiseStream);
  ComplexVector out(n);
  for (int i = 0; i < n; ++i) {
    const double var = rng.bernoulli(cfg.q) ? cfg.sigma_i2 : cfg.sigma_w2;
    out[i] = rng.complex_gaussian(var);
  }
  return out;
}

SnrReport snr_accounting(double sigma_s2, const NoiseConfig& cfg) {
  if (!(sigma_s2 > 0.0) || !(cfg.sigma_w2 > 0.0))
    throw std::invalid_argument("snr_accounting: powers must be > 0");
  SnrReport rep;
  rep.snr_db = 10.0 * std::log10(sigma_s2 / cfg.sigma_w2);
  rep.inr_db = cfg.sigma_i2 > 0.0
                   ? 10.0 * std::log10(cfg.sigma_i2 / cfg.sigma_w2)
                   : -std::numeric_limits<double>::infinity();
  const double avg_noise = (1.0 - cfg.q) * cfg.sigma_w2 + cfg.q * cfg.sigma_i2;
  rep.sinr_db = 10.0 * std::log10(sigma_s2 / avg_noise);
  return rep;
}

SimulatedInstance synthesize_instance(const ComplexVector& probe,
                                      const ComplexVector& channel_block,
                                      const NoiseConfig& noise_cfg, int m_obs) {
  const ComplexMatrix A = build_convolution_matrix(
      probe, static_cast<int>(channel_block.size()), m_obs);
  return synthesize_instance(A, channel_block, noise_cfg);
}

SimulatedInstance synthesize_instance(const ComplexMatrix& A,
                                      const ComplexVector& channel_block,
                                      const NoiseConfig& noise_cfg) {
  if (A.cols != static_cast<int>(channel_block.size()))
    throw std::invalid_argument("synthesize_instance: channel length != cols");
  SimulatedInstance inst;
  inst.x_true = channel_block;
  inst.model.A = A;
  inst.model.y = matvec(A, channel_block);
  const ComplexVector n = generate_gmn(A.rows, noise_cfg);
  for (int i = 0; i < A.rows; ++i) inst.model.y[i] += n[i];
  return inst;
}

}  // namespace sparsechan

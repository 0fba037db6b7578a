// core/src/audio.cc

// Copyright 2026 The csmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "csmix/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "csmix/error.hpp"

namespace csmix {

float Peak(std::span<const float> samples) {
  float peak = 0.0f;
  for (float x : samples) peak = std::max(peak, std::abs(x));
  return peak;
}

double Power(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (float x : samples) sum += static_cast<double>(x) * static_cast<double>(x);
  return sum / static_cast<double>(samples.size());
}

std::size_t SecondsToSamples(double seconds, int rate) {
  return static_cast<std::size_t>(std::llround(seconds * static_cast<double>(rate)));
}

AudioBuffer Cut(const AudioBuffer& buf, double start_s, double dur_s) {
  if (!(start_s >= 0.0) || !(dur_s >= 0.0)) {
    throw ValidationError("cut: negative start or duration");
  }
  const std::size_t start = SecondsToSamples(start_s, buf.sample_rate);
  const std::size_t count = SecondsToSamples(dur_s, buf.sample_rate);
  if (start > buf.size() || count > buf.size() - start) {
    throw ValidationError("cut: interval [" + std::to_string(start_s) + ", " +
                          std::to_string(start_s + dur_s) + "] s exceeds audio of " +
                          std::to_string(buf.duration_s()) + " s");
  }
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(start),
                     buf.samples.begin() + static_cast<std::ptrdiff_t>(start + count));
  return out;
}

namespace {

void ApplyGain(std::vector<float>& samples, double gain) {
  for (float& x : samples) x = static_cast<float>(static_cast<double>(x) * gain);
}

// Scales the whole buffer down if it would exceed kMaxAbsSample.
float EnforceHeadroom(std::vector<float>& samples) {
  const float peak = Peak(samples);
  if (peak <= kMaxAbsSample) return 1.0f;
  const double gain = static_cast<double>(kMaxAbsSample) / static_cast<double>(peak);
  ApplyGain(samples, gain);
  // Rounding can leave a sample one ulp above the limit.
  for (float& x : samples) x = std::clamp(x, -kMaxAbsSample, kMaxAbsSample);
  return static_cast<float>(gain);
}

}  // namespace

AudioBuffer NormalizeAmplitude(const AudioBuffer& seg, float target_peak) {
  const float peak = Peak(seg.samples);
  if (peak == 0.0f) return seg;
  const double target = std::min(static_cast<double>(target_peak),
                                 static_cast<double>(kMaxAbsSample));
  AudioBuffer out = seg;
  ApplyGain(out.samples, target / static_cast<double>(peak));
  return out;
}

float SelectTargetPeak(const std::vector<Segment>& segments, const TargetPeakPolicy& policy) {
  if (policy.kind == TargetPeakPolicy::Kind::kFixed) {
    return std::min(policy.value, kMaxAbsSample);
  }
  auto collect = [&](bool hosts_only) {
    std::vector<float> peaks;
    for (const Segment& s : segments) {
      if (hosts_only && s.role != SegmentRole::kHost) continue;
      if (float p = Peak(s.audio.samples); p > 0.0f) peaks.push_back(p);
    }
    return peaks;
  };
  std::vector<float> peaks = collect(true);
  if (peaks.empty()) peaks = collect(false);
  if (peaks.empty()) return 0.0f;
  std::sort(peaks.begin(), peaks.end());
  const std::size_t mid = peaks.size() / 2;
  if (peaks.size() % 2 == 1) return peaks[mid];
  return static_cast<float>(0.5 * (static_cast<double>(peaks[mid - 1]) + peaks[mid]));
}

AudioBuffer Splice(const std::vector<Segment>& segments, const SpliceConfig& cfg,
                   SpliceInfo* info) {
  if (cfg.crossfade_ms < 0.0 || cfg.inter_segment_silence_ms < 0.0) {
    throw ValidationError("splice: crossfade and silence must be >= 0");
  }
  AudioBuffer out;
  if (segments.empty()) return out;
  const int rate = segments.front().audio.sample_rate;
  for (const Segment& s : segments) {
    if (s.audio.sample_rate != rate) {
      throw ValidationError("splice: sample-rate mismatch (" + std::to_string(rate) + " vs " +
                            std::to_string(s.audio.sample_rate) + ")");
    }
  }
  out.sample_rate = rate;

  const std::size_t k = segments.size();
  const std::size_t fade = k > 1 ? SecondsToSamples(cfg.crossfade_ms / 1000.0, rate) : 0;
  const std::size_t silence =
      k > 1 ? SecondsToSamples(cfg.inter_segment_silence_ms / 1000.0, rate) : 0;
  if (fade > 0) {
    for (const Segment& s : segments) {
      if (s.audio.size() <= fade) {
        throw ValidationError("splice: segment of " + std::to_string(s.audio.size()) +
                              " samples is not longer than the " + std::to_string(fade) +
                              "-sample crossfade");
      }
    }
  }

  float target = 0.0f;
  if (cfg.norm_mode == NormMode::kPeak) target = SelectTargetPeak(segments, cfg.target_peak);

  std::vector<std::size_t> offsets(k, 0);
  for (std::size_t i = 1; i < k; ++i) {
    offsets[i] = offsets[i - 1] + segments[i - 1].audio.size() + silence - fade;
  }
  const std::size_t total = offsets[k - 1] + segments[k - 1].audio.size();
  std::vector<double> mix(total, 0.0);

  for (std::size_t i = 0; i < k; ++i) {
    const AudioBuffer& src = segments[i].audio;
    double gain = 1.0;
    if (target > 0.0f && segments[i].role == SegmentRole::kDonor) {
      if (const float peak = Peak(src.samples); peak > 0.0f) {
        gain = static_cast<double>(target) / static_cast<double>(peak);
      }
    }
    const std::size_t n = src.size();
    for (std::size_t t = 0; t < n; ++t) {
      double w = gain;
      if (i > 0 && t < fade) {
        w *= (static_cast<double>(t) + 0.5) / static_cast<double>(fade);
      }
      if (i + 1 < k && t + fade >= n) {
        const std::size_t u = t + fade - n;  // position inside the fade-out
        w *= 1.0 - (static_cast<double>(u) + 0.5) / static_cast<double>(fade);
      }
      mix[offsets[i] + t] += w * static_cast<double>(src.samples[t]);
    }
  }

  out.samples.resize(total);
  for (std::size_t t = 0; t < total; ++t) out.samples[t] = static_cast<float>(mix[t]);
  const float rescale = EnforceHeadroom(out.samples);
  if (info != nullptr) *info = {target, rescale, fade, silence};
  return out;
}

AudioBuffer MixNoise(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db,
                     Rng& rng, NoiseMixInfo* info) {
  if (clean.sample_rate != noise.sample_rate) {
    throw ValidationError("mix_noise: sample-rate mismatch (" +
                          std::to_string(clean.sample_rate) + " vs " +
                          std::to_string(noise.sample_rate) + ")");
  }
  if (noise.samples.empty() || Peak(noise.samples) == 0.0f) {
    throw ValidationError("mix_noise: noise is silent");
  }
  NoiseMixInfo local;
  const std::size_t n = clean.size();
  std::vector<float> aligned(n);
  if (noise.size() > n) {
    local.noise_offset = static_cast<std::size_t>(rng.Index(noise.size() - n + 1));
    std::copy_n(noise.samples.begin() + static_cast<std::ptrdiff_t>(local.noise_offset), n,
                aligned.begin());
  } else {
    for (std::size_t i = 0; i < n; ++i) aligned[i] = noise.samples[i % noise.size()];
  }

  const double p_clean = Power(clean.samples);
  const double p_noise = Power(aligned);
  if (n > 0 && p_noise == 0.0) throw ValidationError("mix_noise: selected noise excerpt is silent");
  local.noise_gain =
      p_clean > 0.0 ? std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0))) : 0.0;

  std::vector<double> mix(n);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mix[i] = static_cast<double>(clean.samples[i]) + local.noise_gain * aligned[i];
    peak = std::max(peak, std::abs(mix[i]));
  }
  double rescale = 1.0;
  if (peak > static_cast<double>(kMaxAbsSample)) rescale = kMaxAbsSample / peak;
  local.output_rescale = static_cast<float>(rescale);

  AudioBuffer out;
  out.sample_rate = clean.sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.samples[i] = std::clamp(static_cast<float>(mix[i] * rescale), -kMaxAbsSample, kMaxAbsSample);
  }
  if (info != nullptr) *info = local;
  return out;
}

AudioBuffer SpeedPerturb(const AudioBuffer& buf, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ValidationError("speed factor must be > 0");
  }
  if (factor == 1.0) return buf;

  constexpr double kZeroCrossings = 16.0;
  const std::size_t n_in = buf.size();
  const auto n_out = static_cast<std::size_t>(std::llround(static_cast<double>(n_in) / factor));
  // Cutoff relative to the input Nyquist; lowered when compressing time.
  const double cutoff = std::min(1.0, 1.0 / factor);
  const double half_width = kZeroCrossings / cutoff;

  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.resize(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    const double t = static_cast<double>(k) * factor;
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil(t - half_width));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor(t + half_width));
    double acc = 0.0;
    for (std::ptrdiff_t m = std::max<std::ptrdiff_t>(lo, 0);
         m <= std::min<std::ptrdiff_t>(hi, static_cast<std::ptrdiff_t>(n_in) - 1); ++m) {
      const double x = t - static_cast<double>(m);
      const double arg = std::numbers::pi * cutoff * x;
      const double sinc = x == 0.0 ? 1.0 : std::sin(arg) / arg;
      const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * x / half_width));
      acc += cutoff * sinc * window * static_cast<double>(buf.samples[static_cast<std::size_t>(m)]);
    }
    out.samples[k] = static_cast<float>(acc);
  }
  EnforceHeadroom(out.samples);
  return out;
}

void AugmentConfig::Validate() const {
  if (!(noise_prob >= 0.0 && noise_prob <= 1.0) || !(speed_prob >= 0.0 && speed_prob <= 1.0)) {
    throw ValidationError("augmentation probabilities must lie in [0, 1]");
  }
  if (!(snr_db_min <= snr_db_max)) throw ValidationError("SNR range must be ordered");
  if (speed_factors.empty()) throw ValidationError("at least one speed factor is required");
  for (double f : speed_factors) {
    if (!(f > 0.0)) throw ValidationError("speed factors must be > 0");
  }
}

AudioBuffer Augment(const AudioBuffer& buf, const std::string& utt_id,
                    std::size_t noise_count, const NoiseLoader& load_noise,
                    const AugmentConfig& cfg, AugmentInfo* info) {
  cfg.Validate();
  Rng rng = Rng(cfg.seed).With(utt_id).With("augment");
  // All decisions are drawn up front so each one is independent of the
  // others' outcomes.
  const bool do_speed = rng.Bernoulli(cfg.speed_prob);
  const std::size_t speed_index = rng.Index(cfg.speed_factors.size());
  const bool do_noise = rng.Bernoulli(cfg.noise_prob);
  const double snr_db = rng.Uniform(cfg.snr_db_min, cfg.snr_db_max);
  const std::size_t noise_index = noise_count > 0 ? rng.Index(noise_count) : 0;

  AugmentInfo local;
  AudioBuffer out = buf;
  if (do_speed) {
    local.speed_factor = cfg.speed_factors[speed_index];
    out = SpeedPerturb(out, *local.speed_factor);
  }
  if (do_noise) {
    if (noise_count == 0) throw ValidationError("noise augmentation requested without noise clips");
    local.snr_db = snr_db;
    local.noise_index = noise_index;
    Rng offset_rng = Rng(cfg.seed).With(utt_id).With("noise-offset");
    out = MixNoise(out, load_noise(noise_index), snr_db, offset_rng, &local.noise);
  }
  if (info != nullptr) *info = local;
  return out;
}

}  // namespace csmix

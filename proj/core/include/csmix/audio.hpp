// csmix/audio.hpp

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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csmix/rng.hpp"

namespace csmix {

/// Largest magnitude any emitted sample may have.
inline constexpr float kMaxAbsSample = 1.0f - 1e-6f;

/// Mono PCM in floating point, nominally within [-1, 1].
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = 16000;

  std::size_t size() const { return samples.size(); }
  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
  friend bool operator==(const AudioBuffer&, const AudioBuffer&) = default;
};

float Peak(std::span<const float> samples);
/// Mean square of the samples (0 for an empty span).
double Power(std::span<const float> samples);

/// Seconds to a sample count at `rate`, rounded to nearest.
std::size_t SecondsToSamples(double seconds, int rate);

// --- WAV container: 16-bit signed little-endian mono PCM ------------------

AudioBuffer ReadWav(const std::filesystem::path& path);
AudioBuffer DecodeWav(std::span<const std::uint8_t> bytes);
void WriteWav(const AudioBuffer& buf, const std::filesystem::path& path);
std::vector<std::uint8_t> EncodeWav(const AudioBuffer& buf);
/// Sample count and rate from the header only.
struct WavInfo {
  std::size_t num_samples = 0;
  int sample_rate = 0;
};
WavInfo ReadWavInfo(const std::filesystem::path& path);

// --- slicing and gain -----------------------------------------------------

/// Copies round(dur_s * rate) samples starting at round(start_s * rate).
/// Throws ValidationError if the interval leaves the buffer.
AudioBuffer Cut(const AudioBuffer& buf, double start_s, double dur_s);

/// Pure gain so the peak equals target_peak (capped at kMaxAbsSample).
/// Silent input is returned unchanged.
AudioBuffer NormalizeAmplitude(const AudioBuffer& seg, float target_peak);

enum class NormMode { kPeak, kOff };

struct TargetPeakPolicy {
  enum class Kind { kMedianHostPeak, kFixed } kind = Kind::kMedianHostPeak;
  float value = 0.5f;  // used by kFixed
};

struct SpliceConfig {
  NormMode norm_mode = NormMode::kPeak;
  double crossfade_ms = 10.0;
  double inter_segment_silence_ms = 0.0;
  TargetPeakPolicy target_peak;
};

enum class SegmentRole { kHost, kDonor };

struct Segment {
  AudioBuffer audio;
  SegmentRole role = SegmentRole::kHost;
};

struct SpliceInfo {
  float target_peak = 0.0f;      // 0 when normalization is off
  float output_rescale = 1.0f;   // global gain applied to stay under full scale
  std::size_t crossfade_samples = 0;
  std::size_t silence_samples = 0;
};

/// Target peak the policy selects for these segments: the fixed value, or
/// the median peak of the non-silent host segments (falling back to all
/// non-silent segments when there is no host audio).
float SelectTargetPeak(const std::vector<Segment>& segments, const TargetPeakPolicy& policy);

/// Concatenates segments in order. With peak normalization every donor
/// segment is scaled to the policy's target first. Consecutive segments are
/// joined with a linear crossfade, after an optional silence gap, so the
/// output has sum(len) - (k-1)*crossfade + (k-1)*silence samples.
AudioBuffer Splice(const std::vector<Segment>& segments, const SpliceConfig& cfg,
                   SpliceInfo* info = nullptr);

struct NoiseMixInfo {
  double noise_gain = 0.0;
  float output_rescale = 1.0f;
  std::size_t noise_offset = 0;
};

/// Adds `noise` to `clean` at the requested SNR. Longer noise is cut at a
/// random offset drawn from `rng`; shorter noise is looped. If the mixture
/// would clip, both components are scaled down together.
AudioBuffer MixNoise(const AudioBuffer& clean, const AudioBuffer& noise, double snr_db,
                     Rng& rng, NoiseMixInfo* info = nullptr);

/// Resamples by 1/factor with a windowed-sinc interpolator, so playback at
/// the original rate is `factor` times faster. Output has
/// round(size / factor) samples.
AudioBuffer SpeedPerturb(const AudioBuffer& buf, double factor);

struct AugmentConfig {
  double noise_prob = 0.20;
  double snr_db_min = 10.0;
  double snr_db_max = 30.0;
  double speed_prob = 0.20;
  std::vector<double> speed_factors{0.9, 1.1};
  std::uint64_t seed = 0;

  void Validate() const;
};

struct AugmentInfo {
  std::optional<double> speed_factor;
  std::optional<double> snr_db;
  std::optional<std::size_t> noise_index;
  NoiseMixInfo noise;

  bool changed() const { return speed_factor.has_value() || snr_db.has_value(); }
};

/// Loads noise clip \p index of the pool on demand.
using NoiseLoader = std::function<AudioBuffer(std::size_t index)>;

/// Decides and applies speed and noise augmentation for one utterance from
/// the (seed, utt_id) stream. Speed is applied before noise. A noise clip is
/// only requested when the noise branch fires.
AudioBuffer Augment(const AudioBuffer& buf, const std::string& utt_id,
                    std::size_t noise_count, const NoiseLoader& load_noise,
                    const AugmentConfig& cfg, AugmentInfo* info = nullptr);

}  // namespace csmix

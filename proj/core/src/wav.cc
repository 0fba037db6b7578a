// core/src/wav.cc

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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "csmix/audio.hpp"
#include "csmix/error.hpp"

namespace csmix {

namespace {

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct ParsedWav {
  int sample_rate = 0;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
};

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

ParsedWav ParseHeader(std::span<const std::uint8_t> b) {
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError("not a RIFF/WAVE file");
  }
  ParsedWav wav;
  bool have_fmt = false, have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size() && !have_data) {
    const std::uint8_t* chunk = b.data() + pos;
    const std::size_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > b.size()) throw ValidationError("truncated fmt chunk");
      const std::uint16_t format = ReadU16(b.data() + body);
      const std::uint16_t channels = ReadU16(b.data() + body + 2);
      const std::uint32_t rate = ReadU32(b.data() + body + 4);
      const std::uint16_t bits = ReadU16(b.data() + body + 14);
      if (format != kFormatPcm && format != kFormatExtensible) {
        throw ValidationError("unsupported WAV format tag " + std::to_string(format));
      }
      if (channels != 1) {
        throw ValidationError("expected mono audio, got " + std::to_string(channels) + " channels");
      }
      if (bits != 16) {
        throw ValidationError("expected 16-bit PCM, got " + std::to_string(bits) + " bits");
      }
      if (rate == 0) throw ValidationError("WAV sample rate is 0");
      wav.sample_rate = static_cast<int>(rate);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw ValidationError("WAV data chunk before fmt chunk");
      wav.data_offset = body;
      wav.data_size = std::min(size, b.size() - body) & ~std::size_t{1};
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_data) throw ValidationError("WAV has no data chunk");
  return wav;
}

std::vector<std::uint8_t> Slurp(const std::filesystem::path& path, std::size_t limit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio " + path.string());
  std::vector<std::uint8_t> bytes;
  if (limit == 0) {
    bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  } else {
    bytes.resize(limit);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(limit));
    bytes.resize(static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  return bytes;
}

}  // namespace

AudioBuffer DecodeWav(std::span<const std::uint8_t> bytes) {
  const ParsedWav wav = ParseHeader(bytes);
  AudioBuffer buf;
  buf.sample_rate = wav.sample_rate;
  buf.samples.resize(wav.data_size / 2);
  const std::uint8_t* p = bytes.data() + wav.data_offset;
  for (std::size_t i = 0; i < buf.samples.size(); ++i) {
    const auto s = static_cast<std::int16_t>(ReadU16(p + 2 * i));
    buf.samples[i] = static_cast<float>(s) / 32768.0f;
  }
  return buf;
}

AudioBuffer ReadWav(const std::filesystem::path& path) {
  const auto bytes = Slurp(path, 0);
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

WavInfo ReadWavInfo(const std::filesystem::path& path) {
  // Headers with LIST/INFO chunks still fit comfortably in 64 KiB.
  const auto bytes = Slurp(path, 1 << 16);
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  const auto file_size = static_cast<std::size_t>(in.tellg());
  try {
    const ParsedWav wav = ParseHeader(bytes);
    const std::size_t available = file_size > wav.data_offset ? file_size - wav.data_offset : 0;
    const std::size_t declared = ReadU32(bytes.data() + wav.data_offset - 4);
    return {std::min(declared, available) / 2, wav.sample_rate};
  } catch (const Error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeWav(const AudioBuffer& buf) {
  if (buf.sample_rate <= 0) throw ValidationError("sample rate must be > 0");
  const std::uint32_t data_size = static_cast<std::uint32_t>(buf.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(buf.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_size);
  for (float x : buf.samples) {
    const long v = std::lrint(static_cast<double>(x) * 32768.0);
    PutU16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::clamp(v, -32768L, 32767L))));
  }
  return out;
}

void WriteWav(const AudioBuffer& buf, const std::filesystem::path& path) {
  const auto bytes = EncodeWav(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write audio " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on " + path.string());
}

}  // namespace csmix

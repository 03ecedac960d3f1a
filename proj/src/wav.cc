/* Copyright 2026 The Fluency Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "fluency/audio.h"
#include "fluency/errors.h"

namespace fluency {
namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatMp3 = 0x55;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint16_t ReadU16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

uint32_t ReadU32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

void PutU16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xFF));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void PutU32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

struct FormatChunk {
  uint16_t format = 0;
  uint16_t channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
};

FormatChunk ParseFormat(const uint8_t* p, uint32_t size,
                        const std::string& source) {
  if (size < 16) throw DecodeError(source + ": fmt chunk too short");
  FormatChunk fmt;
  fmt.format = ReadU16(p);
  fmt.channels = ReadU16(p + 2);
  fmt.sample_rate = ReadU32(p + 4);
  fmt.bits_per_sample = ReadU16(p + 14);
  if (fmt.format == kFormatExtensible) {
    if (size < 40) throw DecodeError(source + ": extensible fmt chunk too short");
    // The sub-format GUID starts with the plain format code.
    fmt.format = ReadU16(p + 24);
  }
  return fmt;
}

}  // namespace

AudioBuffer DecodeWav(std::span<const uint8_t> bytes, std::string source_id) {
  const std::string& src = source_id.empty() ? std::string("<memory>") : source_id;
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DecodeError(src + ": not a RIFF/WAVE stream");
  }

  std::optional<FormatChunk> fmt;
  std::span<const uint8_t> data;
  bool have_data = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* header = bytes.data() + pos;
    const uint32_t chunk_size = ReadU32(header + 4);
    const size_t body = pos + 8;
    const size_t available = bytes.size() - body;
    if (std::memcmp(header, "fmt ", 4) == 0) {
      if (chunk_size > available) throw DecodeError(src + ": truncated fmt chunk");
      fmt = ParseFormat(bytes.data() + body, chunk_size, src);
    } else if (std::memcmp(header, "data", 4) == 0) {
      if (chunk_size > available) {
        throw DecodeError(src + ": truncated data chunk (declared " +
                          std::to_string(chunk_size) + " bytes, found " +
                          std::to_string(available) + ")");
      }
      data = bytes.subspan(body, chunk_size);
      have_data = true;
      break;
    }
    // Chunks are word aligned.
    pos = body + chunk_size + (chunk_size & 1u);
  }
  if (!fmt) throw DecodeError(src + ": missing fmt chunk");
  if (!have_data) throw DecodeError(src + ": missing data chunk");

  if (fmt->format == kFormatMp3) {
    throw UnsupportedFormat(src + ": MP3 payload; transcode to WAV first");
  }
  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits_per_sample == 16;
  const bool float32 = fmt->format == kFormatFloat && fmt->bits_per_sample == 32;
  if (!pcm16 && !float32) {
    throw UnsupportedFormat(src + ": unsupported encoding (format " +
                            std::to_string(fmt->format) + ", " +
                            std::to_string(fmt->bits_per_sample) + " bits)");
  }
  if (fmt->channels < 1 || fmt->channels > 2) {
    throw UnsupportedFormat(src + ": " + std::to_string(fmt->channels) +
                            " channels (1 or 2 supported)");
  }
  if (fmt->sample_rate < 8000 || fmt->sample_rate > 192000) {
    throw UnsupportedFormat(src + ": sample rate " +
                            std::to_string(fmt->sample_rate) +
                            " Hz outside [8000, 192000]");
  }

  const size_t bytes_per_sample = fmt->bits_per_sample / 8;
  const size_t frame_bytes = bytes_per_sample * fmt->channels;
  if (data.size() % frame_bytes != 0) {
    throw DecodeError(src + ": data chunk is not a whole number of frames");
  }

  AudioBuffer buffer;
  buffer.sample_rate = static_cast<int>(fmt->sample_rate);
  buffer.channels = fmt->channels;
  buffer.source_id = std::move(source_id);
  const size_t count = data.size() / bytes_per_sample;
  buffer.samples.resize(count);
  for (size_t i = 0; i < count; ++i) {
    const uint8_t* p = data.data() + i * bytes_per_sample;
    if (pcm16) {
      const auto code = static_cast<int16_t>(ReadU16(p));
      buffer.samples[i] = static_cast<float>(code) / 32768.0f;
    } else {
      const float v = std::bit_cast<float>(ReadU32(p));
      if (!std::isfinite(v)) throw DecodeError(src + ": non-finite float sample");
      buffer.samples[i] = std::clamp(v, -1.0f, 1.0f);
    }
  }
  return buffer;
}

AudioBuffer ReadWavFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError(path.string() + ": cannot open");
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return DecodeWav(bytes, path.string());
}

std::vector<uint8_t> EncodeWav16(const AudioBuffer& buffer) {
  const uint32_t data_bytes = static_cast<uint32_t>(buffer.samples.size() * 2);
  std::vector<uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, static_cast<uint16_t>(buffer.channels));
  PutU32(out, static_cast<uint32_t>(buffer.sample_rate));
  PutU32(out, static_cast<uint32_t>(buffer.sample_rate * buffer.channels * 2));
  PutU16(out, static_cast<uint16_t>(buffer.channels * 2));
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (float s : buffer.samples) {
    const double scaled = std::nearbyint(static_cast<double>(s) * 32768.0);
    const auto code = static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    PutU16(out, static_cast<uint16_t>(code));
  }
  return out;
}

void WriteWavFile(const std::filesystem::path& path, const AudioBuffer& buffer) {
  const std::vector<uint8_t> bytes = EncodeWav16(buffer);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

AudioBuffer DownmixMono(const AudioBuffer& buffer) {
  if (buffer.channels <= 1) return buffer;
  AudioBuffer mono;
  mono.sample_rate = buffer.sample_rate;
  mono.channels = 1;
  mono.source_id = buffer.source_id;
  const size_t frames = buffer.num_frames();
  const auto channels = static_cast<size_t>(buffer.channels);
  mono.samples.resize(frames);
  for (size_t t = 0; t < frames; ++t) {
    double sum = 0.0;
    for (size_t c = 0; c < channels; ++c) sum += buffer.samples[t * channels + c];
    mono.samples[t] = static_cast<float>(sum / static_cast<double>(channels));
  }
  return mono;
}

AudioBuffer LoadCanonical(const std::filesystem::path& path) {
  return Resample(DownmixMono(ReadWavFile(path)), kCanonicalSampleRate);
}

}  // namespace fluency

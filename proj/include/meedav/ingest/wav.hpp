#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <vector>

#include "meedav/error.hpp"

namespace meedav::ingest {

/// Mono audio with amplitudes in [-1, 1].
struct AudioRecord {
  double sample_rate = 0.0;
  std::vector<double> samples;

  double duration_s() const { return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0; }
};

namespace wav_detail {

constexpr std::uint16_t format_pcm = 1;
constexpr std::uint16_t format_float = 3;
constexpr std::uint16_t format_extensible = 0xFFFE;

inline std::uint32_t read_u32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

inline std::uint16_t read_u16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    static_cast<unsigned char>(b[at + 1]) << 8);
}

inline double decode_sample(const unsigned char* p, unsigned bits, bool is_float) {
  if (is_float) {
    std::uint32_t raw = p[0] | p[1] << 8 | p[2] << 16 | static_cast<std::uint32_t>(p[3]) << 24;
    float f;
    std::memcpy(&f, &raw, sizeof f);
    if (!std::isfinite(f)) fail(ErrorCode::parse_error, "non-finite float sample");
    return std::clamp(static_cast<double>(f), -1.0, 1.0);
  }
  switch (bits) {
    case 8: return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: return static_cast<std::int16_t>(p[0] | p[1] << 8) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default: {
      auto raw = static_cast<std::uint32_t>(p[0] | p[1] << 8 | p[2] << 16) | static_cast<std::uint32_t>(p[3]) << 24;
      return static_cast<std::int32_t>(raw) / 2147483648.0;
    }
  }
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace wav_detail

/// Decodes a RIFF/WAVE container holding 8/16/24/32-bit PCM or 32-bit float.
/// Multi-channel input is averaged to mono; integer samples are divided by
/// the magnitude of their type's minimum (so the most negative code maps to -1).
inline AudioRecord load_audio(std::string_view bytes) {
  using namespace wav_detail;
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    fail(ErrorCode::parse_error, "not a RIFF/WAVE container");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::string_view data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const auto id = bytes.substr(pos, 4);
    const std::uint32_t size = read_u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) fail(ErrorCode::parse_error, "truncated '" + std::string(id) + "' chunk");
    if (id == "fmt ") {
      if (size < 16) fail(ErrorCode::parse_error, "fmt chunk too short");
      format = read_u16(bytes, body);
      channels = read_u16(bytes, body + 2);
      rate = read_u32(bytes, body + 4);
      bits = read_u16(bytes, body + 14);
      if (format == format_extensible) {
        if (size < 40) fail(ErrorCode::parse_error, "extensible fmt chunk too short");
        format = read_u16(bytes, body + 24);
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) fail(ErrorCode::parse_error, "missing fmt chunk");
  if (!have_data) fail(ErrorCode::parse_error, "missing data chunk");

  const bool is_float = format == format_float;
  if (format != format_pcm && !is_float)
    fail(ErrorCode::unsupported_format, "compressed WAV codec " + std::to_string(format) + " is not supported");
  if (is_float ? bits != 32 : (bits != 8 && bits != 16 && bits != 24 && bits != 32))
    fail(ErrorCode::unsupported_format, std::to_string(bits) + "-bit samples are not supported");
  if (channels == 0) fail(ErrorCode::parse_error, "zero channels");
  if (rate == 0) fail(ErrorCode::parse_error, "zero sample rate");

  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  if (data.size() % frame_bytes != 0) fail(ErrorCode::parse_error, "data chunk ends mid-frame");
  const std::size_t frames = data.size() / frame_bytes;

  AudioRecord rec;
  rec.sample_rate = rate;
  rec.samples.resize(frames);
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  for (std::size_t f = 0; f < frames; ++f) {
    double sum = 0.0;
    for (unsigned c = 0; c < channels; ++c, p += bits / 8) sum += decode_sample(p, bits, is_float);
    rec.samples[f] = channels == 1 ? sum : sum / channels;
  }
  return rec;
}

enum class WavEncoding { pcm16, float32 };

/// Encodes mono audio as a canonical 44-byte-header WAV file.
inline std::string encode_wav(const AudioRecord& audio, WavEncoding encoding = WavEncoding::pcm16) {
  using namespace wav_detail;
  const std::uint16_t bits = encoding == WavEncoding::pcm16 ? 16 : 32;
  const auto rate = static_cast<std::uint32_t>(std::lround(audio.sample_rate));
  const auto data_size = static_cast<std::uint32_t>(audio.samples.size() * (bits / 8));

  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put_u32(out, 36 + data_size);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, encoding == WavEncoding::pcm16 ? format_pcm : format_float);
  put_u16(out, 1);
  put_u32(out, rate);
  put_u32(out, rate * (bits / 8));
  put_u16(out, bits / 8);
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_size);
  for (double s : audio.samples) {
    s = std::clamp(s, -1.0, 1.0);
    if (encoding == WavEncoding::pcm16) {
      auto v = static_cast<std::int16_t>(std::clamp(std::lround(s * 32768.0), -32768L, 32767L));
      put_u16(out, static_cast<std::uint16_t>(v));
    } else {
      float f = static_cast<float>(s);
      std::uint32_t raw;
      std::memcpy(&raw, &f, sizeof raw);
      put_u32(out, raw);
    }
  }
  return out;
}

}  // namespace meedav::ingest

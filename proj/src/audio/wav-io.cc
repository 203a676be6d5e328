// audio/wav-io.cc

// Copyright 2026  The BargeBench Authors
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

#include "bargebench/audio/wav-io.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "bargebench/common/error.h"

namespace bargebench {

namespace {

uint32_t ReadU32(const uint8_t *p) {
  return uint32_t(p[0]) | (uint32_t(p[1]) << 8) | (uint32_t(p[2]) << 16) |
         (uint32_t(p[3]) << 24);
}

uint16_t ReadU16(const uint8_t *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xff));
  out->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

Waveform ReadWav(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open WAV file " + path.string());
  std::vector<uint8_t> data((std::istreambuf_iterator<char>(is)),
                            std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    throw FormatError(where + "not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const uint8_t *chunk = data.data() + pos;
    uint32_t chunk_size = ReadU32(chunk + 4);
    size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + 16 > data.size())
        throw FormatError(where + "truncated fmt chunk");
      format = ReadU16(data.data() + body);
      channels = ReadU16(data.data() + body + 2);
      rate = ReadU32(data.data() + body + 4);
      bits = ReadU16(data.data() + body + 14);
      // WAVE_FORMAT_EXTENSIBLE carries the real format in the sub-format GUID.
      if (format == 0xFFFE && chunk_size >= 40 && body + 26 <= data.size())
        format = ReadU16(data.data() + body + 24);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw FormatError(where + "data chunk before fmt chunk");
      if (format != 1)
        throw FormatError(where + "audio_format=" + std::to_string(format) +
                          " (only PCM=1 is supported)");
      if (channels != 1)
        throw FormatError(where + "channels=" + std::to_string(channels));
      if (bits != 16)
        throw FormatError(where + "bits_per_sample=" + std::to_string(bits));
      if (rate == 0) throw FormatError(where + "sample_rate=0");
      size_t n_bytes = std::min<size_t>(chunk_size, data.size() - body);
      size_t n = n_bytes / 2;
      Waveform w;
      w.sample_rate = static_cast<int>(rate);
      w.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        auto code = static_cast<int16_t>(ReadU16(data.data() + body + 2 * i));
        w.samples[i] = code / 32768.0;
      }
      return w;
    }
    pos = body + chunk_size + (chunk_size & 1);
  }
  throw FormatError(where + (have_fmt ? "missing data chunk" : "missing fmt chunk"));
}

void WriteWav(const std::filesystem::path &path, const Waveform &w) {
  if (w.sample_rate <= 0)
    throw ConfigError("sample_rate=" + std::to_string(w.sample_rate));
  const uint32_t n_bytes = static_cast<uint32_t>(w.samples.size() * 2);
  std::string out;
  out.reserve(44 + n_bytes);
  out += "RIFF";
  PutU32(&out, 36 + n_bytes);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, 1);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(w.sample_rate));
  PutU32(&out, static_cast<uint32_t>(w.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, n_bytes);
  for (double v : w.samples) {
    double scaled = std::nearbyint(v * 32768.0);
    if (!(scaled >= -32768.0)) scaled = -32768.0;  // also catches NaN
    if (scaled > 32767.0) scaled = 32767.0;
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(scaled)));
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write WAV file " + path.string());
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw IoError("short write to " + path.string());
}

}  // namespace bargebench

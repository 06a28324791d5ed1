// audio.cpp

// Copyright 2026  The revspeech Authors
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

#include "revspeech/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>

#include "revspeech/errors.hpp"

namespace revspeech {

namespace {

constexpr std::uint16_t kFormatPcm = 1;

std::uint32_t ReadU32(const std::string &b, std::size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 3])) << 24;
}

std::uint16_t ReadU16(const std::string &b, std::size_t pos) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[pos]) |
                                    static_cast<unsigned char>(b[pos + 1]) << 8);
}

void PutU32(std::string &b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string &b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xFF));
  b.push_back(static_cast<char>((v >> 8) & 0xFF));
}

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits_per_sample = 0;
};

}  // namespace

AudioBuffer ParseWav(const std::string &bytes) {
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 ||
      bytes.compare(8, 4, "WAVE") != 0)
    throw FormatError("not a RIFF/WAVE file");
  const std::uint64_t riff_size = ReadU32(bytes, 4);
  if (riff_size + 8 != bytes.size())
    throw FormatError("RIFF size field does not match file length");

  std::optional<FmtChunk> fmt;
  std::size_t data_pos = 0, data_len = 0;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos < bytes.size()) {
    if (pos + 8 > bytes.size()) throw FormatError("truncated chunk header");
    const std::string id = bytes.substr(pos, 4);
    const std::uint64_t len = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size())
      throw FormatError("chunk '" + id + "' extends past end of file");
    if (id == "fmt ") {
      if (len < 16) throw FormatError("fmt chunk too short");
      FmtChunk f;
      f.format = ReadU16(bytes, body);
      f.channels = ReadU16(bytes, body + 2);
      f.sample_rate = ReadU32(bytes, body + 4);
      f.block_align = ReadU16(bytes, body + 12);
      f.bits_per_sample = ReadU16(bytes, body + 14);
      fmt = f;
    } else if (id == "data") {
      if (have_data) throw FormatError("multiple data chunks");
      have_data = true;
      data_pos = body;
      data_len = static_cast<std::size_t>(len);
    }
    // Chunks are word aligned.
    pos = body + static_cast<std::size_t>(len) + (len & 1);
  }
  if (!fmt) throw FormatError("missing fmt chunk");
  if (!have_data) throw FormatError("missing data chunk");
  if (fmt->format != kFormatPcm)
    throw UnsupportedFormatError("unsupported WAV encoding (format code " +
                                 std::to_string(fmt->format) + ")");
  if (fmt->bits_per_sample != 16)
    throw UnsupportedFormatError("unsupported PCM sample width: " +
                                 std::to_string(fmt->bits_per_sample) + " bits");
  if (fmt->channels != 1 && fmt->channels != 2)
    throw UnsupportedFormatError("unsupported channel count: " +
                                 std::to_string(fmt->channels));
  if (fmt->sample_rate == 0) throw FormatError("sample rate is zero");
  if (fmt->block_align != 2 * fmt->channels)
    throw FormatError("block_align inconsistent with channels and sample width");
  if (data_len % fmt->block_align != 0)
    throw FormatError("data chunk length is not a whole number of frames");

  const std::size_t frames = data_len / fmt->block_align;
  AudioBuffer buf;
  buf.sample_rate_hz = static_cast<int>(fmt->sample_rate);
  buf.samples.resize(static_cast<Eigen::Index>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    const std::size_t at = data_pos + i * fmt->block_align;
    double acc = 0.0;
    for (std::uint16_t c = 0; c < fmt->channels; ++c)
      acc += static_cast<std::int16_t>(ReadU16(bytes, at + 2 * c)) / 32768.0;
    buf.samples(static_cast<Eigen::Index>(i)) = acc / fmt->channels;
  }
  return buf;
}

AudioBuffer ReadWav(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseWav(bytes);
}

std::int16_t QuantizeSample(double s) {
  // std::round is half-away-from-zero.
  const double q = std::round(s * 32768.0);
  return static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
}

std::string EncodeWav(const AudioBuffer &buf) {
  if (buf.samples.size() == 0) throw ContractError("WriteWav: buffer is empty");
  if (buf.sample_rate_hz <= 0) throw ContractError("WriteWav: sample rate must be positive");
  const auto n = static_cast<std::uint32_t>(buf.samples.size());
  const std::uint32_t data_len = 2 * n;
  std::string out;
  out.reserve(44 + data_len);
  out += "RIFF";
  PutU32(out, 36 + data_len);
  out += "WAVE";
  out += "fmt ";
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(buf.sample_rate_hz));
  PutU32(out, static_cast<std::uint32_t>(buf.sample_rate_hz) * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out += "data";
  PutU32(out, data_len);
  for (Eigen::Index i = 0; i < buf.samples.size(); ++i)
    PutU16(out, static_cast<std::uint16_t>(QuantizeSample(buf.samples(i))));
  if (data_len & 1) out.push_back('\0');
  return out;
}

void WriteWav(const AudioBuffer &buf, const std::filesystem::path &path) {
  const std::string bytes = EncodeWav(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

AudioBuffer Reverse(const AudioBuffer &buf) {
  AudioBuffer out;
  out.sample_rate_hz = buf.sample_rate_hz;
  out.samples = buf.samples.reverse();
  return out;
}

Eigen::Index FrameLength(double frame_ms, int sample_rate_hz) {
  if (!(frame_ms > 0.0)) throw ConfigError("frame length must be positive");
  if (sample_rate_hz <= 0) throw ConfigError("sample rate must be positive");
  const auto len = static_cast<Eigen::Index>(std::round(frame_ms * sample_rate_hz / 1000.0));
  if (len < 1) throw ConfigError("frame shorter than one sample");
  return len;
}

Eigen::Index FrameHop(Eigen::Index frame_len, double overlap_fraction) {
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
    throw ConfigError("overlap fraction must lie in [0, 1)");
  const Eigen::Index hop =
      frame_len - static_cast<Eigen::Index>(std::round(overlap_fraction * frame_len));
  if (hop < 1) throw ConfigError("overlap leaves a hop of zero samples");
  return hop;
}

Eigen::Index FrameCount(Eigen::Index num_samples, Eigen::Index frame_len, Eigen::Index hop) {
  const Eigen::Index excess = std::max<Eigen::Index>(num_samples - frame_len, 0);
  return (excess + hop - 1) / hop + 1;
}

FrameSequence SegmentSamples(const AudioBuffer &buf, Eigen::Index frame_len, Eigen::Index hop) {
  if (frame_len < 1 || hop < 1 || hop > frame_len)
    throw ConfigError("segment: need 0 < hop <= frame_len");
  FrameSequence seq;
  seq.frame_len = frame_len;
  seq.hop = hop;
  seq.sample_rate_hz = buf.sample_rate_hz;
  const Eigen::Index n = buf.samples.size();
  const Eigen::Index count = FrameCount(n, frame_len, hop);
  seq.frames = Eigen::MatrixXd::Zero(frame_len, count);
  for (Eigen::Index f = 0; f < count; ++f) {
    const Eigen::Index start = f * hop;
    const Eigen::Index avail = std::clamp<Eigen::Index>(n - start, 0, frame_len);
    if (avail > 0) seq.frames.col(f).head(avail) = buf.samples.segment(start, avail);
  }
  return seq;
}

FrameSequence Segment(const AudioBuffer &buf, double frame_ms, double overlap_fraction) {
  const Eigen::Index len = FrameLength(frame_ms, buf.sample_rate_hz);
  return SegmentSamples(buf, len, FrameHop(len, overlap_fraction));
}

}  // namespace revspeech

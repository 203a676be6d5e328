// audio/wav-io.h

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

#ifndef BARGEBENCH_AUDIO_WAV_IO_H_
#define BARGEBENCH_AUDIO_WAV_IO_H_

#include <filesystem>

#include "bargebench/audio/waveform.h"

namespace bargebench {

/// Reads a RIFF/WAVE file holding 16-bit little-endian PCM, mono.  Samples are
/// divided by 32768.  Throws IoError if the file cannot be opened and
/// FormatError naming the offending field ("channels=2", "bits_per_sample=24",
/// "audio_format=3", ...) otherwise.
Waveform ReadWav(const std::filesystem::path &path);

/// Writes 16-bit PCM mono.  Amplitudes are clamped to [-1, 1) and rounded to
/// the nearest code, so ReadWav(WriteWav(w)) is within 1/32768 per sample for
/// in-range input.  Throws IoError if the path is not writable.
void WriteWav(const std::filesystem::path &path, const Waveform &w);

}  // namespace bargebench

#endif  // BARGEBENCH_AUDIO_WAV_IO_H_

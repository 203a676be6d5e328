// audio/fftw-lock.h

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

#ifndef BARGEBENCH_AUDIO_FFTW_LOCK_H_
#define BARGEBENCH_AUDIO_FFTW_LOCK_H_

#include <mutex>

namespace bargebench {

/// Guards fftw_plan_* / fftw_destroy_plan, which are not reentrant.
/// fftw_execute on an existing plan needs no lock.
std::mutex &FftwPlannerMutex();

}  // namespace bargebench

#endif  // BARGEBENCH_AUDIO_FFTW_LOCK_H_

// kws/loss.h

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

#ifndef BARGEBENCH_KWS_LOSS_H_
#define BARGEBENCH_KWS_LOSS_H_

#include <type_traits>
#include <vector>

#include "bargebench/audio/log-mel.h"
#include "bargebench/audio/waveform.h"
#include "bargebench/kws/model.h"

namespace bargebench {

/// BCE(P_utt, y_utt) + lambda * mean_i BCE(P_phon[i], y_phon[i]), with
/// probabilities clipped to [1e-7, 1 - 1e-7].  Only model outputs and labels
/// go in: no audio reaches the criterion.  Throws ShapeError if y_phon and
/// P_phon differ in length, ConfigError on a label other than 0/1 or a
/// negative lambda.
ad::Tensor KwsLoss(const ModelOutput &out, int y_utt,
                   const std::vector<int> &y_phon, double lambda);

namespace internal {

template <typename T>
inline constexpr bool kCarriesAudio =
    std::is_same_v<T, Waveform> || std::is_same_v<T, FeatureMatrix> ||
    std::is_same_v<T, ad::Tensor> || std::is_same_v<T, std::vector<double>>;

template <typename F>
struct LossArgs;
template <typename R, typename... A>
struct LossArgs<R (*)(A...)> {
  static constexpr bool kAudioFree =
      (!kCarriesAudio<std::remove_cvref_t<A>> && ...);
};

}  // namespace internal

static_assert(internal::LossArgs<decltype(&KwsLoss)>::kAudioFree,
              "the training criterion must not take audio or raw tensors");
static_assert(sizeof(ModelOutput) == 2 * sizeof(ad::Tensor),
              "ModelOutput must hold exactly P_utt and P_phon");

}  // namespace bargebench

#endif  // BARGEBENCH_KWS_LOSS_H_

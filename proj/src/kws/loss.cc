// kws/loss.cc

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

#include "bargebench/kws/loss.h"

#include <string>

#include "bargebench/common/error.h"

namespace bargebench {

ad::Tensor KwsLoss(const ModelOutput &out, int y_utt,
                   const std::vector<int> &y_phon, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("phoneme loss weight must be >= 0");
  if (y_utt != 0 && y_utt != 1)
    throw ConfigError("y_utt must be 0 or 1, got " + std::to_string(y_utt));
  if (y_phon.size() != out.p_phon.size())
    throw ShapeError("loss: " + std::to_string(out.p_phon.size()) +
                     " phoneme outputs vs " + std::to_string(y_phon.size()) +
                     " labels");
  std::vector<double> phon;
  for (int y : y_phon) {
    if (y != 0 && y != 1)
      throw ConfigError("y_phon entries must be 0 or 1, got " + std::to_string(y));
    phon.push_back(y);
  }
  ad::Tensor loss = ad::BceLoss(out.p_utt, {static_cast<double>(y_utt)});
  if (lambda == 0.0 || phon.empty()) return loss;
  return ad::Add(loss, ad::Scale(ad::BceLoss(out.p_phon, phon), lambda));
}

}  // namespace bargebench

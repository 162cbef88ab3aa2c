// Copyright 2026 The ctrnet Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>
#include <vector>

#include "ctrnet/dataset.h"
#include "ctrnet/featurepipe.h"

namespace ctrnet {

// Anything that maps a hashed impression to a click probability.
class CtrModel {
 public:
  virtual ~CtrModel() = default;

  virtual double predict(const SparseVector& x) const = 0;
  virtual const HashConfig& hash_config() const = 0;
  virtual std::string_view kind() const = 0;

  std::vector<double> predict_all(const VectorizedDataset& data) const;
};

}  // namespace ctrnet

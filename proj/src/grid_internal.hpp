// Copyright 2026 The entlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "entlab/fft.hpp"
#include "entlab/grid.hpp"

namespace entlab {

// Reusable scratch buffer and 2D plan for momentum-space expectation values.
class MomentumSpace {
 public:
  explicit MomentumSpace(const GridSpec& spec);
  MomentumSpace(const MomentumSpace&) = delete;
  MomentumSpace& operator=(const MomentumSpace&) = delete;

  Observables observables(const ComplexGrid& grid, const PotentialSpec& potential);

 private:
  GridSpec spec_;
  std::vector<double> k_A_;
  std::vector<double> k_B_;
  ComplexGrid scratch_;
  FftPlan plan_;
};

}  // namespace entlab

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

#include "entlab/qubit.hpp"
#include "entlab/rng.hpp"

namespace entlab {

/// Haar-random ket: normalized vector of i.i.d. complex Gaussians.
Ket random_ket(int dim, SplitMix64& rng);

/// Haar-random bipartite pure state.
PureState random_pure_state(int d_A, int d_B, SplitMix64& rng);

/// GUE-distributed Hermitian matrix (G + G^dagger) / 2.
CMatrix random_hermitian(int dim, SplitMix64& rng);

}  // namespace entlab

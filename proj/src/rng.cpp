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

#include "entlab/rng.hpp"

#include <cmath>

#include "entlab/sampling.hpp"

namespace entlab {

double SplitMix64::normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Ket random_ket(int dim, SplitMix64& rng) {
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    v(i) = cd(re, im);
  }
  return Ket::normalized(std::move(v));
}

PureState random_pure_state(int d_A, int d_B, SplitMix64& rng) {
  CMatrix m(d_A, d_B);
  for (int i = 0; i < d_A; ++i) {
    for (int j = 0; j < d_B; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      m(i, j) = cd(re, im);
    }
  }
  return PureState::normalized(std::move(m));
}

CMatrix random_hermitian(int dim, SplitMix64& rng) {
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = cd(re, im);
    }
  }
  return 0.5 * (g + g.adjoint());
}

}  // namespace entlab

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

// In-place FFTW plans bound to a caller-owned buffer.
//
// Plans are built with FFTW_ESTIMATE so the chosen algorithm, and therefore the
// round-off, is the same on every run. Planner calls are serialized through a
// process-wide mutex; executing distinct plans concurrently is safe.

#pragma once

#include <string>
#include <vector>

#include "entlab/types.hpp"

namespace entlab {

class FftPlan {
 public:
  /// 1D transform of length n over data[0..n).
  static FftPlan one_d(int n, cd* data);
  /// Row-major 2D transform of rows x cols over data.
  static FftPlan two_d(int rows, int cols, cd* data);

  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&& other) noexcept;
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan();

  /// Unnormalized forward (e^{-ikx}) transform.
  void forward() const;
  /// Unnormalized inverse (e^{+ikx}) transform; divide by size() to invert forward().
  void inverse() const;
  int size() const { return size_; }

 private:
  FftPlan(void* fwd, void* inv, int size) : forward_(fwd), inverse_(inv), size_(size) {}
  void release();
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
  int size_ = 0;
};

/// Version string reported by the linked FFTW library.
std::string fftw_version_string();

/// Angular wavenumbers 2 pi m / length in FFT order (m = 0..n/2-1, -n/2..-1).
std::vector<double> fft_wavenumbers(int n, double length);

}  // namespace entlab

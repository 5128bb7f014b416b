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

#include "entlab/fft.hpp"

#include <mutex>
#include <utility>

#include <fftw3.h>

namespace entlab {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cd* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

FftPlan FftPlan::one_d(int n, cd* data) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan f = fftw_plan_dft_1d(n, as_fftw(data), as_fftw(data), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan b = fftw_plan_dft_1d(n, as_fftw(data), as_fftw(data), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (f == nullptr || b == nullptr) throw std::runtime_error("FFTW failed to create a 1D plan");
  return FftPlan(f, b, n);
}

FftPlan FftPlan::two_d(int rows, int cols, cd* data) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_plan f = fftw_plan_dft_2d(rows, cols, as_fftw(data), as_fftw(data), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_plan b = fftw_plan_dft_2d(rows, cols, as_fftw(data), as_fftw(data), FFTW_BACKWARD, FFTW_ESTIMATE);
  if (f == nullptr || b == nullptr) throw std::runtime_error("FFTW failed to create a 2D plan");
  return FftPlan(f, b, rows * cols);
}

FftPlan::FftPlan(FftPlan&& other) noexcept
    : forward_(std::exchange(other.forward_, nullptr)),
      inverse_(std::exchange(other.inverse_, nullptr)),
      size_(other.size_) {}

FftPlan& FftPlan::operator=(FftPlan&& other) noexcept {
  if (this != &other) {
    release();
    forward_ = std::exchange(other.forward_, nullptr);
    inverse_ = std::exchange(other.inverse_, nullptr);
    size_ = other.size_;
  }
  return *this;
}

FftPlan::~FftPlan() { release(); }

void FftPlan::release() {
  if (forward_ == nullptr && inverse_ == nullptr) return;
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (inverse_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
  forward_ = nullptr;
  inverse_ = nullptr;
}

void FftPlan::forward() const { fftw_execute(static_cast<fftw_plan>(forward_)); }

void FftPlan::inverse() const { fftw_execute(static_cast<fftw_plan>(inverse_)); }

std::string fftw_version_string() { return fftw_version; }

std::vector<double> fft_wavenumbers(int n, double length) {
  std::vector<double> k(static_cast<std::size_t>(n));
  const double dk = kTwoPi / length;
  for (int m = 0; m < n; ++m) k[static_cast<std::size_t>(m)] = dk * static_cast<double>(m < n / 2 ? m : m - n);
  return k;
}

}  // namespace entlab

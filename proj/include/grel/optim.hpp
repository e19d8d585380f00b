// Copyright 2026 The grel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace grel {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are sized on the first step
/// and must keep the same block shapes afterwards.
class Adam {
 public:
  explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

  void step(const std::vector<std::span<double>>& params,
            const std::vector<std::span<const double>>& grads, double lr);

  std::size_t steps() const { return t_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }

 private:
  AdamConfig cfg_;
  std::size_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

/// Multiplies the learning rate by `factor` once the monitored loss has gone
/// `patience` consecutive epochs without strictly improving on the best seen.
/// The counter restarts after every reduction.
class PlateauSchedule {
 public:
  PlateauSchedule(double lr0, double factor, int patience);

  /// Feed one epoch's validation loss; returns true if the rate was reduced.
  bool step(double loss);
  double lr() const { return lr_; }
  int reductions() const { return reductions_; }

 private:
  double lr_;
  double factor_;
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_epochs_ = 0;
  int reductions_ = 0;
};

/// Signals a stop after `patience` consecutive epochs without strict
/// improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);

  /// Returns true when training should stop.
  bool step(double loss);
  bool improved() const { return improved_; }
  double best() const { return best_; }

 private:
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int bad_epochs_ = 0;
  bool improved_ = false;
};

}  // namespace grel

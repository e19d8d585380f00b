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

#include "grel/optim.hpp"

#include <cmath>

#include "grel/error.hpp"

namespace grel {

void Adam::step(const std::vector<std::span<double>>& params,
                const std::vector<std::span<const double>>& grads, double lr) {
  if (params.size() != grads.size()) throw InvalidArgument("Adam: block count mismatch");
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.size(), 0.0);
      v_.emplace_back(p.size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw InvalidArgument("Adam: parameter blocks changed");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    auto g = grads[b];
    auto& m = m_[b];
    auto& v = v_[b];
    if (p.size() != g.size() || p.size() != m.size()) {
      throw InvalidArgument("Adam: block shape mismatch");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      p[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
    }
  }
}

PlateauSchedule::PlateauSchedule(double lr0, double factor, int patience)
    : lr_(lr0), factor_(factor), patience_(patience) {
  if (!(lr0 > 0.0)) throw InvalidArgument("initial learning rate must be positive");
  if (!(factor > 0.0 && factor < 1.0)) throw InvalidArgument("plateau factor must be in (0,1)");
  if (patience < 1) throw InvalidArgument("plateau patience must be >= 1");
}

bool PlateauSchedule::step(double loss) {
  if (loss < best_) {
    best_ = loss;
    bad_epochs_ = 0;
    return false;
  }
  if (++bad_epochs_ < patience_) return false;
  lr_ *= factor_;
  bad_epochs_ = 0;
  ++reductions_;
  return true;
}

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw InvalidArgument("early-stopping patience must be >= 1");
}

bool EarlyStopping::step(double loss) {
  improved_ = loss < best_;
  if (improved_) {
    best_ = loss;
    bad_epochs_ = 0;
    return false;
  }
  return ++bad_epochs_ >= patience_;
}

}  // namespace grel

// Copyright 2026 The CDP Accountant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cdp/subgaussian.h"

#include <cmath>
#include <stdexcept>

namespace cdp {

bool SubgaussianCertificate::Passes() const {
  return max_violation <= kCertificateTolerance;
}

std::vector<double> DefaultLambdaGrid() {
  std::vector<double> grid;
  grid.reserve(20);
  for (int i = 0; i <= 9; ++i) {
    const double lambda = std::ldexp(1.0, i) / 8.0;
    grid.push_back(lambda);
    grid.push_back(-lambda);
  }
  return grid;
}

double TailBound(double tau, double t) {
  if (!(tau > 0)) throw std::domain_error("tail bound requires tau > 0");
  if (!(t >= 0)) throw std::domain_error("tail bound requires t >= 0");
  return std::exp(-t * t / 2.0);
}

double HoeffdingStandard(double a, double b) {
  if (!(a <= b)) throw std::domain_error("interval requires a <= b");
  return (b - a) / 2.0;
}

double MomentBound(double tau, int k) {
  if (!(tau >= 0)) throw std::domain_error("moment bound requires tau >= 0");
  if (k < 1) throw std::domain_error("moment order k must be at least 1");
  if (k > 20) {
    throw std::domain_error("moment bound supports k <= 20 (exact factorials)");
  }
  const int half = (k + 1) / 2;  // ceil(k/2)
  double factorial = 1;
  for (int i = 2; i <= half; ++i) factorial *= i;
  return factorial * std::ldexp(1.0, half + 1) * std::pow(tau, k);
}

double SumStandard(const std::vector<double>& taus) {
  double sum_sq = 0;
  for (double tau : taus) {
    if (!(tau >= 0)) {
      throw std::invalid_argument("subgaussian standards must be >= 0");
    }
    sum_sq += tau * tau;
  }
  return std::sqrt(sum_sq);
}

double ProductExpBound(double mean_x, double second_moment_x, double tau) {
  if (!(tau >= 0) || tau > 1.0 / 3.0) {
    throw std::domain_error("product bound requires 0 <= tau <= 1/3");
  }
  if (second_moment_x < mean_x * mean_x - 1e-12) {
    throw std::invalid_argument("second moment below mean^2");
  }
  return mean_x + std::sqrt(std::max(0.0, second_moment_x)) *
                      (tau + 3.0 * tau * tau);
}

SubgaussianCertificate VerifyCertificate(const PrivacyLossRV& rv, double tau,
                                         const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("lambda grid must be nonempty");
  if (!(tau >= 0)) throw std::domain_error("certificate requires tau >= 0");
  SubgaussianCertificate cert;
  cert.tau = tau;
  cert.lambda_grid = grid;
  const PrivacyLossRV centered = rv.Centered();
  bool first = true;
  for (double lambda : grid) {
    const double violation =
        LogMgf(centered, lambda) - lambda * lambda * tau * tau / 2.0;
    if (first || violation > cert.max_violation) {
      cert.max_violation = violation;
      first = false;
    }
  }
  return cert;
}

}  // namespace cdp

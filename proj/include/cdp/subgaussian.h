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
#ifndef CDP_SUBGAUSSIAN_H_
#define CDP_SUBGAUSSIAN_H_

#include <vector>

#include "cdp/distribution.h"

namespace cdp {

// A grid certificate that a centered rv is tau-subgaussian: max_violation is
// the most positive value of ln E[e^{lambda X}] - lambda^2 tau^2 / 2 over the
// grid. The certificate passes iff max_violation <= kCertificateTolerance.
struct SubgaussianCertificate {
  double tau = 0;
  std::vector<double> lambda_grid;
  double max_violation = 0;

  bool Passes() const;
};

// 1e-9 on the log-MGF scale: below discretization noise, above
// double-precision rounding.
inline constexpr double kCertificateTolerance = 1e-9;

// +-{2^i / 8 : i = 0..9}. Violations for heavy atoms appear at large
// |lambda|, so the grid is geometric and spans moderate to extreme.
std::vector<double> DefaultLambdaGrid();

// Bound on Pr[X >= t*tau] (and symmetrically Pr[X <= -t*tau]) for a
// tau-subgaussian X: exp(-t^2/2). Requires tau > 0 and t >= 0.
double TailBound(double tau, double t);

// (b - a) / 2: a valid subgaussian standard for any zero-mean rv supported
// on [a, b] (Hoeffding's lemma).
double HoeffdingStandard(double a, double b);

// Bound on |E[X^k]| for a tau-subgaussian X: ceil(k/2)! * 2^{ceil(k/2)+1}
// * tau^k. Exact integer factorials up to k = 20, error beyond.
double MomentBound(double tau, int k);

// Subgaussian standard of a sum of (possibly dependent) rvs with
// conditionally certified standards tau_i: sqrt(sum tau_i^2).
double SumStandard(const std::vector<double>& taus);

// Bound on E[X e^Y] for jointly distributed X, Y with Y tau-subgaussian,
// tau <= 1/3: E[X] + sqrt(E[X^2]) * (tau + 3 tau^2).
double ProductExpBound(double mean_x, double second_moment_x, double tau);

// Evaluates ln E[e^{lambda (X - E[X])}] - lambda^2 tau^2 / 2 across the grid
// and records the maximum.
SubgaussianCertificate VerifyCertificate(const PrivacyLossRV& rv, double tau,
                                         const std::vector<double>& grid);

}  // namespace cdp

#endif  // CDP_SUBGAUSSIAN_H_

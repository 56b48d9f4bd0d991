// Copyright 2026 The actlab Authors
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

#ifndef ACTLAB_CORE_QUADRATURE_H_
#define ACTLAB_CORE_QUADRATURE_H_

#include <functional>

namespace actlab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Interval endpoints are
// never evaluated, so integrands may be singular (integrably) or discontinuous
// at a and b. Refinement stops once the summed error estimate drops below
// abs_tol or max_intervals is reached.
QuadratureResult IntegrateAdaptive(const std::function<double(double)>& f,
                                   double a, double b, double abs_tol = 1e-13,
                                   int max_intervals = 4000);

}  // namespace actlab

#endif  // ACTLAB_CORE_QUADRATURE_H_

// Copyright 2026 The Poison Authors. All rights reserved.
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

#include "poison/normal.h"

#include <cmath>
#include <numbers>

#include "poison/errors.h"

namespace poison {
namespace {

constexpr double kPhiClamp = 38.0;

template <int N>
double Poly(const double (&c)[N], double x) {
  double v = c[N - 1];
  for (int i = N - 2; i >= 0; --i) v = v * x + c[i];
  return v;
}

// AS241 coefficients, lowest order first.
constexpr double kCentralNum[] = {
    3.3871328727963666080e0,  1.3314166789178437745e+2,
    1.9715909503065514427e+3, 1.3731693765509461125e+4,
    4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kCentralDen[] = {
    1.0,                      4.2313330701600911252e+1,
    6.8718700749205790830e+2, 5.3941960214247511077e+3,
    2.1213794301586595867e+4, 3.9307895800092710610e+4,
    2.8729085735721942674e+4, 5.2264952788528545610e+3};
constexpr double kNearNum[] = {
    1.42343711074968357734e0,  4.63033784615654529590e0,
    5.76949722146069140550e0,  3.64784832476320460504e0,
    1.27045825245236838258e0,  2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kNearDen[] = {
    1.0,                       2.05319162663775882187e0,
    1.67638483018380384940e0,  6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
constexpr double kFarNum[] = {
    6.65790464350110377720e0,  5.46378491116411436990e0,
    1.78482653991729133580e0,  2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kFarDen[] = {
    1.0,                       5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

double Ppnd16(double p) {
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * Poly(kCentralNum, r) / Poly(kCentralDen, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = Poly(kNearNum, r) / Poly(kNearDen, r);
  } else {
    r -= 5.0;
    x = Poly(kFarNum, r) / Poly(kFarDen, r);
  }
  return q < 0.0 ? -x : x;
}

}  // namespace

double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi *
                                   std::numbers::sqrt2);
}

double Phi(double x) {
  if (std::isnan(x)) return x;
  if (x < -kPhiClamp) return 0.0;
  if (x > kPhiClamp) return 1.0;
  return 0.5 * std::erfc(-x * (0.5 * std::numbers::sqrt2));
}

double PhiInv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("PhiInv requires 0 < p < 1");
  double x = Ppnd16(p);
  // Halley refinement. In the upper tail work with the complement so the
  // residual is not swamped by rounding of p near 1.
  const double e = x <= 0.0 ? Phi(x) - p : (1.0 - p) - Phi(-x);
  const double u = e / NormalPdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace poison

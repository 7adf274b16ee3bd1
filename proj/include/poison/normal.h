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

#ifndef POISON_NORMAL_H_
#define POISON_NORMAL_H_

namespace poison {

// Standard normal density.
double NormalPdf(double x);

// Standard normal CDF computed as erfc(-x / sqrt(2)) / 2, which keeps full
// relative accuracy in the lower tail. Returns exactly 0 below -38 and exactly
// 1 above 38.
double Phi(double x);

// Inverse of Phi: Wichura's AS241 (PPND16) rational approximation followed by
// one Halley step against Phi. Throws DomainError unless 0 < p < 1.
double PhiInv(double p);

}  // namespace poison

#endif  // POISON_NORMAL_H_

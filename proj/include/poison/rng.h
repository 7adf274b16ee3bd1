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

#ifndef POISON_RNG_H_
#define POISON_RNG_H_

#include <array>
#include <cstdint>
#include <initializer_list>

namespace poison {

// SplitMix64 (Steele, Lea, Flood 2014). Used only to expand seeds.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t state) : state_(state) {}
  uint64_t Next();

 private:
  uint64_t state_;
};

// xoshiro256** 1.0 (Blackman & Vigna) with an in-house Gaussian sampler, so
// that every draw is bit-reproducible across compilers and standard libraries
// (std::normal_distribution is not).
//
// Independent streams are keyed by a path of integers, typically
// (master seed, trial index) or (master seed, trial index, purpose).
class Rng {
 public:
  explicit Rng(uint64_t seed);

  static Rng ForStream(uint64_t seed, std::initializer_list<uint64_t> path);

  uint64_t Next();
  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  uint64_t UniformInt(uint64_t n);
  // Standard normal via the Marsaglia polar method; the second variate of
  // each accepted pair is cached.
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

 private:
  std::array<uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace poison

#endif  // POISON_RNG_H_

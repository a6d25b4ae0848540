// Copyright 2026 The maxineq Authors.
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

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace maxineq {

using State = std::complex<double>;

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// dX = -rate X dt + dB
struct OU {
  double rate;
};
// dV = -drift dt + dB
struct BMDrift {
  double drift;
};
// dβ = -drift sign(β) dt + dB, observed as |β|
struct ReflectedBMDrift {
  double drift;
};
// dC = (level + rate C) dt + vol sqrt(C) dB, rate < 0
struct CIR {
  double level;
  double rate;
  double vol;
};
// dY = dim dt + 2 sqrt(Y) dB
struct BESQ {
  double dim;
};
// square root of BESQ(dim)
struct Bessel {
  double dim;
};
// square root of CIR(dim, -2 rate, 2)
struct RadialOU {
  double dim;
  double rate;
};
// dZ = -(rate + i rotation) Z dt + dW, W complex standard BM
struct ComplexOU {
  double rate;
  double rotation;
};
struct ComplexBM {};

using ProcessParams = std::variant<OU, BMDrift, ReflectedBMDrift, CIR, BESQ, Bessel, RadialOU,
                                   ComplexOU, ComplexBM>;

enum class ProcessKind {
  kOU,
  kBMDrift,
  kReflectedBMDrift,
  kCIR,
  kBESQ,
  kBessel,
  kRadialOU,
  kComplexOU,
  kComplexBM,
};

// A validated process description. Construction throws ParameterError when a
// sign constraint is violated or the initial state lies outside the state space.
class ProcessSpec {
 public:
  explicit ProcessSpec(ProcessParams params, State x0 = {0.0, 0.0});

  const ProcessParams& params() const { return params_; }
  State x0() const { return x0_; }
  ProcessKind kind() const { return static_cast<ProcessKind>(params_.index()); }

  ProcessSpec with_start(State x0) const { return ProcessSpec(params_, x0); }

  bool is_complex() const;
  bool is_nonnegative() const;
  // Constant unit diffusion coefficient (OU, BMDrift): Brownian-bridge
  // corrections of the discrete maximum are exact to leading order.
  bool has_unit_diffusion() const;
  bool has_exact_sampler() const;

  template <typename T>
  const T& as() const {
    return std::get<T>(params_);
  }

 private:
  ProcessParams params_;
  State x0_;
};

std::string_view kind_name(ProcessKind kind);
ProcessKind parse_kind(std::string_view name);

// Dimension of the squared Bessel process behind a CIR(level, rate, vol).
inline double cir_besq_dim(const CIR& p) { return 4.0 * p.level / (p.vol * p.vol); }

// Modulus of a state; for the reflected variant this is |β|.
inline double modulus(State s) { return s.imag() == 0.0 ? std::abs(s.real()) : std::abs(s); }

}  // namespace maxineq

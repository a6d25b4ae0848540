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

#include "maxineq/process.hpp"

#include <array>
#include <cmath>

namespace maxineq {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

bool finite(double v) { return std::isfinite(v); }

constexpr std::array<std::string_view, 9> kNames = {
    "OU", "BMDrift", "ReflectedBMDrift", "CIR", "BESQ", "Bessel", "RadialOU", "ComplexOU",
    "ComplexBM"};

}  // namespace

ProcessSpec::ProcessSpec(ProcessParams params, State x0) : params_(params), x0_(x0) {
  std::visit(
      overloaded{
          [](const OU& p) { require(finite(p.rate) && p.rate > 0, "OU requires rate > 0"); },
          [](const BMDrift& p) {
            require(finite(p.drift) && p.drift > 0, "BMDrift requires drift > 0");
          },
          [](const ReflectedBMDrift& p) {
            require(finite(p.drift) && p.drift > 0, "ReflectedBMDrift requires drift > 0");
          },
          [](const CIR& p) {
            require(finite(p.level) && p.level > 0, "CIR requires level a > 0");
            require(finite(p.rate) && p.rate < 0,
                    "CIR requires rate b < 0 (maximal inequality for CIR holds with a,c > 0 "
                    "and b < 0)");
            require(finite(p.vol) && p.vol > 0, "CIR requires vol c > 0");
          },
          [](const BESQ& p) { require(finite(p.dim) && p.dim > 0, "BESQ requires dim > 0"); },
          [](const Bessel& p) { require(finite(p.dim) && p.dim > 0, "Bessel requires dim > 0"); },
          [](const RadialOU& p) {
            require(finite(p.dim) && p.dim > 0, "RadialOU requires dim > 0");
            require(finite(p.rate) && p.rate > 0, "RadialOU requires rate > 0");
          },
          [](const ComplexOU& p) {
            require(finite(p.rate) && p.rate > 0, "ComplexOU requires rate > 0");
            require(finite(p.rotation), "ComplexOU requires a finite rotation");
          },
          [](const ComplexBM&) {},
      },
      params_);
  require(finite(x0.real()) && finite(x0.imag()), "initial state must be finite");
  if (!is_complex()) require(x0.imag() == 0.0, "real process started at a complex state");
  if (is_nonnegative()) require(x0.real() >= 0.0, "nonnegative process started below 0");
}

bool ProcessSpec::is_complex() const {
  return kind() == ProcessKind::kComplexOU || kind() == ProcessKind::kComplexBM;
}

bool ProcessSpec::is_nonnegative() const {
  switch (kind()) {
    case ProcessKind::kCIR:
    case ProcessKind::kBESQ:
    case ProcessKind::kBessel:
    case ProcessKind::kRadialOU:
      return true;
    default:
      return false;
  }
}

bool ProcessSpec::has_unit_diffusion() const {
  return kind() == ProcessKind::kOU || kind() == ProcessKind::kBMDrift;
}

bool ProcessSpec::has_exact_sampler() const { return kind() != ProcessKind::kReflectedBMDrift; }

std::string_view kind_name(ProcessKind kind) { return kNames[static_cast<std::size_t>(kind)]; }

ProcessKind parse_kind(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ProcessKind>(i);
  }
  throw ParameterError("unknown process kind '" + std::string(name) + "'");
}

}  // namespace maxineq

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

#include "maxineq/moderate.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "maxineq/analytic.hpp"
#include "maxineq/process.hpp"

namespace maxineq {
namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

double parse_number(std::string_view text, std::string_view descriptor) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v))
    throw ParameterError("malformed moderate descriptor '" + std::string(descriptor) + "'");
  return v;
}

}  // namespace

ModerateFunction::ModerateFunction(Form form, double p, double q, std::string descriptor)
    : form_(form), p_(p), q_(q), descriptor_(std::move(descriptor)) {}

ModerateFunction ModerateFunction::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("pow:p requires p > 0");
  ModerateFunction f(Form::kPower, p, 0.0, "pow:" + number(p));
  f.certify();
  return f;
}

ModerateFunction ModerateFunction::power_log(double p, double q) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("powlog:p,q requires p > 0");
  if (!(q >= 0.0) || !std::isfinite(q)) throw ParameterError("powlog:p,q requires q >= 0");
  ModerateFunction f(Form::kPowerLog, p, q, "powlog:" + number(p) + "," + number(q));
  f.certify();
  return f;
}

ModerateFunction ModerateFunction::custom(std::string name, std::function<double(double)> fn) {
  ModerateFunction f(Form::kCustom, 0.0, 0.0, std::move(name));
  f.custom_ = std::move(fn);
  f.certify();
  return f;
}

ModerateFunction ModerateFunction::parse(std::string_view d) {
  if (d.substr(0, 4) == "pow:") return power(parse_number(d.substr(4), d));
  if (d.substr(0, 7) == "powlog:") {
    const auto rest = d.substr(7);
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos)
      throw ParameterError("powlog descriptor needs two parameters: '" + std::string(d) + "'");
    return power_log(parse_number(rest.substr(0, comma), d),
                     parse_number(rest.substr(comma + 1), d));
  }
  throw ParameterError("unknown moderate descriptor '" + std::string(d) +
                       "' (expected pow:p or powlog:p,q)");
}

double ModerateFunction::operator()(double x) const {
  for (int i = 0; i < sqrt_depth_; ++i) x = std::sqrt(x);
  switch (form_) {
    case Form::kPower:
      return std::pow(x, p_);
    case Form::kPowerLog:
      return std::pow(x, p_) * std::pow(std::log1p(x), q_);
    case Form::kCustom:
      return custom_(x);
  }
  return 0.0;
}

ModerateFunction ModerateFunction::compose_sqrt() const {
  ModerateFunction f = *this;
  ++f.sqrt_depth_;
  f.descriptor_ = "sqrt(" + descriptor_ + ")";
  f.certify();
  return f;
}

void ModerateFunction::certify() {
  const auto grid = default_moderacy_grid();
  const auto r = moderacy_ratio(*this, 2.0, grid);
  if (r.diverges)
    throw NotModerateError(descriptor_ + " is not moderate: F(2x)/F(x) diverges on the grid");
  certificate_ = {2.0, r.sup, r.argmax, grid.front(), grid.back()};
}

RatioSup moderacy_ratio(const std::function<double(double)>& f, double beta,
                        std::span<const double> grid) {
  if (!(beta > 1.0)) throw ParameterError("moderacy ratio requires beta > 1");
  if (grid.size() < 2) throw ParameterError("moderacy ratio needs a grid");
  RatioSup out{0.0, grid.front(), false};
  double previous = 0.0;
  std::vector<double> ratios;
  ratios.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double fx = f(grid[i]);
    const double fbx = f(beta * grid[i]);
    if (fx < 0.0 || fbx < 0.0)
      throw NotModerateError("F is negative at x = " + number(grid[i]));
    if (i > 0 && fx < previous)
      throw NotModerateError("F is decreasing near x = " + number(grid[i]));
    previous = fx;
    double ratio;
    if (fx == 0.0) {
      ratio = fbx == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
      ratio = fbx / fx;
    }
    if (!std::isfinite(ratio)) {
      return {std::numeric_limits<double>::infinity(), grid[i], true};
    }
    ratios.push_back(ratio);
    if (ratio > out.sup) out = {ratio, grid[i], false};
  }
  // Still climbing by more than 1% over the last decade at the top of the grid.
  const double top = grid.back();
  std::size_t decade_back = grid.size() - 1;
  while (decade_back > 0 && grid[decade_back] > top / 10.0) --decade_back;
  if (out.argmax == top && ratios.back() > 1.01 * ratios[decade_back]) out.diverges = true;
  return out;
}

RatioSup moderacy_ratio(const ModerateFunction& f, double beta, std::span<const double> grid) {
  return moderacy_ratio([&f](double x) { return f(x); }, beta, grid);
}

std::vector<double> default_moderacy_grid() { return log_grid(1e-6, 1e6, 16); }

std::vector<ModerateFunction> builtin_catalog() {
  return {ModerateFunction::power(0.5),        ModerateFunction::power(1.0),
          ModerateFunction::power(2.0),        ModerateFunction::power(3.0),
          ModerateFunction::power_log(1.0, 1.0), ModerateFunction::power_log(2.0, 1.0)};
}

}  // namespace maxineq

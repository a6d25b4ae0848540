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

#include "maxineq/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace maxineq {
namespace {

// Beyond this exponent the direct forms of OU and CIR f switch to log scale.
constexpr double kLogSwitch = 50.0;
constexpr double kOverflowLog = 700.0;

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be >= 0");
}

// Rate k of the log^{1/2}(1 + k t) family, or 0 for other kinds.
double log_family_rate(const ProcessSpec& spec) {
  switch (spec.kind()) {
    case ProcessKind::kOU:
      return spec.as<OU>().rate;
    case ProcessKind::kRadialOU:
      return spec.as<RadialOU>().dim * spec.as<RadialOU>().rate;
    case ProcessKind::kComplexOU:
      return 2.0 * spec.as<ComplexOU>().rate;
    default:
      return 0.0;
  }
}

double bm_mu(const ProcessSpec& spec) {
  return spec.kind() == ProcessKind::kBMDrift ? spec.as<BMDrift>().drift
                                              : spec.as<ReflectedBMDrift>().drift;
}

struct CirGrowth {
  double scale;  // c^2 / (2|b|)
  double slope;  // 2a|b| / c^2
};

CirGrowth cir_growth(const CIR& p) {
  const double nb = -p.rate;
  return {p.vol * p.vol / (2.0 * nb), 2.0 * p.level * nb / (p.vol * p.vol)};
}

// x >= 0 with log f_mu(x) = s.
double bm_drift_root_log(double mu, double s) {
  return solve_increasing([mu](double x) { return bm_drift_log_scale(mu, x); }, s, 0.0, 1.0);
}

double bm_drift_growth(double mu, double t) {
  if (t == 0.0) return 0.0;
  if (t > 1.0) return bm_drift_root_log(mu, std::log(t));
  return solve_increasing([mu](double x) { return bm_drift_scale(mu, x); }, t, 0.0, 1.0);
}

}  // namespace

double bm_drift_scale(double mu, double x) {
  const double z = 2.0 * mu * x;
  double core;
  if (std::abs(z) < 0.5) {
    // e^z - z - 1 by its Taylor series.
    double term = 0.5 * z * z;
    core = term;
    for (int k = 3; k < 40; ++k) {
      term *= z / k;
      core += term;
      if (std::abs(term) < 1e-18 * std::abs(core)) break;
    }
  } else {
    core = std::expm1(z) - z;
  }
  return core / (2.0 * mu * mu);
}

double bm_drift_log_scale(double mu, double x) {
  const double z = 2.0 * mu * x;
  if (z > 30.0) return z + std::log1p(-(1.0 + z) * std::exp(-z)) - std::log(2.0 * mu * mu);
  return std::log(bm_drift_scale(mu, x));
}

GrowthFunction::GrowthFunction(ProcessSpec spec, Monitor form) : spec_(spec), form_(form) {
  if (form_ == Monitor::kNormalized && spec_.kind() != ProcessKind::kComplexBM)
    throw ParameterError("the normalized growth function exists for ComplexBM only");
}

double GrowthFunction::operator()(double t) const {
  require_nonnegative(t, "time");
  if (t == 0.0) return 0.0;
  if (form_ == Monitor::kNormalized) return std::sqrt(std::log1p(std::log1p(t)));
  switch (spec_.kind()) {
    case ProcessKind::kOU:
    case ProcessKind::kRadialOU:
    case ProcessKind::kComplexOU:
      return std::sqrt(std::log1p(log_family_rate(spec_) * t));
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
      return bm_drift_growth(bm_mu(spec_), t);
    case ProcessKind::kCIR: {
      const auto c = cir_growth(spec_.as<CIR>());
      return c.scale * std::log1p(c.slope * t);
    }
    case ProcessKind::kBESQ:
      return t;
    case ProcessKind::kBessel:
    case ProcessKind::kComplexBM:
      return std::sqrt(t);
  }
  return 0.0;
}

double GrowthFunction::inverse(double y) const {
  require_nonnegative(y, "growth value");
  if (y == 0.0) return 0.0;
  if (form_ == Monitor::kNormalized) return std::expm1(std::expm1(y * y));
  switch (spec_.kind()) {
    case ProcessKind::kOU:
    case ProcessKind::kRadialOU:
    case ProcessKind::kComplexOU:
      return std::expm1(y * y) / log_family_rate(spec_);
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
      return bm_drift_scale(bm_mu(spec_), y);
    case ProcessKind::kCIR: {
      const auto c = cir_growth(spec_.as<CIR>());
      return std::expm1(y / c.scale) / c.slope;
    }
    case ProcessKind::kBESQ:
      return y;
    case ProcessKind::kBessel:
    case ProcessKind::kComplexBM:
      return y * y;
  }
  return 0.0;
}

double GrowthFunction::log_inverse(double y) const {
  require_nonnegative(y, "growth value");
  if (y == 0.0) return -std::numeric_limits<double>::infinity();
  if (form_ == Monitor::kNormalized) return log_expm1(std::expm1(y * y));
  switch (spec_.kind()) {
    case ProcessKind::kOU:
    case ProcessKind::kRadialOU:
    case ProcessKind::kComplexOU:
      return log_expm1(y * y) - std::log(log_family_rate(spec_));
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
      return bm_drift_log_scale(bm_mu(spec_), y);
    case ProcessKind::kCIR: {
      const auto c = cir_growth(spec_.as<CIR>());
      return log_expm1(y / c.scale) - std::log(c.slope);
    }
    case ProcessKind::kBESQ:
      return std::log(y);
    case ProcessKind::kBessel:
    case ProcessKind::kComplexBM:
      return 2.0 * std::log(y);
  }
  return 0.0;
}

double GrowthFunction::from_log(double s) const {
  if (s < kOverflowLog) return (*this)(std::exp(s));
  if (form_ == Monitor::kNormalized) return std::sqrt(std::log1p(s));
  switch (spec_.kind()) {
    case ProcessKind::kOU:
    case ProcessKind::kRadialOU:
    case ProcessKind::kComplexOU:
      return std::sqrt(s + std::log(log_family_rate(spec_)));
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
      return bm_drift_root_log(bm_mu(spec_), s);
    case ProcessKind::kCIR: {
      const auto c = cir_growth(spec_.as<CIR>());
      return c.scale * (s + std::log(c.slope));
    }
    case ProcessKind::kBESQ:
      return std::exp(s);
    case ProcessKind::kBessel:
    case ProcessKind::kComplexBM:
      return std::exp(0.5 * s);
  }
  return 0.0;
}

bool GrowthFunction::closed_form() const {
  return spec_.kind() != ProcessKind::kBMDrift && spec_.kind() != ProcessKind::kReflectedBMDrift;
}

std::string GrowthFunction::formula() const {
  if (form_ == Monitor::kNormalized) return "g(t) = log^{1/2}(1+log(1+t))";
  switch (spec_.kind()) {
    case ProcessKind::kOU:
      return "g(t) = log^{1/2}(1+αt)";
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
      return "g(t) = f_μ^{-1}(t), f_μ(x) = (e^{2μx}-2μx-1)/(2μ²)";
    case ProcessKind::kCIR:
      return "g(t) = -(c²/2b)·log(1-(2ab/c²)t)";
    case ProcessKind::kBESQ:
      return "g(t) = t";
    case ProcessKind::kBessel:
      return "g(t) = t^{1/2}";
    case ProcessKind::kRadialOU:
      return "g(t) = log^{1/2}(1+αβt)";
    case ProcessKind::kComplexOU:
      return "g(t) = log^{1/2}(1+2at)";
    case ProcessKind::kComplexBM:
      return "g(t) = t^{1/2}";
  }
  return "";
}

double g_eval(const ProcessSpec& spec, double t, Monitor form) {
  return GrowthFunction(spec, form)(t);
}

double g_inverse(const ProcessSpec& spec, double y, Monitor form) {
  return GrowthFunction(spec, form).inverse(y);
}

ScaleFunction::ScaleFunction(ProcessSpec spec) : spec_(spec) {
  switch (spec_.kind()) {
    case ProcessKind::kOU:
      ou_cap_ = std::sqrt(800.0 / spec_.as<OU>().rate);
      ou_saturated_ = ou_inner(ou_cap_);
      return;
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
    case ProcessKind::kCIR:
    case ProcessKind::kBESQ:
      return;
    default:
      throw DomainError("no scale function for " + std::string(kind_name(spec_.kind())));
  }
}

bool ScaleFunction::closed_form() const {
  return spec_.kind() != ProcessKind::kOU && spec_.kind() != ProcessKind::kCIR;
}

bool ScaleFunction::even() const {
  return spec_.kind() == ProcessKind::kOU || spec_.kind() == ProcessKind::kReflectedBMDrift;
}

bool ScaleFunction::nonnegative_domain() const { return spec_.is_nonnegative(); }

void ScaleFunction::check_domain(double x) const {
  if (!std::isfinite(x)) throw DomainError("scale function argument must be finite");
  if (nonnegative_domain() && x < 0.0)
    throw DomainError(std::string(kind_name(spec_.kind())) + " scale function needs x >= 0");
}

double ScaleFunction::ou_inner(double u) const {
  const double a = spec_.as<OU>().rate;
  if (ou_saturated_ > 0.0 && u >= ou_cap_) return ou_saturated_;
  return integrate([a](double v) { return std::exp(-a * v * v); }, 0.0, u).value;
}

Integral ScaleFunction::ou(double x) const {
  const double a = spec_.as<OU>().rate;
  const double ax = std::abs(x);
  if (a * ax * ax > kLogSwitch) {
    const double v = std::exp(ou_log(ax));
    return {v, 1e-12 * v};
  }
  const auto r = integrate([this, a](double u) { return std::exp(a * u * u) * ou_inner(u); }, 0.0,
                           ax);
  return {2.0 * r.value, 2.0 * r.error};
}

double ScaleFunction::ou_log(double ax) const {
  const double a = spec_.as<OU>().rate;
  // e^{a(u^2 - x^2)} <= e^{-2 a x (x - u)} is negligible outside this window.
  const double lo = std::max(0.0, ax - 40.0 / (a * ax));
  const auto r = integrate(
      [this, a, ax](double u) { return std::exp(a * (u - ax) * (u + ax)) * ou_inner(u); }, lo, ax);
  return a * ax * ax + std::log(2.0 * r.value);
}

// e^{-rt} h(t) = (rt)^{-k} * int_0^{rt} s^{k-1} e^{-s} ds, with k = 2a/c^2 and
// r = -2b/c^2; the substitution v = s^k removes the singularity when k < 1.
double ScaleFunction::cir_tilde(double t) const {
  const auto& p = spec_.as<CIR>();
  const double k = 2.0 * p.level / (p.vol * p.vol);
  const double r = -2.0 * p.rate / (p.vol * p.vol);
  const double z = r * t;
  if (z == 0.0) return 1.0 / k;
  const double top = std::min(z, 2.0 * k + 100.0);
  double partial;
  if (k < 1.0) {
    partial =
        integrate([k](double v) { return std::exp(-std::pow(v, 1.0 / k)); }, 0.0, std::pow(top, k))
            .value /
        k;
  } else {
    partial =
        integrate([k](double s) { return std::pow(s, k - 1.0) * std::exp(-s); }, 0.0, top).value;
  }
  return std::exp(-k * std::log(z)) * partial;
}

Integral ScaleFunction::cir(double x) const {
  const auto& p = spec_.as<CIR>();
  const double r = -2.0 * p.rate / (p.vol * p.vol);
  if (r * x > kLogSwitch) {
    const double v = std::exp(cir_log(x));
    return {v, 1e-12 * v};
  }
  const double scale = 2.0 / (p.vol * p.vol);
  const auto res =
      integrate([this, r](double t) { return std::exp(r * t) * cir_tilde(t); }, 0.0, x);
  return {scale * res.value, scale * res.error};
}

double ScaleFunction::cir_log(double x) const {
  const auto& p = spec_.as<CIR>();
  const double r = -2.0 * p.rate / (p.vol * p.vol);
  const double lo = std::max(0.0, x - 40.0 / r);
  const auto res =
      integrate([this, r, x](double t) { return std::exp(-r * (x - t)) * cir_tilde(t); }, lo, x);
  return r * x + std::log(2.0 / (p.vol * p.vol) * res.value);
}

Integral ScaleFunction::evaluate(double x) const {
  check_domain(x);
  switch (spec_.kind()) {
    case ProcessKind::kOU:
      return ou(x);
    case ProcessKind::kBMDrift:
      return {bm_drift_scale(spec_.as<BMDrift>().drift, x), 0.0};
    case ProcessKind::kReflectedBMDrift:
      return {bm_drift_scale(spec_.as<ReflectedBMDrift>().drift, std::abs(x)), 0.0};
    case ProcessKind::kCIR:
      return cir(x);
    case ProcessKind::kBESQ:
      return {x / spec_.as<BESQ>().dim, 0.0};
    default:
      break;
  }
  throw DomainError("no scale function");
}

double ScaleFunction::derivative(double x) const {
  check_domain(x);
  switch (spec_.kind()) {
    case ProcessKind::kOU: {
      const double a = spec_.as<OU>().rate;
      return 2.0 * sgn(x) * std::exp(a * x * x) * ou_inner(std::abs(x));
    }
    case ProcessKind::kBMDrift: {
      const double mu = spec_.as<BMDrift>().drift;
      return std::expm1(2.0 * mu * x) / mu;
    }
    case ProcessKind::kReflectedBMDrift: {
      const double mu = spec_.as<ReflectedBMDrift>().drift;
      return sgn(x) * std::expm1(2.0 * mu * std::abs(x)) / mu;
    }
    case ProcessKind::kCIR: {
      const auto& p = spec_.as<CIR>();
      const double r = -2.0 * p.rate / (p.vol * p.vol);
      return 2.0 / (p.vol * p.vol) * std::exp(r * x) * cir_tilde(x);
    }
    case ProcessKind::kBESQ:
      return 1.0 / spec_.as<BESQ>().dim;
    default:
      break;
  }
  throw DomainError("no scale function");
}

double ScaleFunction::log_value(double x) const {
  check_domain(x);
  switch (spec_.kind()) {
    case ProcessKind::kOU: {
      const double a = spec_.as<OU>().rate;
      if (a * x * x > kLogSwitch) return ou_log(std::abs(x));
      break;
    }
    case ProcessKind::kBMDrift:
      return bm_drift_log_scale(spec_.as<BMDrift>().drift, x);
    case ProcessKind::kReflectedBMDrift:
      return bm_drift_log_scale(spec_.as<ReflectedBMDrift>().drift, std::abs(x));
    case ProcessKind::kCIR: {
      const auto& p = spec_.as<CIR>();
      if (-2.0 * p.rate / (p.vol * p.vol) * x > kLogSwitch) return cir_log(x);
      break;
    }
    default:
      break;
  }
  return std::log(evaluate(x).value);
}

double f_eval(const ProcessSpec& spec, double x) { return ScaleFunction(spec)(x); }

double drift_coefficient(const ProcessSpec& spec, double x) {
  switch (spec.kind()) {
    case ProcessKind::kOU:
      return -spec.as<OU>().rate * x;
    case ProcessKind::kBMDrift:
      return -spec.as<BMDrift>().drift;
    case ProcessKind::kReflectedBMDrift:
      return -spec.as<ReflectedBMDrift>().drift * sgn(x);
    case ProcessKind::kCIR:
      return spec.as<CIR>().level + spec.as<CIR>().rate * x;
    case ProcessKind::kBESQ:
      return spec.as<BESQ>().dim;
    case ProcessKind::kBessel:
      return (spec.as<Bessel>().dim - 1.0) / (2.0 * x);
    case ProcessKind::kRadialOU:
      return (spec.as<RadialOU>().dim - 1.0) / (2.0 * x) - spec.as<RadialOU>().rate * x;
    default:
      break;
  }
  throw DomainError("generator coefficients are defined for real processes only");
}

double diffusion_squared(const ProcessSpec& spec, double x) {
  switch (spec.kind()) {
    case ProcessKind::kCIR:
      return spec.as<CIR>().vol * spec.as<CIR>().vol * x;
    case ProcessKind::kBESQ:
      return 4.0 * x;
    case ProcessKind::kComplexOU:
    case ProcessKind::kComplexBM:
      throw DomainError("generator coefficients are defined for real processes only");
    default:
      return 1.0;
  }
}

std::vector<double> log_points(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) throw ParameterError("invalid log grid");
  if (n == 1) return {lo};
  std::vector<double> out(n);
  // Base 10 keeps whole decades exact.
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (per_decade <= 0) throw ParameterError("points per decade must be positive");
  const double decades = std::log10(hi / lo);
  return log_points(lo, hi, static_cast<std::size_t>(std::llround(per_decade * decades)) + 1);
}

std::vector<double> default_lambda_grid() { return log_grid(1e-4, 1e4, 32); }

PhiEstimate compute_phi(const ProcessSpec& spec, double beta, double delta,
                        std::span<const double> lambda_grid) {
  if (!(beta > 1.0)) throw ParameterError("compute_phi requires beta > 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("compute_phi requires delta in (0,1)");
  if (lambda_grid.empty()) throw ParameterError("compute_phi needs a lambda grid");
  const ScaleFunction f(spec);
  const GrowthFunction g(spec);
  const bool both_sides = !f.nonnegative_domain() && !f.even();

  auto log_ratio = [&](double lambda) {
    double num = f.log_value(delta * lambda);
    if (both_sides) num = std::max(num, f.log_value(-delta * lambda));
    const double hi = g.log_inverse(beta * lambda);
    const double lo = g.log_inverse(lambda);
    return num - (hi + std::log(-std::expm1(lo - hi)));
  };

  std::size_t best = 0;
  double best_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const double v = log_ratio(lambda_grid[i]);
    if (v > best_log) {
      best_log = v;
      best = i;
    }
  }
  double argmax = lambda_grid[best];
  if (lambda_grid.size() > 1) {
    const double lo = lambda_grid[best == 0 ? 0 : best - 1];
    const double hi = lambda_grid[std::min(best + 1, lambda_grid.size() - 1)];
    for (double lambda : log_points(lo, hi, 33)) {
      const double v = log_ratio(lambda);
      if (v > best_log) {
        best_log = v;
        argmax = lambda;
      }
    }
  }
  return {std::exp(best_log), argmax};
}

double phi_bound(const ProcessSpec& spec, double beta, double delta) {
  switch (spec.kind()) {
    case ProcessKind::kOU:
      return spec.as<OU>().rate * delta * delta;
    case ProcessKind::kBMDrift:
    case ProcessKind::kReflectedBMDrift:
      return delta;
    case ProcessKind::kBESQ:
      return delta / (spec.as<BESQ>().dim * (beta - 1.0));
    default:
      return -1.0;
  }
}

Residual check_generator_residual(const ProcessSpec& spec, std::span<const double> x_grid) {
  const ScaleFunction f(spec);
  Residual worst{0.0, 0.0};
  for (double x : x_grid) {
    const double h = 1e-3 * (1.0 + std::abs(x));
    const double second = (8.0 * (f.derivative(x + h) - f.derivative(x - h)) -
                           (f.derivative(x + 2.0 * h) - f.derivative(x - 2.0 * h))) /
                          (12.0 * h);
    const double lf = drift_coefficient(spec, x) * f.derivative(x) +
                      0.5 * diffusion_squared(spec, x) * second;
    const double r = std::abs(lf - 1.0);
    if (!(r <= worst.max_abs)) worst = {r, x};
  }
  return worst;
}

SandwichResult sandwich_bm_drift(double mu, std::span<const double> grid) {
  const GrowthFunction g(ProcessSpec(BMDrift{mu}));
  SandwichResult worst{std::numeric_limits<double>::infinity(), 0.0};
  for (double x : grid) {
    const double value = g(x);
    const double l = std::log1p(mu * std::sqrt(x));
    const double slack = std::min((value - l / (2.0 * mu)) / value, (2.0 * l / mu - value) / value);
    if (slack < worst.min_slack) worst = {slack, x};
  }
  return worst;
}

SandwichResult sandwich_cir(const CIR& p, std::span<const double> grid) {
  const ScaleFunction f{ProcessSpec(p)};
  const double c2 = p.vol * p.vol;
  const double nb = -p.rate;
  const double k = 2.0 * p.level / c2;
  SandwichResult worst{std::numeric_limits<double>::infinity(), 0.0};
  for (double x : grid) {
    if (x == 0.0) {
      if (worst.min_slack > 0.0) worst = {0.0, 0.0};
      continue;
    }
    const double lf = f.log_value(x);
    const double l1 = std::log(c2 / (p.level * nb)) - k * std::log(2.0) + log_expm1(nb * x / c2);
    const double l2 = std::log(c2 / (2.0 * p.level * nb)) + log_expm1(2.0 * nb * x / c2);
    const double slack = std::min(std::expm1(lf - l1), -std::expm1(lf - l2));
    if (slack < worst.min_slack) worst = {slack, x};
  }
  return worst;
}

}  // namespace maxineq

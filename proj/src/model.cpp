#include "evodyn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

#include "evodyn/errors.hpp"

namespace evodyn {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_dimension(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DomainError(std::string(what) + ": dimension " + std::to_string(got) +
                      " does not match trait space dimension " + std::to_string(want));
  }
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(const Trait& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    if (i) out += ", ";
    out += fmt_double(x[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// TraitSpace

TraitSpace::TraitSpace(std::vector<double> lo, std::vector<double> hi)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size()) {
    throw DegenerateParameterError("trait space needs matching, non-empty lo/hi vectors");
  }
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(lo_[i] < hi_[i]) || !std::isfinite(lo_[i]) || !std::isfinite(hi_[i])) {
      throw DegenerateParameterError("trait space axis " + std::to_string(i) +
                                     " must satisfy lo < hi");
    }
  }
}

bool TraitSpace::contains(const Trait& x) const {
  if (x.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(x[i] >= lo_[i] && x[i] <= hi_[i])) return false;
  }
  return true;
}

void TraitSpace::require(const Trait& x) const {
  if (!contains(x)) throw DomainError("trait " + to_string(x) + " is outside the trait space");
}

std::vector<Trait> TraitSpace::vertices() const {
  const std::size_t l = dimension();
  std::vector<Trait> out;
  out.reserve(std::size_t{1} << l);
  for (std::size_t mask = 0; mask < (std::size_t{1} << l); ++mask) {
    std::vector<double> c(l);
    for (std::size_t i = 0; i < l; ++i) c[i] = (mask >> i) & 1U ? hi_[i] : lo_[i];
    out.emplace_back(std::move(c));
  }
  return out;
}

std::vector<Trait> TraitSpace::grid(std::size_t per_axis) const {
  if (per_axis < 2) throw PreconditionError("grid needs at least 2 points per axis");
  const std::size_t l = dimension();
  std::size_t total = 1;
  for (std::size_t i = 0; i < l; ++i) total *= per_axis;
  std::vector<Trait> out;
  out.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> c(l);
    std::size_t rem = k;
    for (std::size_t i = 0; i < l; ++i) {
      const std::size_t j = rem % per_axis;
      rem /= per_axis;
      // Endpoints exactly; interior by interpolation.
      c[i] = j + 1 == per_axis
                 ? hi_[i]
                 : lo_[i] + (hi_[i] - lo_[i]) * static_cast<double>(j) /
                                static_cast<double>(per_axis - 1);
    }
    out.emplace_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// ScalarFunction

ScalarFunction ScalarFunction::constant(double value) {
  ScalarFunction f;
  f.kind_ = Kind::Constant;
  f.base_ = value;
  return f;
}

ScalarFunction ScalarFunction::linear(double intercept, std::vector<double> slope) {
  ScalarFunction f;
  f.kind_ = Kind::Linear;
  f.base_ = intercept;
  f.vec_ = std::move(slope);
  return f;
}

ScalarFunction ScalarFunction::gaussian_bump(double base, double height,
                                             std::vector<double> center, double width) {
  if (!(width > 0.0)) throw DegenerateParameterError("gaussian bump width must be positive");
  ScalarFunction f;
  f.kind_ = Kind::GaussianBump;
  f.base_ = base;
  f.height_ = height;
  f.vec_ = std::move(center);
  f.width_ = width;
  return f;
}

double ScalarFunction::operator()(const Trait& x) const {
  switch (kind_) {
    case Kind::Constant:
      return base_;
    case Kind::Linear:
      return base_ + dot(vec_, x.coords());
    case Kind::GaussianBump: {
      double r2 = 0.0;
      for (std::size_t i = 0; i < vec_.size(); ++i) r2 += (x[i] - vec_[i]) * (x[i] - vec_[i]);
      return base_ + height_ * std::exp(-r2 / (2.0 * width_ * width_));
    }
  }
  return 0.0;
}

std::pair<double, double> ScalarFunction::range_over(const TraitSpace& space) const {
  switch (kind_) {
    case Kind::Constant:
      return {base_, base_};
    case Kind::Linear: {
      require_dimension(vec_.size(), space.dimension(), "linear slope");
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& v : space.vertices()) {
        const double y = (*this)(v);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
      return {lo, hi};
    }
    case Kind::GaussianBump: {
      require_dimension(vec_.size(), space.dimension(), "bump center");
      double near2 = 0.0, far2 = 0.0;
      for (std::size_t i = 0; i < vec_.size(); ++i) {
        const double c = vec_[i];
        const double n = std::clamp(c, space.lo()[i], space.hi()[i]) - c;
        const double f = std::max(std::abs(c - space.lo()[i]), std::abs(c - space.hi()[i]));
        near2 += n * n;
        far2 += f * f;
      }
      const double s = 2.0 * width_ * width_;
      const double a = base_ + height_ * std::exp(-near2 / s);
      const double b = base_ + height_ * std::exp(-far2 / s);
      return {std::min(a, b), std::max(a, b)};
    }
  }
  return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// CompetitionKernel

CompetitionKernel CompetitionKernel::constant(double value) {
  CompetitionKernel k;
  k.kind_ = Kind::Constant;
  k.base_ = value;
  return k;
}

CompetitionKernel CompetitionKernel::bilinear(double base, std::vector<double> px,
                                              std::vector<double> py, double pxy, double lo,
                                              double hi) {
  if (px.size() != py.size()) throw DegenerateParameterError("bilinear px/py dimension mismatch");
  if (!(lo <= hi)) throw DegenerateParameterError("bilinear clip range must have lo <= hi");
  CompetitionKernel k;
  k.kind_ = Kind::Bilinear;
  k.base_ = base;
  k.px_ = std::move(px);
  k.py_ = std::move(py);
  k.pxy_ = pxy;
  k.lo_ = lo;
  k.hi_ = hi;
  return k;
}

CompetitionKernel CompetitionKernel::linear_difference(double base, std::vector<double> slope,
                                                       double lo, double hi) {
  std::vector<double> neg(slope.size());
  std::transform(slope.begin(), slope.end(), neg.begin(), [](double s) { return -s; });
  return bilinear(base, std::move(slope), std::move(neg), 0.0, lo, hi);
}

CompetitionKernel CompetitionKernel::gaussian(double base, double height, double width) {
  if (!(width > 0.0)) throw DegenerateParameterError("gaussian competition width must be positive");
  CompetitionKernel k;
  k.kind_ = Kind::Gaussian;
  k.base_ = base;
  k.height_ = height;
  k.width_ = width;
  return k;
}

double CompetitionKernel::operator()(const Trait& x, const Trait& y) const {
  switch (kind_) {
    case Kind::Constant:
      return base_;
    case Kind::Bilinear: {
      const double v =
          base_ + dot(px_, x.coords()) + dot(py_, y.coords()) + pxy_ * dot(x.coords(), y.coords());
      return std::clamp(v, lo_, hi_);
    }
    case Kind::Gaussian: {
      double r2 = 0.0;
      for (std::size_t i = 0; i < x.dimension(); ++i) r2 += (x[i] - y[i]) * (x[i] - y[i]);
      return base_ + height_ * std::exp(-r2 / (2.0 * width_ * width_));
    }
  }
  return 0.0;
}

std::pair<double, double> CompetitionKernel::range_over(const TraitSpace& space) const {
  switch (kind_) {
    case Kind::Constant:
      return {base_, base_};
    case Kind::Bilinear: {
      require_dimension(px_.size(), space.dimension(), "bilinear coefficients");
      // Multilinear in the coordinates, so extremes sit on vertex pairs.
      const auto verts = space.vertices();
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (const auto& a : verts) {
        for (const auto& b : verts) {
          const double v = (*this)(a, b);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      return {lo, hi};
    }
    case Kind::Gaussian: {
      double diag2 = 0.0;
      for (std::size_t i = 0; i < space.dimension(); ++i) {
        const double w = space.hi()[i] - space.lo()[i];
        diag2 += w * w;
      }
      const double a = base_ + height_;
      const double b = base_ + height_ * std::exp(-diag2 / (2.0 * width_ * width_));
      return {std::min(a, b), std::max(a, b)};
    }
  }
  return {0.0, 0.0};
}

// ---------------------------------------------------------------------------
// MutationKernel

MutationKernel MutationKernel::gaussian(std::vector<double> sigma) {
  if (sigma.empty()) throw DegenerateParameterError("mutation kernel needs at least one scale");
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw DegenerateParameterError("mutation kernel scales must be positive and finite");
    }
  }
  MutationKernel k;
  k.sigma_ = std::move(sigma);
  return k;
}

Trait MutationKernel::sample_mutant(const Trait& x, const TraitSpace& space, Rng& rng) const {
  require_dimension(sigma_.size(), space.dimension(), "mutation kernel");
  std::vector<double> y(sigma_.size());
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    bool inside = true;
    for (std::size_t i = 0; i < sigma_.size(); ++i) {
      y[i] = x[i] + sigma_[i] * rng.normal();
      inside = inside && y[i] >= space.lo()[i] && y[i] <= space.hi()[i];
    }
    if (inside) return Trait(std::move(y));
  }
  throw SamplingError("mutation kernel rejected " + std::to_string(kMaxRejections) +
                      " proposals from " + to_string(x));
}

double MutationKernel::truncation_mass(const Trait& x, const TraitSpace& space) const {
  double z = 1.0;
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    z *= normal_cdf((space.hi()[i] - x[i]) / sigma_[i]) -
         normal_cdf((space.lo()[i] - x[i]) / sigma_[i]);
  }
  return z;
}

double MutationKernel::density(const Trait& x, std::span<const double> h,
                               const TraitSpace& space) const {
  double g = 1.0;
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    const double y = x[i] + h[i];
    if (y < space.lo()[i] || y > space.hi()[i]) return 0.0;
    const double z = h[i] / sigma_[i];
    g *= std::exp(-0.5 * z * z) / (sigma_[i] * std::sqrt(2.0 * std::numbers::pi));
  }
  return g / truncation_mass(x, space);
}

double MutationKernel::dominating_density(std::span<const double> h,
                                          const TraitSpace& space) const {
  double g = 1.0, zmin = 1.0;
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    const double z = h[i] / sigma_[i];
    g *= std::exp(-0.5 * z * z) / (sigma_[i] * std::sqrt(2.0 * std::numbers::pi));
    // Truncation mass is smallest at a corner of the box.
    zmin *= normal_cdf((space.hi()[i] - space.lo()[i]) / sigma_[i]) - 0.5;
  }
  return g / zmin;
}

// ---------------------------------------------------------------------------
// EcologyParams

EcologyParams::EcologyParams(TraitSpace space, ScalarFunction birth, ScalarFunction death,
                             CompetitionKernel competition, ScalarFunction mutation_probability,
                             MutationKernel mutation, std::optional<RateBounds> declared)
    : space_(std::move(space)),
      birth_(std::move(birth)),
      death_(std::move(death)),
      alpha_(std::move(competition)),
      mu_(std::move(mutation_probability)),
      mutation_(std::move(mutation)) {
  require_dimension(mutation_.sigma().size(), space_.dimension(), "mutation kernel");
  computed_.b_max = birth_.range_over(space_).second;
  computed_.d_max = death_.range_over(space_).second;
  const auto [amin, amax] = alpha_.range_over(space_);
  computed_.alpha_min = amin;
  computed_.alpha_max = amax;
  declared_ = declared.has_value();
  bounds_ = declared.value_or(computed_);
}

// ---------------------------------------------------------------------------
// Derived quantities

double equilibrium_density(const EcologyParams& p, const Trait& x) {
  p.space().require(x);
  const double a = p.alpha(x, x);
  if (a == 0.0) throw DegenerateParameterError("alpha(x, x) = 0 at " + to_string(x));
  const double r = p.b(x) - p.d(x);
  if (!(r > 0.0)) {
    throw DegenerateParameterError("b(x) - d(x) must be positive at " + to_string(x));
  }
  return r / a;
}

double mutation_rate_beta(const EcologyParams& p, const Trait& x) {
  return p.mu(x) * p.b(x) * equilibrium_density(p, x);
}

double invasion_fitness(const EcologyParams& p, const Trait& y, const Trait& x) {
  p.space().require(y);
  // Same expression for y == x, so f(x, x) cancels to rounding.
  return p.b(y) - p.d(y) - p.alpha(y, x) * equilibrium_density(p, x);
}

const char* to_string(InvasionClass c) {
  switch (c) {
    case InvasionClass::ResidentStable:
      return "ResidentStable";
    case InvasionClass::MutantInvades:
      return "MutantInvades";
    case InvasionClass::Degenerate:
      return "Degenerate";
  }
  return "?";
}

InvasionClassification classify_pair(const EcologyParams& p, const Trait& x, const Trait& y) {
  InvasionClassification c;
  c.mutant_fitness = invasion_fitness(p, y, x);
  c.resident_fitness = invasion_fitness(p, x, y);
  if (c.mutant_fitness < 0.0) {
    c.kind = InvasionClass::ResidentStable;
  } else if (c.mutant_fitness > 0.0 && c.resident_fitness < 0.0) {
    c.kind = InvasionClass::MutantInvades;
  } else {
    c.kind = InvasionClass::Degenerate;
  }
  return c;
}

AssumptionReport validate_assumptions(const EcologyParams& p, std::span<const Trait> grid) {
  if (grid.empty()) throw PreconditionError("validate_assumptions needs a non-empty grid");
  AssumptionReport report;
  auto fail = [&](std::optional<Trait> t, std::string msg) {
    report.passed = false;
    report.violations.push_back({std::move(t), std::move(msg)});
  };
  const RateBounds& bd = p.bounds();
  if (!(bd.alpha_min > 0.0)) fail(std::nullopt, "alpha lower bound must be positive");
  if (!std::isfinite(bd.b_max) || !std::isfinite(bd.d_max) || !std::isfinite(bd.alpha_max)) {
    fail(std::nullopt, "rate upper bounds must be finite");
  }
  if (p.bounds_declared()) {
    const RateBounds& c = p.computed_bounds();
    if (c.b_max > bd.b_max) fail(std::nullopt, "birth rate exceeds declared b_max on the box");
    if (c.d_max > bd.d_max) fail(std::nullopt, "death rate exceeds declared d_max on the box");
    if (c.alpha_max > bd.alpha_max) {
      fail(std::nullopt, "competition exceeds declared alpha_max on the box");
    }
    if (c.alpha_min < bd.alpha_min) {
      fail(std::nullopt, "competition falls below declared alpha_min on the box");
    }
  }

  for (const Trait& x : grid) {
    if (!p.space().contains(x)) {
      fail(x, "grid point outside the trait space");
      continue;
    }
    const double b = p.b(x), d = p.d(x), mu = p.mu(x);
    if (!(b >= 0.0 && b <= bd.b_max)) fail(x, "b(x) outside [0, b_max]");
    if (!(d >= 0.0 && d <= bd.d_max)) fail(x, "d(x) outside [0, d_max]");
    if (!(mu > 0.0 && mu <= 1.0)) fail(x, "mu(x) outside (0, 1]");
    if (!(b - d > 0.0)) fail(x, "b(x) - d(x) is not positive");
  }
  for (const Trait& x : grid) {
    if (!p.space().contains(x)) continue;
    for (const Trait& y : grid) {
      if (!p.space().contains(y)) continue;
      const double a = p.alpha(x, y);
      if (!(a >= bd.alpha_min && a <= bd.alpha_max)) {
        fail(x, "alpha(x, " + to_string(y) + ") outside [alpha_min, alpha_max]");
      }
    }
  }
  return report;
}

}  // namespace evodyn

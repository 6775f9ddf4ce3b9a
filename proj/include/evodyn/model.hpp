#ifndef EVODYN_MODEL_HPP
#define EVODYN_MODEL_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evodyn/rng.hpp"

namespace evodyn {

/// A point of the phenotype space. Comparison is exact and lexicographic so
/// that traits can key ordered containers; clonal reproduction copies the
/// coordinates bit for bit.
class Trait {
 public:
  Trait() = default;
  Trait(double x) : coords_{x} {}  // NOLINT: 1-D traits read naturally as doubles
  Trait(std::initializer_list<double> coords) : coords_(coords) {}
  explicit Trait(std::vector<double> coords) : coords_(std::move(coords)) {}

  std::size_t dimension() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

  auto operator<=>(const Trait&) const = default;
  bool operator==(const Trait&) const = default;

 private:
  std::vector<double> coords_;
};

std::string to_string(const Trait& x);

/// Closed axis-aligned box [lo_i, hi_i].
class TraitSpace {
 public:
  TraitSpace(std::vector<double> lo, std::vector<double> hi);
  static TraitSpace interval(double lo, double hi) { return TraitSpace({lo}, {hi}); }

  std::size_t dimension() const { return lo_.size(); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  bool contains(const Trait& x) const;
  void require(const Trait& x) const;  // throws DomainError

  // All 2^l corners.
  std::vector<Trait> vertices() const;
  // Uniform tensor grid with `per_axis` points per coordinate, endpoints included.
  std::vector<Trait> grid(std::size_t per_axis) const;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

// Closed catalog of trait -> rate forms. Bounds over a box are computed
// exactly from the form rather than declared by the user.
class ScalarFunction {
 public:
  enum class Kind { Constant, Linear, GaussianBump };

  static ScalarFunction constant(double value);
  // intercept + slope . x
  static ScalarFunction linear(double intercept, std::vector<double> slope);
  // base + height * exp(-|x - center|^2 / (2 width^2))
  static ScalarFunction gaussian_bump(double base, double height, std::vector<double> center,
                                      double width);

  double operator()(const Trait& x) const;
  std::pair<double, double> range_over(const TraitSpace& space) const;

  Kind kind() const { return kind_; }
  double base() const { return base_; }
  double height() const { return height_; }
  double width() const { return width_; }
  const std::vector<double>& vec() const { return vec_; }

 private:
  Kind kind_ = Kind::Constant;
  double base_ = 0.0;    // value / intercept / base
  double height_ = 0.0;  // bump height
  double width_ = 1.0;   // bump width
  std::vector<double> vec_;  // slope or center
};

// Competition forms alpha(x, y): x is the focal individual, y its competitor.
class CompetitionKernel {
 public:
  enum class Kind { Constant, Bilinear, Gaussian };

  static CompetitionKernel constant(double value);
  // clip(base + px.x + py.y + pxy (x.y), lo, hi)
  static CompetitionKernel bilinear(double base, std::vector<double> px, std::vector<double> py,
                                    double pxy, double lo, double hi);
  // clip(base + slope.(x - y), lo, hi); a bilinear special case.
  static CompetitionKernel linear_difference(double base, std::vector<double> slope, double lo,
                                             double hi);
  // base + height * exp(-|x - y|^2 / (2 width^2))
  static CompetitionKernel gaussian(double base, double height, double width);

  double operator()(const Trait& x, const Trait& y) const;
  std::pair<double, double> range_over(const TraitSpace& space) const;

  Kind kind() const { return kind_; }
  double base() const { return base_; }
  const std::vector<double>& px() const { return px_; }
  const std::vector<double>& py() const { return py_; }
  double pxy() const { return pxy_; }
  double clip_lo() const { return lo_; }
  double clip_hi() const { return hi_; }
  double height() const { return height_; }
  double width() const { return width_; }

 private:
  Kind kind_ = Kind::Constant;
  double base_ = 0.0;
  std::vector<double> px_, py_;
  double pxy_ = 0.0;
  double lo_ = 0.0, hi_ = 0.0;
  double height_ = 0.0, width_ = 1.0;
};

/// Mutation step law m(x, dh). The only family is an independent Gaussian
/// per coordinate, truncated to X - x by rejection against the untruncated
/// Gaussian.
class MutationKernel {
 public:
  static constexpr int kMaxRejections = 1000;

  static MutationKernel gaussian(std::vector<double> sigma);

  const std::vector<double>& sigma() const { return sigma_; }

  /// Draws a mutant trait x + h inside `space`. Throws SamplingError after
  /// kMaxRejections proposals fall outside.
  Trait sample_mutant(const Trait& x, const TraitSpace& space, Rng& rng) const;

  /// Truncated density m(x, h); zero when x + h is outside the box.
  double density(const Trait& x, std::span<const double> h, const TraitSpace& space) const;
  /// m-bar(h): Gaussian divided by the smallest truncation mass over the box,
  /// so density(x, h) <= dominating_density(h) for every x in the box.
  double dominating_density(std::span<const double> h, const TraitSpace& space) const;
  /// Probability that an untruncated proposal from x lands in the box.
  double truncation_mass(const Trait& x, const TraitSpace& space) const;

 private:
  std::vector<double> sigma_;
};

struct RateBounds {
  double b_max = 0.0;
  double d_max = 0.0;
  double alpha_max = 0.0;
  double alpha_min = 0.0;
};

/// Ecological parameters b, d, alpha, mu and the mutation kernel on a trait
/// box. Immutable once built.
class EcologyParams {
 public:
  EcologyParams(TraitSpace space, ScalarFunction birth, ScalarFunction death,
                CompetitionKernel competition, ScalarFunction mutation_probability,
                MutationKernel mutation, std::optional<RateBounds> declared = std::nullopt);

  const TraitSpace& space() const { return space_; }
  const MutationKernel& mutation() const { return mutation_; }
  const ScalarFunction& birth_fn() const { return birth_; }
  const ScalarFunction& death_fn() const { return death_; }
  const ScalarFunction& mutation_probability_fn() const { return mu_; }
  const CompetitionKernel& competition_fn() const { return alpha_; }

  double b(const Trait& x) const { return birth_(x); }
  double d(const Trait& x) const { return death_(x); }
  double alpha(const Trait& x, const Trait& y) const { return alpha_(x, y); }
  double mu(const Trait& x) const { return mu_(x); }

  /// Declared bounds when given, otherwise the exact bounds over the box.
  const RateBounds& bounds() const { return bounds_; }
  const RateBounds& computed_bounds() const { return computed_; }
  bool bounds_declared() const { return declared_; }

 private:
  TraitSpace space_;
  ScalarFunction birth_, death_;
  CompetitionKernel alpha_;
  ScalarFunction mu_;
  MutationKernel mutation_;
  RateBounds computed_;
  RateBounds bounds_;
  bool declared_ = false;
};

/// n-bar_x = (b(x) - d(x)) / alpha(x, x), the monomorphic equilibrium density.
double equilibrium_density(const EcologyParams& p, const Trait& x);

/// beta(x) = mu(x) b(x) n-bar_x.
double mutation_rate_beta(const EcologyParams& p, const Trait& x);

/// f(y, x) = b(y) - d(y) - alpha(y, x) n-bar_x: growth rate of a rare y in an
/// x population at equilibrium. f(x, x) == 0 up to rounding.
double invasion_fitness(const EcologyParams& p, const Trait& y, const Trait& x);

enum class InvasionClass { ResidentStable, MutantInvades, Degenerate };

const char* to_string(InvasionClass c);

struct InvasionClassification {
  InvasionClass kind = InvasionClass::Degenerate;
  double mutant_fitness = 0.0;    // f(y, x)
  double resident_fitness = 0.0;  // f(x, y)
};

InvasionClassification classify_pair(const EcologyParams& p, const Trait& x, const Trait& y);

struct AssumptionViolation {
  std::optional<Trait> trait;  // empty for global violations
  std::string message;
};

struct AssumptionReport {
  bool passed = true;
  std::vector<AssumptionViolation> violations;
};

/// Checks boundedness, positivity of mu and b - d, and alpha_min > 0 on every
/// grid point (and every ordered pair for alpha). Never throws on violations.
AssumptionReport validate_assumptions(const EcologyParams& p, std::span<const Trait> grid);

}  // namespace evodyn

#endif  // EVODYN_MODEL_HPP

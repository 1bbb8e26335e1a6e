#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ltesim {

using Point = std::vector<int>;        ///< integer lattice point
using RealPoint = std::vector<double>;  ///< point of R^d

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

struct Rectangle {
  RealPoint lower;
  RealPoint upper;
};

struct Ball {
  RealPoint center;
  double radius = 1.0;
};

/// Bounded open domain D in R^d. Intervals are one-dimensional; rectangles are
/// axis-aligned in any dimension; balls need d >= 2.
struct DomainSpec {
  std::variant<Interval, Rectangle, Ball> shape;

  static DomainSpec interval(double lower, double upper);
  static DomainSpec rectangle(RealPoint lower, RealPoint upper);
  static DomainSpec unit_cube(int dimension);
  static DomainSpec ball(RealPoint center, double radius);

  int dimension() const;
  bool contains(std::span<const double> x) const;
  /// Euclidean projection onto the boundary of D.
  RealPoint project_to_boundary(std::span<const double> x) const;
  /// Throws ConfigInvalid when the shape is degenerate.
  void validate() const;
  std::string describe() const;
};

/// Sites D_L = L·D ∩ Z^d, bath layer B_L, and the nearest-neighbour table.
///
/// Sites and bath points are numbered densely. neighbor(s, dir) returns a
/// site index when non-negative; a negative value n encodes bath index ~n.
/// Directions are ordered (-e_0, +e_0, -e_1, +e_1, ...), so dir ^ 1 reverses.
class LatticeDomain {
 public:
  int dimension() const { return dimension_; }
  double scale() const { return scale_; }
  int directions() const { return 2 * dimension_; }
  std::size_t num_sites() const { return sites_.size(); }
  std::size_t num_bath() const { return bath_.size(); }

  const Point& site(std::size_t i) const { return sites_[i]; }
  const Point& bath_point(std::size_t i) const { return bath_[i]; }
  const std::vector<Point>& sites() const { return sites_; }
  const std::vector<Point>& bath() const { return bath_; }

  std::int32_t neighbor(std::size_t site, int dir) const {
    return neighbors_[site * static_cast<std::size_t>(2 * dimension_) + static_cast<std::size_t>(dir)];
  }
  std::span<const std::int32_t> neighbor_table() const { return neighbors_; }

  static bool is_bath(std::int32_t code) { return code < 0; }
  static std::size_t bath_index(std::int32_t code) { return static_cast<std::size_t>(~code); }

  /// Index of a lattice point, or -1 when it is not a site.
  std::int64_t find_site(const Point& p) const;
  std::int64_t find_bath(const Point& p) const;

  /// Site index for a lattice point; throws ConfigInvalid naming `what` if absent.
  std::size_t require_site(const Point& p, const std::string& what) const;

  const DomainSpec& spec() const { return spec_; }

 private:
  friend LatticeDomain build_lattice(const DomainSpec& spec, double scale);

  DomainSpec spec_;
  int dimension_ = 1;
  double scale_ = 1.0;
  std::vector<Point> sites_;
  std::vector<Point> bath_;
  std::map<Point, std::int32_t> site_index_;
  std::map<Point, std::int32_t> bath_index_;
  std::vector<std::int32_t> neighbors_;
};

/// Enumerates {v in Z^d : v/L in D} and the lattice points adjacent to it.
/// Throws EmptyDomain or DisconnectedDomain.
LatticeDomain build_lattice(const DomainSpec& spec, double scale);

/// Componentwise rounding to Z^d; halves round upward.
Point nearest_lattice_point(std::span<const double> x);

/// Prescribed temperature on the boundary of D, evaluated at boundary points.
class BoundaryTemperature {
 public:
  using Function = std::function<double(std::span<const double>)>;

  static BoundaryTemperature constant(double value);
  /// T(lower) = left, T(upper) = right for a one-dimensional interval.
  static BoundaryTemperature endpoints(double left, double right, double lower = 0.0,
                                       double upper = 1.0);
  /// T(x) = offset + gradient · x.
  static BoundaryTemperature linear(double offset, RealPoint gradient);
  static BoundaryTemperature custom(Function f, std::string description);

  double operator()(std::span<const double> boundary_point) const { return fn_(boundary_point); }
  const std::string& description() const { return description_; }
  bool is_constant() const { return constant_; }

 private:
  BoundaryTemperature(Function f, std::string description, bool constant)
      : fn_(std::move(f)), description_(std::move(description)), constant_(constant) {}

  Function fn_;
  std::string description_;
  bool constant_ = false;
};

/// T at the projection of w/L onto the boundary of D.
double bath_temperature(const BoundaryTemperature& temp, const DomainSpec& spec, const Point& w,
                        double scale);

/// bath_temperature for every bath point of the lattice, in bath order.
std::vector<double> bath_temperatures(const BoundaryTemperature& temp, const LatticeDomain& lattice);

/// Lattice point ⟨xL⟩ for a point x of D.
Point scaled_point(std::span<const double> x, double scale);

/// Lattice point ⟨xL + L^theta v⟩ used for mesoscopic placements.
Point mesoscopic_point(std::span<const double> x, double scale, double theta,
                       std::span<const double> offset);

std::string format_point(const Point& p);

}  // namespace ltesim

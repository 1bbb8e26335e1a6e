#include "ltesim/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "ltesim/error.hpp"

namespace ltesim {

namespace {

struct BoundingBox {
  std::vector<long> lo;
  std::vector<long> hi;
};

BoundingBox scaled_bounds(const DomainSpec& spec, double scale) {
  const int d = spec.dimension();
  std::vector<double> lo(static_cast<std::size_t>(d));
  std::vector<double> hi(static_cast<std::size_t>(d));
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          lo[0] = s.lower;
          hi[0] = s.upper;
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          lo = s.lower;
          hi = s.upper;
        } else {
          for (std::size_t a = 0; a < s.center.size(); ++a) {
            lo[a] = s.center[a] - s.radius;
            hi[a] = s.center[a] + s.radius;
          }
        }
      },
      spec.shape);
  BoundingBox box;
  for (int a = 0; a < d; ++a) {
    box.lo.push_back(static_cast<long>(std::floor(lo[static_cast<std::size_t>(a)] * scale)));
    box.hi.push_back(static_cast<long>(std::ceil(hi[static_cast<std::size_t>(a)] * scale)));
  }
  return box;
}

RealPoint to_real(const Point& v, double scale) {
  RealPoint x(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) x[a] = static_cast<double>(v[a]) / scale;
  return x;
}

}  // namespace

DomainSpec DomainSpec::interval(double lower, double upper) { return {Interval{lower, upper}}; }

DomainSpec DomainSpec::rectangle(RealPoint lower, RealPoint upper) {
  return {Rectangle{std::move(lower), std::move(upper)}};
}

DomainSpec DomainSpec::unit_cube(int dimension) {
  if (dimension == 1) return interval(0.0, 1.0);
  return rectangle(RealPoint(static_cast<std::size_t>(dimension), 0.0),
                   RealPoint(static_cast<std::size_t>(dimension), 1.0));
}

DomainSpec DomainSpec::ball(RealPoint center, double radius) {
  return {Ball{std::move(center), radius}};
}

int DomainSpec::dimension() const {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          return 1;
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          return static_cast<int>(s.lower.size());
        } else {
          return static_cast<int>(s.center.size());
        }
      },
      shape);
}

bool DomainSpec::contains(std::span<const double> x) const {
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          return x[0] > s.lower && x[0] < s.upper;
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          for (std::size_t a = 0; a < s.lower.size(); ++a) {
            if (!(x[a] > s.lower[a] && x[a] < s.upper[a])) return false;
          }
          return true;
        } else {
          double r2 = 0.0;
          for (std::size_t a = 0; a < s.center.size(); ++a) {
            const double dx = x[a] - s.center[a];
            r2 += dx * dx;
          }
          return r2 < s.radius * s.radius;
        }
      },
      shape);
}

RealPoint DomainSpec::project_to_boundary(std::span<const double> x) const {
  return std::visit(
      [&](const auto& s) -> RealPoint {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          if (x[0] <= s.lower) return {s.lower};
          if (x[0] >= s.upper) return {s.upper};
          return {(x[0] - s.lower <= s.upper - x[0]) ? s.lower : s.upper};
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          RealPoint p(x.begin(), x.end());
          if (!contains(x)) {
            for (std::size_t a = 0; a < p.size(); ++a) p[a] = std::clamp(p[a], s.lower[a], s.upper[a]);
            return p;
          }
          // Interior point: move to the nearest face.
          std::size_t best_axis = 0;
          double best = std::numeric_limits<double>::infinity();
          double target = 0.0;
          for (std::size_t a = 0; a < p.size(); ++a) {
            if (p[a] - s.lower[a] < best) {
              best = p[a] - s.lower[a];
              best_axis = a;
              target = s.lower[a];
            }
            if (s.upper[a] - p[a] < best) {
              best = s.upper[a] - p[a];
              best_axis = a;
              target = s.upper[a];
            }
          }
          p[best_axis] = target;
          return p;
        } else {
          double norm2 = 0.0;
          for (std::size_t a = 0; a < s.center.size(); ++a) {
            const double dx = x[a] - s.center[a];
            norm2 += dx * dx;
          }
          if (norm2 == 0.0) {
            throw Error(ErrorKind::ProjectionAmbiguous,
                        "projection onto the sphere is undefined at the centre");
          }
          const double factor = s.radius / std::sqrt(norm2);
          RealPoint p(s.center.size());
          for (std::size_t a = 0; a < p.size(); ++a) p[a] = s.center[a] + factor * (x[a] - s.center[a]);
          return p;
        }
      },
      shape);
}

void DomainSpec::validate() const {
  std::visit(
      [](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Interval>) {
          if (!(s.upper > s.lower) || !std::isfinite(s.lower) || !std::isfinite(s.upper)) {
            throw ConfigError("domain", "interval needs finite lower < upper");
          }
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          if (s.lower.empty() || s.lower.size() != s.upper.size()) {
            throw ConfigError("domain", "rectangle corners must have equal, positive dimension");
          }
          for (std::size_t a = 0; a < s.lower.size(); ++a) {
            if (!(s.upper[a] > s.lower[a]) || !std::isfinite(s.lower[a]) || !std::isfinite(s.upper[a])) {
              throw ConfigError("domain", "rectangle needs finite lower < upper on every axis");
            }
          }
        } else {
          if (s.center.size() < 2) throw ConfigError("domain", "ball needs dimension >= 2");
          if (!(s.radius > 0.0) || !std::isfinite(s.radius)) {
            throw ConfigError("domain", "ball radius must be positive");
          }
        }
      },
      shape);
}

std::string DomainSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        auto vec = [&](const RealPoint& p) {
          os << '(';
          for (std::size_t a = 0; a < p.size(); ++a) os << (a ? "," : "") << p[a];
          os << ')';
        };
        if constexpr (std::is_same_v<S, Interval>) {
          os << "interval(" << s.lower << "," << s.upper << ")";
        } else if constexpr (std::is_same_v<S, Rectangle>) {
          os << "rectangle";
          vec(s.lower);
          vec(s.upper);
        } else {
          os << "ball";
          vec(s.center);
          os << "r=" << s.radius;
        }
      },
      shape);
  return os.str();
}

std::int64_t LatticeDomain::find_site(const Point& p) const {
  auto it = site_index_.find(p);
  return it == site_index_.end() ? -1 : it->second;
}

std::int64_t LatticeDomain::find_bath(const Point& p) const {
  auto it = bath_index_.find(p);
  return it == bath_index_.end() ? -1 : it->second;
}

std::size_t LatticeDomain::require_site(const Point& p, const std::string& what) const {
  const auto idx = find_site(p);
  if (idx < 0) throw ConfigError(what, "lattice point " + format_point(p) + " is not a site");
  return static_cast<std::size_t>(idx);
}

LatticeDomain build_lattice(const DomainSpec& spec, double scale) {
  spec.validate();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("L", "scale must be positive");

  LatticeDomain lat;
  lat.spec_ = spec;
  lat.dimension_ = spec.dimension();
  lat.scale_ = scale;
  const auto d = static_cast<std::size_t>(lat.dimension_);

  // Odometer over the bounding box, last axis fastest, so sites come out
  // in lexicographic order.
  const BoundingBox box = scaled_bounds(spec, scale);
  Point v(d);
  for (std::size_t a = 0; a < d; ++a) v[a] = static_cast<int>(box.lo[a]);
  auto advance = [&] {
    for (std::size_t a = d; a-- > 0;) {
      if (v[a] < box.hi[a]) {
        ++v[a];
        return true;
      }
      v[a] = static_cast<int>(box.lo[a]);
    }
    return false;
  };
  do {
    if (spec.contains(to_real(v, scale))) {
      lat.site_index_.emplace(v, static_cast<std::int32_t>(lat.sites_.size()));
      lat.sites_.push_back(v);
    }
  } while (advance());

  if (lat.sites_.empty()) {
    throw Error(ErrorKind::EmptyDomain, "no lattice points inside " + spec.describe() +
                                            " at L=" + std::to_string(scale));
  }

  std::set<Point> bath_points;
  for (const Point& s : lat.sites_) {
    for (std::size_t a = 0; a < d; ++a) {
      for (int sign : {-1, 1}) {
        Point w = s;
        w[a] += sign;
        if (!lat.site_index_.contains(w)) bath_points.insert(w);
      }
    }
  }
  for (const Point& w : bath_points) {
    lat.bath_index_.emplace(w, static_cast<std::int32_t>(lat.bath_.size()));
    lat.bath_.push_back(w);
  }

  lat.neighbors_.resize(lat.sites_.size() * 2 * d);
  for (std::size_t i = 0; i < lat.sites_.size(); ++i) {
    for (std::size_t a = 0; a < d; ++a) {
      for (int side = 0; side < 2; ++side) {
        Point w = lat.sites_[i];
        w[a] += side == 0 ? -1 : 1;
        const auto site = lat.site_index_.find(w);
        const std::size_t slot = i * 2 * d + 2 * a + static_cast<std::size_t>(side);
        if (site != lat.site_index_.end()) {
          lat.neighbors_[slot] = site->second;
        } else {
          lat.neighbors_[slot] = ~lat.bath_index_.at(w);
        }
      }
    }
  }

  // Connectivity of the nearest-neighbour graph on the sites.
  std::vector<char> seen(lat.sites_.size(), 0);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop();
    for (int dir = 0; dir < lat.directions(); ++dir) {
      const auto n = lat.neighbor(s, dir);
      if (LatticeDomain::is_bath(n) || seen[static_cast<std::size_t>(n)]) continue;
      seen[static_cast<std::size_t>(n)] = 1;
      ++reached;
      frontier.push(static_cast<std::size_t>(n));
    }
  }
  if (reached != lat.sites_.size()) {
    throw Error(ErrorKind::DisconnectedDomain,
                "site graph of " + spec.describe() + " at L=" + std::to_string(scale) +
                    " has " + std::to_string(lat.sites_.size() - reached) + " unreachable sites");
  }
  return lat;
}

Point nearest_lattice_point(std::span<const double> x) {
  Point p(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) p[a] = static_cast<int>(std::floor(x[a] + 0.5));
  return p;
}

BoundaryTemperature BoundaryTemperature::constant(double value) {
  std::ostringstream os;
  os << "constant(" << value << ")";
  return {[value](std::span<const double>) { return value; }, os.str(), true};
}

BoundaryTemperature BoundaryTemperature::endpoints(double left, double right, double lower,
                                                   double upper) {
  std::ostringstream os;
  os << "endpoints(" << left << "," << right << ")";
  return {[=](std::span<const double> x) {
            return left + (right - left) * (x[0] - lower) / (upper - lower);
          },
          os.str(), left == right};
}

BoundaryTemperature BoundaryTemperature::linear(double offset, RealPoint gradient) {
  std::ostringstream os;
  os << "linear(" << offset;
  bool flat = true;
  for (double g : gradient) {
    os << "," << g;
    flat = flat && g == 0.0;
  }
  os << ")";
  return {[offset, g = std::move(gradient)](std::span<const double> x) {
            double t = offset;
            for (std::size_t a = 0; a < g.size() && a < x.size(); ++a) t += g[a] * x[a];
            return t;
          },
          os.str(), flat};
}

BoundaryTemperature BoundaryTemperature::custom(Function f, std::string description) {
  return {std::move(f), std::move(description), false};
}

double bath_temperature(const BoundaryTemperature& temp, const DomainSpec& spec, const Point& w,
                        double scale) {
  const RealPoint x = to_real(w, scale);
  return temp(spec.project_to_boundary(x));
}

std::vector<double> bath_temperatures(const BoundaryTemperature& temp, const LatticeDomain& lattice) {
  std::vector<double> out;
  out.reserve(lattice.num_bath());
  for (const Point& w : lattice.bath()) {
    out.push_back(bath_temperature(temp, lattice.spec(), w, lattice.scale()));
  }
  return out;
}

Point scaled_point(std::span<const double> x, double scale) {
  RealPoint y(x.begin(), x.end());
  for (double& c : y) c *= scale;
  return nearest_lattice_point(y);
}

Point mesoscopic_point(std::span<const double> x, double scale, double theta,
                       std::span<const double> offset) {
  RealPoint y(x.begin(), x.end());
  const double meso = std::pow(scale, theta);
  for (std::size_t a = 0; a < y.size(); ++a) {
    y[a] = y[a] * scale + (a < offset.size() ? meso * offset[a] : 0.0);
  }
  return nearest_lattice_point(y);
}

std::string format_point(const Point& p) {
  std::string s = "(";
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (a) s += ",";
    s += std::to_string(p[a]);
  }
  return s + ")";
}

}  // namespace ltesim

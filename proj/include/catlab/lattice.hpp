#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace catlab {

/// Largest lattice dimension supported by the fixed-size point storage.
inline constexpr std::size_t kMaxDim = 6;

using Coord = std::int32_t;
/// Squared Euclidean lengths. All geometric comparisons are done on these.
using SquaredLength = std::int64_t;

/// A site of Z^d. Coordinates past dim() are always zero, so the defaulted
/// ordering is the lexicographic order on Z^d.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim);
  Point(std::initializer_list<Coord> coords);
  static Point from(std::span<const Coord> coords);
  /// The standard unit vector e_{axis+1} of Z^dim.
  static Point unit(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return dim_; }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  Coord& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Coord> coords() const { return {coords_.data(), dim_}; }

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  Point operator-() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::array<Coord, kMaxDim> coords_{};
  std::uint8_t dim_ = 0;
};

SquaredLength squared_norm(const Point& p);
SquaredLength squared_distance(const Point& a, const Point& b);
std::string to_string(const Point& p);

/// A finite set of distinct sites, stored sorted in lexicographic order.
class Configuration {
 public:
  using const_iterator = std::vector<Point>::const_iterator;

  explicit Configuration(std::size_t dim = 1);
  /// Throws std::invalid_argument on duplicate points or mismatched dimension.
  Configuration(std::size_t dim, std::vector<Point> points);
  Configuration(std::initializer_list<Point> points);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const_iterator begin() const { return points_.begin(); }
  const_iterator end() const { return points_.end(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::span<const Point> points() const { return points_; }

  bool contains(const Point& p) const;
  /// Returns false when p was already present.
  bool insert(const Point& p);
  /// Returns false when p was absent.
  bool erase(const Point& p);

  Configuration translated(const Point& offset) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

 private:
  std::size_t dim_;
  std::vector<Point> points_;
};

Configuration set_union(const Configuration& a, const Configuration& b);
Configuration set_difference(const Configuration& a, const Configuration& b);

/// diam(C) squared; throws "empty configuration" on C = {}.
SquaredLength diameter_sq(const Configuration& c);
double diameter(const Configuration& c);

/// dist(A, B) squared, or nullopt for +infinity (exactly one side empty).
/// Throws when both are empty.
std::optional<SquaredLength> distance_sq(const Configuration& a, const Configuration& b);
double distance(const Configuration& a, const Configuration& b);

/// Outer site boundary {x not in C : dist(x, C) = 1}.
Configuration boundary(const Configuration& c);
Configuration closure(const Configuration& c);

/// Open discrete Euclidean ball {y : |x - y| < r}.
class Ball {
 public:
  Ball(Point center, double radius);
  const Point& center() const { return center_; }
  double radius() const { return radius_; }
  bool contains(const Point& y) const;
  Configuration sites() const;
  std::size_t count_in(const Configuration& c) const;

 private:
  Point center_;
  double radius_;
};

bool adjacent(const Point& a, const Point& b);

/// Nearest-neighbour connected component of x in C; empty when x is not in C.
Configuration component_of(const Configuration& c, const Point& x);
/// Connected components ordered by their lexicographically least point.
std::vector<Configuration> components(const Configuration& c);
/// Per-point component sizes, aligned with c.points().
std::vector<std::size_t> component_sizes(const Configuration& c);

/// True iff C is a translate of {e_1, ..., k e_1} for some k >= 1.
bool is_e1_segment(const Configuration& c);
/// The segment {i e_1, ..., j e_1} of Z^dim.
Configuration e1_segment(std::size_t dim, Coord first, Coord last);

const Point& lex_min(const Configuration& c);

/// A configuration up to lattice translation, represented by the translate
/// whose least point is the origin.
class TranslationClass {
 public:
  explicit TranslationClass(const Configuration& c);
  const Configuration& canonical() const { return canonical_; }

  friend bool operator==(const TranslationClass&, const TranslationClass&) = default;
  friend auto operator<=>(const TranslationClass&, const TranslationClass&) = default;

 private:
  Configuration canonical_;
};

/// Text format: a "d=<dim>" header line, then one point per line as
/// space-separated integers. Blank lines and '#' comments are ignored.
void write_configuration(std::ostream& os, const Configuration& c);
Configuration read_configuration(std::istream& is);
Configuration parse_configuration(const std::string& text);
std::string format_configuration(const Configuration& c);

}  // namespace catlab

template <>
struct std::hash<catlab::Point> {
  std::size_t operator()(const catlab::Point& p) const noexcept;
};

template <>
struct std::hash<catlab::Configuration> {
  std::size_t operator()(const catlab::Configuration& c) const noexcept;
};

template <>
struct std::hash<catlab::TranslationClass> {
  std::size_t operator()(const catlab::TranslationClass& c) const noexcept {
    return std::hash<catlab::Configuration>{}(c.canonical());
  }
};

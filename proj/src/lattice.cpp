#include "catlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "catlab/errors.hpp"

namespace catlab {

namespace {

void check_dim(std::size_t dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw ValidationError("unsupported dimension " + std::to_string(dim) + " (supported: 1.." +
                          std::to_string(kMaxDim) + ")");
  }
}

void require_nonempty(const Configuration& c) {
  if (c.empty()) throw ValidationError("empty configuration");
}

}  // namespace

Point::Point(std::size_t dim) : dim_(static_cast<std::uint8_t>(dim)) { check_dim(dim); }

Point::Point(std::initializer_list<Coord> coords) : dim_(static_cast<std::uint8_t>(coords.size())) {
  check_dim(coords.size());
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

Point Point::from(std::span<const Coord> coords) {
  Point p(coords.size());
  std::copy(coords.begin(), coords.end(), p.coords_.begin());
  return p;
}

Point Point::unit(std::size_t dim, std::size_t axis) {
  Point p(dim);
  if (axis >= dim) throw ValidationError("unit vector axis out of range");
  p.coords_[axis] = 1;
  return p;
}

Point& Point::operator+=(const Point& other) {
  for (std::size_t i = 0; i < dim_; ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  for (std::size_t i = 0; i < dim_; ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point Point::operator-() const {
  Point p = *this;
  for (std::size_t i = 0; i < dim_; ++i) p.coords_[i] = -p.coords_[i];
  return p;
}

SquaredLength squared_norm(const Point& p) {
  SquaredLength s = 0;
  for (std::size_t i = 0; i < p.dim(); ++i) s += SquaredLength{p[i]} * p[i];
  return s;
}

SquaredLength squared_distance(const Point& a, const Point& b) {
  SquaredLength s = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const SquaredLength diff = SquaredLength{a[i]} - b[i];
    s += diff * diff;
  }
  return s;
}

std::string to_string(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out + ")";
}

// --- Configuration ---

Configuration::Configuration(std::size_t dim) : dim_(dim) { check_dim(dim); }

Configuration::Configuration(std::size_t dim, std::vector<Point> points)
    : dim_(dim), points_(std::move(points)) {
  check_dim(dim);
  for (const auto& p : points_) {
    if (p.dim() != dim_) throw ValidationError("point dimension mismatch: " + to_string(p));
  }
  std::sort(points_.begin(), points_.end());
  if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
    throw ValidationError("duplicate point in configuration");
  }
}

Configuration::Configuration(std::initializer_list<Point> points)
    : Configuration(points.size() ? points.begin()->dim() : 1, std::vector<Point>(points)) {}

bool Configuration::contains(const Point& p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

bool Configuration::insert(const Point& p) {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it != points_.end() && *it == p) return false;
  points_.insert(it, p);
  return true;
}

bool Configuration::erase(const Point& p) {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it == points_.end() || *it != p) return false;
  points_.erase(it);
  return true;
}

Configuration Configuration::translated(const Point& offset) const {
  Configuration out(dim_);
  out.points_.reserve(points_.size());
  // Translation preserves lexicographic order.
  for (const auto& p : points_) out.points_.push_back(p + offset);
  return out;
}

Configuration set_union(const Configuration& a, const Configuration& b) {
  std::vector<Point> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Configuration(a.dim(), std::move(out));
}

Configuration set_difference(const Configuration& a, const Configuration& b) {
  std::vector<Point> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Configuration(a.dim(), std::move(out));
}

// --- metric ---

SquaredLength diameter_sq(const Configuration& c) {
  require_nonempty(c);
  SquaredLength best = 0;
  const auto pts = c.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      best = std::max(best, squared_distance(pts[i], pts[j]));
    }
  }
  return best;
}

double diameter(const Configuration& c) { return std::sqrt(static_cast<double>(diameter_sq(c))); }

std::optional<SquaredLength> distance_sq(const Configuration& a, const Configuration& b) {
  if (a.empty() && b.empty()) throw ValidationError("distance between two empty configurations");
  if (a.empty() || b.empty()) return std::nullopt;
  SquaredLength best = std::numeric_limits<SquaredLength>::max();
  for (const auto& x : a) {
    for (const auto& y : b) best = std::min(best, squared_distance(x, y));
  }
  return best;
}

double distance(const Configuration& a, const Configuration& b) {
  const auto d2 = distance_sq(a, b);
  return d2 ? std::sqrt(static_cast<double>(*d2)) : std::numeric_limits<double>::infinity();
}

Configuration boundary(const Configuration& c) {
  require_nonempty(c);
  std::vector<Point> out;
  out.reserve(2 * c.dim() * c.size());
  for (const auto& p : c) {
    for (std::size_t axis = 0; axis < c.dim(); ++axis) {
      for (Coord step : {Coord{-1}, Coord{1}}) {
        Point q = p;
        q[axis] += step;
        if (!c.contains(q)) out.push_back(q);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Configuration(c.dim(), std::move(out));
}

Configuration closure(const Configuration& c) { return set_union(c, boundary(c)); }

// --- balls ---

Ball::Ball(Point center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0)) throw ValidationError("ball radius must be positive");
}

bool Ball::contains(const Point& y) const {
  return static_cast<double>(squared_distance(center_, y)) < radius_ * radius_;
}

Configuration Ball::sites() const {
  const std::size_t d = center_.dim();
  const auto reach = static_cast<Coord>(std::ceil(radius_));
  std::vector<Point> out;
  Point offset(d);
  for (std::size_t i = 0; i < d; ++i) offset[i] = -reach;
  // Odometer over the bounding cube.
  while (true) {
    const Point y = center_ + offset;
    if (contains(y)) out.push_back(y);
    std::size_t axis = 0;
    while (axis < d && offset[axis] == reach) offset[axis++] = -reach;
    if (axis == d) break;
    ++offset[axis];
  }
  return Configuration(d, std::move(out));
}

std::size_t Ball::count_in(const Configuration& c) const {
  return static_cast<std::size_t>(
      std::count_if(c.begin(), c.end(), [this](const Point& p) { return contains(p); }));
}

// --- connectivity ---

bool adjacent(const Point& a, const Point& b) { return squared_distance(a, b) == 1; }

namespace {

// Component label per point index; labels are assigned in order of the
// least point of each component, since points are scanned in lex order.
std::vector<std::size_t> label_components(const Configuration& c, std::size_t& count) {
  const auto pts = c.points();
  constexpr auto kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> label(pts.size(), kUnset);
  std::vector<std::size_t> stack;
  count = 0;
  for (std::size_t start = 0; start < pts.size(); ++start) {
    if (label[start] != kUnset) continue;
    label[start] = count;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t axis = 0; axis < c.dim(); ++axis) {
        for (Coord step : {Coord{-1}, Coord{1}}) {
          Point q = pts[i];
          q[axis] += step;
          auto it = std::lower_bound(pts.begin(), pts.end(), q);
          if (it == pts.end() || *it != q) continue;
          const auto j = static_cast<std::size_t>(it - pts.begin());
          if (label[j] == kUnset) {
            label[j] = count;
            stack.push_back(j);
          }
        }
      }
    }
    ++count;
  }
  return label;
}

}  // namespace

Configuration component_of(const Configuration& c, const Point& x) {
  if (!c.contains(x)) return Configuration(c.dim());
  for (auto& part : components(c)) {
    if (part.contains(x)) return part;
  }
  return Configuration(c.dim());
}

std::vector<Configuration> components(const Configuration& c) {
  std::size_t count = 0;
  const auto label = label_components(c, count);
  std::vector<std::vector<Point>> parts(count);
  for (std::size_t i = 0; i < c.size(); ++i) parts[label[i]].push_back(c[i]);
  std::vector<Configuration> out;
  out.reserve(count);
  for (auto& part : parts) out.emplace_back(c.dim(), std::move(part));
  return out;
}

std::vector<std::size_t> component_sizes(const Configuration& c) {
  std::size_t count = 0;
  const auto label = label_components(c, count);
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : label) ++sizes[l];
  std::vector<std::size_t> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = sizes[label[i]];
  return out;
}

bool is_e1_segment(const Configuration& c) {
  if (c.empty()) return false;
  const Point& first = c[0];
  // Sorted order of an e_1 segment is by the first coordinate.
  for (std::size_t i = 1; i < c.size(); ++i) {
    Point expected = first;
    expected[0] += static_cast<Coord>(i);
    if (c[i] != expected) return false;
  }
  return true;
}

Configuration e1_segment(std::size_t dim, Coord first, Coord last) {
  std::vector<Point> pts;
  for (Coord k = first; k <= last; ++k) {
    Point p(dim);
    p[0] = k;
    pts.push_back(p);
  }
  return Configuration(dim, std::move(pts));
}

const Point& lex_min(const Configuration& c) {
  require_nonempty(c);
  return c[0];
}

TranslationClass::TranslationClass(const Configuration& c)
    : canonical_(c.translated(-lex_min(c))) {}

// --- text format ---

void write_configuration(std::ostream& os, const Configuration& c) {
  os << "d=" << c.dim() << '\n';
  for (const auto& p : c) {
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? " " : "") << p[i];
    os << '\n';
  }
}

std::string format_configuration(const Configuration& c) {
  std::ostringstream os;
  write_configuration(os, c);
  return os.str();
}

Configuration read_configuration(std::istream& is) {
  std::string line;
  std::optional<std::size_t> dim;
  std::vector<Point> pts;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!dim) {
      const auto start = line.find_first_not_of(" \t");
      if (line.compare(start, 2, "d=") != 0) {
        throw ValidationError("configuration header must be 'd=<dim>', got: " + line);
      }
      try {
        dim = std::stoul(line.substr(start + 2));
      } catch (const std::exception&) {
        throw ValidationError("bad dimension header: " + line);
      }
      check_dim(*dim);
      continue;
    }
    std::istringstream row(line);
    std::vector<Coord> coords;
    long long v;
    while (row >> v) coords.push_back(static_cast<Coord>(v));
    if (!row.eof() || coords.size() != *dim) {
      throw ValidationError("bad point line (expected " + std::to_string(*dim) +
                            " integers): " + line);
    }
    pts.push_back(Point::from(coords));
  }
  if (!dim) throw ValidationError("missing 'd=<dim>' header");
  return Configuration(*dim, std::move(pts));
}

Configuration parse_configuration(const std::string& text) {
  std::istringstream is(text);
  return read_configuration(is);
}

}  // namespace catlab

std::size_t std::hash<catlab::Point>::operator()(const catlab::Point& p) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ p.dim();
  for (std::size_t i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint32_t>(p[i]);
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::size_t std::hash<catlab::Configuration>::operator()(
    const catlab::Configuration& c) const noexcept {
  std::size_t h = c.size();
  for (const auto& p : c) h = h * 1000003u ^ std::hash<catlab::Point>{}(p);
  return h;
}

#pragma once

#include <random>
#include <set>
#include <stdexcept>

#include "catlab/lattice.hpp"
#include "oracle.hpp"

namespace testing_util {

inline oracle::Set to_set(const catlab::Configuration& c) {
  oracle::Set out;
  for (const auto& p : c) out.insert(oracle::Site(p.coords().begin(), p.coords().end()));
  return out;
}

inline catlab::Configuration from_set(std::size_t dim, const oracle::Set& s) {
  std::vector<catlab::Point> pts;
  for (const auto& site : s) pts.push_back(catlab::Point::from(site));
  return catlab::Configuration(dim, std::move(pts));
}

/// n distinct sites drawn uniformly from the box [0, side)^dim.
inline catlab::Configuration random_configuration(std::mt19937_64& gen, std::size_t dim,
                                                  std::size_t n, int side) {
  std::size_t volume = 1;
  for (std::size_t i = 0; i < dim; ++i) volume *= static_cast<std::size_t>(side);
  if (n > volume) throw std::invalid_argument("box too small");
  std::uniform_int_distribution<int> coord(0, side - 1);
  std::set<catlab::Point> pts;
  while (pts.size() < n) {
    catlab::Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = coord(gen);
    pts.insert(p);
  }
  return catlab::Configuration(dim, {pts.begin(), pts.end()});
}

/// A lattice animal: grows from the origin by adding random boundary sites.
inline catlab::Configuration random_connected(std::mt19937_64& gen, std::size_t dim,
                                              std::size_t n) {
  catlab::Configuration c(dim, {catlab::Point(dim)});
  while (c.size() < n) {
    const auto b = catlab::boundary(c);
    std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
    c.insert(b[pick(gen)]);
  }
  return c;
}

}  // namespace testing_util

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

namespace catlab {

/// Half the L1 distance between two (sub)probability maps over a common key.
template <class Key, class P>
P total_variation(const std::map<Key, P>& a, const std::map<Key, P>& b) {
  P sum = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      sum += ia->second < 0 ? P(-ia->second) : ia->second;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      sum += ib->second < 0 ? P(-ib->second) : ib->second;
      ++ib;
    } else {
      const P diff = ia->second - ib->second;
      sum += diff < 0 ? P(-diff) : diff;
      ++ia;
      ++ib;
    }
  }
  return sum / 2;
}

/// Normalised frequencies of a count map.
template <class Key, class Count>
std::map<Key, double> normalise(const std::map<Key, Count>& counts) {
  double total = 0;
  for (const auto& [k, c] : counts) total += static_cast<double>(c);
  std::map<Key, double> out;
  if (total == 0) return out;
  for (const auto& [k, c] : counts) out[k] = static_cast<double>(c) / total;
  return out;
}

inline double median(std::vector<double> values) {
  if (values.empty()) return std::nan("");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

struct MeanStats {
  double mean = 0;
  double stddev = 0;
  double stderr_mean = 0;
  std::size_t count = 0;
};

inline MeanStats mean_stats(std::span<const double> values) {
  MeanStats s;
  s.count = values.size();
  if (values.empty()) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    s.stderr_mean = s.stddev / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

/// Least-squares slope and intercept of y on x.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return fit;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace catlab

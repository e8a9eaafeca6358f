#ifndef CODEBOUND_INTERVAL_MAX_HPP
#define CODEBOUND_INTERVAL_MAX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace codebound {

struct LocalMax {
  double location = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

struct IntervalMaxResult {
  double max_value = -std::numeric_limits<double>::infinity();
  double argmax = 0.0;
  std::size_t grid_size = 0;
  /// Refined local maxima, largest value first.
  std::vector<LocalMax> local_maxima;
};

/// Golden-section search for a maximum of f on [a, b].
template <class F>
LocalMax golden_section_max(const F& f, double a, double b, int max_iter = 200) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? LocalMax{x1, f1} : LocalMax{x2, f2};
}

/// Maximum of f on [lo, hi]: uniform grid with `intervals` cells, then
/// golden-section refinement around the grid's local maxima (at most
/// `max_refined` of them, highest first).
template <class F>
IntervalMaxResult maximize_on_interval(const F& f, double lo, double hi, std::size_t intervals,
                                       std::size_t max_refined = 256) {
  IntervalMaxResult out;
  if (hi < lo) std::swap(lo, hi);
  if (intervals == 0 || hi == lo) {
    out.max_value = f(lo);
    out.argmax = lo;
    out.grid_size = 1;
    out.local_maxima.push_back({lo, out.max_value});
    return out;
  }
  const std::size_t n = intervals + 1;
  std::vector<double> xs(n);
  std::vector<double> fs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(intervals);
    fs[i] = f(xs[i]);
  }
  out.grid_size = n;

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || fs[i] >= fs[i - 1];
    const bool right_ok = i + 1 == n || fs[i] >= fs[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return fs[a] > fs[b]; });
  if (peaks.size() > max_refined) peaks.resize(max_refined);

  for (std::size_t i : peaks) {
    const double a = xs[i == 0 ? 0 : i - 1];
    const double b = xs[i + 1 == n ? n - 1 : i + 1];
    LocalMax best{xs[i], fs[i]};
    const LocalMax g = golden_section_max(f, a, b);
    if (g.value > best.value) best = g;
    out.local_maxima.push_back(best);
  }
  std::sort(out.local_maxima.begin(), out.local_maxima.end(),
            [](const LocalMax& a, const LocalMax& b) { return a.value > b.value; });
  out.max_value = out.local_maxima.front().value;
  out.argmax = out.local_maxima.front().location;
  return out;
}

}  // namespace codebound

#endif  // CODEBOUND_INTERVAL_MAX_HPP

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wpa {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// `count` equally spaced nodes covering [lo, hi], endpoints included.
/// Node j is computed as lo + j*(hi-lo)/(count-1) so that two calls with the
/// same arguments produce bit-identical nodes.
std::vector<double> uniform_nodes(double lo, double hi, std::size_t count);

/// Cartesian product of per-axis node lists. Points are enumerated in
/// row-major order (last axis fastest).
class TensorGrid {
 public:
  explicit TensorGrid(std::vector<std::vector<double>> axes);

  /// The same node list on every one of `dim` axes.
  static TensorGrid cube(std::size_t dim, std::vector<double> nodes);

  std::size_t dim() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<double>& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<std::vector<double>>& axes() const noexcept { return axes_; }

  /// Writes the coordinates of point `flat` into `out` (size dim()).
  void point(std::size_t flat, std::span<double> out) const;

  /// Calls fn(flat_index, point) for every point in row-major order.
  void for_each(const std::function<void(std::size_t, PointView)>& fn) const;

 private:
  std::vector<std::vector<double>> axes_;
  std::size_t size_ = 0;
};

/// "(x1, x2, ...)" with full precision, used in error messages.
std::string format_point(PointView x);

double euclidean_norm(PointView x);

}  // namespace wpa

#include "wpa/grid.hpp"

#include <cmath>
#include <sstream>

#include "wpa/errors.hpp"

namespace wpa {

std::vector<double> uniform_nodes(double lo, double hi, std::size_t count) {
  if (count < 2) throw InputError("uniform_nodes: need at least 2 nodes");
  if (!(hi > lo)) throw InputError("uniform_nodes: empty interval");
  std::vector<double> nodes(count);
  const double span = hi - lo;
  const double denom = static_cast<double>(count - 1);
  for (std::size_t j = 0; j < count; ++j) {
    nodes[j] = lo + span * (static_cast<double>(j) / denom);
  }
  nodes.back() = hi;
  return nodes;
}

TensorGrid::TensorGrid(std::vector<std::vector<double>> axes) : axes_(std::move(axes)) {
  if (axes_.empty()) throw InputError("TensorGrid: zero dimensions");
  size_ = 1;
  for (const auto& a : axes_) {
    if (a.empty()) throw InputError("TensorGrid: empty axis");
    size_ *= a.size();
  }
}

TensorGrid TensorGrid::cube(std::size_t dim, std::vector<double> nodes) {
  return TensorGrid(std::vector<std::vector<double>>(dim, std::move(nodes)));
}

void TensorGrid::point(std::size_t flat, std::span<double> out) const {
  for (std::size_t i = axes_.size(); i-- > 0;) {
    const auto& a = axes_[i];
    out[i] = a[flat % a.size()];
    flat /= a.size();
  }
}

void TensorGrid::for_each(const std::function<void(std::size_t, PointView)>& fn) const {
  Point x(dim());
  for (std::size_t k = 0; k < size_; ++k) {
    point(k, x);
    fn(k, x);
  }
}

std::string format_point(PointView x) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

double euclidean_norm(PointView x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace wpa

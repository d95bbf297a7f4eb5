#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "sigloc/errors.hpp"

namespace sigloc {

/// One hidden-variable value: a discrete branch index plus a point in the
/// unit hypercube [0,1)^d.
struct LambdaPoint {
  std::uint32_t branch = 0;
  std::vector<double> coords;

  friend bool operator==(const LambdaPoint&, const LambdaPoint&) = default;
};

/// Per-branch density on [0,1)^d relative to Lebesgue measure. An empty
/// function means the uniform density (identically 1). Must be pure, and must
/// integrate to 1 over the hypercube for each branch.
using DensityFn = std::function<double(const LambdaPoint&)>;

/// The hidden-variable space together with its equilibrium measure, factored
/// as branch weights times a per-branch density on the unit hypercube.
/// Immutable after construction and safe to share across threads.
class LambdaSpace {
 public:
  LambdaSpace() : branch_weights_{1.0} {}

  LambdaSpace(std::vector<double> branch_weights, std::size_t dim,
              DensityFn base_density = {})
      : branch_weights_(std::move(branch_weights)),
        dim_(dim),
        base_density_(std::move(base_density)) {
    if (branch_weights_.empty()) {
      throw DomainError("lambda space needs at least one branch");
    }
    double sum = 0.0;
    for (double w : branch_weights_) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw DomainError("branch weights must be finite and non-negative");
      }
      sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) {
      throw DomainError("branch weights must sum to 1 within 1e-12");
    }
  }

  std::size_t branch_count() const { return branch_weights_.size(); }
  const std::vector<double>& branch_weights() const { return branch_weights_; }
  std::size_t dim() const { return dim_; }
  const DensityFn& base_density() const { return base_density_; }

  double density(const LambdaPoint& p) const {
    return base_density_ ? base_density_(p) : 1.0;
  }

  bool contains(const LambdaPoint& p) const {
    return p.branch < branch_count() && p.coords.size() == dim_;
  }

 private:
  std::vector<double> branch_weights_;
  std::size_t dim_ = 0;
  DensityFn base_density_;
};

/// Structural identity check used by operations that combine a model with an
/// ensemble: same branch weights and same continuous dimension. Densities are
/// opaque callables and cannot be compared; callers are expected to build
/// ensembles from the model's own space.
inline bool same_space(const LambdaSpace& x, const LambdaSpace& y) {
  return x.dim() == y.dim() && x.branch_weights() == y.branch_weights();
}

}  // namespace sigloc

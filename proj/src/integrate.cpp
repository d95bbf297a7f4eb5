#include "sigloc/integrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <utility>

#include "sigloc/errors.hpp"
#include "sigloc/rng.hpp"

namespace sigloc {
namespace {

std::atomic<unsigned> g_max_workers{0};

// Fixed chunk size: the unit of parallel work. Reduction runs over chunks in
// index order, so sums are independent of the worker count.
constexpr std::uint64_t kChunk = 1 << 14;

unsigned effective_workers() {
  unsigned w = g_max_workers.load(std::memory_order_relaxed);
  if (w == 0) w = std::thread::hardware_concurrency();
  return w == 0 ? 1 : w;
}

Method resolve_method(const LambdaSpace& space, const IntegrationBudget& budget) {
  switch (budget.method) {
    case MethodChoice::automatic:
      return space.dim() == 0 ? Method::exact_enumeration : Method::monte_carlo;
    case MethodChoice::exact_enumeration:
      return Method::exact_enumeration;
    case MethodChoice::quadrature:
      return Method::quadrature;
    case MethodChoice::monte_carlo:
      return Method::monte_carlo;
  }
  throw MethodError("unknown integration method");
}

/// Largest-remainder allocation of `total` samples proportional to the branch
/// weights; every positively weighted branch receives at least one sample.
std::vector<std::uint64_t> allocate_samples(const std::vector<double>& weights,
                                            std::uint64_t total) {
  const std::size_t n = weights.size();
  std::size_t positive = 0;
  for (double w : weights) positive += w > 0.0 ? 1 : 0;
  if (total < positive) {
    throw MethodError("Monte Carlo budget smaller than the number of positively weighted branches");
  }

  std::vector<std::uint64_t> alloc(n, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  remainders.reserve(n);
  std::uint64_t assigned = 0;
  for (std::size_t b = 0; b < n; ++b) {
    const double quota = static_cast<double>(total) * weights[b];
    const auto whole = static_cast<std::uint64_t>(std::floor(quota));
    alloc[b] = whole;
    assigned += whole;
    remainders.emplace_back(quota - static_cast<double>(whole), b);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % n) {
    ++alloc[remainders[i].second];
    ++assigned;
  }
  for (std::size_t b = 0; b < n; ++b) {
    if (weights[b] > 0.0 && alloc[b] == 0) {
      const auto donor = static_cast<std::size_t>(
          std::max_element(alloc.begin(), alloc.end()) - alloc.begin());
      --alloc[donor];
      ++alloc[b];
    }
  }
  return alloc;
}

struct Task {
  std::uint32_t branch = 0;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
};

struct TaskSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

template <typename Body>
void run_tasks(std::size_t task_count, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(effective_workers(), task_count));
  if (workers <= 1) {
    for (std::size_t t = 0; t < task_count; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto drain = [&] {
    std::size_t t;
    while ((t = next.fetch_add(1)) < task_count) {
      if (failed.load(std::memory_order_relaxed)) return;
      try {
        body(t);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned i = 0; i + 1 < workers; ++i) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Estimate> monte_carlo(const VectorIntegrand& f, std::size_t n_out,
                                  const LambdaSpace& space,
                                  const WeightFn& weight,
                                  const IntegrationBudget& budget) {
  const auto& branch_weights = space.branch_weights();
  const auto alloc = allocate_samples(branch_weights, budget.samples);
  const std::size_t d = space.dim();

  std::vector<Task> tasks;
  for (std::size_t b = 0; b < alloc.size(); ++b) {
    for (std::uint64_t begin = 0; begin < alloc[b]; begin += kChunk) {
      tasks.push_back({static_cast<std::uint32_t>(b), begin,
                       std::min(begin + kChunk, alloc[b])});
    }
  }

  std::vector<TaskSums> results(tasks.size());
  run_tasks(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    TaskSums sums{std::vector<double>(n_out, 0.0), std::vector<double>(n_out, 0.0)};
    LambdaPoint point;
    point.branch = task.branch;
    point.coords.resize(d);
    RandomStream stream = make_stream(budget.seed, task.branch);
    std::vector<double> out(n_out);
    for (std::uint64_t i = task.begin; i < task.end; ++i) {
      if (d > 0) {
        stream.seek(i * d);
        for (std::size_t j = 0; j < d; ++j) point.coords[j] = stream.next_double();
      }
      const double scale =
          (weight ? weight(point) : 1.0) * space.density(point);
      if (scale != 0.0) {
        f(point, out);
        for (std::size_t k = 0; k < n_out; ++k) {
          const double v = out[k] * scale;
          sums.sum[k] += v;
          sums.sum_sq[k] += v * v;
        }
      }
    }
    results[t] = std::move(sums);
  });

  // Chunk-ordered reduction, then stratified combination across branches.
  std::vector<double> value(n_out, 0.0);
  std::vector<double> variance(n_out, 0.0);
  std::size_t t = 0;
  for (std::size_t b = 0; b < alloc.size(); ++b) {
    if (alloc[b] == 0) continue;
    std::vector<double> sum(n_out, 0.0);
    std::vector<double> sum_sq(n_out, 0.0);
    for (; t < tasks.size() && tasks[t].branch == b; ++t) {
      for (std::size_t k = 0; k < n_out; ++k) {
        sum[k] += results[t].sum[k];
        sum_sq[k] += results[t].sum_sq[k];
      }
    }
    const auto n_b = static_cast<double>(alloc[b]);
    const double w_b = branch_weights[b];
    for (std::size_t k = 0; k < n_out; ++k) {
      const double mean = sum[k] / n_b;
      value[k] += w_b * mean;
      if (alloc[b] > 1) {
        const double var =
            std::max(0.0, (sum_sq[k] - n_b * mean * mean) / (n_b - 1.0));
        variance[k] += w_b * w_b * var / n_b;
      }
    }
  }

  std::vector<Estimate> estimates(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    estimates[k] = {value[k], std::sqrt(variance[k]), Method::monte_carlo,
                    budget.samples};
  }
  return estimates;
}

std::vector<Estimate> midpoint_quadrature(const VectorIntegrand& f,
                                          std::size_t n_out,
                                          const LambdaSpace& space,
                                          const WeightFn& weight,
                                          const IntegrationBudget& budget) {
  const std::size_t d = space.dim();
  const std::uint64_t m = budget.quadrature_points;
  if (m == 0) throw MethodError("quadrature needs at least one point per dimension");
  std::uint64_t cells = 1;
  for (std::size_t j = 0; j < d; ++j) {
    if (cells > std::numeric_limits<std::uint64_t>::max() / m / 2) {
      throw MethodError("quadrature grid too large");
    }
    cells *= m;
  }

  const auto& branch_weights = space.branch_weights();
  std::vector<Task> tasks;
  std::size_t active_branches = 0;
  for (std::size_t b = 0; b < branch_weights.size(); ++b) {
    if (branch_weights[b] == 0.0) continue;
    ++active_branches;
    for (std::uint64_t begin = 0; begin < cells; begin += kChunk) {
      tasks.push_back({static_cast<std::uint32_t>(b), begin,
                       std::min(begin + kChunk, cells)});
    }
  }

  std::vector<TaskSums> results(tasks.size());
  run_tasks(tasks.size(), [&](std::size_t t) {
    const Task& task = tasks[t];
    TaskSums sums{std::vector<double>(n_out, 0.0), {}};
    LambdaPoint point;
    point.branch = task.branch;
    point.coords.resize(d);
    std::vector<double> out(n_out);
    for (std::uint64_t cell = task.begin; cell < task.end; ++cell) {
      std::uint64_t rest = cell;
      for (std::size_t j = 0; j < d; ++j) {
        point.coords[j] = (static_cast<double>(rest % m) + 0.5) / static_cast<double>(m);
        rest /= m;
      }
      const double scale =
          (weight ? weight(point) : 1.0) * space.density(point);
      if (scale != 0.0) {
        f(point, out);
        for (std::size_t k = 0; k < n_out; ++k) sums.sum[k] += out[k] * scale;
      }
    }
    results[t] = std::move(sums);
  });

  std::vector<double> value(n_out, 0.0);
  std::size_t t = 0;
  for (std::size_t b = 0; b < branch_weights.size(); ++b) {
    if (branch_weights[b] == 0.0) continue;
    std::vector<double> sum(n_out, 0.0);
    for (; t < tasks.size() && tasks[t].branch == b; ++t) {
      for (std::size_t k = 0; k < n_out; ++k) sum[k] += results[t].sum[k];
    }
    for (std::size_t k = 0; k < n_out; ++k) {
      value[k] += branch_weights[b] * (sum[k] / static_cast<double>(cells));
    }
  }

  std::vector<Estimate> estimates(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    estimates[k] = {value[k], 0.0, Method::quadrature,
                    static_cast<std::uint64_t>(active_branches) * cells};
  }
  return estimates;
}

std::vector<Estimate> enumerate_branches(const VectorIntegrand& f,
                                         std::size_t n_out,
                                         const LambdaSpace& space,
                                         const WeightFn& weight) {
  if (space.dim() != 0) {
    throw MethodError("exact enumeration requires a finite space (d = 0)");
  }
  const auto& branch_weights = space.branch_weights();
  std::vector<double> value(n_out, 0.0);
  LambdaPoint point;
  std::vector<double> out(n_out);
  for (std::size_t b = 0; b < branch_weights.size(); ++b) {
    if (branch_weights[b] == 0.0) continue;
    point.branch = static_cast<std::uint32_t>(b);
    const double scale = (weight ? weight(point) : 1.0) * space.density(point);
    if (scale == 0.0) continue;
    f(point, out);
    for (std::size_t k = 0; k < n_out; ++k) {
      value[k] += branch_weights[b] * out[k] * scale;
    }
  }
  std::vector<Estimate> estimates(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    estimates[k] = {value[k], 0.0, Method::exact_enumeration,
                    branch_weights.size()};
  }
  return estimates;
}

}  // namespace

void set_max_workers(unsigned workers) {
  g_max_workers.store(workers, std::memory_order_relaxed);
}

unsigned max_workers() { return effective_workers(); }

std::vector<Estimate> integrate_vector(const VectorIntegrand& f,
                                       std::size_t n_outputs,
                                       const LambdaSpace& space,
                                       const WeightFn& weight,
                                       const IntegrationBudget& budget) {
  switch (resolve_method(space, budget)) {
    case Method::exact_enumeration:
      return enumerate_branches(f, n_outputs, space, weight);
    case Method::quadrature:
      return midpoint_quadrature(f, n_outputs, space, weight, budget);
    case Method::monte_carlo:
      return monte_carlo(f, n_outputs, space, weight, budget);
  }
  throw MethodError("unknown integration method");
}

Estimate integrate(const Integrand& f, const LambdaSpace& space,
                   const WeightFn& weight, const IntegrationBudget& budget) {
  auto wrapped = [&f](const LambdaPoint& p, std::span<double> out) {
    out[0] = f(p);
  };
  return integrate_vector(wrapped, 1, space, weight, budget)[0];
}

}  // namespace sigloc

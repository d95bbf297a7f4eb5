#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sigloc/budget.hpp"
#include "sigloc/estimate.hpp"
#include "sigloc/lambda_space.hpp"

namespace sigloc {

using Integrand = std::function<double(const LambdaPoint&)>;

/// Fills out[k] for each of the n requested components at one lambda point.
/// All components are evaluated on the same draw stream, which is what makes
/// same-stream identities (signal vs transition fractions) exact.
using VectorIntegrand =
    std::function<void(const LambdaPoint&, std::span<double>)>;

/// Density of the target distribution relative to the equilibrium measure.
/// Empty means equilibrium itself (weight identically 1).
using WeightFn = std::function<double(const LambdaPoint&)>;

/// Worker threads used inside integrate(). Purely an execution knob: results
/// are bit-identical for every worker count. 0 restores the hardware default.
void set_max_workers(unsigned workers);
unsigned max_workers();

/// Estimates integral(f . weight dRho_eq) over the space.
///
/// Monte Carlo draws are stratified by branch with a deterministic
/// largest-remainder allocation; the standard error combines per-branch
/// sample variances in quadrature. Quadrature is a per-branch midpoint rule
/// (std_error reported as 0; exactness for piecewise-constant integrands is
/// the caller's responsibility and holds when breakpoints align with cell
/// edges). Exact enumeration requires d = 0 and reports std_error 0.
Estimate integrate(const Integrand& f, const LambdaSpace& space,
                   const WeightFn& weight = {},
                   const IntegrationBudget& budget = {});

/// Same contract as integrate(), for several integrands sharing one stream.
std::vector<Estimate> integrate_vector(const VectorIntegrand& f,
                                       std::size_t n_outputs,
                                       const LambdaSpace& space,
                                       const WeightFn& weight = {},
                                       const IntegrationBudget& budget = {});

}  // namespace sigloc

#pragma once

#include <cstdint>
#include <string>

namespace sigloc {

enum class Method : std::uint8_t { exact_enumeration, quadrature, monte_carlo };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::exact_enumeration: return "exact_enumeration";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "monte_carlo";
}

/// One numeric analysis output: the value, a standard-error bound, and how it
/// was obtained. Exact enumeration and quadrature report std_error 0.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::monte_carlo;
  std::uint64_t samples = 0;
};

}  // namespace sigloc

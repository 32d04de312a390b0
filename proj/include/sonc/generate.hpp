#pragma once

#include <cstdint>
#include <string>

#include "sonc/poly.hpp"

namespace sonc {

enum class InstanceClass { standard_simplex, general_simplex, arbitrary_polytope };

std::string to_string(InstanceClass c);
InstanceClass parse_instance_class(const std::string& s);

/// Random benchmark instance. Coefficients are uniform integers: square terms in
/// [1, max_square_coef], other terms in [-max_inner_coef, max_inner_coef] without zero.
struct InstanceSpec {
  int n = 2;
  int d = 6;
  int t = 5;
  InstanceClass cls = InstanceClass::standard_simplex;
  int l = 0;  // minimum number of interior terms, arbitrary class only
  std::uint64_t seed = 1;
  int max_square_coef = 10;
  int max_inner_coef = 10;
  /// Scale the inner terms below the capacity of the covering circuits and add a
  /// positive constant, so that f lies strictly inside the SONC cone.
  bool interior = false;
  int max_tries = 200;
};

/// Throws Error if the spec is infeasible or no instance is found within max_tries.
SparsePoly generate_instance(const InstanceSpec& spec);

}  // namespace sonc

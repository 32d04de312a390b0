#pragma once

#include <vector>

#include "sonc/poly.hpp"

namespace sonc {

struct SimplexCoverResult {
  std::vector<Circuit> circuits;
};

/// Weights (aligned with lambda_set) maximizing the weight of alpha0 among convex
/// combinations of lambda_set equal to beta. Throws if beta is outside conv(lambda_set).
std::vector<Rational> sim_sel(const Exponent& beta, const std::vector<Exponent>& lambda_set, const Exponent& alpha0);

/// Greedy sweep covering gamma_set by circuits with trellises from lambda_set.
/// Both sets are processed in lexicographic order.
SimplexCoverResult simplex_cover(std::vector<Exponent> lambda_set, std::vector<Exponent> gamma_set);

}  // namespace sonc

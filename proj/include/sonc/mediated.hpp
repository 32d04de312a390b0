#pragma once

#include <vector>

#include "sonc/rational.hpp"

namespace sonc {

/// u = (v + w) / 2 on the integer line.
struct IntTriple {
  Integer u, v, w;
  bool operator==(const IntTriple&) const = default;
};

struct MediatedTriple {
  RationalPoint u, v, w;
  bool operator==(const MediatedTriple&) const = default;
};

struct MediatedSet {
  std::vector<RationalPoint> anchors;
  std::vector<MediatedTriple> triples;

  /// anchors followed by the u-points, without duplicates
  std::vector<RationalPoint> points() const;
};

/// Triples whose u-points together with {0, p} form a (0,p)-mediated sequence containing q.
std::vector<IntTriple> med_seq(const Integer& p, const Integer& q);
std::vector<IntTriple> med_seq(long p, long q);

/// Minimal size of a (0,p)-mediated sequence containing q, endpoints included. p <= 64.
int brute_min_med_seq(int p, int q);

/// True iff {0,p} plus the given interior points is a (0,p)-mediated sequence.
bool is_mediated_sequence(long p, const std::vector<long>& interior);

/// Set-scan check of the closure property and of u = (v + w) / 2, v != w.
bool is_valid_mediated_set(const MediatedSet& m);

MediatedSet l_med_set(const RationalPoint& a1, const RationalPoint& a2, const RationalPoint& b);

/// Exact barycentric coordinates of b with respect to affinely independent points.
std::vector<Rational> barycentric(const std::vector<RationalPoint>& trellis, const RationalPoint& b);

MediatedSet med_set(const std::vector<RationalPoint>& trellis, const RationalPoint& b);

/// Every point except b has odd denominators and even numerators.
MediatedSet med_set_odd(const std::vector<RationalPoint>& trellis, const RationalPoint& b);

}  // namespace sonc

#include "sonc/mediated.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace sonc {

namespace {

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

std::vector<IntTriple> shifted(std::vector<IntTriple> a, const Integer& s) {
  for (auto& t : a) {
    t.u += s;
    t.v += s;
    t.w += s;
  }
  return a;
}

void append(std::vector<IntTriple>& dst, const std::vector<IntTriple>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

std::vector<IntTriple> med_seq_rec(const Integer& p, const Integer& q) {
  Integer w = gcd(p, q);
  Integer u = p / w, v = q / w;
  std::vector<IntTriple> a;
  if (u % 2 == 0) {
    Integer h = u / 2;
    if (v == h) {
      a.push_back({1, 0, 2});
    } else if (v < h) {
      a = med_seq_rec(h, v);
      a.push_back({h, 0, u});
    } else {
      a.push_back({h, 0, u});
      append(a, shifted(med_seq_rec(h, v - h), h));
    }
  } else if (v % 2 == 0) {
    Integer r = v;
    int k = 0;
    while (r % 2 == 0) {
      r /= 2;
      ++k;
    }
    // chain (1 - 2^-i) v, each the average of its predecessor and v
    Integer prev = 0;
    for (int i = 1; i <= k; ++i) {
      Integer cur = v - (v >> i);
      a.push_back({cur, prev, v});
      prev = cur;
    }
    if (v == u - r) {
      a.push_back({v, v - r, u});
    } else {
      Integer mid = (v - r + u) / 2;
      a.push_back({mid, v - r, u});
      if (v < u - r)
        append(a, shifted(med_seq_rec((u + r - v) / 2, r), v - r));
      else
        append(a, shifted(med_seq_rec((u + r - v) / 2, (v + r - u) / 2), mid));
    }
  } else {
    for (auto t : med_seq_rec(u, u - v)) a.push_back({u - t.u, u - t.v, u - t.w});
  }

  std::vector<IntTriple> out;
  std::set<Integer> seen;
  for (auto& t : a) {
    IntTriple s{t.u * w, t.v * w, t.w * w};
    if (seen.insert(s.u).second) out.push_back(s);
  }
  return out;
}

using Mask = unsigned __int128;

bool bit(Mask m, int i) { return (m >> i) & 1; }

bool search(int p, Mask m, int budget) {
  // most constrained unsatisfied point first
  int best = -1;
  int best_options = 1 << 30;
  for (int x = 1; x < p; ++x) {
    if (!bit(m, x)) continue;
    int lim = std::min(x, p - x);
    bool ok = false;
    int options = 0;
    for (int d = 1; d <= lim; ++d) {
      int missing = !bit(m, x - d) + !bit(m, x + d);
      if (missing == 0) {
        ok = true;
        break;
      }
      if (missing <= budget) ++options;
    }
    if (ok) continue;
    if (options == 0) return false;
    if (options < best_options) {
      best_options = options;
      best = x;
    }
  }
  if (best < 0) return true;
  int lim = std::min(best, p - best);
  for (int d = 1; d <= lim; ++d) {
    int missing = !bit(m, best - d) + !bit(m, best + d);
    if (missing > budget) continue;
    Mask next = m | (Mask(1) << (best - d)) | (Mask(1) << (best + d));
    if (search(p, next, budget - missing)) return true;
  }
  return false;
}

}  // namespace

std::vector<RationalPoint> MediatedSet::points() const {
  std::vector<RationalPoint> pts;
  std::set<RationalPoint> seen;
  for (const auto& a : anchors)
    if (seen.insert(a).second) pts.push_back(a);
  for (const auto& t : triples)
    if (seen.insert(t.u).second) pts.push_back(t.u);
  return pts;
}

std::vector<IntTriple> med_seq(const Integer& p, const Integer& q) {
  if (q <= 0 || q >= p) throw Error("med_seq needs 0 < q < p");
  return med_seq_rec(p, q);
}

std::vector<IntTriple> med_seq(long p, long q) { return med_seq(Integer(p), Integer(q)); }

int brute_min_med_seq(int p, int q) {
  if (p > 64) throw Error("brute_min_med_seq: p above the search budget of 64");
  if (q <= 0 || q >= p) throw Error("brute_min_med_seq needs 0 < q < p");
  Mask start = Mask(1) | (Mask(1) << p) | (Mask(1) << q);
  for (int extra = 0;; ++extra)
    if (search(p, start, extra)) return 3 + extra;
}

bool is_mediated_sequence(long p, const std::vector<long>& interior) {
  std::set<long> m(interior.begin(), interior.end());
  m.insert(0);
  m.insert(p);
  for (long x : interior) {
    if (x <= 0 || x >= p) return false;
    bool ok = false;
    for (long d = 1; d <= std::min(x, p - x) && !ok; ++d) ok = m.count(x - d) && m.count(x + d);
    if (!ok) return false;
  }
  return true;
}

bool is_valid_mediated_set(const MediatedSet& m) {
  std::set<RationalPoint> pts(m.anchors.begin(), m.anchors.end());
  std::set<RationalPoint> anchors = pts;
  for (const auto& t : m.triples) {
    if (anchors.count(t.u)) return false;
    pts.insert(t.u);
  }
  for (const auto& t : m.triples) {
    if (t.v == t.w || midpoint(t.v, t.w) != t.u) return false;
    if (!pts.count(t.v) || !pts.count(t.w)) return false;
  }
  return true;
}

MediatedSet l_med_set(const RationalPoint& a1, const RationalPoint& a2, const RationalPoint& b) {
  if (a1.size() != a2.size() || a1.size() != b.size()) throw Error("l_med_set: dimension mismatch");
  std::size_t i = 0;
  while (i < a1.size() && a1[i] == a2[i]) ++i;
  if (i == a1.size()) throw Error("l_med_set: endpoints coincide");
  Rational t = (b[i] - a1[i]) / (a2[i] - a1[i]);
  if (lerp(a1, a2, t) != b) throw Error("l_med_set: " + to_string(b) + " is not on the segment");
  if (t <= 0 || t >= 1) throw Error("l_med_set: " + to_string(b) + " is not strictly inside the segment");
  const Integer p = t.get_den();
  MediatedSet m;
  m.anchors = {a1, a2};
  auto at = [&](const Integer& s) { return lerp(a1, a2, make_rational(s, p)); };
  for (const auto& tr : med_seq(p, t.get_num())) m.triples.push_back({at(tr.u), at(tr.v), at(tr.w)});
  return m;
}

std::vector<Rational> barycentric(const std::vector<RationalPoint>& trellis, const RationalPoint& b) {
  const std::size_t m = trellis.size();
  const std::size_t n = b.size();
  if (m == 0) throw Error("barycentric: empty trellis");
  // rows: n coordinates plus the affine row; columns: m weights plus rhs
  std::vector<std::vector<Rational>> a(n + 1, std::vector<Rational>(m + 1));
  for (std::size_t j = 0; j < m; ++j) {
    if (trellis[j].size() != n) throw Error("barycentric: dimension mismatch");
    for (std::size_t r = 0; r < n; ++r) a[r][j] = trellis[j][r];
    a[n][j] = 1;
  }
  for (std::size_t r = 0; r < n; ++r) a[r][m] = b[r];
  a[n][m] = 1;

  std::size_t row = 0;
  std::vector<std::size_t> pivot_row(m);
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = row;
    while (piv <= n && a[piv][col] == 0) ++piv;
    if (piv > n) throw Error("barycentric: trellis is affinely dependent");
    std::swap(a[piv], a[row]);
    for (std::size_t r = 0; r <= n; ++r) {
      if (r == row || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[row][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[row][c];
    }
    pivot_row[col] = row++;
  }
  for (std::size_t r = row; r <= n; ++r)
    if (a[r][m] != 0) throw Error("barycentric: point is not in the affine hull");
  std::vector<Rational> lam(m);
  for (std::size_t j = 0; j < m; ++j) lam[j] = a[pivot_row[j]][m] / a[pivot_row[j]][j];
  return lam;
}

namespace {

void merge(MediatedSet& dst, const MediatedSet& src, std::set<RationalPoint>& seen_u) {
  for (const auto& t : src.triples)
    if (seen_u.insert(t.u).second) dst.triples.push_back(t);
}

struct Weights {
  std::vector<Integer> q;
  Integer p;
};

Weights common_weights(const std::vector<Rational>& lam) {
  Weights w;
  w.p = 1;
  for (const auto& l : lam) mpz_lcm(w.p.get_mpz_t(), w.p.get_mpz_t(), l.get_den_mpz_t());
  for (const auto& l : lam) w.q.push_back(Rational(l * w.p).get_num());
  return w;
}

std::vector<Rational> interior_weights(const std::vector<RationalPoint>& trellis, const RationalPoint& b) {
  if (trellis.size() < 2) throw Error("med_set: trellis needs at least two points");
  auto lam = barycentric(trellis, b);
  for (const auto& l : lam)
    if (l <= 0) throw Error("med_set: " + to_string(b) + " is not in the relative interior of the trellis");
  return lam;
}

bool even_numerators(const RationalPoint& x) {
  return std::all_of(x.begin(), x.end(), [](const Rational& c) { return mpz_even_p(c.get_num_mpz_t()); });
}

RationalPoint combine(const std::vector<RationalPoint>& pts, const std::vector<Integer>& q, const Integer& p) {
  RationalPoint r(pts[0].size());
  for (std::size_t j = 0; j < pts.size(); ++j)
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += make_rational(q[j], p) * pts[j][i];
  return r;
}

// Segment step of the odd construction: x, y have even numerators and odd denominators.
MediatedSet odd_segment(const RationalPoint& x, const RationalPoint& y, const RationalPoint& b) {
  if (even_numerators(b)) return l_med_set(x, y, b);
  std::size_t i = 0;
  while (x[i] == y[i]) ++i;
  Rational t = (b[i] - x[i]) / (y[i] - x[i]);
  const RationalPoint& near = t <= Rational(1, 2) ? x : y;
  const RationalPoint& far = t <= Rational(1, 2) ? y : x;
  RationalPoint reflected(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) reflected[k] = 2 * b[k] - near[k];
  MediatedSet m;
  m.anchors = {x, y};
  m.triples.push_back({b, near, reflected});
  if (reflected != far) {
    auto rest = l_med_set(near, far, reflected);
    m.triples.insert(m.triples.end(), rest.triples.begin(), rest.triples.end());
  }
  return m;
}

void odd_split(std::vector<RationalPoint> pts, std::vector<Integer> q, const RationalPoint& b, MediatedSet& out,
               std::set<RationalPoint>& seen_u) {
  Integer g = 0;
  for (const auto& v : q) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  for (auto& v : q) v /= g;
  const std::size_t m = pts.size();
  if (m == 2) {
    merge(out, odd_segment(pts[0], pts[1], b), seen_u);
    return;
  }
  Integer p = std::accumulate(q.begin(), q.end(), Integer(0));
  std::ptrdiff_t pick = -1;
  for (std::size_t i = 0; i < m && pick < 0; ++i) {
    bool odd = mpz_odd_p(q[i].get_mpz_t());
    if ((p % 2 == 0 && odd) || (p % 2 != 0 && !odd)) pick = static_cast<std::ptrdiff_t>(i);
  }
  if (pick >= 0) {
    RationalPoint alpha = pts[pick];
    pts.erase(pts.begin() + pick);
    q.erase(q.begin() + pick);
    RationalPoint b1 = combine(pts, q, std::accumulate(q.begin(), q.end(), Integer(0)));
    merge(out, odd_segment(alpha, b1, b), seen_u);
    odd_split(std::move(pts), std::move(q), b1, out, seen_u);
    return;
  }
  // p odd and every weight odd: merge the last two weights in two ways
  const std::size_t i1 = m - 2, i2 = m - 1;
  Integer s = q[i1] + q[i2];
  std::vector<RationalPoint> p1 = pts, p2 = pts;
  std::vector<Integer> q1 = q, q2 = q;
  p1.erase(p1.begin() + i2);
  q1.erase(q1.begin() + i2);
  q1[i1] = s;
  p2.erase(p2.begin() + i1);
  q2.erase(q2.begin() + i1);
  q2[i1] = s;
  RationalPoint b1 = combine(p1, q1, p);
  RationalPoint b2 = combine(p2, q2, p);
  merge(out, odd_segment(b1, b2, b), seen_u);
  odd_split(std::move(p1), std::move(q1), b1, out, seen_u);
  odd_split(std::move(p2), std::move(q2), b2, out, seen_u);
}

}  // namespace

MediatedSet med_set(const std::vector<RationalPoint>& trellis, const RationalPoint& b) {
  auto w = common_weights(interior_weights(trellis, b));
  const std::size_t m = trellis.size();
  MediatedSet out;
  out.anchors = trellis;
  std::set<RationalPoint> seen_u;
  RationalPoint prev = b;
  Integer rest = w.p;
  for (std::size_t k = 0; k + 2 < m; ++k) {
    rest -= w.q[k];
    std::vector<RationalPoint> tail(trellis.begin() + k + 1, trellis.end());
    std::vector<Integer> qt(w.q.begin() + k + 1, w.q.end());
    RationalPoint next = combine(tail, qt, rest);
    merge(out, l_med_set(trellis[k], next, prev), seen_u);
    prev = std::move(next);
  }
  merge(out, l_med_set(trellis[m - 2], trellis[m - 1], prev), seen_u);
  return out;
}

MediatedSet med_set_odd(const std::vector<RationalPoint>& trellis, const RationalPoint& b) {
  for (const auto& t : trellis)
    for (const auto& c : t)
      if (!is_integer(c) || mpz_odd_p(c.get_num_mpz_t()))
        throw Error("med_set_odd: trellis point " + to_string(t) + " is not an even lattice point");
  for (const auto& c : b)
    if (!is_integer(c)) throw Error("med_set_odd: " + to_string(b) + " is not a lattice point");
  auto w = common_weights(interior_weights(trellis, b));
  MediatedSet out;
  out.anchors = trellis;
  std::set<RationalPoint> seen_u;
  odd_split(trellis, w.q, b, out, seen_u);
  return out;
}

}  // namespace sonc

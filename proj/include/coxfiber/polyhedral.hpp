#pragma once

// Exact rational polyhedral computations at desk scale: Fourier-Motzkin
// elimination for feasibility, bounds and H-representations, plus cone
// primitives (membership, strong convexity, extreme rays, face tests).

#include <coxfiber/intlin.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace coxfiber {

using Rat = mpq_class;
using QVec = std::vector<Rat>;

// a·x + b >= 0
struct LinIneq {
  QVec a;
  Rat b;
};

namespace fm {

// Scale to coprime integers with deterministic sign (first nonzero of
// (a, b) positive is NOT wanted -- the inequality direction matters, so
// only the magnitude is normalized).
inline LinIneq normalized(const LinIneq& q) {
  Int lcm = 1;
  for (const Rat& r : q.a)
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.get_den().get_mpz_t());
  mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.b.get_den().get_mpz_t());
  Int gcd = 0;
  auto acc = [&gcd](const Rat& r, const Int& l) {
    Int v = r.get_num() * (l / Int(r.get_den()));
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), v.get_mpz_t());
    return v;
  };
  LinIneq out;
  out.a.reserve(q.a.size());
  std::vector<Int> ints;
  for (const Rat& r : q.a) ints.push_back(acc(r, lcm));
  Int bi = acc(q.b, lcm);
  if (gcd == 0) gcd = 1;
  for (const Int& v : ints) out.a.emplace_back(v / gcd);
  out.b = Rat(bi / gcd);
  return out;
}

inline bool is_tautology(const LinIneq& q) {
  for (const Rat& r : q.a)
    if (r != 0) return false;
  return q.b >= 0;
}

inline bool is_contradiction(const LinIneq& q) {
  for (const Rat& r : q.a)
    if (r != 0) return false;
  return q.b < 0;
}

inline std::vector<LinIneq> dedupe(const std::vector<LinIneq>& in) {
  std::set<std::pair<std::vector<Int>, Int>> seen;
  std::vector<LinIneq> out;
  for (const LinIneq& q : in) {
    if (is_tautology(q)) continue;
    LinIneq n = normalized(q);
    std::vector<Int> key;
    for (const Rat& r : n.a) key.push_back(Int(r.get_num()));
    if (seen.insert({key, Int(n.b.get_num())}).second) out.push_back(n);
  }
  return out;
}

// Eliminate variable `var` from the system (existential projection).
inline std::vector<LinIneq> eliminate(const std::vector<LinIneq>& in,
                                      std::size_t var) {
  std::vector<LinIneq> none, pos, neg;
  for (const LinIneq& q : in) {
    if (q.a[var] == 0)
      none.push_back(q);
    else if (q.a[var] > 0)
      pos.push_back(q);
    else
      neg.push_back(q);
  }
  for (const LinIneq& p : pos)
    for (const LinIneq& m : neg) {
      LinIneq c;
      c.a.resize(p.a.size());
      Rat cp = -m.a[var], cm = p.a[var];
      for (std::size_t i = 0; i < p.a.size(); ++i)
        c.a[i] = cp * p.a[i] + cm * m.a[i];
      c.b = cp * p.b + cm * m.b;
      none.push_back(std::move(c));
    }
  for (LinIneq& q : none) q.a[var] = 0;
  return dedupe(none);
}

inline bool feasible(std::vector<LinIneq> sys, std::size_t nvars) {
  sys = dedupe(sys);
  for (std::size_t v = 0; v < nvars; ++v) {
    for (const LinIneq& q : sys)
      if (is_contradiction(q)) return false;
    sys = eliminate(sys, v);
  }
  for (const LinIneq& q : sys)
    if (is_contradiction(q)) return false;
  return true;
}

// A rational solution, if one exists, by elimination and back-substitution.
inline std::optional<QVec> solve(std::vector<LinIneq> sys, std::size_t nvars) {
  std::vector<std::vector<LinIneq>> stages;
  stages.push_back(dedupe(sys));
  for (std::size_t v = 0; v + 1 < nvars + 1 && v < nvars; ++v)
    stages.push_back(eliminate(stages.back(), v));
  for (const LinIneq& q : stages.back())
    if (is_contradiction(q)) return std::nullopt;
  QVec x(nvars, Rat(0));
  // stages[v] still contains variable v; later variables already fixed
  for (std::size_t vi = nvars; vi-- > 0;) {
    std::optional<Rat> lo, hi;
    for (const LinIneq& q : stages[vi]) {
      if (q.a[vi] == 0) continue;
      Rat rest = q.b;
      for (std::size_t j = vi + 1; j < nvars; ++j) rest += q.a[j] * x[j];
      Rat bound = -rest / q.a[vi];
      if (q.a[vi] > 0) {
        if (!lo || bound > *lo) lo = bound;
      } else {
        if (!hi || bound < *hi) hi = bound;
      }
    }
    if (lo && hi && *lo > *hi) return std::nullopt;  // numeric safety net
    if (lo && hi)
      x[vi] = (*lo + *hi) / 2;
    else if (lo)
      x[vi] = *lo;
    else if (hi)
      x[vi] = *hi;
  }
  return x;
}

// Largest value of variable `var` over the feasible set; nullopt when
// unbounded (assumes the system is feasible).
inline std::optional<Rat> upper_bound(std::vector<LinIneq> sys,
                                      std::size_t nvars, std::size_t var) {
  sys = dedupe(sys);
  for (std::size_t v = 0; v < nvars; ++v)
    if (v != var) sys = eliminate(sys, v);
  std::optional<Rat> hi;
  for (const LinIneq& q : sys) {
    if (q.a[var] >= 0) continue;
    Rat bound = -q.b / q.a[var];
    if (!hi || bound < *hi) hi = bound;
  }
  return hi;
}

}  // namespace fm

// --- cone primitives -------------------------------------------------

// v is a nonnegative rational combination of the generators.
inline bool cone_contains_point(const std::vector<Vec>& gens, const Vec& v) {
  const std::size_t n = v.size();
  const std::size_t g = gens.size();
  for (const Vec& u : gens)
    if (u.size() != n) throw DimensionMismatch("cone generator length");
  if (g == 0) return is_zero(v);
  std::vector<LinIneq> sys;
  for (std::size_t i = 0; i < g; ++i) {
    LinIneq q{QVec(g, Rat(0)), Rat(0)};
    q.a[i] = 1;
    sys.push_back(q);
  }
  for (std::size_t r = 0; r < n; ++r) {
    LinIneq eq{QVec(g, Rat(0)), Rat(-v[r])};
    for (std::size_t i = 0; i < g; ++i) eq.a[i] = Rat(gens[i][r]);
    LinIneq neg = eq;
    for (Rat& c : neg.a) c = -c;
    neg.b = -neg.b;
    sys.push_back(eq);
    sys.push_back(neg);
  }
  return fm::feasible(std::move(sys), g);
}

// No nonzero nonnegative combination of the generators vanishes; with all
// generators nonzero this is equivalent to containing no line.
inline bool cone_strongly_convex(const std::vector<Vec>& gens) {
  if (gens.empty()) return true;
  const std::size_t n = gens.front().size();
  const std::size_t g = gens.size();
  for (const Vec& u : gens)
    if (is_zero(u)) return false;
  std::vector<LinIneq> sys;
  for (std::size_t i = 0; i < g; ++i) {
    LinIneq q{QVec(g, Rat(0)), Rat(0)};
    q.a[i] = 1;
    sys.push_back(q);
  }
  {
    LinIneq sum{QVec(g, Rat(1)), Rat(-1)};
    LinIneq neg{QVec(g, Rat(-1)), Rat(1)};
    sys.push_back(sum);
    sys.push_back(neg);
  }
  for (std::size_t r = 0; r < n; ++r) {
    LinIneq eq{QVec(g, Rat(0)), Rat(0)};
    for (std::size_t i = 0; i < g; ++i) eq.a[i] = Rat(gens[i][r]);
    LinIneq neg = eq;
    for (Rat& c : neg.a) c = -c;
    sys.push_back(eq);
    sys.push_back(neg);
  }
  return !fm::feasible(std::move(sys), g);
}

// Integer inequality normals h with cone(gens) = {x : h·x >= 0 for all h},
// obtained by projecting {(x, λ) : x = Gλ, λ >= 0} onto x. Equalities
// (for non-full-dimensional cones) appear as opposite pairs.
inline std::vector<Vec> cone_hrep(const std::vector<Vec>& gens,
                                  std::size_t rank) {
  const std::size_t g = gens.size();
  const std::size_t nv = rank + g;
  std::vector<LinIneq> sys;
  for (std::size_t i = 0; i < g; ++i) {
    LinIneq q{QVec(nv, Rat(0)), Rat(0)};
    q.a[rank + i] = 1;
    sys.push_back(q);
  }
  for (std::size_t r = 0; r < rank; ++r) {
    LinIneq eq{QVec(nv, Rat(0)), Rat(0)};
    eq.a[r] = 1;
    for (std::size_t i = 0; i < g; ++i) eq.a[rank + i] = Rat(-gens[i][r]);
    LinIneq neg = eq;
    for (Rat& c : neg.a) c = -c;
    sys.push_back(eq);
    sys.push_back(neg);
  }
  for (std::size_t i = 0; i < g; ++i)
    sys = fm::eliminate(sys, rank + i);
  sys = fm::dedupe(sys);
  std::vector<Vec> normals;
  for (const LinIneq& q : sys) {
    Vec h(rank);
    bool zero = true;
    for (std::size_t r = 0; r < rank; ++r) {
      h[r] = Int(q.a[r].get_num());  // normalized() made these integers
      if (h[r] != 0) zero = false;
    }
    if (!zero) normals.push_back(primitive_part(h));
  }
  std::sort(normals.begin(), normals.end());
  normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
  return normals;
}

inline Int dot(const Vec& a, const Vec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Extreme rays of {x : h·x >= 0 for all h}, assuming the cone is pointed.
// Candidates are one-dimensional kernels of (rank-1)-subsets of normals.
inline std::vector<Vec> extreme_rays(const std::vector<Vec>& normals,
                                     std::size_t rank) {
  std::vector<Vec> rays;
  if (rank == 0) return rays;
  auto satisfies = [&](const Vec& r) {
    for (const Vec& h : normals)
      if (dot(h, r) < 0) return false;
    return true;
  };
  const std::size_t m = normals.size();
  auto process = [&](const std::vector<std::size_t>& subset) {
    IntMatrix a(subset.size(), rank);
    for (std::size_t i = 0; i < subset.size(); ++i)
      for (std::size_t j = 0; j < rank; ++j) a(i, j) = normals[subset[i]][j];
    IntMatrix k = kernel_basis(a);
    if (k.cols() != 1) return;
    Vec r = primitive_part(k.column(0));
    if (satisfies(r))
      rays.push_back(r);
    else {
      Vec nr = -r;
      if (satisfies(nr)) rays.push_back(nr);
    }
  };
  const std::size_t k = rank - 1;
  if (k == 0) {
    process({});
  } else if (m >= k) {
    std::vector<bool> mask(m, false);
    std::fill(mask.begin(), mask.begin() + k, true);
    do {
      std::vector<std::size_t> subset;
      for (std::size_t i = 0; i < m; ++i)
        if (mask[i]) subset.push_back(i);
      process(subset);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return rays;
}

// Smallest face of cone(gens) containing the given subset, reported as the
// set of generator indices on it; hrep must describe cone(gens).
inline std::vector<std::size_t> smallest_face_containing(
    const std::vector<Vec>& gens, const std::vector<Vec>& hrep,
    const std::vector<Vec>& points) {
  Vec u;
  bool first = true;
  for (const Vec& h : hrep) {
    bool tight = true;
    for (const Vec& p : points)
      if (dot(h, p) != 0) {
        tight = false;
        break;
      }
    if (!tight) continue;
    if (first) {
      u = h;
      first = false;
    } else {
      u = u + h;
    }
  }
  std::vector<std::size_t> face;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (first) {
      // no valid inequality is tight on the points: smallest face is the
      // cone itself
      face.push_back(i);
    } else if (dot(u, gens[i]) == 0) {
      face.push_back(i);
    }
  }
  return face;
}

}  // namespace coxfiber

#pragma once

// Rational polyhedral fans, toric morphisms, and the fiber fan
// S0 = { s in Sigma_X : s contained in ker(alpha)_Q }.

#include <coxfiber/intlin.hpp>
#include <coxfiber/polyhedral.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxfiber {

struct Cone {
  std::vector<std::size_t> rays;  // indices into the parent fan's ray list
};

struct Fan {
  std::size_t rank = 0;
  std::vector<Vec> rays;
  std::vector<std::vector<std::size_t>> max_cones;
  std::string name;
};

inline std::vector<Vec> cone_generators(const Fan& f,
                                        const std::vector<std::size_t>& cone) {
  std::vector<Vec> gens;
  gens.reserve(cone.size());
  for (std::size_t i : cone) {
    if (i >= f.rays.size()) throw std::out_of_range("ray index out of range");
    gens.push_back(f.rays[i]);
  }
  return gens;
}

// --- validation -------------------------------------------------------

enum class FanErrorKind {
  NonPrimitiveRay,
  DuplicateRay,
  NotStronglyConvex,
  BadIntersection,
  BadIndex,
  BadRank,
};

struct FanValidationError {
  FanErrorKind kind;
  std::string message;
  // offending objects; meaning depends on kind
  std::size_t index_a = 0;
  std::size_t index_b = 0;
};

inline const char* to_string(FanErrorKind k) {
  switch (k) {
    case FanErrorKind::NonPrimitiveRay: return "NonPrimitiveRay";
    case FanErrorKind::DuplicateRay: return "DuplicateRay";
    case FanErrorKind::NotStronglyConvex: return "NotStronglyConvex";
    case FanErrorKind::BadIntersection: return "BadIntersection";
    case FanErrorKind::BadIndex: return "BadIndex";
    case FanErrorKind::BadRank: return "BadRank";
  }
  return "?";
}

namespace detail {

// sorted global indices identifying a face of cone(gens)
inline bool same_index_set(std::vector<std::size_t> a,
                           std::vector<std::size_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace detail

// nullopt means the fan satisfies all invariants.
inline std::optional<FanValidationError> validate_fan(const Fan& f) {
  using E = FanValidationError;
  for (std::size_t i = 0; i < f.rays.size(); ++i) {
    if (f.rays[i].size() != f.rank)
      return E{FanErrorKind::BadRank, "ray length differs from fan rank", i};
    if (is_zero(f.rays[i]) || content(f.rays[i]) != 1)
      return E{FanErrorKind::NonPrimitiveRay, "ray is not primitive", i};
    for (std::size_t j = 0; j < i; ++j)
      if (f.rays[i] == f.rays[j])
        return E{FanErrorKind::DuplicateRay, "two rays are equal", j, i};
  }
  for (std::size_t c = 0; c < f.max_cones.size(); ++c)
    for (std::size_t i : f.max_cones[c])
      if (i >= f.rays.size())
        return E{FanErrorKind::BadIndex, "cone refers to missing ray", c, i};
  std::vector<std::vector<Vec>> gens;
  std::vector<std::vector<Vec>> hreps;
  for (std::size_t c = 0; c < f.max_cones.size(); ++c) {
    gens.push_back(cone_generators(f, f.max_cones[c]));
    if (!cone_strongly_convex(gens.back()))
      return E{FanErrorKind::NotStronglyConvex, "cone contains a line", c};
    hreps.push_back(cone_hrep(gens.back(), f.rank));
  }
  // pairwise: the intersection must be a face of both cones
  for (std::size_t a = 0; a < f.max_cones.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      std::vector<Vec> both = hreps[a];
      both.insert(both.end(), hreps[b].begin(), hreps[b].end());
      std::vector<Vec> inter = extreme_rays(both, f.rank);
      for (int side = 0; side < 2; ++side) {
        std::size_t c = side == 0 ? a : b;
        std::vector<std::size_t> face =
            smallest_face_containing(gens[c], hreps[c], inter);
        // the smallest face containing the intersection must equal it
        std::vector<Vec> face_gens;
        for (std::size_t i : face) face_gens.push_back(gens[c][i]);
        bool ok = true;
        for (const Vec& g : face_gens)
          if (!cone_contains_point(inter, g)) {
            ok = false;
            break;
          }
        if (!ok)
          return E{FanErrorKind::BadIntersection,
                   "cone intersection is not a face", b, a};
      }
    }
  return std::nullopt;
}

inline bool cone_contains(const Fan& f, const Cone& c, const Vec& v) {
  if (v.size() != f.rank)
    throw DimensionMismatch("cone_contains: vector length != fan rank");
  return cone_contains_point(cone_generators(f, c.rays), v);
}

// --- completeness -----------------------------------------------------

namespace detail {

inline std::size_t matrix_rank(const std::vector<Vec>& rows,
                               std::size_t ncols) {
  IntMatrix m(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rows[i][j];
  return smith_normal_form(m).rank;
}

}  // namespace detail

// Support equals N_Q: every maximal cone is full-dimensional, every ridge
// (facet of a maximal cone) lies on exactly two maximal cones, and the
// adjacency graph of maximal cones is connected.
inline bool is_complete(const Fan& f) {
  if (f.rank == 0) return true;
  if (f.max_cones.empty()) return false;
  std::map<std::vector<Vec>, std::vector<std::size_t>> ridge_owners;
  for (std::size_t c = 0; c < f.max_cones.size(); ++c) {
    std::vector<Vec> g = cone_generators(f, f.max_cones[c]);
    if (detail::matrix_rank(g, f.rank) != f.rank) return false;
    std::vector<Vec> hrep = cone_hrep(g, f.rank);
    std::set<std::vector<Vec>> local;
    for (const Vec& h : hrep) {
      std::vector<Vec> tight;
      for (const Vec& v : g)
        if (dot(h, v) == 0) tight.push_back(v);
      if (detail::matrix_rank(tight, f.rank) + 1 != f.rank) continue;
      std::vector<Vec> key = extreme_rays(cone_hrep(tight, f.rank), f.rank);
      local.insert(key);
    }
    for (const std::vector<Vec>& key : local) ridge_owners[key].push_back(c);
  }
  if (ridge_owners.empty()) return false;
  for (const auto& [key, owners] : ridge_owners)
    if (owners.size() != 2) return false;
  // connectivity
  std::vector<std::vector<std::size_t>> adj(f.max_cones.size());
  for (const auto& [key, owners] : ridge_owners) {
    adj[owners[0]].push_back(owners[1]);
    adj[owners[1]].push_back(owners[0]);
  }
  std::vector<bool> seen(f.max_cones.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t d : adj[c])
      if (!seen[d]) {
        seen[d] = true;
        stack.push_back(d);
      }
  }
  for (bool s : seen)
    if (!s) return false;
  return true;
}

// --- toric morphisms --------------------------------------------------

struct IncompatibleMorphism : std::runtime_error {
  std::size_t cone_index;
  std::size_t ray_index;  // global ray index of the offending generator
  IncompatibleMorphism(const std::string& what, std::size_t cone,
                       std::size_t ray)
      : std::runtime_error(what), cone_index(cone), ray_index(ray) {}
};

struct ToricMorphism {
  Fan source;
  Fan target;
  IntMatrix matrix;  // target.rank x source.rank, acts on column vectors
};

inline ToricMorphism make_morphism(Fan source, Fan target, IntMatrix matrix) {
  if (matrix.rows() != target.rank || matrix.cols() != source.rank)
    throw DimensionMismatch("morphism matrix shape");
  for (std::size_t c = 0; c < source.max_cones.size(); ++c) {
    std::vector<Vec> images;
    for (std::size_t i : source.max_cones[c])
      images.push_back(matrix * source.rays[i]);
    bool found = false;
    if (target.max_cones.empty()) {
      found = true;
      for (std::size_t k = 0; k < images.size(); ++k)
        if (!is_zero(images[k])) {
          std::ostringstream os;
          os << "image of generator " << source.max_cones[c][k] << " of cone "
             << c << " lies in no target cone";
          throw IncompatibleMorphism(os.str(), c, source.max_cones[c][k]);
        }
    }
    for (const auto& tc : target.max_cones) {
      std::vector<Vec> tg = cone_generators(target, tc);
      bool all = true;
      for (const Vec& im : images)
        if (!cone_contains_point(tg, im)) {
          all = false;
          break;
        }
      if (all) {
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream os;
      os << "cone " << c << " maps into no cone of the target fan";
      throw IncompatibleMorphism(os.str(), c,
                                 source.max_cones[c].empty()
                                     ? 0
                                     : source.max_cones[c].front());
    }
  }
  return ToricMorphism{std::move(source), std::move(target),
                       std::move(matrix)};
}

// alpha surjective on lattices: full row rank, all invariant factors 1
inline bool lattice_surjective(const ToricMorphism& m) {
  SmithDecomposition s = smith_normal_form(m.matrix);
  if (s.rank != m.matrix.rows()) return false;
  for (const Int& d : s.diagonal())
    if (d != 1) return false;
  return true;
}

// rays whose divisors do not dominate the base: alpha(u_rho) != 0
inline std::vector<std::size_t> vertical_rays(const ToricMorphism& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m.source.rays.size(); ++i)
    if (!is_zero(m.matrix * m.source.rays[i])) out.push_back(i);
  return out;
}

struct FiberFanResult {
  IntMatrix kernel;                // columns form an HNF basis of N0
  Fan fiber_fan;                   // in N0-coordinates
  std::vector<std::size_t> ray_correspondence;  // fiber ray -> Sigma_X ray
};

// S0 = cones of Sigma_X contained in ker(alpha)_Q. For each maximal cone s,
// s ∩ ker(alpha) is a face of s (0 is a face of the pointed image cone), and
// that face is generated by the generators of s that map to zero; the
// maximal cones of S0 are the maximal such sets.
inline FiberFanResult fiber_subfan(const ToricMorphism& m) {
  FiberFanResult out;
  out.kernel = kernel_basis(m.matrix);
  const std::size_t k = out.kernel.cols();
  std::vector<std::optional<std::size_t>> fiber_index(m.source.rays.size());
  Fan ff;
  ff.rank = k;
  ff.name = m.source.name.empty() ? "fiber" : m.source.name + "|fiber";
  for (std::size_t i = 0; i < m.source.rays.size(); ++i) {
    if (!is_zero(m.matrix * m.source.rays[i])) continue;
    std::optional<Vec> coords = solve_integer(out.kernel, m.source.rays[i]);
    if (!coords)
      throw std::logic_error("kernel ray has no kernel-basis coordinates");
    fiber_index[i] = ff.rays.size();
    ff.rays.push_back(*coords);
    out.ray_correspondence.push_back(i);
  }
  std::set<std::vector<std::size_t>> candidate;
  for (const auto& cone : m.source.max_cones) {
    std::vector<std::size_t> sub;
    for (std::size_t i : cone)
      if (fiber_index[i]) sub.push_back(*fiber_index[i]);
    std::sort(sub.begin(), sub.end());
    sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
    candidate.insert(sub);
  }
  for (const auto& c : candidate) {
    bool maximal = true;
    for (const auto& d : candidate) {
      if (c == d || d.size() <= c.size()) continue;
      if (std::includes(d.begin(), d.end(), c.begin(), c.end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) ff.max_cones.push_back(c);
  }
  out.fiber_fan = std::move(ff);
  return out;
}

}  // namespace coxfiber

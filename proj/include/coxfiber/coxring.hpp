#pragma once

// The theorem engine. Everything is exponent-lattice combinatorics: the
// monomial unit section u on Cl_pi, the quotient presentation of
// R_pi(X)/<1-u(w)>, the grading isomorphism Cl_eta -> Cl(X_0), and two
// independent graded-dimension enumerations whose agreement is the
// verified content of the main theorem.

#include <coxfiber/divclass.hpp>
#include <coxfiber/fan.hpp>
#include <coxfiber/intlin.hpp>
#include <coxfiber/polyhedral.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coxfiber {

struct CoxPresentation {
  Fan fan;
  std::vector<std::string> variables;  // one per ray
  IntMatrix degree;                    // into Cl(X) normal-form coordinates
};

inline CoxPresentation cox_presentation(const DivisorClassData& d) {
  CoxPresentation p{d.fan, {}, d.degree};
  for (std::size_t i = 0; i < d.fan.rays.size(); ++i)
    p.variables.push_back("x" + std::to_string(i));
  return p;
}

struct TorsionVertical : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoMonomialUnit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnitSection {
  std::vector<Vec> generators_of_cl_pi;  // classes in Cl(X) normal form
  std::vector<Vec> exponents;  // in Z^{Sigma(1)}, supported on vertical rays,
                               // degree(exponents[i]) = -generators[i]
};

// For each basis element w of the (torsion-free) group Cl_pi, the
// HNF-canonical vertical monomial exponent of degree -w.
inline UnitSection unit_section(const DivisorClassData& d,
                                const VerticalClassData& v) {
  if (!is_torsion_free(v.cl_pi))
    throw TorsionVertical("Cl_pi has torsion; theorem hypothesis violated");
  const std::size_t n = d.fan.rays.size();
  const auto& vert = v.vertical_ray_set;
  // vertical-supported combinations with trivial class, as a sublattice of
  // Z^{vertical}: exactly the relations of the subgroup presentation
  IntMatrix rel = column_hnf(v.cl_pi.relations());
  UnitSection out;
  for (std::size_t i = 0; i < v.cl_pi.free_rank(); ++i) {
    Vec y;
    try {
      y = v.cl_pi.lift(unit_vector(v.cl_pi.free_rank(), i));
    } catch (const std::logic_error&) {
      throw NoMonomialUnit("no vertical monomial of the requested degree");
    }
    Vec x = reduce_mod_lattice(-y, rel);
    Vec exp(n), wrep(n);
    for (std::size_t j = 0; j < vert.size(); ++j) {
      exp[vert[j]] = x[j];
      wrep[vert[j]] = y[j];
    }
    out.generators_of_cl_pi.push_back(d.class_group.normal_form(wrep));
    out.exponents.push_back(std::move(exp));
  }
  return out;
}

struct QuotientPresentation {
  std::vector<std::size_t> horizontal_rays;
  std::vector<std::size_t> vertical_rays;
  IntMatrix congruence_lattice;  // HNF basis of L_u = u(Cl_pi) in Z^{Sigma(1)}
  FGAbelianGroup cl_eta;         // ambient Z^{Sigma(1)}
  IntMatrix eta_grading;         // Z^{horizontal} -> Cl_eta normal form
};

inline QuotientPresentation quotient_presentation(const DivisorClassData& d,
                                                  const VerticalClassData& v,
                                                  const UnitSection& u) {
  const std::size_t n = d.fan.rays.size();
  QuotientPresentation q;
  q.vertical_rays = v.vertical_ray_set;
  std::vector<bool> is_vert(n, false);
  for (std::size_t rho : q.vertical_rays) is_vert[rho] = true;
  for (std::size_t rho = 0; rho < n; ++rho)
    if (!is_vert[rho]) q.horizontal_rays.push_back(rho);
  IntMatrix lu = IntMatrix::from_columns(u.exponents);
  if (u.exponents.empty()) lu = IntMatrix(n, 0);
  q.congruence_lattice = column_hnf(lu);
  q.cl_eta = v.cl_eta;
  q.eta_grading =
      IntMatrix(q.cl_eta.normal_form_rank(), q.horizontal_rays.size());
  for (std::size_t c = 0; c < q.horizontal_rays.size(); ++c) {
    Vec col = q.cl_eta.normal_form(unit_vector(n, q.horizontal_rays[c]));
    for (std::size_t r = 0; r < col.size(); ++r) q.eta_grading(r, c) = col[r];
  }
  return q;
}

// ambient exponent vector of a horizontal exponent pattern
inline Vec embed_horizontal(const QuotientPresentation& q, const Vec& a) {
  if (a.size() != q.horizontal_rays.size())
    throw DimensionMismatch("embed_horizontal: pattern length");
  Vec out(q.cl_eta.ambient_rank());
  for (std::size_t i = 0; i < a.size(); ++i) out[q.horizontal_rays[i]] = a[i];
  return out;
}

// HNF-canonical coset representative modulo L_u; only vertical
// coordinates are touched (L_u is supported on them)
inline Vec canonical_form(const QuotientPresentation& q, const Vec& e) {
  return reduce_mod_lattice(e, q.congruence_lattice);
}

// --- grading isomorphism -----------------------------------------------

enum class GradingIsoFailure { NotWellDefined, NotInjective, NotSurjective };

struct GradingIsoError : std::runtime_error {
  GradingIsoFailure kind;
  std::optional<Vec> witness;  // offending class, normal-form coordinates
  GradingIsoError(GradingIsoFailure k, const std::string& what,
                  std::optional<Vec> w = std::nullopt)
      : std::runtime_error(what), kind(k), witness(std::move(w)) {}
};

struct GradingIso {
  GroupHom map;      // Cl_eta -> Cl(X_0)
  GroupHom inverse;  // Cl(X_0) -> Cl_eta
};

// [D_rho]_eta -> [D_rho]_{X_0} on fiber rays, with the coordinate
// inclusion as candidate inverse; both directions are verified.
inline GradingIso grading_isomorphism(
    const VerticalClassData& v, const DivisorClassData& fiber_class,
    const std::vector<std::size_t>& ray_correspondence) {
  const std::size_t n = v.cl_eta.ambient_rank();
  const std::size_t n0 = fiber_class.fan.rays.size();
  IntMatrix restrict(n0, n), include(n, n0);
  for (std::size_t j = 0; j < n0; ++j) {
    restrict(j, ray_correspondence[j]) = 1;
    include(ray_correspondence[j], j) = 1;
  }
  std::optional<GroupHom> fwd, bwd;
  try {
    fwd.emplace(v.cl_eta, fiber_class.class_group, restrict);
  } catch (const IllDefinedHom& e) {
    throw GradingIsoError(GradingIsoFailure::NotWellDefined, e.what());
  }
  try {
    bwd.emplace(fiber_class.class_group, v.cl_eta, include);
  } catch (const IllDefinedHom& e) {
    throw GradingIsoError(GradingIsoFailure::NotWellDefined,
                          std::string("inverse: ") + e.what());
  }
  // two-sided inverse on ambient generators
  for (std::size_t i = 0; i < n; ++i) {
    Vec e = unit_vector(n, i);
    if (!v.cl_eta.same_class(bwd->apply_ambient(fwd->apply_ambient(e)), e))
      throw GradingIsoError(GradingIsoFailure::NotInjective,
                            "inverse does not recover a generator class",
                            v.cl_eta.normal_form(e));
  }
  for (std::size_t j = 0; j < n0; ++j) {
    Vec e = unit_vector(n0, j);
    if (!fiber_class.class_group.same_class(
            fwd->apply_ambient(bwd->apply_ambient(e)), e))
      throw GradingIsoError(GradingIsoFailure::NotSurjective,
                            "fiber ray class not hit",
                            fiber_class.class_group.normal_form(e));
  }
  if (!hom_is_isomorphism(*fwd))
    throw GradingIsoError(GradingIsoFailure::NotSurjective,
                          "group invariants differ");
  return GradingIso{std::move(*fwd), std::move(*bwd)};
}

// --- graded dimension oracles --------------------------------------------

struct InfiniteDimension : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// nonnegativity plus the free-coordinate equations of `group` applied to
// columns `cols` of its ambient, equal to the free part of deg
inline std::vector<LinIneq> degree_system(const FGAbelianGroup& group,
                                          const std::vector<std::size_t>& cols,
                                          const Vec& deg) {
  const std::size_t h = cols.size();
  std::vector<LinIneq> sys;
  for (std::size_t i = 0; i < h; ++i) {
    LinIneq pos{QVec(h, Rat(0)), Rat(0)};
    pos.a[i] = 1;
    sys.push_back(pos);
  }
  for (std::size_t r = 0; r < group.free_rank(); ++r) {
    LinIneq eq{QVec(h, Rat(0)), Rat(-deg[r])};
    for (std::size_t i = 0; i < h; ++i)
      eq.a[i] = Rat(group.projection()(r, cols[i]));
    LinIneq neg = eq;
    for (Rat& c : neg.a) c = -c;
    neg.b = -neg.b;
    sys.push_back(std::move(eq));
    sys.push_back(std::move(neg));
  }
  return sys;
}

inline Int rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

}  // namespace detail

// #{a in Z^{horizontal}_{>=0} : deg_eta(a) = deg}. Enumeration: a coordinate
// box from Fourier-Motzkin upper bounds, swept by an odometer, with the
// exact (torsion-aware) degree test on every point.
inline std::uint64_t hilbert_dimension_quotient(const QuotientPresentation& q,
                                                const Vec& deg) {
  if (deg.size() != q.cl_eta.normal_form_rank())
    throw DimensionMismatch("hilbert_dimension_quotient: degree length");
  const std::size_t h = q.horizontal_rays.size();
  if (h == 0) return is_zero(deg) ? 1 : 0;
  std::vector<LinIneq> sys = detail::degree_system(q.cl_eta, q.horizontal_rays, deg);
  if (!fm::feasible(sys, h)) return 0;
  std::vector<Int> hi(h);
  for (std::size_t i = 0; i < h; ++i) {
    std::optional<Rat> b = fm::upper_bound(sys, h, i);
    if (!b)
      throw InfiniteDimension(
          "degree piece is infinite dimensional (unbounded exponent "
          "polytope)");
    hi[i] = detail::rat_floor(*b);
    if (hi[i] < 0) return 0;
  }
  std::uint64_t count = 0;
  Vec a(h);
  while (true) {
    if (q.cl_eta.normal_form(embed_horizontal(q, a)) == deg) ++count;
    std::size_t i = 0;
    while (i < h && a[i] == hi[i]) a[i++] = 0;
    if (i == h) break;
    a[i] += 1;
  }
  return count;
}

// #{b in Z^{Sigma_0(1)}_{>=0} : fiber degree(b) = deg}. Independent
// enumeration: depth-first search with per-prefix residual bounds.
inline std::uint64_t hilbert_dimension_fiber(const DivisorClassData& fiber,
                                             const Vec& deg) {
  if (deg.size() != fiber.class_group.normal_form_rank())
    throw DimensionMismatch("hilbert_dimension_fiber: degree length");
  const std::size_t n0 = fiber.fan.rays.size();
  if (n0 == 0) return is_zero(deg) ? 1 : 0;
  std::vector<std::size_t> all(n0);
  for (std::size_t i = 0; i < n0; ++i) all[i] = i;
  std::uint64_t count = 0;
  Vec b(n0);
  // recurse over coordinates; at each depth, re-derive the exact bound of
  // the current coordinate from the residual rational system
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n0) {
      if (fiber.class_group.normal_form(b) == deg) ++count;
      return;
    }
    std::vector<LinIneq> sys =
        detail::degree_system(fiber.class_group, all, deg);
    // pin the already-chosen prefix
    for (std::size_t i = 0; i < depth; ++i) {
      LinIneq eq{QVec(n0, Rat(0)), Rat(-b[i])};
      eq.a[i] = 1;
      LinIneq neg = eq;
      for (Rat& c : neg.a) c = -c;
      neg.b = -neg.b;
      sys.push_back(std::move(eq));
      sys.push_back(std::move(neg));
    }
    if (!fm::feasible(sys, n0)) return;
    std::optional<Rat> hi = fm::upper_bound(sys, n0, depth);
    if (!hi)
      throw InfiniteDimension(
          "degree piece is infinite dimensional (unbounded exponent "
          "polytope)");
    Int top = detail::rat_floor(*hi);
    for (b[depth] = 0; b[depth] <= top; b[depth] += 1)
      self(self, depth + 1);
    b[depth] = 0;
  };
  rec(rec, 0);
  return count;
}

// --- the theorem report ---------------------------------------------------

struct HypothesisCheck {
  std::string name;
  bool pass = false;
  std::string note;
};

struct DimensionRow {
  Vec degree;  // Cl_eta normal-form coordinates
  std::uint64_t dim_quotient = 0;
  std::uint64_t dim_fiber = 0;
  bool pass = false;
};

struct TheoremReport {
  std::vector<HypothesisCheck> hypotheses;
  bool hypotheses_pass = false;
  std::optional<GradingIso> iso;
  std::string iso_failure;  // empty when iso present
  std::vector<DimensionRow> table;
  bool pass = false;
};

inline TheoremReport verify_theorem(const ToricMorphism& m, long box_radius) {
  TheoremReport rep;
  auto check = [&rep](const std::string& name, bool pass,
                      const std::string& note = "") {
    rep.hypotheses.push_back(HypothesisCheck{name, pass, note});
    return pass;
  };
  std::optional<DivisorClassData> d;
  try {
    d.emplace(class_group(m.source));
    check("no_torus_factor", true);
  } catch (const TorusFactor& e) {
    check("no_torus_factor", false, e.what());
  }
  bool ok = d.has_value();
  ok &= check("source_complete", is_complete(m.source));
  ok &= check("target_complete", is_complete(m.target));
  ok &= check("connected_fibers", lattice_surjective(m),
              "alpha surjective on lattices");
  std::optional<VerticalClassData> v;
  if (d) {
    v.emplace(vertical_class_group(*d, m));
    ok &= check("cl_pi_torsion_free", is_torsion_free(v->cl_pi));
  } else {
    check("cl_pi_torsion_free", false, "skipped: no class group");
    ok = false;
  }
  FiberFanResult ff = fiber_subfan(m);
  ok &= check("fiber_fan_complete", is_complete(ff.fiber_fan));
  rep.hypotheses_pass = ok;
  if (!ok) return rep;

  UnitSection u = unit_section(*d, *v);
  QuotientPresentation q = quotient_presentation(*d, *v, u);
  DivisorClassData fiber = class_group(ff.fiber_fan);
  try {
    rep.iso.emplace(grading_isomorphism(*v, fiber, ff.ray_correspondence));
  } catch (const GradingIsoError& e) {
    rep.iso_failure = e.what();
    rep.pass = false;
    return rep;
  }

  // sweep the degree box: free coordinates in [-r, r], torsion coordinates
  // through their full cycle
  const std::size_t nf = q.cl_eta.normal_form_rank();
  const std::size_t fr = q.cl_eta.free_rank();
  Vec lo(nf), hi(nf);
  for (std::size_t i = 0; i < fr; ++i) {
    lo[i] = -box_radius;
    hi[i] = box_radius;
  }
  for (std::size_t i = fr; i < nf; ++i) {
    lo[i] = 0;
    hi[i] = q.cl_eta.invariant_factors()[i - fr] - 1;
  }
  bool all = true;
  Vec deg = lo;
  while (true) {
    DimensionRow row;
    row.degree = deg;
    row.dim_quotient = hilbert_dimension_quotient(q, deg);
    row.dim_fiber = hilbert_dimension_fiber(
        fiber, fiber.class_group.normal_form(
                   rep.iso->map.apply_ambient(q.cl_eta.lift(deg))));
    row.pass = row.dim_quotient == row.dim_fiber;
    all &= row.pass;
    rep.table.push_back(std::move(row));
    std::size_t i = 0;
    while (i < nf && deg[i] == hi[i]) deg[i] = lo[i], ++i;
    if (i == nf) break;
    deg[i] += 1;
  }
  rep.pass = all;
  return rep;
}

}  // namespace coxfiber

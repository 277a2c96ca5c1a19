//! Polyhedral divisors over an abstract curve.
//!
//! A polyhedral divisor assigns to finitely many points of a curve a
//! polyhedron with a common tail cone; everything a valuation can see is
//! captured by the genus, the point labels, and those polyhedra.  This
//! module provides Cayley cones (pages of the hyperspace), the degree,
//! properness, the singular-center test, hyperface enumeration, and
//! divisorial fans glued from mutual faces.

use crate::lattice::*;
use crate::polyhedra::*;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Reserved page marker for spine points (valuations independent of the
/// curve point).
pub const SPINE: &str = "•";

/// Label used internally for a generic (unmarked) point of the curve; any
/// label outside the marked points behaves identically.
pub const GENERIC: &str = "_generic";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub genus: u32,
    pub points: Vec<String>,
}

impl Curve {
    pub fn new(genus: u32, points: Vec<String>) -> Result<Curve> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if p == SPINE {
                return Err(Error::invalid("the spine marker is reserved"));
            }
            if !seen.insert(p.clone()) {
                return Err(Error::invalid(format!("duplicate point label {p:?}")));
            }
        }
        Ok(Curve { genus, points })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocusKind {
    Affine,
    Complete,
}

/// A polyhedral divisor Σ 𝒟_y·[y] with tail σ.  Only exceptional
/// coefficients are stored; an empty polyhedron marks a point removed from
/// the locus (affine locus only).
#[derive(Debug, Clone)]
pub struct PolyDivisor {
    pub rank: usize,
    pub tail: Cone,
    pub curve: Curve,
    pub coeffs: BTreeMap<String, Polyhedron>,
    pub locus: LocusKind,
}

impl PolyDivisor {
    pub fn new(
        rank: usize,
        tail: Cone,
        curve: Curve,
        coeffs: BTreeMap<String, Polyhedron>,
        locus: LocusKind,
    ) -> Result<PolyDivisor> {
        if tail.ambient != rank {
            return Err(Error::DimensionMismatch { expected: rank, got: tail.ambient });
        }
        if !tail.is_strictly_convex() {
            return Err(Error::NotStrictlyConvex);
        }
        for (y, p) in &coeffs {
            if !curve.points.contains(y) {
                return Err(Error::invalid(format!("coefficient at unknown point {y:?}")));
            }
            if p.is_empty() {
                if locus == LocusKind::Complete {
                    return Err(Error::invalid(
                        "complete locus forbids empty coefficients",
                    ));
                }
                continue;
            }
            if p.ambient != rank {
                return Err(Error::DimensionMismatch { expected: rank, got: p.ambient });
            }
            if !p.tail()?.set_eq(&tail) {
                return Err(Error::invalid(format!(
                    "coefficient at {y:?} does not have the declared tail"
                )));
            }
        }
        Ok(PolyDivisor { rank, tail, curve, coeffs, locus })
    }

    /// The trivial coefficient {0} + σ carried by every unlisted point.
    pub fn trivial_coeff(&self) -> Polyhedron {
        Polyhedron::of_cone(&self.tail)
    }

    pub fn coeff(&self, label: &str) -> Polyhedron {
        self.coeffs
            .get(label)
            .cloned()
            .unwrap_or_else(|| self.trivial_coeff())
    }

    /// Points with a stored coefficient, in listed curve order.
    pub fn support(&self) -> Vec<String> {
        self.curve
            .points
            .iter()
            .filter(|p| self.coeffs.contains_key(*p))
            .cloned()
            .collect()
    }

    pub fn in_locus(&self, label: &str) -> bool {
        match self.locus {
            LocusKind::Complete => true,
            LocusKind::Affine => !self.coeffs.get(label).is_some_and(|p| p.is_empty()),
        }
    }

    /// The ℚ-divisor 𝒟(m) = Σ min⟨𝒟_y, m⟩·[y]; zero coefficients omitted.
    pub fn evaluation(&self, m: &[Int]) -> Result<BTreeMap<String, Rat>> {
        if !self.tail.rays.iter().all(|r| !dot_ii(m, r).is_negative()) {
            return Err(Error::invalid(
                "evaluation undefined outside the tail dual",
            ));
        }
        let mut out = BTreeMap::new();
        for (y, p) in &self.coeffs {
            if p.is_empty() {
                continue;
            }
            let val = p
                .vertices
                .iter()
                .map(|v| dot_iq(m, v))
                .min()
                .expect("nonempty polyhedron has vertices");
            if !val.is_zero() {
                out.insert(y.clone(), val);
            }
        }
        Ok(out)
    }

    /// deg 𝒟 = Minkowski sum of all coefficients (complete locus); the empty
    /// polyhedron for affine locus.
    pub fn degree(&self) -> Polyhedron {
        if self.locus == LocusKind::Affine {
            return Polyhedron::empty(self.rank);
        }
        let mut acc = self.trivial_coeff();
        for p in self.coeffs.values() {
            acc = acc.minkowski_sum(p);
        }
        acc
    }

    pub fn is_proper(&self) -> Properness {
        if self.locus == LocusKind::Affine {
            return Properness::Proper;
        }
        let deg = self.degree();
        let inside = deg.vertices.iter().all(|v| self.tail.contains_q(v));
        if !inside {
            return Properness::NotProper("degree is not contained in the tail".to_string());
        }
        let zero = vec![Rat::zero(); self.rank];
        if deg.contains(&zero) {
            return Properness::NotProper(
                "degree contains the origin, so it is not a proper subset of the tail"
                    .to_string(),
            );
        }
        if self.curve.genus == 0 {
            return Properness::Proper;
        }
        // For genus ≥ 1, rays of σ^∨ where deg 𝒟(m) = 0 need a principal
        // multiple; that depends on the curve's class group, so report them.
        let mut pending = Vec::new();
        for m in &self.tail.dual().rays {
            let total: Rat = self
                .evaluation(m)
                .expect("dual rays are in the tail dual")
                .values()
                .sum();
            if total.is_zero() {
                pending.push(m.clone());
            }
        }
        if pending.is_empty() {
            Properness::Proper
        } else {
            Properness::ProperModuloPrincipal(pending)
        }
    }

    /// Cayley cone C_y(𝒟) ⊆ N_ℚ × ℚ, generated by the tail at height 0 and
    /// μ(v)(v, 1) over the vertices of 𝒟_y.
    pub fn cayley_cone(&self, y: &str) -> Result<Cone> {
        if !self.in_locus(y) {
            return Err(Error::invalid(format!("point {y:?} is removed from the locus")));
        }
        let p = self.coeff(y);
        let mut gens: Vec<IVec> = Vec::new();
        for r in &self.tail.rays {
            let mut g = r.clone();
            g.push(Int::zero());
            gens.push(g);
        }
        for v in &p.vertices {
            let mut h = v.to_vec();
            h.push(Rat::one());
            let (_, g) = multiplicity(&h).expect("homogenized vertex is nonzero");
            gens.push(g);
        }
        Ok(Cone::from_generators(self.rank + 1, &gens, &[]))
    }

    pub fn hyp_contains(&self, nu: &HypPoint) -> bool {
        if nu.is_spine() {
            return self.tail.contains(&nu.a);
        }
        if !self.in_locus(&nu.page) {
            return false;
        }
        self.cayley_cone(&nu.page)
            .expect("page is in the locus")
            .contains(&nu.embedded())
    }

    /// 𝒟 restricted to an open subset: coefficients at marked points outside
    /// `keep` become empty; the locus becomes affine.
    pub fn restrict(&self, keep: &[String]) -> Result<PolyDivisor> {
        for y in keep {
            if !self.in_locus(y) {
                return Err(Error::invalid(format!("point {y:?} is not in the locus")));
            }
        }
        let mut coeffs = BTreeMap::new();
        for y in &self.curve.points {
            if keep.contains(y) {
                if let Some(p) = self.coeffs.get(y) {
                    coeffs.insert(y.clone(), p.clone());
                }
            } else {
                coeffs.insert(y.clone(), Polyhedron::empty(self.rank));
            }
        }
        PolyDivisor::new(
            self.rank,
            self.tail.clone(),
            self.curve.clone(),
            coeffs,
            LocusKind::Affine,
        )
    }

    /// The face of the page's Cayley cone whose relative interior contains ν
    /// (spine points yield a face of the tail embedded at height 0), together
    /// with its spine part as a cone in N_ℚ.
    pub fn hyperface_of(&self, nu: &HypPoint) -> Result<(Cone, Cone)> {
        if nu.is_spine() {
            let tau = self.tail.face_of(&nu.a)?;
            Ok((embed_at_height_zero(&tau), tau))
        } else {
            let cayley = self.cayley_cone(&nu.page)?;
            let theta = cayley.face_of(&nu.embedded())?;
            Ok((theta.clone(), spine_part(&theta)))
        }
    }

    /// Does the center of ν lie in the singular locus?  Errors on a complete
    /// locus of genus 0, where the formula does not apply.
    pub fn singular_center(&self, nu: &HypPoint) -> Result<bool> {
        if self.locus == LocusKind::Complete && self.curve.genus == 0 {
            return Err(Error::GenusZeroSingularLocus);
        }
        self.singular_center_raw(nu)
    }

    /// The combinatorial singularity test without the genus guard.  When the
    /// locus is complete and the spine part τ of the carrier face meets the
    /// degree, the valuation is centered on a contracted stratum: in genus 0
    /// only the fully contracted stratum (τ the whole tail) counts as
    /// singular, while in positive genus every spine point of such a face is
    /// singular and a positive-height point is singular when its carrier cone
    /// is non-smooth and either the degree stays clear of the boundary of τ
    /// or the cone is not simplicial.  Every other valuation is singular iff
    /// its carrier face is a non-smooth cone.
    pub(crate) fn singular_center_raw(&self, nu: &HypPoint) -> Result<bool> {
        if !self.hyp_contains(nu) {
            return Err(Error::NotInCone);
        }
        let (theta, spine) = self.hyperface_of(nu)?;
        if self.locus == LocusKind::Complete {
            let deg = self.degree();
            if polyhedron_meets_cone(&deg, &spine) {
                if self.curve.genus == 0 {
                    return Ok(spine.set_eq(&self.tail));
                }
                if nu.is_spine() {
                    return Ok(true);
                }
                let boundary_clear = spine
                    .faces()
                    .iter()
                    .filter(|f| f.dim < spine.dim)
                    .all(|f| !polyhedron_meets_cone(&deg, f));
                return Ok(!theta.is_smooth()
                    && (boundary_clear || !theta.is_simplicial()));
            }
        }
        Ok(!theta.is_smooth())
    }

    /// All hyperfaces of the hypercone HC(𝒟): face-subdivisors (spine faces
    /// meeting the degree, complete locus) and Cayley-cone faces whose spine
    /// part misses the degree.  Page faces are enumerated over the support
    /// plus one generic-page representative.
    pub fn hyperfaces(&self) -> Result<Vec<Hyperface>> {
        let deg = self.degree();
        let complete = self.locus == LocusKind::Complete;
        let mut out = Vec::new();

        if complete {
            for tau in self.tail.faces() {
                if polyhedron_meets_cone(&deg, &tau) {
                    out.push(Hyperface {
                        kind: HyperfaceKind::FaceSubdivisor,
                        page: None,
                        cone: embed_at_height_zero(&tau),
                        spine_part: tau.clone(),
                        dim: tau.dim + 1,
                        orbit: true,
                        singular: true,
                    });
                }
            }
        }

        let mut spine_seen: BTreeSet<Vec<IVec>> = BTreeSet::new();
        let mut pages: Vec<Option<String>> =
            self.support().into_iter().map(Some).collect();
        pages.push(None);
        for page in pages {
            let label = page.clone().unwrap_or_else(|| GENERIC.to_string());
            if !self.in_locus(&label) {
                continue;
            }
            let cayley = self.cayley_cone(&label)?;
            for theta in cayley.faces() {
                let spine = spine_part(&theta);
                if complete && polyhedron_meets_cone(&deg, &spine) {
                    continue; // covered by a face-subdivisor hyperface
                }
                let on_spine = theta.dim == spine.dim;
                if on_spine {
                    if !spine_seen.insert(spine.rays.clone()) {
                        continue;
                    }
                    out.push(Hyperface {
                        kind: HyperfaceKind::PageFace,
                        page: None,
                        cone: theta.clone(),
                        spine_part: spine,
                        dim: theta.dim,
                        orbit: false,
                        singular: !theta.is_smooth(),
                    });
                } else {
                    out.push(Hyperface {
                        kind: HyperfaceKind::PageFace,
                        page: page.clone(),
                        cone: theta.clone(),
                        spine_part: spine,
                        dim: theta.dim,
                        orbit: true,
                        singular: !theta.is_smooth(),
                    });
                }
            }
        }
        Ok(out)
    }
}

impl PartialEq for PolyDivisor {
    fn eq(&self, other: &Self) -> bool {
        if self.rank != other.rank
            || self.curve != other.curve
            || self.locus != other.locus
            || !self.tail.set_eq(&other.tail)
        {
            return false;
        }
        let keys: BTreeSet<&String> =
            self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().all(|y| self.coeff(y) == other.coeff(y))
    }
}
impl Eq for PolyDivisor {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Properness {
    Proper,
    /// Proper provided the listed dual rays admit principal multiples, which
    /// depends on the curve's class group and is not decidable from the
    /// combinatorial data alone.
    ProperModuloPrincipal(Vec<IVec>),
    NotProper(String),
}

/// An integral point [page, a, b] of the hyperspace.  b = 0 forces the spine
/// marker as page (those points are page-independent).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HypPoint {
    pub page: String,
    pub a: IVec,
    pub b: Int,
}

impl HypPoint {
    pub fn new(page: &str, a: IVec, b: Int) -> Result<HypPoint> {
        if b.is_negative() {
            return Err(Error::invalid("hyperspace height must be nonnegative"));
        }
        if b.is_zero() {
            return Ok(HypPoint { page: SPINE.to_string(), a, b });
        }
        if page == SPINE {
            return Err(Error::invalid(
                "positive-height points need a curve point as page",
            ));
        }
        Ok(HypPoint { page: page.to_string(), a, b })
    }

    pub fn spine(a: IVec) -> HypPoint {
        HypPoint { page: SPINE.to_string(), a, b: Int::zero() }
    }

    pub fn page_point(page: &str, a: IVec, b: Int) -> Result<HypPoint> {
        HypPoint::new(page, a, b)
    }

    pub fn is_spine(&self) -> bool {
        self.b.is_zero()
    }

    /// Coordinates (a, b) in the page N × ℤ.
    pub fn embedded(&self) -> IVec {
        let mut v = self.a.clone();
        v.push(self.b.clone());
        v
    }

    pub fn from_embedded(page: &str, v: &[Int]) -> Result<HypPoint> {
        let (a, b) = v.split_at(v.len() - 1);
        HypPoint::new(page, a.to_vec(), b[0].clone())
    }
}

impl fmt::Display for HypPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.a.iter().map(|c| c.to_string()).collect();
        if self.a.len() == 1 {
            write!(f, "[{},{},{}]", self.page, coords[0], self.b)
        } else {
            write!(f, "[{},({}),{}]", self.page, coords.join(","), self.b)
        }
    }
}

/// The data of a semi-invariant function f·χ^m that a valuation can see: the
/// character m and the vanishing orders of the coefficient function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiInvariantMonomial {
    pub m: IVec,
    pub orders: BTreeMap<String, Int>,
}

/// val_{[y,a,b]}(f_m χ^m) = ⟨m, a⟩ + b·ord_y(f_m).
pub fn val_apply(nu: &HypPoint, g: &SemiInvariantMonomial) -> Rat {
    let mut total = dot_ii(&g.m, &nu.a);
    if !nu.is_spine() {
        if let Some(o) = g.orders.get(&nu.page) {
            total += &nu.b * o;
        }
    }
    Rat::from(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperfaceKind {
    /// Type (i): the hypercone of a face-subdivisor with complete locus
    /// whose tail meets the degree.
    FaceSubdivisor,
    /// Type (ii): a face of one Cayley cone whose spine part misses the
    /// degree.
    PageFace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperface {
    pub kind: HyperfaceKind,
    /// Page label for faces leaving the spine; None for spine faces,
    /// face-subdivisors, and generic-page representatives.
    pub page: Option<String>,
    /// The face in page coordinates N × ℤ (spine faces at height 0).
    pub cone: Cone,
    /// The height-zero part as a cone in N_ℚ.
    pub spine_part: Cone,
    pub dim: usize,
    /// Whether the associated cycle is an orbit closure (θ ⊄ N_ℚ or type i).
    pub orbit: bool,
    pub singular: bool,
}

/// Embed a cone of N_ℚ into N_ℚ × ℚ at height 0.
pub fn embed_at_height_zero(tau: &Cone) -> Cone {
    let gens: Vec<IVec> = tau
        .rays
        .iter()
        .map(|r| {
            let mut g = r.clone();
            g.push(Int::zero());
            g
        })
        .collect();
    Cone::from_generators(tau.ambient + 1, &gens, &[])
}

/// The height-zero face of a cone in N_ℚ × ℚ, projected to N_ℚ.
pub fn spine_part(theta: &Cone) -> Cone {
    let d = theta.ambient - 1;
    let rays: Vec<IVec> = theta
        .rays
        .iter()
        .filter(|r| r[d].is_zero())
        .map(|r| r[..d].to_vec())
        .collect();
    Cone::from_generators(d, &rays, &[])
}

/// A divisorial fan: finitely many p-divisors over one curve, stable by
/// intersection, pairwise intersecting in mutual faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorialFan {
    pub rank: usize,
    pub curve: Curve,
    pub divisors: Vec<PolyDivisor>,
}

/// Coefficientwise intersection of two polyhedral divisors.
pub fn intersect_divisors(a: &PolyDivisor, b: &PolyDivisor) -> Result<PolyDivisor> {
    if a.rank != b.rank || a.curve != b.curve {
        return Err(Error::invalid("divisors live over different data"));
    }
    let tail = a.tail.intersect(&b.tail);
    let keys: BTreeSet<String> = a
        .coeffs
        .keys()
        .chain(b.coeffs.keys())
        .cloned()
        .collect();
    let mut coeffs = BTreeMap::new();
    let mut any_empty = false;
    for y in keys {
        let inter = a.coeff(&y).intersect(&b.coeff(&y));
        any_empty |= inter.is_empty();
        coeffs.insert(y, inter);
    }
    let locus = if a.locus == LocusKind::Complete
        && b.locus == LocusKind::Complete
        && !any_empty
    {
        LocusKind::Complete
    } else {
        LocusKind::Affine
    };
    PolyDivisor::new(a.rank, tail, a.curve.clone(), coeffs, locus)
}

/// Is `f` a face of `d`: coefficientwise polyhedron faces plus the degree
/// condition deg(f) = deg(d) ∩ Tail(f).
pub fn divisor_is_face_of(f: &PolyDivisor, d: &PolyDivisor) -> bool {
    let mut keys: BTreeSet<String> = f
        .coeffs
        .keys()
        .chain(d.coeffs.keys())
        .cloned()
        .collect();
    keys.insert(GENERIC.to_string());
    for y in keys {
        if !d.coeff(&y).has_face(&f.coeff(&y)) {
            return false;
        }
    }
    let restricted = d.degree().intersect_cone(&f.tail);
    f.degree() == restricted
}

impl DivisorialFan {
    /// Validate a complete list (must already be intersection-stable).
    pub fn new(divisors: Vec<PolyDivisor>) -> Result<DivisorialFan> {
        let first = divisors
            .first()
            .ok_or_else(|| Error::invalid("a divisorial fan needs at least one divisor"))?;
        let rank = first.rank;
        let curve = first.curve.clone();
        for d in &divisors {
            if d.rank != rank || d.curve != curve {
                return Err(Error::invalid("divisors live over different data"));
            }
        }
        for i in 0..divisors.len() {
            for j in i + 1..divisors.len() {
                let inter = intersect_divisors(&divisors[i], &divisors[j])?;
                if !divisor_is_face_of(&inter, &divisors[i])
                    || !divisor_is_face_of(&inter, &divisors[j])
                {
                    return Err(Error::invalid(
                        "divisors do not intersect in a mutual face",
                    ));
                }
                if !divisors.iter().any(|d| d == &inter) {
                    return Err(Error::invalid(
                        "divisor list is not stable by intersection",
                    ));
                }
            }
        }
        Ok(DivisorialFan { rank, curve, divisors })
    }

    /// Close a generating list under pairwise intersection, then validate.
    pub fn generated_by(generators: Vec<PolyDivisor>) -> Result<DivisorialFan> {
        let mut all = generators;
        loop {
            let mut added = Vec::new();
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    let inter = intersect_divisors(&all[i], &all[j])?;
                    if !all.iter().any(|d| d == &inter)
                        && !added.iter().any(|d| d == &inter)
                    {
                        added.push(inter);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            all.extend(added);
        }
        DivisorialFan::new(all)
    }

    pub fn hyp_contains(&self, nu: &HypPoint) -> bool {
        self.divisors.iter().any(|d| d.hyp_contains(nu))
    }

    pub fn is_toroidal(&self) -> bool {
        self.divisors.iter().all(|d| d.locus == LocusKind::Affine)
    }
}

//! Equivariant resolutions by star subdivision.
//!
//! Everything here is driven by one primitive: starring a fan at a lattice
//! point.  `smooth_economical_refinement` resolves a fan while keeping every
//! smooth cone of the input; `big_upgrade` / `p_refinement` additionally force
//! every new cone to carry a genuinely new ray (or one meeting a prescribed
//! degree polyhedron); `avoid_valuation_refinement` produces a refinement in
//! which a given non-minimal valuation sits in the relative interior of an
//! exceptional cone.  The page-level machinery (`extend_to_all_pages`,
//! `assemble_divisorial_fan`, `exceptional_classification`,
//! `certify_non_essential`) turns such a refinement into a divisorial fan
//! witnessing that the valuation is not essential.
//!
//! Each run re-verifies its own postconditions (smoothness, economy,
//! bigness); a violated invariant surfaces as `Error::Invalid` rather than a
//! silently wrong certificate.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::lattice::{
    content, dot_ii, is_zero_ivec, neg_ivec, primitive, IVec, Int, Rat,
};
use crate::pdivisor::{
    embed_at_height_zero, spine_part, Curve, DivisorialFan, HypPoint, LocusKind, PolyDivisor,
    GENERIC,
};
use crate::polyhedra::{
    hilbert_basis, lattice_points, polyhedron_meets_cone, star_subdivision, Cone, Fan, Polyhedron,
};
use crate::{Error, Result};

/// Cap on star subdivisions per refinement; hitting it means a bug, not a
/// hard instance.
const MAX_STEPS: usize = 4096;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(Error::invalid(format!($($msg)+)));
        }
    };
}

/// A star refinement: the ordered list of subdivision centers and the fan
/// they produce.  Replaying the centers on the starting fan reproduces the
/// result, which is how refinements travel between charts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinementTrace {
    pub centers: Vec<IVec>,
    pub result: Fan,
}

impl RefinementTrace {
    /// Re-run the recorded centers on another fan with the same support.
    pub fn replay(&self, start: &Fan) -> Result<Fan> {
        let mut fan = start.clone();
        for c in &self.centers {
            fan = star_subdivision(&fan, c)?;
        }
        Ok(fan)
    }
}

/// Whether a cone in N_ℚ × ℚ meets the degree polyhedron (placed at height
/// zero).  `None` encodes an empty degree; nothing meets it.
fn cone_meets_p(theta: &Cone, p: Option<&Polyhedron>) -> bool {
    match p {
        Some(p) => polyhedron_meets_cone(p, &spine_part(theta)),
        None => false,
    }
}

fn ray_meets_p(ambient: usize, r: &IVec, p: Option<&Polyhedron>) -> bool {
    cone_meets_p(&Cone::from_rays(ambient, std::slice::from_ref(r)), p)
}

fn is_ray_of(cone: &Cone, r: &IVec) -> bool {
    cone.rays.iter().any(|s| s == r)
}

fn nonempty(p: &Polyhedron) -> Option<&Polyhedron> {
    if p.is_empty() {
        None
    } else {
        Some(p)
    }
}

/// Starring at `h` keeps every smooth cone of `start` intact: either `h`
/// avoids smooth territory entirely, or it is an extremal ray there (a star
/// at an existing ray never splits a simplicial cone).
fn economical_center(start: &Fan, h: &IVec) -> bool {
    match start.cone_of(h) {
        Some(c) => !c.is_smooth() || is_ray_of(c, h),
        None => false,
    }
}

/// Starring at `h` genuinely subdivides `tau`.  Fails exactly when `h` is a
/// ray of `tau` whose complementary rays span a face.
fn splits(tau: &Cone, h: &IVec) -> bool {
    if !is_ray_of(tau, h) {
        return true;
    }
    if tau.is_simplicial() {
        return false;
    }
    let others: Vec<IVec> = tau.rays.iter().filter(|r| *r != h).cloned().collect();
    !tau.has_face(&Cone::from_rays(tau.ambient, &others))
}

/// Iterated star subdivision until every cone is smooth, never splitting a
/// smooth cone of `start`.  Centers are Hilbert basis elements of the
/// non-smooth cones of smallest dimension, smallest level first, then
/// lexicographic; `avoid` is never chosen as a center.
fn refine_to_smooth(start: &Fan, avoid: Option<&[Int]>) -> Result<RefinementTrace> {
    let mut fan = start.clone();
    let mut centers: Vec<IVec> = Vec::new();
    for _ in 0..MAX_STEPS {
        let bad: Vec<&Cone> = fan.cones.iter().filter(|c| !c.is_smooth()).collect();
        let Some(first) = bad.first() else {
            return Ok(RefinementTrace { centers, result: fan });
        };
        let mindim = first.dim;
        let mut best: Option<(Int, IVec)> = None;
        for tau in bad.iter().filter(|c| c.dim == mindim) {
            for h in hilbert_basis(tau)? {
                if avoid == Some(h.as_slice()) || !splits(tau, &h) {
                    continue;
                }
                if !economical_center(start, &h) {
                    continue;
                }
                let key = (tau.level(&h), h);
                if best.as_ref().map_or(true, |b| key < *b) {
                    best = Some(key);
                }
            }
        }
        let center = match best {
            Some((_, h)) => h,
            None => return Err(Error::invalid("no admissible smoothing center")),
        };
        fan = star_subdivision(&fan, &center)?;
        centers.push(center);
    }
    Err(Error::invalid("smoothing did not terminate"))
}

/// Smooth refinement of a fan by star subdivisions that keeps every smooth
/// cone of the input (an economical refinement).
pub fn smooth_economical_refinement(start: &Fan) -> Result<RefinementTrace> {
    refine_to_smooth(start, None)
}

/// Cones obstructing (degree-sensitive) bigness: they reuse only rays of the
/// original cone, and are neither faces of it nor allowed to, by meeting the
/// degree through one of their rays.
fn big_violations(fan: &Fan, cal_c: &Cone, p: Option<&Polyhedron>) -> Vec<Cone> {
    let mut out = Vec::new();
    for t in &fan.cones {
        if t.dim == 0 || !t.rays.iter().all(|r| is_ray_of(cal_c, r)) {
            continue;
        }
        if cone_meets_p(t, p) {
            if !t.rays.iter().any(|r| ray_meets_p(t.ambient, r, p)) {
                out.push(t.clone());
            }
        } else if !cal_c.has_face(t) {
            out.push(t.clone());
        }
    }
    out
}

/// Eliminate bigness violations by starring each offender at the sum of its
/// primitive ray generators, smallest offender first.  Preserves smoothness
/// and economy; every new cone gains the fresh center ray.
fn p_big_fix(
    mut fan: Fan,
    cal_c: &Cone,
    p: Option<&Polyhedron>,
    avoid: Option<&[Int]>,
    centers: &mut Vec<IVec>,
) -> Result<Fan> {
    for _ in 0..MAX_STEPS {
        let violations = big_violations(&fan, cal_c, p);
        let Some(tau) = violations.first() else {
            return Ok(fan);
        };
        check!(tau.dim >= 2, "bigness violation of dimension {}", tau.dim);
        let n = primitive(&tau.relint_point())?;
        check!(!is_ray_of(cal_c, &n), "bigness center is a ray of the input cone");
        check!(avoid != Some(n.as_slice()), "bigness center hits the avoided valuation");
        fan = star_subdivision(&fan, &n)?;
        check!(fan.is_smooth(), "bigness star broke smoothness");
        check!(
            big_violations(&fan, cal_c, p).len() < violations.len(),
            "bigness star made no progress"
        );
        centers.push(n);
    }
    Err(Error::invalid("bigness repair did not terminate"))
}

fn check_p_economical(fan: &Fan, cal_c: &Cone, p: Option<&Polyhedron>) -> Result<()> {
    for f in cal_c.faces() {
        if f.is_smooth() && !cone_meets_p(&f, p) && !fan.has_cone(&f) {
            return Err(Error::invalid("refinement lost a smooth face off the degree"));
        }
    }
    Ok(())
}

fn check_p_big(fan: &Fan, cal_c: &Cone, p: Option<&Polyhedron>) -> Result<()> {
    if big_violations(fan, cal_c, p).is_empty() {
        Ok(())
    } else {
        Err(Error::invalid("refinement is not big"))
    }
}

/// Upgrade a smooth refinement of `cal_c` to a big one: every cone that is
/// not a face of `cal_c` acquires a ray that is not a ray of `cal_c`.
pub fn big_upgrade(fan: &Fan, cal_c: &Cone) -> Result<RefinementTrace> {
    let mut centers = Vec::new();
    let result = p_big_fix(fan.clone(), cal_c, None, None, &mut centers)?;
    check_p_big(&result, cal_c, None)?;
    Ok(RefinementTrace { centers, result })
}

/// Smooth, degree-economical, degree-big star refinement of the face fan of
/// `cal_c`, with the degree polyhedron `p` placed at height zero.
pub fn p_refinement(cal_c: &Cone, p: &Polyhedron) -> Result<RefinementTrace> {
    let popt = nonempty(p);
    let base = Fan::face_fan(cal_c)?;
    let smooth = refine_to_smooth(&base, None)?;
    let mut centers = smooth.centers;
    let result = p_big_fix(smooth.result, cal_c, popt, None, &mut centers)?;
    check_p_economical(&result, cal_c, popt)?;
    check_p_big(&result, cal_c, popt)?;
    Ok(RefinementTrace { centers, result })
}

/// Lattice points `q` of `cal_c` with `nu - q` in `cal_c`, excluding `0` and
/// `nu` itself, ordered by level then lexicographically.
fn dominators(cal_c: &Cone, nu: &[Int]) -> Result<Vec<IVec>> {
    let mut ineqs: Vec<(IVec, Int)> = Vec::new();
    for f in &cal_c.facets {
        ineqs.push((f.clone(), Int::zero()));
        ineqs.push((neg_ivec(f), dot_ii(f, nu)));
    }
    let eqs: Vec<(IVec, Int)> =
        cal_c.eqs.iter().map(|e| (e.clone(), Int::zero())).collect();
    let box_ = Polyhedron::from_hrep(cal_c.ambient, &ineqs, &eqs);
    let mut out: Vec<IVec> = lattice_points(&box_)?
        .into_iter()
        .filter(|q| !is_zero_ivec(q) && q.as_slice() != nu)
        .collect();
    out.sort_by(|a, b| cal_c.level(a).cmp(&cal_c.level(b)).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Membership in the locus to be blown up: carrier face non-smooth or
/// meeting the degree.
fn in_blowup_locus(cal_c: &Cone, p: Option<&Polyhedron>, q: &[Int]) -> Result<bool> {
    let f = cal_c.face_of(q)?;
    Ok(!f.is_smooth() || cone_meets_p(&f, p))
}

fn blowup_dominators(cal_c: &Cone, p: Option<&Polyhedron>, nu: &[Int]) -> Result<Vec<IVec>> {
    let mut out = Vec::new();
    for q in dominators(cal_c, nu)? {
        if in_blowup_locus(cal_c, p, &q)? {
            out.push(q);
        }
    }
    Ok(out)
}

/// One full attempt: star the face fan of `cal_c` at the given seeds, smooth
/// economically while never making `nu` a ray, repair bigness, and verify
/// every postcondition.
fn attempt(
    cal_c: &Cone,
    p: Option<&Polyhedron>,
    nu: &[Int],
    seeds: &[IVec],
) -> Result<RefinementTrace> {
    let mut fan = Fan::face_fan(cal_c)?;
    let mut centers: Vec<IVec> = Vec::new();
    for s in seeds {
        let s = primitive(s)?;
        check!(s.as_slice() != nu, "seed center equals the valuation");
        fan = star_subdivision(&fan, &s)?;
        centers.push(s);
    }
    let smooth = refine_to_smooth(&fan, Some(nu))?;
    centers.extend(smooth.centers);
    let result = p_big_fix(smooth.result, cal_c, p, Some(nu), &mut centers)?;
    let theta = result.cone_of(nu).ok_or(Error::NotInCone)?;
    check!(theta.dim >= 2, "valuation became a ray of the refinement");
    check!(
        cone_meets_p(theta, p) || !cal_c.has_face(theta),
        "valuation still sits on an untouched face"
    );
    check!(result.is_smooth(), "refinement is not smooth");
    check_p_economical(&result, cal_c, p)?;
    check_p_big(&result, cal_c, p)?;
    Ok(RefinementTrace { centers, result })
}

/// A smooth, degree-economical, degree-big star refinement of the face fan
/// of `cal_c` in which `nu` lies in the relative interior of a cone of
/// dimension at least two that meets the degree or is not a face of `cal_c`.
///
/// `nu` must be a primitive lattice point of `cal_c` whose carrier face is
/// non-smooth or meets `p`.  Fails with `Error::MinimalValuation` when no
/// point of the blowup locus dominates `nu`, i.e. when no such refinement
/// can exist.
pub fn avoid_valuation_refinement(
    cal_c: &Cone,
    p: &Polyhedron,
    nu: &[Int],
) -> Result<RefinementTrace> {
    if nu.len() != cal_c.ambient {
        return Err(Error::DimensionMismatch { expected: cal_c.ambient, got: nu.len() });
    }
    if is_zero_ivec(nu) {
        return Err(Error::ZeroVector);
    }
    check!(content(nu) == Int::one(), "valuation vector must be primitive");
    if !cal_c.contains(nu) {
        return Err(Error::NotInCone);
    }
    let popt = nonempty(p);
    let eta = cal_c.face_of(nu)?;
    check!(
        !eta.is_smooth() || cone_meets_p(&eta, popt),
        "valuation does not lie over the singular or contracted locus"
    );
    let doms = blowup_dominators(cal_c, popt, nu)?;
    if doms.is_empty() {
        return Err(Error::MinimalValuation);
    }

    // Candidate seed lists, best mathematical guess first.
    let mut seed_lists: Vec<Vec<IVec>> = Vec::new();
    if eta.is_smooth() {
        // Carrier is smooth but meets the degree: star at the sum of the
        // rays of its minimal degree-meeting face.
        let mut faces = eta.faces();
        faces.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        if let Some(tp) = faces.iter().find(|f| f.dim > 0 && cone_meets_p(f, popt)) {
            let n = primitive(&tp.relint_point())?;
            if n.as_slice() != nu {
                seed_lists.push(vec![n]);
            }
        }
    } else {
        let sing: Vec<&IVec> = doms
            .iter()
            .filter(|q| {
                cal_c.face_of(q).map(|f| !f.is_smooth()).unwrap_or(false)
            })
            .collect();
        if sing.is_empty() {
            // Minimal over the singular locus proper: every dominator has a
            // smooth degree-meeting carrier.  Seed with a minimal one, so the
            // first star already separates nu from the singular face.
            for q in &doms {
                if blowup_dominators(cal_c, popt, q)?.is_empty() {
                    seed_lists.push(vec![q.clone()]);
                }
            }
        } else {
            // The generic case: economical smoothing alone works, with
            // pre-stars at singular dominators as fallbacks.
            seed_lists.push(Vec::new());
            for q in sing {
                seed_lists.push(vec![q.clone()]);
            }
        }
    }
    for q in &doms {
        seed_lists.push(vec![q.clone()]);
    }
    seed_lists.dedup();

    let mut last = Error::invalid("no avoiding refinement found");
    for seeds in &seed_lists {
        match attempt(cal_c, popt, nu, seeds) {
            Ok(trace) => return Ok(trace),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Cones of a hyperspace fan lying in the height-zero plane, projected down.
fn induced_tail_fan(fan: &Fan, rank: usize) -> Result<Fan> {
    let cones: Vec<Cone> = fan
        .cones
        .iter()
        .filter(|c| c.rays.iter().all(|r| r[rank].is_zero()))
        .map(|c| {
            let rays: Vec<IVec> = c.rays.iter().map(|r| r[..rank].to_vec()).collect();
            Cone::from_rays(rank, &rays)
        })
        .collect();
    Fan::from_cones(rank, &cones)
}

fn fan_set_eq(a: &Fan, b: &Fan) -> bool {
    let ra: BTreeSet<&Vec<IVec>> = a.cones.iter().map(|c| &c.rays).collect();
    let rb: BTreeSet<&Vec<IVec>> = b.cones.iter().map(|c| &c.rays).collect();
    ra == rb
}

/// Spread a refinement of the Cayley cone at `base` to the other pages:
/// replay the tail-level centers, smooth economically, repair degree-bigness.
/// All pages end up inducing the same fan on the common tail cone.
pub fn extend_to_all_pages(
    trace: &RefinementTrace,
    d: &PolyDivisor,
    base: &str,
    pages: &[String],
) -> Result<Vec<(String, Fan)>> {
    let deg = d.degree();
    let popt = nonempty(&deg);
    let rank = d.rank;
    let base_tail = induced_tail_fan(&trace.result, rank)?;
    let mut out = Vec::new();
    for y in pages {
        if y == base {
            out.push((y.clone(), trace.result.clone()));
            continue;
        }
        let cy = d.cayley_cone(y)?;
        let mut fan = Fan::face_fan(&cy)?;
        let mut centers = Vec::new();
        for c in &trace.centers {
            if c[rank].is_zero() && d.tail.contains(&c[..rank]) {
                fan = star_subdivision(&fan, c)?;
                centers.push(c.clone());
            }
        }
        let smooth = refine_to_smooth(&fan, None)?;
        centers.extend(smooth.centers);
        let fan = p_big_fix(smooth.result, &cy, popt, None, &mut centers)?;
        check_p_economical(&fan, &cy, popt)?;
        check_p_big(&fan, &cy, popt)?;
        let tail = induced_tail_fan(&fan, rank)?;
        check!(fan_set_eq(&tail, &base_tail), "pages induce different tail fans");
        out.push((y.clone(), fan));
    }
    Ok(out)
}

/// A p-divisor cut out of the refined page fans, together with the tables of
/// exceptional cones used to classify valuations.
#[derive(Debug, Clone)]
pub struct ResolutionWitness {
    /// Smooth refinements of the Cayley cones, one per marked point.
    pub pages: Vec<(String, Fan)>,
    /// The common fan induced on the tail cone.
    pub tail_fan: Fan,
    /// The divisorial fan of the resolution.
    pub efan: DivisorialFan,
    /// Cones of the page fans that are not faces of their Cayley cone;
    /// tail-level cones carry no page tag.
    pub exc_toroidal: Vec<(Option<String>, Cone)>,
    /// `exc_toroidal` plus the tail cones meeting the degree (the cones
    /// contracted by the map to the original variety).
    pub exc_x: Vec<(Option<String>, Cone)>,
}

/// Coefficient polyhedron of a hyperspace cone: its slice at height one.
fn slice_at_one(gamma: &Cone) -> Polyhedron {
    let rank = gamma.ambient - 1;
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let mut rays: Vec<IVec> = Vec::new();
    for r in &gamma.rays {
        if r[rank].is_zero() {
            rays.push(r[..rank].to_vec());
        } else {
            vertices.push(
                r[..rank]
                    .iter()
                    .map(|x| Rat::new(x.clone(), r[rank].clone()))
                    .collect(),
            );
        }
    }
    Polyhedron::from_vrep(rank, &vertices, &rays)
}

/// Assemble the page fans into a divisorial fan and compute the exceptional
/// cone tables.  The pages must be smooth fans inducing a common tail fan.
pub fn assemble_divisorial_fan(
    d: &PolyDivisor,
    pages: &[(String, Fan)],
) -> Result<ResolutionWitness> {
    check!(!pages.is_empty(), "no pages to assemble");
    let rank = d.rank;
    let tail_fan = induced_tail_fan(&pages[0].1, rank)?;
    for (y, fan) in pages {
        check!(fan.is_smooth(), "page {y} is not smooth");
        let tf = induced_tail_fan(fan, rank)?;
        check!(fan_set_eq(&tf, &tail_fan), "page {y} induces a different tail fan");
    }
    let marked: Vec<&String> = pages.iter().map(|(y, _)| y).collect();
    let empty = Polyhedron::empty(rank);
    let mut gens: Vec<PolyDivisor> = Vec::new();
    let mut tail_maximal: BTreeSet<Vec<IVec>> = BTreeSet::new();
    for (y, fan) in pages {
        for gamma in fan.maximal_cones() {
            if gamma.rays.iter().all(|r| r[rank].is_zero()) {
                tail_maximal.insert(
                    gamma.rays.iter().map(|r| r[..rank].to_vec()).collect(),
                );
                continue;
            }
            let tail = spine_part(gamma);
            let mut coeffs: BTreeMap<String, Polyhedron> = BTreeMap::new();
            coeffs.insert(y.clone(), slice_at_one(gamma));
            for z in &marked {
                if *z != y {
                    coeffs.insert((*z).clone(), empty.clone());
                }
            }
            gens.push(PolyDivisor::new(
                rank,
                tail,
                d.curve.clone(),
                coeffs,
                LocusKind::Affine,
            )?);
        }
    }
    for rays in &tail_maximal {
        let tail = Cone::from_rays(rank, rays);
        let coeffs: BTreeMap<String, Polyhedron> =
            marked.iter().map(|z| ((*z).clone(), empty.clone())).collect();
        gens.push(PolyDivisor::new(
            rank,
            tail,
            d.curve.clone(),
            coeffs,
            LocusKind::Affine,
        )?);
    }
    check!(!gens.is_empty(), "assembled divisorial fan is empty");
    let efan = DivisorialFan::generated_by(gens)?;

    let mut exc_toroidal: Vec<(Option<String>, Cone)> = Vec::new();
    let mut seen_tail: BTreeSet<Vec<IVec>> = BTreeSet::new();
    for (y, fan) in pages {
        let cy = d.cayley_cone(y)?;
        for t in &fan.cones {
            if cy.has_face(t) {
                continue;
            }
            if t.rays.iter().all(|r| r[rank].is_zero()) {
                if seen_tail.insert(t.rays.clone()) {
                    exc_toroidal.push((None, t.clone()));
                }
            } else {
                exc_toroidal.push((Some(y.clone()), t.clone()));
            }
        }
    }
    let mut exc_x = exc_toroidal.clone();
    let deg = d.degree();
    if !deg.is_empty() {
        for t in &tail_fan.cones {
            if !polyhedron_meets_cone(&deg, t) {
                continue;
            }
            let emb = embed_at_height_zero(t);
            let present = exc_x
                .iter()
                .any(|(tag, c)| tag.is_none() && c.set_eq(&emb));
            if !present {
                exc_x.push((None, emb));
            }
        }
    }
    Ok(ResolutionWitness { pages: pages.to_vec(), tail_fan, efan, exc_toroidal, exc_x })
}

/// Whether a valuation stays exceptional over the toroidification and over
/// the original variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExcClass {
    pub over_toroidification: bool,
    pub over_x: bool,
}

/// Find the carrier cone of a valuation in the witness and test whether it
/// is a minimal element (by inclusion) of the exceptional tables.
pub fn exceptional_classification(nu: &HypPoint, w: &ResolutionWitness) -> Result<ExcClass> {
    let theta: (Option<String>, Cone) = if nu.is_spine() {
        let t = w.tail_fan.cone_of(&nu.a).ok_or(Error::NotInCone)?;
        (None, embed_at_height_zero(t))
    } else {
        let (_, fan) = w
            .pages
            .iter()
            .find(|(y, _)| *y == nu.page)
            .ok_or_else(|| Error::invalid(format!("page {:?} not in the witness", nu.page)))?;
        let t = fan.cone_of(&nu.embedded()).ok_or(Error::NotInCone)?;
        let rank = t.ambient - 1;
        if t.rays.iter().all(|r| r[rank].is_zero()) {
            (None, t.clone())
        } else {
            (Some(nu.page.clone()), t.clone())
        }
    };
    let minimal_in = |table: &[(Option<String>, Cone)]| {
        let present = table
            .iter()
            .any(|(tag, c)| *tag == theta.0 && c.set_eq(&theta.1));
        present
            && !table.iter().any(|(tag, c)| {
                (*tag == theta.0 || tag.is_none())
                    && theta.1.contains_cone(c)
                    && !c.set_eq(&theta.1)
            })
    };
    Ok(ExcClass {
        over_toroidification: minimal_in(&w.exc_toroidal),
        over_x: minimal_in(&w.exc_x),
    })
}

/// Construct an equivariant resolution witnessing that a singular,
/// non-minimal, primitive valuation is not essential: after the refinement
/// its carrier cone is no longer a minimal exceptional cone.  Fails with
/// `Error::MinimalValuation` on minimal valuations.
pub fn certify_non_essential(nu: &HypPoint, d: &PolyDivisor) -> Result<ResolutionWitness> {
    check!(
        d.singular_center_raw(nu)?,
        "valuation has a smooth center; nothing to resolve"
    );
    check!(
        content(&nu.embedded()) == Int::one(),
        "valuation must be primitive"
    );

    // Valuations over an unmarked point get a fresh marked point with the
    // trivial coefficient; the divisor is unchanged as a divisor.
    let (dw, nuw) = if !nu.is_spine() && !d.curve.points.contains(&nu.page) {
        let label = if nu.page == GENERIC {
            let mut k = 0;
            loop {
                let cand = format!("w{k}");
                if !d.curve.points.contains(&cand) {
                    break cand;
                }
                k += 1;
            }
        } else {
            nu.page.clone()
        };
        let mut points = d.curve.points.clone();
        points.push(label.clone());
        let curve = Curve::new(d.curve.genus, points)?;
        let dw = PolyDivisor::new(d.rank, d.tail.clone(), curve, d.coeffs.clone(), d.locus)?;
        let nuw = HypPoint::new(&label, nu.a.clone(), nu.b.clone())?;
        (dw, nuw)
    } else {
        (d.clone(), nu.clone())
    };

    let base = if nuw.is_spine() {
        dw.support()
            .into_iter()
            .next()
            .or_else(|| dw.curve.points.first().cloned())
            .ok_or_else(|| Error::invalid("divisor has no marked point to work on"))?
    } else {
        nuw.page.clone()
    };
    let support = dw.support();
    let marked: Vec<String> = dw
        .curve
        .points
        .iter()
        .filter(|p| support.contains(p) || **p == base)
        .cloned()
        .collect();

    let cal_c = dw.cayley_cone(&base)?;
    let deg = dw.degree();
    let trace = avoid_valuation_refinement(&cal_c, &deg, &nuw.embedded())?;
    let pages = extend_to_all_pages(&trace, &dw, &base, &marked)?;
    let witness = assemble_divisorial_fan(&dw, &pages)?;
    let class = exceptional_classification(&nuw, &witness)?;
    check!(
        !class.over_x,
        "refinement left the valuation minimally exceptional"
    );
    Ok(witness)
}

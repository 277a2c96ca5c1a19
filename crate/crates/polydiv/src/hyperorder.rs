//! Orders on equivariant divisorial valuations.
//!
//! Three orders appear: the cone order ≤_σ (difference lies in the cone),
//! the hypercombinatorial order ≤_𝒟 (difference lies in a common Cayley
//! cone), and the pointwise order ≤_X on the valuations themselves.  Over
//! the projective line the pointwise order is decided exactly through an
//! auxiliary cone in a larger lattice; over curves of positive genus only a
//! sound three-valued test is available, since refuting ≤_X needs an actual
//! section of a line bundle.
//!
//! The module also enumerates the minimal singular valuations level by
//! level.  Minimality of a single valuation is always decided exactly by a
//! bounded polytope scan; only exhaustiveness of the enumeration depends on
//! a level bound, which is reported back together with a completeness flag.

use crate::lattice::*;
use crate::pdivisor::{
    DivisorialFan, HypPoint, LocusKind, PolyDivisor, GENERIC, SPINE,
};
use crate::polyhedra::*;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    True,
    False,
    Unknown,
}

/// A checkable witness attached to a definite verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// For True: the vector whose cone membership was verified (the
    /// difference for ≤_σ and ≤_𝒟, the functional nonnegative on the
    /// relaxation cone for the sound pointwise test).
    Membership(IVec),
    /// For False: a functional nonnegative on the relevant cone and
    /// negative on the difference.
    Separation(IVec),
    /// A structural reason not expressible as a single vector.
    Note(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderVerdict {
    pub relation: Relation,
    pub certificate: Option<Certificate>,
}

impl OrderVerdict {
    pub fn yes(c: Certificate) -> OrderVerdict {
        OrderVerdict { relation: Relation::True, certificate: Some(c) }
    }

    pub fn no(c: Certificate) -> OrderVerdict {
        OrderVerdict { relation: Relation::False, certificate: Some(c) }
    }

    pub fn unknown() -> OrderVerdict {
        OrderVerdict { relation: Relation::Unknown, certificate: None }
    }

    pub fn is_true(&self) -> bool {
        self.relation == Relation::True
    }
}

/// ν ≤_σ ν′ iff ν′ − ν ∈ σ.
pub fn leq_sigma(nu: &[Int], nup: &[Int], sigma: &Cone) -> OrderVerdict {
    let diff = sub_ivec(nup, nu);
    for e in &sigma.eqs {
        let v = dot_ii(e, &diff);
        if !v.is_zero() {
            let w = if v.is_negative() { e.clone() } else { neg_ivec(e) };
            return OrderVerdict::no(Certificate::Separation(w));
        }
    }
    for f in &sigma.facets {
        if dot_ii(f, &diff).is_negative() {
            return OrderVerdict::no(Certificate::Separation(f.clone()));
        }
    }
    OrderVerdict::yes(Certificate::Membership(diff))
}

/// The hypercombinatorial order: ν₁ ≤_𝒟 ν₂ iff the two points share a page
/// (spine points lie on every page) and the difference of the embedded
/// points lies in that page's Cayley cone.
pub fn leq_hyper(nu1: &HypPoint, nu2: &HypPoint, d: &PolyDivisor) -> Result<OrderVerdict> {
    if !d.hyp_contains(nu1) || !d.hyp_contains(nu2) {
        return Err(Error::NotInCone);
    }
    let page = if nu1.is_spine() {
        if nu2.is_spine() { GENERIC } else { nu2.page.as_str() }
    } else if nu2.is_spine() || nu1.page == nu2.page {
        nu1.page.as_str()
    } else {
        return Ok(OrderVerdict::no(Certificate::Note("no common page".into())));
    };
    let cayley = d.cayley_cone(page)?;
    Ok(leq_sigma(&nu1.embedded(), &nu2.embedded(), &cayley))
}

/// The order on a divisorial fan: the disjunction of ≤_𝒟 over the member
/// divisors containing both points.
pub fn leq_fan(nu1: &HypPoint, nu2: &HypPoint, fan: &DivisorialFan) -> Result<OrderVerdict> {
    let mut last = None;
    for d in &fan.divisors {
        if d.hyp_contains(nu1) && d.hyp_contains(nu2) {
            let v = leq_hyper(nu1, nu2, d)?;
            if v.is_true() {
                return Ok(v);
            }
            last = Some(v);
        }
    }
    last.ok_or(Error::NotInCone)
}

/// Is the singular valuation ν minimal among singular valuations for ≤_𝒟?
///
/// Decided exactly: the dominators of ν form the polytope C ∩ (ν − C) in
/// the page's Cayley cone C (bounded since C is strictly convex), and ν is
/// minimal iff no lattice point of it other than 0 and ν has a singular
/// center.  Points dominating a spine point are again spine points and
/// their order does not depend on the page, so one representative page
/// suffices.
pub fn is_minimal_singular(d: &PolyDivisor, nu: &HypPoint) -> Result<bool> {
    if !d.singular_center_raw(nu)? {
        return Err(Error::invalid(
            "minimality is only defined for singular valuations",
        ));
    }
    let page = if nu.is_spine() { GENERIC } else { nu.page.as_str() };
    let cayley = d.cayley_cone(page)?;
    let hat = nu.embedded();
    let mut ineqs = Vec::new();
    for f in &cayley.facets {
        ineqs.push((f.clone(), Int::zero()));
        ineqs.push((neg_ivec(f), dot_ii(f, &hat)));
    }
    let eqs: Vec<(IVec, Int)> =
        cayley.eqs.iter().map(|e| (e.clone(), Int::zero())).collect();
    let dominators = Polyhedron::from_hrep(cayley.ambient, &ineqs, &eqs);
    for q in lattice_points(&dominators)? {
        if is_zero_ivec(&q) || q == hat {
            continue;
        }
        let cand = HypPoint::from_embedded(page, &q)?;
        if &cand == nu {
            continue;
        }
        if d.singular_center_raw(&cand)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinSetResult {
    pub elements: Vec<HypPoint>,
    /// Whether the enumeration can certify that no further minimal element
    /// exists beyond the level bound.
    pub complete: bool,
    pub level_bound: Int,
}

/// The lattice points of {x ∈ c : level(x) = ell}.
fn level_slice(c: &Cone, ell: &Int) -> Polyhedron {
    let ineqs: Vec<(IVec, Int)> =
        c.facets.iter().map(|f| (f.clone(), Int::zero())).collect();
    let mut eqs: Vec<(IVec, Int)> =
        c.eqs.iter().map(|e| (e.clone(), Int::zero())).collect();
    let mut sum = vec![Int::zero(); c.ambient];
    for f in &c.facets {
        sum = add_ivec(&sum, f);
    }
    eqs.push((sum, -ell.clone()));
    Polyhedron::from_hrep(c.ambient, &ineqs, &eqs)
}

/// Enumerate the minimal singular valuations of 𝒟 up to a level bound.
///
/// Per page (the support plus one generic representative; spine points show
/// up at height zero inside every page and are deduplicated), lattice
/// points are scanned level by level.  Each singular point not dominated by
/// an element already found is submitted to the exact minimality test.  The
/// default bound is (d+2) times the largest level of a Newton-boundary
/// point across the pages.  The result is complete when every singular
/// point at the last two levels dominates some earlier element.
pub fn min_singular_set(
    d: &PolyDivisor,
    level_bound: Option<Int>,
) -> Result<MinSetResult> {
    let mut pages: Vec<String> = d.support();
    pages.push(GENERIC.to_string());
    pages.retain(|y| d.in_locus(y));
    let cones: Vec<Cone> = pages
        .iter()
        .map(|y| d.cayley_cone(y))
        .collect::<Result<_>>()?;

    let bound = match level_bound {
        Some(b) => b,
        None => {
            let mut maxlev = Int::zero();
            for c in &cones {
                let (pts, _) = newton_hull(c)?;
                for p in &pts {
                    let l = c.level(p);
                    if l > maxlev {
                        maxlev = l;
                    }
                }
            }
            Int::from(d.rank as u64 + 2) * maxlev
        }
    };

    let mut elements: Vec<HypPoint> = Vec::new();
    let mut seen: BTreeSet<HypPoint> = BTreeSet::new();
    let mut complete = true;
    let frontier_from = &bound - Int::one();
    let mut ell = Int::one();
    while ell <= bound {
        let frontier = ell >= frontier_from;
        for (y, c) in pages.iter().zip(&cones) {
            for q in lattice_points(&level_slice(c, &ell))? {
                if is_zero_ivec(&q) {
                    continue;
                }
                let nu = HypPoint::from_embedded(y, &q)?;
                if !seen.insert(nu.clone()) {
                    continue;
                }
                if !d.singular_center_raw(&nu)? {
                    continue;
                }
                let dominated = |els: &[HypPoint]| -> Result<bool> {
                    for e in els {
                        if e != &nu && leq_hyper(e, &nu, d)?.is_true() {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                };
                let dom = dominated(&elements)?;
                if !dom && is_minimal_singular(d, &nu)? {
                    elements.push(nu.clone());
                    if frontier {
                        complete = false;
                    }
                } else if frontier && !dominated(&elements)? {
                    complete = false;
                }
            }
        }
        ell += Int::one();
    }
    Ok(MinSetResult { elements, complete, level_bound: bound })
}

/// The pointwise-order cone of a divisor over the projective line, living
/// in rank s + d where s is the number of non-base support points.
#[derive(Debug, Clone)]
pub struct IltenManonCone {
    /// The distinguished support point y₀.
    pub base: String,
    /// The remaining support points y₁ … y_s, in order; point yᵢ owns
    /// coordinate i−1 of the leading block.
    pub points: Vec<String>,
    pub rank: usize,
    pub cone: Cone,
}

/// Image of a valuation in the pointwise-order lattice ℤ^s × N.
pub fn im_embed(im: &IltenManonCone, nu: &HypPoint) -> Result<IVec> {
    let s = im.points.len();
    let mut w = vec![Int::zero(); s];
    if nu.is_spine() {
        // spine points embed as (0, a) independently of any page
    } else if nu.page == im.base {
        for c in w.iter_mut() {
            *c = -nu.b.clone();
        }
    } else if let Some(i) = im.points.iter().position(|p| *p == nu.page) {
        w[i] = nu.b.clone();
    } else {
        return Err(Error::invalid(
            "extend the support list to cover this page",
        ));
    }
    w.extend_from_slice(&nu.a);
    Ok(w)
}

/// The clearing (μ, μ·v) of a rational vector.
pub(crate) fn cleared(v: &[Rat]) -> (Int, IVec) {
    let mut h = v.to_vec();
    h.push(Rat::one());
    let (mu, mut c) = multiplicity(&h).expect("homogenized vector is nonzero");
    c.pop();
    (mu, c)
}

pub fn ilten_manon_cone(d: &PolyDivisor) -> Result<IltenManonCone> {
    let order = d.support();
    ilten_manon_cone_ordered(d, &order)
}

/// Same with an explicit ordering of the support; the first point is the
/// base.  Order verdicts do not depend on the ordering.
pub fn ilten_manon_cone_ordered(
    d: &PolyDivisor,
    order: &[String],
) -> Result<IltenManonCone> {
    if d.curve.genus != 0 {
        return Err(Error::invalid(
            "the pointwise cone requires a rational curve",
        ));
    }
    if d.locus != LocusKind::Complete {
        return Err(Error::invalid(
            "the pointwise cone requires a complete locus",
        ));
    }
    let support = d.support();
    if order.is_empty()
        || order.len() != support.len()
        || !support.iter().all(|y| order.contains(y))
    {
        return Err(Error::invalid(
            "the ordering must list every support point once",
        ));
    }
    let s = order.len() - 1;
    let n = s + d.rank;

    let block = |i: usize, ell: &Int, a: &[Int]| -> IVec {
        let mut w = vec![Int::zero(); s];
        if i == 0 {
            for c in w.iter_mut() {
                *c = -ell.clone();
            }
        } else {
            w[i - 1] = ell.clone();
        }
        w.extend_from_slice(a);
        w
    };

    let mut gens = Vec::new();
    for (i, y) in order.iter().enumerate() {
        let cayley = d.cayley_cone(y)?;
        for r in &cayley.rays {
            let (a, ell) = r.split_at(d.rank);
            gens.push(block(i, &ell[0], a));
        }
    }
    let cone = Cone::from_generators(n, &gens, &[]);

    // Cross-check against the dual description: the dual cone is carved out
    // by m ∈ σ^∨, vᵢ + 𝒟_{yᵢ}(m) ≥ 0 and Σvᵢ ≤ 𝒟_{y₀}(m), whose coefficient
    // vectors regenerate the cone from the vertex data.
    let mut regen = Vec::new();
    for r in &d.tail.rays {
        regen.push(block(0, &Int::zero(), r));
    }
    for (i, y) in order.iter().enumerate() {
        for v in &d.coeff(y).vertices {
            let (mu, mv) = cleared(v);
            regen.push(block(i, &mu, &mv));
        }
    }
    let expected = Cone::from_generators(n, &regen, &[]);
    if !cone.set_eq(&expected) {
        return Err(Error::invalid(
            "pointwise cone disagrees with its dual description",
        ));
    }
    if !cone.is_strictly_convex() {
        return Err(Error::invalid("pointwise cone is not strictly convex"));
    }

    Ok(IltenManonCone {
        base: order[0].clone(),
        points: order[1..].to_vec(),
        rank: n,
        cone,
    })
}

/// Exact pointwise order over the projective line: ν ≤_X ν′ iff the
/// difference of the embedded images lies in the pointwise cone.
pub fn leq_pointwise_p1(
    nu: &HypPoint,
    nup: &HypPoint,
    d: &PolyDivisor,
) -> Result<OrderVerdict> {
    let im = ilten_manon_cone(d)?;
    let x = im_embed(&im, nu)?;
    let xp = im_embed(&im, nup)?;
    Ok(leq_sigma(&x, &xp, &im.cone))
}

/// Sound three-valued pointwise order for positive genus.
///
/// True when ≤_𝒟 holds, or when val_ν ≤ val_ν′ over the entire relaxation
/// cone of section data: pairs (m, o) with m in the tail dual, the order
/// profile o bounded below by −𝒟_z(m) at every tracked point and summing
/// to at most zero (complete locus).  Every actual semi-invariant function
/// yields such a pair, so nonnegativity of val_ν′ − val_ν on the cone
/// certifies ≤_X.  False requires a witnessed failure: a character m with
/// 𝒟(m) ≥ 0 (so that χ^m is a global section) separating the two images.
/// Everything else is Unknown; refuting ≤_X in general would need actual
/// sections of line bundles on the curve.
pub fn leq_pointwise_sound(
    nu: &HypPoint,
    nup: &HypPoint,
    d: &PolyDivisor,
) -> Result<OrderVerdict> {
    if d.curve.genus == 0 {
        return Err(Error::invalid(
            "the sound pointwise test expects positive genus",
        ));
    }
    let hv = leq_hyper(nu, nup, d)?;
    if hv.is_true() {
        return Ok(hv);
    }

    let mut pts: Vec<String> = d.support();
    for p in [&nu.page, &nup.page] {
        if p != SPINE && !pts.contains(p) {
            pts.push(p.clone());
        }
    }
    pts.retain(|y| d.in_locus(y));
    let dd = d.rank;
    let n = dd + pts.len();

    let mut rows: Vec<IVec> = Vec::new();
    for r in &d.tail.rays {
        let mut row = r.clone();
        row.extend(vec![Int::zero(); pts.len()]);
        rows.push(row);
    }
    for (j, z) in pts.iter().enumerate() {
        for v in &d.coeff(z).vertices {
            let (mu, mv) = cleared(v);
            let mut row = mv;
            row.extend(vec![Int::zero(); pts.len()]);
            row[dd + j] = mu;
            rows.push(row);
        }
    }
    if d.locus == LocusKind::Complete {
        let mut row = vec![Int::zero(); n];
        for c in row.iter_mut().skip(dd) {
            *c = -Int::one();
        }
        rows.push(row);
    }
    let relax = Cone::from_hrep(n, &rows, &[]);

    // φ(m, o) = val_ν′(χ^m f) − val_ν(χ^m f) for a function with character m
    // and order profile o.
    let mut phi = sub_ivec(&nup.a, &nu.a);
    phi.extend(vec![Int::zero(); pts.len()]);
    let idx = |page: &str| pts.iter().position(|p| p == page).expect("tracked");
    if !nup.is_spine() {
        phi[dd + idx(&nup.page)] += &nup.b;
    }
    if !nu.is_spine() {
        phi[dd + idx(&nu.page)] -= &nu.b;
    }
    let nonneg = relax.rays.iter().all(|r| !dot_ii(&phi, r).is_negative())
        && relax.lines.iter().all(|l| dot_ii(&phi, l).is_zero());
    if nonneg {
        return Ok(OrderVerdict::yes(Certificate::Membership(phi)));
    }

    if hv.relation == Relation::False {
        // Characters m with 𝒟(m) ≥ 0 give constant-coefficient sections.
        let mut erows: Vec<IVec> = d.tail.rays.clone();
        for y in d.support() {
            for v in &d.coeff(&y).vertices {
                erows.push(cleared(v).1);
            }
        }
        let effective = Cone::from_hrep(dd, &erows, &[]);
        let da = sub_ivec(&nup.a, &nu.a);
        for m in effective
            .rays
            .iter()
            .cloned()
            .chain(effective.lines.iter().flat_map(|l| [l.clone(), neg_ivec(l)]))
        {
            if dot_ii(&m, &da).is_negative() {
                return Ok(OrderVerdict::no(Certificate::Separation(m)));
            }
        }
    }
    Ok(OrderVerdict::unknown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::*;
    use crate::pdivisor::Curve;
    use std::collections::BTreeMap;

    fn hp(page: &str, a: &[i64], b: i64) -> HypPoint {
        HypPoint::new(page, ivec(a), int(b)).unwrap()
    }

    #[test]
    fn leq_sigma_examples() {
        let sigma = Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[1, 2])]);
        let v = leq_sigma(&ivec(&[1, 1]), &ivec(&[1, 1]), &sigma);
        assert!(v.is_true());
        assert_eq!(v.certificate, Some(Certificate::Membership(ivec(&[0, 0]))));

        let v = leq_sigma(&ivec(&[1, 1]), &ivec(&[2, 1]), &sigma);
        assert!(v.is_true());

        let v = leq_sigma(&ivec(&[1, 1]), &ivec(&[1, 2]), &sigma);
        assert_eq!(v.relation, Relation::False);
        match v.certificate {
            Some(Certificate::Separation(f)) => {
                assert!(dot_ii(&f, &ivec(&[0, 1])).is_negative());
                assert!(sigma.rays.iter().all(|r| !dot_ii(&f, r).is_negative()));
            }
            other => panic!("expected a separating functional, got {other:?}"),
        }
    }

    #[test]
    fn leq_hyper_examples() {
        let e = elliptic_surface();
        let spine = hp(SPINE, &[1, 0], 0);
        let nu1 = hp("y0", &[1, 0], 1);
        assert!(leq_hyper(&spine, &nu1, &e).unwrap().is_true());
        // Different pages at positive height never compare.
        let other = hp("y1", &[1, 1], 1);
        let v = leq_hyper(&nu1, &other, &e).unwrap();
        assert_eq!(v.relation, Relation::False);

        let t = trinomial_surface();
        let v = leq_hyper(&hp(SPINE, &[1], 0), &hp("0", &[2], 1), &t).unwrap();
        assert_eq!(v.relation, Relation::False);
    }

    #[test]
    fn restriction_coherence() {
        // On a single page, ≤_𝒟 is the cone order of the Cayley cone.
        let e = elliptic_surface();
        let c0 = e.cayley_cone("y0").unwrap();
        let pts = [
            hp("y0", &[1, 0], 1),
            hp("y0", &[2, 0], 2),
            hp("y0", &[1, 1], 1),
            hp("y0", &[3, -1], 2),
            hp(SPINE, &[1, 0], 0),
            hp(SPINE, &[0, 1], 0),
        ];
        for a in &pts {
            for b in &pts {
                let lhs = leq_hyper(a, b, &e).unwrap().relation;
                let rhs = leq_sigma(&a.embedded(), &b.embedded(), &c0).relation;
                assert_eq!(lhs, rhs, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn order_axioms_on_random_points() {
        // Reflexive, antisymmetric, transitive on lattice points of a
        // Cayley cone.
        let e = elliptic_surface();
        let c = e.cayley_cone("y0").unwrap();
        let mut pts: Vec<IVec> = Vec::new();
        for x in 0..4i64 {
            for y in -2..3i64 {
                for h in 0..3i64 {
                    let p = ivec(&[x, y, h]);
                    if c.contains(&p) && !is_zero_ivec(&p) {
                        pts.push(p);
                    }
                }
            }
        }
        assert!(pts.len() > 10);
        for a in &pts {
            assert!(leq_sigma(a, a, &c).is_true());
            for b in &pts {
                let ab = leq_sigma(a, b, &c).is_true();
                if ab && leq_sigma(b, a, &c).is_true() {
                    assert_eq!(a, b);
                }
                for z in &pts {
                    if ab && leq_sigma(b, z, &c).is_true() {
                        assert!(leq_sigma(a, z, &c).is_true());
                    }
                }
            }
        }
    }

    #[test]
    fn minimality_examples() {
        let e = elliptic_surface();
        let nu1 = hp("y0", &[1, 0], 1);
        let toroidal = e.restrict(&["y0".into(), "y1".into()]).unwrap();
        assert!(is_minimal_singular(&toroidal, &nu1).unwrap());
        // On the full divisor the spine point below it is singular too.
        assert!(!is_minimal_singular(&e, &nu1).unwrap());

        let t = trinomial_surface();
        assert!(is_minimal_singular(&t, &hp("0", &[2], 1)).unwrap());

        // Non-singular input is rejected.
        assert!(is_minimal_singular(&e, &hp(SPINE, &[0, 1], 0)).is_err());
    }

    #[test]
    fn min_set_trinomial_surface() {
        let t = trinomial_surface();
        let ms = min_singular_set(&t, None).unwrap();
        let expected = vec![
            hp(SPINE, &[1], 0),
            hp("0", &[2], 1),
            hp("1", &[-1], 1),
            hp("∞", &[-1], 3),
            hp("∞", &[0], 1),
        ];
        let got: BTreeSet<HypPoint> = ms.elements.iter().cloned().collect();
        assert_eq!(got, expected.into_iter().collect());
        assert!(ms.complete);
    }

    #[test]
    fn min_set_threefold() {
        let jk = threefold_hypersurface();
        let ms = min_singular_set(&jk, None).unwrap();
        assert_eq!(ms.elements.len(), 17);
        assert!(ms.complete);
        // Pairwise incomparable.
        for a in &ms.elements {
            for b in &ms.elements {
                if a != b {
                    assert!(!leq_hyper(a, b, &jk).unwrap().is_true());
                }
            }
        }
    }

    #[test]
    fn min_set_smooth_toroidal_is_empty() {
        let tail = Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])]);
        let curve = Curve::new(0, vec!["p".into()]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(
            "p".to_string(),
            qpoly(2, &[&[(0, 1), (0, 1)]], &[&[1, 0], &[0, 1]]),
        );
        let d = PolyDivisor::new(2, tail, curve, coeffs, LocusKind::Affine).unwrap();
        let ms = min_singular_set(&d, None).unwrap();
        assert!(ms.elements.is_empty());
        assert!(ms.complete);
    }

    #[test]
    fn min_set_elliptic_surface() {
        let e = elliptic_surface();
        let ms = min_singular_set(&e, None).unwrap();
        assert_eq!(ms.elements, vec![hp(SPINE, &[1, 0], 0)]);
        assert!(ms.complete);

        let chart = e.restrict(&["y0".into()]).unwrap();
        let ms = min_singular_set(&chart, None).unwrap();
        assert_eq!(ms.elements, vec![hp("y0", &[1, 0], 1)]);
        assert!(ms.complete);
    }

    /// Brute-force oracle: scan every lattice point up to the bound on
    /// every page, keep the singular ones, filter by pairwise domination.
    fn brute_min_set(d: &PolyDivisor, bound: i64) -> BTreeSet<HypPoint> {
        let mut pages = d.support();
        pages.push(GENERIC.to_string());
        pages.retain(|y| d.in_locus(y));
        let mut singular: BTreeSet<HypPoint> = BTreeSet::new();
        for y in &pages {
            let c = d.cayley_cone(y).unwrap();
            let mut ell = Int::one();
            while ell <= int(bound) {
                for q in lattice_points(&level_slice(&c, &ell)).unwrap() {
                    let nu = HypPoint::from_embedded(y, &q).unwrap();
                    if d.singular_center_raw(&nu).unwrap() {
                        singular.insert(nu);
                    }
                }
                ell += Int::one();
            }
        }
        singular
            .iter()
            .filter(|nu| {
                singular
                    .iter()
                    .all(|o| o == *nu || !leq_hyper(o, nu, d).unwrap().is_true())
            })
            .cloned()
            .collect()
    }

    #[test]
    fn brute_force_oracle_agreement() {
        for d in [
            trinomial_surface(),
            elliptic_surface(),
            elliptic_surface()
                .restrict(&["y0".into(), "y1".into()])
                .unwrap(),
        ] {
            let bound = 12;
            let ms = min_singular_set(&d, Some(int(bound))).unwrap();
            let got: BTreeSet<HypPoint> = ms.elements.into_iter().collect();
            assert_eq!(got, brute_min_set(&d, bound));
        }
    }

    #[test]
    fn pointwise_cone_trinomial() {
        let t = trinomial_surface();
        let im = ilten_manon_cone(&t).unwrap();
        assert_eq!(im.base, "0");
        assert_eq!(im.points, vec!["1".to_string(), "∞".to_string()]);
        assert_eq!(im.rank, 3);
        let expected = Cone::from_rays(
            3,
            &[
                ivec(&[0, 0, 1]),
                ivec(&[4, 0, -5]),
                ivec(&[0, 5, -2]),
                ivec(&[-3, -3, 5]),
            ],
        );
        assert!(im.cone.set_eq(&expected));

        // Spine embedding is page-free.
        assert_eq!(im_embed(&im, &hp(SPINE, &[1], 0)).unwrap(), ivec(&[0, 0, 1]));
        assert_eq!(im_embed(&im, &hp("∞", &[-1], 3)).unwrap(), ivec(&[0, 3, -1]));
        assert!(im_embed(&im, &hp("other", &[1], 1)).is_err());
    }

    #[test]
    fn pointwise_cone_toric_case() {
        // One non-base point with a trivial coefficient: the cone is a
        // linear image of the base Cayley cone (the variety is toric).
        let tail = Cone::from_rays(1, &[ivec(&[1])]);
        let curve = Curve::new(0, vec!["0".into(), "q".into()]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert("0".to_string(), qpoly(1, &[&[(1, 2)]], &[&[1]]));
        coeffs.insert("q".to_string(), qpoly(1, &[&[(0, 1)]], &[&[1]]));
        let d = PolyDivisor::new(1, tail, curve, coeffs, LocusKind::Complete).unwrap();
        let im = ilten_manon_cone(&d).unwrap();
        assert_eq!(im.rank, 2);
        // Images: C_q = ⟨(1,0),(0,1)⟩ ↦ {(0,1),(1,0)}, C_0 = ⟨(1,0),(1,2)⟩
        // under (a,ℓ) ↦ (−ℓ,a) ↦ {(0,1),(−2,1)}.
        let expected = Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[-2, 1])]);
        assert!(im.cone.set_eq(&expected));
    }

    #[test]
    fn pointwise_p1_examples() {
        let t = trinomial_surface();
        let a = hp("∞", &[-1], 3);
        let b = hp("0", &[2], 1);
        assert!(leq_pointwise_p1(&a, &b, &t).unwrap().is_true());
        assert_eq!(leq_pointwise_p1(&b, &a, &t).unwrap().relation, Relation::False);
        assert!(leq_pointwise_p1(&a, &a, &t).unwrap().is_true());
    }

    #[test]
    fn pointwise_p1_base_rotation_invariance() {
        let t = trinomial_surface();
        let orders: [Vec<String>; 3] = [
            vec!["0".into(), "1".into(), "∞".into()],
            vec!["1".into(), "∞".into(), "0".into()],
            vec!["∞".into(), "0".into(), "1".into()],
        ];
        let ims: Vec<IltenManonCone> = orders
            .iter()
            .map(|o| ilten_manon_cone_ordered(&t, o).unwrap())
            .collect();
        let pts = [
            hp(SPINE, &[1], 0),
            hp("0", &[2], 1),
            hp("1", &[-1], 1),
            hp("∞", &[-1], 3),
            hp("∞", &[0], 1),
        ];
        for a in &pts {
            for b in &pts {
                let verdicts: Vec<Relation> = ims
                    .iter()
                    .map(|im| {
                        let x = im_embed(im, a).unwrap();
                        let xp = im_embed(im, b).unwrap();
                        leq_sigma(&x, &xp, &im.cone).relation
                    })
                    .collect();
                assert!(verdicts.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }

    #[test]
    fn pointwise_sound_half_shift() {
        // ν₁ = [y₀, 𝟙, 1] precedes the spine point ν₀ = [•, 𝟙, 0]
        // pointwise but not hypercombinatorially; the reverse direction
        // must never come out True.
        for d in [2usize, 3] {
            let x = half_shift_family(d);
            let one = vec![1i64; d];
            let nu0 = hp(SPINE, &one, 0);
            let nu1 = hp("y0", &one, 1);
            assert_eq!(leq_hyper(&nu1, &nu0, &x).unwrap().relation, Relation::False);
            assert!(leq_pointwise_sound(&nu1, &nu0, &x).unwrap().is_true());
            let rev = leq_pointwise_sound(&nu0, &nu1, &x).unwrap();
            assert_ne!(rev.relation, Relation::True);
        }
    }

    #[test]
    fn pointwise_sound_witnessed_false() {
        // In the toric-tail family two incomparable spine points separate
        // by a character with effective coefficients.
        let d = toric_tail_family(2, &[ivec(&[1, 1])]);
        let a = hp(SPINE, &[2, 1], 0);
        let b = hp(SPINE, &[1, 2], 0);
        let v = leq_pointwise_sound(&a, &b, &d).unwrap();
        assert_eq!(v.relation, Relation::False);
        match v.certificate {
            Some(Certificate::Separation(m)) => {
                assert!(dot_ii(&m, &ivec(&[-1, 1])).is_negative());
            }
            other => panic!("expected a separating character, got {other:?}"),
        }
    }

    #[test]
    fn soundness_chain() {
        // ≤_𝒟 implies the pointwise order, exactly over the projective
        // line and as a non-False verdict in positive genus.
        let t = trinomial_surface();
        let tpts = [
            hp(SPINE, &[1], 0),
            hp(SPINE, &[2], 0),
            hp("0", &[2], 1),
            hp("0", &[4], 2),
            hp("∞", &[-1], 3),
            hp("∞", &[0], 1),
        ];
        for a in &tpts {
            for b in &tpts {
                if leq_hyper(a, b, &t).unwrap().is_true() {
                    assert!(leq_pointwise_p1(a, b, &t).unwrap().is_true());
                }
            }
        }

        let e = elliptic_surface();
        let epts = [
            hp(SPINE, &[1, 0], 0),
            hp(SPINE, &[1, 1], 0),
            hp("y0", &[1, 0], 1),
            hp("y0", &[2, -1], 2),
            hp("y1", &[1, 1], 2),
        ];
        for a in &epts {
            for b in &epts {
                if leq_hyper(a, b, &e).unwrap().is_true() {
                    let v = leq_pointwise_sound(a, b, &e).unwrap();
                    assert_ne!(v.relation, Relation::False);
                }
            }
        }
    }

    #[test]
    fn fan_order_over_charts() {
        let e = elliptic_surface();
        let u0 = e.restrict(&["y0".into()]).unwrap();
        let u1 = e.restrict(&["y1".into()]).unwrap();
        let fan = DivisorialFan::generated_by(vec![u0, u1]).unwrap();
        let spine = hp(SPINE, &[1, 0], 0);
        let nu1 = hp("y0", &[1, 0], 1);
        assert!(leq_fan(&spine, &nu1, &fan).unwrap().is_true());
        // A point only on the removed page of a chart is handled by the
        // chart that contains it.
        let on_y1 = hp("y1", &[1, 1], 2);
        assert!(leq_fan(&on_y1, &hp("y1", &[2, 1], 2), &fan).unwrap().is_true());
        assert!(!leq_fan(&hp(SPINE, &[1, 1], 0), &on_y1, &fan).unwrap().is_true());
    }
}

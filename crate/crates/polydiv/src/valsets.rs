//! The headline valuation sets: Nash, essential, terminal and minimal
//! valuations of a polyhedral divisor, together with the canonical divisor
//! formula, the Ray/Ver divisor enumeration and the trinomial criterion.
//!
//! Nash and essential valuations coincide with the minimal singular
//! valuations of the hypercombinatorial order whenever the curve has
//! positive genus or the locus is affine; over a complete rational curve
//! the Nash problem is open and the functions refuse loudly.  Terminal
//! valuations are computed page by page on the compact Newton boundaries of
//! the Cayley cones; minimal valuations are filtered out of the Nash set by
//! the pointwise order, exactly over the projective line and by a sound
//! three-valued test in positive genus.

use crate::hyperorder::{
    cleared, leq_pointwise_p1, leq_pointwise_sound, min_singular_set, Relation,
};
use crate::lattice::*;
use crate::pdivisor::{DivisorialFan, HypPoint, LocusKind, PolyDivisor};
use crate::polyhedra::{newton_hull, polyhedron_meets_cone, Cone};
use crate::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Nash,
    Essential,
    Terminal,
    MinimalConfirmed,
    MinimalCandidates,
}

/// A finite set of equivariant divisorial valuations, canonically sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationSet {
    pub kind: SetKind,
    pub elements: Vec<HypPoint>,
    /// Whether the enumeration certifies exhaustiveness (a level-bound scan
    /// may have been cut short).
    pub complete: bool,
    /// Free-form annotation, e.g. the identification of Nash and essential
    /// valuations.
    pub note: Option<String>,
}

fn sorted(mut elements: Vec<HypPoint>) -> Vec<HypPoint> {
    elements.sort_by_key(|nu| (!nu.is_spine(), nu.clone()));
    elements
}

fn require_in_scope(d: &PolyDivisor) -> Result<()> {
    if d.locus == LocusKind::Complete && d.curve.genus == 0 {
        return Err(Error::GenusZeroOpenProblem);
    }
    Ok(())
}

/// The Nash valuations of X(𝒟): the minimal singular valuations under the
/// hypercombinatorial order.  Defined for positive genus with a complete
/// locus and for every toroidal (affine-locus) divisor.
pub fn nash_set(d: &PolyDivisor) -> Result<ValuationSet> {
    require_in_scope(d)?;
    let ms = min_singular_set(d, None)?;
    Ok(ValuationSet {
        kind: SetKind::Nash,
        elements: sorted(ms.elements),
        complete: ms.complete,
        note: None,
    })
}

/// The essential valuations; in the range where nash_set is defined the two
/// sets coincide.
pub fn essential_set(d: &PolyDivisor) -> Result<ValuationSet> {
    let nash = nash_set(d)?;
    Ok(ValuationSet {
        kind: SetKind::Essential,
        elements: nash.elements,
        complete: nash.complete,
        note: Some(
            "essential valuations equal Nash valuations in this range".into(),
        ),
    })
}

/// Ter(τ): the lattice points of the compact Newton boundary of τ lying in
/// the relative interior of a non-smooth face.
pub fn terminal_toric(tau: &Cone) -> Result<Vec<IVec>> {
    let (pts, _) = newton_hull(tau)?;
    let mut out = Vec::new();
    for p in pts {
        if !tau.face_of(&p)?.is_smooth() {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

/// The terminal valuations of X(𝒟): the union over the support of the
/// toric terminal sets of the Cayley cones, plus the spine points on
/// primitive tail rays meeting the degree.  Requires positive genus and a
/// complete locus.
pub fn terminal_set(d: &PolyDivisor) -> Result<ValuationSet> {
    if d.locus != LocusKind::Complete {
        return Err(Error::invalid(
            "the terminal set is defined for complete loci",
        ));
    }
    require_in_scope(d)?;
    let mut elements: BTreeSet<HypPoint> = BTreeSet::new();
    for y in d.support() {
        let cayley = d.cayley_cone(&y)?;
        for p in terminal_toric(&cayley)? {
            elements.insert(HypPoint::from_embedded(&y, &p)?);
        }
    }
    let deg = d.degree();
    for r in &d.tail.rays {
        let ray = Cone::from_rays(d.rank, std::slice::from_ref(r));
        if polyhedron_meets_cone(&deg, &ray) {
            elements.insert(HypPoint::spine(primitive(r)?));
        }
    }
    Ok(ValuationSet {
        kind: SetKind::Terminal,
        elements: elements.into_iter().collect(),
        complete: true,
        note: None,
    })
}

/// Identifier of a torus-invariant prime divisor on the variety of a
/// divisorial fan: horizontal divisors come from tail-fan rays missing the
/// degree, vertical divisors from (point, vertex) pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DivisorId {
    Ray(IVec),
    Ver { point: String, vertex: QVec },
}

/// A formal ℚ-combination of invariant prime divisors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDivisor {
    pub summands: Vec<(DivisorId, Rat)>,
}

/// The horizontal and vertical prime divisor data of a divisorial fan:
/// primitive tail rays whose ray misses every member degree, and (point,
/// vertex, multiplicity) triples over all members.
pub fn ray_ver(e: &DivisorialFan) -> Result<(Vec<IVec>, Vec<(String, QVec, Int)>)> {
    let mut rays: BTreeSet<IVec> = BTreeSet::new();
    for d in &e.divisors {
        for r in &d.tail.rays {
            rays.insert(primitive(r)?);
        }
    }
    let degrees: Vec<_> = e
        .divisors
        .iter()
        .filter(|d| d.locus == LocusKind::Complete)
        .map(|d| d.degree())
        .collect();
    let mut horizontal = Vec::new();
    for r in rays {
        let ray = Cone::from_rays(e.rank, std::slice::from_ref(&r));
        if !degrees.iter().any(|deg| polyhedron_meets_cone(deg, &ray)) {
            horizontal.push(r);
        }
    }

    let mut seen: BTreeSet<(String, QVec)> = BTreeSet::new();
    let mut vertical = Vec::new();
    for d in &e.divisors {
        for y in d.support() {
            for v in &d.coeff(&y).vertices {
                if seen.insert((y.clone(), v.clone())) {
                    let (mu, _) = cleared(v);
                    vertical.push((y.clone(), v.clone(), mu));
                }
            }
        }
    }
    Ok((horizontal, vertical))
}

/// The canonical divisor K_X = Σ_{(y,v)} (μ(v)·K_{Y,y} + μ(v) − 1)·D_{(y,v)}
/// − Σ_ρ D_ρ for a chosen representative K_Y of the canonical class of the
/// curve (points missing from the map carry coefficient zero).
pub fn canonical_divisor(
    e: &DivisorialFan,
    k_y: &BTreeMap<String, Int>,
) -> Result<TDivisor> {
    let total: Int = k_y.values().sum();
    let expected = Int::from(2) * Int::from(e.curve.genus as i64) - Int::from(2);
    if total != expected {
        return Err(Error::invalid(format!(
            "canonical representative has degree {total}, the curve needs {expected}"
        )));
    }
    let (rays, vers) = ray_ver(e)?;
    let mut summands = Vec::new();
    for (y, v, mu) in vers {
        let ky = k_y.get(&y).cloned().unwrap_or_else(Int::zero);
        let c = &mu * ky + &mu - Int::one();
        summands.push((DivisorId::Ver { point: y, vertex: v }, Rat::from(c)));
    }
    for r in rays {
        summands.push((DivisorId::Ray(r), -Rat::one()));
    }
    Ok(TDivisor { summands })
}

/// Exponent blocks of a trinomial hypersurface t₀^{n̲₀} + t₁^{n̲₁} + t₂^{n̲₂}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrinomialData {
    pub blocks: [Vec<Int>; 3],
}

impl TrinomialData {
    pub fn new(blocks: [Vec<Int>; 3]) -> Result<TrinomialData> {
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::invalid("every exponent block must be nonempty"));
            }
            if b.iter().any(|n| *n < Int::one()) {
                return Err(Error::invalid("exponents must be positive"));
            }
        }
        Ok(TrinomialData { blocks })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrinomialVerdict {
    pub holds: bool,
    pub u: Int,
    pub d: Int,
    pub d1: Int,
    pub d2: Int,
    pub d3: Int,
    /// u − d₁ − d₂ − d₃; nonnegative iff the criterion holds.
    pub value: Int,
}

/// The arithmetic criterion for the Nash problem on a trinomial
/// hypersurface: with uᵢ the gcd of block i, d their common gcd and dᵢ the
/// pairwise gcds of the reduced uⱼ/d, the hypersurface passes iff
/// u − d₁ − d₂ − d₃ ≥ 0 where u = d·d₁·d₂·d₃.
pub fn trinomial_nash_criterion(t: &TrinomialData) -> TrinomialVerdict {
    let block_gcd = |b: &[Int]| -> Int {
        b.iter().fold(Int::zero(), |g, n| g.gcd(n))
    };
    let u1 = block_gcd(&t.blocks[0]);
    let u2 = block_gcd(&t.blocks[1]);
    let u3 = block_gcd(&t.blocks[2]);
    let d = u1.gcd(&u2).gcd(&u3);
    let (r1, r2, r3) = (&u1 / &d, &u2 / &d, &u3 / &d);
    let d1 = r2.gcd(&r3);
    let d2 = r1.gcd(&r3);
    let d3 = r1.gcd(&r2);
    let u = &d * &d1 * &d2 * &d3;
    let value = &u - &d1 - &d2 - &d3;
    TrinomialVerdict {
        holds: !value.is_negative(),
        u,
        d,
        d1,
        d2,
        d3,
        value,
    }
}

/// The minimal valuations of X(𝒟) under the pointwise order, as a pair
/// (confirmed, candidates).  The Nash elements are compared pairwise: over
/// the projective line the pointwise order is decided exactly, in positive
/// genus the sound three-valued test is used and sharpened by antisymmetry
/// (a strict domination in one direction refutes the other).  An element is
/// confirmed when every potential dominator is refuted and a candidate when
/// none is established.
pub fn minimal_valuations(d: &PolyDivisor) -> Result<(ValuationSet, ValuationSet)> {
    if d.locus != LocusKind::Complete {
        return Err(Error::invalid(
            "minimal valuations are computed over a complete locus",
        ));
    }
    let ms = min_singular_set(d, None)?;
    let els = sorted(ms.elements);
    let n = els.len();
    let mut rel = vec![vec![Relation::Unknown; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            rel[i][j] = if d.curve.genus == 0 {
                leq_pointwise_p1(&els[i], &els[j], d)?.relation
            } else {
                leq_pointwise_sound(&els[i], &els[j], d)?.relation
            };
        }
    }
    // Distinct divisorial valuations dominate in at most one direction.
    for i in 0..n {
        for j in 0..n {
            if i != j && rel[i][j] == Relation::True {
                rel[j][i] = Relation::False;
            }
        }
    }
    let mut confirmed = Vec::new();
    let mut candidates = Vec::new();
    for j in 0..n {
        let dominated = (0..n).any(|i| i != j && rel[i][j] == Relation::True);
        if dominated {
            continue;
        }
        candidates.push(els[j].clone());
        if (0..n).all(|i| i == j || rel[i][j] == Relation::False) {
            confirmed.push(els[j].clone());
        }
    }
    Ok((
        ValuationSet {
            kind: SetKind::MinimalConfirmed,
            elements: confirmed,
            complete: ms.complete,
            note: None,
        },
        ValuationSet {
            kind: SetKind::MinimalCandidates,
            elements: candidates,
            complete: ms.complete,
            note: None,
        },
    ))
}

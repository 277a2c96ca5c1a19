//! A small corpus of worked polyhedral divisors used throughout the tests
//! and the command-line documentation.

use crate::lattice::*;
use crate::pdivisor::{Curve, LocusKind, PolyDivisor};
use crate::polyhedra::{Cone, Polyhedron};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// conv(verts) + cone(rays) with rational vertex entries given as pairs.
pub fn qpoly(ambient: usize, verts: &[&[(i64, i64)]], rays: &[&[i64]]) -> Polyhedron {
    let vs: Vec<QVec> = verts.iter().map(|v| qvec(v)).collect();
    let rs: Vec<IVec> = rays.iter().map(|r| ivec(r)).collect();
    Polyhedron::from_vrep(ambient, &vs, &rs)
}

/// The rank-1 divisor of the trinomial surface x₀³ + x₁⁴ + x₂⁵ = 0: tail
/// ℚ≥0 over the projective line with coefficients 5/3, −5/4 and −2/5 at
/// three marked points, complete locus.
pub fn trinomial_surface() -> PolyDivisor {
    let tail = Cone::from_rays(1, &[ivec(&[1])]);
    let curve = Curve::new(0, vec!["0".into(), "1".into(), "∞".into()]).unwrap();
    let mut coeffs = BTreeMap::new();
    coeffs.insert("0".to_string(), qpoly(1, &[&[(5, 3)]], &[&[1]]));
    coeffs.insert("1".to_string(), qpoly(1, &[&[(-5, 4)]], &[&[1]]));
    coeffs.insert("∞".to_string(), qpoly(1, &[&[(-2, 5)]], &[&[1]]));
    PolyDivisor::new(1, tail, curve, coeffs, LocusKind::Complete).unwrap()
}

/// The rank-2 divisor over an elliptic curve with tail the first quadrant,
/// 𝒟_{y₀} = conv{(0,0),(1,−1/2)} + σ and 𝒟_{y₁} = {(1/2,1/2)} + σ,
/// complete locus.
pub fn elliptic_surface() -> PolyDivisor {
    let tail = Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[0, 1])]);
    let curve = Curve::new(1, vec!["y0".into(), "y1".into()]).unwrap();
    let sigma: Vec<&[i64]> = vec![&[1, 0], &[0, 1]];
    let mut coeffs = BTreeMap::new();
    coeffs.insert(
        "y0".to_string(),
        qpoly(2, &[&[(0, 1), (0, 1)], &[(1, 1), (-1, 2)]], &sigma),
    );
    coeffs.insert("y1".to_string(), qpoly(2, &[&[(1, 2), (1, 2)]], &sigma));
    PolyDivisor::new(2, tail, curve, coeffs, LocusKind::Complete).unwrap()
}

/// The rank-2 divisor of the threefold hypersurface t₀t₁ + t₂² + t₃⁵ = 0
/// with its quotient torus action: tail ⟨(1,0),(1,10)⟩ over the projective
/// line, complete locus.
pub fn threefold_hypersurface() -> PolyDivisor {
    let tail = Cone::from_rays(2, &[ivec(&[1, 0]), ivec(&[1, 10])]);
    let curve = Curve::new(0, vec!["0".into(), "1".into(), "∞".into()]).unwrap();
    let sigma: Vec<&[i64]> = vec![&[1, 0], &[1, 10]];
    let mut coeffs = BTreeMap::new();
    coeffs.insert(
        "0".to_string(),
        qpoly(2, &[&[(1, 1), (0, 1)], &[(1, 1), (1, 1)]], &sigma),
    );
    coeffs.insert("1".to_string(), qpoly(2, &[&[(-2, 5), (0, 1)]], &sigma));
    coeffs.insert("∞".to_string(), qpoly(2, &[&[(-1, 2), (0, 1)]], &sigma));
    PolyDivisor::new(2, tail, curve, coeffs, LocusKind::Complete).unwrap()
}

/// Rank-d divisor over a genus-1 curve with tail the first orthant and
/// coefficients nᵢ + σ, one lattice shift per marked point; every shift
/// must lie in the interior of the orthant.  Complete locus.
pub fn toric_tail_family(d: usize, shifts: &[IVec]) -> PolyDivisor {
    let rays: Vec<IVec> = (0..d)
        .map(|i| {
            let mut e = vec![Int::zero(); d];
            e[i] = Int::one();
            e
        })
        .collect();
    let tail = Cone::from_rays(d, &rays);
    let points: Vec<String> = (1..=shifts.len()).map(|i| format!("y{i}")).collect();
    let curve = Curve::new(1, points.clone()).unwrap();
    let mut coeffs = BTreeMap::new();
    for (y, n) in points.iter().zip(shifts) {
        assert!(tail.relint_contains(n), "shift must be interior");
        let p = Polyhedron::point(&ivec_to_qvec(n)).minkowski_sum(&Polyhedron::of_cone(&tail));
        coeffs.insert(y.clone(), p);
    }
    PolyDivisor::new(d, tail, curve, coeffs, LocusKind::Complete).unwrap()
}

/// Rank-d divisor over a genus-1 curve with tail the first orthant and a
/// single coefficient {(1/2,…,1/2)} + σ.  Complete locus.
pub fn half_shift_family(d: usize) -> PolyDivisor {
    let rays: Vec<IVec> = (0..d)
        .map(|i| {
            let mut e = vec![Int::zero(); d];
            e[i] = Int::one();
            e
        })
        .collect();
    let tail = Cone::from_rays(d, &rays);
    let curve = Curve::new(1, vec!["y0".into()]).unwrap();
    let half: QVec = vec![rat(1, 2); d];
    let p = Polyhedron::point(&half).minkowski_sum(&Polyhedron::of_cone(&tail));
    let mut coeffs = BTreeMap::new();
    coeffs.insert("y0".to_string(), p);
    PolyDivisor::new(d, tail, curve, coeffs, LocusKind::Complete).unwrap()
}

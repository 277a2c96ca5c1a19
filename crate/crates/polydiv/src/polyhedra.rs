//! Exact cones, polyhedra and fans.
//!
//! Representation conversions run through one kernel: `h_to_v` turns an
//! inequality system into extremal rays plus lineality by enumerating
//! rank-(k-1) active subsets inside the pointed quotient, and `v_to_h` is its
//! dual.  Everything downstream (faces, duality, Minkowski sums, star
//! subdivisions, Hilbert bases, Newton hulls) reduces to these two plus
//! exact integer linear algebra from [`crate::lattice`].
//!
//! Intended scale: ambient rank ≤ 6 and a handful of facets per cone, which
//! is what divisorial computations on curves need.  No attempt is made to be
//! fast in high dimension.

use crate::lattice::*;
use crate::{Error, Result};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// A convex rational polyhedral cone.
///
/// `rays` are the extremal rays (primitive, sorted); `lines` is a lattice
/// basis of the lineality space (empty exactly when the cone is strictly
/// convex).  `facets` and `eqs` are the cached H-representation: the cone is
/// {x : eqs·x = 0, facets·x ≥ 0}.  Both representations are produced by the
/// same canonicalization, so equality of ray/line data is set equality for
/// strictly convex cones; `set_eq` decides the general case.
#[derive(Debug, Clone)]
pub struct Cone {
    pub ambient: usize,
    pub rays: Vec<IVec>,
    pub lines: Vec<IVec>,
    pub facets: Vec<IVec>,
    pub eqs: Vec<IVec>,
    pub dim: usize,
}

/// Extremal rays + lineality basis of {x : ineqs·x ≥ 0, eqs·x = 0}.
pub fn h_to_v(ambient: usize, ineqs: &[IVec], eqs: &[IVec]) -> (Vec<IVec>, Vec<IVec>) {
    let mut all_rows: Vec<IVec> = ineqs.to_vec();
    all_rows.extend_from_slice(eqs);
    let lines = kernel_basis(&all_rows, ambient);

    // The pointed part lives in the intersection of the equation space with
    // the orthogonal complement of the lineality.
    let mut sub_rows: Vec<IVec> = eqs.to_vec();
    sub_rows.extend(lines.iter().cloned());
    let basis = kernel_basis(&sub_rows, ambient);
    let k = basis.len();
    if k == 0 {
        return (Vec::new(), lines);
    }

    // Inequalities in subspace coordinates.
    let mut sub_ineqs: Vec<IVec> = Vec::new();
    for a in ineqs {
        let row: IVec = basis.iter().map(|b| dot_ii(a, b)).collect();
        if !is_zero_ivec(&row) {
            sub_ineqs.push(row);
        }
    }

    let mut found: BTreeSet<IVec> = BTreeSet::new();
    if k == 1 {
        for dir in [vec![Int::one()], vec![-Int::one()]] {
            if sub_ineqs.iter().all(|a| dot_ii(a, &dir) >= Int::zero()) {
                found.insert(dir);
            }
        }
    } else {
        // Every extremal ray has an active set of rank k-1; enumerate
        // (k-1)-subsets of the inequality rows and keep one-dimensional
        // kernels whose direction satisfies the whole system.
        for subset in (0..sub_ineqs.len()).combinations(k - 1) {
            let rows: Vec<IVec> = subset.iter().map(|&i| sub_ineqs[i].clone()).collect();
            let ker = kernel_basis(&rows, k);
            if ker.len() != 1 {
                continue;
            }
            let v = primitive(&ker[0]).expect("kernel basis vector is nonzero");
            for w in [v.clone(), neg_ivec(&v)] {
                if sub_ineqs.iter().all(|a| dot_ii(a, &w) >= Int::zero()) {
                    found.insert(w);
                }
            }
        }
    }

    let mut rays: Vec<IVec> = found
        .into_iter()
        .map(|w| {
            let amb: IVec = (0..ambient)
                .map(|i| {
                    let mut acc = Int::zero();
                    for (c, b) in w.iter().zip(&basis) {
                        acc += c * &b[i];
                    }
                    acc
                })
                .collect();
            primitive(&amb).expect("extremal ray is nonzero")
        })
        .collect();
    rays.sort();
    rays.dedup();
    (rays, lines)
}

/// Facet inequalities + span equations of cone(gens) + span(lines).
pub fn v_to_h(ambient: usize, gens: &[IVec], lines: &[IVec]) -> (Vec<IVec>, Vec<IVec>) {
    let mut span_rows: Vec<IVec> = gens.to_vec();
    span_rows.extend_from_slice(lines);
    let eqs = kernel_basis(&span_rows, ambient);
    // Facets are the extremal rays of the dual cone cut down to the span.
    let (facets, _dual_lines) = h_to_v(ambient, gens, lines);
    (facets, eqs)
}

impl Cone {
    /// Canonical cone spanned by generators and lines (neither need be
    /// extremal or primitive; the zero cone is `from_generators(d, &[], &[])`).
    pub fn from_generators(ambient: usize, gens: &[IVec], lines: &[IVec]) -> Cone {
        for g in gens.iter().chain(lines) {
            assert_eq!(g.len(), ambient, "generator has wrong ambient rank");
        }
        let gens: Vec<IVec> = gens.iter().filter(|g| !is_zero_ivec(g)).cloned().collect();
        let (facets, eqs) = v_to_h(ambient, &gens, lines);
        let (rays, lines) = h_to_v(ambient, &facets, &eqs);
        let dim = ambient - eqs.len();
        Cone { ambient, rays, lines, facets, eqs, dim }
    }

    pub fn from_rays(ambient: usize, rays: &[IVec]) -> Cone {
        Cone::from_generators(ambient, rays, &[])
    }

    /// Canonical cone {x : ineqs·x ≥ 0, eqs·x = 0}.
    pub fn from_hrep(ambient: usize, ineqs: &[IVec], eqs: &[IVec]) -> Cone {
        let (rays, lines) = h_to_v(ambient, ineqs, eqs);
        Cone::from_generators(ambient, &rays, &lines)
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone::from_generators(ambient, &[], &[])
    }

    pub fn is_strictly_convex(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn contains(&self, p: &[Int]) -> bool {
        self.eqs.iter().all(|e| dot_ii(e, p).is_zero())
            && self.facets.iter().all(|f| !dot_ii(f, p).is_negative())
    }

    pub fn contains_q(&self, p: &[Rat]) -> bool {
        self.eqs.iter().all(|e| dot_iq(e, p).is_zero())
            && self.facets.iter().all(|f| !dot_iq(f, p).is_negative())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other.lines.iter().all(|l| self.contains(l) && self.contains(&neg_ivec(l)))
    }

    /// Set equality via mutual containment.
    pub fn set_eq(&self, other: &Cone) -> bool {
        self.ambient == other.ambient && self.contains_cone(other) && other.contains_cone(self)
    }

    pub fn relint_contains(&self, p: &[Int]) -> bool {
        self.eqs.iter().all(|e| dot_ii(e, p).is_zero())
            && self.facets.iter().all(|f| dot_ii(f, p).is_positive())
    }

    pub fn relint_contains_q(&self, p: &[Rat]) -> bool {
        self.eqs.iter().all(|e| dot_iq(e, p).is_zero())
            && self.facets.iter().all(|f| dot_iq(f, p).is_positive())
    }

    /// A canonical relative-interior lattice point (sum of the primitive
    /// rays; 0 for the zero cone).  Only meaningful for strictly convex cones.
    pub fn relint_point(&self) -> IVec {
        let mut p = vec![Int::zero(); self.ambient];
        for r in &self.rays {
            p = add_ivec(&p, r);
        }
        p
    }

    pub fn dual(&self) -> Cone {
        Cone::from_generators(self.ambient, &self.facets, &self.eqs)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient, other.ambient);
        let ineqs: Vec<IVec> =
            self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<IVec> = self.eqs.iter().chain(&other.eqs).cloned().collect();
        Cone::from_hrep(self.ambient, &ineqs, &eqs)
    }

    /// All faces, including {0} and the cone itself.  Requires strict
    /// convexity (faces of a pointed cone are spanned by the rays they
    /// contain).
    pub fn faces(&self) -> Vec<Cone> {
        assert!(self.is_strictly_convex(), "face enumeration needs a pointed cone");
        let nf = self.facets.len();
        assert!(nf <= 24, "facet count out of the supported desk scale");
        let mut seen: BTreeSet<Vec<IVec>> = BTreeSet::new();
        let mut out = Vec::new();
        for mask in 0..(1u64 << nf) {
            let rayset: Vec<IVec> = self
                .rays
                .iter()
                .filter(|r| {
                    (0..nf).all(|i| mask & (1 << i) == 0 || dot_ii(&self.facets[i], r).is_zero())
                })
                .cloned()
                .collect();
            if seen.insert(rayset.clone()) {
                out.push(Cone::from_rays(self.ambient, &rayset));
            }
        }
        out.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        out
    }

    /// The unique face whose relative interior contains p.
    pub fn face_of_q(&self, p: &[Rat]) -> Result<Cone> {
        if !self.contains_q(p) {
            return Err(Error::NotInCone);
        }
        let rayset: Vec<IVec> = self
            .rays
            .iter()
            .filter(|r| {
                self.facets
                    .iter()
                    .all(|f| !dot_iq(f, p).is_zero() || dot_ii(f, r).is_zero())
            })
            .cloned()
            .collect();
        Ok(Cone::from_rays(self.ambient, &rayset))
    }

    pub fn face_of(&self, p: &[Int]) -> Result<Cone> {
        self.face_of_q(&ivec_to_qvec(p))
    }

    /// Is `face` a face of this cone?
    pub fn has_face(&self, face: &Cone) -> bool {
        if !self.contains_cone(face) {
            return false;
        }
        match self.face_of(&face.relint_point()) {
            Ok(f) => f.set_eq(face),
            Err(_) => false,
        }
    }

    /// Smooth = simplicial + rays extend to a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.is_strictly_convex()
            && self.rays.len() == self.dim
            && is_basis_extendable(&self.rays)
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strictly_convex() && self.rays.len() == self.dim
    }

    /// Sum of facet pairings: a linear functional strictly positive on the
    /// cone minus the origin (pointed, dim ≥ 1), used as the enumeration level.
    pub fn level(&self, p: &[Int]) -> Int {
        let mut acc = Int::zero();
        for f in &self.facets {
            acc += dot_ii(f, p);
        }
        acc
    }
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.set_eq(other)
    }
}
impl Eq for Cone {}

/// The dual cone (free-function form used throughout the crate).
pub fn dual_cone(sigma: &Cone) -> Cone {
    sigma.dual()
}

/// A rational polyhedron conv(vertices) + cone(rays), possibly empty.
///
/// `vertices` empty marks the empty polyhedron.  Vertices and rays are the
/// canonical minimal V-representation; `ineqs`/`eqs` cache the
/// H-representation as rows (a, c) meaning a·x + c ≥ 0 (resp. = 0).
#[derive(Debug, Clone)]
pub struct Polyhedron {
    pub ambient: usize,
    pub vertices: Vec<QVec>,
    pub rays: Vec<IVec>,
    pub ineqs: Vec<(IVec, Int)>,
    pub eqs: Vec<(IVec, Int)>,
}

impl Polyhedron {
    pub fn empty(ambient: usize) -> Polyhedron {
        Polyhedron {
            ambient,
            vertices: Vec::new(),
            rays: Vec::new(),
            // 0 ≥ 1 is infeasible: keeps the H-representation honest.
            ineqs: vec![(vec![Int::zero(); ambient], -Int::one())],
            eqs: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Canonicalize a V-representation via the homogenization cone.
    pub fn from_vrep(ambient: usize, vertices: &[QVec], rays: &[IVec]) -> Polyhedron {
        if vertices.is_empty() {
            return Polyhedron::empty(ambient);
        }
        let mut gens: Vec<IVec> = Vec::new();
        for v in vertices {
            assert_eq!(v.len(), ambient);
            let mut h = v.to_vec();
            h.push(Rat::one());
            let (_, g) = multiplicity(&h).expect("homogenized vertex is nonzero");
            gens.push(g);
        }
        for r in rays {
            assert_eq!(r.len(), ambient);
            let mut g = r.clone();
            g.push(Int::zero());
            gens.push(g);
        }
        let cone = Cone::from_generators(ambient + 1, &gens, &[]);
        assert!(
            cone.is_strictly_convex(),
            "polyhedra containing lines are out of scope"
        );
        Polyhedron::from_homogenization(ambient, &cone)
    }

    fn from_homogenization(ambient: usize, cone: &Cone) -> Polyhedron {
        let mut vertices: Vec<QVec> = Vec::new();
        let mut rec: Vec<IVec> = Vec::new();
        for r in &cone.rays {
            let t = &r[ambient];
            if t.is_zero() {
                rec.push(r[..ambient].to_vec());
            } else {
                assert!(t.is_positive());
                let tq = Rat::from(t.clone());
                vertices.push(r[..ambient].iter().map(|c| Rat::from(c.clone()) / &tq).collect());
            }
        }
        if vertices.is_empty() {
            return Polyhedron::empty(ambient);
        }
        vertices.sort();
        rec.sort();
        let mut ineqs = Vec::new();
        for f in &cone.facets {
            let a = f[..ambient].to_vec();
            if !is_zero_ivec(&a) {
                ineqs.push((a, f[ambient].clone()));
            }
        }
        let mut eqs = Vec::new();
        for e in &cone.eqs {
            let a = e[..ambient].to_vec();
            if !is_zero_ivec(&a) {
                eqs.push((a, e[ambient].clone()));
            }
        }
        Polyhedron { ambient, vertices, rays: rec, ineqs, eqs }
    }

    /// Canonicalize an H-representation; rows are (a, c) for a·x + c ≥ 0
    /// (resp. = 0).  Infeasible systems yield the empty polyhedron.
    pub fn from_hrep(ambient: usize, ineqs: &[(IVec, Int)], eqs: &[(IVec, Int)]) -> Polyhedron {
        let mut hineqs: Vec<IVec> = Vec::new();
        for (a, c) in ineqs {
            let mut row = a.clone();
            row.push(c.clone());
            hineqs.push(row);
        }
        // Homogenization variable is nonnegative.
        let mut t_row = vec![Int::zero(); ambient];
        t_row.push(Int::one());
        hineqs.push(t_row);
        let mut heqs: Vec<IVec> = Vec::new();
        for (a, c) in eqs {
            let mut row = a.clone();
            row.push(c.clone());
            heqs.push(row);
        }
        let cone = Cone::from_hrep(ambient + 1, &hineqs, &heqs);
        if !cone.is_strictly_convex() {
            // A line in the homogenization at height zero means the
            // polyhedron contains a line; out of scope.
            panic!("polyhedra containing lines are out of scope");
        }
        Polyhedron::from_homogenization(ambient, &cone)
    }

    pub fn point(v: &[Rat]) -> Polyhedron {
        Polyhedron::from_vrep(v.len(), &[v.to_vec()], &[])
    }

    /// {0} + σ, the polyhedron of a trivial coefficient.
    pub fn of_cone(sigma: &Cone) -> Polyhedron {
        let zero = vec![Rat::zero(); sigma.ambient];
        Polyhedron::from_vrep(sigma.ambient, &[zero], &sigma.rays)
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        !self.is_empty()
            && self.eqs.iter().all(|(a, c)| (dot_iq(a, p) + Rat::from(c.clone())).is_zero())
            && self
                .ineqs
                .iter()
                .all(|(a, c)| !(dot_iq(a, p) + Rat::from(c.clone())).is_negative())
    }

    pub fn tail(&self) -> Result<Cone> {
        if self.is_empty() {
            return Err(Error::EmptyPolyhedron);
        }
        Ok(Cone::from_rays(self.ambient, &self.rays))
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.ambient, other.ambient);
        if self.is_empty() || other.is_empty() {
            return Polyhedron::empty(self.ambient);
        }
        let mut verts = Vec::new();
        for v in &self.vertices {
            for w in &other.vertices {
                verts.push(add_qvec(v, w));
            }
        }
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        Polyhedron::from_vrep(self.ambient, &verts, &rays)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Polyhedron {
        assert_eq!(self.ambient, other.ambient);
        if self.is_empty() || other.is_empty() {
            return Polyhedron::empty(self.ambient);
        }
        let ineqs: Vec<(IVec, Int)> =
            self.ineqs.iter().chain(&other.ineqs).cloned().collect();
        let eqs: Vec<(IVec, Int)> = self.eqs.iter().chain(&other.eqs).cloned().collect();
        Polyhedron::from_hrep(self.ambient, &ineqs, &eqs)
    }

    pub fn intersect_cone(&self, tau: &Cone) -> Polyhedron {
        assert_eq!(self.ambient, tau.ambient);
        if self.is_empty() {
            return Polyhedron::empty(self.ambient);
        }
        let mut ineqs = self.ineqs.clone();
        for f in &tau.facets {
            ineqs.push((f.clone(), Int::zero()));
        }
        let mut eqs = self.eqs.clone();
        for e in &tau.eqs {
            eqs.push((e.clone(), Int::zero()));
        }
        Polyhedron::from_hrep(self.ambient, &ineqs, &eqs)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }

    /// The homogenization cone in rank ambient+1 (vertices at height 1,
    /// recession rays at height 0).
    pub fn homogenization(&self) -> Cone {
        let mut gens: Vec<IVec> = Vec::new();
        for v in &self.vertices {
            let mut h = v.to_vec();
            h.push(Rat::one());
            let (_, g) = multiplicity(&h).expect("homogenized vertex is nonzero");
            gens.push(g);
        }
        for r in &self.rays {
            let mut g = r.clone();
            g.push(Int::zero());
            gens.push(g);
        }
        Cone::from_generators(self.ambient + 1, &gens, &[])
    }

    /// Is `f` a face of this polyhedron?  The empty polyhedron is a face of
    /// everything; nonempty faces correspond to faces of the homogenization
    /// cone not contained in the height-zero hyperplane.
    pub fn has_face(&self, f: &Polyhedron) -> bool {
        if f.is_empty() {
            return true;
        }
        if self.is_empty() {
            return false;
        }
        self.homogenization().has_face(&f.homogenization())
    }
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.vertices == other.vertices
            && self.rays == other.rays
    }
}
impl Eq for Polyhedron {}

/// Exact feasibility of P ∩ τ ≠ ∅.
pub fn polyhedron_meets_cone(p: &Polyhedron, tau: &Cone) -> bool {
    !p.intersect_cone(tau).is_empty()
}

/// All lattice points of a bounded polyhedron, canonically sorted.
///
/// Enumeration is by nested Fourier–Motzkin bounds: variable k is scanned
/// between exact rational bounds computed from the projection of the
/// H-representation to the first k coordinates, so no box points outside the
/// polytope are ever visited (up to projection slack).
pub fn lattice_points(p: &Polyhedron) -> Result<Vec<IVec>> {
    if p.is_empty() {
        return Ok(Vec::new());
    }
    if !p.is_bounded() {
        return Err(Error::Unbounded);
    }
    let d = p.ambient;
    // Assemble rows (a, c): a·x + c ≥ 0, splitting equations.
    let mut rows: Vec<(IVec, Int)> = p.ineqs.clone();
    for (a, c) in &p.eqs {
        rows.push((a.clone(), c.clone()));
        rows.push((neg_ivec(a), -c.clone()));
    }
    // systems[k] constrains x_1..x_k.
    let mut systems: Vec<Vec<(IVec, Int)>> = vec![Vec::new(); d + 1];
    systems[d] = normalize_rows(rows, d);
    for k in (1..=d).rev() {
        let projected = fm_eliminate_last(&systems[k], k);
        systems[k - 1] = normalize_rows(projected, k - 1);
    }
    // Infeasibility shows up as a constant row 0·x + c ≥ 0 with c < 0.
    for sys in &systems {
        for (a, c) in sys {
            if is_zero_ivec(a) && c.is_negative() {
                return Ok(Vec::new());
            }
        }
    }
    let mut out = Vec::new();
    let mut prefix: IVec = Vec::new();
    enumerate_rec(&systems, d, &mut prefix, &mut out)?;
    out.sort();
    Ok(out)
}

fn normalize_rows(rows: Vec<(IVec, Int)>, k: usize) -> Vec<(IVec, Int)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (a, c) in rows {
        debug_assert_eq!(a.len(), k);
        if is_zero_ivec(&a) && !c.is_negative() {
            continue; // trivially true
        }
        let mut full = a.clone();
        full.push(c.clone());
        let g = content(&full);
        let row: (IVec, Int) = if g.is_zero() || g.is_one() {
            (a, c)
        } else {
            (a.iter().map(|x| x / &g).collect(), &c / &g)
        };
        let mut key = row.0.clone();
        key.push(row.1.clone());
        if seen.insert(key) {
            out.push(row);
        }
    }
    out
}

/// Fourier–Motzkin elimination of the last of k variables.
fn fm_eliminate_last(rows: &[(IVec, Int)], k: usize) -> Vec<(IVec, Int)> {
    let mut zero = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (a, c) in rows {
        let coef = &a[k - 1];
        if coef.is_zero() {
            zero.push((a[..k - 1].to_vec(), c.clone()));
        } else if coef.is_positive() {
            pos.push((a, c));
        } else {
            neg.push((a, c));
        }
    }
    let mut out = zero;
    for (ap, cp) in &pos {
        for (an, cn) in &neg {
            let wp = ap[k - 1].clone();
            let wn = -an[k - 1].clone();
            // wn·(pos row) + wp·(neg row) cancels x_k.
            let a: IVec = (0..k - 1)
                .map(|i| &wn * &ap[i] + &wp * &an[i])
                .collect();
            let c = &wn * *cp + &wp * *cn;
            out.push((a, c));
        }
    }
    out
}

fn enumerate_rec(
    systems: &[Vec<(IVec, Int)>],
    d: usize,
    prefix: &mut IVec,
    out: &mut Vec<IVec>,
) -> Result<()> {
    let k = prefix.len();
    if k == d {
        out.push(prefix.clone());
        return Ok(());
    }
    // Bounds on x_{k+1} from systems[k+1] with x_1..x_k fixed.
    let mut lo: Option<Int> = None;
    let mut hi: Option<Int> = None;
    let mut ok = true;
    for (a, c) in &systems[k + 1] {
        let coef = &a[k];
        let mut rest = c.clone();
        for i in 0..k {
            rest += &a[i] * &prefix[i];
        }
        if coef.is_zero() {
            if rest.is_negative() {
                ok = false;
                break;
            }
        } else if coef.is_positive() {
            // x ≥ -rest / coef
            let bound = ceil_div(&-rest, coef);
            lo = Some(match lo {
                Some(l) if l >= bound => l,
                _ => bound,
            });
        } else {
            // x ≤ rest / (-coef)
            let bound = floor_div(&rest, &-coef.clone());
            hi = Some(match hi {
                Some(h) if h <= bound => h,
                _ => bound,
            });
        }
    }
    if !ok {
        return Ok(());
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::Unbounded);
    };
    let mut x = lo;
    while x <= hi {
        prefix.push(x.clone());
        enumerate_rec(systems, d, prefix, out)?;
        prefix.pop();
        x += 1;
    }
    Ok(())
}

fn floor_div(a: &Int, b: &Int) -> Int {
    debug_assert!(b.is_positive());
    num_integer::Integer::div_floor(a, b)
}

fn ceil_div(a: &Int, b: &Int) -> Int {
    debug_assert!(b.is_positive());
    num_integer::Integer::div_ceil(a, b)
}

/// A fan: a finite collection of strictly convex cones closed under faces,
/// pairwise intersecting in common faces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    pub ambient: usize,
    pub cones: Vec<Cone>,
}

impl Fan {
    /// Build the fan generated by the given cones (faces are added, duplicate
    /// and non-maximal input is absorbed).  Validates the fan axioms on the
    /// maximal cones.
    pub fn from_cones(ambient: usize, cones: &[Cone]) -> Result<Fan> {
        let mut seen: BTreeSet<Vec<IVec>> = BTreeSet::new();
        let mut all: Vec<Cone> = Vec::new();
        for c in cones {
            assert_eq!(c.ambient, ambient);
            if !c.is_strictly_convex() {
                return Err(Error::NotStrictlyConvex);
            }
            for f in c.faces() {
                if seen.insert(f.rays.clone()) {
                    all.push(f);
                }
            }
        }
        if all.is_empty() {
            all.push(Cone::zero(ambient));
        }
        all.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.rays.cmp(&b.rays)));
        let fan = Fan { ambient, cones: all };
        fan.validate()?;
        Ok(fan)
    }

    /// Fan of all faces of one cone.
    pub fn face_fan(cone: &Cone) -> Result<Fan> {
        Fan::from_cones(cone.ambient, std::slice::from_ref(cone))
    }

    fn validate(&self) -> Result<()> {
        let maxi = self.maximal_cones();
        for i in 0..maxi.len() {
            for j in i + 1..maxi.len() {
                let inter = maxi[i].intersect(maxi[j]);
                if !maxi[i].has_face(&inter) || !maxi[j].has_face(&inter) {
                    return Err(Error::invalid(
                        "cones do not intersect in a common face".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn maximal_cones(&self) -> Vec<&Cone> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d.dim > c.dim && d.contains_cone(c))
            })
            .collect()
    }

    pub fn supports_point(&self, p: &[Int]) -> bool {
        self.cones.iter().any(|c| c.contains(p))
    }

    /// The unique cone whose relative interior contains p, if p is in the
    /// support.
    pub fn cone_of(&self, p: &[Int]) -> Option<&Cone> {
        self.cones.iter().find(|c| c.relint_contains(p))
    }

    pub fn has_cone(&self, c: &Cone) -> bool {
        self.cones.iter().any(|d| d.set_eq(c))
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| c.is_smooth())
    }

    /// The subfan of cones contained in `within`.
    pub fn restrict_to(&self, within: &Cone) -> Vec<&Cone> {
        self.cones.iter().filter(|c| within.contains_cone(c)).collect()
    }
}

/// Star subdivision of a fan at a primitive lattice point of its support.
///
/// Cones containing the center are replaced by the joins of the center with
/// their faces not containing it; all other cones are preserved.
pub fn star_subdivision(fan: &Fan, center: &[Int]) -> Result<Fan> {
    let center = primitive(center)?;
    if !fan.supports_point(&center) {
        return Err(Error::invalid("star center outside the fan support".to_string()));
    }
    let mut new_cones: Vec<Cone> = Vec::new();
    for sigma in fan.maximal_cones() {
        if !sigma.contains(&center) {
            new_cones.push(sigma.clone());
            continue;
        }
        for tau in sigma.faces() {
            if tau.contains(&center) {
                continue;
            }
            let mut gens = tau.rays.clone();
            gens.push(center.clone());
            new_cones.push(Cone::from_rays(fan.ambient, &gens));
        }
    }
    Fan::from_cones(fan.ambient, &new_cones)
}

/// Triangulate a strictly convex cone into simplicial subcones sharing its
/// rays (recursive stellar subdivision at ray sums).
fn triangulate(sigma: &Cone) -> Vec<Vec<IVec>> {
    if sigma.rays.len() == sigma.dim {
        return vec![sigma.rays.clone()];
    }
    let center = primitive(&sigma.relint_point()).expect("positive-dimensional cone");
    let fan = Fan::face_fan(sigma).expect("cone faces always form a fan");
    let star = star_subdivision(&fan, &center).expect("stellar center is interior");
    let mut out = Vec::new();
    for c in star.maximal_cones() {
        out.extend(triangulate(c));
    }
    out
}

/// The minimal generating set of the semigroup σ ∩ N.
pub fn hilbert_basis(sigma: &Cone) -> Result<Vec<IVec>> {
    if !sigma.is_strictly_convex() {
        return Err(Error::NotStrictlyConvex);
    }
    if sigma.dim == 0 {
        return Ok(Vec::new());
    }
    let mut candidates: BTreeSet<IVec> = sigma.rays.iter().cloned().collect();
    for simplex in triangulate(sigma) {
        for p in parallelepiped_points(sigma.ambient, &simplex) {
            candidates.insert(p);
        }
    }
    // Irreducibility sieve in increasing level order: an element is
    // reducible iff subtracting an already-kept element lands in σ ∩ N.
    let mut ordered: Vec<IVec> = candidates.into_iter().collect();
    ordered.sort_by(|a, b| sigma.level(a).cmp(&sigma.level(b)).then_with(|| a.cmp(b)));
    let mut kept: Vec<IVec> = Vec::new();
    for p in ordered {
        let reducible = kept.iter().any(|t| {
            let diff = sub_ivec(&p, t);
            !is_zero_ivec(&diff) && sigma.contains(&diff)
        });
        if !reducible {
            kept.push(p);
        }
    }
    kept.sort();
    Ok(kept)
}

/// Nonzero lattice points in the half-open parallelepiped
/// {Σ λᵢuᵢ : 0 ≤ λᵢ < 1} of a linearly independent family.
fn parallelepiped_points(ambient: usize, gens: &[IVec]) -> Vec<IVec> {
    let k = gens.len();
    let mut lo = vec![Int::zero(); ambient];
    let mut hi = vec![Int::zero(); ambient];
    for g in gens {
        for i in 0..ambient {
            if g[i].is_negative() {
                lo[i] += &g[i];
            } else {
                hi[i] += &g[i];
            }
        }
    }
    // Equation rows for solving p = Σ λⱼ uⱼ.
    let rows: Vec<QVec> = (0..ambient)
        .map(|i| gens.iter().map(|g| Rat::from(g[i].clone())).collect())
        .collect();
    let mut out = Vec::new();
    let mut p = lo.clone();
    'scan: loop {
        if !is_zero_ivec(&p) {
            let rhs: Vec<Rat> = ivec_to_qvec(&p);
            if let Some(lambda) = solve_rational(&rows, &rhs) {
                // Verify the solution exactly (the point must lie in the span).
                let consistent = (0..ambient).all(|i| {
                    let mut acc = Rat::zero();
                    for (l, g) in lambda.iter().zip(gens) {
                        acc += l * Rat::from(g[i].clone());
                    }
                    acc == rhs[i]
                });
                if consistent
                    && lambda.len() == k
                    && lambda
                        .iter()
                        .all(|l| !l.is_negative() && l < &Rat::one())
                {
                    out.push(p.clone());
                }
            }
        }
        // Odometer increment over the bounding box.
        for i in 0..ambient {
            p[i] += 1;
            if p[i] <= hi[i] {
                continue 'scan;
            }
            p[i] = lo[i].clone();
        }
        break;
    }
    out
}

/// A face of the Newton hull Γ(σ), described by its vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFace {
    pub vertices: Vec<QVec>,
    pub rays: Vec<IVec>,
    pub dim: usize,
    pub bounded: bool,
}

/// The Newton hull Γ(σ) = conv(σ ∩ N ∖ {0}) = conv(hilbert_basis(σ)) + σ:
/// returns all lattice points on the union of bounded faces together with
/// the bounded-face descriptions.
pub fn newton_hull(sigma: &Cone) -> Result<(Vec<IVec>, Vec<HullFace>)> {
    if sigma.dim == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let hb = hilbert_basis(sigma)?;
    let verts: Vec<QVec> = hb.iter().map(|v| ivec_to_qvec(v)).collect();
    let gamma = Polyhedron::from_vrep(sigma.ambient, &verts, &sigma.rays);
    let faces = polyhedron_faces(&gamma);
    let mut points: BTreeSet<IVec> = BTreeSet::new();
    let mut bounded = Vec::new();
    for f in faces {
        if !f.bounded {
            continue;
        }
        let poly = Polyhedron::from_vrep(sigma.ambient, &f.vertices, &[]);
        for p in lattice_points(&poly)? {
            points.insert(p);
        }
        bounded.push(f);
    }
    Ok((points.into_iter().collect(), bounded))
}

/// All proper and improper faces of a polyhedron, from active subsets of the
/// cached facet inequalities.
pub fn polyhedron_faces(p: &Polyhedron) -> Vec<HullFace> {
    if p.is_empty() {
        return Vec::new();
    }
    let m = p.ineqs.len();
    assert!(m <= 24, "facet count out of the supported desk scale");
    let mut seen: BTreeSet<(Vec<QVec>, Vec<IVec>)> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0..(1u64 << m) {
        let active = |idx: usize| mask & (1 << idx) != 0;
        let verts: Vec<QVec> = p
            .vertices
            .iter()
            .filter(|v| {
                (0..m).all(|i| {
                    !active(i) || {
                        let (a, c) = &p.ineqs[i];
                        (dot_iq(a, v) + Rat::from(c.clone())).is_zero()
                    }
                })
            })
            .cloned()
            .collect();
        if verts.is_empty() {
            continue;
        }
        let rays: Vec<IVec> = p
            .rays
            .iter()
            .filter(|r| (0..m).all(|i| !active(i) || dot_ii(&p.ineqs[i].0, r).is_zero()))
            .cloned()
            .collect();
        if !seen.insert((verts.clone(), rays.clone())) {
            continue;
        }
        let dim = face_dim(&verts, &rays);
        let bounded = rays.is_empty();
        out.push(HullFace { vertices: verts, rays, dim, bounded });
    }
    out
}

fn face_dim(verts: &[QVec], rays: &[IVec]) -> usize {
    let base = &verts[0];
    let mut dirs: Vec<IVec> = Vec::new();
    for v in &verts[1..] {
        let diff = sub_qvec(v, base);
        if !is_zero_qvec(&diff) {
            let (_, iv) = multiplicity(&diff).expect("nonzero direction");
            dirs.push(iv);
        }
    }
    dirs.extend(rays.iter().cloned());
    rank(&dirs)
}

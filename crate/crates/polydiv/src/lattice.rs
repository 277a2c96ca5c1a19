//! Arbitrary-precision lattice primitives.
//!
//! Vectors are plain `Vec<Int>` / `Vec<Rat>` values with helper functions;
//! everything is immutable and pure.  The module provides primitive vectors,
//! multiplicities of rational points, Smith normal form with transformation
//! matrices, basis-extension tests, and the exact linear algebra (rational
//! solving, integer kernels) that the polyhedral layer is built on.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IVec = Vec<Int>;
pub type QVec = Vec<Rat>;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Build an integer vector from machine integers (test/plumbing helper).
pub fn ivec(coords: &[i64]) -> IVec {
    coords.iter().map(|&c| Int::from(c)).collect()
}

pub fn qvec(coords: &[(i64, i64)]) -> QVec {
    coords.iter().map(|&(n, d)| rat(n, d)).collect()
}

pub fn ivec_to_qvec(v: &[Int]) -> QVec {
    v.iter().map(|c| Rat::from(c.clone())).collect()
}

pub fn is_zero_ivec(v: &[Int]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn is_zero_qvec(v: &[Rat]) -> bool {
    v.iter().all(|c| c.is_zero())
}

pub fn add_ivec(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_ivec(a: &[Int], b: &[Int]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_ivec(a: &[Int]) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale_ivec(k: &Int, a: &[Int]) -> IVec {
    a.iter().map(|x| k * x).collect()
}

pub fn add_qvec(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_qvec(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_qvec(k: &Rat, a: &[Rat]) -> QVec {
    a.iter().map(|x| k * x).collect()
}

pub fn dot_ii(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Int::zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub fn dot_iq(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc += Rat::from(x.clone()) * y;
    }
    acc
}

/// Lexicographic comparison, the canonical vector order used for sorting.
pub fn lex_cmp(a: &[Int], b: &[Int]) -> std::cmp::Ordering {
    a.cmp(b)
}

/// The gcd of all coordinates; positive unless the vector is zero.
pub fn content(v: &[Int]) -> Int {
    let mut g = Int::zero();
    for c in v {
        g = g.gcd(c);
    }
    g
}

/// v divided by the gcd of its coordinates.  Direction is preserved.
pub fn primitive(v: &[Int]) -> Result<IVec> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|c| c / &g).collect())
}

/// Least positive integer μ with μ·v integral, together with μ·v.
///
/// μ·v clears denominators but is not reduced further: a caller wanting a
/// primitive vector composes with [`primitive`].
pub fn multiplicity(v: &[Rat]) -> Result<(Int, IVec)> {
    if is_zero_qvec(v) {
        return Err(Error::ZeroVector);
    }
    let mut mu = Int::one();
    for c in v {
        mu = mu.lcm(c.denom());
    }
    let scaled = v
        .iter()
        .map(|c| {
            let r = c * Rat::from(mu.clone());
            debug_assert!(r.denom().is_one());
            r.numer().clone()
        })
        .collect();
    Ok((mu, scaled))
}

/// Dense integer matrix, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<IVec>,
}

impl IMat {
    pub fn from_rows(rows: Vec<IVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IMat { rows: r, cols: c, data: rows }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        IMat { rows: n, cols: n, data }
    }

    pub fn zero(r: usize, c: usize) -> Self {
        IMat { rows: r, cols: c, data: vec![vec![Int::zero(); c]; r] }
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self.data[i][k] * &other.data[k][j];
                    out.data[i][j] += t;
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for row in &mut self.data {
            row.swap(a, b);
        }
    }

    /// row[a] += k * row[b]
    fn add_row(&mut self, a: usize, b: usize, k: &Int) {
        for j in 0..self.cols {
            let t = k * &self.data[b][j];
            self.data[a][j] += t;
        }
    }

    /// col[a] += k * col[b]
    fn add_col(&mut self, a: usize, b: usize, k: &Int) {
        for row in &mut self.data {
            let t = k * &row[b];
            row[a] += t;
        }
    }

    fn neg_row(&mut self, a: usize) {
        for x in &mut self.data[a] {
            *x = -std::mem::take(x);
        }
    }
}

/// Smith normal form: returns (S, U, V) with U·M·V = S, U and V unimodular,
/// S diagonal with nonnegative entries satisfying s₁ | s₂ | …
pub fn smith_normal_form(m: &IMat) -> (IMat, IMat, IMat) {
    let mut s = m.clone();
    let mut u = IMat::identity(m.rows);
    let mut v = IMat::identity(m.cols);
    let n = m.rows.min(m.cols);

    for t in 0..n {
        loop {
            // Locate the nonzero entry of smallest absolute value in the
            // remaining block and move it to the pivot position.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..s.rows {
                for j in t..s.cols {
                    if !s.data[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| s.data[i][j].abs() < s.data[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != t {
                s.swap_rows(pi, t);
                u.swap_rows(pi, t);
            }
            if pj != t {
                s.swap_cols(pj, t);
                v.swap_cols(pj, t);
            }

            // Reduce column and row t by the pivot.
            let mut clean = true;
            for i in t + 1..s.rows {
                if !s.data[i][t].is_zero() {
                    let q = div_nearest(&s.data[i][t], &s.data[t][t]);
                    if !q.is_zero() {
                        let k = -q;
                        s.add_row(i, t, &k);
                        u.add_row(i, t, &k);
                    }
                    if !s.data[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..s.cols {
                if !s.data[t][j].is_zero() {
                    let q = div_nearest(&s.data[t][j], &s.data[t][t]);
                    if !q.is_zero() {
                        let k = -q;
                        s.add_col(j, t, &k);
                        v.add_col(j, t, &k);
                    }
                    if !s.data[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }

            // Row/col t clean.  Enforce divisibility of the remaining block.
            let mut fixed = false;
            'outer: for i in t + 1..s.rows {
                for j in t + 1..s.cols {
                    if !(&s.data[i][j] % &s.data[t][t]).is_zero() {
                        s.add_row(t, i, &Int::one());
                        u.add_row(t, i, &Int::one());
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if t < n && s.data[t][t].is_negative() {
            s.neg_row(t);
            u.neg_row(t);
        }
    }
    // Normalize signs of any trailing pivots (all should be handled above).
    for t in 0..n {
        if s.data[t][t].is_negative() {
            s.neg_row(t);
            u.neg_row(t);
        }
    }
    // Final diagonal sign sweep done; zero entries off diagonal guaranteed by
    // the loop.  Sanity-check the defining identity in debug builds.
    debug_assert_eq!(u.mul(m).mul(&v), s);
    (s, u, v)
}

/// Rounded division used to shrink remainders fast in the SNF loop.
fn div_nearest(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    // Adjust so that |a - q*b| <= |b|/2 (not required for correctness, only
    // for speed; plain Euclidean division would terminate as well).
    let two_r: Int = &r * 2;
    if two_r.abs() > b.abs() {
        if (r.is_negative() && b.is_negative()) || (!r.is_negative() && !b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Diagonal of the Smith normal form, without the transformations.
pub fn smith_diagonal(m: &IMat) -> Vec<Int> {
    let (s, _, _) = smith_normal_form(m);
    (0..s.rows.min(s.cols)).map(|i| s.data[i][i].clone()).collect()
}

/// Do the vectors extend to a ℤ-basis of the ambient lattice?
///
/// True iff they are linearly independent and the stacked matrix has all
/// Smith invariants equal to 1.  Dependent input returns false.
pub fn is_basis_extendable(vectors: &[IVec]) -> bool {
    if vectors.is_empty() {
        return true;
    }
    let m = IMat::from_rows(vectors.to_vec());
    let diag = smith_diagonal(&m);
    let ones = diag.iter().filter(|d| d.is_one()).count();
    ones == vectors.len()
}

/// Rank over ℚ of a list of integer rows.
pub fn rank(rows: &[IVec]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = IMat::from_rows(rows.to_vec());
    smith_diagonal(&m).iter().filter(|d| !d.is_zero()).count()
}

/// Basis of the saturated kernel lattice {x ∈ ℤ^d : R·x = 0}.
///
/// Computed from the Smith decomposition: with U·R·V = S, the kernel is
/// spanned by the columns of V paired with zero invariants.
pub fn kernel_basis(rows: &[IVec], dim: usize) -> Vec<IVec> {
    if rows.is_empty() {
        return IMat::identity(dim).data;
    }
    assert!(rows.iter().all(|r| r.len() == dim));
    let m = IMat::from_rows(rows.to_vec());
    let (s, _, v) = smith_normal_form(&m);
    let mut basis = Vec::new();
    for j in 0..dim {
        let sv = if j < s.rows { s.data[j][j].clone() } else { Int::zero() };
        if sv.is_zero() {
            basis.push((0..dim).map(|i| v.data[i][j].clone()).collect());
        }
    }
    basis
}

/// Solve A·x = b exactly over ℚ (A given as rows of rational vectors).
/// Returns None when inconsistent; when underdetermined, returns one
/// solution (free variables set to zero).
pub fn solve_rational(a: &[QVec], b: &[Rat]) -> Option<QVec> {
    let rows = a.len();
    if rows == 0 {
        return Some(Vec::new());
    }
    let cols = a[0].len();
    let mut m: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in &mut m[r] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    // Inconsistency: zero row with nonzero rhs.
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[row][cols].clone();
    }
    Some(x)
}

/// Parse the canonical textual rational form: optional sign, digits,
/// optional "/" and positive digits.  No whitespace allowed.
pub fn parse_rat(text: &str) -> Result<Rat> {
    let bad = || Error::invalid(format!("malformed rational {text:?}"));
    let (num_s, den_s) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: Int = num_s.parse().map_err(|_| bad())?;
    let den: Int = match den_s {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => Int::one(),
    };
    if den <= Int::zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Canonical textual form "p/q", with "/q" omitted when q = 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

//! Exact integer linear algebra: Smith normal form with unimodular
//! transforms, kernels and images, and finitely generated abelian groups in
//! canonical form.
//!
//! Everything here works over arbitrary-precision integers. Matrices at this
//! layer are dense; the chain-level callers are desk scale (a few hundred
//! rows) and clarity beats asymptotics.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from `i64` rows; panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntegerMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, value) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*value);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = IntegerMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntegerMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, rhs.rows, "dimension mismatch in hstack");
        IntegerMatrix::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                rhs[(i, j - self.cols)].clone()
            }
        })
    }

    /// Columns selected by `keep`, in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> IntegerMatrix {
        IntegerMatrix::from_fn(self.rows, keep.len(), |i, j| self[(i, keep[j])].clone())
    }

    /// Rows selected by `keep`, in the given order.
    pub fn select_rows(&self, keep: &[usize]) -> IntegerMatrix {
        IntegerMatrix::from_fn(keep.len(), self.cols, |i, j| self[(keep[i], j)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] += q * row[j]
    fn row_add(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = &self[(j, c)] * q;
            self[(i, c)] += t;
        }
    }

    /// col[j] += q * col[i]
    fn col_add(&mut self, j: usize, i: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = &self[(r, i)] * q;
            self[(r, j)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -&self[(i, c)];
            self[(i, c)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntegerMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Independent of the Smith normal form code path; used as the oracle side of
/// unimodularity checks.
pub fn determinant(m: &IntegerMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
            a[(i, k)] = BigInt::zero();
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// Smith normal form `D = U * A * V` with unimodular `U`, `V` and their exact
/// inverses, `D` diagonal with `d1 | d2 | ...`, all diagonal entries >= 0.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// The nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Re-multiplies the decomposition and checks all stated invariants.
    pub fn verify(&self, a: &IntegerMatrix) -> bool {
        if self.u.mul(a).mul(&self.v) != self.d {
            return false;
        }
        if self.u.mul(&self.u_inv) != IntegerMatrix::identity(a.rows()) {
            return false;
        }
        if self.v.mul(&self.v_inv) != IntegerMatrix::identity(a.cols()) {
            return false;
        }
        if !determinant(&self.u).abs().is_one() || !determinant(&self.v).abs().is_one() {
            return false;
        }
        // diagonal, nonnegative, divisibility chain
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<&BigInt> = (0..self.d.rows().min(self.d.cols()))
            .map(|i| &self.d[(i, i)])
            .collect();
        for w in diag.windows(2) {
            if w[0].is_negative() || (!w[0].is_zero() && !(w[1] % w[0]).is_zero()) {
                return false;
            }
            if w[0].is_zero() && !w[1].is_zero() {
                return false;
            }
        }
        if let Some(last) = diag.last() {
            if last.is_negative() {
                return false;
            }
        }
        true
    }
}

struct SmithWorkspace {
    d: IntegerMatrix,
    u: IntegerMatrix,
    u_inv: IntegerMatrix,
    v: IntegerMatrix,
    v_inv: IntegerMatrix,
}

impl SmithWorkspace {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[i] += q * row[j], kept consistent on U and its inverse.
    fn row_add(&mut self, i: usize, j: usize, q: &BigInt) {
        self.d.row_add(i, j, q);
        self.u.row_add(i, j, q);
        let neg = -q;
        self.u_inv.col_add(j, i, &neg);
    }

    /// col[j] += q * col[i], kept consistent on V and its inverse.
    fn col_add(&mut self, j: usize, i: usize, q: &BigInt) {
        self.d.col_add(j, i, q);
        self.v.col_add(j, i, q);
        let neg = -q;
        self.v_inv.row_add(i, j, &neg);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Smallest nonzero |entry| in the trailing block at (t,t), row-major ties.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let e = &self.d[(i, j)];
                if e.is_zero() {
                    continue;
                }
                let a = e.abs();
                match &best {
                    Some((m, _, _)) if *m <= a => {}
                    _ => best = Some((a, i, j)),
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Computes the Smith normal form of `a` by gcd-driven row/column elimination
/// with the smallest-magnitude pivot rule. Deterministic for equal inputs.
pub fn smith(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = SmithWorkspace {
        d: a.clone(),
        u: IntegerMatrix::identity(m),
        u_inv: IntegerMatrix::identity(m),
        v: IntegerMatrix::identity(n),
        v_inv: IntegerMatrix::identity(n),
    };
    let steps = m.min(n);
    'diag: for t in 0..steps {
        let Some((pi, pj)) = w.pivot(t) else {
            break 'diag;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        'reduce: loop {
            // Clear the column under the pivot. A nonzero remainder becomes
            // the new, strictly smaller pivot.
            for i in t + 1..m {
                if w.d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&w.d[(i, t)] / &w.d[(t, t)]);
                if !q.is_zero() {
                    w.row_add(i, t, &q);
                }
                if !w.d[(i, t)].is_zero() {
                    w.swap_rows(t, i);
                    continue 'reduce;
                }
            }
            // Clear the row right of the pivot.
            for j in t + 1..n {
                if w.d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&w.d[(t, j)] / &w.d[(t, t)]);
                if !q.is_zero() {
                    w.col_add(j, t, &q);
                }
                if !w.d[(t, j)].is_zero() {
                    w.swap_cols(t, j);
                    continue 'reduce;
                }
            }
            // Pivot divides its row and column; enforce divisibility of the
            // trailing block so the diagonal forms a chain.
            let offender = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&w.d[(i, j)] % &w.d[(t, t)]).is_zero());
            if let Some((i, _)) = offender {
                let one = BigInt::one();
                w.row_add(t, i, &one);
                continue 'reduce;
            }
            break 'reduce;
        }
        if w.d[(t, t)].is_negative() {
            w.negate_row(t);
        }
    }
    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        d: w.d,
        v: w.v,
        v_inv: w.v_inv,
    }
}

/// Rank over the rationals: the number of nonzero invariant factors.
pub fn rank_q(a: &IntegerMatrix) -> usize {
    smith(a).rank()
}

/// Solves `A x = b` over the integers. Returns `None` when no integer
/// solution exists.
pub fn solve(a: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in solve");
    let s = smith(a);
    let c = s.u.mul_vec(b);
    let rank = s.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < rank {
            let d = &s.d[(i, i)];
            let (q, r) = ci.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// Does `b` lie in the column span of `a` over the integers?
pub fn in_image(a: &IntegerMatrix, b: &[BigInt]) -> bool {
    solve(a, b).is_some()
}

/// Finitely generated abelian group in canonical form: a free rank plus
/// invariant factors `d1 | d2 | ...`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Canonicalizes an arbitrary list of cyclic orders: factors of 1 are
    /// dropped and the rest are merged into a divisibility chain.
    pub fn from_parts(free_rank: usize, torsion: Vec<BigInt>) -> Self {
        let mut g = AbelianGroup { free_rank, torsion };
        g.normalize();
        g
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// dim over Q after rationalization; torsion dies.
    pub fn rational_dim(&self) -> usize {
        self.free_rank
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend(other.torsion.iter().cloned());
        AbelianGroup::from_parts(self.free_rank + other.free_rank, torsion)
    }

    /// Tensor product over Z, from the bilinear rules
    /// `Z ⊗ A = A`, `Z/a ⊗ Z/b = Z/gcd(a,b)`.
    pub fn tensor(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = Vec::new();
        for d in &self.torsion {
            for _ in 0..other.free_rank {
                torsion.push(d.clone());
            }
        }
        for e in &other.torsion {
            for _ in 0..self.free_rank {
                torsion.push(e.clone());
            }
        }
        for d in &self.torsion {
            for e in &other.torsion {
                torsion.push(d.gcd(e));
            }
        }
        AbelianGroup::from_parts(self.free_rank * other.free_rank, torsion)
    }

    /// Rebuilds the invariant-factor chain from the prime factorizations of
    /// the stored cyclic orders.
    fn normalize(&mut self) {
        use std::collections::BTreeMap;
        let mut by_prime: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
        for d in &self.torsion {
            assert!(
                !d.is_zero() && !d.is_negative(),
                "cyclic order must be positive"
            );
            for (p, e) in factorize(d) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let chain_len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = vec![BigInt::one(); chain_len];
        for (p, mut exps) in by_prime {
            exps.sort_unstable();
            let offset = chain_len - exps.len();
            for (k, e) in exps.into_iter().enumerate() {
                chain[offset + k] *= p.pow(e);
            }
        }
        chain.retain(|d| !d.is_one());
        self.torsion = chain;
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Trial-division factorization; cyclic orders in this crate stay tiny.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Kernel/image data for one degree of a two-step complex
/// `Z^{n_in} --d_in--> Z^ambient --d_out--> Z^{n_out}`.
///
/// This is the one audited code path for every quotient computation in the
/// crate: plain homology, relative homology, connecting maps and exactness
/// certificates all go through it.
#[derive(Clone, Debug)]
pub struct KernelPresentation {
    /// Dimension of the middle term.
    pub ambient: usize,
    /// Rank of `d_out`.
    pub rank: usize,
    /// Columns form a lattice basis of `ker d_out` (ambient x k).
    pub kernel_basis: IntegerMatrix,
    /// Inverse of the Smith `V` of `d_out`; rows `rank..` read off kernel
    /// coordinates.
    v_inv: IntegerMatrix,
    /// Coordinates of the columns of `d_in` in the kernel basis (k x n_in).
    pub relations: IntegerMatrix,
    /// `ker d_out / im d_in` in canonical form.
    pub group: AbelianGroup,
}

impl KernelPresentation {
    /// Kernel dimension.
    pub fn kernel_dim(&self) -> usize {
        self.ambient - self.rank
    }

    /// Coordinates of an ambient chain in the kernel basis, or `None` if the
    /// chain is not a cycle.
    pub fn coordinates(&self, chain: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(
            chain.len(),
            self.ambient,
            "chain has wrong ambient dimension"
        );
        let y = self.v_inv.mul_vec(chain);
        if y[..self.rank].iter().any(|v| !v.is_zero()) {
            return None;
        }
        Some(y[self.rank..].to_vec())
    }
}

/// Presents `ker d_out / im d_in` with explicit bases.
///
/// Requires `d_out * d_in = 0` and matching dimensions.
pub fn kernel_presentation(
    d_in: &IntegerMatrix,
    d_out: &IntegerMatrix,
) -> Result<KernelPresentation> {
    if d_out.cols() != d_in.rows() {
        return Err(Error::NotAComplex(format!(
            "d_out is {}x{} but d_in is {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::NotAComplex("d_out * d_in != 0".to_string()));
    }
    let ambient = d_out.cols();
    let s = smith(d_out);
    let rank = s.rank();
    let kernel_cols: Vec<usize> = (rank..ambient).collect();
    let kernel_basis = s.v.select_columns(&kernel_cols);
    let v_inv = s.v_inv;
    let k = ambient - rank;
    let mut relations = IntegerMatrix::zero(k, d_in.cols());
    for j in 0..d_in.cols() {
        let y = v_inv.mul_vec(&d_in.column(j));
        debug_assert!(
            y[..rank].iter().all(Zero::is_zero),
            "d_in column is not a cycle"
        );
        for i in 0..k {
            relations[(i, j)] = y[rank + i].clone();
        }
    }
    let rel_smith = smith(&relations);
    let torsion = rel_smith.invariant_factors();
    let group = AbelianGroup::from_parts(k - rel_smith.rank(), torsion);
    Ok(KernelPresentation {
        ambient,
        rank,
        kernel_basis,
        v_inv,
        relations,
        group,
    })
}

/// `ker d_out / im d_in` in canonical form.
pub fn homology_at(d_in: &IntegerMatrix, d_out: &IntegerMatrix) -> Result<AbelianGroup> {
    Ok(kernel_presentation(d_in, d_out)?.group)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::invariant_factors_by_minors;
    use proptest::prelude::*;

    #[test]
    fn smith_of_zero_matrix_is_identity_transforms() {
        let a = IntegerMatrix::zero(2, 3);
        let s = smith(&a);
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntegerMatrix::identity(2));
        assert_eq!(s.v, IntegerMatrix::identity(3));
        assert!(s.verify(&a));
    }

    #[test]
    fn smith_of_identity_is_identity() {
        let a = IntegerMatrix::identity(4);
        let s = smith(&a);
        assert_eq!(s.d, IntegerMatrix::identity(4));
        assert!(s.verify(&a));
    }

    #[test]
    fn smith_small_example_invariant_factors() {
        // gcd of entries is 2, |det| = 8, so the factors are (2, 4)
        let a = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith(&a);
        assert!(s.verify(&a));
        let factors: Vec<i64> = s
            .invariant_factors()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        assert_eq!(factors, vec![2, 4]);
    }

    #[test]
    fn rank_q_examples() {
        assert_eq!(rank_q(&IntegerMatrix::zero(3, 2)), 0);
        assert_eq!(
            rank_q(&IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]])),
            2
        );
        assert_eq!(rank_q(&IntegerMatrix::from_rows(&[vec![1, 1, 1, 1]])), 1);
    }

    #[test]
    fn determinant_matches_cofactor_values() {
        let a = IntegerMatrix::from_rows(&[vec![2, 0, 1], vec![1, 3, -2], vec![0, 4, 1]]);
        // 2*(3*1 - -2*4) - 0 + 1*(1*4 - 0) = 22 + 4
        assert_eq!(determinant(&a), BigInt::from(26));
        assert_eq!(determinant(&IntegerMatrix::identity(5)), BigInt::one());
        assert_eq!(determinant(&IntegerMatrix::zero(3, 3)), BigInt::zero());
    }

    #[test]
    fn solve_finds_integer_solutions_and_rejects_others() {
        let a = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let b_bad = vec![BigInt::from(1), BigInt::from(0)];
        assert!(solve(&a, &b_bad).is_none());
    }

    #[test]
    fn homology_of_zero_pair_is_free_of_ambient_rank() {
        let d_in = IntegerMatrix::zero(5, 0);
        let d_out = IntegerMatrix::zero(0, 5);
        let h = homology_at(&d_in, &d_out).unwrap();
        assert_eq!(h, AbelianGroup::free(5));
    }

    #[test]
    fn homology_rejects_non_complexes() {
        let d_in = IntegerMatrix::identity(2);
        let d_out = IntegerMatrix::identity(2);
        assert!(homology_at(&d_in, &d_out).is_err());
        let mismatched = IntegerMatrix::zero(3, 4);
        assert!(homology_at(&mismatched, &IntegerMatrix::zero(0, 5)).is_err());
    }

    #[test]
    fn homology_detects_torsion() {
        // Z^2 / im [[2,0],[0,3]] = Z/2 + Z/3 = Z/6
        let d_in = IntegerMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let d_out = IntegerMatrix::zero(0, 2);
        let h = homology_at(&d_in, &d_out).unwrap();
        assert_eq!(h, AbelianGroup::from_parts(0, vec![BigInt::from(6)]));
    }

    #[test]
    fn direct_sum_renormalizes_factor_chain() {
        let a = AbelianGroup::from_parts(1, vec![BigInt::from(2)]);
        let b = AbelianGroup::from_parts(0, vec![BigInt::from(3)]);
        let s = a.direct_sum(&b);
        assert_eq!(s, AbelianGroup::from_parts(1, vec![BigInt::from(6)]));
        let c = AbelianGroup::from_parts(0, vec![BigInt::from(4), BigInt::from(6)]);
        // 4 and 6 do not form a chain: normalize to 2 | 12
        assert_eq!(
            AbelianGroup::from_parts(0, vec![BigInt::from(6), BigInt::from(4)]),
            c
        );
        assert_eq!(c.torsion(), &[BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn tensor_follows_bilinear_rules() {
        let z2 = AbelianGroup::from_parts(0, vec![BigInt::from(2)]);
        let z = AbelianGroup::free(1);
        assert_eq!(z.tensor(&z2), z2);
        let z4 = AbelianGroup::from_parts(0, vec![BigInt::from(4)]);
        let z6 = AbelianGroup::from_parts(0, vec![BigInt::from(6)]);
        assert_eq!(z4.tensor(&z6), z2);
        let a = AbelianGroup::from_parts(2, vec![BigInt::from(2)]);
        let b = AbelianGroup::from_parts(1, vec![BigInt::from(3)]);
        // free 2*1; torsion: Z/2 (x1 from b free), Z/3 x2 (from a free), gcd(2,3)=1
        assert_eq!(
            a.tensor(&b),
            AbelianGroup::from_parts(2, vec![BigInt::from(2), BigInt::from(3), BigInt::from(3)])
        );
    }

    #[test]
    fn group_display_forms() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::free(1).to_string(), "Z");
        assert_eq!(AbelianGroup::free(3).to_string(), "Z^3");
        assert_eq!(
            AbelianGroup::from_parts(2, vec![BigInt::from(2), BigInt::from(4)]).to_string(),
            "Z^2 + Z/2 + Z/4"
        );
    }

    #[test]
    fn kernel_presentation_coordinates_round_trip() {
        // d_out = [1 1]: kernel is rank 1
        let d_out = IntegerMatrix::from_rows(&[vec![1, 1]]);
        let d_in = IntegerMatrix::zero(2, 0);
        let p = kernel_presentation(&d_in, &d_out).unwrap();
        assert_eq!(p.kernel_dim(), 1);
        let cycle = vec![BigInt::from(3), BigInt::from(-3)];
        let coords = p.coordinates(&cycle).unwrap();
        assert_eq!(p.kernel_basis.mul_vec(&coords), cycle);
        let non_cycle = vec![BigInt::from(1), BigInt::from(0)];
        assert!(p.coordinates(&non_cycle).is_none());
    }

    fn arb_matrix() -> impl Strategy<Value = IntegerMatrix> {
        (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-9i64..=9, r * c).prop_map(move |vals| {
                IntegerMatrix::from_fn(r, c, |i, j| BigInt::from(vals[i * c + j]))
            })
        })
    }

    proptest! {
        #[test]
        fn smith_matches_gcd_of_minors_oracle(a in arb_matrix()) {
            let s = smith(&a);
            prop_assert!(s.verify(&a));
            prop_assert_eq!(s.invariant_factors(), invariant_factors_by_minors(&a));
        }

        #[test]
        fn solve_is_sound(a in arb_matrix(), xs in proptest::collection::vec(-4i64..=4, 6)) {
            let x: Vec<BigInt> = xs.iter().take(a.cols()).map(|&v| BigInt::from(v)).collect();
            let b = a.mul_vec(&x);
            let found = solve(&a, &b);
            prop_assert!(found.is_some());
            prop_assert_eq!(a.mul_vec(&found.unwrap()), b);
        }
    }
}

//! The conormal chain complex: contraction signs, the degree -1 differential,
//! its higher odd-jump companions, the periodic (Z/2-graded) differential and
//! the unipotent homotopy relating the two.
//!
//! Every basis face carries its canonical co-orientation, the exterior
//! product of the `dr_i` in increasing label order; a chain with the opposite
//! co-orientation is the coefficient -1. Matrices here hold `i64` entries
//! (they are signs and small sums); promotion to arbitrary precision happens
//! in [`crate::linalg`].

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::complex::{FaceComplex, FaceId, Label};
use crate::linalg::IntegerMatrix;
use crate::{Error, Result};

/// Sparse integer matrix between two face bases fixed by
/// [`FaceComplex::faces_of_codim`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl GradedMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        GradedMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GradedMatrix::zero(n, n);
        for i in 0..n {
            m.add(i, i, 1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        *self.entries.get(&(r, c)).unwrap_or(&0)
    }

    /// Accumulates into an entry, dropping it when it cancels to zero.
    pub fn add(&mut self, r: usize, c: usize, value: i64) {
        assert!(r < self.rows && c < self.cols, "entry out of range");
        if value == 0 {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert(0);
        *slot += value;
        if *slot == 0 {
            self.entries.remove(&(r, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Copies `block` into this matrix at the given offsets.
    pub fn embed(&mut self, block: &GradedMatrix, row_offset: usize, col_offset: usize) {
        for (r, c, v) in block.entries() {
            self.add(r + row_offset, c + col_offset, v);
        }
    }

    pub fn matrix_add(&self, rhs: &GradedMatrix) -> GradedMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (r, c, v) in rhs.entries() {
            out.add(r, c, v);
        }
        out
    }

    pub fn mul(&self, rhs: &GradedMatrix) -> GradedMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut by_col: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (r, c, v) in self.entries() {
            by_col.entry(c).or_default().push((r, v));
        }
        let mut out = GradedMatrix::zero(self.rows, rhs.cols);
        for (k, c, b) in rhs.entries() {
            if let Some(col) = by_col.get(&k) {
                for &(r, a) in col {
                    out.add(r, c, a * b);
                }
            }
        }
        out
    }

    /// Applies the matrix to a coefficient vector.
    pub fn mul_dense_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![0i64; self.rows];
        for (r, c, a) in self.entries() {
            out[r] += a * v[c];
        }
        out
    }

    pub fn to_integer_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zero(self.rows, self.cols);
        for (r, c, v) in self.entries() {
            m[(r, c)] = v.into();
        }
        m
    }
}

/// Integer linear combination of canonically co-oriented faces. Zero
/// coefficients are never stored; a face with the opposite co-orientation is
/// the coefficient -1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    coefficients: BTreeMap<FaceId, i64>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    /// The chain consisting of one face with coefficient +1.
    pub fn face(id: FaceId) -> Self {
        let mut c = Chain::zero();
        c.add_term(id, 1);
        c
    }

    pub fn coefficient(&self, id: &FaceId) -> i64 {
        self.coefficients.get(id).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, id: FaceId, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        match self.coefficients.entry(id) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coefficient;
                if *e.get() == 0 {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coefficient);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FaceId, i64)> {
        self.coefficients.iter().map(|(id, &v)| (id, v))
    }

    /// Reads off the coefficients in the codim-`p` basis order of `cx`.
    /// Rejects terms that are not codim-`p` faces of the owning complex.
    pub fn to_basis_vector(&self, cx: &FaceComplex, p: usize) -> Result<Vec<i64>> {
        let mut out = vec![0i64; cx.faces_of_codim(p).len()];
        let start = cx.codim_range(p).start;
        for (id, v) in self.terms() {
            let index = cx
                .face_index(id)
                .ok_or_else(|| Error::Argument(format!("face '{id}' is not in the complex")))?;
            if cx.face_at(index).codim() != p {
                return Err(Error::Argument(format!(
                    "face '{id}' has codimension {}, not {p}",
                    cx.face_at(index).codim()
                )));
            }
            out[index - start] = v;
        }
        Ok(out)
    }

    pub fn from_basis_vector(cx: &FaceComplex, p: usize, coefficients: &[i64]) -> Self {
        let faces = cx.faces_of_codim(p);
        assert_eq!(
            faces.len(),
            coefficients.len(),
            "basis vector length mismatch"
        );
        let mut c = Chain::zero();
        for (face, &v) in faces.iter().zip(coefficients) {
            c.add_term(face.id().clone(), v);
        }
        c
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (id, v)) in self.terms().enumerate() {
            let sign = if v < 0 { "-" } else { "+" };
            if i == 0 {
                if v < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if v.abs() != 1 {
                write!(f, "{}*", v.abs())?;
            }
            write!(f, "{id}")?;
        }
        Ok(())
    }
}

/// Applies the differential term by term through the parent maps:
/// each face contributes its signed parents. Chains may mix codimensions.
pub fn delta_chain(cx: &FaceComplex, chain: &Chain) -> Result<Chain> {
    let mut out = Chain::zero();
    for (id, v) in chain.terms() {
        let face = cx
            .face(id)
            .ok_or_else(|| Error::Argument(format!("face '{id}' is not in the complex")))?;
        for (pos, parent) in face.parents().values().enumerate() {
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            out.add_term(parent.clone(), sign * v);
        }
    }
    Ok(out)
}

/// The sign `s` with `e_J ⌟ e_I = s * e_{I\J}`, both tuples strictly
/// increasing and `J ⊆ I`. Single contractions follow
/// `e_i ⌟ e_K = (-1)^(j-1) e_{K\{i}}` with `j` the position of `i` in `K`;
/// multi-contractions nest with the largest label applied first.
pub fn contraction_sign(tuple: &[Label], dropped: &[Label]) -> Result<i64> {
    for w in dropped.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Argument(
                "dropped labels must be strictly increasing".to_string(),
            ));
        }
    }
    let mut remaining: Vec<Label> = tuple.to_vec();
    let mut sign = 1i64;
    for &label in dropped.iter().rev() {
        let pos = remaining
            .iter()
            .position(|&l| l == label)
            .ok_or_else(|| Error::Argument(format!("label {label} is not in the tuple")))?;
        if pos % 2 == 1 {
            sign = -sign;
        }
        remaining.remove(pos);
    }
    Ok(sign)
}

/// Matrix of `δ_p : C_p -> C_{p-1}`: the column of a face has entry
/// `contraction_sign(I, {i})` at its parent for each `i` in its tuple.
/// Requires a validated complex and `1 <= p <= max_codim`.
pub fn delta(cx: &FaceComplex, p: usize) -> GradedMatrix {
    assert!(p >= 1 && p <= cx.max_codim(), "delta degree out of range");
    delta_k(cx, p, 1)
}

/// Matrix of the jump-`k` map `δ^k_p : C_p -> C_{p-k}`: for each `k`-subset
/// of a face's tuple, the signed ancestor reached by dropping it. `k = 0`
/// gives the identity, `k = 1` the differential.
pub fn delta_k(cx: &FaceComplex, p: usize, k: usize) -> GradedMatrix {
    assert!(p <= cx.max_codim(), "delta_k degree out of range");
    assert!(k <= p, "jump exceeds degree");
    let rows = cx.faces_of_codim(p - k).len();
    let cols = cx.faces_of_codim(p).len();
    let mut m = GradedMatrix::zero(rows, cols);
    let start = cx.codim_range(p).start;
    for (c, face) in cx.faces_of_codim(p).iter().enumerate() {
        for dropped in face.tuple().iter().copied().combinations(k) {
            let sign =
                contraction_sign(face.tuple(), &dropped).expect("tuple subsets are increasing");
            let target = cx
                .ancestor_by_index(start + c, &dropped)
                .expect("validated complex has complete ancestor paths");
            m.add(cx.position_in_codim(target), c, sign);
        }
    }
    m
}

/// All of `δ` assembled on the total space, faces in canonical order.
pub fn delta_total(cx: &FaceComplex) -> GradedMatrix {
    let n = cx.num_faces();
    let mut m = GradedMatrix::zero(n, n);
    for p in 1..=cx.max_codim() {
        m.embed(
            &delta(cx, p),
            cx.codim_range(p - 1).start,
            cx.codim_range(p).start,
        );
    }
    m
}

/// The periodic differential `δ^pcn = Σ_k δ^(2k+1)` on the total space.
pub fn delta_pcn_total(cx: &FaceComplex) -> GradedMatrix {
    let n = cx.num_faces();
    let mut m = GradedMatrix::zero(n, n);
    for p in 1..=cx.max_codim() {
        for k in (1..=p).step_by(2) {
            m.embed(
                &delta_k(cx, p, k),
                cx.codim_range(p - k).start,
                cx.codim_range(p).start,
            );
        }
    }
    m
}

/// Basis of one parity of a (possibly truncated) complex: which codimensions
/// contribute, at which offsets.
#[derive(Clone, Debug)]
pub struct ParityBasis {
    /// `(codim, offset, len)` per contributing codimension, ascending.
    pub blocks: Vec<(usize, usize, usize)>,
    pub dim: usize,
}

impl ParityBasis {
    fn build(cx: &FaceComplex, lo: usize, hi: usize, parity: usize) -> Self {
        let mut blocks = Vec::new();
        let mut dim = 0;
        for p in lo..=hi {
            if p % 2 != parity {
                continue;
            }
            let len = cx.faces_of_codim(p).len();
            blocks.push((p, dim, len));
            dim += len;
        }
        ParityBasis { blocks, dim }
    }

    fn offset_of(&self, codim: usize) -> Option<usize> {
        self.blocks
            .iter()
            .find(|&&(p, _, _)| p == codim)
            .map(|&(_, off, _)| off)
    }
}

/// The Z/2-graded complex `(C_even <-> C_odd, δ^pcn)` restricted to faces of
/// codimension in `lo..=hi`. The full complex is `lo = 0`, `hi = max_codim`;
/// `lo = m+1` gives the quotient complex of the codimension filtration and
/// `hi = m` the subcomplex.
#[derive(Clone, Debug)]
pub struct PeriodicComplex {
    pub even: ParityBasis,
    pub odd: ParityBasis,
    pub even_to_odd: GradedMatrix,
    pub odd_to_even: GradedMatrix,
}

pub fn periodic_complex_range(cx: &FaceComplex, lo: usize, hi: usize) -> PeriodicComplex {
    let even = ParityBasis::build(cx, lo, hi, 0);
    let odd = ParityBasis::build(cx, lo, hi, 1);
    let mut even_to_odd = GradedMatrix::zero(odd.dim, even.dim);
    let mut odd_to_even = GradedMatrix::zero(even.dim, odd.dim);
    for p in lo..=hi.min(cx.max_codim()) {
        for k in (1..=p).step_by(2) {
            if p - k < lo {
                continue;
            }
            let block = delta_k(cx, p, k);
            if p % 2 == 0 {
                let col = even.offset_of(p).unwrap();
                let row = odd.offset_of(p - k).unwrap();
                even_to_odd.embed(&block, row, col);
            } else {
                let col = odd.offset_of(p).unwrap();
                let row = even.offset_of(p - k).unwrap();
                odd_to_even.embed(&block, row, col);
            }
        }
    }
    PeriodicComplex {
        even,
        odd,
        even_to_odd,
        odd_to_even,
    }
}

/// The periodic differential as its two parity blocks
/// `(C_even -> C_odd, C_odd -> C_even)` for the full complex.
pub fn delta_pcn(cx: &FaceComplex) -> (GradedMatrix, GradedMatrix) {
    let pc = periodic_complex_range(cx, 0, cx.max_codim());
    (pc.even_to_odd, pc.odd_to_even)
}

/// `N = Σ_{k>=1} δ^{2k}`, the strictly codimension-lowering even part.
fn nilpotent_part(cx: &FaceComplex) -> GradedMatrix {
    let n = cx.num_faces();
    let mut m = GradedMatrix::zero(n, n);
    for p in 2..=cx.max_codim() {
        for k in (2..=p).step_by(2) {
            m.embed(
                &delta_k(cx, p, k),
                cx.codim_range(p - k).start,
                cx.codim_range(p).start,
            );
        }
    }
    m
}

/// The homotopy `h = Id + N` on the total space; unipotent, and satisfies
/// `δ^pcn = h ∘ δ = δ ∘ h`.
pub fn h_operator(cx: &FaceComplex) -> GradedMatrix {
    GradedMatrix::identity(cx.num_faces()).matrix_add(&nilpotent_part(cx))
}

/// Exact inverse `h^{-1} = Σ_j (-N)^j`; the sum is finite because `N` lowers
/// codimension by at least two.
pub fn h_inverse(cx: &FaceComplex) -> GradedMatrix {
    let n_mat = nilpotent_part(cx);
    let mut acc = GradedMatrix::identity(cx.num_faces());
    let mut power = GradedMatrix::identity(cx.num_faces());
    let mut sign = 1i64;
    loop {
        power = power.mul(&n_mat);
        if power.is_zero() {
            break;
        }
        sign = -sign;
        let mut signed = GradedMatrix::zero(power.rows(), power.cols());
        for (r, c, v) in power.entries() {
            signed.add(r, c, sign * v);
        }
        acc = acc.matrix_add(&signed);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use proptest::prelude::*;

    #[test]
    fn single_contraction_signs() {
        assert_eq!(contraction_sign(&[1, 2], &[1]).unwrap(), 1);
        assert_eq!(contraction_sign(&[1, 2], &[2]).unwrap(), -1);
        assert_eq!(contraction_sign(&[1, 2], &[1, 2]).unwrap(), -1);
        assert_eq!(contraction_sign(&[1, 2, 3], &[1, 2, 3]).unwrap(), -1);
        assert_eq!(contraction_sign(&[2, 5, 9], &[]).unwrap(), 1);
        assert!(contraction_sign(&[1, 2], &[3]).is_err());
        assert!(contraction_sign(&[1, 2], &[2, 1]).is_err());
    }

    /// Independent oracle: the parity of the permutation rearranging `I` into
    /// (J in application order, then I\J in increasing order).
    fn permutation_parity_sign(tuple: &[Label], dropped: &[Label]) -> i64 {
        let mut arranged: Vec<Label> = dropped.iter().rev().copied().collect();
        arranged.extend(tuple.iter().copied().filter(|l| !dropped.contains(l)));
        let positions: Vec<usize> = arranged
            .iter()
            .map(|l| tuple.iter().position(|t| t == l).unwrap())
            .collect();
        let mut inversions = 0;
        for i in 0..positions.len() {
            for j in i + 1..positions.len() {
                if positions[i] > positions[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    proptest! {
        #[test]
        fn contraction_sign_matches_permutation_parity(
            labels in proptest::collection::btree_set(1u32..40, 1..8),
            mask in proptest::collection::vec(any::<bool>(), 8),
        ) {
            let tuple: Vec<Label> = labels.into_iter().collect();
            let dropped: Vec<Label> = tuple
                .iter()
                .zip(mask.iter())
                .filter(|(_, &m)| m)
                .map(|(&l, _)| l)
                .collect();
            prop_assert_eq!(
                contraction_sign(&tuple, &dropped).unwrap(),
                permutation_parity_sign(&tuple, &dropped)
            );
        }
    }

    #[test]
    fn chain_terms_cancel_and_render() {
        let cx = builders::quarter_plane();
        let corner = cx.faces_of_codim(2)[0].id().clone();
        let boundary = delta_chain(&cx, &Chain::face(corner)).unwrap();
        assert_eq!(boundary.to_string(), "-f1 + f2");
        let mut sum = boundary.clone();
        for (id, v) in boundary.terms() {
            sum.add_term(id.clone(), -v);
        }
        assert!(sum.is_zero());
        assert_eq!(sum.to_string(), "0");
    }

    #[test]
    fn chain_basis_vector_round_trip_rejects_foreign_faces() {
        let cx = builders::square();
        let v = vec![1, -2, 0, 3];
        let chain = Chain::from_basis_vector(&cx, 1, &v);
        assert_eq!(chain.to_basis_vector(&cx, 1).unwrap(), v);
        assert!(chain.to_basis_vector(&cx, 2).is_err());
        let foreign = Chain::face(crate::complex::FaceId::from("nope"));
        assert!(foreign.to_basis_vector(&cx, 1).is_err());
    }

    #[test]
    fn chain_route_matches_matrix_columns() {
        for cx in builders::fixtures() {
            for p in 1..=cx.max_codim() {
                let d = delta(&cx, p);
                for (c, face) in cx.faces_of_codim(p).iter().enumerate() {
                    let chain = delta_chain(&cx, &Chain::face(face.id().clone())).unwrap();
                    let got = chain.to_basis_vector(&cx, p - 1).unwrap();
                    let expected: Vec<i64> = (0..d.rows()).map(|r| d.get(r, c)).collect();
                    assert_eq!(got, expected, "face {}", face.id());
                }
            }
        }
    }

    #[test]
    fn delta_on_interval_is_all_ones() {
        let cx = builders::interval();
        let d1 = delta(&cx, 1);
        assert_eq!((d1.rows(), d1.cols()), (1, 2));
        assert_eq!(d1.get(0, 0), 1);
        assert_eq!(d1.get(0, 1), 1);
    }

    #[test]
    fn delta_on_quarter_plane_corner() {
        let cx = builders::quarter_plane();
        let d2 = delta(&cx, 2);
        // column of the corner: +1 at the face (2), -1 at the face (1)
        assert_eq!((d2.rows(), d2.cols()), (2, 1));
        let f1 = cx.faces_of_codim(1)[0].clone();
        assert_eq!(f1.tuple(), &[1]);
        assert_eq!(d2.get(0, 0), -1);
        assert_eq!(d2.get(1, 0), 1);
    }

    #[test]
    fn smooth_has_no_differentials() {
        let cx = builders::smooth();
        assert_eq!(cx.max_codim(), 0);
        assert!(delta_total(&cx).is_zero());
    }

    #[test]
    fn delta_k_zero_jump_is_identity() {
        let cx = builders::cube();
        for p in 0..=3 {
            let m = delta_k(&cx, p, 0);
            assert_eq!(m, GradedMatrix::identity(cx.faces_of_codim(p).len()));
        }
    }

    #[test]
    fn delta_k_full_drop_on_cube_vertices() {
        let cx = builders::cube();
        let d3 = delta_k(&cx, 3, 3);
        assert_eq!((d3.rows(), d3.cols()), (1, 8));
        for c in 0..8 {
            assert_eq!(d3.get(0, c), -1);
        }
    }

    #[test]
    fn two_chambers_corner_columns_coincide() {
        // both corners have the same signed parents, so s0 - s1 is a cycle
        let cx = builders::two_chambers(1);
        let d2 = delta(&cx, 2);
        assert_eq!((d2.rows(), d2.cols()), (2, 2));
        for r in 0..2 {
            assert_eq!(d2.get(r, 0), d2.get(r, 1));
        }
    }

    #[test]
    fn delta_k_two_jump_on_two_chambers() {
        let cx = builders::two_chambers(2);
        let d2 = delta_k(&cx, 2, 2);
        assert_eq!((d2.rows(), d2.cols()), (1, 3));
        for c in 0..3 {
            assert_eq!(d2.get(0, c), -1);
        }
    }

    #[test]
    fn column_support_is_the_parent_set_with_unit_entries() {
        for cx in builders::fixtures() {
            for p in 1..=cx.max_codim() {
                let d = delta(&cx, p);
                for (c, face) in cx.faces_of_codim(p).iter().enumerate() {
                    let mut nonzero = 0;
                    for r in 0..d.rows() {
                        let v = d.get(r, c);
                        if v != 0 {
                            nonzero += 1;
                            assert!(v == 1 || v == -1);
                            let parent = cx.faces_of_codim(p - 1)[r].id();
                            assert!(face.parents().values().any(|id| id == parent));
                        }
                    }
                    assert_eq!(nonzero, p, "face {}", face.id());
                }
            }
        }
    }

    #[test]
    fn delta_squares_to_zero_on_fixtures() {
        for cx in builders::fixtures() {
            for p in 2..=cx.max_codim() {
                assert!(delta(&cx, p - 1).mul(&delta(&cx, p)).is_zero());
            }
        }
    }

    #[test]
    fn periodic_differential_squares_to_zero_on_fixtures() {
        for cx in builders::fixtures() {
            let (e2o, o2e) = delta_pcn(&cx);
            assert!(e2o.mul(&o2e).is_zero(), "{}", cx.num_faces());
            assert!(o2e.mul(&e2o).is_zero());
        }
    }

    #[test]
    fn low_codim_periodic_blocks_equal_plain_delta() {
        for cx in [builders::interval(), builders::two_chambers(2)] {
            let pcn = delta_pcn_total(&cx);
            let d = delta_total(&cx);
            assert_eq!(pcn, d);
        }
    }

    #[test]
    fn cube_vertex_pcn_column_has_three_edges_and_interior() {
        let cx = builders::cube();
        let pcn = delta_pcn_total(&cx);
        let d = delta_total(&cx);
        let v0 = cx.codim_range(3).start;
        // interior sits at total index 0
        assert_eq!(pcn.get(0, v0), -1);
        assert_eq!(d.get(0, v0), 0);
        let edge_range = cx.codim_range(2);
        let edge_entries: Vec<i64> = edge_range
            .clone()
            .map(|r| pcn.get(r, v0))
            .filter(|&v| v != 0)
            .collect();
        assert_eq!(edge_entries.len(), 3);
        for r in edge_range {
            assert_eq!(pcn.get(r, v0), d.get(r, v0));
        }
    }

    #[test]
    fn h_is_identity_in_low_codim() {
        for cx in [
            builders::smooth(),
            builders::interval(),
            builders::halfline(),
        ] {
            assert_eq!(h_operator(&cx), GradedMatrix::identity(cx.num_faces()));
        }
    }

    #[test]
    fn h_on_cube_vertex_adds_three_signed_hyperfaces() {
        let cx = builders::cube();
        let h = h_operator(&cx);
        let v0 = cx.codim_range(3).start;
        assert_eq!(h.get(v0, v0), 1);
        let hyper: Vec<i64> = cx
            .codim_range(1)
            .map(|r| h.get(r, v0))
            .filter(|&v| v != 0)
            .collect();
        assert_eq!(hyper.len(), 3);
        assert!(hyper.iter().all(|&v| v == 1 || v == -1));
    }

    #[test]
    fn h_factorizes_the_periodic_differential_on_fixtures() {
        for cx in builders::fixtures() {
            let h = h_operator(&cx);
            let h_inv = h_inverse(&cx);
            let id = GradedMatrix::identity(cx.num_faces());
            assert_eq!(h.mul(&h_inv), id);
            assert_eq!(h_inv.mul(&h), id);
            let d = delta_total(&cx);
            let pcn = delta_pcn_total(&cx);
            assert_eq!(h.mul(&d), pcn);
            assert_eq!(d.mul(&h), pcn);
        }
    }

    #[test]
    fn h_is_unipotent_lower_triangular_by_codim() {
        let cx = builders::cube_with_cubic_hole();
        let h = h_operator(&cx);
        for (r, c, v) in h.entries() {
            let rc = cx.face_at(r).codim();
            let cc = cx.face_at(c).codim();
            if r == c {
                assert_eq!(v, 1);
            } else {
                assert!(rc < cc, "off-diagonal entries must lower codimension");
            }
        }
    }
}

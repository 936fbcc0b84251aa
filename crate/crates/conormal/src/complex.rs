//! Combinatorial model of a compact connected manifold with embedded
//! corners: labelled boundary hyperfaces and a poset of faces carrying index
//! tuples and parent maps.
//!
//! A face of codimension `p` is an open connected stratum cut out by the
//! vanishing of `p` boundary defining functions; its `tuple` lists their
//! labels in increasing order. `parents` maps each label `i` of the tuple to
//! the unique codimension `p-1` face whose closure contains this face and
//! whose tuple is the original one with `i` removed. Everything downstream
//! (differentials, homology, reports) consumes exactly this data.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::{Error, Result};

/// Hyperface label; ranges over `1..=num_hyperfaces`.
pub type Label = u32;

/// Opaque face identifier, unique within a complex.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId(String);

impl FaceId {
    pub fn new(id: impl Into<String>) -> Self {
        FaceId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FaceId {
    fn from(s: &str) -> Self {
        FaceId(s.to_string())
    }
}

/// One open connected face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    id: FaceId,
    tuple: Vec<Label>,
    parents: BTreeMap<Label, FaceId>,
}

impl Face {
    pub fn new(id: impl Into<String>, tuple: Vec<Label>, parents: BTreeMap<Label, FaceId>) -> Self {
        Face {
            id: FaceId::new(id),
            tuple,
            parents,
        }
    }

    /// Convenience constructor for the unique codimension-0 face.
    pub fn interior(id: impl Into<String>) -> Self {
        Face {
            id: FaceId::new(id),
            tuple: Vec::new(),
            parents: BTreeMap::new(),
        }
    }

    pub fn id(&self) -> &FaceId {
        &self.id
    }

    pub fn tuple(&self) -> &[Label] {
        &self.tuple
    }

    pub fn codim(&self) -> usize {
        self.tuple.len()
    }

    pub fn parents(&self) -> &BTreeMap<Label, FaceId> {
        &self.parents
    }

    pub fn parent(&self, label: Label) -> Option<&FaceId> {
        self.parents.get(&label)
    }
}

/// Rules checked by [`FaceComplex::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Exactly one face has the empty tuple (the connected interior).
    InteriorUniqueness,
    /// For each label there is exactly one face with tuple `(i)`.
    HyperfaceUniqueness,
    /// `parent(f, i)` has tuple exactly `f.tuple` minus `i`.
    ParentTuple,
    /// Iterated parents are independent of the order in which labels are
    /// dropped.
    Diamond,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Rule::InteriorUniqueness => "interior-uniqueness",
            Rule::HyperfaceUniqueness => "hyperface-uniqueness",
            Rule::ParentTuple => "parent-tuple",
            Rule::Diamond => "diamond",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub rule: Rule,
    pub faces: Vec<FaceId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<&str> = self.faces.iter().map(FaceId::as_str).collect();
        write!(f, "{}: {} [{}]", self.rule, self.detail, ids.join(", "))
    }
}

/// Outcome of validation; violations are data, not failures.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Immutable face complex. Faces are stored in the canonical order
/// `(codimension, tuple, id)`; that order is the basis contract for every
/// matrix built downstream.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceComplex {
    num_hyperfaces: u32,
    faces: Vec<Face>,
    index: HashMap<FaceId, usize>,
    codim_start: Vec<usize>,
    factors: Vec<FaceComplex>,
}

impl FaceComplex {
    /// Builds a complex from raw parts, checking only representability:
    /// unique ids, well-formed tuples, parent entries matching the tuple and
    /// resolving to existing faces. Axioms (interior/hyperface uniqueness,
    /// parent tuples, diamond) are left to [`validate`](Self::validate).
    pub fn new(num_hyperfaces: u32, mut faces: Vec<Face>) -> Result<Self> {
        faces.sort_by(|a, b| (a.codim(), &a.tuple, &a.id).cmp(&(b.codim(), &b.tuple, &b.id)));
        let mut index = HashMap::with_capacity(faces.len());
        for (i, face) in faces.iter().enumerate() {
            if index.insert(face.id.clone(), i).is_some() {
                return Err(Error::Structure(format!("duplicate face id '{}'", face.id)));
            }
        }
        for face in &faces {
            if !face.tuple.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Structure(format!(
                    "face '{}' has a tuple that is not strictly increasing",
                    face.id
                )));
            }
            for &label in &face.tuple {
                if label == 0 || label > num_hyperfaces {
                    return Err(Error::Structure(format!(
                        "face '{}' uses label {} outside 1..={}",
                        face.id, label, num_hyperfaces
                    )));
                }
            }
            let keys: Vec<Label> = face.parents.keys().copied().collect();
            if keys != face.tuple {
                return Err(Error::Structure(format!(
                    "face '{}' must have exactly one parent entry per tuple label",
                    face.id
                )));
            }
            for parent in face.parents.values() {
                if !index.contains_key(parent) {
                    return Err(Error::Structure(format!(
                        "face '{}' names unknown parent '{}'",
                        face.id, parent
                    )));
                }
            }
        }
        let max_codim = faces.last().map_or(0, Face::codim);
        let mut codim_start = vec![0usize; max_codim + 2];
        for face in &faces {
            codim_start[face.codim() + 1] += 1;
        }
        for p in 0..max_codim + 1 {
            codim_start[p + 1] += codim_start[p];
        }
        Ok(FaceComplex {
            num_hyperfaces,
            faces,
            index,
            codim_start,
            factors: Vec::new(),
        })
    }

    /// Attaches factorization provenance (the complex is a product of the
    /// given factors, in order, with the labels of later factors shifted).
    pub fn with_factors(mut self, factors: Vec<FaceComplex>) -> Self {
        self.factors = factors;
        self
    }

    pub fn num_hyperfaces(&self) -> u32 {
        self.num_hyperfaces
    }

    /// Largest codimension present.
    pub fn max_codim(&self) -> usize {
        self.codim_start.len() - 2
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    /// Recorded factorization, empty when the complex is atomic.
    pub fn factors(&self) -> &[FaceComplex] {
        &self.factors
    }

    pub fn face(&self, id: &FaceId) -> Option<&Face> {
        self.index.get(id).map(|&i| &self.faces[i])
    }

    pub fn face_index(&self, id: &FaceId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn face_at(&self, index: usize) -> &Face {
        &self.faces[index]
    }

    /// Faces of codimension `p` in canonical `(tuple, id)` order; empty for
    /// absent codimensions.
    pub fn faces_of_codim(&self, p: usize) -> &[Face] {
        if p > self.max_codim() {
            return &[];
        }
        &self.faces[self.codim_start[p]..self.codim_start[p + 1]]
    }

    /// Index range of the codim-`p` block within the canonical face order.
    pub fn codim_range(&self, p: usize) -> std::ops::Range<usize> {
        if p > self.max_codim() {
            return self.faces.len()..self.faces.len();
        }
        self.codim_start[p]..self.codim_start[p + 1]
    }

    /// Position of a face within its own codimension block.
    pub fn position_in_codim(&self, index: usize) -> usize {
        index - self.codim_start[self.faces[index].codim()]
    }

    /// Checks all axioms and reports every violation found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        let interiors: Vec<&Face> = self.faces_of_codim(0).iter().collect();
        if interiors.len() != 1 {
            violations.push(Violation {
                rule: Rule::InteriorUniqueness,
                faces: interiors.iter().map(|f| f.id.clone()).collect(),
                detail: format!(
                    "expected exactly one codimension-0 face, found {}",
                    interiors.len()
                ),
            });
        }

        for label in 1..=self.num_hyperfaces {
            let hits: Vec<&Face> = self
                .faces_of_codim(1)
                .iter()
                .filter(|f| f.tuple == [label])
                .collect();
            if hits.len() != 1 {
                violations.push(Violation {
                    rule: Rule::HyperfaceUniqueness,
                    faces: hits.iter().map(|f| f.id.clone()).collect(),
                    detail: format!(
                        "label {} must name exactly one hyperface, found {}",
                        label,
                        hits.len()
                    ),
                });
            }
        }

        for face in &self.faces {
            for (&label, parent_id) in &face.parents {
                let parent = &self.faces[self.index[parent_id]];
                let expected: Vec<Label> =
                    face.tuple.iter().copied().filter(|&l| l != label).collect();
                if parent.tuple != expected {
                    violations.push(Violation {
                        rule: Rule::ParentTuple,
                        faces: vec![face.id.clone(), parent_id.clone()],
                        detail: format!(
                            "parent for dropped label {} has tuple {:?}, expected {:?}",
                            label, parent.tuple, expected
                        ),
                    });
                }
            }
        }

        for face in &self.faces {
            let t = &face.tuple;
            for a in 0..t.len() {
                for b in a + 1..t.len() {
                    let (i, j) = (t[a], t[b]);
                    let via_i = self.step(face, i).and_then(|g| self.step(g, j));
                    let via_j = self.step(face, j).and_then(|g| self.step(g, i));
                    let agree = match (via_i, via_j) {
                        (Some(x), Some(y)) => std::ptr::eq(x, y),
                        _ => false,
                    };
                    if !agree {
                        violations.push(Violation {
                            rule: Rule::Diamond,
                            faces: vec![face.id.clone()],
                            detail: format!(
                                "dropping labels {} and {} in either order must reach the same face",
                                i, j
                            ),
                        });
                    }
                }
            }
        }

        ValidationReport { violations }
    }

    /// Bails out with [`Error::Invalid`] unless validation passes.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.ok() {
            Ok(())
        } else {
            let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            Err(Error::Invalid(lines.join("; ")))
        }
    }

    fn step<'a>(&'a self, face: &'a Face, label: Label) -> Option<&'a Face> {
        let parent_id = face.parents.get(&label)?;
        Some(&self.faces[self.index[parent_id]])
    }

    /// The unique face whose tuple is `face.tuple` minus `drop`, reached by
    /// iterated parents. Independent of the drop order on valid complexes.
    pub fn ancestor(&self, id: &FaceId, drop: &[Label]) -> Result<&Face> {
        let index = self
            .face_index(id)
            .ok_or_else(|| Error::Argument(format!("unknown face '{id}'")))?;
        self.ancestor_by_index(index, drop).map(|i| &self.faces[i])
    }

    /// Index form of [`ancestor`](Self::ancestor), used by the matrix
    /// builders.
    pub fn ancestor_by_index(&self, index: usize, drop: &[Label]) -> Result<usize> {
        let face = &self.faces[index];
        let tuple_set: HashSet<Label> = face.tuple.iter().copied().collect();
        for label in drop {
            if !tuple_set.contains(label) {
                return Err(Error::Argument(format!(
                    "label {} is not in the tuple of face '{}'",
                    label, face.id
                )));
            }
        }
        let mut current = index;
        // Largest label first; any order agrees on a valid complex.
        for &label in drop.iter().rev() {
            let face = &self.faces[current];
            let parent_id = face.parents.get(&label).ok_or_else(|| {
                Error::Invalid(format!(
                    "face '{}' lost label {} along an ancestor path; complex is inconsistent",
                    face.id, label
                ))
            })?;
            current = self.index[parent_id];
        }
        Ok(current)
    }

    /// Connected components of the boundary: hyperface labels grouped by the
    /// relation "some codimension-2 face touches both". Components are sorted
    /// by their smallest label.
    pub fn boundary_components(&self) -> Vec<Vec<Label>> {
        let n = self.num_hyperfaces as usize;
        let mut root: Vec<usize> = (0..n).collect();
        fn find(root: &mut [usize], mut x: usize) -> usize {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        for face in self.faces_of_codim(2) {
            let (i, j) = (face.tuple[0] as usize - 1, face.tuple[1] as usize - 1);
            let (ri, rj) = (find(&mut root, i), find(&mut root, j));
            if ri != rj {
                root[ri.max(rj)] = ri.min(rj);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut root, i);
            groups.entry(r).or_default().push(i as Label + 1);
        }
        groups.into_values().collect()
    }

    /// Returns the complex with hyperface labels renamed by `perm`, where
    /// `perm[i-1]` is the new label of old label `i`. Tuples are re-sorted;
    /// face ids and provenance are kept.
    pub fn relabel_hyperfaces(&self, perm: &[Label]) -> Result<FaceComplex> {
        let n = self.num_hyperfaces as usize;
        if perm.len() != n {
            return Err(Error::Argument("permutation length mismatch".to_string()));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p == 0 || p as usize > n || seen[p as usize - 1] {
                return Err(Error::Argument("not a permutation of 1..=N".to_string()));
            }
            seen[p as usize - 1] = true;
        }
        let faces = self
            .faces
            .iter()
            .map(|face| {
                let mut tuple: Vec<Label> =
                    face.tuple.iter().map(|&l| perm[l as usize - 1]).collect();
                tuple.sort_unstable();
                let parents = face
                    .parents
                    .iter()
                    .map(|(&l, id)| (perm[l as usize - 1], id.clone()))
                    .collect();
                Face {
                    id: face.id.clone(),
                    tuple,
                    parents,
                }
            })
            .collect();
        Ok(FaceComplex::new(self.num_hyperfaces, faces)?.with_factors(self.factors.clone()))
    }
}

/// Are two complexes isomorphic as posets with tuples? Looks for a bijection
/// of faces that preserves tuples and parent maps; hyperface labels must
/// already agree. Backtracking over faces grouped by tuple.
pub fn are_isomorphic(a: &FaceComplex, b: &FaceComplex) -> bool {
    if a.num_hyperfaces != b.num_hyperfaces || a.faces.len() != b.faces.len() {
        return false;
    }
    let mut a_tuples: Vec<&[Label]> = a.faces.iter().map(|f| f.tuple.as_slice()).collect();
    let mut b_tuples: Vec<&[Label]> = b.faces.iter().map(|f| f.tuple.as_slice()).collect();
    a_tuples.sort();
    b_tuples.sort();
    if a_tuples != b_tuples {
        return false;
    }

    // Faces sorted by codimension, so parents are assigned before children.
    let order: Vec<usize> = (0..a.faces.len()).collect();
    let mut assigned: Vec<Option<usize>> = vec![None; a.faces.len()];
    let mut used: Vec<bool> = vec![false; b.faces.len()];

    fn consistent(
        a: &FaceComplex,
        b: &FaceComplex,
        ai: usize,
        bi: usize,
        assigned: &[Option<usize>],
    ) -> bool {
        let fa = &a.faces[ai];
        let fb = &b.faces[bi];
        if fa.tuple != fb.tuple {
            return false;
        }
        for (&label, pa) in &fa.parents {
            let pa_index = a.index[pa];
            let expected = assigned[pa_index].expect("parents precede children in order");
            let pb = &fb.parents[&label];
            if b.index[pb] != expected {
                return false;
            }
        }
        true
    }

    fn search(
        a: &FaceComplex,
        b: &FaceComplex,
        order: &[usize],
        pos: usize,
        assigned: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> bool {
        let Some(&ai) = order.get(pos) else {
            return true;
        };
        for bi in 0..b.faces.len() {
            if used[bi] || !consistent(a, b, ai, bi, assigned) {
                continue;
            }
            assigned[ai] = Some(bi);
            used[bi] = true;
            if search(a, b, order, pos + 1, assigned, used) {
                return true;
            }
            assigned[ai] = None;
            used[bi] = false;
        }
        false
    }

    search(a, b, &order, 0, &mut assigned, &mut used)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn builders_validate_cleanly() {
        let cube = builders::cube();
        assert!(cube.validate().ok());
        assert_eq!(cube.faces_of_codim(1).len(), 6);
        assert_eq!(cube.faces_of_codim(3).len(), 8);
        assert!(builders::smooth().faces_of_codim(1).is_empty());
    }

    #[test]
    fn duplicate_hyperface_tuple_is_flagged() {
        let faces = vec![
            Face::interior("int"),
            Face::new("a", vec![1], BTreeMap::from([(1, FaceId::from("int"))])),
            Face::new("b", vec![1], BTreeMap::from([(1, FaceId::from("int"))])),
        ];
        let cx = FaceComplex::new(1, faces).unwrap();
        let report = cx.validate();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == Rule::HyperfaceUniqueness));
    }

    #[test]
    fn edited_parent_breaks_diamond() {
        let cube = builders::cube();
        let vertex = cube.faces_of_codim(3)[0].clone();
        let wrong_edge = cube
            .faces_of_codim(2)
            .iter()
            .find(|e| !e.tuple().iter().all(|l| vertex.tuple().contains(l)))
            .unwrap()
            .id()
            .clone();
        let faces: Vec<Face> = cube
            .faces()
            .iter()
            .map(|f| {
                if f.id() == vertex.id() {
                    let mut parents = f.parents().clone();
                    let first = *f.tuple().first().unwrap();
                    parents.insert(first, wrong_edge.clone());
                    Face::new(f.id().as_str(), f.tuple().to_vec(), parents)
                } else {
                    f.clone()
                }
            })
            .collect();
        let broken = FaceComplex::new(6, faces).unwrap();
        let report = broken.validate();
        assert!(!report.ok());
        assert!(report.violations.iter().any(|v| v.rule == Rule::Diamond));
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == Rule::ParentTuple));
    }

    #[test]
    fn missing_parent_entry_is_a_structure_error() {
        let faces = vec![
            Face::interior("int"),
            Face::new("h", vec![1], BTreeMap::new()),
        ];
        assert!(matches!(
            FaceComplex::new(1, faces),
            Err(Error::Structure(_))
        ));
    }

    #[test]
    fn ancestor_walks_the_poset() {
        let cube = builders::cube();
        let vertex = &cube.faces_of_codim(3)[0];
        let tuple = vertex.tuple().to_vec();
        let all = cube.ancestor(vertex.id(), &tuple).unwrap();
        assert_eq!(all.codim(), 0);
        let one = cube.ancestor(vertex.id(), &tuple[..1]).unwrap();
        assert_eq!(one.id(), vertex.parent(tuple[0]).unwrap());

        let qp = builders::quarter_plane();
        let corner = &qp.faces_of_codim(2)[0];
        let g = qp.ancestor(corner.id(), &[1]).unwrap();
        assert_eq!(g.tuple(), &[2]);

        let bad: Vec<Label> = (1..=6).filter(|l| !tuple.contains(l)).take(1).collect();
        assert!(cube.ancestor(vertex.id(), &bad).is_err());
    }

    #[test]
    fn ancestor_is_contravariant_in_drops() {
        let cube = builders::cube();
        for vertex in cube.faces_of_codim(3) {
            let t = vertex.tuple();
            let split_a = cube
                .ancestor(vertex.id(), &[t[0]])
                .and_then(|g| cube.ancestor(g.id(), &[t[1], t[2]]))
                .unwrap();
            let whole = cube.ancestor(vertex.id(), t).unwrap();
            assert_eq!(split_a.id(), whole.id());
        }
    }

    #[test]
    fn parents_of_a_face_are_distinct() {
        for cx in builders::fixtures() {
            for face in cx.faces() {
                let distinct: HashSet<&FaceId> = face.parents().values().collect();
                assert_eq!(distinct.len(), face.codim(), "face {}", face.id());
            }
        }
    }

    #[test]
    fn boundary_component_counts() {
        assert_eq!(builders::cube().boundary_components().len(), 1);
        assert_eq!(
            builders::cube_with_ball_hole().boundary_components().len(),
            2
        );
        assert_eq!(
            builders::n_boundary_components(3)
                .unwrap()
                .boundary_components()
                .len(),
            3
        );
        assert_eq!(builders::smooth().boundary_components().len(), 0);
    }

    #[test]
    fn canonical_face_order_is_stable() {
        let a = builders::cube();
        let b = builders::cube();
        let ids_a: Vec<&str> = a.faces().iter().map(|f| f.id().as_str()).collect();
        let ids_b: Vec<&str> = b.faces().iter().map(|f| f.id().as_str()).collect();
        assert_eq!(ids_a, ids_b);
    }

    #[test]
    fn relabel_round_trip() {
        let cube = builders::cube();
        let perm: Vec<Label> = vec![3, 1, 2, 6, 4, 5];
        let mut inverse = vec![0; 6];
        for (i, &p) in perm.iter().enumerate() {
            inverse[p as usize - 1] = i as Label + 1;
        }
        let there = cube.relabel_hyperfaces(&perm).unwrap();
        assert!(there.validate().ok());
        let back = there.relabel_hyperfaces(&inverse).unwrap();
        assert_eq!(back, cube);
    }
}

//! Fixture builders: the worked example complexes and parametrized families
//! used as test anchors, plus a seeded random-product generator.
//!
//! Every builder returns a complex that passes validation. Builders are
//! addressable by name from the CLI, e.g. `--builder two_chambers:3`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Face, FaceComplex, FaceId, Label};
use crate::products;
use crate::{Error, Result};

fn tuple_id(tuple: &[Label]) -> String {
    if tuple.is_empty() {
        "int".to_string()
    } else {
        let parts: Vec<String> = tuple.iter().map(u32::to_string).collect();
        format!("f{}", parts.join("_"))
    }
}

/// Renames every face after its tuple; requires tuples to be unique (true
/// for products of intervals) and drops factor provenance.
fn renamed_by_tuple(cx: &FaceComplex) -> FaceComplex {
    let map: HashMap<FaceId, String> = cx
        .faces()
        .iter()
        .map(|f| (f.id().clone(), tuple_id(f.tuple())))
        .collect();
    let faces = cx
        .faces()
        .iter()
        .map(|f| {
            let parents = f
                .parents()
                .iter()
                .map(|(&l, pid)| (l, FaceId::new(map[pid].clone())))
                .collect();
            Face::new(map[f.id()].clone(), f.tuple().to_vec(), parents)
        })
        .collect();
    FaceComplex::new(cx.num_hyperfaces(), faces).expect("renaming preserves structure")
}

/// Closed manifold: the interior face only.
pub fn smooth() -> FaceComplex {
    FaceComplex::new(0, vec![Face::interior("int")]).expect("smooth complex")
}

/// One boundary hyperface, nothing deeper.
pub fn halfline() -> FaceComplex {
    n_boundary_components(1).expect("n = 1 is in range")
}

/// Two boundary hyperfaces, nothing deeper.
pub fn interval() -> FaceComplex {
    n_boundary_components(2).expect("n = 2 is in range")
}

/// Codimension-1 manifold whose boundary has `n` connected components.
pub fn n_boundary_components(n: u32) -> Result<FaceComplex> {
    if n == 0 {
        return Err(Error::Builder(
            "n_boundary_components requires n >= 1".to_string(),
        ));
    }
    let mut faces = vec![Face::interior("int")];
    for i in 1..=n {
        faces.push(Face::new(
            tuple_id(&[i]),
            vec![i],
            BTreeMap::from([(i, FaceId::from("int"))]),
        ));
    }
    FaceComplex::new(n, faces).map_err(|e| Error::Builder(e.to_string()))
}

/// Two hyperfaces meeting in a single corner.
pub fn quarter_plane() -> FaceComplex {
    let faces = vec![
        Face::interior("int"),
        Face::new("f1", vec![1], BTreeMap::from([(1, FaceId::from("int"))])),
        Face::new("f2", vec![2], BTreeMap::from([(2, FaceId::from("int"))])),
        Face::new(
            "f1_2",
            vec![1, 2],
            BTreeMap::from([(1, FaceId::from("f2")), (2, FaceId::from("f1"))]),
        ),
    ];
    FaceComplex::new(2, faces).expect("quarter plane complex")
}

/// Two chambers glued along `k + 1` disks: two hyperfaces and `k + 1`
/// codimension-2 circles `s0..sk`, each bounding both hyperfaces.
pub fn two_chambers(k: u32) -> FaceComplex {
    let mut faces = vec![
        Face::interior("int"),
        Face::new("f1", vec![1], BTreeMap::from([(1, FaceId::from("int"))])),
        Face::new("f2", vec![2], BTreeMap::from([(2, FaceId::from("int"))])),
    ];
    for j in 0..=k {
        faces.push(Face::new(
            format!("s{j}"),
            vec![1, 2],
            BTreeMap::from([(1, FaceId::from("f2")), (2, FaceId::from("f1"))]),
        ));
    }
    FaceComplex::new(2, faces).expect("two chambers complex")
}

/// The square: product of two intervals, faces named after their tuples.
pub fn square() -> FaceComplex {
    let p = products::product(&interval(), &interval()).expect("interval ids cannot collide");
    renamed_by_tuple(&p)
}

/// The cube: product of an interval and a square. Labels 1,2 / 3,4 / 5,6
/// pair the opposite hyperfaces per axis.
pub fn cube() -> FaceComplex {
    let p = products::product(&interval(), &square()).expect("interval ids cannot collide");
    renamed_by_tuple(&p)
}

/// Cube with a small open cube removed from its interior: the outer face
/// poset plus a disjoint copy on fresh labels 7..12, sharing the interior.
pub fn cube_with_cubic_hole() -> FaceComplex {
    let outer = cube();
    let mut faces: Vec<Face> = outer.faces().to_vec();
    for f in outer.faces().iter().filter(|f| f.codim() >= 1) {
        let tuple: Vec<Label> = f.tuple().iter().map(|&l| l + 6).collect();
        let parents = f
            .parents()
            .iter()
            .map(|(&l, pid)| {
                let parent = outer.face(pid).expect("parent exists");
                let shifted: Vec<Label> = parent.tuple().iter().map(|&l| l + 6).collect();
                (l + 6, FaceId::new(tuple_id(&shifted)))
            })
            .collect();
        faces.push(Face::new(tuple_id(&tuple), tuple, parents));
    }
    FaceComplex::new(12, faces).expect("cube with cubic hole complex")
}

/// Cube with a small open ball removed: one extra hyperface (the sphere)
/// meeting nothing else.
pub fn cube_with_ball_hole() -> FaceComplex {
    let outer = cube();
    let mut faces: Vec<Face> = outer.faces().to_vec();
    faces.push(Face::new(
        "f7",
        vec![7],
        BTreeMap::from([(7, FaceId::from("int"))]),
    ));
    FaceComplex::new(7, faces).expect("cube with ball hole complex")
}

/// Deterministic seeded product of named builders: the factors are built in
/// order, multiplied, and the hyperface labels of the result are shuffled by
/// a seed-derived permutation. The factor list is recorded as provenance.
pub fn random_product(seed: u64, specs: &[BuilderId]) -> Result<FaceComplex> {
    if specs.is_empty() {
        return Err(Error::Builder(
            "random_product needs at least one factor".to_string(),
        ));
    }
    let factors: Vec<FaceComplex> = specs.iter().map(build).collect::<Result<_>>()?;
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = products::product(&acc, f)?;
    }
    if factors.len() > 1 {
        acc = acc.with_factors(factors);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = acc.num_hyperfaces() as usize;
    let mut perm: Vec<Label> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        perm.swap(i, j);
    }
    acc.relabel_hyperfaces(&perm)
}

/// A builder name with integer parameters, as written on the command line
/// (`two_chambers:3`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuilderId {
    pub name: String,
    pub args: Vec<i64>,
}

impl BuilderId {
    pub fn plain(name: &str) -> Self {
        BuilderId {
            name: name.to_string(),
            args: Vec::new(),
        }
    }

    pub fn with_arg(name: &str, arg: i64) -> Self {
        BuilderId {
            name: name.to_string(),
            args: vec![arg],
        }
    }
}

impl fmt::Display for BuilderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            let parts: Vec<String> = self.args.iter().map(i64::to_string).collect();
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for BuilderId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = match s.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (s, None),
        };
        if name.is_empty() {
            return Err(Error::Builder("empty builder name".to_string()));
        }
        let mut args = Vec::new();
        if let Some(rest) = rest {
            for part in rest.split(',') {
                let value: i64 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::Builder(format!("bad builder parameter '{part}'")))?;
                args.push(value);
            }
        }
        Ok(BuilderId {
            name: name.to_string(),
            args,
        })
    }
}

/// Builds the named complex, rejecting unknown names and out-of-range
/// parameters.
pub fn build(id: &BuilderId) -> Result<FaceComplex> {
    let expect_args = |n: usize| -> Result<()> {
        if id.args.len() == n {
            Ok(())
        } else {
            Err(Error::Builder(format!(
                "builder '{}' takes {} parameter(s), got {}",
                id.name,
                n,
                id.args.len()
            )))
        }
    };
    match id.name.as_str() {
        "smooth" => expect_args(0).map(|()| smooth()),
        "halfline" => expect_args(0).map(|()| halfline()),
        "interval" => expect_args(0).map(|()| interval()),
        "quarter_plane" => expect_args(0).map(|()| quarter_plane()),
        "square" => expect_args(0).map(|()| square()),
        "cube" => expect_args(0).map(|()| cube()),
        "cube_with_cubic_hole" => expect_args(0).map(|()| cube_with_cubic_hole()),
        "cube_with_ball_hole" => expect_args(0).map(|()| cube_with_ball_hole()),
        "n_boundary_components" => {
            expect_args(1)?;
            let n = id.args[0];
            if n < 1 {
                return Err(Error::Builder(
                    "n_boundary_components requires n >= 1".to_string(),
                ));
            }
            n_boundary_components(n as u32)
        }
        "two_chambers" => {
            expect_args(1)?;
            let k = id.args[0];
            if k < 0 {
                return Err(Error::Builder("two_chambers requires k >= 0".to_string()));
            }
            Ok(two_chambers(k as u32))
        }
        other => Err(Error::Builder(format!("unknown builder '{other}'"))),
    }
}

/// Names of all builders usable without parameters plus small parametrized
/// instances; the standard fixture set for property suites.
pub fn fixture_ids() -> Vec<BuilderId> {
    vec![
        BuilderId::plain("smooth"),
        BuilderId::plain("halfline"),
        BuilderId::plain("interval"),
        BuilderId::with_arg("n_boundary_components", 3),
        BuilderId::with_arg("n_boundary_components", 4),
        BuilderId::with_arg("n_boundary_components", 5),
        BuilderId::plain("quarter_plane"),
        BuilderId::with_arg("two_chambers", 0),
        BuilderId::with_arg("two_chambers", 1),
        BuilderId::with_arg("two_chambers", 2),
        BuilderId::with_arg("two_chambers", 3),
        BuilderId::plain("square"),
        BuilderId::plain("cube"),
        BuilderId::plain("cube_with_cubic_hole"),
        BuilderId::plain("cube_with_ball_hole"),
    ]
}

/// The standard fixture complexes, in `fixture_ids` order.
pub fn fixtures() -> Vec<FaceComplex> {
    fixture_ids()
        .iter()
        .map(|id| build(id).expect("fixture ids are in range"))
        .collect()
}

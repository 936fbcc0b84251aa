//! Headline outputs: corner characters, the K-theory groups of the algebra
//! of b-compact operators, and the Fredholm-perturbation diagnostic, bundled
//! into a deterministic report.
//!
//! K-theory is output-only: the groups are read off the periodic conormal
//! homology when the certified hypothesis holds (the complex is a declared
//! finite product of factors of codimension <= 3, with one factor of
//! codimension <= 2 or total codimension <= 3). Otherwise the report either
//! downgrades to rational dimensions or marks the values conjectural; it
//! never over-claims integrality.

use serde::Serialize;

use crate::complex::FaceComplex;
use crate::homology::{self, HomologyTable};
use crate::linalg::AbelianGroup;
use crate::{Error, Result};

/// Rational dimensions of the periodic homology and their difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CornerCharacters {
    pub chi0: usize,
    pub chi1: usize,
    pub chi: i64,
}

fn alternating_face_count(cx: &FaceComplex) -> i64 {
    (0..=cx.max_codim())
        .map(|p| {
            let c = cx.faces_of_codim(p).len() as i64;
            if p % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .sum()
}

fn characters_from_table(cx: &FaceComplex, table: &HomologyTable) -> Result<CornerCharacters> {
    let chi0 = table.even.rational_dim();
    let chi1 = table.odd.rational_dim();
    let chi = chi0 as i64 - chi1 as i64;
    let by_counts = alternating_face_count(cx);
    if chi != by_counts {
        return Err(Error::Invalid(format!(
            "character identity violated: homology route gives {chi}, face counts give {by_counts}"
        )));
    }
    Ok(CornerCharacters { chi0, chi1, chi })
}

/// Even and odd corner characters via homology ranks, cross-checked against
/// the alternating face-count identity.
pub fn corner_characters(cx: &FaceComplex) -> Result<CornerCharacters> {
    cx.ensure_valid()?;
    let table = homology::conormal_homology(cx)?;
    characters_from_table(cx, &table)
}

/// What the recorded factorization certifies about the complex.
#[derive(Clone, Debug, Serialize)]
pub struct Applicability {
    /// Codimensions of the declared factors, the complex itself when atomic.
    pub factor_codims: Vec<usize>,
    pub total_codim: usize,
    /// Factor codimensions are plausible: they sum to the total codimension
    /// and every declared factor validates.
    pub provenance_consistent: bool,
    /// Declared product of factors of codimension <= 3.
    pub product_of_codim_le3: bool,
    /// Some declared factor has codimension <= 2.
    pub has_factor_codim_le2: bool,
}

fn flatten_factor_codims(cx: &FaceComplex, out: &mut Vec<usize>, all_valid: &mut bool) {
    if cx.factors().is_empty() {
        out.push(cx.max_codim());
        return;
    }
    for f in cx.factors() {
        if !f.validate().ok() {
            *all_valid = false;
        }
        flatten_factor_codims(f, out, all_valid);
    }
}

/// Evaluates the factorization provenance. Provenance is data, not
/// inference: nothing is factored automatically.
pub fn applicability(cx: &FaceComplex) -> Applicability {
    let mut factor_codims = Vec::new();
    let mut all_valid = true;
    flatten_factor_codims(cx, &mut factor_codims, &mut all_valid);
    let total_codim = cx.max_codim();
    let provenance_consistent = all_valid && factor_codims.iter().sum::<usize>() == total_codim;
    let product_of_codim_le3 = provenance_consistent && factor_codims.iter().all(|&c| c <= 3);
    let has_factor_codim_le2 = provenance_consistent && factor_codims.iter().any(|&c| c <= 2);
    Applicability {
        factor_codims,
        total_codim,
        provenance_consistent,
        product_of_codim_le3,
        has_factor_codim_le2,
    }
}

/// Why the K-theory groups are exact over Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegralReason {
    /// Some declared factor has codimension at most two.
    FactorCodimAtMostTwo,
    /// The total codimension is at most three.
    TotalCodimAtMostThree,
}

/// K-theory of the b-compact operator algebra, derived from periodic
/// conormal homology with an explicit integrality status.
#[derive(Clone, Debug, PartialEq)]
pub enum KTheory {
    /// Certified exact over Z.
    Integral {
        k0: AbelianGroup,
        k1: AbelianGroup,
        reason: IntegralReason,
    },
    /// Certified after rationalization only; dimensions of `K_i ⊗ Q`.
    Rational { dim_k0: usize, dim_k1: usize },
    /// Outside the certified scope; periodic homology reported as the
    /// conjectural value.
    Conjectural { k0: AbelianGroup, k1: AbelianGroup },
}

impl KTheory {
    pub fn rational_dims(&self) -> (usize, usize) {
        match self {
            KTheory::Integral { k0, k1, .. } | KTheory::Conjectural { k0, k1 } => {
                (k0.rational_dim(), k1.rational_dim())
            }
            KTheory::Rational { dim_k0, dim_k1 } => (*dim_k0, *dim_k1),
        }
    }

    pub fn is_integral(&self) -> bool {
        matches!(self, KTheory::Integral { .. })
    }
}

/// Derives the K-theory groups with an integrality certificate from the
/// factorization provenance; refuses to claim exact groups without one.
pub fn ktheory_groups(cx: &FaceComplex) -> Result<KTheory> {
    cx.ensure_valid()?;
    let table = homology::conormal_homology(cx)?;
    Ok(ktheory_from_parts(&applicability(cx), &table))
}

fn ktheory_from_parts(app: &Applicability, table: &HomologyTable) -> KTheory {
    if app.product_of_codim_le3 {
        if app.has_factor_codim_le2 {
            KTheory::Integral {
                k0: table.even.clone(),
                k1: table.odd.clone(),
                reason: IntegralReason::FactorCodimAtMostTwo,
            }
        } else if app.total_codim <= 3 {
            KTheory::Integral {
                k0: table.even.clone(),
                k1: table.odd.clone(),
                reason: IntegralReason::TotalCodimAtMostThree,
            }
        } else {
            KTheory::Rational {
                dim_k0: table.even.rational_dim(),
                dim_k1: table.odd.rational_dim(),
            }
        }
    } else {
        KTheory::Conjectural {
            k0: table.even.clone(),
            k1: table.odd.clone(),
        }
    }
}

/// Obstruction flags for the Fredholm perturbation properties.
#[derive(Clone, Debug, Serialize)]
pub struct FredholmFlags {
    pub chi0_vanishes: bool,
    pub h0pcn_trivial: bool,
    pub h0pcn_torsion_free: bool,
    /// `chi0 != 0`: no perturbation to a Fredholm operator can exist.
    pub necessary_fp_obstruction: bool,
    /// Trivial or torsion-free-with-vanishing-character even group: the
    /// stably homotopic perturbation property holds.
    pub sufficient_hfp: bool,
}

#[derive(Clone, Debug)]
pub enum FredholmAssessment {
    /// Codimension 0: the criteria concern manifolds with boundary.
    NotApplicable {
        reason: String,
    },
    Flags(FredholmFlags),
}

pub fn fredholm_diagnostic(cx: &FaceComplex) -> Result<FredholmAssessment> {
    cx.ensure_valid()?;
    let table = homology::conormal_homology(cx)?;
    let chars = characters_from_table(cx, &table)?;
    Ok(fredholm_from_parts(cx, &table, &chars))
}

fn fredholm_from_parts(
    cx: &FaceComplex,
    table: &HomologyTable,
    chars: &CornerCharacters,
) -> FredholmAssessment {
    if cx.max_codim() == 0 {
        return FredholmAssessment::NotApplicable {
            reason: "theorem not applicable (closed manifold)".to_string(),
        };
    }
    let chi0_vanishes = chars.chi0 == 0;
    let h0pcn_trivial = table.even.is_trivial();
    let h0pcn_torsion_free = table.even.is_torsion_free();
    FredholmAssessment::Flags(FredholmFlags {
        chi0_vanishes,
        h0pcn_trivial,
        h0pcn_torsion_free,
        necessary_fp_obstruction: !chi0_vanishes,
        sufficient_hfp: h0pcn_trivial || (h0pcn_torsion_free && chi0_vanishes),
    })
}

/// The full deterministic report for one complex.
#[derive(Clone, Debug)]
pub struct CornerReport {
    pub source: String,
    pub num_hyperfaces: u32,
    pub max_codim: usize,
    pub face_counts: Vec<usize>,
    pub characters: CornerCharacters,
    pub homology: HomologyTable,
    pub ktheory: KTheory,
    pub fredholm: FredholmAssessment,
    pub applicability: Applicability,
}

pub fn corner_report(cx: &FaceComplex, source: &str) -> Result<CornerReport> {
    cx.ensure_valid()?;
    let table = homology::conormal_homology(cx)?;
    let characters = characters_from_table(cx, &table)?;
    let app = applicability(cx);
    let ktheory = ktheory_from_parts(&app, &table);
    let fredholm = fredholm_from_parts(cx, &table, &characters);
    Ok(CornerReport {
        source: source.to_string(),
        num_hyperfaces: cx.num_hyperfaces(),
        max_codim: cx.max_codim(),
        face_counts: (0..=cx.max_codim())
            .map(|p| cx.faces_of_codim(p).len())
            .collect(),
        characters,
        homology: table,
        ktheory,
        fredholm,
        applicability: app,
    })
}

impl CornerReport {
    /// Canonical human-readable rendering; identical inputs give identical
    /// text.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("corner report: {}", self.source));
        line(format!("hyperfaces: {}", self.num_hyperfaces));
        line(format!("max codimension: {}", self.max_codim));
        let counts: Vec<String> = self.face_counts.iter().map(usize::to_string).collect();
        line(format!("face counts: {}", counts.join(" ")));
        line(String::new());
        line("homology by codimension:".to_string());
        for (p, g) in self.homology.by_codim.iter().enumerate() {
            line(format!("  H_{p}^cn = {g}"));
        }
        line(format!("H0^pcn = {}", self.homology.even));
        line(format!("H1^pcn = {}", self.homology.odd));
        line(String::new());
        line("corner characters:".to_string());
        line(format!("chi0 = {}", self.characters.chi0));
        line(format!("chi1 = {}", self.characters.chi1));
        line(format!("chi = {}", self.characters.chi));
        line(String::new());
        line("K-theory of b-compact operators:".to_string());
        match &self.ktheory {
            KTheory::Integral { k0, k1, reason } => {
                line(format!("K0 = {k0}"));
                line(format!("K1 = {k1}"));
                let why = match reason {
                    IntegralReason::FactorCodimAtMostTwo => {
                        "integral (a declared factor has codimension <= 2)"
                    }
                    IntegralReason::TotalCodimAtMostThree => "integral (total codimension <= 3)",
                };
                line(format!("integrality: {why}"));
            }
            KTheory::Rational { dim_k0, dim_k1 } => {
                line(format!("K0 (rational) = Q^{dim_k0}"));
                line(format!("K1 (rational) = Q^{dim_k1}"));
                line(
                    "integrality: rational only (no factor of codimension <= 2 declared)"
                        .to_string(),
                );
            }
            KTheory::Conjectural { k0, k1 } => {
                line(format!("K0 (conjectural) = {k0}"));
                line(format!("K1 (conjectural) = {k1}"));
                line("integrality: conjectural (not a declared product of factors of codimension <= 3)".to_string());
            }
        }
        line(String::new());
        line("Fredholm perturbation diagnostic:".to_string());
        match &self.fredholm {
            FredholmAssessment::NotApplicable { reason } => line(reason.clone()),
            FredholmAssessment::Flags(f) => {
                line(format!("chi0_vanishes = {}", f.chi0_vanishes));
                line(format!("h0pcn_trivial = {}", f.h0pcn_trivial));
                line(format!("h0pcn_torsion_free = {}", f.h0pcn_torsion_free));
                line(format!(
                    "necessary_FP_obstruction = {}",
                    f.necessary_fp_obstruction
                ));
                line(format!("sufficient_HFP = {}", f.sufficient_hfp));
            }
        }
        let codims: Vec<String> = self
            .applicability
            .factor_codims
            .iter()
            .map(usize::to_string)
            .collect();
        line(format!(
            "applicability: factors of codimension [{}]; certified product of codim <= 3 factors: {}; factor of codim <= 2: {}",
            codims.join(", "),
            self.applicability.product_of_codim_le3,
            self.applicability.has_factor_codim_le2
        ));
        out
    }

    /// Machine-readable rendering with the same content as the text block.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ReportDoc::from(self))?)
    }
}

#[derive(Serialize)]
struct GroupDoc {
    rank: usize,
    torsion: Vec<String>,
    display: String,
}

impl From<&AbelianGroup> for GroupDoc {
    fn from(g: &AbelianGroup) -> Self {
        GroupDoc {
            rank: g.free_rank(),
            torsion: g.torsion().iter().map(|d| d.to_string()).collect(),
            display: g.to_string(),
        }
    }
}

#[derive(Serialize)]
struct KTheoryDoc {
    status: &'static str,
    k0: Option<GroupDoc>,
    k1: Option<GroupDoc>,
    dim_k0: usize,
    dim_k1: usize,
    reason: Option<String>,
}

#[derive(Serialize)]
struct ReportDoc {
    source: String,
    num_hyperfaces: u32,
    max_codim: usize,
    face_counts: Vec<usize>,
    characters: CornerCharacters,
    homology_by_codim: Vec<GroupDoc>,
    h0_pcn: GroupDoc,
    h1_pcn: GroupDoc,
    ktheory: KTheoryDoc,
    fredholm: Option<FredholmFlags>,
    fredholm_note: Option<String>,
    applicability: Applicability,
}

impl From<&CornerReport> for ReportDoc {
    fn from(r: &CornerReport) -> Self {
        let (dim_k0, dim_k1) = r.ktheory.rational_dims();
        let ktheory = match &r.ktheory {
            KTheory::Integral { k0, k1, reason } => KTheoryDoc {
                status: "integral",
                k0: Some(k0.into()),
                k1: Some(k1.into()),
                dim_k0,
                dim_k1,
                reason: Some(format!("{reason:?}")),
            },
            KTheory::Rational { .. } => KTheoryDoc {
                status: "rational",
                k0: None,
                k1: None,
                dim_k0,
                dim_k1,
                reason: None,
            },
            KTheory::Conjectural { k0, k1 } => KTheoryDoc {
                status: "conjectural",
                k0: Some(k0.into()),
                k1: Some(k1.into()),
                dim_k0,
                dim_k1,
                reason: None,
            },
        };
        let (fredholm, fredholm_note) = match &r.fredholm {
            FredholmAssessment::Flags(f) => (Some(f.clone()), None),
            FredholmAssessment::NotApplicable { reason } => (None, Some(reason.clone())),
        };
        ReportDoc {
            source: r.source.clone(),
            num_hyperfaces: r.num_hyperfaces,
            max_codim: r.max_codim,
            face_counts: r.face_counts.clone(),
            characters: r.characters,
            homology_by_codim: r.homology.by_codim.iter().map(GroupDoc::from).collect(),
            h0_pcn: (&r.homology.even).into(),
            h1_pcn: (&r.homology.odd).into(),
            ktheory,
            fredholm,
            fredholm_note,
            applicability: r.applicability.clone(),
        }
    }
}

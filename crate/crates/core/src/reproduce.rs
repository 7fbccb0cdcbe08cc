//! End-to-end check that two non-isomorphic groups of the family have
//! isomorphic fibered Burnside rings.

use serde::Serialize;
use thiserror::Error;

use crate::fiber::AbelianFiber;
use crate::group::are_isomorphic;
use crate::monomial::BurnsideRing;
use crate::species::{thevenaz_witness, verify_species, SpeciesError, SpeciesWitness, Verdict};
use crate::thevenaz::{class_count, family_isomorphic, partition, ThevenazError, ThevenazGroup, ThevenazSpec};

#[derive(Debug, Clone)]
pub struct ReproduceParams {
    pub p: u64,
    pub q: u64,
    /// `None` picks the least pair of the first two isomorphism classes.
    pub pairs: Option<((u64, u64), (u64, u64))>,
    pub fiber: AbelianFiber,
}

impl Default for ReproduceParams {
    fn default() -> Self {
        ReproduceParams { p: 11, q: 5, pairs: Some(((3, 9), (3, 4))), fiber: AbelianFiber::cyclic(5) }
    }
}

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error("stage {stage} failed: {message}")]
    Stage { stage: &'static str, message: String },
    #[error("p={p}, q={q} gives {classes} isomorphism class(es); no pair of non-isomorphic groups exists")]
    NoCounterexample { p: u64, q: u64, classes: usize },
    #[error(transparent)]
    Thevenaz(#[from] ThevenazError),
    #[error(transparent)]
    Species(#[from] SpeciesError),
}

#[derive(Debug, Clone, Serialize)]
pub struct StageResult {
    pub stage: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisCorrespondence {
    pub g_index: usize,
    pub h_index: usize,
    pub subgroup: String,
    pub subgroup_order: usize,
    pub character: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproduceReport {
    pub spec_g: String,
    pub spec_h: String,
    pub fiber: Vec<u64>,
    pub canonical_classes: Vec<String>,
    pub marks: Vec<Vec<u64>>,
    pub basis_size: usize,
    pub partition: Vec<Vec<(u64, u64)>>,
    pub witness: SpeciesWitness,
    pub basis_bijection: Vec<BasisCorrespondence>,
    pub stages: Vec<StageResult>,
}

fn stage(stages: &mut Vec<StageResult>, name: &'static str, ok: bool, detail: String) -> Result<(), ReproduceError> {
    if !ok {
        return Err(ReproduceError::Stage { stage: name, message: detail });
    }
    stages.push(StageResult { stage: name, passed: true, detail });
    Ok(())
}

pub fn reproduce(params: &ReproduceParams) -> Result<ReproduceReport, ReproduceError> {
    let ReproduceParams { p, q, ref fiber, .. } = *params;
    let classes = partition(p, q)?;
    let (pair_g, pair_h) = match params.pairs {
        Some(pairs) => pairs,
        None if classes.len() >= 2 => (classes[0][0], classes[1][0]),
        None => return Err(ReproduceError::NoCounterexample { p, q, classes: classes.len() }),
    };
    if !fiber.has_trivial_torsion(p) {
        return Err(ThevenazError::FiberHasPTorsion { p }.into());
    }
    let sg = ThevenazSpec::new(p, q, pair_g.0, pair_g.1)?;
    let sh = ThevenazSpec::new(p, q, pair_h.0, pair_h.1)?;
    let mut stages = Vec::new();

    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    stage(
        &mut stages,
        "classification",
        classes.len() as u64 == class_count(q),
        format!("{} valid pairs fall into {} classes of sizes {sizes:?}", sizes.iter().sum::<usize>(), classes.len()),
    )?;

    let tg = ThevenazGroup::build(sg)?;
    let th = ThevenazGroup::build(sh)?;
    let iso = are_isomorphic(tg.group(), th.group());
    stage(
        &mut stages,
        "non_isomorphism",
        iso.is_none() && !family_isomorphic(&sg, &sh),
        match iso {
            None => format!("no isomorphism G({sg}) -> G({sh}) exists"),
            Some(_) => format!("G({sg}) and G({sh}) are isomorphic"),
        },
    )?;

    let ring_g = BurnsideRing::new(tg.group().clone(), fiber.clone());
    let ring_h = BurnsideRing::new(th.group().clone(), fiber.clone());
    let marks_g = tg.canonical_marks(ring_g.classes())?;
    let marks_h = th.canonical_marks(ring_h.classes())?;
    let n = marks_g.len();
    stage(&mut stages, "marks", marks_g == marks_h, format!("{n}x{n} tables of marks agree in canonical order"))?;

    stage(
        &mut stages,
        "basis_size",
        ring_g.basis_len() == ring_h.basis_len(),
        format!("{} and {} basis elements", ring_g.basis_len(), ring_h.basis_len()),
    )?;

    let witness = thevenaz_witness(&tg, &ring_g, &th, &ring_h)?;
    let verdict = verify_species(&ring_g, &ring_h, &witness)?;
    let Verdict::Valid { basis_bijection } = verdict else {
        return Err(ReproduceError::Stage { stage: "witness", message: format!("{verdict:?}") });
    };
    let nb = ring_g.basis_len();
    stage(
        &mut stages,
        "witness",
        true,
        format!("γ preserved on all pairs; all {nb}x{nb} structure constants transported"),
    )?;

    let names = tg.canonical_names();
    let class_map = tg.canonical_class_map(ring_g.classes())?;
    let mut name_of = vec![String::new(); n];
    for (t, &c) in class_map.iter().enumerate() {
        name_of[c] = names[t].to_string();
    }
    let correspondence = basis_bijection
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let (c, k) = ring_g.basis_label(i);
            BasisCorrespondence {
                g_index: i,
                h_index: j,
                subgroup: name_of[c].clone(),
                subgroup_order: ring_g.classes().rep(c).order(),
                character: k,
            }
        })
        .collect();

    Ok(ReproduceReport {
        spec_g: sg.to_string(),
        spec_h: sh.to_string(),
        fiber: fiber.factors().to_vec(),
        canonical_classes: names.iter().map(ToString::to_string).collect(),
        marks: marks_g,
        basis_size: nb,
        partition: classes,
        witness,
        basis_bijection: correspondence,
        stages,
    })
}

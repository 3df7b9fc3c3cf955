//! End-to-end classification runs: enumerate, deduplicate, compute
//! invariants, verify the converse-Bott consistency on every record, and
//! resolve the available birational moves to table IDs.
//!
//! Ordering is deterministic: within each constructor family the Fano
//! records come first, each block sorted by the parameter key. Candidate
//! fans are processed in parallel but merged in enumeration order, so runs
//! are byte-reproducible for any thread count.

use rayon::prelude::*;

use crate::birational::{enumerate_moves, gorenstein_fano_wps, wps_weights, MoveOutcome};
use crate::chow::{h0_tangent, ChowRing};
use crate::cohomology::bott_converse_check;
use crate::constructors::{
    enumerate_batyrev_weak_fano, enumerate_kleinschmidt_weak_fano,
    enumerate_projective_bundles_weak_fano, recognize_kleinschmidt, BatyrevParams,
    KleinschmidtParams, ProjectiveBundleParams,
};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::iso::{are_isomorphic, fingerprint, iso_classes, Fingerprint};
use crate::lattice::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Kleinschmidt,
    ProjectiveBundle,
    Batyrev,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Kleinschmidt => "KL",
            Family::ProjectiveBundle => "PB",
            Family::Batyrev => "BC",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructorParams {
    Kleinschmidt(KleinschmidtParams),
    ProjectiveBundle(ProjectiveBundleParams),
    Batyrev(BatyrevParams),
}

impl std::fmt::Display for ConstructorParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConstructorParams::Kleinschmidt(p) => write!(f, "{p}"),
            ConstructorParams::ProjectiveBundle(p) => write!(f, "{p}"),
            ConstructorParams::Batyrev(p) => write!(f, "{p}"),
        }
    }
}

/// Where a move lands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveTarget {
    /// A smooth Picard-rank-2 variety in canonical Kleinschmidt form.
    Rank2 {
        params: KleinschmidtParams,
        weak_fano: bool,
        fano: bool,
    },
    /// A weighted projective space; weights sorted ascending.
    WeightedProjective {
        weights: Vec<i64>,
        gorenstein_fano: bool,
    },
    /// A record of the same classification run.
    Record { id: String },
    /// The source itself (self-flop).
    SelfTarget,
    /// Not matched to anything recognizable; carries the raw fan JSON.
    Unmatched { fan_json: String },
}

impl std::fmt::Display for MoveTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveTarget::Rank2 {
                params,
                weak_fano,
                fano,
            } => {
                let flag = if *fano {
                    "F"
                } else if *weak_fano {
                    "wF"
                } else {
                    "nwF"
                };
                let a: Vec<String> = params.a.iter().map(i64::to_string).collect();
                write!(f, "KL({},{{{}}})[{}]", params.dim, a.join(","), flag)
            }
            MoveTarget::WeightedProjective {
                weights,
                gorenstein_fano,
            } => {
                let w: Vec<String> = weights.iter().map(i64::to_string).collect();
                let flag = if *gorenstein_fano { "F" } else { "wF" };
                write!(f, "P({})[{}]", w.join(","), flag)
            }
            MoveTarget::Record { id } => write!(f, "{id}"),
            MoveTarget::SelfTarget => write!(f, "self"),
            MoveTarget::Unmatched { .. } => write!(f, "?"),
        }
    }
}

/// One resolved move of a classified record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveAnnotation {
    Blowdown {
        regular: bool,
        target: MoveTarget,
        /// Dimension of the blowup center in the source.
        center_dim: usize,
    },
    Flop { target: MoveTarget },
}

impl std::fmt::Display for MoveAnnotation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveAnnotation::Blowdown {
                regular,
                target,
                center_dim,
            } => {
                let kind = if *regular { "BD" } else { "BDnr" };
                write!(f, "{kind}:{target}@{center_dim}")
            }
            MoveAnnotation::Flop { target } => write!(f, "FLOP:{target}"),
        }
    }
}

/// One classification row.
#[derive(Clone, Debug)]
pub struct VarietyRecord {
    pub id: String,
    pub family: Family,
    pub params: ConstructorParams,
    pub fan: Fan,
    pub c1_top: Int,
    pub c1sq_c2: Int,
    pub h0_tangent: Int,
    pub fano: bool,
    pub weak_fano: bool,
    pub h1_omega1_anti_k: usize,
    pub moves: Vec<MoveAnnotation>,
    pub self_flop: bool,
}

#[derive(Clone, Debug)]
pub struct Provenance {
    pub tool_version: String,
    pub parameter_ranges: String,
}

#[derive(Clone, Debug)]
pub struct ClassificationRun {
    pub dim: usize,
    pub rank: u8,
    pub records: Vec<VarietyRecord>,
    pub provenance: Provenance,
}

impl ClassificationRun {
    pub fn record(&self, id: &str) -> Option<&VarietyRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn record_by_params(&self, params: &str) -> Option<&VarietyRecord> {
        self.records.iter().find(|r| r.params.to_string() == params)
    }
}

struct Candidate {
    family: Family,
    params: ConstructorParams,
    fan: Fan,
}

fn flat_key_kl(p: &KleinschmidtParams) -> Vec<i64> {
    let (len, a) = p.sort_key();
    let mut k = vec![len as i64];
    k.extend(a);
    k
}

fn flat_key_pb(p: &ProjectiveBundleParams) -> Vec<i64> {
    let (d, len, a, b, c) = p.sort_key();
    let mut k = vec![d as i64, len as i64];
    k.push(-1);
    k.extend(a);
    k.push(-1);
    k.extend(b);
    k.push(-1);
    k.extend(c);
    k
}

fn flat_key_bc(p: &BatyrevParams) -> Vec<i64> {
    let (pp, b, c) = p.sort_key();
    let mut k: Vec<i64> = pp.iter().map(|&x| x as i64).collect();
    k.push(-1);
    k.extend(b);
    k.push(-1);
    k.extend(c);
    k
}

/// Classifies all smooth weak Fano toric varieties of the given dimension
/// and Picard rank (2 or 3).
pub fn classify(dim: usize, rank: u8) -> Result<ClassificationRun> {
    if dim < 2 {
        return Err(Error::InvalidParams("need dimension >= 2".into()));
    }
    let candidates = match rank {
        2 => {
            let mut out = Vec::new();
            for (params, fan) in enumerate_kleinschmidt_weak_fano(dim)? {
                out.push(Candidate {
                    family: Family::Kleinschmidt,
                    params: ConstructorParams::Kleinschmidt(params),
                    fan,
                });
            }
            out
        }
        3 => {
            let mut out = Vec::new();
            if dim >= 3 {
                let raw = enumerate_projective_bundles_weak_fano(dim)?;
                for class in dedupe_classes(&raw.iter().map(|(_, f)| f.clone()).collect::<Vec<_>>())? {
                    // Representative: the smallest parameter key in the class.
                    let rep = class
                        .iter()
                        .min_by_key(|&&i| flat_key_pb(&raw[i].0))
                        .copied()
                        .expect("class is nonempty");
                    let (params, fan) = raw[rep].clone();
                    if fan.primitive_collections().len() != 3 {
                        return Err(Error::Internal(
                            "projective bundle without three primitive collections".into(),
                        ));
                    }
                    out.push(Candidate {
                        family: Family::ProjectiveBundle,
                        params: ConstructorParams::ProjectiveBundle(params),
                        fan,
                    });
                }
            }
            let raw = enumerate_batyrev_weak_fano(dim)?;
            for class in dedupe_classes(&raw.iter().map(|(_, f)| f.clone()).collect::<Vec<_>>())? {
                let rep = class
                    .iter()
                    .min_by_key(|&&i| flat_key_bc(&raw[i].0))
                    .copied()
                    .expect("class is nonempty");
                let (params, fan) = raw[rep].clone();
                if fan.primitive_collections().len() != 5 {
                    return Err(Error::Internal(
                        "Batyrev variety without five primitive collections".into(),
                    ));
                }
                out.push(Candidate {
                    family: Family::Batyrev,
                    params: ConstructorParams::Batyrev(params),
                    fan,
                });
            }
            out
        }
        _ => return Err(Error::InvalidParams("rank must be 2 or 3".into())),
    };

    // Invariants in parallel, merged in candidate order.
    let computed: Vec<Result<ComputedRecord>> = candidates
        .par_iter()
        .map(|c| compute_record(c))
        .collect();
    let mut computed: Vec<ComputedRecord> = computed.into_iter().collect::<Result<_>>()?;

    // Fano block first, then the weak block, each sorted by family and key.
    computed.sort_by(|a, b| {
        (a.candidate_family(), !a.fano, a.key())
            .cmp(&(b.candidate_family(), !b.fano, b.key()))
    });

    // Assign IDs.
    let mut pb_counter = 0usize;
    let mut bc_counter = 0usize;
    for rec in computed.iter_mut() {
        rec.id = match (&rec.family, &rec.params) {
            (Family::Kleinschmidt, ConstructorParams::Kleinschmidt(p)) => {
                let a: Vec<String> = p.a.iter().map(i64::to_string).collect();
                format!("KL({},{{{}}})", p.dim, a.join(","))
            }
            (Family::ProjectiveBundle, _) => {
                pb_counter += 1;
                format!("{dim}.PB-{pb_counter}")
            }
            (Family::Batyrev, _) => {
                bc_counter += 1;
                format!("{dim}.BC-{bc_counter}")
            }
            _ => return Err(Error::Internal("family/params mismatch".into())),
        };
    }

    // Resolve move targets against the assembled run.
    let prints: Vec<(Fingerprint, usize)> = computed
        .iter()
        .enumerate()
        .map(|(i, r)| fingerprint(&r.fan).map(|fp| (fp, i)))
        .collect::<Result<_>>()?;
    let mut records = Vec::with_capacity(computed.len());
    for rec in &computed {
        let mut moves = Vec::new();
        for outcome in &rec.raw_moves.outcomes {
            match outcome {
                MoveOutcome::Blowdown(mv) => {
                    let target_rank = mv.result.picard_rank();
                    let annotate = mv.regular || target_rank == 1;
                    if !annotate {
                        continue;
                    }
                    let target = resolve_blowdown_target(&mv.result)?;
                    moves.push(MoveAnnotation::Blowdown {
                        regular: mv.regular,
                        target,
                        center_dim: mv.center_dim,
                    });
                }
                MoveOutcome::Flop { mv, self_flop } => {
                    let target = if *self_flop {
                        MoveTarget::SelfTarget
                    } else if mv.result.picard_rank() == 2 {
                        resolve_blowdown_target(&mv.result)?
                    } else {
                        resolve_record_target(&mv.result, &computed, &prints)?
                    };
                    moves.push(MoveAnnotation::Flop { target });
                }
                MoveOutcome::NotAvailable { .. } => {}
            }
        }
        let mut move_strings: Vec<(String, MoveAnnotation)> = moves
            .into_iter()
            .map(|m| (m.to_string(), m))
            .collect();
        move_strings.sort_by(|a, b| a.0.cmp(&b.0));
        move_strings.dedup_by(|a, b| a.0 == b.0);
        records.push(VarietyRecord {
            id: rec.id.clone(),
            family: rec.family,
            params: rec.params.clone(),
            fan: rec.fan.clone(),
            c1_top: rec.c1_top.clone(),
            c1sq_c2: rec.c1sq_c2.clone(),
            h0_tangent: rec.h0_tangent.clone(),
            fano: rec.fano,
            weak_fano: true,
            h1_omega1_anti_k: rec.h1,
            moves: move_strings.into_iter().map(|(_, m)| m).collect(),
            self_flop: rec.self_flop,
        });
    }

    Ok(ClassificationRun {
        dim,
        rank,
        records,
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            parameter_ranges: match rank {
                2 => format!("kleinschmidt d'={dim}, nondecreasing a with sum(a) <= r+1"),
                _ => format!(
                    "projective bundles over weak Fano Kleinschmidt bases of dimension 2..{} \
                     within the degree inequalities; Batyrev 5-partitions of {} within the \
                     degree inequalities",
                    dim - 1,
                    dim + 3
                ),
            },
        },
    })
}

struct ComputedRecord {
    id: String,
    family: Family,
    params: ConstructorParams,
    fan: Fan,
    c1_top: Int,
    c1sq_c2: Int,
    h0_tangent: Int,
    fano: bool,
    h1: usize,
    raw_moves: crate::birational::MovesReport,
    self_flop: bool,
}

impl ComputedRecord {
    fn candidate_family(&self) -> Family {
        self.family
    }

    fn key(&self) -> Vec<i64> {
        match &self.params {
            ConstructorParams::Kleinschmidt(p) => flat_key_kl(p),
            ConstructorParams::ProjectiveBundle(p) => flat_key_pb(p),
            ConstructorParams::Batyrev(p) => flat_key_bc(p),
        }
    }
}

fn compute_record(candidate: &Candidate) -> Result<ComputedRecord> {
    let fan = &candidate.fan;
    let ring = ChowRing::new(fan)?;
    let c1_top = ring.c1_top()?;
    let c1sq_c2 = ring.c1sq_c2()?;
    let h0_tangent = h0_tangent(fan)?;
    let bott = bott_converse_check(fan)?;
    if !crate::divisor::is_weak_fano(fan)? {
        return Err(Error::Internal("classified fan is not weak Fano".into()));
    }
    let raw_moves = enumerate_moves(fan, false)?;
    let self_flop = raw_moves.flops().any(|(_, s)| s);
    Ok(ComputedRecord {
        id: String::new(),
        family: candidate.family,
        params: candidate.params.clone(),
        fan: fan.clone(),
        c1_top,
        c1sq_c2,
        h0_tangent,
        fano: bott.fano,
        h1: bott.h1_omega1_anti_k,
        raw_moves,
        self_flop,
    })
}

fn dedupe_classes(fans: &[Fan]) -> Result<Vec<Vec<usize>>> {
    iso_classes(fans)
}

/// Names a blowdown result: canonical Kleinschmidt form for smooth rank-2
/// results, weight vector for rank-1 results, raw JSON otherwise.
fn resolve_blowdown_target(result: &Fan) -> Result<MoveTarget> {
    if result.picard_rank() == 2 && result.is_smooth() {
        if let Some(params) = recognize_kleinschmidt(result) {
            let deg = params.y_degree();
            return Ok(MoveTarget::Rank2 {
                weak_fano: deg >= 0,
                fano: deg > 0,
                params,
            });
        }
    }
    if result.picard_rank() == 1 {
        if let Some(weights) = wps_weights(result) {
            let mut w: Vec<i64> = weights
                .iter()
                .map(|x| i64::try_from(x).map_err(|_| Error::Internal("weight overflow".into())))
                .collect::<Result<_>>()?;
            w.sort_unstable();
            let gorenstein = gorenstein_fano_wps(&weights);
            return Ok(MoveTarget::WeightedProjective {
                weights: w,
                gorenstein_fano: gorenstein,
            });
        }
    }
    Ok(MoveTarget::Unmatched {
        fan_json: crate::json::fan_to_json(result),
    })
}

fn resolve_record_target(
    result: &Fan,
    records: &[ComputedRecord],
    prints: &[(Fingerprint, usize)],
) -> Result<MoveTarget> {
    let fp = fingerprint(result)?;
    for (other_fp, idx) in prints {
        if *other_fp == fp && are_isomorphic(&records[*idx].fan, result)?.is_some() {
            return Ok(MoveTarget::Record {
                id: records[*idx].id.clone(),
            });
        }
    }
    Ok(MoveTarget::Unmatched {
        fan_json: crate::json::fan_to_json(result),
    })
}

/// Full quadratic distinctness check (behind the CLI `--verify` flag).
pub fn verify_distinctness(run: &ClassificationRun) -> Result<()> {
    for i in 0..run.records.len() {
        for j in i + 1..run.records.len() {
            if are_isomorphic(&run.records[i].fan, &run.records[j].fan)?.is_some() {
                return Err(Error::Internal(format!(
                    "records {} and {} are isomorphic",
                    run.records[i].id, run.records[j].id
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    #[test]
    fn surfaces_rank_two() {
        let run = classify(2, 2).unwrap();
        let ids: Vec<&str> = run.records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, vec!["KL(2,{0})", "KL(2,{1})", "KL(2,{2})"]);
        // P^1 x P^1, F_1 are not self-flopped; neither is F_2.
        assert!(run.records.iter().all(|r| !r.self_flop));
        // F_2 is the only non-Fano one.
        let flags: Vec<bool> = run.records.iter().map(|r| r.fano).collect();
        assert_eq!(flags, vec![true, true, false]);
    }

    #[test]
    fn surfaces_rank_three() {
        let run = classify(2, 3).unwrap();
        assert_eq!(run.records.len(), 2);
        assert_eq!(run.records[0].id, "2.BC-1");
        assert_eq!(run.records[0].params.to_string(), "({1,1,1,1,1}, {0}, {})");
        assert!(run.records[0].fano);
        assert_eq!(run.records[0].c1_top, int(7));
        assert_eq!(run.records[1].params.to_string(), "({1,1,1,1,1}, {1}, {})");
        assert!(!run.records[1].fano);
        assert_eq!(run.records[1].h1_omega1_anti_k > 0, true);
    }

    #[test]
    fn kleinschmidt_threefolds() {
        let run = classify(3, 2).unwrap();
        assert_eq!(run.records.len(), 7);
        let fano_count = run.records.iter().filter(|r| r.fano).count();
        assert_eq!(fano_count, 4);
        // The self-flop of (3, {1,1}).
        let rec = run.record("KL(3,{1,1})").unwrap();
        assert!(rec.self_flop);
        assert_eq!(rec.c1_top, int(54));
    }
}

//! Star subdivisions, blowdowns as verified inverse subdivisions, flops,
//! and exhaustive discovery of the operations available on a fan.
//!
//! A blowdown is constructed directly from the candidate cone collapse and
//! then certified by re-subdividing: `star_subdivision(result, Cone(P), u)`
//! must reproduce the source fan exactly (up to ray reindexing). This makes
//! the construction self-verifying instead of relying on transcribed
//! transformation rules.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{make_fan, Fan, PrimitiveCollection};
use crate::lattice::{kernel_of_columns, primitive_part, solve_in_basis, Int, IntVector};

/// A verified blowdown along `(P, u)` where `sum_P u_rho = a * u`.
#[derive(Clone, Debug)]
pub struct BlowdownMove {
    pub collection: PrimitiveCollection,
    /// Index of the contracted ray `u` in the source fan.
    pub removed_ray_index: usize,
    pub removed_ray: IntVector,
    /// The relation coefficient `a`; the move is regular only when `a = 1`.
    pub coefficient: Int,
    pub result: Fan,
    /// `a = 1` and the result is smooth.
    pub regular: bool,
    /// Dimension of the blowup center in the source: `d - |P|`.
    pub center_dim: usize,
}

/// A flop: star subdivision along `Cone(sigma(P))` followed by a blowdown
/// along `P`, for a balanced degree-zero relation.
#[derive(Clone, Debug)]
pub struct FlopMove {
    pub collection: PrimitiveCollection,
    /// Ray indices of sigma(P) in the source fan.
    pub target_rays: Vec<usize>,
    pub intermediate: Fan,
    pub result: Fan,
    /// True when extremality was not checked (non-projective input).
    pub formal: bool,
}

/// The star subdivision of the fan relative to `(sigma, u)`. When `u` is
/// not given it defaults to the primitive part of the generator sum, which
/// for a smooth cone is the sum itself.
pub fn star_subdivision(fan: &Fan, sigma: &[usize], u: Option<IntVector>) -> Result<Fan> {
    let mut sigma = sigma.to_vec();
    sigma.sort_unstable();
    sigma.dedup();
    if !fan.is_cone(&sigma) {
        return Err(Error::NotACone);
    }
    let sum = IntVector::sum(fan.dim(), sigma.iter().map(|&r| fan.ray(r)));
    let u = match u {
        Some(u) => u,
        None => primitive_part(&sum)?,
    };
    if u != primitive_part(&u)? {
        return Err(Error::NotInteriorVector);
    }
    // u must lie in the relative interior of sigma.
    let basis: Vec<IntVector> = sigma.iter().map(|&r| fan.ray(r).clone()).collect();
    match solve_in_basis(&basis, &u) {
        Ok(coords) if coords.iter().all(Signed::is_positive) => {}
        _ => return Err(Error::NotInteriorVector),
    }
    if fan.rays().contains(&u) {
        return Err(Error::InvalidParams(
            "subdivision vector is already a ray of the fan".into(),
        ));
    }
    let new_idx = fan.n_rays();
    let mut rays = fan.rays().to_vec();
    rays.push(u);
    let mut cones = Vec::new();
    for cone in fan.max_cones() {
        if sigma.iter().all(|r| cone.contains(r)) {
            for &x in &sigma {
                let mut replaced: Vec<usize> =
                    cone.iter().copied().filter(|&r| r != x).collect();
                replaced.push(new_idx);
                cones.push(replaced);
            }
        } else {
            cones.push(cone.clone());
        }
    }
    make_fan(fan.dim(), rays, cones)
}

/// Attempts the blowdown along a primitive collection whose relation is
/// `sum_P u_rho = a * u` for a single ray `u`. The candidate fan is built
/// by collapsing the cones through `u` and is then certified by
/// re-subdividing.
pub fn blowdown(fan: &Fan, p: &PrimitiveCollection) -> Result<BlowdownMove> {
    let relation = fan.primitive_relation(p)?;
    let (u_idx, coefficient) = match relation.single_ray_target() {
        Some((idx, a)) => (idx, a.clone()),
        None => {
            return Err(Error::NoBlowdown(format!(
                "relation of {:?} does not contract to a single ray",
                p.ray_indices
            )))
        }
    };
    if p.ray_indices.contains(&u_idx) {
        return Err(Error::NoBlowdown(
            "collection contains the contracted ray".into(),
        ));
    }
    let reindex = |r: usize| if r > u_idx { r - 1 } else { r };
    let mut rays: Vec<IntVector> = fan.rays().to_vec();
    let removed_ray = rays.remove(u_idx);
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for cone in fan.max_cones() {
        let mapped: Vec<usize> = if cone.contains(&u_idx) {
            let mut merged: Vec<usize> = cone
                .iter()
                .copied()
                .filter(|&r| r != u_idx)
                .chain(p.ray_indices.iter().copied())
                .collect();
            merged.sort_unstable();
            merged.dedup();
            if merged.len() != fan.dim() {
                return Err(Error::BlowdownVerification(format!(
                    "collapsed cone through {:?} has {} rays",
                    cone,
                    merged.len()
                )));
            }
            merged
        } else {
            cone.clone()
        };
        cones.push(mapped.iter().map(|&r| reindex(r)).collect());
    }
    cones.sort();
    cones.dedup();
    let result = make_fan(fan.dim(), rays, cones)
        .map_err(|e| Error::BlowdownVerification(format!("candidate is not a fan: {e}")))?;
    // Certification: subdividing the result along Cone(P) at u must give
    // back the source.
    let p_new: Vec<usize> = p.ray_indices.iter().map(|&r| reindex(r)).collect();
    let resubdivided = star_subdivision(&result, &p_new, Some(removed_ray.clone()))
        .map_err(|e| Error::BlowdownVerification(format!("re-subdivision failed: {e}")))?;
    if !resubdivided.same_up_to_ray_order(fan) {
        return Err(Error::BlowdownVerification(
            "re-subdivision does not reproduce the source fan".into(),
        ));
    }
    let regular = coefficient.is_one() && result.is_smooth();
    Ok(BlowdownMove {
        collection: p.clone(),
        removed_ray_index: u_idx,
        removed_ray,
        coefficient,
        regular,
        center_dim: fan.dim() - p.len(),
        result,
    })
}

/// Executes the flop along `P`: requires the balanced degree-zero relation
/// `sum_P x_i = sum_{sigma(P)} y_i` and, unless `formal` is set, that the
/// relation is extremal.
pub fn flop(fan: &Fan, p: &PrimitiveCollection, formal: bool) -> Result<FlopMove> {
    let relation = fan.primitive_relation(p)?;
    if !relation.is_balanced_degree_zero() {
        return Err(Error::NotFlopRelation(format!(
            "need sum_P x = sum_{{sigma(P)}} y with unit coefficients and |sigma(P)| = |P|; \
             got sigma rays {:?} with coefficients {:?}",
            relation.sigma_rays, relation.coefficients
        )));
    }
    if !formal && !crate::divisor::is_extremal(fan, p)? {
        return Err(Error::NotExtremal);
    }
    let u = IntVector::sum(fan.dim(), p.ray_indices.iter().map(|&r| fan.ray(r)));
    if primitive_part(&u)? != u {
        return Err(Error::Internal(
            "sum over a smooth cone is not primitive".into(),
        ));
    }
    let intermediate = star_subdivision(fan, &relation.sigma_rays, Some(u))?;
    let bd = blowdown(&intermediate, p)?;
    if bd.removed_ray_index != fan.n_rays() {
        return Err(Error::Internal(
            "flop blowdown removed an unexpected ray".into(),
        ));
    }
    let result = bd.result;
    if !result.is_smooth() || !result.is_complete() {
        return Err(Error::Internal("flop result is not smooth and complete".into()));
    }
    Ok(FlopMove {
        collection: p.clone(),
        target_rays: relation.sigma_rays,
        intermediate,
        result,
        formal,
    })
}

/// Whether the weighted projective space with this reduced weight vector is
/// Gorenstein Fano: each weight must divide the weight sum.
pub fn gorenstein_fano_wps(weights: &[Int]) -> bool {
    let sum: Int = weights.iter().sum();
    weights.iter().all(|q| (&sum % q).is_zero())
}

/// Weight vector of a (possibly singular) weighted projective space: the
/// fan must have d+1 rays with a one-dimensional, all-positive kernel.
/// Weights are returned in ray order.
pub fn wps_weights(fan: &Fan) -> Option<Vec<Int>> {
    if fan.n_rays() != fan.dim() + 1 || !fan.is_complete() {
        return None;
    }
    let kernel = kernel_of_columns(fan.rays(), fan.dim());
    if kernel.len() != 1 {
        return None;
    }
    let mut w = kernel[0].clone();
    if w.0.iter().any(Signed::is_negative) {
        w = w.neg();
    }
    if w.0.iter().any(|e| !e.is_positive()) {
        return None;
    }
    Some(w.0)
}

/// Outcome of scanning one primitive collection.
#[derive(Clone, Debug)]
pub enum MoveOutcome {
    Blowdown(BlowdownMove),
    Flop {
        mv: FlopMove,
        /// The result is isomorphic to the source.
        self_flop: bool,
    },
    /// The collection is not eligible for either operation, or the
    /// attempted operation failed verification.
    NotAvailable {
        collection: PrimitiveCollection,
        reason: String,
    },
}

/// Everything `enumerate_moves` finds, one entry per primitive collection.
#[derive(Clone, Debug, Default)]
pub struct MovesReport {
    pub outcomes: Vec<MoveOutcome>,
}

impl MovesReport {
    pub fn blowdowns(&self) -> impl Iterator<Item = &BlowdownMove> {
        self.outcomes.iter().filter_map(|o| match o {
            MoveOutcome::Blowdown(b) => Some(b),
            _ => None,
        })
    }

    pub fn flops(&self) -> impl Iterator<Item = (&FlopMove, bool)> {
        self.outcomes.iter().filter_map(|o| match o {
            MoveOutcome::Flop { mv, self_flop } => Some((mv, *self_flop)),
            _ => None,
        })
    }
}

/// Scans every primitive collection and classifies it as blowdown-eligible
/// (single-ray relation), flop-eligible (balanced degree-zero relation on
/// an extremal ray), or neither. With `formal` set, extremality is not
/// required (used for non-projective fans).
pub fn enumerate_moves(fan: &Fan, formal: bool) -> Result<MovesReport> {
    let mut outcomes = Vec::new();
    for p in fan.primitive_collections() {
        let relation = fan.primitive_relation(p)?;
        if relation.single_ray_target().is_some() {
            match blowdown(fan, p) {
                Ok(mv) => outcomes.push(MoveOutcome::Blowdown(mv)),
                Err(e) => outcomes.push(MoveOutcome::NotAvailable {
                    collection: p.clone(),
                    reason: e.to_string(),
                }),
            }
        } else if relation.is_balanced_degree_zero() {
            match flop(fan, p, formal) {
                Ok(mv) => {
                    let self_flop = crate::iso::are_isomorphic(fan, &mv.result)?.is_some();
                    outcomes.push(MoveOutcome::Flop { mv, self_flop });
                }
                Err(e) => outcomes.push(MoveOutcome::NotAvailable {
                    collection: p.clone(),
                    reason: e.to_string(),
                }),
            }
        } else {
            outcomes.push(MoveOutcome::NotAvailable {
                collection: p.clone(),
                reason: "relation is neither single-ray nor balanced degree zero".into(),
            });
        }
    }
    Ok(MovesReport { outcomes })
}

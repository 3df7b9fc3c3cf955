//! The fan kernel: validation, smoothness/completeness, cone queries,
//! primitive collections and primitive relations.
//!
//! A [`Fan`] is a rational simplicial fan given by its primitive ray
//! generators and its maximal cones, each of which is full-dimensional.
//! Ray order is significant and preserved; index sets are stored sorted.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Signed, Zero};
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::lattice::{
    fm_feasible, solve_in_basis, Inequality, Int, IntMatrix, IntVector,
};

/// Internal cap so cones can be manipulated as bitmasks.
const MAX_RAYS: usize = 128;

/// A set of ray indices that does not span a cone although every proper
/// subset does.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveCollection {
    pub ray_indices: Vec<usize>,
}

impl PrimitiveCollection {
    pub fn new(mut ray_indices: Vec<usize>) -> Self {
        ray_indices.sort_unstable();
        PrimitiveCollection { ray_indices }
    }

    pub fn len(&self) -> usize {
        self.ray_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ray_indices.is_empty()
    }
}

/// The primitive relation of a primitive collection: the unique expression
/// of the sum of the collection's generators as a positive integral
/// combination of the generators of the cone containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    /// Ray indices of sigma(P); empty for the zero cone.
    pub sigma_rays: Vec<usize>,
    /// Positive coefficients paired with `sigma_rays`.
    pub coefficients: Vec<Int>,
    /// Entry +1 on P, -a_i on sigma(P) rays, 0 elsewhere (overlaps summed);
    /// indexed by all rays of the fan.
    pub relation_vector: IntVector,
    /// |P| - sum of the coefficients.
    pub degree: Int,
}

impl PrimitiveRelation {
    /// True when the relation reads `sum_P u = a * u_ray` for a single ray.
    pub fn single_ray_target(&self) -> Option<(usize, &Int)> {
        if self.sigma_rays.len() == 1 {
            Some((self.sigma_rays[0], &self.coefficients[0]))
        } else {
            None
        }
    }

    /// True when the relation reads `sum_P u = sum_{sigma(P)} u` with all
    /// coefficients 1 and |sigma(P)| = |P| (the flop shape).
    pub fn is_balanced_degree_zero(&self) -> bool {
        self.sigma_rays.len() == self.collection.len()
            && self.coefficients.iter().all(One::is_one)
    }
}

/// A complete simplicial fan with primitive, pairwise-distinct rays.
#[derive(Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
    cone_masks: Vec<u128>,
    pc_cache: OnceCell<Vec<PrimitiveCollection>>,
    rel_cache: OnceCell<std::result::Result<Vec<PrimitiveRelation>, Error>>,
    smooth_cache: OnceCell<bool>,
    complete_cache: OnceCell<bool>,
}

impl PartialEq for Fan {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.max_cones == other.max_cones
    }
}

impl Eq for Fan {}

impl std::fmt::Debug for Fan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fan")
            .field("dim", &self.dim)
            .field("rays", &self.rays)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

fn mask_of(indices: &[usize]) -> u128 {
    indices.iter().fold(0u128, |m, &i| m | (1u128 << i))
}

fn indices_of(mask: u128) -> Vec<usize> {
    (0..MAX_RAYS).filter(|&i| mask & (1u128 << i) != 0).collect()
}

/// Validates and builds a fan. Runs the cheap structural checks; the
/// expensive pairwise intersection-is-a-face validator is opt-in via
/// [`make_fan_checked`].
pub fn make_fan(dim: usize, rays: Vec<IntVector>, max_cones: Vec<Vec<usize>>) -> Result<Fan> {
    Fan::build(dim, rays, max_cones, false)
}

/// Like [`make_fan`], but also verifies that every pair of maximal cones
/// intersects in a common face.
pub fn make_fan_checked(
    dim: usize,
    rays: Vec<IntVector>,
    max_cones: Vec<Vec<usize>>,
) -> Result<Fan> {
    Fan::build(dim, rays, max_cones, true)
}

impl Fan {
    fn build(
        dim: usize,
        rays: Vec<IntVector>,
        max_cones: Vec<Vec<usize>>,
        check_intersections: bool,
    ) -> Result<Fan> {
        if dim == 0 {
            return Err(Error::InvalidParams("fan dimension must be positive".into()));
        }
        if rays.len() > MAX_RAYS {
            return Err(Error::Internal(format!(
                "fans with more than {MAX_RAYS} rays are unsupported"
            )));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: ray.len(),
                });
            }
            if ray.is_zero() || crate::lattice::primitive_part(ray)? != *ray {
                return Err(Error::NonPrimitiveRay { index: i });
            }
            for (j, other) in rays.iter().enumerate().take(i) {
                if ray == other {
                    return Err(Error::DuplicateRay { index: i, first: j });
                }
            }
        }
        let mut cones: Vec<Vec<usize>> = Vec::with_capacity(max_cones.len());
        for (ci, cone) in max_cones.into_iter().enumerate() {
            let mut cone = cone;
            cone.sort_unstable();
            cone.dedup();
            if cone.len() != dim {
                return Err(Error::ConeSizeMismatch {
                    index: ci,
                    expected: dim,
                    got: cone.len(),
                });
            }
            if let Some(&bad) = cone.iter().find(|&&r| r >= rays.len()) {
                return Err(Error::RayIndexOutOfRange {
                    index: ci,
                    ray: bad,
                });
            }
            let mat = IntMatrix::from_cols(
                &cone.iter().map(|&r| rays[r].clone()).collect::<Vec<_>>(),
            );
            if mat.det()?.is_zero() {
                return Err(Error::DegenerateCone { index: ci });
            }
            cones.push(cone);
        }
        cones.sort();
        for w in cones.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Internal("duplicate maximal cone".into()));
            }
        }
        let mut used = vec![false; rays.len()];
        for cone in &cones {
            for &r in cone {
                used[r] = true;
            }
        }
        if let Some(idx) = used.iter().position(|u| !u) {
            return Err(Error::DanglingRay { index: idx });
        }
        let cone_masks = cones.iter().map(|c| mask_of(c)).collect();
        let fan = Fan {
            dim,
            rays,
            max_cones: cones,
            cone_masks,
            pc_cache: OnceCell::new(),
            rel_cache: OnceCell::new(),
            smooth_cache: OnceCell::new(),
            complete_cache: OnceCell::new(),
        };
        if check_intersections {
            fan.check_pairwise_intersections()?;
        }
        Ok(fan)
    }

    /// Verifies `Cone(sigma) \cap Cone(tau) = Cone(sigma \cap tau)` for every
    /// pair, by searching for a separating functional vanishing on the
    /// common rays. Exact but quadratic in the number of cones.
    fn check_pairwise_intersections(&self) -> Result<()> {
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                let a = &self.max_cones[i];
                let b = &self.max_cones[j];
                let common: Vec<usize> = a.iter().copied().filter(|r| b.contains(r)).collect();
                let mut rows = Vec::new();
                for &r in &common {
                    rows.push(Inequality::new(self.rays[r].0.clone(), Int::zero()));
                    rows.push(Inequality::new(
                        self.rays[r].0.iter().map(|e| -e).collect(),
                        Int::zero(),
                    ));
                }
                for &r in a.iter().filter(|r| !common.contains(r)) {
                    rows.push(Inequality::new(self.rays[r].0.clone(), Int::one()));
                }
                for &r in b.iter().filter(|r| !common.contains(r)) {
                    rows.push(Inequality::new(
                        self.rays[r].0.iter().map(|e| -e).collect(),
                        Int::one(),
                    ));
                }
                if !fm_feasible(&rows, self.dim) {
                    return Err(Error::ConesNotMeetingInFace {
                        first: i,
                        second: j,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn n_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn ray(&self, i: usize) -> &IntVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Picard rank of the associated variety: #rays - dim for smooth
    /// complete fans.
    pub fn picard_rank(&self) -> usize {
        self.n_rays() - self.dim
    }

    /// Column matrix of the rays of a maximal cone.
    pub fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        IntMatrix::from_cols(&cone.iter().map(|&r| self.rays[r].clone()).collect::<Vec<_>>())
    }

    /// True iff every maximal cone's rays form a lattice basis.
    pub fn is_smooth(&self) -> bool {
        *self.smooth_cache.get_or_init(|| {
            self.max_cones
                .iter()
                .all(|c| self.cone_matrix(c).det().map(|d| d.abs().is_one()).unwrap_or(false))
        })
    }

    /// Wall condition: every (d-1)-face of a maximal cone lies in exactly
    /// two maximal cones. For a valid simplicial fan this is equivalent to
    /// completeness.
    pub fn is_complete(&self) -> bool {
        *self.complete_cache.get_or_init(|| {
            self.wall_counts().values().all(|&c| c == 2)
        })
    }

    fn wall_counts(&self) -> HashMap<Vec<usize>, usize> {
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for cone in &self.max_cones {
            for omit in 0..cone.len() {
                let wall: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != omit)
                    .map(|(_, &r)| r)
                    .collect();
                *counts.entry(wall).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Pairs of maximal-cone indices sharing a wall.
    pub fn adjacent_cone_pairs(&self) -> Vec<(usize, usize)> {
        let mut by_wall: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        for (ci, cone) in self.max_cones.iter().enumerate() {
            for omit in 0..cone.len() {
                let wall: Vec<usize> = cone
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != omit)
                    .map(|(_, &r)| r)
                    .collect();
                by_wall.entry(wall).or_default().push(ci);
            }
        }
        let mut pairs: Vec<(usize, usize)> = by_wall
            .values()
            .filter(|v| v.len() == 2)
            .map(|v| (v[0].min(v[1]), v[0].max(v[1])))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    fn is_cone_mask(&self, mask: u128) -> bool {
        self.cone_masks.iter().any(|&c| c & mask == mask)
    }

    /// True iff the index set spans a cone of the fan, i.e. is contained in
    /// some maximal cone.
    pub fn is_cone(&self, indices: &[usize]) -> bool {
        if indices.iter().any(|&i| i >= self.n_rays()) {
            return false;
        }
        self.is_cone_mask(mask_of(indices))
    }

    /// How many maximal cones contain each ray.
    pub fn ray_membership_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_rays()];
        for cone in &self.max_cones {
            for &r in cone {
                counts[r] += 1;
            }
        }
        counts
    }

    /// The minimal non-faces of the complex of cone index sets, found by
    /// breadth-first extension of faces by one ray.
    pub fn primitive_collections(&self) -> &[PrimitiveCollection] {
        self.pc_cache.get_or_init(|| {
            let n = self.n_rays();
            let mut result: Vec<u128> = Vec::new();
            let mut faces_k: HashSet<u128> = (0..n).map(|i| 1u128 << i).collect();
            for _size in 1..=self.dim {
                let mut candidates: HashSet<u128> = HashSet::new();
                for &s in &faces_k {
                    for i in 0..n {
                        let bit = 1u128 << i;
                        if s & bit == 0 {
                            candidates.insert(s | bit);
                        }
                    }
                }
                let mut next_faces = HashSet::new();
                for &t in &candidates {
                    if self.is_cone_mask(t) {
                        next_faces.insert(t);
                        continue;
                    }
                    // Minimal non-face iff every facet is a face.
                    let mut bits = t;
                    let mut minimal = true;
                    while bits != 0 {
                        let b = bits & bits.wrapping_neg();
                        if !faces_k.contains(&(t ^ b)) {
                            minimal = false;
                            break;
                        }
                        bits ^= b;
                    }
                    if minimal {
                        result.push(t);
                    }
                }
                faces_k = next_faces;
                if faces_k.is_empty() {
                    break;
                }
            }
            let mut pcs: Vec<PrimitiveCollection> = result
                .into_iter()
                .map(|m| PrimitiveCollection::new(indices_of(m)))
                .collect();
            pcs.sort_by(|a, b| {
                (a.ray_indices.len(), &a.ray_indices).cmp(&(b.ray_indices.len(), &b.ray_indices))
            });
            pcs
        })
    }

    /// The unique cone (possibly the zero cone, returned as the empty set)
    /// whose relative interior contains `v`. Errors when the fan does not
    /// cover `v` (incomplete fan).
    pub fn containing_cone(&self, v: &IntVector) -> Result<Vec<usize>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        for cone in &self.max_cones {
            let basis: Vec<IntVector> = cone.iter().map(|&r| self.rays[r].clone()).collect();
            let coords = solve_in_basis(&basis, v)?;
            if coords.iter().all(|c| !c.is_negative()) {
                let face: Vec<usize> = cone
                    .iter()
                    .zip(coords.iter())
                    .filter(|(_, c)| c.is_positive())
                    .map(|(&r, _)| r)
                    .collect();
                return Ok(face);
            }
        }
        Err(Error::NotComplete)
    }

    /// Computes the primitive relation of a primitive collection `P`.
    pub fn primitive_relation(&self, p: &PrimitiveCollection) -> Result<PrimitiveRelation> {
        if !self.primitive_collections().contains(p) {
            return Err(Error::NotAPrimitiveCollection(format!("{:?}", p.ray_indices)));
        }
        let s = IntVector::sum(self.dim, p.ray_indices.iter().map(|&r| &self.rays[r]));
        let sigma_rays = self.containing_cone(&s)?;
        let mut coefficients = Vec::with_capacity(sigma_rays.len());
        if !sigma_rays.is_empty() {
            let basis: Vec<IntVector> = sigma_rays.iter().map(|&r| self.rays[r].clone()).collect();
            for c in solve_in_basis(&basis, &s)? {
                if !c.is_integer() || !c.is_positive() {
                    return Err(Error::NotSmoothAtSigma);
                }
                coefficients.push(c.to_integer());
            }
        }
        let mut relation_vector = IntVector::zero(self.n_rays());
        for &r in &p.ray_indices {
            relation_vector.0[r] += 1;
        }
        for (&r, a) in sigma_rays.iter().zip(coefficients.iter()) {
            relation_vector.0[r] -= a;
        }
        let degree = Int::from(p.len()) - coefficients.iter().sum::<Int>();
        debug_assert!(
            (0..self.dim).all(|j| {
                relation_vector
                    .0
                    .iter()
                    .zip(self.rays.iter())
                    .fold(Int::zero(), |acc, (c, u)| acc + c * &u.0[j])
                    .is_zero()
            }),
            "relation vector must pair to zero with the rays"
        );
        Ok(PrimitiveRelation {
            collection: p.clone(),
            sigma_rays,
            coefficients,
            relation_vector,
            degree,
        })
    }

    /// All primitive relations, cached per fan.
    pub fn primitive_relations(&self) -> Result<&[PrimitiveRelation]> {
        self.rel_cache
            .get_or_init(|| {
                self.primitive_collections()
                    .iter()
                    .map(|p| self.primitive_relation(p))
                    .collect()
            })
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(Clone::clone)
    }

    /// Structural equality after matching rays by their vectors.
    pub fn same_up_to_ray_order(&self, other: &Fan) -> bool {
        if self.dim != other.dim
            || self.n_rays() != other.n_rays()
            || self.max_cones.len() != other.max_cones.len()
        {
            return false;
        }
        let lookup: HashMap<&IntVector, usize> =
            other.rays.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut map = Vec::with_capacity(self.n_rays());
        for ray in &self.rays {
            match lookup.get(ray) {
                Some(&i) => map.push(i),
                None => return false,
            }
        }
        let mut mapped: Vec<Vec<usize>> = self
            .max_cones
            .iter()
            .map(|c| {
                let mut m: Vec<usize> = c.iter().map(|&r| map[r]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        mapped.sort();
        mapped == other.max_cones
    }
}

/// Standard fixture: the fan of the projective plane.
pub fn fan_p2() -> Fan {
    make_fan(
        2,
        vec![
            IntVector::from_i64(&[1, 0]),
            IntVector::from_i64(&[0, 1]),
            IntVector::from_i64(&[-1, -1]),
        ],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
    .expect("P^2 fan is valid")
}

/// Fixture: the rank-3 del Pezzo surface Bl_1(P^1 x P^1) with rays
/// e1, e2, -e1, -e1-e2, -e2 and the five cones of adjacent rays.
pub fn fan_ex23() -> Fan {
    make_fan(
        2,
        vec![
            IntVector::from_i64(&[1, 0]),
            IntVector::from_i64(&[0, 1]),
            IntVector::from_i64(&[-1, 0]),
            IntVector::from_i64(&[-1, -1]),
            IntVector::from_i64(&[0, -1]),
        ],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 0]],
    )
    .expect("Example 2.3 fan is valid")
}

/// Fixture: Hirzebruch surface F_2.
pub fn fan_f2() -> Fan {
    make_fan(
        2,
        vec![
            IntVector::from_i64(&[1, 0]),
            IntVector::from_i64(&[0, 1]),
            IntVector::from_i64(&[-1, 2]),
            IntVector::from_i64(&[0, -1]),
        ],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .expect("F_2 fan is valid")
}

/// Fixture: the proper non-projective threefold of Picard rank 4 and its
/// projective flop partner. `first` selects which triangulation of the
/// quadrilateral facet on rays {2,3,5,6} is used: the diagonal (2,6) for
/// the non-projective fan, (3,5) for the projective one.
pub fn fan_nonprojective(first: bool) -> Fan {
    let rays = vec![
        IntVector::from_i64(&[-1, -1, -1]),
        IntVector::from_i64(&[1, 0, 0]),
        IntVector::from_i64(&[0, 1, 0]),
        IntVector::from_i64(&[0, 0, 1]),
        IntVector::from_i64(&[0, -1, -1]),
        IntVector::from_i64(&[-1, 0, -1]),
        IntVector::from_i64(&[-1, -1, 0]),
    ];
    let mut cones = vec![
        vec![1, 2, 3],
        vec![0, 5, 6],
        vec![0, 4, 6],
        vec![0, 4, 5],
        vec![1, 2, 4],
        vec![2, 4, 5],
        vec![1, 3, 6],
        vec![1, 4, 6],
    ];
    if first {
        cones.push(vec![2, 3, 6]);
        cones.push(vec![2, 5, 6]);
    } else {
        cones.push(vec![2, 3, 5]);
        cones.push(vec![3, 5, 6]);
    }
    make_fan(3, rays, cones).expect("non-projective example fan is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn iv(entries: &[i64]) -> IntVector {
        IntVector::from_i64(entries)
    }

    #[test]
    fn make_fan_validates() {
        let fan = fan_p2();
        assert_eq!(fan.dim(), 2);
        assert_eq!(fan.n_rays(), 3);
        // Cone size exceeding the dimension is rejected.
        let err = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])],
            vec![vec![0, 1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::ConeSizeMismatch { .. }));
        // Non-primitive ray.
        let err = make_fan(2, vec![iv(&[2, 0]), iv(&[0, 1])], vec![vec![0, 1]]).unwrap_err();
        assert!(matches!(err, Error::NonPrimitiveRay { index: 0 }));
        // Duplicate ray.
        let err = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[1, 0])],
            vec![vec![0, 1]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateRay { .. }));
        // Degenerate cone.
        let err = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[-1, 0]), iv(&[0, 1])],
            vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateCone { .. }));
        // Dangling ray.
        let err = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1]), iv(&[1, 1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DanglingRay { index: 3 }));
    }

    #[test]
    fn checked_validation_accepts_good_fans() {
        let fan = make_fan_checked(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        );
        assert!(fan.is_ok());
        // Overlapping cones that are not glued along a face: Cone((1,2),(2,1))
        // sits inside the interior of Cone(e1,e2).
        let bad = make_fan_checked(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[1, 2]), iv(&[2, 1])],
            vec![vec![0, 1], vec![2, 3]],
        );
        assert!(matches!(bad, Err(Error::ConesNotMeetingInFace { .. })));
    }

    #[test]
    fn smoothness() {
        assert!(fan_p2().is_smooth());
        assert!(fan_ex23().is_smooth());
        let p112 = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -2])],
            vec![vec![0, 1], vec![1, 2], vec![2, 0]],
        )
        .unwrap();
        assert!(!p112.is_smooth());
    }

    #[test]
    fn completeness() {
        assert!(fan_p2().is_complete());
        let boundary = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, -1])],
            vec![vec![0, 1], vec![1, 2]],
        )
        .unwrap();
        assert!(!boundary.is_complete());
        assert!(fan_nonprojective(true).is_complete());
        assert!(fan_nonprojective(false).is_complete());
    }

    #[test]
    fn cone_queries() {
        let p2 = fan_p2();
        assert!(p2.is_cone(&[0]));
        assert!(!p2.is_cone(&[0, 1, 2]));
        let ex23 = fan_ex23();
        assert!(!ex23.is_cone(&[0, 2]));
    }

    #[test]
    fn primitive_collections_examples() {
        let p2 = fan_p2();
        assert_eq!(
            p2.primitive_collections(),
            &[PrimitiveCollection::new(vec![0, 1, 2])]
        );
        let ex23 = fan_ex23();
        let pcs: Vec<Vec<usize>> = ex23
            .primitive_collections()
            .iter()
            .map(|p| p.ray_indices.clone())
            .collect();
        assert_eq!(
            pcs,
            vec![vec![0, 2], vec![0, 3], vec![1, 3], vec![1, 4], vec![2, 4]]
        );
        assert_eq!(fan_nonprojective(true).primitive_collections().len(), 9);
        assert_eq!(fan_nonprojective(false).primitive_collections().len(), 7);
    }

    #[test]
    fn primitive_relations_examples() {
        let ex23 = fan_ex23();
        let r = ex23
            .primitive_relation(&PrimitiveCollection::new(vec![0, 2]))
            .unwrap();
        assert!(r.sigma_rays.is_empty());
        assert_eq!(r.degree, int(2));
        let r = ex23
            .primitive_relation(&PrimitiveCollection::new(vec![0, 3]))
            .unwrap();
        assert_eq!(r.sigma_rays, vec![4]);
        assert_eq!(r.coefficients, vec![int(1)]);
        assert_eq!(r.degree, int(1));
        let p2 = fan_p2();
        let r = p2
            .primitive_relation(&PrimitiveCollection::new(vec![0, 1, 2]))
            .unwrap();
        assert!(r.sigma_rays.is_empty());
        assert_eq!(r.degree, int(3));
        // Degrees on the five relations of Example 2.3: {2, 2, 1, 1, 1}.
        let mut degrees: Vec<Int> = ex23
            .primitive_relations()
            .unwrap()
            .iter()
            .map(|r| r.degree.clone())
            .collect();
        degrees.sort();
        assert_eq!(degrees, vec![int(1), int(1), int(1), int(2), int(2)]);
    }

    #[test]
    fn containing_cone_examples() {
        let p2 = fan_p2();
        assert_eq!(p2.containing_cone(&iv(&[1, 1])).unwrap(), vec![0, 1]);
        assert_eq!(p2.containing_cone(&iv(&[1, 0])).unwrap(), vec![0]);
        let ex23 = fan_ex23();
        assert_eq!(ex23.containing_cone(&iv(&[0, 0])).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn minimal_non_face_property() {
        for fan in [fan_p2(), fan_ex23(), fan_nonprojective(true)] {
            for p in fan.primitive_collections() {
                assert!(!fan.is_cone(&p.ray_indices));
                for omit in 0..p.len() {
                    let sub: Vec<usize> = p
                        .ray_indices
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != omit)
                        .map(|(_, &r)| r)
                        .collect();
                    assert!(fan.is_cone(&sub));
                }
            }
        }
    }
}

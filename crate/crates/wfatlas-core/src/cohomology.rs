//! Graded line-bundle cohomology via the support complexes `V_{D,m}`, the
//! face-sum formula for `H^1(Omega^1(-K))`, and the converse
//! Bott-vanishing checker.
//!
//! The support complex at degree `m` is the induced subcomplex of the
//! fan's cone complex on the rays with `<m, u_rho> < -a_rho`; only its
//! homotopy type matters, so it is represented abstractly. Reduced
//! cohomology is computed over the rationals from exact boundary-matrix
//! ranks. Degrees are searched over the integer bounding box of the
//! Cartier-data vertices expanded by one (see the expansion-stability
//! tests), which provably contains every degree with nonzero `h^0`.

use std::collections::{HashMap, HashSet};
use std::sync::Mutex;

use num_traits::Zero;

use crate::divisor::{anticanonical, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{in_rational_cone, Int, IntMatrix, IntVector};
use crate::polytope::divisor_polytope;

/// Per-fan evaluator with a cache keyed by the active-ray set: the support
/// complex, hence its cohomology, depends only on that set.
pub struct GradedCohomology<'a> {
    fan: &'a Fan,
    betti_cache: Mutex<HashMap<u128, Vec<usize>>>,
}

impl<'a> GradedCohomology<'a> {
    pub fn new(fan: &'a Fan) -> Result<Self> {
        if !fan.is_smooth() {
            return Err(Error::NotSmooth);
        }
        if !fan.is_complete() {
            return Err(Error::NotComplete);
        }
        Ok(GradedCohomology {
            fan,
            betti_cache: Mutex::new(HashMap::new()),
        })
    }

    fn active_mask(&self, divisor: &TorusDivisor<'_>, m: &IntVector) -> u128 {
        let mut mask = 0u128;
        for (rho, u) in self.fan.rays().iter().enumerate() {
            if m.dot(u) + divisor.coeff(rho) < Int::zero() {
                mask |= 1 << rho;
            }
        }
        mask
    }

    /// `h^i(O(D))_m` for `i = 0..=d`: the reduced cohomology of the support
    /// complex, with the empty complex contributing 1 in degree 0.
    pub fn graded_piece(&self, divisor: &TorusDivisor<'_>, m: &IntVector) -> Vec<usize> {
        let mask = self.active_mask(divisor, m);
        if let Some(b) = self.betti_cache.lock().unwrap().get(&mask) {
            return b.clone();
        }
        let betti = self.reduced_betti(mask);
        self.betti_cache.lock().unwrap().insert(mask, betti.clone());
        betti
    }

    fn reduced_betti(&self, active: u128) -> Vec<usize> {
        let d = self.fan.dim();
        // Faces of the induced complex, grouped by cardinality; the empty
        // face is size 0 and realizes the reduced/augmented convention.
        let mut by_size: Vec<HashSet<u128>> = vec![HashSet::new(); d + 1];
        by_size[0].insert(0);
        for cone_mask in self.fan.max_cones().iter().map(|c| {
            c.iter().fold(0u128, |m, &r| m | (1 << r))
        }) {
            let a = cone_mask & active;
            let mut sub = a;
            loop {
                let size = sub.count_ones() as usize;
                if size > 0 {
                    by_size[size].insert(sub);
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & a;
            }
        }
        let counts: Vec<usize> = by_size.iter().map(HashSet::len).collect();
        // rank[s] = rank of the boundary map from size-s faces to
        // size-(s-1) faces.
        let mut ranks = vec![0usize; d + 2];
        for s in 1..=d {
            if counts[s] == 0 {
                continue;
            }
            let rows: Vec<u128> = {
                let mut v: Vec<u128> = by_size[s - 1].iter().copied().collect();
                v.sort_unstable();
                v
            };
            let cols: Vec<u128> = {
                let mut v: Vec<u128> = by_size[s].iter().copied().collect();
                v.sort_unstable();
                v
            };
            let row_index: HashMap<u128, usize> =
                rows.iter().enumerate().map(|(i, &m)| (m, i)).collect();
            let mut mat = IntMatrix::zero(rows.len(), cols.len());
            for (j, &face) in cols.iter().enumerate() {
                let mut sign = 1i64;
                let mut bits = face;
                while bits != 0 {
                    let b = bits & bits.wrapping_neg();
                    let sub = face ^ b;
                    let i = row_index[&sub];
                    *mat.at_mut(i, j) = Int::from(sign);
                    sign = -sign;
                    bits ^= b;
                }
            }
            ranks[s] = mat.rank();
        }
        (0..=d)
            .map(|i| counts[i] - ranks[i] - ranks[i + 1])
            .collect()
    }

    /// Sums the graded pieces over the integer bounding box of the
    /// Cartier-data vertices, expanded by `expand` in every coordinate.
    pub fn cohomology_expanded(
        &self,
        divisor: &TorusDivisor<'_>,
        expand: i64,
    ) -> Result<Vec<usize>> {
        let d = self.fan.dim();
        let cartier = divisor.cartier_data()?;
        let mut lo = cartier.per_cone[0].0.clone();
        let mut hi = cartier.per_cone[0].0.clone();
        for m in &cartier.per_cone[1..] {
            for j in 0..d {
                if m.0[j] < lo[j] {
                    lo[j] = m.0[j].clone();
                }
                if m.0[j] > hi[j] {
                    hi[j] = m.0[j].clone();
                }
            }
        }
        for j in 0..d {
            lo[j] -= expand;
            hi[j] += expand;
        }
        let mut total = vec![0usize; d + 1];
        for m in crate::chow::integer_box_points(&lo, &hi) {
            for (t, p) in total.iter_mut().zip(self.graded_piece(divisor, &m)) {
                *t += p;
            }
        }
        Ok(total)
    }

    pub fn cohomology(&self, divisor: &TorusDivisor<'_>) -> Result<Vec<usize>> {
        self.cohomology_expanded(divisor, 1)
    }
}

/// `h^i(O(D))_m`: dimension of the reduced (i-1)-st cohomology of the
/// support complex at `m`.
pub fn graded_cohomology(divisor: &TorusDivisor<'_>, m: &IntVector, i: usize) -> Result<usize> {
    let ctx = GradedCohomology::new(divisor.fan())?;
    let pieces = ctx.graded_piece(divisor, m);
    Ok(pieces.get(i).copied().unwrap_or(0))
}

/// `(h^0, ..., h^d)` of `O(D)`.
pub fn line_bundle_cohomology(divisor: &TorusDivisor<'_>) -> Result<Vec<usize>> {
    GradedCohomology::new(divisor.fan())?.cohomology(divisor)
}

/// `dim H^1(Omega^1(-K))` via the face sum
/// `sum_Gamma l*(Gamma) (|Sigma_{sigma_Gamma}(1)| - d + dim Gamma)`
/// over the faces of the anticanonical polytope.
pub fn h1_omega1_anticanonical(fan: &Fan) -> Result<usize> {
    let k = anticanonical(fan);
    let polytope = divisor_polytope(&k)?;
    let d = fan.dim();
    let points = polytope.lattice_points();
    let mut tight_count: HashMap<Vec<usize>, usize> = HashMap::new();
    for p in &points {
        let tight: Vec<usize> = fan
            .rays()
            .iter()
            .enumerate()
            .filter(|(_, u)| (p.dot(u) + Int::from(1)).is_zero())
            .map(|(i, _)| i)
            .collect();
        *tight_count.entry(tight).or_insert(0) += 1;
    }
    let mut total: i64 = 0;
    for face in polytope.face_lattice() {
        let interior = tight_count.get(&face.tight).copied().unwrap_or(0);
        if interior == 0 {
            continue;
        }
        let generators = polytope.normal_cone(&face);
        let rays_inside = fan
            .rays()
            .iter()
            .filter(|u| in_rational_cone(&generators, u))
            .count();
        let summand = rays_inside as i64 - d as i64 + face.dim as i64;
        if summand < 0 {
            return Err(Error::Internal(format!(
                "negative face summand {summand} contradicts completeness"
            )));
        }
        total += interior as i64 * summand;
    }
    Ok(total as usize)
}

/// The three equivalent Fano detectors evaluated together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BottReport {
    pub fano: bool,
    /// Two maximal cones sharing a wall have equal -K Cartier data.
    pub wall_collision: bool,
    pub h1_omega1_anti_k: usize,
}

/// Computes (a) Fano via relation degrees, (b) Fano via absence of
/// Cartier-data wall collisions for -K, (c) the face-sum `h^1`, and errors
/// unless (a) <=> (not b) <=> (c = 0).
pub fn bott_converse_check(fan: &Fan) -> Result<BottReport> {
    let fano = crate::divisor::is_fano(fan)?;
    let k = anticanonical(fan);
    let cartier = k.cartier_data()?;
    let wall_collision = fan
        .adjacent_cone_pairs()
        .into_iter()
        .any(|(i, j)| cartier.per_cone[i] == cartier.per_cone[j]);
    let h1 = h1_omega1_anticanonical(fan)?;
    if fano != !wall_collision || fano != (h1 == 0) {
        return Err(Error::Internal(format!(
            "converse Bott vanishing inconsistency: fano={fano}, collision={wall_collision}, h1={h1}"
        )));
    }
    Ok(BottReport {
        fano,
        wall_collision,
        h1_omega1_anti_k: h1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{fan_ex23, fan_f2, fan_p2, make_fan};
    use crate::lattice::int;

    fn iv(entries: &[i64]) -> IntVector {
        IntVector::from_i64(entries)
    }

    #[test]
    fn graded_pieces_on_p2() {
        let p2 = fan_p2();
        let k = anticanonical(&p2);
        // m = 0 lies in the polytope: V is empty, h^0 piece is 1.
        assert_eq!(graded_cohomology(&k, &iv(&[0, 0]), 0).unwrap(), 1);
        assert_eq!(graded_cohomology(&k, &iv(&[0, 0]), 1).unwrap(), 0);
    }

    #[test]
    fn o_minus_two_on_p1() {
        let p1 = make_fan(1, vec![iv(&[1]), iv(&[-1])], vec![vec![0], vec![1]]).unwrap();
        let d = TorusDivisor::new(&p1, vec![int(-2), int(0)]).unwrap();
        assert_eq!(graded_cohomology(&d, &iv(&[1]), 1).unwrap(), 1);
        assert_eq!(line_bundle_cohomology(&d).unwrap(), vec![0, 1]);
    }

    #[test]
    fn anticanonical_cohomology_of_p2() {
        let p2 = fan_p2();
        let k = anticanonical(&p2);
        assert_eq!(line_bundle_cohomology(&k).unwrap(), vec![10, 0, 0]);
        let zero = TorusDivisor::zero(&p2);
        assert_eq!(line_bundle_cohomology(&zero).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn h0_matches_lattice_points() {
        for fan in [fan_p2(), fan_f2(), fan_ex23()] {
            let k = anticanonical(&fan);
            let h = line_bundle_cohomology(&k).unwrap();
            let p = divisor_polytope(&k).unwrap();
            assert_eq!(h[0], p.lattice_points().len());
            assert!(h[1..].iter().all(|&x| x == 0), "Demazure vanishing");
        }
    }

    #[test]
    fn h1_omega1_examples() {
        assert_eq!(h1_omega1_anticanonical(&fan_p2()).unwrap(), 0);
        assert_eq!(h1_omega1_anticanonical(&fan_ex23()).unwrap(), 0);
        assert_eq!(h1_omega1_anticanonical(&fan_f2()).unwrap(), 1);
    }

    #[test]
    fn bott_reports() {
        let r = bott_converse_check(&fan_ex23()).unwrap();
        assert_eq!(
            r,
            BottReport {
                fano: true,
                wall_collision: false,
                h1_omega1_anti_k: 0
            }
        );
        let r = bott_converse_check(&fan_f2()).unwrap();
        assert_eq!(
            r,
            BottReport {
                fano: false,
                wall_collision: true,
                h1_omega1_anti_k: 1
            }
        );
    }

    #[test]
    fn expansion_stability_on_surfaces() {
        for fan in [fan_p2(), fan_f2(), fan_ex23()] {
            let k = anticanonical(&fan);
            let ctx = GradedCohomology::new(&fan).unwrap();
            assert_eq!(
                ctx.cohomology_expanded(&k, 1).unwrap(),
                ctx.cohomology_expanded(&k, 3).unwrap()
            );
            for rho in 0..fan.n_rays() {
                let mut coeffs = vec![int(1); fan.n_rays()];
                coeffs[rho] = int(0);
                let d = TorusDivisor::new(&fan, coeffs).unwrap();
                assert_eq!(
                    ctx.cohomology_expanded(&d, 1).unwrap(),
                    ctx.cohomology_expanded(&d, 3).unwrap()
                );
            }
        }
    }
}

//! Toric isomorphism of fans via GL(d,Z) search, with invariant
//! fingerprints for pruning, and deduplication of candidate lists.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{Int, IntMatrix, IntVector};

/// Isomorphism-invariant summary used to prune pairwise comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub n_rays: usize,
    pub n_cones: usize,
    /// Sorted multiset of (|P|, degree) over the primitive relations.
    pub relation_profile: Vec<(usize, Int)>,
    /// Sorted multiset of per-ray maximal-cone membership counts.
    pub membership_counts: Vec<usize>,
}

pub fn fingerprint(fan: &Fan) -> Result<Fingerprint> {
    let mut relation_profile: Vec<(usize, Int)> = fan
        .primitive_relations()?
        .iter()
        .map(|r| (r.collection.len(), r.degree.clone()))
        .collect();
    relation_profile.sort();
    let mut membership_counts = fan.ray_membership_counts();
    membership_counts.sort_unstable();
    Ok(Fingerprint {
        dim: fan.dim(),
        n_rays: fan.n_rays(),
        n_cones: fan.max_cones().len(),
        relation_profile,
        membership_counts,
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let rest: Vec<usize> = items
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, &v)| v)
            .collect();
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Searches for a unimodular matrix carrying the rays of `x` onto the rays
/// of `y` and the maximal cones onto maximal cones. The matrix maps the
/// lattice of `x` to the lattice of `y` by left multiplication of column
/// vectors. Returns the first isomorphism found, or `None`.
pub fn are_isomorphic(x: &Fan, y: &Fan) -> Result<Option<IntMatrix>> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: y.dim(),
        });
    }
    if x.n_rays() != y.n_rays() || x.max_cones().len() != y.max_cones().len() {
        return Ok(None);
    }
    if fingerprint(x)? != fingerprint(y)? {
        return Ok(None);
    }
    let _d = x.dim();
    let sigma0 = &x.max_cones()[0];
    let m0 = x.cone_matrix(sigma0);
    let m0_inv = match m0.inverse_unimodular() {
        Some(inv) => inv,
        None => return Err(Error::NotSmooth),
    };
    let x_counts = x.ray_membership_counts();
    let y_counts = y.ray_membership_counts();
    let y_ray_index: HashMap<&IntVector, usize> =
        y.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let y_cone_set: HashSet<&Vec<usize>> = y.max_cones().iter().collect();

    for sigma_y in y.max_cones() {
        for perm in permutations(sigma_y) {
            // Ray images must preserve cone-membership counts.
            if sigma0
                .iter()
                .zip(perm.iter())
                .any(|(&a, &b)| x_counts[a] != y_counts[b])
            {
                continue;
            }
            let target = y.cone_matrix(&perm);
            let a = target.mul(&m0_inv)?;
            debug_assert!(a.is_unimodular());
            // The candidate must map every ray of x to a ray of y.
            let mut ray_map = Vec::with_capacity(x.n_rays());
            let mut ok = true;
            for ray in x.rays() {
                let image = a.mul_vec(ray)?;
                match y_ray_index.get(&image) {
                    Some(&idx) if x_counts[ray_map.len()] == y_counts[idx] => ray_map.push(idx),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            // Cones must map onto cones bijectively; injectivity on rays is
            // automatic since the matrix is invertible.
            let cones_match = x.max_cones().iter().all(|cone| {
                let mut image: Vec<usize> = cone.iter().map(|&r| ray_map[r]).collect();
                image.sort_unstable();
                y_cone_set.contains(&image)
            });
            if cones_match {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

/// Groups fans into isomorphism classes, preserving first-occurrence order.
/// Fingerprints filter pairs before invoking the matrix search.
pub fn iso_classes(fans: &[Fan]) -> Result<Vec<Vec<usize>>> {
    let mut classes: Vec<(Fingerprint, Vec<usize>)> = Vec::new();
    for (i, fan) in fans.iter().enumerate() {
        let fp = fingerprint(fan)?;
        let mut placed = false;
        for (rep_fp, members) in classes.iter_mut() {
            if *rep_fp == fp && are_isomorphic(&fans[members[0]], fan)?.is_some() {
                members.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push((fp, vec![i]));
        }
    }
    Ok(classes.into_iter().map(|(_, members)| members).collect())
}

/// Keeps the first representative of each isomorphism class, preserving
/// input order.
pub fn dedupe(fans: &[Fan]) -> Result<Vec<Fan>> {
    Ok(iso_classes(fans)?
        .into_iter()
        .map(|members| fans[members[0]].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{batyrev, kleinschmidt, BatyrevParams, KleinschmidtParams};
    use crate::fan::{fan_ex23, fan_p2};

    #[test]
    fn p2_is_isomorphic_to_itself() {
        let p2 = fan_p2();
        let a = are_isomorphic(&p2, &p2).unwrap().expect("reflexive");
        assert!(a.is_unimodular());
    }

    #[test]
    fn symmetry_of_the_search() {
        let x = batyrev(&BatyrevParams::new([1, 1, 2, 1, 1], vec![0], vec![0]).unwrap()).unwrap();
        let y = batyrev(&BatyrevParams::new([1, 2, 1, 1, 1], vec![0], vec![]).unwrap()).unwrap();
        assert_eq!(
            are_isomorphic(&x, &y).unwrap().is_some(),
            are_isomorphic(&y, &x).unwrap().is_some()
        );
    }

    #[test]
    fn batyrev_surface_matches_ex23() {
        let bat = batyrev(&BatyrevParams::new([1, 1, 1, 1, 1], vec![0], vec![]).unwrap()).unwrap();
        let a = are_isomorphic(&bat, &fan_ex23()).unwrap();
        assert!(a.is_some());
    }

    #[test]
    fn pentagon_symmetry() {
        // Bat(p0,p1,p2,p3,p4; 0; 0) is isomorphic to Bat(p2,p1,p0,p4,p3; 0; 0).
        let x = batyrev(&BatyrevParams::new([1, 1, 2, 2, 1], vec![0, 0], vec![0]).unwrap()).unwrap();
        let y = batyrev(&BatyrevParams::new([2, 1, 1, 1, 2], vec![0], vec![]).unwrap()).unwrap();
        assert!(are_isomorphic(&x, &y).unwrap().is_some());
    }

    #[test]
    fn distinct_batyrev_varieties() {
        // 3.BC-1 and 3.BC-7 have distinct anticanonical degrees (46 vs 48).
        let x = batyrev(&BatyrevParams::new([1, 1, 2, 1, 1], vec![0], vec![0]).unwrap()).unwrap();
        let y = batyrev(&BatyrevParams::new([1, 2, 1, 1, 1], vec![0], vec![]).unwrap()).unwrap();
        assert!(are_isomorphic(&x, &y).unwrap().is_none());
    }

    #[test]
    fn product_factor_swap() {
        // P^1 x P^2 built both ways.
        let a = kleinschmidt(&KleinschmidtParams::new(3, vec![0]).unwrap()).unwrap();
        let b = kleinschmidt(&KleinschmidtParams::new(3, vec![0, 0]).unwrap()).unwrap();
        let iso = are_isomorphic(&a, &b).unwrap().expect("factor swap");
        // The isomorphism carries maximal cones onto maximal cones; spot
        // check the returned matrix really maps rays onto rays.
        for ray in a.rays() {
            let image = iso.mul_vec(ray).unwrap();
            assert!(b.rays().contains(&image));
        }
    }

    #[test]
    fn dedupe_keeps_first() {
        let fans = vec![fan_p2(), fan_p2(), fan_ex23()];
        let kept = dedupe(&fans).unwrap();
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0], fan_p2());
        assert_eq!(kept[1], fan_ex23());
    }

    #[test]
    fn isomorphism_implies_equal_fingerprints() {
        let x = batyrev(&BatyrevParams::new([1, 1, 1, 1, 1], vec![0], vec![]).unwrap()).unwrap();
        let y = fan_ex23();
        if are_isomorphic(&x, &y).unwrap().is_some() {
            assert_eq!(fingerprint(&x).unwrap(), fingerprint(&y).unwrap());
        }
    }
}

//! Intersection numbers in the Chow ring of a smooth complete fan, the
//! Chern numbers c1^d and c1^{d-2}c2, and the dimension of the space of
//! global vector fields.
//!
//! A monomial `D_{rho_1} ... D_{rho_d}` evaluates to 1 when the rays are
//! distinct and span a maximal cone and to 0 when they span no cone;
//! otherwise one copy of a repeated ray is rewritten by linear equivalence
//! and the product is expanded. The rewriting functional is taken from the
//! dual basis of a maximal cone containing the whole support, which keeps
//! the recursion strictly decreasing.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{fm_coordinate_bounds, CoordinateBounds, Inequality, Int, IntMatrix, IntVector};
use crate::fan::Fan;

/// Memoizing evaluator for degree-d divisor monomials on a fixed fan.
pub struct ChowRing<'a> {
    fan: &'a Fan,
    cone_inverses: Vec<IntMatrix>,
    memo: Mutex<HashMap<Vec<usize>, Int>>,
}

impl<'a> ChowRing<'a> {
    pub fn new(fan: &'a Fan) -> Result<Self> {
        if !fan.is_smooth() {
            return Err(Error::NotSmooth);
        }
        if !fan.is_complete() {
            return Err(Error::NotComplete);
        }
        let cone_inverses = fan
            .max_cones()
            .iter()
            .map(|c| {
                fan.cone_matrix(c)
                    .inverse_unimodular()
                    .ok_or(Error::NotSmooth)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChowRing {
            fan,
            cone_inverses,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn fan(&self) -> &'a Fan {
        self.fan
    }

    /// `D_{rho_1} ... D_{rho_d}` for a sorted multiset of ray indices of
    /// total size equal to the fan dimension.
    pub fn intersection_number(&self, monomial: &[usize]) -> Result<Int> {
        if monomial.len() != self.fan.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.fan.dim(),
                got: monomial.len(),
            });
        }
        let mut mono = monomial.to_vec();
        mono.sort_unstable();
        Ok(self.eval(mono, &mut |_| 0))
    }

    /// Same evaluation with an explicit chooser for the reduction steps,
    /// used to test order-of-reduction independence. The chooser receives
    /// the number of available options and returns an index.
    pub fn intersection_number_with_choice(
        &self,
        monomial: &[usize],
        choose: &mut dyn FnMut(usize) -> usize,
    ) -> Result<Int> {
        if monomial.len() != self.fan.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.fan.dim(),
                got: monomial.len(),
            });
        }
        let mut mono = monomial.to_vec();
        mono.sort_unstable();
        Ok(self.eval(mono, choose))
    }

    fn eval(&self, mono: Vec<usize>, choose: &mut dyn FnMut(usize) -> usize) -> Int {
        if let Some(v) = self.memo.lock().unwrap().get(&mono) {
            return v.clone();
        }
        let mut support = mono.clone();
        support.dedup();
        let value = if !self.fan.is_cone(&support) {
            Int::zero()
        } else if support.len() == mono.len() {
            // Distinct rays spanning a cone; with |mono| = d that cone is
            // maximal.
            Int::one()
        } else {
            // Pick a maximal cone containing the support.
            let cones: Vec<usize> = self
                .fan
                .max_cones()
                .iter()
                .enumerate()
                .filter(|(_, c)| support.iter().all(|r| c.contains(r)))
                .map(|(i, _)| i)
                .collect();
            let cone_idx = cones[choose(cones.len()).min(cones.len() - 1)];
            let cone = &self.fan.max_cones()[cone_idx];
            // Pick a repeated ray.
            let repeated: Vec<usize> = support
                .iter()
                .copied()
                .filter(|&r| mono.iter().filter(|&&m| m == r).count() >= 2)
                .collect();
            let rho = repeated[choose(repeated.len()).min(repeated.len() - 1)];
            let pos = cone.iter().position(|&r| r == rho).expect("support in cone");
            let m = self.cone_inverses[cone_idx].row(pos);
            // D_rho = - sum_{rho' not in cone} <m, u_rho'> D_rho'.
            let mut total = Int::zero();
            for rho_prime in 0..self.fan.n_rays() {
                if rho_prime == rho || cone.contains(&rho_prime) {
                    continue;
                }
                let t = m.dot(self.fan.ray(rho_prime));
                if t.is_zero() {
                    continue;
                }
                let mut next = mono.clone();
                let at = next.iter().position(|&r| r == rho).expect("rho in mono");
                next[at] = rho_prime;
                next.sort_unstable();
                total -= t * self.eval(next, choose);
            }
            total
        };
        self.memo
            .lock()
            .unwrap()
            .insert(mono, value.clone());
        value
    }

    /// Sums `coeff * eval(monomial)` over all multisets of size `size`
    /// drawn from the rays, where `coeff` is the multinomial coefficient of
    /// the multiset, with `extra` appended to every monomial.
    fn sum_power_expansion(&self, size: usize, extra: &[usize]) -> Result<Int> {
        let n = self.fan.n_rays();
        let mut total = Int::zero();
        let mut counts = vec![0usize; n];
        self.expand_rec(0, size, &mut counts, extra, &mut total)?;
        Ok(total)
    }

    fn expand_rec(
        &self,
        ray: usize,
        remaining: usize,
        counts: &mut Vec<usize>,
        extra: &[usize],
        total: &mut Int,
    ) -> Result<()> {
        let n = self.fan.n_rays();
        if ray == n {
            if remaining == 0 {
                let mut mono: Vec<usize> = Vec::with_capacity(self.fan.dim());
                for (r, &c) in counts.iter().enumerate() {
                    mono.extend(std::iter::repeat(r).take(c));
                }
                mono.extend_from_slice(extra);
                mono.sort_unstable();
                let coeff = multinomial(counts);
                *total += coeff * self.eval(mono, &mut |_| 0);
            }
            return Ok(());
        }
        for take in 0..=remaining {
            counts[ray] = take;
            self.expand_rec(ray + 1, remaining - take, counts, extra, total)?;
        }
        counts[ray] = 0;
        Ok(())
    }

    /// `(-K)^d = (sum_rho D_rho)^d`.
    pub fn c1_top(&self) -> Result<Int> {
        self.sum_power_expansion(self.fan.dim(), &[])
    }

    /// `c1^{d-2} c2` with `c2 = sum_{rho < rho'} D_rho D_rho'`.
    pub fn c1sq_c2(&self) -> Result<Int> {
        let d = self.fan.dim();
        if d < 2 {
            return Err(Error::InvalidParams("c1^{d-2} c2 needs d >= 2".into()));
        }
        let n = self.fan.n_rays();
        let mut total = Int::zero();
        for rho in 0..n {
            for rho_prime in rho + 1..n {
                total += self.sum_power_expansion(d - 2, &[rho, rho_prime])?;
            }
        }
        Ok(total)
    }

    /// Top Chern number `c_d = sum over d-subsets of rays`, which must equal
    /// the number of maximal cones.
    pub fn c_top(&self) -> Result<Int> {
        let d = self.fan.dim();
        let n = self.fan.n_rays();
        let mut total = Int::zero();
        let mut subset: Vec<usize> = Vec::with_capacity(d);
        fn rec(
            ring: &ChowRing<'_>,
            start: usize,
            d: usize,
            n: usize,
            subset: &mut Vec<usize>,
            total: &mut Int,
        ) {
            if subset.len() == d {
                *total += ring.eval(subset.clone(), &mut |_| 0);
                return;
            }
            for r in start..n {
                subset.push(r);
                rec(ring, r + 1, d, n, subset, total);
                subset.pop();
            }
        }
        rec(self, 0, d, n, &mut subset, &mut total);
        Ok(total)
    }
}

fn multinomial(counts: &[usize]) -> Int {
    let total: usize = counts.iter().sum();
    let mut result = factorial(total);
    for &c in counts {
        result /= factorial(c);
    }
    result
}

fn factorial(n: usize) -> Int {
    (1..=n).fold(Int::one(), |acc, k| acc * Int::from(k))
}

/// Demazure root count plus the torus rank:
/// `h^0(T_X) = d + sum_rho #{ m : <m,u_rho> = -1, <m,u_rho'> >= 0 }`.
pub fn h0_tangent(fan: &Fan) -> Result<Int> {
    if !fan.is_smooth() {
        return Err(Error::NotSmooth);
    }
    if !fan.is_complete() {
        return Err(Error::NotComplete);
    }
    let d = fan.dim();
    let mut total = Int::from(d as i64);
    for rho in 0..fan.n_rays() {
        let mut rows = Vec::new();
        // <m, u_rho> = -1
        rows.push(Inequality::new(fan.ray(rho).0.clone(), Int::from(-1)));
        rows.push(Inequality::new(
            fan.ray(rho).0.iter().map(|e| -e).collect(),
            Int::one(),
        ));
        for other in 0..fan.n_rays() {
            if other != rho {
                rows.push(Inequality::new(fan.ray(other).0.clone(), Int::zero()));
            }
        }
        let mut box_lo = Vec::with_capacity(d);
        let mut box_hi = Vec::with_capacity(d);
        let mut empty = false;
        for coord in 0..d {
            match fm_coordinate_bounds(&rows, d, coord) {
                CoordinateBounds::Infeasible => {
                    empty = true;
                    break;
                }
                CoordinateBounds::Bounds(Some(lo), Some(hi)) => {
                    box_lo.push(lo.ceil().to_integer());
                    box_hi.push(hi.floor().to_integer());
                }
                CoordinateBounds::Bounds(_, _) => {
                    return Err(Error::Internal(
                        "unbounded Demazure root region on a complete fan".into(),
                    ));
                }
            }
        }
        if empty {
            continue;
        }
        for m in integer_box_points(&box_lo, &box_hi) {
            let ok = (0..fan.n_rays()).all(|other| {
                let v = m.dot(fan.ray(other));
                if other == rho {
                    v == Int::from(-1)
                } else {
                    !v.is_negative()
                }
            });
            if ok {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// All integer points of the box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
pub fn integer_box_points(lo: &[Int], hi: &[Int]) -> Vec<IntVector> {
    let d = lo.len();
    let mut out = Vec::new();
    let mut current: Vec<Int> = lo.to_vec();
    if lo.iter().zip(hi.iter()).any(|(l, h)| l > h) {
        return out;
    }
    loop {
        out.push(IntVector(current.clone()));
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            if current[k] < hi[k] {
                current[k] += 1;
                break;
            }
            current[k] = lo[k].clone();
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{fan_ex23, fan_f2, fan_p2};
    use crate::lattice::int;
    use proptest::prelude::*;

    #[test]
    fn intersection_numbers_on_p2() {
        let p2 = fan_p2();
        let ring = ChowRing::new(&p2).unwrap();
        assert_eq!(ring.intersection_number(&[0, 1]).unwrap(), int(1));
        assert_eq!(ring.intersection_number(&[0, 0]).unwrap(), int(1));
        assert_eq!(ring.c1_top().unwrap(), int(9));
    }

    #[test]
    fn self_intersection_of_the_minus_two_curve() {
        let f2 = fan_f2();
        let ring = ChowRing::new(&f2).unwrap();
        assert_eq!(ring.intersection_number(&[1, 1]).unwrap(), int(-2));
        assert_eq!(ring.intersection_number(&[3, 3]).unwrap(), int(2));
        // The rays (1,0) and (-1,2) are fibers of the ruling.
        assert_eq!(ring.intersection_number(&[2, 2]).unwrap(), int(0));
        assert_eq!(ring.c1_top().unwrap(), int(8));
    }

    #[test]
    fn non_cone_monomials_vanish() {
        let ex23 = fan_ex23();
        let ring = ChowRing::new(&ex23).unwrap();
        // {0, 2} is a primitive collection, not a cone.
        assert_eq!(ring.intersection_number(&[0, 2]).unwrap(), int(0));
    }

    #[test]
    fn top_chern_class_counts_maximal_cones() {
        for fan in [fan_p2(), fan_ex23(), fan_f2()] {
            let ring = ChowRing::new(&fan).unwrap();
            assert_eq!(
                ring.c_top().unwrap(),
                Int::from(fan.max_cones().len() as i64)
            );
        }
    }

    #[test]
    fn h0_tangent_p2() {
        assert_eq!(h0_tangent(&fan_p2()).unwrap(), int(8));
    }

    #[test]
    fn c1sq_c2_on_surfaces_counts_cones() {
        // On a surface c1^0 c2 = c2 = Euler characteristic = #max cones.
        for fan in [fan_p2(), fan_ex23(), fan_f2()] {
            let ring = ChowRing::new(&fan).unwrap();
            assert_eq!(
                ring.c1sq_c2().unwrap(),
                Int::from(fan.max_cones().len() as i64)
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reduction_order_does_not_matter(
            choices in proptest::collection::vec(0usize..8, 64),
            mono_seed in proptest::collection::vec(0usize..5, 2),
        ) {
            let ex23 = fan_ex23();
            let ring = ChowRing::new(&ex23).unwrap();
            let mono: Vec<usize> = mono_seed.clone();
            let reference = {
                let fresh = ChowRing::new(&ex23).unwrap();
                fresh.intersection_number(&mono).unwrap()
            };
            let mut cursor = 0;
            let mut chooser = |n: usize| {
                let c = choices[cursor % choices.len()] % n.max(1);
                cursor += 1;
                c
            };
            let fresh = ChowRing::new(&ex23).unwrap();
            let randomized = fresh
                .intersection_number_with_choice(&mono, &mut chooser)
                .unwrap();
            prop_assert_eq!(reference, randomized);
        }
    }
}

//! Torus-invariant divisors: Cartier data, nef/ample tests, the
//! Fano/weak-Fano criterion, Mori cone generators and extremality.

use num_traits::{Signed, Zero};
use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::fan::{Fan, PrimitiveCollection, PrimitiveRelation};
use crate::lattice::{
    in_rational_cone, positive_multiple, solve_in_basis, Int, IntVector,
};

/// `D = sum a_rho D_rho`, with one integer coefficient per ray.
#[derive(Clone)]
pub struct TorusDivisor<'a> {
    fan: &'a Fan,
    coeffs: Vec<Int>,
    cartier: OnceCell<CartierData>,
}

/// Per maximal cone sigma, the unique m_sigma with `<m_sigma, u_rho> = -a_rho`
/// for all rays rho of sigma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData {
    pub per_cone: Vec<IntVector>,
}

impl<'a> TorusDivisor<'a> {
    pub fn new(fan: &'a Fan, coeffs: Vec<Int>) -> Result<Self> {
        if coeffs.len() != fan.n_rays() {
            return Err(Error::DimensionMismatch {
                expected: fan.n_rays(),
                got: coeffs.len(),
            });
        }
        Ok(TorusDivisor {
            fan,
            coeffs,
            cartier: OnceCell::new(),
        })
    }

    pub fn zero(fan: &'a Fan) -> Self {
        TorusDivisor {
            fan,
            coeffs: vec![Int::zero(); fan.n_rays()],
            cartier: OnceCell::new(),
        }
    }

    pub fn fan(&self) -> &'a Fan {
        self.fan
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn coeff(&self, ray: usize) -> &Int {
        &self.coeffs[ray]
    }

    /// Solves the d x d system per maximal cone, exactly and memoized.
    pub fn cartier_data(&self) -> Result<&CartierData> {
        self.cartier.get_or_try_init(|| {
            let mut per_cone = Vec::with_capacity(self.fan.max_cones().len());
            for (ci, cone) in self.fan.max_cones().iter().enumerate() {
                // <m, u_rho> = -a_rho for rho in sigma is a linear system in m
                // whose matrix rows are the cone's rays; solve it by expressing
                // the target in the dual basis.
                let rows: Vec<IntVector> = cone.iter().map(|&r| self.fan.ray(r).clone()).collect();
                // Solve R m = -a with R the matrix whose rows are the rays:
                // equivalently express -a in the column space of R^T.
                let target = IntVector(cone.iter().map(|&r| -&self.coeffs[r]).collect());
                let cols: Vec<IntVector> = (0..self.fan.dim())
                    .map(|j| IntVector(rows.iter().map(|row| row.0[j].clone()).collect()))
                    .collect();
                let solution = solve_in_basis(&cols, &target)?;
                let mut m = Vec::with_capacity(self.fan.dim());
                for c in solution {
                    if !c.is_integer() {
                        return Err(Error::NotCartier { cone: ci });
                    }
                    m.push(c.to_integer());
                }
                per_cone.push(IntVector(m));
            }
            Ok(CartierData { per_cone })
        })
    }

    /// `sum_rho a_rho * relation_vector[rho]`, i.e. `D . r(P)`.
    pub fn pair_with_relation(&self, relation: &PrimitiveRelation) -> Result<Int> {
        if relation.relation_vector.len() != self.fan.n_rays()
            || !relation_pairs_to_zero(self.fan, relation)
        {
            return Err(Error::FanMismatch);
        }
        Ok(self
            .coeffs
            .iter()
            .zip(relation.relation_vector.0.iter())
            .fold(Int::zero(), |acc, (a, r)| acc + a * r))
    }

    fn positivity(&self, strict: bool) -> Result<bool> {
        // Route 1: pairing with every primitive relation (Mori generators).
        let mut mori = true;
        for rel in self.fan.primitive_relations()? {
            let pairing = self.pair_with_relation(rel)?;
            if pairing.is_negative() || (strict && pairing.is_zero()) {
                mori = false;
                break;
            }
        }
        // Route 2: Cartier data, <m_sigma, u_rho> >= -a_rho for rho outside sigma.
        let cartier = self.cartier_data()?;
        let mut convex = true;
        'outer: for (cone, m) in self.fan.max_cones().iter().zip(cartier.per_cone.iter()) {
            for rho in 0..self.fan.n_rays() {
                if cone.contains(&rho) {
                    continue;
                }
                let v = m.dot(self.fan.ray(rho)) + &self.coeffs[rho];
                if v.is_negative() || (strict && v.is_zero()) {
                    convex = false;
                    break 'outer;
                }
            }
        }
        if mori != convex {
            return Err(Error::Internal(format!(
                "nef/ample criteria disagree (mori={mori}, cartier={convex})"
            )));
        }
        Ok(convex)
    }

    /// Nonnegative pairing with every primitive relation; cross-checked
    /// against the Cartier-data criterion.
    pub fn is_nef(&self) -> Result<bool> {
        self.positivity(false)
    }

    /// Strictly positive pairing with every primitive relation; cross-checked
    /// against the Cartier-data criterion.
    pub fn is_ample(&self) -> Result<bool> {
        self.positivity(true)
    }
}

fn relation_pairs_to_zero(fan: &Fan, relation: &PrimitiveRelation) -> bool {
    (0..fan.dim()).all(|j| {
        relation
            .relation_vector
            .0
            .iter()
            .zip(fan.rays().iter())
            .fold(Int::zero(), |acc, (c, u)| acc + c * &u.0[j])
            .is_zero()
    })
}

/// `-K_X = sum_rho D_rho`: all coefficients one.
pub fn anticanonical(fan: &Fan) -> TorusDivisor<'_> {
    TorusDivisor::new(fan, vec![Int::from(1); fan.n_rays()]).expect("length matches by construction")
}

/// All primitive relation degrees > 0 (Fano criterion).
pub fn is_fano(fan: &Fan) -> Result<bool> {
    Ok(fan
        .primitive_relations()?
        .iter()
        .all(|r| r.degree.is_positive()))
}

/// All primitive relation degrees >= 0 (weak Fano criterion).
pub fn is_weak_fano(fan: &Fan) -> Result<bool> {
    Ok(fan
        .primitive_relations()?
        .iter()
        .all(|r| !r.degree.is_negative()))
}

/// The Mori cone generators: all primitive relations.
pub fn mori_generators(fan: &Fan) -> Result<Vec<PrimitiveRelation>> {
    Ok(fan.primitive_relations()?.to_vec())
}

/// `r(P)` is extremal iff it is not contained in the cone spanned by the
/// relation vectors of the other primitive collections (positive multiples
/// of `r(P)` excluded; the Mori cone of a projective variety is pointed).
///
/// For non-projective complete fans the same cone-membership test is still
/// computed; callers should label the result "formal" in that case.
pub fn is_extremal(fan: &Fan, p: &PrimitiveCollection) -> Result<bool> {
    let relations = fan.primitive_relations()?;
    let target = relations
        .iter()
        .find(|r| &r.collection == p)
        .ok_or_else(|| Error::NotAPrimitiveCollection(format!("{:?}", p.ray_indices)))?;
    let others: Vec<IntVector> = relations
        .iter()
        .filter(|r| {
            &r.collection != p && !positive_multiple(&r.relation_vector, &target.relation_vector)
        })
        .map(|r| r.relation_vector.clone())
        .collect();
    Ok(!in_rational_cone(&others, &target.relation_vector))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{fan_ex23, fan_f2, fan_p2};
    use crate::lattice::int;

    fn iv(entries: &[i64]) -> IntVector {
        IntVector::from_i64(entries)
    }

    #[test]
    fn anticanonical_is_all_ones() {
        assert_eq!(anticanonical(&fan_p2()).coeffs(), &[int(1), int(1), int(1)]);
        assert_eq!(anticanonical(&fan_ex23()).coeffs().len(), 5);
    }

    #[test]
    fn cartier_data_examples() {
        let p2 = fan_p2();
        let k = anticanonical(&p2);
        let data = k.cartier_data().unwrap();
        // Cones are stored sorted: {0,1}, {0,2}, {1,2}.
        let by_cone: Vec<(&Vec<usize>, &IntVector)> =
            p2.max_cones().iter().zip(data.per_cone.iter()).collect();
        for (cone, m) in by_cone {
            for &r in cone {
                assert_eq!(m.dot(p2.ray(r)), int(-1));
            }
        }
        assert!(data.per_cone.contains(&iv(&[-1, -1])));
        assert!(data.per_cone.contains(&iv(&[2, -1])));
        assert!(data.per_cone.contains(&iv(&[-1, 2])));

        // F_2: the cones {0,1} and {1,2} share m = (-1,-1).
        let f2 = fan_f2();
        let k = anticanonical(&f2);
        let data = k.cartier_data().unwrap();
        let idx_01 = f2.max_cones().iter().position(|c| c == &vec![0, 1]).unwrap();
        let idx_12 = f2.max_cones().iter().position(|c| c == &vec![1, 2]).unwrap();
        assert_eq!(data.per_cone[idx_01], iv(&[-1, -1]));
        assert_eq!(data.per_cone[idx_12], iv(&[-1, -1]));

        // D = 0 gives m_sigma = 0 everywhere.
        let zero = TorusDivisor::zero(&p2);
        assert!(zero
            .cartier_data()
            .unwrap()
            .per_cone
            .iter()
            .all(IntVector::is_zero));
    }

    #[test]
    fn pairing_examples() {
        let ex23 = fan_ex23();
        let k = anticanonical(&ex23);
        let rel = ex23
            .primitive_relation(&PrimitiveCollection::new(vec![0, 3]))
            .unwrap();
        assert_eq!(k.pair_with_relation(&rel).unwrap(), int(1));
        let zero = TorusDivisor::zero(&ex23);
        assert_eq!(zero.pair_with_relation(&rel).unwrap(), int(0));
        let p2 = fan_p2();
        let k2 = anticanonical(&p2);
        let rel2 = p2
            .primitive_relation(&PrimitiveCollection::new(vec![0, 1, 2]))
            .unwrap();
        assert_eq!(k2.pair_with_relation(&rel2).unwrap(), int(3));
        // Mixing fans is rejected.
        assert_eq!(k2.pair_with_relation(&rel), Err(Error::FanMismatch));
    }

    #[test]
    fn nef_and_ample() {
        let p2 = fan_p2();
        let k = anticanonical(&p2);
        assert!(k.is_nef().unwrap());
        assert!(k.is_ample().unwrap());
        let f2 = fan_f2();
        let k = anticanonical(&f2);
        assert!(k.is_nef().unwrap());
        assert!(!k.is_ample().unwrap());
    }

    #[test]
    fn fano_flags() {
        assert!(is_fano(&fan_ex23()).unwrap());
        assert!(is_weak_fano(&fan_f2()).unwrap());
        assert!(!is_fano(&fan_f2()).unwrap());
        let mut degrees: Vec<Int> = fan_f2()
            .primitive_relations()
            .unwrap()
            .iter()
            .map(|r| r.degree.clone())
            .collect();
        degrees.sort();
        assert_eq!(degrees, vec![int(0), int(2)]);
    }

    #[test]
    fn extremality_on_ex23() {
        let ex23 = fan_ex23();
        let mut extremal = Vec::new();
        let mut non_extremal = Vec::new();
        for p in ex23.primitive_collections() {
            if is_extremal(&ex23, p).unwrap() {
                extremal.push(p.ray_indices.clone());
            } else {
                non_extremal.push(p.ray_indices.clone());
            }
        }
        assert_eq!(extremal, vec![vec![0, 3], vec![1, 3], vec![2, 4]]);
        assert_eq!(non_extremal, vec![vec![0, 2], vec![1, 4]]);
    }

    #[test]
    fn extremality_on_p2_and_p1xp1() {
        let p2 = fan_p2();
        let p = &p2.primitive_collections()[0];
        assert!(is_extremal(&p2, p).unwrap());

        let p1p1 = crate::fan::make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, 0]), iv(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        for p in p1p1.primitive_collections() {
            assert!(is_extremal(&p1p1, p).unwrap());
        }
    }
}

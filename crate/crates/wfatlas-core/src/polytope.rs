//! Divisor polytopes of nef divisors: face lattices, lattice points,
//! interior lattice points, normal cones, and exact volumes.
//!
//! Faces are keyed by their tight-inequality sets; that makes the normal
//! cone of a face a plain lookup.

use std::collections::{BTreeSet, HashMap};

use num_traits::{Signed, Zero};

use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::lattice::{rank_of_vectors, Int, IntMatrix, IntVector};

/// `P_D = { m : <m, u_rho> >= -a_rho }` together with its vertex set.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    /// Facet normals, one per ray of the underlying fan.
    normals: Vec<IntVector>,
    /// `a_rho` offsets; the inequality is `<m, normal_i> >= -offset_i`.
    offsets: Vec<Int>,
    vertices: Vec<IntVector>,
    affine_dim: usize,
}

/// A face of the polytope, keyed by its canonical tight-inequality set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeFace {
    /// Indices of inequalities tight on the whole face, canonicalized.
    pub tight: Vec<usize>,
    /// Indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
    pub dim: usize,
}

impl LatticePolytope {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn normals(&self) -> &[IntVector] {
        &self.normals
    }

    pub fn contains(&self, m: &IntVector) -> bool {
        self.normals
            .iter()
            .zip(self.offsets.iter())
            .all(|(u, a)| m.dot(u) + a >= Int::from(0))
    }

    fn tight_set(&self, m: &IntVector) -> Vec<usize> {
        self.normals
            .iter()
            .zip(self.offsets.iter())
            .enumerate()
            .filter(|(_, (u, a))| (m.dot(u) + *a).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    fn vertices_with_tight(&self, tight: &[usize]) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, v)| {
                tight
                    .iter()
                    .all(|&i| (v.dot(&self.normals[i]) + &self.offsets[i]).is_zero())
            })
            .map(|(i, _)| i)
            .collect()
    }

    fn canonical_face(&self, tight_seed: &BTreeSet<usize>) -> PolytopeFace {
        let seed: Vec<usize> = tight_seed.iter().copied().collect();
        let vertex_indices = self.vertices_with_tight(&seed);
        let mut canon: Option<BTreeSet<usize>> = None;
        for &vi in &vertex_indices {
            let t: BTreeSet<usize> = self.tight_set(&self.vertices[vi]).into_iter().collect();
            canon = Some(match canon {
                None => t,
                Some(acc) => acc.intersection(&t).copied().collect(),
            });
        }
        let tight: Vec<usize> = canon.unwrap_or_default().into_iter().collect();
        let dim = if vertex_indices.len() <= 1 {
            0
        } else {
            let base = &self.vertices[vertex_indices[0]];
            let diffs: Vec<IntVector> = vertex_indices[1..]
                .iter()
                .map(|&vi| self.vertices[vi].sub(base))
                .collect();
            rank_of_vectors(&diffs)
        };
        PolytopeFace {
            tight,
            vertices: vertex_indices,
            dim,
        }
    }

    /// All faces including the vertices and the polytope itself, computed
    /// by closing the vertex tight-sets under intersection. Deterministic
    /// order: by (dim, tight set).
    pub fn face_lattice(&self) -> Vec<PolytopeFace> {
        let vertex_tights: Vec<BTreeSet<usize>> = self
            .vertices
            .iter()
            .map(|v| self.tight_set(v).into_iter().collect())
            .collect();
        let mut seen: HashMap<Vec<usize>, PolytopeFace> = HashMap::new();
        let mut queue: Vec<BTreeSet<usize>> = vertex_tights.clone();
        queue.push(BTreeSet::new()); // the whole polytope
        while let Some(seed) = queue.pop() {
            let face = self.canonical_face(&seed);
            if seen.contains_key(&face.tight) {
                continue;
            }
            for other in &vertex_tights {
                let inter: BTreeSet<usize> = seed.intersection(other).copied().collect();
                queue.push(inter);
            }
            seen.insert(face.tight.clone(), face);
        }
        let mut faces: Vec<PolytopeFace> = seen.into_values().collect();
        faces.sort_by(|a, b| (a.dim, &a.tight).cmp(&(b.dim, &b.tight)));
        faces
    }

    /// All lattice points, by exact bounding-box enumeration over the
    /// vertex coordinate ranges.
    pub fn lattice_points(&self) -> Vec<IntVector> {
        if self.vertices.is_empty() {
            return Vec::new();
        }
        let d = self.dim;
        let mut lo = self.vertices[0].0.clone();
        let mut hi = self.vertices[0].0.clone();
        for v in &self.vertices[1..] {
            for j in 0..d {
                if v.0[j] < lo[j] {
                    lo[j] = v.0[j].clone();
                }
                if v.0[j] > hi[j] {
                    hi[j] = v.0[j].clone();
                }
            }
        }
        crate::chow::integer_box_points(&lo, &hi)
            .into_iter()
            .filter(|m| self.contains(m))
            .collect()
    }

    /// Lattice points in the relative interior of a face: exactly the
    /// points whose tight set equals the face's tight set.
    pub fn interior_lattice_points(&self, face: &PolytopeFace) -> Vec<IntVector> {
        self.lattice_points()
            .into_iter()
            .filter(|m| self.tight_set(m) == face.tight)
            .collect()
    }

    /// Generators of the normal cone of a face: the facet normals tight on
    /// it (empty set = zero cone for the full face).
    pub fn normal_cone(&self, face: &PolytopeFace) -> Vec<IntVector> {
        face.tight.iter().map(|&i| self.normals[i].clone()).collect()
    }

    /// `d! * euclidean volume`, by a pulling triangulation of the face
    /// lattice. Requires a full-dimensional polytope.
    pub fn normalized_volume(&self) -> Result<Int> {
        if self.affine_dim != self.dim {
            return Err(Error::InvalidParams(
                "polytope is not full-dimensional".into(),
            ));
        }
        let faces = self.face_lattice();
        let whole = faces
            .iter()
            .find(|f| f.dim == self.dim)
            .ok_or_else(|| Error::Internal("face lattice misses the polytope".into()))?;
        let simplices = self.triangulate(whole, &faces);
        let mut total = Int::from(0);
        for simplex in simplices {
            let base = &self.vertices[simplex[0]];
            let diffs: Vec<IntVector> = simplex[1..]
                .iter()
                .map(|&vi| self.vertices[vi].sub(base))
                .collect();
            total += IntMatrix::from_rows(&diffs).det()?.abs();
        }
        Ok(total)
    }

    fn triangulate(&self, face: &PolytopeFace, faces: &[PolytopeFace]) -> Vec<Vec<usize>> {
        if face.dim == 0 {
            return vec![vec![face.vertices[0]]];
        }
        let apex = face.vertices[0];
        let mut out = Vec::new();
        for sub in faces {
            if sub.dim + 1 != face.dim
                || sub.vertices.contains(&apex)
                || !sub.vertices.iter().all(|v| face.vertices.contains(v))
            {
                continue;
            }
            for mut simplex in self.triangulate(sub, faces) {
                simplex.insert(0, apex);
                out.push(simplex);
            }
        }
        out
    }
}

/// The polytope of sections of a nef divisor; its vertices are the Cartier
/// data of the maximal cones.
pub fn divisor_polytope(divisor: &TorusDivisor<'_>) -> Result<LatticePolytope> {
    if !divisor.is_nef()? {
        return Err(Error::NotNef);
    }
    let fan = divisor.fan();
    let cartier = divisor.cartier_data()?;
    let mut vertices: Vec<IntVector> = cartier.per_cone.clone();
    vertices.sort();
    vertices.dedup();
    let normals: Vec<IntVector> = fan.rays().to_vec();
    let offsets: Vec<Int> = divisor.coeffs().to_vec();
    let polytope = LatticePolytope {
        dim: fan.dim(),
        normals,
        offsets,
        affine_dim: if vertices.len() <= 1 {
            0
        } else {
            let base = &vertices[0];
            let diffs: Vec<IntVector> =
                vertices[1..].iter().map(|v| v.sub(base)).collect();
            rank_of_vectors(&diffs)
        },
        vertices,
    };
    for v in &polytope.vertices {
        if !polytope.contains(v) {
            return Err(Error::Internal(
                "Cartier vertex violates a facet inequality".into(),
            ));
        }
    }
    Ok(polytope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::anticanonical;
    use crate::fan::{fan_f2, fan_p2, make_fan};
    use crate::lattice::int;

    fn iv(entries: &[i64]) -> IntVector {
        IntVector::from_i64(entries)
    }

    fn p2_polytope() -> LatticePolytope {
        let fan = fan_p2();
        let k = anticanonical(&fan);
        let p = divisor_polytope(&k).unwrap();
        assert_eq!(p.vertices().len(), 3);
        p
    }

    #[test]
    fn anticanonical_triangle_of_p2() {
        let p = p2_polytope();
        let vs: Vec<IntVector> = p.vertices().to_vec();
        for expected in [iv(&[-1, -1]), iv(&[2, -1]), iv(&[-1, 2])] {
            assert!(vs.contains(&expected));
        }
        assert_eq!(p.lattice_points().len(), 10);
    }

    #[test]
    fn anticanonical_triangle_of_f2() {
        let fan = fan_f2();
        let k = anticanonical(&fan);
        let p = divisor_polytope(&k).unwrap();
        let vs = p.vertices().to_vec();
        assert_eq!(vs.len(), 3);
        for expected in [iv(&[-1, -1]), iv(&[3, 1]), iv(&[-1, 1])] {
            assert!(vs.contains(&expected));
        }
    }

    #[test]
    fn zero_divisor_gives_a_point() {
        let fan = fan_p2();
        let zero = TorusDivisor::zero(&fan);
        let p = divisor_polytope(&zero).unwrap();
        assert_eq!(p.vertices(), &[iv(&[0, 0])]);
        assert_eq!(p.face_lattice().len(), 1);
        assert_eq!(p.lattice_points(), vec![iv(&[0, 0])]);
    }

    #[test]
    fn non_nef_divisor_is_rejected() {
        let fan = fan_p2();
        let d = TorusDivisor::new(&fan, vec![int(-1), int(0), int(0)]).unwrap();
        assert_eq!(divisor_polytope(&d).unwrap_err(), Error::NotNef);
    }

    #[test]
    fn face_counts() {
        let p = p2_polytope();
        let faces = p.face_lattice();
        assert_eq!(faces.len(), 7);
        assert_eq!(faces.iter().filter(|f| f.dim == 0).count(), 3);
        assert_eq!(faces.iter().filter(|f| f.dim == 1).count(), 3);
        assert_eq!(faces.iter().filter(|f| f.dim == 2).count(), 1);

        // P^1 x P^1: the square with vertices (+-1, +-1) has 9 faces.
        let p1p1 = make_fan(
            2,
            vec![iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, 0]), iv(&[0, -1])],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
        )
        .unwrap();
        let k = anticanonical(&p1p1);
        let p = divisor_polytope(&k).unwrap();
        assert_eq!(p.face_lattice().len(), 9);
    }

    #[test]
    fn euler_characteristic_is_one() {
        for fan in [fan_p2(), fan_f2(), crate::fan::fan_ex23()] {
            let k = anticanonical(&fan);
            let p = divisor_polytope(&k).unwrap();
            let mut euler = 0i64;
            for f in p.face_lattice() {
                euler += if f.dim % 2 == 0 { 1 } else { -1 };
            }
            assert_eq!(euler, 1);
        }
    }

    #[test]
    fn interior_points_and_vertex_convention() {
        let p = p2_polytope();
        let faces = p.face_lattice();
        let whole = faces.iter().find(|f| f.dim == 2).unwrap();
        assert_eq!(p.interior_lattice_points(whole), vec![iv(&[0, 0])]);
        for vertex in faces.iter().filter(|f| f.dim == 0) {
            assert_eq!(p.interior_lattice_points(vertex).len(), 1);
        }

        // Edge from (-1,-1) to (-1,1) on the F_2 triangle contains (-1,0).
        let fan = fan_f2();
        let k = anticanonical(&fan);
        let p = divisor_polytope(&k).unwrap();
        let faces = p.face_lattice();
        let edge = faces
            .iter()
            .find(|f| {
                f.dim == 1 && {
                    let vs: Vec<&IntVector> =
                        f.vertices.iter().map(|&i| &p.vertices()[i]).collect();
                    vs.contains(&&iv(&[-1, -1])) && vs.contains(&&iv(&[-1, 1]))
                }
            })
            .unwrap();
        assert_eq!(p.interior_lattice_points(edge), vec![iv(&[-1, 0])]);
    }

    #[test]
    fn normal_cones() {
        let fan = fan_f2();
        let k = anticanonical(&fan);
        let p = divisor_polytope(&k).unwrap();
        let faces = p.face_lattice();
        let corner = faces
            .iter()
            .find(|f| f.dim == 0 && p.vertices()[f.vertices[0]] == iv(&[-1, -1]))
            .unwrap();
        let cone = p.normal_cone(corner);
        assert_eq!(cone.len(), 3);
        for expected in [iv(&[1, 0]), iv(&[0, 1]), iv(&[-1, 2])] {
            assert!(cone.contains(&expected));
        }
        let whole = faces.iter().find(|f| f.dim == 2).unwrap();
        assert!(p.normal_cone(whole).is_empty());
    }

    #[test]
    fn volume_matches_degree_on_surfaces() {
        let p = p2_polytope();
        assert_eq!(p.normalized_volume().unwrap(), int(9));
        let fan = fan_f2();
        let k = anticanonical(&fan);
        let p = divisor_polytope(&k).unwrap();
        assert_eq!(p.normalized_volume().unwrap(), int(8));
    }

    #[test]
    fn every_facet_inequality_is_tight_somewhere() {
        for fan in [fan_p2(), fan_f2(), crate::fan::fan_ex23()] {
            let k = anticanonical(&fan);
            let p = divisor_polytope(&k).unwrap();
            for i in 0..p.normals().len() {
                assert!(
                    p.vertices()
                        .iter()
                        .any(|v| (v.dot(&p.normals()[i]) + &p.offsets[i]).is_zero()),
                    "facet {i} not tight on any vertex"
                );
            }
        }
    }
}

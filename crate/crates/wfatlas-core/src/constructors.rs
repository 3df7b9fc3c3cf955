//! The three fan recipes (Kleinschmidt, rank-3 projective bundle, Batyrev)
//! and the bounded weak-Fano enumerators.
//!
//! Enumeration order is deterministic (lexicographic over parameters) so
//! classification IDs are reproducible run to run.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::fan::{make_fan, Fan, PrimitiveCollection};
use crate::lattice::{Int, IntVector};

/// `X_r(a_1, ..., a_{d'-r}) = P_{P^r}(O + O(a_1) + ... + O(a_{d'-r}))`,
/// printed as `(d', {a})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KleinschmidtParams {
    /// Total dimension d'.
    pub dim: usize,
    /// Nondecreasing nonnegative twists; length d' - r.
    pub a: Vec<i64>,
}

impl KleinschmidtParams {
    pub fn new(dim: usize, a: Vec<i64>) -> Result<Self> {
        let params = KleinschmidtParams { dim, a };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if self.a.is_empty() || self.a.len() >= self.dim {
            return Err(Error::InvalidParams(format!(
                "need 1 <= |a| <= d'-1, got |a| = {} with d' = {}",
                self.a.len(),
                self.dim
            )));
        }
        if self.a.windows(2).any(|w| w[0] > w[1]) || self.a.iter().any(|&e| e < 0) {
            return Err(Error::InvalidParams(
                "a must be nondecreasing and nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Base projective-space dimension r = d' - |a|.
    pub fn r(&self) -> usize {
        self.dim - self.a.len()
    }

    /// Ray index sets of the two primitive collections (X then Y).
    pub fn groups(&self) -> (Vec<usize>, Vec<usize>) {
        let fiber = self.a.len() + 1;
        ((0..fiber).collect(), (fiber..self.dim + 2).collect())
    }

    /// Degree of the Y-relation: r + 1 - sum(a). Weak Fano iff >= 0.
    pub fn y_degree(&self) -> i64 {
        self.r() as i64 + 1 - self.a.iter().sum::<i64>()
    }

    pub(crate) fn sort_key(&self) -> (usize, Vec<i64>) {
        (self.a.len(), self.a.clone())
    }
}

impl fmt::Display for KleinschmidtParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.dim, braces(&self.a))
    }
}

/// `Z = P_X(O + O(b_1,c_1) + ... + O(b_k,c_k))` over the Kleinschmidt base
/// `X = X_r(a)` of dimension d'; printed as `(d', {a}, {{b,c},...})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjectiveBundleParams {
    pub base_dim: usize,
    pub a: Vec<i64>,
    /// Lexicographically nondecreasing pairs with b_i >= 0; length d - d'.
    pub pairs: Vec<(i64, i64)>,
}

impl ProjectiveBundleParams {
    pub fn new(base_dim: usize, a: Vec<i64>, pairs: Vec<(i64, i64)>) -> Result<Self> {
        let params = ProjectiveBundleParams { base_dim, a, pairs };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        KleinschmidtParams::new(self.base_dim, self.a.clone())?;
        if self.pairs.is_empty() {
            return Err(Error::InvalidParams("need at least one (b, c) pair".into()));
        }
        if self.pairs.iter().any(|&(b, _)| b < 0) {
            return Err(Error::InvalidParams("all b_i must be nonnegative".into()));
        }
        if self.pairs.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParams(
                "pairs must be in lexicographic order".into(),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.base_dim + self.pairs.len()
    }

    pub fn r(&self) -> usize {
        self.base_dim - self.a.len()
    }

    /// Ray index sets of the three primitive collections (X, Y, Z).
    pub fn groups(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        let nx = self.a.len() + 1;
        let ny = self.r() + 1;
        let nz = self.pairs.len() + 1;
        (
            (0..nx).collect(),
            (nx..nx + ny).collect(),
            (nx + ny..nx + ny + nz).collect(),
        )
    }

    pub(crate) fn sort_key(&self) -> (usize, usize, Vec<i64>, Vec<i64>, Vec<i64>) {
        (
            self.base_dim,
            self.a.len(),
            self.a.clone(),
            self.pairs.iter().map(|p| p.0).collect(),
            self.pairs.iter().map(|p| p.1).collect(),
        )
    }
}

impl fmt::Display for ProjectiveBundleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .pairs
            .iter()
            .map(|(b, c)| format!("{{{b},{c}}}"))
            .collect();
        write!(
            f,
            "({}, {}, {{{}}})",
            self.base_dim,
            braces(&self.a),
            pairs.join(",")
        )
    }
}

/// Batyrev's five-collection construction, printed as `({p}, {b}, {c})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BatyrevParams {
    /// Positive partition of d + 3.
    pub p: [usize; 5],
    /// Nondecreasing nonnegative; length p_3.
    pub b: Vec<i64>,
    /// Nondecreasing nonnegative; length p_2 - 1 (indices start from 2).
    pub c: Vec<i64>,
}

impl BatyrevParams {
    pub fn new(p: [usize; 5], b: Vec<i64>, c: Vec<i64>) -> Result<Self> {
        let params = BatyrevParams { p, b, c };
        params.validate()?;
        Ok(params)
    }

    fn validate(&self) -> Result<()> {
        if self.p.iter().any(|&x| x == 0) {
            return Err(Error::InvalidParams("all p_i must be positive".into()));
        }
        if self.p.iter().sum::<usize>() < 5 {
            return Err(Error::InvalidParams("partition too small".into()));
        }
        if self.b.len() != self.p[3] {
            return Err(Error::InvalidParams(format!(
                "need |b| = p_3 = {}, got {}",
                self.p[3],
                self.b.len()
            )));
        }
        if self.c.len() + 1 != self.p[2] {
            return Err(Error::InvalidParams(format!(
                "need |c| = p_2 - 1 = {}, got {}",
                self.p[2] - 1,
                self.c.len()
            )));
        }
        for list in [&self.b, &self.c] {
            if list.windows(2).any(|w| w[0] > w[1]) || list.iter().any(|&e| e < 0) {
                return Err(Error::InvalidParams(
                    "b and c must be nondecreasing and nonnegative".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.p.iter().sum::<usize>() - 3
    }

    /// Ray index ranges of the five groups X_0..X_4 in ray order
    /// (v, y, z, t, u).
    pub fn groups(&self) -> [Vec<usize>; 5] {
        let mut out: [Vec<usize>; 5] = Default::default();
        let mut start = 0;
        for (i, item) in out.iter_mut().enumerate() {
            *item = (start..start + self.p[i]).collect();
            start += self.p[i];
        }
        out
    }

    /// The five primitive collections P_i = X_i cup X_{i+1}.
    pub fn collections(&self) -> [PrimitiveCollection; 5] {
        let groups = self.groups();
        std::array::from_fn(|i| {
            let mut v = groups[i].clone();
            v.extend(&groups[(i + 1) % 5]);
            PrimitiveCollection::new(v)
        })
    }

    /// Degrees of the five primitive relations, derived from the p, b, c data.
    pub fn degrees(&self) -> [i64; 5] {
        let [p0, p1, p2, p3, p4] = self.p.map(|x| x as i64);
        let sb: i64 = self.b.iter().sum();
        let sc: i64 = self.c.iter().sum();
        [
            p0 + p1 - p3 - sb - sc,
            p1 + p2 - p4,
            p2 + p3,
            p3 + p4 - p1,
            p4 + p0 - sb - sc,
        ]
    }

    pub(crate) fn sort_key(&self) -> ([usize; 5], Vec<i64>, Vec<i64>) {
        (self.p, self.b.clone(), self.c.clone())
    }
}

impl fmt::Display for BatyrevParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<i64> = self.p.iter().map(|&x| x as i64).collect();
        write!(f, "({}, {}, {})", braces(&p), braces(&self.b), braces(&self.c))
    }
}

fn braces(list: &[i64]) -> String {
    let items: Vec<String> = list.iter().map(i64::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn unit(dim: usize, pos: usize) -> IntVector {
    let mut v = IntVector::zero(dim);
    v.0[pos] = Int::one();
    v
}

/// Builds the Kleinschmidt fan with rays in the order
/// `x_{d'-r+1}, x_1, ..., x_{d'-r}, y_1, ..., y_{r+1}` and maximal cones
/// `Cone(rays \ {x_i, y_j})`.
pub fn kleinschmidt(params: &KleinschmidtParams) -> Result<Fan> {
    params.validate()?;
    let d = params.dim;
    let r = params.r();
    let fiber = params.a.len(); // d' - r
    let mut rays = Vec::with_capacity(d + 2);
    let mut first = IntVector::zero(d);
    for j in 0..fiber {
        first.0[j] = Int::from(-1);
    }
    rays.push(first);
    for i in 0..fiber {
        rays.push(unit(d, i));
    }
    for j in 0..r {
        rays.push(unit(d, fiber + j));
    }
    let mut last = IntVector::zero(d);
    for (j, &aj) in params.a.iter().enumerate() {
        last.0[j] = Int::from(aj);
    }
    for j in fiber..d {
        last.0[j] = Int::from(-1);
    }
    rays.push(last);

    let (gx, gy) = params.groups();
    let mut cones = Vec::with_capacity(gx.len() * gy.len());
    for &xi in &gx {
        for &yj in &gy {
            let cone: Vec<usize> = (0..d + 2).filter(|&k| k != xi && k != yj).collect();
            cones.push(cone);
        }
    }
    let fan = make_fan(d, rays, cones)?;
    check_splitting_fan(&fan, &[gx, gy])?;
    Ok(fan)
}

/// Builds the rank-3 projective bundle fan with rays ordered
/// `x_{d'-r+1}, x_*, y_*, y_{r+1}, z_*, z_{k+1}` and maximal cones
/// `Cone(rays \ {x_i, y_j, z_k})`.
pub fn projective_bundle(params: &ProjectiveBundleParams) -> Result<Fan> {
    params.validate()?;
    let d = params.dim();
    let r = params.r();
    let fiber = params.a.len(); // d' - r
    let k = params.pairs.len(); // d - d'
    let mut rays = Vec::with_capacity(d + 3);

    let mut x_last = IntVector::zero(d);
    for j in 0..fiber {
        x_last.0[j] = Int::from(-1);
    }
    for (j, &(b, _)) in params.pairs.iter().enumerate() {
        x_last.0[fiber + r + j] = Int::from(b);
    }
    rays.push(x_last);
    for i in 0..fiber {
        rays.push(unit(d, i));
    }
    for j in 0..r {
        rays.push(unit(d, fiber + j));
    }
    let mut y_last = IntVector::zero(d);
    for (j, &aj) in params.a.iter().enumerate() {
        y_last.0[j] = Int::from(aj);
    }
    for j in 0..r {
        y_last.0[fiber + j] = Int::from(-1);
    }
    for (j, &(_, c)) in params.pairs.iter().enumerate() {
        y_last.0[fiber + r + j] = Int::from(c);
    }
    rays.push(y_last);
    for m in 0..k {
        rays.push(unit(d, fiber + r + m));
    }
    let mut z_last = IntVector::zero(d);
    for j in 0..k {
        z_last.0[fiber + r + j] = Int::from(-1);
    }
    rays.push(z_last);

    let (gx, gy, gz) = params.groups();
    let mut cones = Vec::with_capacity(gx.len() * gy.len() * gz.len());
    for &xi in &gx {
        for &yj in &gy {
            for &zk in &gz {
                let cone: Vec<usize> = (0..d + 3)
                    .filter(|&m| m != xi && m != yj && m != zk)
                    .collect();
                cones.push(cone);
            }
        }
    }
    let fan = make_fan(d, rays, cones)?;
    check_splitting_fan(&fan, &[gx, gy, gz])?;
    Ok(fan)
}

fn check_splitting_fan(fan: &Fan, groups: &[Vec<usize>]) -> Result<()> {
    if !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Internal(
            "constructed fan is not smooth and complete".into(),
        ));
    }
    let expected: Vec<PrimitiveCollection> = {
        let mut v: Vec<PrimitiveCollection> = groups
            .iter()
            .map(|g| PrimitiveCollection::new(g.clone()))
            .collect();
        v.sort_by(|a, b| (a.len(), &a.ray_indices).cmp(&(b.len(), &b.ray_indices)));
        v
    };
    if fan.primitive_collections() != expected.as_slice() {
        return Err(Error::Internal(
            "primitive collections do not match the construction groups".into(),
        ));
    }
    Ok(())
}

/// Builds the Batyrev fan. Rays come in group order `v, y, z, t, u`; the
/// maximal cones are the facets of the simplicial complex whose minimal
/// non-faces are the five collections `P_i = X_i cup X_{i+1}`.
pub fn batyrev(params: &BatyrevParams) -> Result<Fan> {
    params.validate()?;
    let d = params.dim();
    let [p0, p1, p2, p3, p4] = params.p;

    // Standard basis labels in the order v_1..v_{p0}, y_2..y_{p1},
    // z_2..z_{p2}, t_1..t_{p3}, u_2..u_{p4}.
    let mut pos = 0;
    let mut next = || {
        let v = unit(d, pos);
        pos += 1;
        v
    };
    let v: Vec<IntVector> = (0..p0).map(|_| next()).collect();
    let y_rest: Vec<IntVector> = (1..p1).map(|_| next()).collect();
    let z_rest: Vec<IntVector> = (1..p2).map(|_| next()).collect();
    let t: Vec<IntVector> = (0..p3).map(|_| next()).collect();
    let u_rest: Vec<IntVector> = (1..p4).map(|_| next()).collect();
    debug_assert_eq!(pos, d);

    let z1 = {
        let mut s = IntVector::zero(d);
        for zi in &z_rest {
            s = s.sub(zi);
        }
        for ti in &t {
            s = s.sub(ti);
        }
        s
    };
    let u1 = {
        let mut s = IntVector::zero(d);
        for ui in &u_rest {
            s = s.sub(ui);
        }
        for vi in &v {
            s = s.sub(vi);
        }
        for (zi, &ci) in z_rest.iter().zip(params.c.iter()) {
            s = s.add(&zi.scale(&Int::from(ci)));
        }
        for (ti, &bi) in t.iter().zip(params.b.iter()) {
            s = s.add(&ti.scale(&Int::from(bi)));
        }
        s
    };
    let y1 = {
        let mut s = IntVector::zero(d);
        for yi in &y_rest {
            s = s.sub(yi);
        }
        s = s.sub(&z1);
        for zi in &z_rest {
            s = s.sub(zi);
        }
        s = s.add(&u1);
        for ui in &u_rest {
            s = s.add(ui);
        }
        s
    };

    let mut rays = Vec::with_capacity(d + 3);
    rays.extend(v);
    rays.push(y1);
    rays.extend(y_rest);
    rays.push(z1);
    rays.extend(z_rest);
    rays.extend(t);
    rays.push(u1);
    rays.extend(u_rest);

    // Facets: complements of 3-sets hitting all five collections.
    let n = d + 3;
    let collections = params.collections();
    let masks: Vec<u128> = collections
        .iter()
        .map(|p| p.ray_indices.iter().fold(0u128, |m, &i| m | (1 << i)))
        .collect();
    let full: u128 = (0..n).fold(0u128, |m, i| m | (1 << i));
    let mut cones = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let comp = (1u128 << i) | (1 << j) | (1 << k);
                let s = full & !comp;
                // S must contain no P_i, and adding back any removed ray
                // must break that (maximality).
                if masks.iter().any(|&m| m & s == m) {
                    continue;
                }
                let maximal = [i, j, k].iter().all(|&x| {
                    let sx = s | (1 << x);
                    masks.iter().any(|&m| m & sx == m)
                });
                if maximal {
                    cones.push((0..n).filter(|&x| comp & (1 << x) == 0).collect());
                }
            }
        }
    }

    let fan = make_fan(d, rays, cones)?;
    if !fan.is_smooth() || !fan.is_complete() {
        return Err(Error::Internal(
            "constructed Batyrev fan is not smooth and complete".into(),
        ));
    }
    let mut expected: Vec<PrimitiveCollection> = collections.to_vec();
    expected.sort_by(|a, b| (a.len(), &a.ray_indices).cmp(&(b.len(), &b.ray_indices)));
    if fan.primitive_collections() != expected.as_slice() {
        return Err(Error::Internal(
            "Batyrev fan has unexpected primitive collections".into(),
        ));
    }
    // The five relations must come out exactly as stated by the recipe.
    let groups = params.groups();
    let degrees = params.degrees();
    for (i, p) in collections.iter().enumerate() {
        let rel = fan.primitive_relation(p)?;
        if rel.degree != Int::from(degrees[i]) {
            return Err(Error::Internal(format!(
                "relation degree mismatch on P_{i}: expected {}, got {}",
                degrees[i], rel.degree
            )));
        }
        let mut expected_vec = IntVector::zero(n);
        for &ri in &p.ray_indices {
            expected_vec.0[ri] += 1;
        }
        match i {
            0 => {
                for (idx, &ci) in groups[2][1..].iter().zip(params.c.iter()) {
                    expected_vec.0[*idx] -= Int::from(ci);
                }
                for (idx, &bi) in groups[3].iter().zip(params.b.iter()) {
                    expected_vec.0[*idx] -= Int::from(bi) + Int::one();
                }
            }
            1 => {
                for &idx in &groups[4] {
                    expected_vec.0[idx] -= 1;
                }
            }
            2 => {}
            3 => {
                for &idx in &groups[1] {
                    expected_vec.0[idx] -= 1;
                }
            }
            4 => {
                for (idx, &ci) in groups[2][1..].iter().zip(params.c.iter()) {
                    expected_vec.0[*idx] -= Int::from(ci);
                }
                for (idx, &bi) in groups[3].iter().zip(params.b.iter()) {
                    expected_vec.0[*idx] -= Int::from(bi);
                }
            }
            _ => unreachable!(),
        }
        if rel.relation_vector != expected_vec {
            return Err(Error::Internal(format!(
                "primitive relation on P_{i} does not match the recipe"
            )));
        }
    }
    Ok(fan)
}

fn nondecreasing_sequences(len: usize, max_sum: i64) -> Vec<Vec<i64>> {
    fn go(len: usize, min: i64, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if len == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut e = min;
        while e * (len as i64) <= budget {
            prefix.push(e);
            go(len - 1, e, budget - e, prefix, out);
            prefix.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(len, 0, max_sum, &mut Vec::new(), &mut out);
    out
}

/// All weak Fano Kleinschmidt parameters in dimension `d`, in deterministic
/// order, with the `X_r(0,..,0) = X_{d-r}(0,..,0)` redundancy removed.
pub fn enumerate_kleinschmidt_weak_fano(d: usize) -> Result<Vec<(KleinschmidtParams, Fan)>> {
    if d < 2 {
        return Err(Error::InvalidParams("need d >= 2".into()));
    }
    let mut out = Vec::new();
    for len in 1..d {
        let r = d - len;
        for a in nondecreasing_sequences(len, r as i64 + 1) {
            if a.iter().all(|&e| e == 0) && len > d - len {
                continue;
            }
            let params = KleinschmidtParams::new(d, a)?;
            let fan = kleinschmidt(&params)?;
            debug_assert!(crate::divisor::is_weak_fano(&fan)?);
            out.push((params, fan));
        }
    }
    out.sort_by_key(|(p, _)| p.sort_key());
    Ok(out)
}

/// All projective-bundle candidates over weak Fano Kleinschmidt bases that
/// satisfy the weak Fano degree inequalities, constructed and filtered by
/// the degree criterion. Not yet deduplicated up to isomorphism.
pub fn enumerate_projective_bundles_weak_fano(
    d: usize,
) -> Result<Vec<(ProjectiveBundleParams, Fan)>> {
    if d < 3 {
        return Err(Error::InvalidParams("need d >= 3".into()));
    }
    let mut out = Vec::new();
    for base_dim in 2..d {
        let k = d - base_dim;
        for (base_params, _) in enumerate_kleinschmidt_weak_fano(base_dim)? {
            let r = base_params.r() as i64;
            let s = r + 1 - base_params.a.iter().sum::<i64>();
            let f = base_params.a.len() as i64 + 1; // d' - r + 1
            let mut pair_lists = Vec::new();
            gen_pairs(k, (0, -s), f, s, &mut Vec::new(), &mut pair_lists);
            for pairs in pair_lists {
                if !pairs_weak_fano(&pairs, f, s) {
                    continue;
                }
                let params =
                    ProjectiveBundleParams::new(base_dim, base_params.a.clone(), pairs)?;
                let fan = projective_bundle(&params)?;
                if crate::divisor::is_weak_fano(&fan)? {
                    out.push((params, fan));
                }
            }
        }
    }
    out.sort_by_key(|(p, _)| p.sort_key());
    Ok(out)
}

fn gen_pairs(
    len: usize,
    min_pair: (i64, i64),
    b_budget: i64,
    c_abs: i64,
    prefix: &mut Vec<(i64, i64)>,
    out: &mut Vec<Vec<(i64, i64)>>,
) {
    if len == 0 {
        out.push(prefix.clone());
        return;
    }
    for b in 0..=b_budget {
        for c in -c_abs..=c_abs {
            let pair = (b, c);
            if pair < min_pair {
                continue;
            }
            prefix.push(pair);
            gen_pairs(len - 1, pair, b_budget - b, c_abs, prefix, out);
            prefix.pop();
        }
    }
}

/// The Theorem 3.8 weak Fano inequalities for the pair list, given the
/// X-degree budget `f = d'-r+1` and the Y-degree budget `s = r+1-sum(a)`.
fn pairs_weak_fano(pairs: &[(i64, i64)], f: i64, s: i64) -> bool {
    let sb: i64 = pairs.iter().map(|p| p.0).sum();
    if sb > f {
        return false;
    }
    let min_c = pairs.iter().map(|p| p.1).min().unwrap_or(0);
    if min_c >= 0 {
        let sc: i64 = pairs.iter().map(|p| p.1).sum();
        sc <= s
    } else {
        let spread: i64 = pairs.iter().map(|p| p.1 - min_c).sum();
        s + min_c - spread >= 0
    }
}

/// All weak Fano Batyrev parameters in dimension `d`, in deterministic
/// order, with the all-zero pentagon-symmetry redundancy removed.
pub fn enumerate_batyrev_weak_fano(d: usize) -> Result<Vec<(BatyrevParams, Fan)>> {
    if d < 2 {
        return Err(Error::InvalidParams("need d >= 2".into()));
    }
    let total = d + 3;
    let mut out = Vec::new();
    for p0 in 1..=total - 4 {
        for p1 in 1..=total - p0 - 3 {
            for p2 in 1..=total - p0 - p1 - 2 {
                for p3 in 1..=total - p0 - p1 - p2 - 1 {
                    let p4 = total - p0 - p1 - p2 - p3;
                    let p = [p0, p1, p2, p3, p4];
                    let [q0, q1, q2, q3, q4] = p.map(|x| x as i64);
                    if q1 + q2 - q4 < 0 || q3 + q4 - q1 < 0 {
                        continue;
                    }
                    let budget = (q0 + q1 - q3).min(q0 + q4);
                    if budget < 0 {
                        continue;
                    }
                    for b in nondecreasing_sequences(p3, budget) {
                        let sb: i64 = b.iter().sum();
                        for c in nondecreasing_sequences(p2 - 1, budget - sb) {
                            let zero = b.iter().all(|&e| e == 0) && c.iter().all(|&e| e == 0);
                            if zero && (p0, p3) > (p2, p4) {
                                continue;
                            }
                            let params = BatyrevParams::new(p, b.clone(), c)?;
                            let fan = batyrev(&params)?;
                            debug_assert!(crate::divisor::is_weak_fano(&fan)?);
                            debug_assert_eq!(fan.primitive_collections().len(), 5);
                            out.push((params, fan));
                        }
                    }
                }
            }
        }
    }
    out.sort_by_key(|(p, _)| p.sort_key());
    Ok(out)
}

/// Recognizes a smooth complete fan of Picard rank 2 as a Kleinschmidt
/// variety, returning canonical parameters.
pub fn recognize_kleinschmidt(fan: &Fan) -> Option<KleinschmidtParams> {
    if !fan.is_smooth() || !fan.is_complete() || fan.picard_rank() != 2 {
        return None;
    }
    let pcs = fan.primitive_collections();
    if pcs.len() != 2 {
        return None;
    }
    let rels: Vec<_> = pcs
        .iter()
        .map(|p| fan.primitive_relation(p).ok())
        .collect::<Option<Vec<_>>>()?;
    let d = fan.dim();
    let zero0 = rels[0].sigma_rays.is_empty();
    let zero1 = rels[1].sigma_rays.is_empty();
    let a = if zero0 && zero1 {
        // Product of projective spaces; canonical form has |a| <= d - |a|.
        let len = pcs[0].len().min(pcs[1].len()) - 1;
        vec![0i64; len]
    } else {
        let (x_idx, y_idx) = if zero0 { (0, 1) } else if zero1 { (1, 0) } else { return None };
        let x_set = &pcs[x_idx].ray_indices;
        let y_rel = &rels[y_idx];
        if !y_rel.sigma_rays.iter().all(|r| x_set.contains(r)) {
            return None;
        }
        let mut a: Vec<i64> = y_rel
            .coefficients
            .iter()
            .map(|c| i64::try_from(c).ok())
            .collect::<Option<Vec<_>>>()?;
        a.extend(std::iter::repeat(0).take(x_set.len() - 1 - a.len()));
        a.sort_unstable();
        a
    };
    let params = KleinschmidtParams::new(d, a).ok()?;
    let model = kleinschmidt(&params).ok()?;
    match crate::iso::are_isomorphic(fan, &model) {
        Ok(Some(_)) => Some(params),
        _ => None,
    }
}

//! The neighbor operators T_k on the class space and their exact spectra.
//!
//! The class space V has the equivalence classes as a basis and the
//! weighted scalar product `([C],[D]) = |Aut(C)| delta`. T_k sends `[C]` to
//! the formal sum of the classes of its k-neighbors; in the class basis its
//! matrix entry `M[D][C]` counts the k-neighbors of the representative C
//! that are equivalent to D. T_k is self-adjoint for the weighted product,
//! which is the identity `|Aut(D)| M[D][C] = |Aut(C)| M[C][D]`, checked
//! here exactly. The eigenvalues of T = T_1 are known in closed form per family;
//! [`spectrum`] verifies by exact rational elimination that the candidate
//! eigenspaces exhaust the class space.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon;
use crate::db::ClassDatabase;
use crate::error::{Error, Result};
use crate::neighbor;
use crate::ratmat::{self, rat_u128, rat_u64, Rat};
use crate::types::TypeFamily;

/// Exact integer matrix of T_k in the persisted class basis. Column C holds
/// the neighbor counts of the representative of class C.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeckeMatrix {
    pub k: usize,
    pub dim: usize,
    /// row-major: `entries[d * dim + c] = M[d][c]`
    pub entries: Vec<u64>,
}

impl HeckeMatrix {
    pub fn get(&self, d: usize, c: usize) -> u64 {
        self.entries[d * self.dim + c]
    }

    pub fn column_sum(&self, c: usize) -> u64 {
        (0..self.dim).map(|d| self.get(d, c)).sum()
    }

    pub fn to_rational(&self) -> Vec<Vec<Rat>> {
        (0..self.dim)
            .map(|d| (0..self.dim).map(|c| rat_u64(self.get(d, c))).collect())
            .collect()
    }
}

/// Build T_k on a complete class database. k = 1 reads the stored neighbor
/// records; k > 1 recomputes through the k-neighbor enumeration.
pub fn hecke_matrix(db: &ClassDatabase, k: usize, subspace_budget: u128) -> Result<HeckeMatrix> {
    if !db.complete {
        return Err(Error::IncompleteDatabase);
    }
    let dim = db.class_count();
    let mut entries = vec![0u64; dim * dim];
    if k == 1 {
        for rec in &db.neighbors {
            entries[rec.target * dim + rec.source] = rec.count;
        }
        return Ok(HeckeMatrix { k, dim, entries });
    }
    let fam = db.family()?;
    let reps: Vec<crate::code::Code> =
        (0..dim).map(|i| db.code(i)).collect::<Result<_>>()?;
    let fingerprints: std::collections::HashMap<canon::Fingerprint, usize> = (0..dim)
        .map(|i| (db.fingerprint(i).expect("valid fingerprint"), i))
        .collect();
    let columns: Vec<Result<Vec<u64>>> = reps
        .par_iter()
        .map(|rep| {
            let mut col = vec![0u64; dim];
            for d in neighbor::k_neighbors(rep, fam.as_ref(), k, subspace_budget)? {
                let fp = canon::canonical_form(&d).fingerprint;
                let target = *fingerprints
                    .get(&fp)
                    .ok_or_else(|| Error::Invalid("k-neighbor leaves the classified family".into()))?;
                col[target] += 1;
            }
            Ok(col)
        })
        .collect();
    for (c, col) in columns.into_iter().enumerate() {
        for (d, v) in col?.into_iter().enumerate() {
            entries[d * dim + c] = v;
        }
    }
    Ok(HeckeMatrix { k, dim, entries })
}

/// Weighted scalar product sum_C v_C w_C |Aut(C)|.
pub fn inner_product(v: &[Rat], w: &[Rat], db: &ClassDatabase) -> Result<Rat> {
    if v.len() != db.class_count() || w.len() != db.class_count() {
        return Err(Error::DimensionMismatch(v.len().max(w.len()), db.class_count()));
    }
    let mut acc = Rat::zero();
    for ((x, y), class) in v.iter().zip(w).zip(&db.classes) {
        acc += x * y * rat_u128(class.aut_order);
    }
    Ok(acc)
}

/// The mass vector sigma with coordinates 1/|Aut(C)|; spans the top
/// eigenspace.
pub fn sigma(db: &ClassDatabase) -> Vec<Rat> {
    db.classes.iter().map(|c| rat_u128(c.aut_order).recip()).collect()
}

/// Exact self-adjointness report: violations are the pairs (d, c) with
/// `|Aut(d)| M[d][c] != |Aut(c)| M[c][d]`.
#[derive(Debug)]
pub struct SelfAdjointReport {
    pub ok: bool,
    pub violations: Vec<(usize, usize)>,
}

pub fn check_self_adjoint(t: &HeckeMatrix, db: &ClassDatabase) -> SelfAdjointReport {
    let mut violations = Vec::new();
    for d in 0..t.dim {
        for c in d + 1..t.dim {
            let lhs = BigUint::from(db.classes[d].aut_order) * BigUint::from(t.get(d, c));
            let rhs = BigUint::from(db.classes[c].aut_order) * BigUint::from(t.get(c, d));
            if lhs != rhs {
                violations.push((d, c));
            }
        }
    }
    SelfAdjointReport { ok: violations.is_empty(), violations }
}

/// One eigenspace of the spectrum; `ms` lists the filtration indices whose
/// predicted eigenvalue coincides (a singleton unless eigenvalues collide,
/// which does not happen in the supported ranges but is reported rather
/// than hidden).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenSpace {
    pub ms: Vec<usize>,
    #[serde(with = "rat_string")]
    pub nu: Rat,
    pub dim: usize,
    #[serde(with = "rat_string_mat")]
    pub basis: Vec<Vec<Rat>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Spectrum {
    pub spaces: Vec<EigenSpace>,
    /// true when some predicted eigenvalues coincided
    pub merged: bool,
}

impl Spectrum {
    /// Eigenspace dimension per filtration index m = 0..n. Only meaningful
    /// when no eigenvalues merged.
    pub fn y_dims(&self) -> Result<Vec<usize>> {
        if self.merged {
            return Err(Error::Invalid(
                "coinciding eigenvalues: per-index dimensions are not separable".into(),
            ));
        }
        let mut pairs: Vec<(usize, usize)> =
            self.spaces.iter().map(|s| (s.ms[0], s.dim)).collect();
        pairs.sort_unstable();
        Ok(pairs.into_iter().map(|(_, d)| d).collect())
    }

    /// Trailing zeros removed, the shape the summary tables use.
    pub fn y_dims_trimmed(&self) -> Result<Vec<usize>> {
        let mut dims = self.y_dims()?;
        while dims.len() > 1 && *dims.last().unwrap() == 0 {
            dims.pop();
        }
        Ok(dims)
    }
}

/// Decompose the class space under T = T_1: for every m the kernel of
/// T - nu_m I is computed by exact elimination, the dimensions must add up
/// to the class count (this is the primary alarm for an incomplete
/// classification), eigenspaces must be pairwise orthogonal under the
/// weighted product, and sigma must be fixed with eigenvalue nu_0.
pub fn spectrum(t: &HeckeMatrix, fam: &dyn TypeFamily, db: &ClassDatabase) -> Result<Spectrum> {
    if t.k != 1 {
        return Err(Error::Invalid("the spectral theorem applies to the k = 1 operator".into()));
    }
    if t.dim != db.class_count() {
        return Err(Error::BasisMismatch(t.dim, db.class_count()));
    }
    let n = db.n();
    let nus: Vec<BigRational> =
        (0..=n).map(|m| fam.nu(m, n)).collect::<Result<_>>()?;

    // group indices by (possibly equal) eigenvalue, preserving m order
    let mut groups: Vec<(Rat, Vec<usize>)> = Vec::new();
    for (m, nu) in nus.iter().enumerate() {
        match groups.iter_mut().find(|(v, _)| v == nu) {
            Some((_, ms)) => ms.push(m),
            None => groups.push((nu.clone(), vec![m])),
        }
    }
    let merged = groups.iter().any(|(_, ms)| ms.len() > 1);

    // TODO: dense rational elimination is cubic per eigenvalue; the binary
    // length-30/32 runs (731 and 3295 classes) want a fraction-free or
    // modular kernel instead
    let tm = t.to_rational();
    let spaces: Vec<EigenSpace> = groups
        .par_iter()
        .map(|(nu, ms)| {
            let mut shifted = tm.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] -= nu.clone();
            }
            let basis = ratmat::kernel_basis(&shifted);
            EigenSpace { ms: ms.clone(), nu: nu.clone(), dim: basis.len(), basis }
        })
        .collect();

    let total: usize = spaces.iter().map(|s| s.dim).sum();
    if total != t.dim {
        return Err(Error::SpectralDefect { found: total, expected: t.dim });
    }

    // pairwise orthogonality under the weighted product
    for (i, a) in spaces.iter().enumerate() {
        for b in &spaces[i + 1..] {
            for va in &a.basis {
                for vb in &b.basis {
                    let ip = inner_product(va, vb, db)?;
                    if !ip.is_zero() {
                        return Err(Error::Invalid(format!(
                            "eigenspaces for nu = {} and nu = {} are not orthogonal",
                            a.nu, b.nu
                        )));
                    }
                }
            }
        }
    }

    // sigma is the nu_0 eigenvector
    let sig = sigma(db);
    let t_sig = ratmat::mat_vec(&tm, &sig);
    let expect: Vec<Rat> = sig.iter().map(|x| x * &nus[0]).collect();
    if t_sig != expect {
        return Err(Error::Invalid("the mass vector is not fixed with eigenvalue nu_0".into()));
    }

    Ok(Spectrum { spaces, merged })
}

/// Exact coefficients c with T_k = sum c_i T^i of least degree, if any.
/// The relation is evidence, never an assertion.
pub fn polynomial_relation(tk: &HeckeMatrix, t: &HeckeMatrix) -> Result<Option<Vec<Rat>>> {
    if tk.dim != t.dim {
        return Err(Error::BasisMismatch(tk.dim, t.dim));
    }
    let dim = t.dim;
    let tm = t.to_rational();
    let target: Vec<Rat> =
        (0..dim * dim).map(|i| rat_u64(tk.entries[i])).collect();
    // powers of T, vectorized as columns
    let mut power = ratmat::identity(dim);
    let mut columns: Vec<Vec<Rat>> = Vec::new();
    for degree in 0..dim.max(1) {
        columns.push(power.iter().flatten().cloned().collect());
        // solve with the columns gathered so far
        let rows = dim * dim;
        let a: Vec<Vec<Rat>> =
            (0..rows).map(|r| columns.iter().map(|col| col[r].clone()).collect()).collect();
        if let Some(x) = ratmat::solve(&a, &target) {
            let _ = degree;
            return Ok(Some(x));
        }
        power = ratmat::mat_mul(&tm, &power);
    }
    Ok(None)
}

pub(crate) mod rat_string {
    use super::Rat;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        Rat::from_str(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod rat_string_mat {
    use super::Rat;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &Vec<Vec<Rat>>, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for row in v {
            let strings: Vec<String> = row.iter().map(|r| r.to_string()).collect();
            seq.serialize_element(&strings)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rat>>, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|s| Rat::from_str(&s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

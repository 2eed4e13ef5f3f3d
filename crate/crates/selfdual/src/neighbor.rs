//! Neighbor enumeration and classification of a family by graph closure.
//!
//! Two self-dual codes are k-neighbors when their intersection has
//! codimension k in each. For k = 1 the neighbors of C arise from the
//! codimension-1 subspaces E <= C: the quotient E^perp/E is a plane
//! carrying q+1 lines, one of which is C/E; the lifts of the others that
//! land in the family are exactly the neighbors through E. Families whose
//! members all contain the all-ones vector only need the subspaces E
//! containing it (no family code passes through any other E).
//!
//! [`classify`] closes the 1-neighbor relation from a seed code,
//! canonicalizing every neighbor and recording exact per-class
//! multiplicities, which later become the columns of the neighbor operator.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::canon::{self, Fingerprint};
use crate::code::Code;
use crate::db::{ClassDatabase, CodeClass, NeighborRecord};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::perm::OrbitPartition;
use crate::types::{MonomialSet, TypeFamily};
use crate::vecpack::PackedVec;

/// Options for [`classify`].
pub struct ClassifyOptions {
    /// Reduce the subspaces E to orbits under Aut(C) before lifting
    /// (exact, multiplicities weighted by orbit length). On by default:
    /// binary length 24 classifies in seconds this way and in tens of
    /// minutes without. The plain path enumerating every E remains the
    /// reference and the two are compared on every length where both run.
    pub aut_orbit_reduction: bool,
    /// Subspace budget for k-neighbor recomputation.
    pub subspace_budget: u128,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { aut_orbit_reduction: true, subspace_budget: 1 << 22 }
    }
}

impl ClassifyOptions {
    /// Enumerate every codimension-1 subspace directly (the oracle path).
    pub fn plain() -> Self {
        ClassifyOptions { aut_orbit_reduction: false, ..Default::default() }
    }
}

/// The functionals (projective, normalized) whose kernels are the
/// codimension-1 subspaces of interest for the family.
fn codim1_functionals(code: &Code, fam: &dyn TypeFamily) -> Result<Vec<PackedVec>> {
    let field = code.field();
    let k = code.dim();
    let basis: Vec<PackedVec> = match fam.monomial_set() {
        MonomialSet::MStar => (0..k).map(|i| PackedVec::zero().with(i, 1)).collect(),
        MonomialSet::MOne => {
            let ones = Code::allones(field, code.len());
            let coords = code.coordinates(ones).ok_or(Error::NotInCode)?;
            crate::code::kernel(field, k, vec![coords])
        }
    };
    let mut out = Vec::new();
    let proj = crate::code::ProjectivePoints::new(field, basis.len());
    for coeffs in proj {
        let mut w = PackedVec::zero();
        for (i, b) in basis.iter().enumerate() {
            let c = coeffs.get(i);
            if c != 0 {
                w = field.add_vec(w, field.scale_vec(c, *b, k), k);
            }
        }
        out.push(normalize_projective(field, w, k));
    }
    Ok(out)
}

fn normalize_projective(field: &Field, w: PackedVec, k: usize) -> PackedVec {
    for i in 0..k {
        let c = w.get(i);
        if c != 0 {
            if c == 1 {
                return w;
            }
            let inv = field.inv(c).expect("nonzero");
            return field.scale_vec(inv, w, k);
        }
    }
    w
}

fn subspace_from_functional(code: &Code, w: PackedVec) -> Code {
    let field = code.field();
    let k = code.dim();
    let coeff_kernel = crate::code::kernel(field, k, vec![w]);
    let rows: Vec<PackedVec> = coeff_kernel.iter().map(|u| code.from_coordinates(*u)).collect();
    Code::from_rows(field, code.len(), rows).expect("subspace of valid code")
}

/// The neighbors of `code` through a fixed codimension-1 subspace `sub`:
/// lifts of the lines of sub^perp/sub other than code/sub that are members
/// of the family.
pub(crate) fn neighbors_through(
    code: &Code,
    sub: &Code,
    fam: &dyn TypeFamily,
) -> Result<Vec<Code>> {
    let field = code.field();
    let len = code.len();
    let kind = fam.form_kind();
    let perp = sub.dual(kind);
    // complement of sub inside its dual: residues of the dual basis
    let mut residues: Vec<PackedVec> =
        perp.rows().iter().map(|&r| sub.reduce(r)).filter(|r| !r.is_zero(len)).collect();
    let _ = crate::code::rref_in_place(field, len, &mut residues);
    debug_assert_eq!(residues.len(), 2, "the quotient is a plane");
    let (u, w) = (residues[0], residues[1]);
    let mut out = Vec::new();
    let mut lines: Vec<PackedVec> = Vec::with_capacity(field.q() as usize + 1);
    lines.push(w);
    for lam in field.elements() {
        lines.push(field.add_vec(u, field.scale_vec(lam, w, len), len));
    }
    for x in lines {
        if code.contains(x) {
            continue; // the line code/sub
        }
        let mut rows = sub.rows().to_vec();
        rows.push(x);
        let cand = Code::from_rows(field, len, rows)?;
        debug_assert_eq!(cand.dim(), code.dim());
        if fam.is_member(&cand)? {
            out.push(cand);
        }
    }
    Ok(out)
}

/// All 1-neighbors of `code` within the family, each exactly once.
pub fn neighbors(code: &Code, fam: &dyn TypeFamily) -> Result<Vec<Code>> {
    if !fam.is_member(code)? {
        return Err(Error::SeedNotInFamily);
    }
    let mut out = Vec::new();
    for w in codim1_functionals(code, fam)? {
        let sub = subspace_from_functional(code, w);
        out.extend(neighbors_through(code, &sub, fam)?);
    }
    Ok(out)
}

/// Gaussian binomial [n choose k]_q (subspace counts for budget checks).
pub fn gaussian_binomial(n: usize, k: usize, q: u8) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Enumerate the k-dimensional subspaces of a d-dimensional coefficient
/// space as RREF matrices (rows are coefficient vectors of length d).
fn for_each_subspace(
    field: &'static Field,
    d: usize,
    k: usize,
    visit: &mut impl FnMut(&[PackedVec]) -> Result<()>,
) -> Result<()> {
    if k == 0 {
        return visit(&[]);
    }
    if k > d {
        return Ok(());
    }
    // choose pivot columns p_0 < ... < p_{k-1}, then fill the free entries
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free positions: (row i, col j) with j > pivots[i], j not a pivot
        let mut free: Vec<(usize, usize)> = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            for j in p + 1..d {
                if !pivots.contains(&j) {
                    free.push((i, j));
                }
            }
        }
        let mut vals = vec![0u8; free.len()];
        loop {
            let mut rows: Vec<PackedVec> =
                pivots.iter().map(|&p| PackedVec::zero().with(p, 1)).collect();
            for (&(i, j), &v) in free.iter().zip(&vals) {
                rows[i].set(j, v);
            }
            visit(&rows)?;
            // odometer over the free values
            let mut idx = 0;
            loop {
                if idx == vals.len() {
                    break;
                }
                vals[idx] += 1;
                if vals[idx] < field.q() {
                    break;
                }
                vals[idx] = 0;
                idx += 1;
            }
            if vals.iter().all(|&v| v == 0) {
                break;
            }
        }
        // next pivot combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if pivots[i] < d - (k - i) {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All k-neighbors of `code` in the family: members D with
/// dim(code ∩ D) = n - k, each exactly once.
pub fn k_neighbors(
    code: &Code,
    fam: &dyn TypeFamily,
    k: usize,
    subspace_budget: u128,
) -> Result<Vec<Code>> {
    let n = code.dim();
    if k == 0 || k > n {
        return Err(Error::NeighborDepthOutOfRange { k, n });
    }
    if !fam.is_member(code)? {
        return Err(Error::SeedNotInFamily);
    }
    if k == 1 {
        return neighbors(code, fam);
    }
    let field = code.field();
    let len = code.len();
    let kind = fam.form_kind();
    let e_count = gaussian_binomial(n, k, field.q());
    let lift_count = gaussian_binomial(2 * k, k, field.q());
    let needed = e_count.saturating_mul(lift_count.max(1));
    if needed > subspace_budget {
        return Err(Error::BudgetExceeded { needed, budget: subspace_budget });
    }

    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    // codim-k subspaces of the code = kernels of k-dim functional spaces
    for_each_subspace(field, n, k, &mut |functionals| {
        let coeff_kernel = crate::code::kernel(field, n, functionals.to_vec());
        let rows: Vec<PackedVec> =
            coeff_kernel.iter().map(|u| code.from_coordinates(*u)).collect();
        let sub = Code::from_rows(field, len, rows)?;
        debug_assert_eq!(sub.dim(), n - k);
        let perp = sub.dual(kind);
        // complement basis of sub in its dual: 2k vectors spanning the quotient
        let mut residues: Vec<PackedVec> =
            perp.rows().iter().map(|&r| sub.reduce(r)).filter(|r| !r.is_zero(len)).collect();
        let _ = crate::code::rref_in_place(field, len, &mut residues);
        debug_assert_eq!(residues.len(), 2 * k);
        // lift every k-dimensional subspace of the quotient and keep the
        // members meeting the code in exactly sub
        for_each_subspace(field, 2 * k, k, &mut |coeffs| {
            let mut rows = sub.rows().to_vec();
            for c in coeffs {
                let mut v = PackedVec::zero();
                for (i, &res) in residues.iter().enumerate() {
                    let ci = c.get(i);
                    if ci != 0 {
                        v = field.add_vec(v, field.scale_vec(ci, res, len), len);
                    }
                }
                rows.push(v);
            }
            let cand = Code::from_rows(field, len, rows)?;
            if cand.dim() != n {
                return Ok(());
            }
            if cand.intersect(code)?.dim() != n - k {
                return Ok(());
            }
            if fam.is_member(&cand)? && seen.insert(cand.clone()) {
                out.push(cand);
            }
            Ok(())
        })?;
        Ok(())
    })?;
    Ok(out)
}

/// One classified neighbor with its multiplicity weight.
struct LiftOutcome {
    fingerprint: Fingerprint,
    canonical: canon::CanonicalCode,
    weight: u64,
}

/// Classify the whole family at the given length by closing the neighbor
/// relation from a seed (constructed when not supplied). Class indices are
/// discovery order; the result is independent of the rayon thread count.
pub fn classify(
    fam: &dyn TypeFamily,
    len: usize,
    seed: Option<Code>,
    opts: &ClassifyOptions,
) -> Result<ClassDatabase> {
    fam.validate_length(len)?;
    let seed = match seed {
        Some(c) => {
            if !fam.is_member(&c)? {
                return Err(Error::SeedNotInFamily);
            }
            c
        }
        None => fam.seed(len)?,
    };

    let seed_canon = canon::canonical_form(&seed);
    let mut classes: Vec<CodeClass> = vec![CodeClass {
        fingerprint: seed_canon.fingerprint.to_hex(),
        aut_order: seed_canon.aut_order,
        generators: seed_canon.canon.to_repr(),
    }];
    let mut reps: Vec<Code> = vec![seed_canon.canon];
    let mut index: HashMap<Fingerprint, usize> = HashMap::new();
    index.insert(seed_canon.fingerprint, 0);

    let mut records: Vec<NeighborRecord> = Vec::new();
    let mut next_unprocessed = 0usize;

    while next_unprocessed < reps.len() {
        let source = next_unprocessed;
        next_unprocessed += 1;
        let rep = reps[source].clone();

        // the subspaces E to process, as (functional, weight) pairs
        let functionals = codim1_functionals(&rep, fam)?;
        let weighted: Vec<(PackedVec, u64)> = if opts.aut_orbit_reduction {
            orbit_reduce(&rep, &functionals)?
        } else {
            functionals.into_iter().map(|w| (w, 1)).collect()
        };

        // lift and canonicalize in parallel, merge in deterministic order
        let per_sub: Vec<Result<Vec<LiftOutcome>>> = weighted
            .par_iter()
            .map(|&(w, weight)| {
                let sub = subspace_from_functional(&rep, w);
                let found = neighbors_through(&rep, &sub, fam)?;
                Ok(found
                    .into_iter()
                    .map(|d| {
                        let canonical = canon::canonical_form(&d);
                        LiftOutcome { fingerprint: canonical.fingerprint, canonical, weight }
                    })
                    .collect())
            })
            .collect();

        let mut counts: std::collections::BTreeMap<usize, u64> = std::collections::BTreeMap::new();
        for sub_result in per_sub {
            for outcome in sub_result? {
                let target = match index.get(&outcome.fingerprint) {
                    Some(&t) => t,
                    None => {
                        let t = classes.len();
                        index.insert(outcome.fingerprint, t);
                        classes.push(CodeClass {
                            fingerprint: outcome.fingerprint.to_hex(),
                            aut_order: outcome.canonical.aut_order,
                            generators: outcome.canonical.canon.to_repr(),
                        });
                        reps.push(outcome.canonical.canon.clone());
                        t
                    }
                };
                *counts.entry(target).or_insert(0) += outcome.weight;
            }
        }
        for (target, count) in counts {
            records.push(NeighborRecord { source, target, count });
        }
    }

    Ok(ClassDatabase {
        schema_version: crate::SCHEMA_VERSION,
        tool_version: crate::TOOL_VERSION.into(),
        family: fam.name(),
        length: len,
        complete: true,
        classes,
        neighbors: records,
    })
}

/// Orbit representatives of the functionals under Aut(rep), with orbit
/// sizes as weights. An automorphism permutes the generators by a basis
/// change A on the coefficient space and acts on a functional w (a column)
/// as w' = A^{-1} w.
fn orbit_reduce(rep: &Code, functionals: &[PackedVec]) -> Result<Vec<(PackedVec, u64)>> {
    let field = rep.field();
    let k = rep.dim();
    let analysis = canon::analyze(rep);
    let index: HashMap<PackedVec, usize> =
        functionals.iter().enumerate().map(|(i, &w)| (w, i)).collect();

    let mut uf = OrbitPartition::identity(functionals.len());
    for g in &analysis.aut_gens {
        let mut a_rows: Vec<PackedVec> = Vec::with_capacity(k);
        for &row in rep.rows() {
            let mut img = PackedVec::zero();
            for i in 0..rep.len() {
                img.set(g.apply(i), row.get(i));
            }
            a_rows.push(rep.coordinates(img).expect("automorphism preserves the code"));
        }
        let inv = invert_small(field, &a_rows, k)?;
        for (i, &w) in functionals.iter().enumerate() {
            let mut img = PackedVec::zero();
            for r in 0..k {
                img.set(r, field.dot(inv[r], w, k));
            }
            let img = normalize_projective(field, img, k);
            let j = *index.get(&img).expect("action permutes the functional set");
            uf.union(i, j);
        }
    }
    let mut weights: std::collections::BTreeMap<usize, u64> = std::collections::BTreeMap::new();
    for i in 0..functionals.len() {
        let root = uf.find(i);
        *weights.entry(root).or_insert(0) += 1;
    }
    Ok(weights.into_iter().map(|(root, w)| (functionals[root], w)).collect())
}

/// Invert a k x k matrix given as packed rows.
fn invert_small(field: &'static Field, rows: &[PackedVec], k: usize) -> Result<Vec<PackedVec>> {
    let mut aug: Vec<PackedVec> = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut v = r;
            v.set(k + i, 1);
            v
        })
        .collect();
    let pivots = crate::code::rref_in_place(field, 2 * k, &mut aug);
    if pivots.len() != k || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::Invalid("matrix is singular".into()));
    }
    Ok(aug
        .iter()
        .map(|v| {
            let mut out = PackedVec::zero();
            for j in 0..k {
                out.set(j, v.get(k + j));
            }
            out
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::lookup;

    #[test]
    fn neighbor_count_matches_alpha0_binary() {
        let fam = lookup("2eI").unwrap();
        for len in [4usize, 8, 12] {
            let seed = fam.seed(len).unwrap();
            let nbrs = neighbors(&seed, fam.as_ref()).unwrap();
            let expect = (1u64 << (len / 2)) - 2;
            assert_eq!(nbrs.len() as u64, expect, "length {len}");
            let set: std::collections::HashSet<_> = nbrs.iter().cloned().collect();
            assert_eq!(set.len(), nbrs.len(), "each neighbor exactly once");
        }
    }

    #[test]
    fn per_subspace_neighbor_counts_by_family() {
        // binary Type I: every admissible subspace carries exactly q = 2
        // neighbors; odd-q Euclidean: exactly 1 (hyperbolic plane);
        // Hermitian: exactly sqrt(q)
        for (name, len, expect) in [("2eI", 8usize, 2usize), ("qE:q=3", 8, 1), ("qH:q=4", 6, 2)] {
            let fam = lookup(name).unwrap();
            let seed = fam.seed(len).unwrap();
            for w in codim1_functionals(&seed, fam.as_ref()).unwrap() {
                let sub = subspace_from_functional(&seed, w);
                let found = neighbors_through(&seed, &sub, fam.as_ref()).unwrap();
                assert_eq!(found.len(), expect, "{name} at length {len}");
            }
        }
    }

    #[test]
    fn length2_has_no_neighbors() {
        let fam = lookup("2eI").unwrap();
        let seed = fam.seed(2).unwrap();
        assert!(neighbors(&seed, fam.as_ref()).unwrap().is_empty());
    }

    #[test]
    fn type2_neighbors_of_e8_stay_in_class() {
        let fam = lookup("2eII").unwrap();
        let e8 = fam.seed(8).unwrap();
        let nbrs = neighbors(&e8, fam.as_ref()).unwrap();
        assert_eq!(nbrs.len(), 7); // alpha_0 = 2^{n-1} - 1 at n = 4
        for d in &nbrs {
            assert!(crate::canon::are_equivalent(d, &e8));
        }
    }

    #[test]
    fn neighbor_relation_is_symmetric() {
        let fam = lookup("2eI").unwrap();
        let seed = fam.seed(8).unwrap();
        for d in neighbors(&seed, fam.as_ref()).unwrap().into_iter().take(20) {
            let back = neighbors(&d, fam.as_ref()).unwrap();
            assert!(back.contains(&seed));
        }
    }

    #[test]
    fn k1_equals_neighbors_and_k2_at_length4_is_empty() {
        let fam = lookup("2eI").unwrap();
        let seed = fam.seed(4).unwrap();
        let n1 = neighbors(&seed, fam.as_ref()).unwrap();
        let k1 = k_neighbors(&seed, fam.as_ref(), 1, 1 << 20).unwrap();
        assert_eq!(
            n1.iter().collect::<std::collections::HashSet<_>>(),
            k1.iter().collect::<std::collections::HashSet<_>>()
        );
        let k2 = k_neighbors(&seed, fam.as_ref(), 2, 1 << 20).unwrap();
        assert!(k2.is_empty(), "no second code meets the seed in dimension 0");
    }

    #[test]
    fn k_neighbors_against_exhaustive_enumeration() {
        let fam = lookup("2eI").unwrap();
        let seed = fam.seed(6).unwrap();
        let all = crate::enumerate::all_in_family(fam.as_ref(), 6).unwrap();
        for k in 1..=3usize {
            let got: std::collections::HashSet<Code> =
                k_neighbors(&seed, fam.as_ref(), k, 1 << 20).unwrap().into_iter().collect();
            let want: std::collections::HashSet<Code> = all
                .iter()
                .filter(|d| d.intersect(&seed).unwrap().dim() == 3 - k)
                .cloned()
                .collect();
            assert_eq!(got, want, "k = {k}");
        }
    }

    #[test]
    fn k_neighbors_budget_guard() {
        let fam = lookup("2eI").unwrap();
        let seed = fam.seed(12).unwrap();
        assert!(matches!(
            k_neighbors(&seed, fam.as_ref(), 3, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn classify_small_binary_lengths() {
        let fam = lookup("2eI").unwrap();
        for (len, expect) in [(2usize, 1usize), (4, 1), (6, 1), (8, 2), (10, 2), (12, 3)] {
            let db = classify(fam.as_ref(), len, None, &ClassifyOptions::default()).unwrap();
            assert_eq!(db.class_count(), expect, "length {len}");
            assert!(db.complete);
            db.validate().unwrap();
        }
    }

    #[test]
    fn classify_rejects_bad_seed() {
        let fam = lookup("2eII").unwrap();
        let t1 = lookup("2eI").unwrap();
        let not_member = t1.seed(8).unwrap(); // weight-2 words, not doubly even
        assert!(matches!(
            classify(fam.as_ref(), 8, Some(not_member), &ClassifyOptions::default()),
            Err(Error::SeedNotInFamily)
        ));
    }

    #[test]
    fn orbit_reduction_agrees_with_plain_path() {
        for (name, lens) in [
            ("2eI", vec![8usize, 12, 14, 16]),
            ("2eII", vec![8, 16]),
            ("qE:q=3", vec![4, 8]),
            ("qH:q=4", vec![2, 4, 6]),
        ] {
            let fam = lookup(name).unwrap();
            for len in lens {
                let plain = classify(fam.as_ref(), len, None, &ClassifyOptions::plain()).unwrap();
                let reduced =
                    classify(fam.as_ref(), len, None, &ClassifyOptions::default()).unwrap();
                assert_eq!(plain.class_count(), reduced.class_count(), "{name} at {len}");
                assert_eq!(plain.neighbors, reduced.neighbors, "{name} at {len}");
                for (a, b) in plain.classes.iter().zip(&reduced.classes) {
                    assert_eq!(a.fingerprint, b.fingerprint);
                    assert_eq!(a.aut_order, b.aut_order);
                }
            }
        }
    }

    #[test]
    fn neighbor_totals_equal_alpha0_per_source() {
        let fam = lookup("2eI").unwrap();
        let db = classify(fam.as_ref(), 12, None, &ClassifyOptions::default()).unwrap();
        let n = db.n();
        let alpha0 = fam.alpha(0, n).unwrap();
        for s in 0..db.class_count() {
            let total: u64 = db.neighbors.iter().filter(|r| r.source == s).map(|r| r.count).sum();
            assert_eq!(
                num_rational::BigRational::from_integer(total.into()),
                alpha0,
                "source {s}"
            );
        }
    }

    #[test]
    fn mass_matches_exhaustive_count_small() {
        for (name, len) in [("2eI", 8usize), ("2eI", 10), ("2eII", 8), ("qE:q=3", 4), ("qH:q=4", 4)]
        {
            let fam = lookup(name).unwrap();
            let db = classify(fam.as_ref(), len, None, &ClassifyOptions::default()).unwrap();
            let all = crate::enumerate::all_in_family(fam.as_ref(), len).unwrap();
            assert_eq!(db.mass(), all.len() as u128, "{name} at {len}");
        }
    }
}

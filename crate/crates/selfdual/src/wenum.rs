//! Genus-m complete weight enumerators and the filtration they induce.
//!
//! The genus-m enumerator of a code sums, over all m-tuples of codewords,
//! the monomial recording the column statistics of the m x N matrix the
//! tuple forms. A vector a in F_q^m is encoded as an integer index with the
//! first tuple layer most significant, so the embedding that appends a zero
//! last coordinate is index multiplication by q; the genus-lowering
//! operator keeps exactly the variables whose index is divisible by q.
//!
//! Tuple enumeration walks a reflected Gray sequence over the combined
//! coefficient space (one digit per generator per layer), so every step
//! updates the column statistics along a single generator support.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{Code, GrayCounter};
use crate::db::ClassDatabase;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::ratmat::{self, rat_u128, rat_u64, Rat};
use crate::vecpack::PackedVec;

/// A degree-N monomial in the genus-m variables, stored sparsely as sorted
/// (vector index, exponent) pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub m: usize,
    pub exps: Vec<(u32, u16)>,
}

impl Monomial {
    pub fn degree(&self) -> u64 {
        self.exps.iter().map(|&(_, e)| e as u64).sum()
    }

    /// Vectors with positive exponent, decoded to length-m symbol arrays.
    pub fn vectors(&self, q: u8) -> Vec<Vec<u8>> {
        self.exps.iter().map(|&(idx, _)| decode_vector(idx, self.m, q)).collect()
    }

    /// Dimension of the span of the vectors with positive exponent.
    pub fn rank(&self, field: &'static Field) -> usize {
        let mut rows: Vec<PackedVec> = self
            .vectors(field.q())
            .iter()
            .map(|v| PackedVec::from_symbols(v))
            .collect();
        crate::code::rref_in_place(field, self.m, &mut rows).len()
    }
}

pub fn encode_vector(symbols: &[u8], q: u8) -> u32 {
    let mut idx = 0u32;
    for &s in symbols {
        idx = idx * q as u32 + s as u32;
    }
    idx
}

pub fn decode_vector(idx: u32, m: usize, q: u8) -> Vec<u8> {
    let mut out = vec![0u8; m];
    let mut v = idx;
    for i in (0..m).rev() {
        out[i] = (v % q as u32) as u8;
        v /= q as u32;
    }
    out
}

/// A sparse genus-m enumerator: monomial -> integer coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseWE {
    pub q: u8,
    pub m: usize,
    pub degree: usize,
    pub terms: std::collections::BTreeMap<Monomial, u64>,
}

impl SparseWE {
    pub fn coefficient_mass(&self) -> u128 {
        self.terms.values().map(|&c| c as u128).sum()
    }
}

/// The column-statistics monomial of an m-tuple of codewords. At genus 0
/// the single variable is identified with the constant 1, giving the empty
/// monomial.
pub fn mon(field: &'static Field, len: usize, tuple: &[PackedVec]) -> Monomial {
    let m = tuple.len();
    if m == 0 {
        return Monomial { m: 0, exps: Vec::new() };
    }
    let q = field.q();
    let mut counts: HashMap<u32, u16> = HashMap::new();
    for pos in 0..len {
        let mut idx = 0u32;
        for layer in tuple {
            idx = idx * q as u32 + layer.get(pos) as u32;
        }
        *counts.entry(idx).or_insert(0) += 1;
    }
    let mut exps: Vec<(u32, u16)> = counts.into_iter().collect();
    exps.sort_unstable();
    Monomial { m, exps }
}

fn tuple_budget_check(code: &Code, m: usize, budget: u64) -> Result<()> {
    let states = (code.field().q() as u128).saturating_pow((code.dim() * m) as u32);
    if states > budget as u128 {
        return Err(Error::BudgetExceeded { needed: states, budget: budget as u128 });
    }
    Ok(())
}

/// Run `record` on the column statistics of every tuple in C^m. The counts
/// array is indexed by encoded vectors and updated incrementally.
fn for_each_tuple_stat(
    code: &Code,
    m: usize,
    mut record: impl FnMut(&[u16]),
) {
    let field = code.field();
    let len = code.len();
    let q = field.q();
    let k = code.dim();
    let qm = (q as usize).pow(m as u32);

    // counts[v] = number of positions whose column vector encodes to v
    let mut counts = vec![0u16; qm];
    counts[0] = len as u16;
    // current column index per position
    let mut vidx = vec![0u32; len];
    // layer words and the generator supports
    let mut words = vec![PackedVec::zero(); m];
    let supports: Vec<Vec<usize>> = code
        .rows()
        .iter()
        .map(|g| (0..len).filter(|&i| g.get(i) != 0).collect())
        .collect();
    let scaled: Vec<Vec<PackedVec>> = (0..q)
        .map(|s| code.rows().iter().map(|&g| field.scale_vec(s, g, len)).collect())
        .collect();
    // layer weight of a digit: the layer it belongs to is digit / k
    let mut gray = GrayCounter::new(q, k * m);
    while let Some(step) = gray.step() {
        if let Some(s) = step {
            let layer = s.digit / k;
            let gen = s.digit % k;
            let delta = field.sub(s.new, s.old);
            words[layer] =
                field.add_vec(words[layer], scaled[delta as usize][gen], len);
            let base = (q as u32).pow((m - 1 - layer) as u32);
            for &pos in &supports[gen] {
                let old = vidx[pos];
                let old_digit = (old / base) % q as u32;
                let new_digit = words[layer].get(pos) as u32;
                let new = old - old_digit * base + new_digit * base;
                counts[old as usize] -= 1;
                counts[new as usize] += 1;
                vidx[pos] = new;
            }
        }
        record(&counts);
    }
}

/// The genus-m complete weight enumerator, summing over all |C|^m tuples.
pub fn cwe(code: &Code, m: usize, budget: u64) -> Result<SparseWE> {
    let q = code.field().q();
    if m == 0 {
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(Monomial { m: 0, exps: Vec::new() }, 1);
        return Ok(SparseWE { q, m: 0, degree: code.len(), terms });
    }
    tuple_budget_check(code, m, budget)?;
    let mut raw: HashMap<Vec<(u32, u16)>, u64> = HashMap::new();
    let mut scratch: Vec<(u32, u16)> = Vec::new();
    for_each_tuple_stat(code, m, |counts| {
        scratch.clear();
        for (v, &c) in counts.iter().enumerate() {
            if c > 0 {
                scratch.push((v as u32, c));
            }
        }
        match raw.get_mut(scratch.as_slice()) {
            Some(entry) => *entry += 1,
            None => {
                raw.insert(scratch.clone(), 1);
            }
        }
    });
    let terms = raw
        .into_iter()
        .map(|(exps, c)| (Monomial { m, exps }, c))
        .collect();
    Ok(SparseWE { q, m, degree: code.len(), terms })
}

/// The genus-lowering operator: keep the monomials all of whose vectors
/// have last coordinate zero, relabelling by dropping it.
pub fn phi(we: &SparseWE) -> SparseWE {
    if we.m == 0 {
        return we.clone();
    }
    let q = we.q as u32;
    let mut terms = std::collections::BTreeMap::new();
    'outer: for (mono, &coeff) in &we.terms {
        let mut exps = Vec::with_capacity(mono.exps.len());
        for &(idx, e) in &mono.exps {
            if idx % q != 0 {
                continue 'outer;
            }
            exps.push((idx / q, e));
        }
        if we.m == 1 {
            // landing at genus 0: the surviving variable is the constant
            exps.clear();
        }
        let reduced = Monomial { m: we.m - 1, exps };
        *terms.entry(reduced).or_insert(0) += coeff;
    }
    SparseWE { q: we.q, m: we.m - 1, degree: we.degree, terms }
}

/// Number of tuples in C^m whose monomial is exactly X.
pub fn a_x(code: &Code, x: &Monomial, budget: u64) -> Result<u64> {
    if x.m == 0 {
        return Ok(1);
    }
    tuple_budget_check(code, x.m, budget)?;
    let mut target = vec![0u16; (code.field().q() as usize).pow(x.m as u32)];
    for &(idx, e) in &x.exps {
        target[idx as usize] = e;
    }
    let mut count = 0u64;
    for_each_tuple_stat(code, x.m, |counts| {
        if counts == target.as_slice() {
            count += 1;
        }
    });
    Ok(count)
}

/// Whether X lies in the monomial set that excludes the all-ones vector
/// from the span: rank(X) = m and dim <1, c> = m + 1 for one (hence every)
/// preimage tuple c.
pub fn in_m_one(x: &Monomial, field: &'static Field, len: usize) -> bool {
    if x.degree() != len as u64 {
        return false;
    }
    if x.rank(field) != x.m {
        return false;
    }
    let tuple = preimage_tuple(x, field, len);
    let mut rows = tuple;
    rows.push(Code::allones(field, len));
    crate::code::rref_in_place(field, len, &mut rows).len() == x.m + 1
}

/// One tuple with mon(tuple) = X, columns laid out in index order. Any two
/// preimages differ by a column permutation, so span statistics agree.
pub fn preimage_tuple(x: &Monomial, field: &'static Field, len: usize) -> Vec<PackedVec> {
    debug_assert_eq!(x.degree(), len as u64);
    let mut tuple = vec![PackedVec::zero(); x.m];
    let mut pos = 0usize;
    for &(idx, e) in &x.exps {
        let symbols = decode_vector(idx, x.m, field.q());
        for _ in 0..e {
            for (layer, &s) in symbols.iter().enumerate() {
                tuple[layer].set(pos, s);
            }
            pos += 1;
        }
    }
    tuple
}

/// dim span { cwe(C, m) : C in the class basis } for m = 0..=m_max, by
/// exact integer rank over the monomial coordinates. The dimension jumps
/// `dims[m] - dims[m-1]` are the filtration layer dimensions.
pub fn filtration_dims(db: &ClassDatabase, m_max: usize, budget: u64) -> Result<Vec<usize>> {
    let codes: Vec<Code> = (0..db.class_count()).map(|i| db.code(i)).collect::<Result<_>>()?;
    let mut dims = Vec::with_capacity(m_max + 1);
    for m in 0..=m_max {
        let enums: Vec<SparseWE> = codes
            .par_iter()
            .map(|c| cwe(c, m, budget))
            .collect::<Result<_>>()?;
        // union of monomials, deterministic order
        let mut monos: Vec<&Monomial> = enums.iter().flat_map(|e| e.terms.keys()).collect();
        monos.sort();
        monos.dedup();
        let matrix: Vec<Vec<Rat>> = enums
            .iter()
            .map(|e| {
                monos
                    .iter()
                    .map(|mono| rat_u64(e.terms.get(*mono).copied().unwrap_or(0)))
                    .collect()
            })
            .collect();
        dims.push(ratmat::rank(matrix));
    }
    Ok(dims)
}

/// The vector b_X in the class basis: coordinates a_X(C)/|Aut(C)|. Pairs
/// with any v through the weighted product to give the a_X statistic of v.
pub fn b_x(db: &ClassDatabase, x: &Monomial, budget: u64) -> Result<Vec<Rat>> {
    let mut out = Vec::with_capacity(db.class_count());
    for (i, class) in db.classes.iter().enumerate() {
        let code = db.code(i)?;
        let count = a_x(&code, x, budget)?;
        out.push(rat_u64(count) / rat_u128(class.aut_order));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn gf(q: u8) -> &'static Field {
        Field::get(q).unwrap()
    }

    fn e8() -> Code {
        Code::from_symbol_rows(
            gf(2),
            8,
            &[
                vec![1, 0, 0, 0, 0, 1, 1, 1],
                vec![0, 1, 0, 0, 1, 0, 1, 1],
                vec![0, 0, 1, 0, 1, 1, 0, 1],
                vec![0, 0, 0, 1, 1, 1, 1, 0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn mon_examples() {
        let f2 = gf(2);
        // m = 1: counts coordinates by value
        let c = PackedVec::from_symbols(&[1, 1, 0, 0]);
        let m1 = mon(f2, 4, &[c]);
        assert_eq!(m1.exps, vec![(0, 2), (1, 2)]);

        // m = 2: column reading
        let c1 = PackedVec::from_symbols(&[1, 1, 0, 0]);
        let c2 = PackedVec::from_symbols(&[1, 0, 1, 0]);
        let m2 = mon(f2, 4, &[c1, c2]);
        // columns: (1,1), (1,0), (0,1), (0,0) -> indices 3, 2, 1, 0
        assert_eq!(m2.exps, vec![(0, 1), (1, 1), (2, 1), (3, 1)]);

        // m = 0: the constant monomial
        let m0 = mon(f2, 4, &[]);
        assert!(m0.exps.is_empty());
    }

    #[test]
    fn cwe_genus1_examples() {
        let f2 = gf(2);
        let i2 = Code::from_symbol_rows(f2, 2, &[vec![1, 1]]).unwrap();
        let we = cwe(&i2, 1, 1 << 20).unwrap();
        // x0^2 + x1^2
        assert_eq!(we.terms.len(), 2);
        assert_eq!(we.terms[&Monomial { m: 1, exps: vec![(0, 2)] }], 1);
        assert_eq!(we.terms[&Monomial { m: 1, exps: vec![(1, 2)] }], 1);

        let we = cwe(&e8(), 1, 1 << 20).unwrap();
        assert_eq!(we.terms[&Monomial { m: 1, exps: vec![(0, 8)] }], 1);
        assert_eq!(we.terms[&Monomial { m: 1, exps: vec![(0, 4), (1, 4)] }], 14);
        assert_eq!(we.terms[&Monomial { m: 1, exps: vec![(1, 8)] }], 1);
    }

    #[test]
    fn cwe_mass_is_tuple_count() {
        for m in 0..=2usize {
            let we = cwe(&e8(), m, 1 << 26).unwrap();
            assert_eq!(we.coefficient_mass(), 16u128.pow(m as u32));
        }
        let f3 = gf(3);
        let tetra =
            Code::from_symbol_rows(f3, 4, &[vec![1, 0, 1, 1], vec![0, 1, 1, 2]]).unwrap();
        let we = cwe(&tetra, 2, 1 << 20).unwrap();
        assert_eq!(we.coefficient_mass(), 81);
    }

    #[test]
    fn cwe_is_equivalence_invariant() {
        let code = e8();
        let mut rng = crate::rng::SplitMix64::new(11);
        for m in 1..=2usize {
            let base = cwe(&code, m, 1 << 20).unwrap();
            for _ in 0..5 {
                let p = rng.random_perm(8);
                let permuted = code.permuted(&p);
                assert_eq!(cwe(&permuted, m, 1 << 20).unwrap(), base);
            }
        }
    }

    #[test]
    fn cwe_against_direct_definition() {
        // independent oracle: enumerate tuples directly via nested codeword
        // loops and multiset-count the monomials
        let f2 = gf(2);
        let code = Code::from_symbol_rows(f2, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]).unwrap();
        let words: Vec<PackedVec> = code.codewords().collect();
        for m in 1..=2usize {
            let mut expect: std::collections::BTreeMap<Monomial, u64> =
                std::collections::BTreeMap::new();
            let mut stack = vec![0usize; m];
            loop {
                let tuple: Vec<PackedVec> = stack.iter().map(|&i| words[i]).collect();
                *expect.entry(mon(f2, 4, &tuple)).or_insert(0) += 1;
                let mut d = 0;
                loop {
                    if d == m {
                        break;
                    }
                    stack[d] += 1;
                    if stack[d] < words.len() {
                        break;
                    }
                    stack[d] = 0;
                    d += 1;
                }
                if stack.iter().all(|&i| i == 0) {
                    break;
                }
            }
            let got = cwe(&code, m, 1 << 20).unwrap();
            assert_eq!(got.terms, expect, "genus {m}");
        }
    }

    #[test]
    fn phi_compatibility() {
        for m in 1..=3usize {
            let high = cwe(&e8(), m, 1 << 26).unwrap();
            let low = cwe(&e8(), m - 1, 1 << 26).unwrap();
            assert_eq!(phi(&high), low, "genus {m}");
        }
    }

    #[test]
    fn phi_kills_terms_with_nonzero_last_coordinate() {
        let f2 = gf(2);
        let c1 = PackedVec::from_symbols(&[1, 1, 0, 0]);
        let c2 = PackedVec::from_symbols(&[1, 0, 1, 0]);
        let we = SparseWE {
            q: 2,
            m: 2,
            degree: 4,
            terms: [(mon(f2, 4, &[c1, c2]), 1)].into_iter().collect(),
        };
        // the monomial contains x_{01} and x_{11}: dropped entirely
        assert!(phi(&we).terms.is_empty());
    }

    #[test]
    fn a_x_and_rank() {
        let code = e8();
        let f2 = gf(2);
        // zero tuple monomial: only the zero tuple attains it
        let zero_mono = Monomial { m: 1, exps: vec![(0, 8)] };
        assert_eq!(a_x(&code, &zero_mono, 1 << 20).unwrap(), 1);
        assert_eq!(zero_mono.rank(f2), 0);
        let w4 = Monomial { m: 1, exps: vec![(0, 4), (1, 4)] };
        assert_eq!(a_x(&code, &w4, 1 << 20).unwrap(), 14);
        assert_eq!(w4.rank(f2), 1);
    }

    #[test]
    fn a_x_is_basis_independent() {
        // for X = mon(c) of full rank and another basis b of <c>,
        // a_{mon(b)} = a_X
        let code = e8();
        let f2 = gf(2);
        let words: Vec<PackedVec> = code.codewords().collect();
        let c1 = words[3];
        let c2 = words[5];
        let x = mon(f2, 8, &[c1, c2]);
        if x.rank(f2) == 2 {
            let y = mon(f2, 8, &[c2, f2.add_vec(c1, c2, 8)]);
            assert_eq!(
                a_x(&code, &x, 1 << 20).unwrap(),
                a_x(&code, &y, 1 << 20).unwrap()
            );
        } else {
            panic!("chosen words are dependent; pick others");
        }
    }

    #[test]
    fn in_m_one_detects_allones_in_span() {
        let f2 = gf(2);
        let code = e8();
        let ones = Code::allones(f2, 8);
        let with_ones = mon(f2, 8, &[ones]);
        assert!(!in_m_one(&with_ones, f2, 8));
        let some_w4: PackedVec = code
            .codewords()
            .find(|w| w.weight(8) == 4)
            .unwrap();
        let without = mon(f2, 8, &[some_w4]);
        assert!(in_m_one(&without, f2, 8));
    }

    #[test]
    fn budget_guard() {
        let code = e8();
        assert!(matches!(cwe(&code, 2, 16), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn b_x_pairs_to_a_x_under_the_weighted_product() {
        use crate::hecke::{inner_product, sigma};
        use crate::neighbor::{classify, ClassifyOptions};
        use crate::ratmat::{rat_int, rat_u64};

        let fam = crate::types::lookup("2eI").unwrap();
        let db = classify(fam.as_ref(), 12, None, &ClassifyOptions::default()).unwrap();

        // X with only the zero codeword: b_X is the mass vector
        let zero_mono = Monomial { m: 1, exps: vec![(0, 12)] };
        let bx = b_x(&db, &zero_mono, 1 << 20).unwrap();
        assert_eq!(bx, sigma(&db));

        // (b_X, v) = sum v_C a_X(C) for assorted rational v
        let w4 = Monomial { m: 1, exps: vec![(0, 8), (1, 4)] };
        let bx = b_x(&db, &w4, 1 << 20).unwrap();
        let a: Vec<u64> = (0..db.class_count())
            .map(|i| a_x(&db.code(i).unwrap(), &w4, 1 << 20).unwrap())
            .collect();
        let mut rng = crate::rng::SplitMix64::new(99);
        for _ in 0..5 {
            let v: Vec<_> = (0..db.class_count())
                .map(|_| rat_int(rng.below(19) as i64 - 9))
                .collect();
            let lhs = inner_product(&bx, &v, &db).unwrap();
            let rhs = v
                .iter()
                .zip(&a)
                .map(|(vc, &ac)| vc * rat_u64(ac))
                .fold(rat_int(0), |acc, t| acc + t);
            assert_eq!(lhs, rhs);
        }
        // (b_X, [C]) = a_X(C)
        for (i, &ac) in a.iter().enumerate() {
            let mut e = vec![rat_int(0); db.class_count()];
            e[i] = rat_int(1);
            assert_eq!(inner_product(&bx, &e, &db).unwrap(), rat_u64(ac));
        }
    }
}

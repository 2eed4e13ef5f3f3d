//! Linear codes over GF(q) as row spaces.
//!
//! A [`Code`] is stored as its reduced row echelon form, which is the unique
//! canonical basis of the row space: two codes are equal as subspaces iff
//! their stored generator matrices are identical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, FormKind};
use crate::vecpack::{PackedVec, MAX_LEN};

/// A linear code C <= GF(q)^N, generators kept in RREF.
#[derive(Clone)]
pub struct Code {
    field: &'static Field,
    len: usize,
    rows: Vec<PackedVec>,
    pivots: Vec<usize>,
}

impl PartialEq for Code {
    fn eq(&self, other: &Self) -> bool {
        self.field.q() == other.field.q() && self.len == other.len && self.rows == other.rows
    }
}
impl Eq for Code {}

impl std::hash::Hash for Code {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.q().hash(state);
        self.len.hash(state);
        self.rows.hash(state);
    }
}

impl std::fmt::Debug for Code {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Code[{},{}] over GF({})", self.len, self.dim(), self.field.q())?;
        for r in &self.rows {
            writeln!(
                f,
                "  {}",
                r.to_symbols(self.len).iter().map(|s| s.to_string()).collect::<String>()
            )?;
        }
        Ok(())
    }
}

/// In-place row reduction; returns pivot columns. Zero rows are removed.
pub(crate) fn rref_in_place(field: &Field, len: usize, rows: &mut Vec<PackedVec>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..len {
        let Some(src) = (r..rows.len()).find(|&i| rows[i].get(col) != 0) else {
            continue;
        };
        rows.swap(r, src);
        let inv = field.inv(rows[r].get(col)).expect("pivot nonzero");
        if inv != 1 {
            rows[r] = field.scale_vec(inv, rows[r], len);
        }
        for i in 0..rows.len() {
            if i != r {
                let c = rows[i].get(col);
                if c != 0 {
                    let sub = field.scale_vec(c, rows[r], len);
                    rows[i] = field.sub_vec(rows[i], sub, len);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

impl Code {
    /// Row-reduce arbitrary generators into a code. Duplicate and zero rows
    /// disappear in the reduction.
    pub fn from_rows(field: &'static Field, len: usize, rows: Vec<PackedVec>) -> Result<Code> {
        if len > MAX_LEN {
            return Err(Error::LengthTooLarge(len, MAX_LEN));
        }
        let mut rows = rows;
        let pivots = rref_in_place(field, len, &mut rows);
        Ok(Code { field, len, rows, pivots })
    }

    /// Build from symbol arrays, validating shape and symbol range.
    pub fn from_symbol_rows(field: &'static Field, len: usize, rows: &[Vec<u8>]) -> Result<Code> {
        if len > MAX_LEN {
            return Err(Error::LengthTooLarge(len, MAX_LEN));
        }
        let mut packed = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(Error::RaggedMatrix { row: i, got: row.len(), expected: len });
            }
            for &s in row {
                if s >= field.q() {
                    return Err(Error::SymbolOutOfRange { symbol: s, q: field.q() });
                }
            }
            packed.push(PackedVec::from_symbols(row));
        }
        Code::from_rows(field, len, packed)
    }

    pub fn zero(field: &'static Field, len: usize) -> Code {
        Code { field, len, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full_space(field: &'static Field, len: usize) -> Code {
        let rows = (0..len).map(|i| PackedVec::zero().with(i, 1)).collect();
        Code { field, len, rows, pivots: (0..len).collect() }
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[PackedVec] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Code) -> Result<()> {
        if self.field.q() != other.field.q() || self.len != other.len {
            return Err(Error::AmbientMismatch(
                format!("GF({})^{}", self.field.q(), self.len),
                format!("GF({})^{}", other.field.q(), other.len),
            ));
        }
        Ok(())
    }

    /// Reduce `v` by the pivot rows; returns the residue (zero iff `v` is in
    /// the code).
    pub fn reduce(&self, v: PackedVec) -> PackedVec {
        let mut v = v;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v.get(p);
            if c != 0 {
                v = self.field.sub_vec(v, self.field.scale_vec(c, *row, self.len), self.len);
            }
        }
        v
    }

    pub fn contains(&self, v: PackedVec) -> bool {
        self.reduce(v).is_zero(self.len)
    }

    /// Coefficients of `v` in the RREF basis, if `v` is in the code.
    pub fn coordinates(&self, v: PackedVec) -> Option<PackedVec> {
        if !self.contains(v) {
            return None;
        }
        let mut coords = PackedVec::zero();
        for (i, &p) in self.pivots.iter().enumerate() {
            coords.set(i, v.get(p));
        }
        Some(coords)
    }

    /// Linear combination of the basis rows with the given coefficients.
    pub fn from_coordinates(&self, coords: PackedVec) -> PackedVec {
        let mut v = PackedVec::zero();
        for (i, row) in self.rows.iter().enumerate() {
            let c = coords.get(i);
            if c != 0 {
                v = self.field.add_vec(v, self.field.scale_vec(c, *row, self.len), self.len);
            }
        }
        v
    }

    /// All q^k codewords. Enumeration follows a reflected Gray sequence over
    /// the coefficient space so each step adds a single scaled generator.
    pub fn codewords(&self) -> CodewordIter<'_> {
        CodewordIter::new(self)
    }

    /// The dual code w.r.t. the chosen form, computed as the kernel of the
    /// (conjugated) generator matrix.
    pub fn dual(&self, kind: FormKind) -> Code {
        let mat: Vec<PackedVec> = match kind {
            FormKind::Euclidean => self.rows.clone(),
            FormKind::Hermitian => {
                self.rows.iter().map(|r| self.field.conj_vec(*r, self.len)).collect()
            }
        };
        let ker = kernel(self.field, self.len, mat);
        Code::from_rows(self.field, self.len, ker).expect("kernel rows are in range")
    }

    pub fn intersect(&self, other: &Code) -> Result<Code> {
        self.check_ambient(other)?;
        // C ∩ D = (C^perp + D^perp)^perp, with the Euclidean form as the
        // computational pairing.
        let a = self.dual(FormKind::Euclidean);
        let b = other.dual(FormKind::Euclidean);
        Ok(a.sum(&b)?.dual(FormKind::Euclidean))
    }

    pub fn sum(&self, other: &Code) -> Result<Code> {
        self.check_ambient(other)?;
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Code::from_rows(self.field, self.len, rows)
    }

    pub fn is_self_dual(&self, kind: FormKind) -> bool {
        2 * self.dim() == self.len && self.dual(kind) == *self
    }

    /// Whether the code is self-orthogonal (C <= C^perp) w.r.t. the form.
    pub fn is_self_orthogonal(&self, kind: FormKind) -> bool {
        self.rows.iter().all(|&a| {
            self.rows.iter().all(|&b| self.field.form(a, b, self.len, kind) == 0)
        })
    }

    /// Binary doubly-even test: generator weights divisible by 4 plus even
    /// pairwise overlaps certify every codeword weight is 0 mod 4.
    pub fn is_doubly_even(&self) -> Result<bool> {
        if self.field.q() != 2 {
            return Err(Error::DoublyEvenNonBinary(self.field.q()));
        }
        for (i, &a) in self.rows.iter().enumerate() {
            if a.weight(self.len) % 4 != 0 {
                return Ok(false);
            }
            for &b in &self.rows[i + 1..] {
                let overlap = PackedVec(a.0 & b.0);
                if overlap.weight(self.len) % 2 != 0 {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn allones(_field: &'static Field, len: usize) -> PackedVec {
        let mut v = PackedVec::zero();
        for i in 0..len {
            v.set(i, 1);
        }
        v
    }

    pub fn contains_allones(&self) -> bool {
        self.contains(Code::allones(self.field, self.len))
    }

    /// Every (k-1)-dimensional subspace, optionally restricted to those
    /// containing `must_contain`. Subspaces are kernels of nonzero
    /// functionals on the code, one per projective point of the dual, so
    /// each is emitted exactly once.
    pub fn subspaces_codim1(&self, must_contain: Option<PackedVec>) -> Result<CodimOneIter<'_>> {
        let k = self.dim();
        let functional_basis: Vec<PackedVec> = match must_contain {
            None => (0..k).map(|i| PackedVec::zero().with(i, 1)).collect(),
            Some(v) => {
                let coords = self.coordinates(v).ok_or(Error::NotInCode)?;
                if coords.is_zero(k) {
                    (0..k).map(|i| PackedVec::zero().with(i, 1)).collect()
                } else {
                    // functionals w with w . coords = 0
                    kernel(self.field, k, vec![coords])
                }
            }
        };
        Ok(CodimOneIter::with_dim(self, functional_basis))
    }

    /// Apply a coordinate permutation: position i of the input moves to
    /// position `perm[i]` of the output.
    pub fn permuted(&self, perm: &[usize]) -> Code {
        debug_assert_eq!(perm.len(), self.len);
        let rows: Vec<PackedVec> = self
            .rows
            .iter()
            .map(|r| {
                let mut out = PackedVec::zero();
                for i in 0..self.len {
                    out.set(perm[i], r.get(i));
                }
                out
            })
            .collect();
        Code::from_rows(self.field, self.len, rows).expect("length unchanged")
    }

    /// Counts of codewords by Hamming weight, indices 0..=N.
    pub fn weight_distribution(&self) -> Vec<u64> {
        let mut dist = vec![0u64; self.len + 1];
        for w in self.codewords() {
            dist[w.weight(self.len) as usize] += 1;
        }
        dist
    }

    pub fn to_repr(&self) -> CodeRepr {
        CodeRepr {
            field: FieldSpec::of(self.field),
            n: self.len,
            k: self.dim(),
            rows: self.rows.iter().map(|r| r.to_symbols(self.len)).collect(),
        }
    }

    pub fn from_repr(repr: &CodeRepr) -> Result<Code> {
        let field = repr.field.resolve()?;
        let code = Code::from_symbol_rows(field, repr.n, &repr.rows)?;
        if code.dim() != repr.k {
            return Err(Error::Invalid(format!(
                "stored generators have rank {} but declare k = {}",
                code.dim(),
                repr.k
            )));
        }
        Ok(code)
    }
}

/// Serialized form of a code: the RREF rows as symbol arrays, which makes
/// the encoding canonical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRepr {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<u8>>,
}

/// Kernel (right null space) of the row span of `rows` in GF(q)^len,
/// returned as RREF rows.
pub(crate) fn kernel(field: &Field, len: usize, mut rows: Vec<PackedVec>) -> Vec<PackedVec> {
    let pivots = rref_in_place(field, len, &mut rows);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; len];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::with_capacity(len - pivots.len());
    for free in 0..len {
        if is_pivot[free] {
            continue;
        }
        let mut v = PackedVec::zero().with(free, 1);
        for (row, &p) in rows.iter().zip(&pivots) {
            let c = row.get(free);
            if c != 0 {
                v.set(p, field.neg(c));
            }
        }
        basis.push(v);
    }
    basis
}

/// Projective points of GF(q)^d: one representative per line, first nonzero
/// coordinate normalized to 1. Emits (q^d - 1)/(q - 1) vectors.
pub(crate) struct ProjectivePoints {
    field: &'static Field,
    dim: usize,
    lead: usize,
    tail: Vec<u8>,
    done: bool,
}

impl ProjectivePoints {
    pub(crate) fn new(field: &'static Field, dim: usize) -> Self {
        ProjectivePoints { field, dim, lead: 0, tail: Vec::new(), done: dim == 0 }
    }
}

impl Iterator for ProjectivePoints {
    type Item = PackedVec;

    fn next(&mut self) -> Option<PackedVec> {
        if self.done {
            return None;
        }
        if self.tail.len() != self.dim - self.lead - 1 {
            self.tail = vec![0; self.dim - self.lead - 1];
        }
        let mut v = PackedVec::zero().with(self.lead, 1);
        for (i, &t) in self.tail.iter().enumerate() {
            v.set(self.lead + 1 + i, t);
        }
        // advance the tail odometer
        let q = self.field.q();
        let mut i = 0;
        loop {
            if i == self.tail.len() {
                self.lead += 1;
                if self.lead >= self.dim {
                    self.done = true;
                } else {
                    self.tail = vec![0; self.dim - self.lead - 1];
                }
                break;
            }
            self.tail[i] += 1;
            if self.tail[i] < q {
                break;
            }
            self.tail[i] = 0;
            i += 1;
        }
        Some(v)
    }
}

/// Iterator over the codimension-1 subspaces of a code.
pub struct CodimOneIter<'a> {
    code: &'a Code,
    /// Basis of the admissible functional space (all of the dual, or the
    /// hyperplane annihilating the constraint vector).
    basis: Vec<PackedVec>,
    proj: ProjectivePoints,
}

impl Iterator for CodimOneIter<'_> {
    type Item = Code;

    fn next(&mut self) -> Option<Code> {
        let field = self.code.field;
        let k = self.code.dim();
        let coeffs = self.proj.next()?;
        // functional w on the coefficient space
        let mut w = PackedVec::zero();
        for (i, b) in self.basis.iter().enumerate() {
            let c = coeffs.get(i);
            if c != 0 {
                w = field.add_vec(w, field.scale_vec(c, *b, k), k);
            }
        }
        // kernel of w inside the coefficient space, mapped to codewords
        let coeff_kernel = kernel(field, k, vec![w]);
        let rows: Vec<PackedVec> =
            coeff_kernel.iter().map(|u| self.code.from_coordinates(*u)).collect();
        Some(Code::from_rows(field, self.code.len, rows).expect("subspace of valid code"))
    }
}

impl<'a> CodimOneIter<'a> {
    pub(crate) fn with_dim(code: &'a Code, basis: Vec<PackedVec>) -> Self {
        let d = basis.len();
        CodimOneIter { code, basis, proj: ProjectivePoints::new(code.field(), d) }
    }
}

/// Reflected q-ary Gray counter: every step changes one digit by one.
pub(crate) struct GrayCounter {
    q: u8,
    digits: Vec<u8>,
    dirs: Vec<i8>,
    started: bool,
}

pub(crate) struct GrayStep {
    pub digit: usize,
    pub old: u8,
    pub new: u8,
}

impl GrayCounter {
    pub(crate) fn new(q: u8, ndigits: usize) -> Self {
        GrayCounter { q, digits: vec![0; ndigits], dirs: vec![1; ndigits], started: false }
    }

    /// Advance; `None` once all q^n states have been visited. The first call
    /// yields no step (initial all-zero state).
    pub(crate) fn step(&mut self) -> Option<Option<GrayStep>> {
        if !self.started {
            self.started = true;
            return Some(None);
        }
        for i in 0..self.digits.len() {
            let d = self.digits[i] as i16 + self.dirs[i] as i16;
            if d >= 0 && d < self.q as i16 {
                let old = self.digits[i];
                self.digits[i] = d as u8;
                return Some(Some(GrayStep { digit: i, old, new: d as u8 }));
            }
            self.dirs[i] = -self.dirs[i];
        }
        None
    }
}

/// Iterator over all codewords (including zero).
pub struct CodewordIter<'a> {
    code: &'a Code,
    gray: GrayCounter,
    /// scaled[s][j] = s * g_j, precomputed for O(1) steps
    scaled: Vec<Vec<PackedVec>>,
    current: PackedVec,
}

impl<'a> CodewordIter<'a> {
    fn new(code: &'a Code) -> Self {
        let field = code.field;
        let scaled = (0..field.q())
            .map(|s| code.rows.iter().map(|&g| field.scale_vec(s, g, code.len)).collect())
            .collect();
        CodewordIter {
            code,
            gray: GrayCounter::new(field.q(), code.dim()),
            scaled,
            current: PackedVec::zero(),
        }
    }
}

impl Iterator for CodewordIter<'_> {
    type Item = PackedVec;

    fn next(&mut self) -> Option<PackedVec> {
        let field = self.code.field;
        match self.gray.step()? {
            None => Some(self.current),
            Some(step) => {
                let delta = field.sub(step.new, step.old);
                self.current = field.add_vec(
                    self.current,
                    self.scaled[delta as usize][step.digit],
                    self.code.len,
                );
                Some(self.current)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u8) -> &'static Field {
        Field::get(q).unwrap()
    }

    fn code2(rows: &[&[u8]], len: usize) -> Code {
        Code::from_symbol_rows(gf(2), len, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn rref_examples() {
        // duplicate rows collapse
        let c = code2(&[&[1, 1], &[1, 1]], 2);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.rows()[0].to_symbols(2), vec![1, 1]);

        // hand-checked reduction
        let c = code2(&[&[0, 1, 1, 0], &[1, 1, 0, 0]], 4);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.rows()[0].to_symbols(4), vec![1, 0, 1, 0]);
        assert_eq!(c.rows()[1].to_symbols(4), vec![0, 1, 1, 0]);

        // empty
        let c = Code::from_rows(gf(2), 4, vec![]).unwrap();
        assert_eq!(c.dim(), 0);
    }

    #[test]
    fn ragged_matrix_rejected() {
        let rows = vec![vec![1, 0, 1], vec![1, 1]];
        assert!(matches!(
            Code::from_symbol_rows(gf(2), 3, &rows),
            Err(Error::RaggedMatrix { row: 1, .. })
        ));
    }

    #[test]
    fn dual_examples() {
        let zero = Code::zero(gf(2), 3);
        assert_eq!(zero.dual(FormKind::Euclidean), Code::full_space(gf(2), 3));

        let i2 = code2(&[&[1, 1]], 2);
        assert_eq!(i2.dual(FormKind::Euclidean), i2);
        assert!(i2.is_self_dual(FormKind::Euclidean));

        // GF(4) Hermitian: <(1,1)> is self-dual
        let c = Code::from_symbol_rows(gf(4), 2, &[vec![1, 1]]).unwrap();
        assert_eq!(c.dual(FormKind::Hermitian), c);
        assert!(c.is_self_dual(FormKind::Hermitian));
    }

    #[test]
    fn dual_is_involution_and_reverses_inclusion() {
        let c = code2(&[&[1, 1, 0, 0, 1, 1], &[0, 0, 1, 1, 1, 1]], 6);
        let d = c.dual(FormKind::Euclidean);
        assert_eq!(d.dual(FormKind::Euclidean), c);
        assert_eq!(d.dim(), 6 - c.dim());
        // C ⊆ C + extra  =>  dual(C + extra) ⊆ dual(C)
        let bigger = c
            .sum(&code2(&[&[1, 0, 0, 0, 0, 0]], 6))
            .unwrap();
        let dual_big = bigger.dual(FormKind::Euclidean);
        for &r in dual_big.rows() {
            assert!(d.contains(r));
        }
    }

    #[test]
    fn intersect_and_sum() {
        let c = code2(&[&[1, 1, 0, 0], &[0, 0, 1, 1]], 4);
        assert_eq!(c.intersect(&c).unwrap(), c);

        let d = code2(&[&[1, 0, 1, 0], &[0, 1, 0, 1]], 4);
        let meet = c.intersect(&d).unwrap();
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(PackedVec::from_symbols(&[1, 1, 1, 1])));

        // complementary lines
        let a = code2(&[&[1, 0]], 2);
        let b = code2(&[&[0, 1]], 2);
        assert_eq!(a.sum(&b).unwrap(), Code::full_space(gf(2), 2));

        // dim(C∩D) + dim(C+D) = dim C + dim D
        assert_eq!(
            meet.dim() + c.sum(&d).unwrap().dim(),
            c.dim() + d.dim()
        );
    }

    #[test]
    fn codim1_counts() {
        let c = code2(&[&[1, 0, 0, 1, 1, 0], &[0, 1, 0, 1, 0, 1], &[0, 0, 1, 0, 1, 1]], 6);
        assert_eq!(c.dim(), 3);
        let subs: Vec<Code> = c.subspaces_codim1(None).unwrap().collect();
        assert_eq!(subs.len(), 7);
        for s in &subs {
            assert_eq!(s.dim(), 2);
            for &r in s.rows() {
                assert!(c.contains(r));
            }
        }
        // pairwise distinct
        for i in 0..subs.len() {
            for j in i + 1..subs.len() {
                assert_ne!(subs[i], subs[j]);
            }
        }

        // constrained by a codeword
        let v = c.rows()[0];
        let constrained: Vec<Code> = c.subspaces_codim1(Some(v)).unwrap().collect();
        assert_eq!(constrained.len(), 3);
        for s in &constrained {
            assert!(s.contains(v));
        }

        // GF(3), k = 2: (9-1)/2 = 4 subspaces
        let t = Code::from_symbol_rows(gf(3), 3, &[vec![1, 0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(t.subspaces_codim1(None).unwrap().count(), 4);
    }

    #[test]
    fn codim1_constraint_not_in_code() {
        let c = code2(&[&[1, 1, 0, 0]], 4);
        let v = PackedVec::from_symbols(&[1, 0, 0, 0]);
        assert!(matches!(c.subspaces_codim1(Some(v)), Err(Error::NotInCode)));
    }

    #[test]
    fn predicates() {
        // extended Hamming [8,4]
        let e8 = extended_hamming8();
        assert!(e8.is_self_dual(FormKind::Euclidean));
        assert!(e8.is_doubly_even().unwrap());
        assert!(e8.contains_allones());

        let i2 = code2(&[&[1, 1]], 2);
        assert!(i2.is_self_dual(FormKind::Euclidean));
        assert!(!i2.is_doubly_even().unwrap());

        let i2x4 = code2(
            &[&[1, 1, 0, 0, 0, 0, 0, 0], &[0, 0, 1, 1, 0, 0, 0, 0], &[0, 0, 0, 0, 1, 1, 0, 0], &[0, 0, 0, 0, 0, 0, 1, 1]],
            8,
        );
        assert!(i2x4.is_self_dual(FormKind::Euclidean));
        assert!(!i2x4.is_doubly_even().unwrap());

        let t = Code::from_symbol_rows(gf(3), 2, &[vec![1, 1]]).unwrap();
        assert!(matches!(t.is_doubly_even(), Err(Error::DoublyEvenNonBinary(3))));
    }

    #[test]
    fn codeword_iteration_and_weights() {
        let e8 = extended_hamming8();
        let words: Vec<PackedVec> = e8.codewords().collect();
        assert_eq!(words.len(), 16);
        let mut uniq = words.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 16);
        let dist = e8.weight_distribution();
        assert_eq!(dist[0], 1);
        assert_eq!(dist[4], 14);
        assert_eq!(dist[8], 1);
        assert_eq!(dist.iter().sum::<u64>(), 16);
    }

    #[test]
    fn gray_counter_visits_all() {
        for q in [2u8, 3, 5] {
            let mut g = GrayCounter::new(q, 3);
            let mut digits = vec![0u8; 3];
            let mut seen = std::collections::HashSet::new();
            while let Some(step) = g.step() {
                if let Some(s) = step {
                    assert_eq!(digits[s.digit], s.old);
                    digits[s.digit] = s.new;
                }
                assert!(seen.insert(digits.clone()));
            }
            assert_eq!(seen.len(), (q as usize).pow(3));
        }
    }

    #[test]
    fn binary_self_dual_codes_have_even_weights_and_allones() {
        // b(1, c) = b(c, c) = 0 in characteristic 2, so every codeword has
        // even weight and the all-ones vector lies in the code
        for rows in [
            vec![vec![1u8, 1, 0, 0], vec![0, 0, 1, 1]],
            vec![
                vec![1, 0, 0, 0, 0, 1, 1, 1],
                vec![0, 1, 0, 0, 1, 0, 1, 1],
                vec![0, 0, 1, 0, 1, 1, 0, 1],
                vec![0, 0, 0, 1, 1, 1, 1, 0],
            ],
        ] {
            let len = rows[0].len();
            let c = Code::from_symbol_rows(gf(2), len, &rows).unwrap();
            assert!(c.is_self_dual(FormKind::Euclidean));
            assert!(c.contains_allones());
            for w in c.codewords() {
                assert_eq!(w.weight(len) % 2, 0);
            }
        }
    }

    #[test]
    fn repr_roundtrip() {
        let e8 = extended_hamming8();
        let repr = e8.to_repr();
        let back = Code::from_repr(&repr).unwrap();
        assert_eq!(back, e8);
    }

    pub(crate) fn extended_hamming8() -> Code {
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
}

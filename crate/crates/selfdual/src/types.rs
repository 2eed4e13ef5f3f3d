//! The six classical families of self-dual codes, behind a common trait.
//!
//! Each family bundles its membership predicate, seed construction, and the
//! closed-form spectral data (beta_m, alpha_m, nu_m) of the neighbor
//! operator. Families register by name and are selected at runtime
//! (`2eI`, `2eII`, `qE:q=3`, `qE1:q=3`, `qH:q=4`, `qH1:q=4`).

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::code::Code;
use crate::enumerate;
use crate::error::{Error, Result};
use crate::field::{Field, FormKind};
use crate::vecpack::{PackedVec, MAX_LEN};

/// Which monomial subset certifies the filtration cut for the family:
/// all full-rank monomials, or only those keeping the all-ones vector
/// outside the span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialSet {
    MStar,
    MOne,
}

/// A family of self-dual codes of fixed type; the strategy interface the
/// classifier, the operator construction and the CLI all run against.
pub trait TypeFamily: Send + Sync {
    /// Canonical registry name, e.g. "2eI" or "qE:q=3".
    fn name(&self) -> String;

    fn field(&self) -> &'static Field;
    fn form_kind(&self) -> FormKind;
    fn requires_allones(&self) -> bool;
    fn requires_doubly_even(&self) -> bool;
    fn monomial_set(&self) -> MonomialSet;

    /// Reject lengths that are structurally incompatible (empty families
    /// fail fast rather than producing 0x0 operators).
    fn validate_length(&self, len: usize) -> Result<()> {
        common_length_check(self, len)
    }

    fn is_member(&self, code: &Code) -> Result<bool>;

    /// A member of the family at the given length, usually an orthogonal
    /// sum of minimal blocks.
    fn seed(&self, len: usize) -> Result<Code>;

    /// alpha_m for codes of dimension n (exact rational).
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational>;

    /// Operator eigenvalue nu_m = alpha_m - beta_m.
    fn nu(&self, m: usize, n: usize) -> Result<BigRational> {
        let a = self.alpha(m, n)?;
        Ok(a - BigRational::from_integer(beta(m, self.field().q())))
    }
}

/// beta_m = (q^m - 1)/(q - 1), the subspace count entering every eigenvalue.
pub fn beta(m: usize, q: u8) -> BigInt {
    let q = BigInt::from(q);
    (q.pow(m as u32) - 1) / (q - 1)
}

/// q^e as an exact rational, with negative exponents allowed (they occur in
/// the spectral formulas at m close to n and simply yield empty kernels).
fn qpow(q: u8, e: i64) -> BigRational {
    let q = BigInt::from(q);
    if e >= 0 {
        BigRational::from_integer(q.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), q.pow((-e) as u32))
    }
}

fn ratio(num: BigRational, q: u8) -> BigRational {
    num / BigRational::from_integer(BigInt::from(q as i64 - 1))
}

fn common_length_check(fam: &(impl TypeFamily + ?Sized), len: usize) -> Result<()> {
    let name = fam.name();
    if len == 0 || len % 2 != 0 {
        return Err(Error::IncompatibleLength {
            name,
            len,
            reason: "self-dual codes need positive even length".into(),
        });
    }
    if len > MAX_LEN {
        return Err(Error::LengthTooLarge(len, MAX_LEN));
    }
    if fam.requires_doubly_even() && len % 8 != 0 {
        return Err(Error::IncompatibleLength {
            name,
            len,
            reason: "doubly-even self-dual codes exist only for lengths divisible by 8".into(),
        });
    }
    if fam.requires_allones() {
        let p = fam.field().characteristic() as usize;
        if len % p != 0 {
            return Err(Error::IncompatibleLength {
                name,
                len,
                reason: format!(
                    "the all-ones vector is self-orthogonal only when the characteristic {p} divides the length"
                ),
            });
        }
    }
    Ok(())
}

fn member_common(fam: &(impl TypeFamily + ?Sized), code: &Code) -> Result<bool> {
    if code.field().q() != fam.field().q() {
        return Err(Error::FieldMismatch(code.field().q(), fam.field().q()));
    }
    if !code.is_self_dual(fam.form_kind()) {
        return Ok(false);
    }
    if fam.requires_allones() && !code.contains_allones() {
        return Ok(false);
    }
    if fam.requires_doubly_even() && !code.is_doubly_even()? {
        return Ok(false);
    }
    Ok(true)
}

/// Orthogonal sum of `copies` shifted copies of `block`.
fn orthogonal_power(block: &Code, copies: usize) -> Code {
    let field = block.field();
    let blen = block.len();
    let len = blen * copies;
    let mut rows = Vec::new();
    for c in 0..copies {
        for &r in block.rows() {
            let mut v = PackedVec::zero();
            for i in 0..blen {
                v.set(c * blen + i, r.get(i));
            }
            rows.push(v);
        }
    }
    Code::from_rows(field, len, rows).expect("orthogonal sum stays in range")
}

/// Minimal self-dual block of length 2 for the given form, if one exists:
/// <(1, c)> with 1 + c * conj(c) = 0.
fn block2(field: &'static Field, kind: FormKind) -> Option<Code> {
    for c in field.elements() {
        let norm = field.mul(c, field.conj_for(c, kind));
        if field.add(1, norm) == 0 {
            let code = Code::from_symbol_rows(field, 2, &[vec![1, c]]).expect("valid block");
            if code.is_self_dual(kind) {
                return Some(code);
            }
        }
    }
    None
}

/// Brute-force a self-dual [4, 2] block as [I | A] with A A^T = -I.
fn block4(field: &'static Field, kind: FormKind) -> Option<Code> {
    for a in field.elements() {
        for b in field.elements() {
            for c in field.elements() {
                for d in field.elements() {
                    let code = Code::from_symbol_rows(
                        field,
                        4,
                        &[vec![1, 0, a, b], vec![0, 1, c, d]],
                    )
                    .expect("valid rows");
                    if code.is_self_dual(kind) {
                        return Some(code);
                    }
                }
            }
        }
    }
    None
}

fn seed_from_blocks(fam: &(impl TypeFamily + ?Sized), len: usize) -> Result<Code> {
    fam.validate_length(len)?;
    let field = fam.field();
    let kind = fam.form_kind();
    let mut blocks: Vec<Code> = Vec::new();
    if let Some(b) = block2(field, kind) {
        blocks.push(b);
    }
    if let Some(b) = block4(field, kind) {
        blocks.push(b);
    }
    if fam.requires_allones() {
        // only blocks containing their own all-ones vector tile into a code
        // containing the global all-ones vector; rebuild the list from the
        // exhaustive small-length enumerations
        blocks = Vec::new();
        for blen in [2usize, 4] {
            let ones = Code::allones(field, blen);
            if let Some(b) = enumerate::all_self_dual(field, blen, kind)
                .into_iter()
                .find(|c| c.contains(ones))
            {
                blocks.push(b);
            }
        }
    }
    for block in &blocks {
        if len % block.len() == 0 {
            let seed = orthogonal_power(block, len / block.len());
            if fam.is_member(&seed)? {
                return Ok(seed);
            }
        }
    }
    Err(Error::SeedNotFound { name: fam.name(), len })
}

// ---------------------------------------------------------------------------
// The six classical families
// ---------------------------------------------------------------------------

/// Euclidean self-dual codes over GF(q), q odd.
pub struct EuclideanOdd {
    field: &'static Field,
}

impl TypeFamily for EuclideanOdd {
    fn name(&self) -> String {
        format!("qE:q={}", self.field.q())
    }
    fn field(&self) -> &'static Field {
        self.field
    }
    fn form_kind(&self) -> FormKind {
        FormKind::Euclidean
    }
    fn requires_allones(&self) -> bool {
        false
    }
    fn requires_doubly_even(&self) -> bool {
        false
    }
    fn monomial_set(&self) -> MonomialSet {
        MonomialSet::MStar
    }
    fn is_member(&self, code: &Code) -> Result<bool> {
        member_common(self, code)
    }
    fn seed(&self, len: usize) -> Result<Code> {
        seed_from_blocks(self, len)
    }
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational> {
        check_m(m, n)?;
        let q = self.field.q();
        Ok(ratio(qpow(q, n as i64 - m as i64) - qpow(q, 0), q))
    }
}

/// Euclidean self-dual codes over GF(q), q odd, containing the all-ones
/// vector.
pub struct EuclideanOddAllOnes {
    field: &'static Field,
}

impl TypeFamily for EuclideanOddAllOnes {
    fn name(&self) -> String {
        format!("qE1:q={}", self.field.q())
    }
    fn field(&self) -> &'static Field {
        self.field
    }
    fn form_kind(&self) -> FormKind {
        FormKind::Euclidean
    }
    fn requires_allones(&self) -> bool {
        true
    }
    fn requires_doubly_even(&self) -> bool {
        false
    }
    fn monomial_set(&self) -> MonomialSet {
        MonomialSet::MOne
    }
    fn is_member(&self, code: &Code) -> Result<bool> {
        member_common(self, code)
    }
    fn seed(&self, len: usize) -> Result<Code> {
        seed_from_blocks(self, len)
    }
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational> {
        check_m(m, n)?;
        let q = self.field.q();
        Ok(ratio(qpow(q, n as i64 - m as i64 - 1) - qpow(q, 0), q))
    }
}

/// Euclidean self-dual codes over GF(q), q even (Type I).
pub struct EvenTypeI {
    field: &'static Field,
}

impl TypeFamily for EvenTypeI {
    fn name(&self) -> String {
        if self.field.q() == 2 { "2eI".into() } else { format!("qEI:q={}", self.field.q()) }
    }
    fn field(&self) -> &'static Field {
        self.field
    }
    fn form_kind(&self) -> FormKind {
        FormKind::Euclidean
    }
    fn requires_allones(&self) -> bool {
        // automatic in characteristic 2; still checked on members
        true
    }
    fn requires_doubly_even(&self) -> bool {
        false
    }
    fn monomial_set(&self) -> MonomialSet {
        MonomialSet::MOne
    }
    fn is_member(&self, code: &Code) -> Result<bool> {
        member_common(self, code)
    }
    fn seed(&self, len: usize) -> Result<Code> {
        seed_from_blocks(self, len)
    }
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational> {
        check_m(m, n)?;
        let q = self.field.q();
        Ok(ratio(qpow(q, n as i64 - m as i64) - qpow(q, 1), q))
    }
}

/// Doubly-even binary self-dual codes (Type II; q = 2 only).
pub struct EvenTypeII {
    field: &'static Field,
}

impl TypeFamily for EvenTypeII {
    fn name(&self) -> String {
        "2eII".into()
    }
    fn field(&self) -> &'static Field {
        self.field
    }
    fn form_kind(&self) -> FormKind {
        FormKind::Euclidean
    }
    fn requires_allones(&self) -> bool {
        true
    }
    fn requires_doubly_even(&self) -> bool {
        true
    }
    fn monomial_set(&self) -> MonomialSet {
        MonomialSet::MOne
    }
    fn is_member(&self, code: &Code) -> Result<bool> {
        member_common(self, code)
    }
    fn seed(&self, len: usize) -> Result<Code> {
        self.validate_length(len)?;
        let e8 = Code::from_symbol_rows(
            self.field,
            8,
            &[
                vec![1, 0, 0, 0, 0, 1, 1, 1],
                vec![0, 1, 0, 0, 1, 0, 1, 1],
                vec![0, 0, 1, 0, 1, 1, 0, 1],
                vec![0, 0, 0, 1, 1, 1, 1, 0],
            ],
        )
        .expect("extended Hamming block");
        Ok(orthogonal_power(&e8, len / 8))
    }
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational> {
        check_m(m, n)?;
        let q = self.field.q();
        Ok(ratio(qpow(q, n as i64 - m as i64 - 1) - qpow(q, 0), q))
    }
}

/// Hermitian self-dual codes over GF(q), q a square.
pub struct HermitianType {
    field: &'static Field,
}

impl TypeFamily for HermitianType {
    fn name(&self) -> String {
        format!("qH:q={}", self.field.q())
    }
    fn field(&self) -> &'static Field {
        self.field
    }
    fn form_kind(&self) -> FormKind {
        FormKind::Hermitian
    }
    fn requires_allones(&self) -> bool {
        false
    }
    fn requires_doubly_even(&self) -> bool {
        false
    }
    fn monomial_set(&self) -> MonomialSet {
        MonomialSet::MStar
    }
    fn is_member(&self, code: &Code) -> Result<bool> {
        member_common(self, code)
    }
    fn seed(&self, len: usize) -> Result<Code> {
        seed_from_blocks(self, len)
    }
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational> {
        check_m(m, n)?;
        let q = self.field.q();
        let r = self.field.conj_exponent().expect("square field") as i64;
        Ok(ratio(
            BigRational::from_integer(BigInt::from(r)) * (qpow(q, n as i64 - m as i64) - qpow(q, 0)),
            q,
        ))
    }
}

/// Hermitian self-dual codes containing the all-ones vector.
pub struct HermitianAllOnes {
    field: &'static Field,
}

impl TypeFamily for HermitianAllOnes {
    fn name(&self) -> String {
        format!("qH1:q={}", self.field.q())
    }
    fn field(&self) -> &'static Field {
        self.field
    }
    fn form_kind(&self) -> FormKind {
        FormKind::Hermitian
    }
    fn requires_allones(&self) -> bool {
        true
    }
    fn requires_doubly_even(&self) -> bool {
        false
    }
    fn monomial_set(&self) -> MonomialSet {
        MonomialSet::MOne
    }
    fn is_member(&self, code: &Code) -> Result<bool> {
        member_common(self, code)
    }
    fn seed(&self, len: usize) -> Result<Code> {
        seed_from_blocks(self, len)
    }
    fn alpha(&self, m: usize, n: usize) -> Result<BigRational> {
        check_m(m, n)?;
        let q = self.field.q();
        let r = self.field.conj_exponent().expect("square field") as i64;
        Ok(ratio(
            BigRational::from_integer(BigInt::from(r))
                * (qpow(q, n as i64 - m as i64 - 1) - qpow(q, 0)),
            q,
        ))
    }
}

fn check_m(m: usize, n: usize) -> Result<()> {
    if m > n {
        return Err(Error::GenusOutOfRange { m, n });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// A registered family constructor.
pub struct FamilyDescriptor {
    /// Registry key ("qE", "qE1", "qEI", "qEII", "qH", "qH1").
    pub key: &'static str,
    pub summary: &'static str,
    valid_q: fn(&Field) -> bool,
    build: fn(&'static Field) -> Arc<dyn TypeFamily>,
}

impl FamilyDescriptor {
    pub fn instantiate(&self, q: u8) -> Result<Arc<dyn TypeFamily>> {
        let field = Field::get(q)?;
        if !(self.valid_q)(field) {
            return Err(Error::Invalid(format!(
                "family {} does not admit q = {q}",
                self.key
            )));
        }
        Ok((self.build)(field))
    }
}

pub fn registry() -> &'static [FamilyDescriptor] {
    &[
        FamilyDescriptor {
            key: "qE",
            summary: "Euclidean self-dual, odd q",
            valid_q: |f| f.q() % 2 == 1,
            build: |field| Arc::new(EuclideanOdd { field }),
        },
        FamilyDescriptor {
            key: "qE1",
            summary: "Euclidean self-dual with all-ones vector, odd q",
            valid_q: |f| f.q() % 2 == 1,
            build: |field| Arc::new(EuclideanOddAllOnes { field }),
        },
        FamilyDescriptor {
            key: "qEI",
            summary: "Euclidean self-dual, even q (Type I)",
            valid_q: |f| f.q() % 2 == 0,
            build: |field| Arc::new(EvenTypeI { field }),
        },
        FamilyDescriptor {
            key: "qEII",
            summary: "doubly-even binary self-dual (Type II)",
            valid_q: |f| f.q() == 2,
            build: |field| Arc::new(EvenTypeII { field }),
        },
        FamilyDescriptor {
            key: "qH",
            summary: "Hermitian self-dual, square q",
            valid_q: |f| f.conj_exponent().is_some(),
            build: |field| Arc::new(HermitianType { field }),
        },
        FamilyDescriptor {
            key: "qH1",
            summary: "Hermitian self-dual with all-ones vector, square q",
            valid_q: |f| f.conj_exponent().is_some(),
            build: |field| Arc::new(HermitianAllOnes { field }),
        },
    ]
}

/// Resolve a CLI/persistence name: `2eI`, `2eII`, or `<family>:q=<q>`.
pub fn lookup(name: &str) -> Result<Arc<dyn TypeFamily>> {
    let norm = name.trim();
    let lower = norm.to_ascii_lowercase();
    if lower == "2ei" {
        return descriptor("qEI")?.instantiate(2);
    }
    if lower == "2eii" {
        return descriptor("qEII")?.instantiate(2);
    }
    if let Some((fam, qpart)) = norm.split_once(':') {
        let q: u8 = qpart
            .trim()
            .strip_prefix("q=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::UnknownType(name.into()))?;
        return descriptor(fam)?.instantiate(q);
    }
    Err(Error::UnknownType(name.into()))
}

fn descriptor(key: &str) -> Result<&'static FamilyDescriptor> {
    registry()
        .iter()
        .find(|d| d.key.eq_ignore_ascii_case(key))
        .ok_or_else(|| Error::UnknownType(key.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn beta_values() {
        assert_eq!(beta(0, 2), BigInt::from(0));
        assert_eq!(beta(1, 5), BigInt::from(1));
        assert_eq!(beta(2, 2), BigInt::from(3));
        assert_eq!(beta(3, 3), BigInt::from(13));
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(lookup("2eI").unwrap().name(), "2eI");
        assert_eq!(lookup("2eII").unwrap().name(), "2eII");
        assert_eq!(lookup("qE:q=3").unwrap().name(), "qE:q=3");
        assert_eq!(lookup("qH:q=4").unwrap().name(), "qH:q=4");
        assert_eq!(lookup("qH1:q=4").unwrap().name(), "qH1:q=4");
        assert!(lookup("qE:q=2").is_err(), "qE needs odd q");
        assert!(lookup("qH:q=3").is_err(), "qH needs square q");
        assert!(lookup("nonsense").is_err());
        // round-trip through the persisted name
        for name in ["2eI", "2eII", "qE:q=3", "qE1:q=3", "qH:q=4", "qH1:q=4"] {
            assert_eq!(lookup(&lookup(name).unwrap().name()).unwrap().name(), lookup(name).unwrap().name());
        }
    }

    #[test]
    fn binary_type1_eigenvalues_n8() {
        let fam = lookup("2eI").unwrap();
        let expect = [254i64, 125, 59, 23, -1];
        for (m, &e) in expect.iter().enumerate() {
            assert_eq!(fam.nu(m, 8).unwrap(), rat(e));
        }
    }

    #[test]
    fn binary_type2_eigenvalues() {
        let fam = lookup("2eII").unwrap();
        for m in 0..=6usize {
            let want = rat((1i64 << (11 - m)) - (1i64 << m));
            assert_eq!(fam.nu(m, 12).unwrap(), want);
        }
        // single class at length 8: nu_0 = 2^{n-1} - 1 = 7
        assert_eq!(fam.nu(0, 4).unwrap(), rat(7));
    }

    #[test]
    fn hermitian_alpha_q4() {
        let fam = lookup("qH:q=4").unwrap();
        assert_eq!(fam.alpha(0, 2).unwrap(), rat(10)); // 2*(16-1)/3
    }

    #[test]
    fn nu_equals_alpha_minus_beta_and_is_strictly_decreasing() {
        for name in ["2eI", "2eII", "qE:q=3", "qE1:q=3", "qE:q=5", "qH:q=4", "qH1:q=4", "qH:q=9"] {
            let fam = lookup(name).unwrap();
            for n in 1..=16usize {
                let mut prev: Option<BigRational> = None;
                for m in 0..=n {
                    let nu = fam.nu(m, n).unwrap();
                    let alpha = fam.alpha(m, n).unwrap();
                    assert_eq!(
                        nu.clone(),
                        alpha - BigRational::from_integer(beta(m, fam.field().q())),
                    );
                    if let Some(p) = prev {
                        assert!(nu < p, "{name}: nu must strictly decrease at n={n}, m={m}");
                    }
                    prev = Some(nu);
                }
            }
        }
    }

    #[test]
    fn alpha_zero_is_integer_neighbor_count() {
        // 2eI at n = 8: alpha_0 = 2^8 - 2 = 254 neighbors per code
        let fam = lookup("2eI").unwrap();
        assert_eq!(fam.alpha(0, 8).unwrap().to_integer().to_i64(), Some(254));
    }

    #[test]
    fn membership() {
        let fam = lookup("2eII").unwrap();
        let e8 = fam.seed(8).unwrap();
        assert!(fam.is_member(&e8).unwrap());
        assert_eq!(e8.dim(), 4);

        let t1 = lookup("2eI").unwrap();
        let i2x4 = t1.seed(8).unwrap();
        assert!(t1.is_member(&i2x4).unwrap());
        assert!(!fam.is_member(&i2x4).unwrap(), "weight-2 words are not doubly even");

        let f3 = Field::get(3).unwrap();
        let wrong =
            Code::from_symbol_rows(f3, 2, &[vec![1, 1]]).unwrap();
        assert!(matches!(fam.is_member(&wrong), Err(Error::FieldMismatch(3, 2))));
    }

    #[test]
    fn seeds_are_members() {
        for (name, lens) in [
            ("2eI", vec![2usize, 4, 10, 16]),
            ("2eII", vec![8, 16, 24]),
            ("qE:q=3", vec![4, 8, 12]),
            ("qE:q=5", vec![2, 4, 6]),
            ("qH:q=4", vec![2, 4, 6]),
            ("qH1:q=4", vec![2, 4, 6]),
            ("qH:q=9", vec![2, 4]),
        ] {
            let fam = lookup(name).unwrap();
            for len in lens {
                let seed = fam.seed(len).unwrap();
                assert!(fam.is_member(&seed).unwrap(), "{name} seed at {len}");
                assert_eq!(seed.len(), len);
                assert_eq!(seed.dim(), len / 2);
            }
        }
    }

    #[test]
    fn incompatible_lengths_fail_fast() {
        assert!(matches!(
            lookup("2eII").unwrap().seed(12),
            Err(Error::IncompatibleLength { .. })
        ));
        assert!(matches!(
            lookup("2eI").unwrap().seed(7),
            Err(Error::IncompatibleLength { .. })
        ));
        // ternary all-ones family needs 3 | N and no small block exists
        let fam = lookup("qE1:q=3").unwrap();
        assert!(matches!(fam.seed(4), Err(Error::IncompatibleLength { .. })));
        assert!(matches!(fam.seed(6), Err(Error::SeedNotFound { .. })));
        // ternary Euclidean: no self-dual codes at N = 6 (4 does not divide 6)
        let fam = lookup("qE:q=3").unwrap();
        assert!(matches!(fam.seed(6), Err(Error::SeedNotFound { .. })));
    }
}

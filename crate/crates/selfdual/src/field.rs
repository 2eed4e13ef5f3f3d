//! Exact arithmetic in the small finite fields GF(q), q <= 9.
//!
//! Elements are canonical indices 0..q-1. For prime q the index is the
//! residue. For q = p^e the index encodes the coefficient vector of a
//! polynomial over a fixed irreducible polynomial, least degree first,
//! base p: the element sum c_i x^i has index sum c_i p^i. Index 0 is the
//! additive identity, index 1 the multiplicative identity.
//!
//! All operations go through precomputed tables, so they are pure lookups
//! and safe for unrestricted concurrent use.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which form the duality uses: `b(x, y) = sum x_i conj(y_i)` with `conj`
/// the identity (Euclidean) or the order-2 Galois automorphism (Hermitian).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormKind {
    Euclidean,
    Hermitian,
}

impl std::fmt::Display for FormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormKind::Euclidean => write!(f, "euclidean"),
            FormKind::Hermitian => write!(f, "hermitian"),
        }
    }
}

pub const SUPPORTED_Q: [u8; 7] = [2, 3, 4, 5, 7, 8, 9];
const MAX_Q: usize = 9;

/// Fixed defining polynomials (constant term first, monic) so element
/// indexing is reproducible across runs and serialized codes stay portable.
fn defining_poly(q: u8) -> Option<&'static [u8]> {
    match q {
        4 => Some(&[1, 1, 1]),    // x^2 + x + 1
        8 => Some(&[1, 1, 0, 1]), // x^3 + x + 1
        9 => Some(&[2, 2, 1]),    // x^2 + 2x + 2
        _ => None,
    }
}

/// One of the supported finite fields, with full arithmetic tables.
///
/// Obtained through [`Field::get`]; instances are interned, so codes can
/// hold a `&'static Field` and field identity is just `q`.
pub struct Field {
    q: u8,
    p: u8,
    e: u8,
    /// r with conjugation x -> x^r, present iff q = r^2.
    conj_exp: Option<u8>,
    poly: Vec<u8>,
    add_t: [[u8; MAX_Q]; MAX_Q],
    mul_t: [[u8; MAX_Q]; MAX_Q],
    neg_t: [u8; MAX_Q],
    inv_t: [u8; MAX_Q],
    conj_t: [u8; MAX_Q],
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for Field {}

fn build_field(q: u8) -> Field {
    let (p, e) = match q {
        2 | 3 | 5 | 7 => (q, 1),
        4 => (2, 2),
        8 => (2, 3),
        9 => (3, 2),
        _ => unreachable!("unsupported q"),
    };
    let poly: Vec<u8> = defining_poly(q)
        .map(|c| c.to_vec())
        .unwrap_or_else(|| vec![0, 1]); // x, unused for prime fields
    let qi = q as usize;

    // digits of an index, least degree first
    let digits = |mut v: usize| -> Vec<u8> {
        let mut d = vec![0u8; e as usize];
        for di in d.iter_mut() {
            *di = (v % p as usize) as u8;
            v /= p as usize;
        }
        d
    };
    let index = |d: &[u8]| -> u8 {
        let mut v = 0usize;
        for (i, &c) in d.iter().enumerate() {
            v += c as usize * (p as usize).pow(i as u32);
        }
        v as u8
    };

    let mut add_t = [[0u8; MAX_Q]; MAX_Q];
    let mut mul_t = [[0u8; MAX_Q]; MAX_Q];
    for a in 0..qi {
        for b in 0..qi {
            let da = digits(a);
            let db = digits(b);
            // addition: coefficient-wise mod p
            let ds: Vec<u8> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
            add_t[a][b] = index(&ds);
            // multiplication: polynomial product reduced mod the defining poly
            let mut prod = vec![0u16; 2 * e as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x as u16 * y as u16) % p as u16;
                }
            }
            // reduce: x^e = -(poly[0] + poly[1] x + ... + poly[e-1] x^{e-1})
            for i in (e as usize..prod.len()).rev() {
                let c = prod[i];
                if c == 0 {
                    continue;
                }
                prod[i] = 0;
                for j in 0..e as usize {
                    let sub = (c * poly[j] as u16) % p as u16;
                    prod[i - e as usize + j] =
                        (prod[i - e as usize + j] + p as u16 - sub) % p as u16;
                }
            }
            let dm: Vec<u8> = prod[..e as usize].iter().map(|&x| x as u8).collect();
            mul_t[a][b] = index(&dm);
        }
    }

    let mut neg_t = [0u8; MAX_Q];
    let mut inv_t = [0u8; MAX_Q];
    for a in 0..qi {
        for b in 0..qi {
            if add_t[a][b] == 0 {
                neg_t[a] = b as u8;
            }
            if a != 0 && mul_t[a][b] == 1 {
                inv_t[a] = b as u8;
            }
        }
    }

    let conj_exp = match q {
        4 => Some(2u8),
        9 => Some(3u8),
        _ => None,
    };
    let mut conj_t = [0u8; MAX_Q];
    for a in 0..qi {
        conj_t[a] = match conj_exp {
            None => a as u8,
            Some(r) => {
                let mut acc = if a == 0 { 0 } else { 1u8 };
                for _ in 0..r {
                    acc = mul_t[acc as usize][a];
                }
                // acc = a^r computed as 1 * a * ... * a (r factors); a = 0 handled above
                if a == 0 {
                    0
                } else {
                    acc
                }
            }
        };
    }

    Field { q, p, e, conj_exp, poly, add_t, mul_t, neg_t, inv_t, conj_t }
}

static FIELDS: OnceLock<Vec<&'static Field>> = OnceLock::new();

impl Field {
    /// The interned field of size `q`.
    pub fn get(q: u8) -> Result<&'static Field> {
        let all = FIELDS.get_or_init(|| {
            SUPPORTED_Q.iter().map(|&q| &*Box::leak(Box::new(build_field(q)))).collect()
        });
        all.iter().find(|f| f.q == q).copied().ok_or(Error::UnsupportedField(q))
    }

    pub fn q(&self) -> u8 {
        self.q
    }
    pub fn characteristic(&self) -> u8 {
        self.p
    }
    pub fn extension_degree(&self) -> u8 {
        self.e
    }
    /// r such that conjugation is x -> x^r; present iff q is a square.
    pub fn conj_exponent(&self) -> Option<u8> {
        self.conj_exp
    }
    pub fn defining_poly(&self) -> &[u8] {
        &self.poly
    }
    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add_t[a as usize][b as usize]
    }
    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add_t[a as usize][self.neg_t[b as usize] as usize]
    }
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul_t[a as usize][b as usize]
    }
    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg_t[a as usize]
    }
    pub fn inv(&self, a: u8) -> Result<u8> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.inv_t[a as usize])
    }
    /// Galois conjugation x -> x^r. Only meaningful when q is a square;
    /// callers select it through the Hermitian form kind.
    #[inline]
    pub fn conj(&self, a: u8) -> u8 {
        debug_assert!(self.conj_exp.is_some(), "conjugation requested on non-square field");
        self.conj_t[a as usize]
    }
    #[inline]
    pub(crate) fn conj_for(&self, a: u8, kind: FormKind) -> u8 {
        match kind {
            FormKind::Euclidean => a,
            FormKind::Hermitian => self.conj(a),
        }
    }
}

/// Serializable description of a field, pinning the defining polynomial so
/// persisted codes are portable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u8,
    pub p: u8,
    pub e: u8,
    pub poly: Vec<u8>,
}

impl FieldSpec {
    pub fn of(field: &Field) -> Self {
        FieldSpec {
            q: field.q,
            p: field.p,
            e: field.e,
            poly: field.poly.clone(),
        }
    }

    /// Resolve back to the interned field, checking the stored polynomial
    /// agrees with ours.
    pub fn resolve(&self) -> Result<&'static Field> {
        let f = Field::get(self.q)?;
        if self.p != f.p || self.e != f.e || (f.e > 1 && self.poly != f.poly) {
            return Err(Error::FieldSpecMismatch {
                stored: format!("q={} p={} e={} poly={:?}", self.q, self.p, self.e, self.poly),
                expected: format!("q={} p={} e={} poly={:?}", f.q, f.p, f.e, f.poly),
            });
        }
        Ok(f)
    }
}

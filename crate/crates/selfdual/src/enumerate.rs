//! Exhaustive enumeration of self-dual codes at tiny lengths.
//!
//! Independent of the neighbor search: depth-first over self-orthogonal
//! subspaces, where a subspace of dimension d is generated exactly once
//! from its RREF truncation (the span of its d-1 rows with the smallest
//! pivots). That makes the walk duplicate-free without any dedup set.
//! Used as the ground-truth oracle for class counts and mass checks; the
//! cost is exponential, so lengths are guarded.

use crate::code::Code;
use crate::error::{Error, Result};
use crate::field::{Field, FormKind};
use crate::types::TypeFamily;
use crate::vecpack::PackedVec;

/// All self-dual codes of the given length, each exactly once (as
/// subspaces, not up to equivalence).
pub fn all_self_dual(field: &'static Field, len: usize, kind: FormKind) -> Vec<Code> {
    try_all_self_dual(field, len, kind).expect("length within the enumeration guard")
}

pub fn try_all_self_dual(
    field: &'static Field,
    len: usize,
    kind: FormKind,
) -> Result<Vec<Code>> {
    let mut out = Vec::new();
    for_each_self_dual(field, len, kind, &mut |c| out.push(c.clone()))?;
    // deterministic order
    out.sort_by(|a, b| a.rows().cmp(b.rows()));
    Ok(out)
}

/// Visit every self-dual code of the given length exactly once.
pub fn for_each_self_dual(
    field: &'static Field,
    len: usize,
    kind: FormKind,
    visit: &mut impl FnMut(&Code),
) -> Result<()> {
    // the walk touches roughly one node per self-orthogonal subspace,
    // about q^{n(n+1)/2} of them
    let n = len / 2;
    let cost_bits = (n * (n + 1) / 2) as f64 * (field.q() as f64).log2();
    if cost_bits > 24.0 {
        return Err(Error::BudgetExceeded {
            needed: cost_bits.exp2() as u128,
            budget: 1 << 24,
        });
    }
    if len % 2 != 0 || len == 0 {
        return Ok(());
    }
    let root = Code::zero(field, len);
    extend(field, len, kind, &root, visit);
    Ok(())
}

/// Candidates extending `sub` are the isotropic vectors of the reduced
/// complement of sub inside its dual (entries at the pivots of sub zeroed)
/// whose own pivot exceeds every pivot of sub: exactly the possible last
/// RREF rows of a child.
fn extend(
    field: &'static Field,
    len: usize,
    kind: FormKind,
    sub: &Code,
    visit: &mut impl FnMut(&Code),
) {
    let d = sub.dim();
    if 2 * d == len {
        debug_assert!(sub.is_self_dual(kind));
        visit(sub);
        return;
    }
    let max_pivot = sub.pivots().last().copied();
    let perp = sub.dual(kind);
    // reduced complement: dual vectors with zeros at the pivots of sub
    let mut reduced: Vec<PackedVec> = perp.rows().iter().map(|&r| sub.reduce(r)).collect();
    let _ = crate::code::rref_in_place(field, len, &mut reduced);
    // walk the reduced complement's codewords
    let space = Code::from_rows(field, len, reduced).expect("complement in range");
    for v in space.codewords() {
        if v.is_zero(len) {
            continue;
        }
        let pivot = (0..len).find(|&i| v.get(i) != 0).expect("nonzero");
        if let Some(mp) = max_pivot {
            if pivot <= mp {
                continue;
            }
        }
        // normalize the leading coefficient; only one vector per line
        if v.get(pivot) != 1 {
            continue;
        }
        // `sub` must be the RREF truncation of the child: its rows already
        // vanish at the new pivot column, otherwise the child is reached
        // from a different parent and would be duplicated here
        if sub.rows().iter().any(|r| r.get(pivot) != 0) {
            continue;
        }
        if field.form(v, v, len, kind) != 0 {
            continue;
        }
        let mut rows = sub.rows().to_vec();
        rows.push(v);
        let child = Code::from_rows(field, len, rows).expect("in range");
        debug_assert_eq!(child.dim(), d + 1);
        extend(field, len, kind, &child, visit);
    }
}

/// All members of a family at the given length.
pub fn all_in_family(fam: &dyn TypeFamily, len: usize) -> Result<Vec<Code>> {
    let all = try_all_self_dual(fam.field(), len, fam.form_kind())?;
    let mut out = Vec::new();
    for c in all {
        if fam.is_member(&c)? {
            out.push(c);
        }
    }
    Ok(out)
}

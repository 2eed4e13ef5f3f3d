//! The cross-module invariant suite.
//!
//! Everything the theory promises about a classified family is checked
//! here, exactly: canonical classes, neighbor totals, self-adjointness,
//! spectral completeness, the sampled neighbor-sum constancy over admissible
//! tuples, genus-lowering compatibility, and (optionally) the mass identity
//! against exhaustive enumeration and the filtration/spectrum agreement.
//! The CLI `verify` command and the acceptance suite both run through this
//! module.

use num_rational::BigRational;
use num_traits::Zero;

use crate::canon;
use crate::code::Code;
use crate::db::ClassDatabase;
use crate::error::Result;
use crate::hecke;
use crate::neighbor;
use crate::ratmat::{rat_u128, rat_u64};
use crate::rng::SplitMix64;
use crate::types::{MonomialSet, TypeFamily};
use crate::vecpack::PackedVec;
use crate::wenum;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, pass: bool, detail: String) {
        self.checks.push(CheckOutcome { name: name.into(), pass, detail });
    }
}

#[derive(Clone)]
pub struct VerifyOptions {
    /// Random admissible tuples per class and genus for the neighbor-sum
    /// constancy check.
    pub star_samples: usize,
    /// Largest genus for the neighbor-sum constancy check.
    pub star_genus_max: usize,
    /// Largest genus for the genus-lowering compatibility check.
    pub phi_genus_max: usize,
    /// Tuple enumeration budget.
    pub tuple_budget: u64,
    /// Compare the class masses against exhaustive enumeration (tiny
    /// lengths only).
    pub verify_mass: bool,
    /// Independently recompute the filtration dimensions up to this genus
    /// and compare with the spectrum.
    pub filtration_genus_max: Option<usize>,
    /// Seed for the sampled checks (fixed default keeps reports
    /// reproducible).
    pub rng_seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            star_samples: 50,
            star_genus_max: 2,
            phi_genus_max: 2,
            tuple_budget: 1 << 26,
            verify_mass: false,
            filtration_genus_max: None,
            rng_seed: 0x5e1f_d0a1,
        }
    }
}

/// Run the whole suite on a classified database.
pub fn run_suite(db: &ClassDatabase, opts: &VerifyOptions) -> Result<VerifyReport> {
    let fam = db.family()?;
    let mut report = VerifyReport::default();

    check_classes(db, fam.as_ref(), &mut report)?;
    check_neighbor_totals(db, fam.as_ref(), &mut report)?;

    let t = hecke::hecke_matrix(db, 1, 1 << 22)?;
    let sa = hecke::check_self_adjoint(&t, db);
    report.push(
        "self-adjointness",
        sa.ok,
        if sa.ok { format!("{} classes", db.class_count()) } else { format!("violations at {:?}", sa.violations) },
    );

    let spec = hecke::spectrum(&t, fam.as_ref(), db);
    match spec {
        Ok(s) => {
            let dims = if s.merged {
                "merged eigenvalues; per-index dims withheld".to_string()
            } else {
                format!("{:?}", s.y_dims_trimmed()?)
            };
            report.push(
                "spectral-completeness",
                true,
                format!("dims {dims} sum to {} classes", db.class_count()),
            );
            if let Some(m_max) = opts.filtration_genus_max {
                if !s.merged {
                    check_filtration_agreement(db, &s, m_max, opts.tuple_budget, &mut report)?;
                }
            }
        }
        Err(e) => {
            report.push("spectral-completeness", false, e.to_string());
        }
    }

    check_condition_star(db, fam.as_ref(), opts, &mut report)?;
    check_phi(db, opts, &mut report)?;
    check_cwe_invariance(db, opts, &mut report)?;

    if opts.verify_mass {
        check_mass(db, fam.as_ref(), &mut report)?;
    }
    Ok(report)
}

fn check_classes(
    db: &ClassDatabase,
    fam: &dyn TypeFamily,
    report: &mut VerifyReport,
) -> Result<()> {
    let mut ok = true;
    let mut detail = String::new();
    let mut seen = std::collections::HashSet::new();
    for (i, class) in db.classes.iter().enumerate() {
        let code = db.code(i)?;
        if !fam.is_member(&code)? {
            ok = false;
            detail = format!("class {i} is not a member of the family");
            break;
        }
        if !seen.insert(class.fingerprint.clone()) {
            ok = false;
            detail = format!("duplicate fingerprint at class {i}");
            break;
        }
        let cc = canon::canonical_form(&code);
        if cc.canon != code || cc.aut_order != class.aut_order {
            ok = false;
            detail = format!("class {i} representative is not canonical");
            break;
        }
        if fam.requires_allones() && !code.contains_allones() {
            ok = false;
            detail = format!("class {i} misses the all-ones vector");
            break;
        }
    }
    if ok {
        detail = format!("{} canonical classes", db.class_count());
    }
    report.push("classes-canonical", ok, detail);
    Ok(())
}

fn check_neighbor_totals(
    db: &ClassDatabase,
    fam: &dyn TypeFamily,
    report: &mut VerifyReport,
) -> Result<()> {
    let alpha0 = fam.alpha(0, db.n())?;
    let mut ok = true;
    let mut detail = format!("alpha_0 = {alpha0}");
    for s in 0..db.class_count() {
        let total: u64 = db.neighbors.iter().filter(|r| r.source == s).map(|r| r.count).sum();
        if rat_u64(total) != alpha0 {
            ok = false;
            detail = format!("source {s} totals {total}, expected {alpha0}");
            break;
        }
    }
    report.push("neighbor-column-sums", ok, detail);
    Ok(())
}

/// Sampled constancy of the neighbor sum over admissible tuples: for random
/// tuples c in C^m whose monomial lies in the family's admissible set, the
/// sum of the per-subspace neighbor counts over the codimension-1 subspaces
/// containing the tuple span must equal alpha_m. Returns the number of
/// tuples checked, or the offending (class, genus, got, expected) as an
/// error string.
pub fn condition_star(
    db: &ClassDatabase,
    genus_max: usize,
    samples: usize,
    seed: u64,
) -> Result<std::result::Result<usize, String>> {
    let fam = db.family()?;
    let fam = fam.as_ref();
    let field = fam.field();
    let len = db.length;
    let n = db.n();
    let mut rng = SplitMix64::new(seed);
    let mut checked = 0usize;
    for m in 1..=genus_max.min(n.saturating_sub(1)) {
        let alpha_m = fam.alpha(m, n)?;
        for i in 0..db.class_count() {
            let code = db.code(i)?;
            let words: Vec<PackedVec> = code.codewords().collect();
            let mut found = 0usize;
            let mut attempts = 0usize;
            while found < samples && attempts < samples * 40 {
                attempts += 1;
                let tuple: Vec<PackedVec> =
                    (0..m).map(|_| words[rng.below(words.len() as u64) as usize]).collect();
                if !tuple_admissible(&tuple, fam, field, len) {
                    continue;
                }
                found += 1;
                let total = neighbor_sum_over_containing_subspaces(&code, &tuple, fam)?;
                if total != alpha_m {
                    return Ok(Err(format!(
                        "class {i}, genus {m}: got {total}, expected {alpha_m}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(checked))
}

fn check_condition_star(
    db: &ClassDatabase,
    _fam: &dyn TypeFamily,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<()> {
    match condition_star(db, opts.star_genus_max, opts.star_samples, opts.rng_seed)? {
        Ok(checked) => report.push("neighbor-sum-constancy", true, format!("{checked} tuples")),
        Err(detail) => report.push("neighbor-sum-constancy", false, detail),
    }
    Ok(())
}

fn tuple_admissible(
    tuple: &[PackedVec],
    fam: &dyn TypeFamily,
    field: &'static crate::field::Field,
    len: usize,
) -> bool {
    let m = tuple.len();
    let mut rows = tuple.to_vec();
    let rank = crate::code::rref_in_place(field, len, &mut rows).len();
    if rank != m {
        return false;
    }
    match fam.monomial_set() {
        MonomialSet::MStar => true,
        MonomialSet::MOne => {
            let mut with_ones = tuple.to_vec();
            with_ones.push(Code::allones(field, len));
            crate::code::rref_in_place(field, len, &mut with_ones).len() == m + 1
        }
    }
}

/// Sum of neighbor counts over all codimension-1 subspaces of `code`
/// containing the span of the tuple.
fn neighbor_sum_over_containing_subspaces(
    code: &Code,
    tuple: &[PackedVec],
    fam: &dyn TypeFamily,
) -> Result<BigRational> {
    let field = code.field();
    let k = code.dim();
    // functionals annihilating the tuple coordinates
    let coords: Vec<PackedVec> = tuple
        .iter()
        .map(|&w| code.coordinates(w).expect("tuple words are codewords"))
        .collect();
    let functional_space = crate::code::kernel(field, k, coords);
    let mut total = BigRational::zero();
    let proj = crate::code::ProjectivePoints::new(field, functional_space.len());
    for coeffs in proj {
        let mut w = PackedVec::zero();
        for (i, b) in functional_space.iter().enumerate() {
            let c = coeffs.get(i);
            if c != 0 {
                w = field.add_vec(w, field.scale_vec(c, *b, k), k);
            }
        }
        let coeff_kernel = crate::code::kernel(field, k, vec![w]);
        let rows: Vec<PackedVec> = coeff_kernel.iter().map(|u| code.from_coordinates(*u)).collect();
        let sub = Code::from_rows(field, code.len(), rows)?;
        let alpha_e = neighbor::neighbors_through(code, &sub, fam)?.len();
        total += rat_u64(alpha_e as u64);
    }
    Ok(total)
}

fn check_phi(db: &ClassDatabase, opts: &VerifyOptions, report: &mut VerifyReport) -> Result<()> {
    let mut ok = true;
    let mut detail = String::new();
    'outer: for i in 0..db.class_count() {
        let code = db.code(i)?;
        let mut lower = wenum::cwe(&code, 0, opts.tuple_budget)?;
        for m in 1..=opts.phi_genus_max {
            let higher = match wenum::cwe(&code, m, opts.tuple_budget) {
                Ok(we) => we,
                Err(crate::error::Error::BudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            };
            if wenum::phi(&higher) != lower {
                ok = false;
                detail = format!("class {i}, genus {m}");
                break 'outer;
            }
            lower = higher;
        }
    }
    if ok {
        detail = format!("{} classes up to genus {}", db.class_count(), opts.phi_genus_max);
    }
    report.push("genus-lowering", ok, detail);
    Ok(())
}

fn check_cwe_invariance(
    db: &ClassDatabase,
    opts: &VerifyOptions,
    report: &mut VerifyReport,
) -> Result<()> {
    let mut rng = SplitMix64::new(opts.rng_seed ^ 0x9e37);
    let mut ok = true;
    let mut detail = String::new();
    'outer: for i in 0..db.class_count() {
        let code = db.code(i)?;
        for m in 1..=opts.phi_genus_max.min(2) {
            let base = match wenum::cwe(&code, m, opts.tuple_budget) {
                Ok(we) => we,
                Err(crate::error::Error::BudgetExceeded { .. }) => break,
                Err(e) => return Err(e),
            };
            for _ in 0..3 {
                let p = rng.random_perm(db.length);
                let permuted = code.permuted(&p);
                if wenum::cwe(&permuted, m, opts.tuple_budget)? != base {
                    ok = false;
                    detail = format!("class {i}, genus {m}");
                    break 'outer;
                }
            }
        }
    }
    if ok {
        detail = "permuted representatives give identical enumerators".into();
    }
    report.push("enumerator-invariance", ok, detail);
    Ok(())
}

fn check_mass(
    db: &ClassDatabase,
    fam: &dyn TypeFamily,
    report: &mut VerifyReport,
) -> Result<()> {
    match crate::enumerate::all_in_family(fam, db.length) {
        Ok(all) => {
            let mass = db.mass();
            let ok = mass == all.len() as u128;
            report.push(
                "mass-identity",
                ok,
                format!("sum N!/|Aut| = {mass}, exhaustive count = {}", all.len()),
            );
        }
        Err(crate::error::Error::BudgetExceeded { .. }) => {
            report.push(
                "mass-identity",
                true,
                "skipped: length beyond the exhaustive enumeration guard".into(),
            );
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn check_filtration_agreement(
    db: &ClassDatabase,
    spec: &hecke::Spectrum,
    m_max: usize,
    budget: u64,
    report: &mut VerifyReport,
) -> Result<()> {
    match wenum::filtration_dims(db, m_max, budget) {
        Ok(dims) => {
            let y = spec.y_dims()?;
            let mut ok = dims[0] == 1;
            for m in 0..=m_max {
                let drop = if m == 0 { dims[0] } else { dims[m] - dims[m - 1] };
                if y.get(m).copied().unwrap_or(0) != drop {
                    ok = false;
                }
            }
            report.push(
                "filtration-vs-spectrum",
                ok,
                format!("enumerator span dims {dims:?} vs eigenspace dims {y:?}"),
            );
        }
        Err(crate::error::Error::BudgetExceeded { needed, budget }) => {
            report.push(
                "filtration-vs-spectrum",
                true,
                format!("skipped: {needed} tuples exceed the budget {budget}"),
            );
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

/// Convenience: `sum_{classes} N!/|Aut|` as an exact rational (used in
/// summaries).
pub fn mass_rational(db: &ClassDatabase) -> BigRational {
    rat_u128(db.mass())
}

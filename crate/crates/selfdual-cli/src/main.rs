//! Command line front end: classify a family of self-dual codes, build the
//! neighbor operator, verify its exact spectrum, and render the summary
//! tables from the persisted artifacts.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use selfdual::hecke;
use selfdual::neighbor::{classify, ClassifyOptions};
use selfdual::types;
use selfdual::verify::{run_suite, VerifyOptions};
use selfdual::wenum;
use selfdual::{Code, ClassDatabase};

mod report;

use report::SpectrumFile;

#[derive(Parser)]
#[command(
    name = "selfdual",
    version,
    about = "Classify self-dual codes by the neighbor method and verify the exact spectrum of the neighbor operator"
)]
struct Cli {
    /// Worker threads for the parallel phases (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory for JSON artifacts (defaults to SELFDUAL_OUT_DIR
    /// or the current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FamilyArgs {
    /// Family name: 2eI, 2eII, qE:q=3, qE1:q=3, qH:q=4, qH1:q=4, ...
    #[arg(long = "type", value_name = "NAME")]
    type_name: String,

    /// Code length N (even).
    #[arg(long)]
    length: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all equivalence classes of the family by neighbor closure
    /// and persist them.
    Classify {
        #[command(flatten)]
        family: FamilyArgs,

        /// Start from this serialized code instead of the built-in seed.
        #[arg(long)]
        seed_file: Option<PathBuf>,

        /// Enumerate every codimension-1 subspace instead of reducing to
        /// Aut-orbits (slow reference path).
        #[arg(long)]
        no_aut_orbits: bool,

        /// Compare the class masses against exhaustive enumeration
        /// (tiny lengths only).
        #[arg(long)]
        verify_mass: bool,

        /// Run beyond the default per-family length caps.
        #[arg(long)]
        force: bool,
    },

    /// Build the neighbor operator from a classification, verify its exact
    /// spectral decomposition, and persist the spectrum.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,

        /// Also build the depth-k operator and report whether it is an
        /// exact polynomial in the depth-1 operator.
        #[arg(long)]
        k: Option<usize>,

        /// Subspace budget for the depth-k recomputation.
        #[arg(long, default_value_t = 1 << 22)]
        budget: u128,
    },

    /// Cumulative eigenspace dimensions (the genus-m enumerator span
    /// dimensions) across a range of lengths, from persisted spectra.
    Molien {
        /// Family name.
        #[arg(long = "type", value_name = "NAME")]
        type_name: String,

        /// Lengths, e.g. 2..24 (inclusive, step 2) or a comma list.
        #[arg(long)]
        lengths: String,

        /// Largest genus column to print.
        #[arg(long, default_value_t = 11)]
        m_max: usize,

        /// Cross-check against independently computed enumerator ranks
        /// where the genus budget allows.
        #[arg(long)]
        crosscheck: bool,

        /// Tuple enumeration budget for the cross-check.
        #[arg(long, default_value_t = 1 << 26)]
        budget: u64,
    },

    /// Genus-m complete weight enumerators of the classified codes.
    Cwe {
        #[command(flatten)]
        family: FamilyArgs,

        /// Genus.
        #[arg(long, default_value_t = 1)]
        genus: usize,

        /// Tuple enumeration budget.
        #[arg(long, default_value_t = 1 << 26)]
        budget: u64,
    },

    /// Run the full invariant suite on a family at one length.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,

        /// Tuple enumeration budget.
        #[arg(long, default_value_t = 1 << 26)]
        budget: u64,

        /// Compare the class masses against exhaustive enumeration.
        #[arg(long)]
        verify_mass: bool,

        /// Random admissible tuples per class and genus.
        #[arg(long, default_value_t = 50)]
        samples: usize,

        /// Run beyond the default per-family length caps.
        #[arg(long)]
        force: bool,
    },
}

fn main() -> Result<()> {
    // die quietly when a downstream pipe closes
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("setting up the thread pool")?;
    }
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("SELFDUAL_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    match cli.command {
        Command::Classify { family, seed_file, no_aut_orbits, verify_mass, force } => {
            cmd_classify(&out_dir, &family, seed_file.as_deref(), no_aut_orbits, verify_mass, force)
        }
        Command::Spectrum { family, k, budget } => cmd_spectrum(&out_dir, &family, k, budget),
        Command::Molien { type_name, lengths, m_max, crosscheck, budget } => {
            cmd_molien(&out_dir, &type_name, &lengths, m_max, crosscheck, budget)
        }
        Command::Cwe { family, genus, budget } => cmd_cwe(&out_dir, &family, genus, budget),
        Command::Verify { family, budget, verify_mass, samples, force } => {
            cmd_verify(&out_dir, &family, budget, verify_mass, samples, force)
        }
    }
}

/// Default per-family length caps; big runs stay opt-in.
fn length_cap(name: &str) -> usize {
    match name {
        "2eI" | "2eII" => 24,
        _ => 12,
    }
}

fn sanitize(name: &str) -> String {
    name.replace([':', '='], "_")
}

fn classes_path(out: &Path, family: &str, len: usize) -> PathBuf {
    out.join(format!("classes-{}-N{}.json", sanitize(family), len))
}

fn spectrum_path(out: &Path, family: &str, len: usize) -> PathBuf {
    out.join(format!("spectrum-{}-N{}.json", sanitize(family), len))
}

fn resolve_family(args: &FamilyArgs) -> Result<std::sync::Arc<dyn types::TypeFamily>> {
    Ok(types::lookup(&args.type_name)?)
}

fn check_cap(fam: &dyn types::TypeFamily, len: usize, force: bool) -> Result<()> {
    let cap = length_cap(&fam.name());
    if len > cap && !force {
        bail!(
            "length {len} exceeds the default cap {cap} for {}; pass --force to run anyway",
            fam.name()
        );
    }
    Ok(())
}

fn cmd_classify(
    out: &Path,
    args: &FamilyArgs,
    seed_file: Option<&Path>,
    no_aut_orbits: bool,
    verify_mass: bool,
    force: bool,
) -> Result<()> {
    let fam = resolve_family(args)?;
    check_cap(fam.as_ref(), args.length, force)?;
    let seed = match seed_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading seed file {}", path.display()))?;
            let repr: selfdual::CodeRepr = serde_json::from_str(&text)?;
            Some(Code::from_repr(&repr)?)
        }
        None => None,
    };
    let opts = ClassifyOptions { aut_orbit_reduction: !no_aut_orbits, ..Default::default() };
    let started = std::time::Instant::now();
    let db = classify(fam.as_ref(), args.length, seed, &opts)?;
    let elapsed = started.elapsed();

    let path = classes_path(out, &db.family, db.length);
    db.save(&path)?;

    println!("family {} length {}: {} classes ({elapsed:?})", db.family, db.length, db.class_count());
    println!("aut orders: {}", db.classes.iter().map(|c| c.aut_order.to_string()).collect::<Vec<_>>().join(" "));
    println!("mass sum N!/|Aut|: {}", db.mass());
    if verify_mass {
        match selfdual::enumerate::all_in_family(fam.as_ref(), args.length) {
            Ok(all) => {
                if all.len() as u128 == db.mass() {
                    println!("mass check: OK ({} codes)", all.len());
                } else {
                    bail!("mass check FAILED: exhaustive count {} != mass {}", all.len(), db.mass());
                }
            }
            Err(selfdual::Error::BudgetExceeded { .. }) => {
                println!("mass check: skipped (length beyond the exhaustive enumeration guard)");
            }
            Err(e) => return Err(e.into()),
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_spectrum(out: &Path, args: &FamilyArgs, k: Option<usize>, budget: u128) -> Result<()> {
    let fam = resolve_family(args)?;
    let cls = classes_path(out, &fam.name(), args.length);
    let db = ClassDatabase::load(&cls)
        .with_context(|| format!("loading {} (run `classify` first)", cls.display()))?;

    let t = hecke::hecke_matrix(&db, 1, budget)?;

    // exact structural checks; any failure exits nonzero
    let sa = hecke::check_self_adjoint(&t, &db);
    if !sa.ok {
        bail!("self-adjointness violated at pairs {:?}", sa.violations);
    }
    let alpha0 = fam.alpha(0, db.n())?;
    for c in 0..t.dim {
        let sum = BigRational::from_integer(t.column_sum(c).into());
        if sum != alpha0 {
            bail!("column {c} sums to {sum}, expected alpha_0 = {alpha0}");
        }
    }
    let spec = hecke::spectrum(&t, fam.as_ref(), &db)?;
    let dims = spec.y_dims_trimmed()?;
    println!(
        "family {} length {}: {} classes, eigenspace dims {}",
        db.family,
        db.length,
        db.class_count(),
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")
    );
    if spec.merged {
        println!("warning: coinciding predicted eigenvalues were merged");
    }

    let mut file = SpectrumFile::new(&db, &t, &spec, fam.as_ref())?;

    if let Some(k) = k {
        let tk = hecke::hecke_matrix(&db, k, budget)?;
        let sak = hecke::check_self_adjoint(&tk, &db);
        if !sak.ok {
            bail!("depth-{k} operator fails self-adjointness at {:?}", sak.violations);
        }
        let relation = hecke::polynomial_relation(&tk, &t)?;
        match &relation {
            Some(coeffs) => println!(
                "T_{k} = polynomial in T of degree {} (coefficients {})",
                coeffs.len().saturating_sub(1),
                coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
            ),
            None => println!("T_{k}: no exact polynomial relation in T found"),
        }
        file.set_depth_k(k, &tk, relation);
    }

    let path = spectrum_path(out, &db.family, db.length);
    file.save(&path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn parse_lengths(spec: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a.trim().parse().context("range start")?;
        let b: usize = b.trim().parse().context("range end")?;
        return Ok((a..=b).filter(|l| l % 2 == 0).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(Into::into))
        .collect()
}

fn cmd_molien(
    out: &Path,
    type_name: &str,
    lengths: &str,
    m_max: usize,
    crosscheck: bool,
    budget: u64,
) -> Result<()> {
    let fam = types::lookup(type_name)?;
    let lengths = parse_lengths(lengths)?;
    println!("cumulative genus-space dimensions for {}", fam.name());
    let mut header = String::from("   N |");
    for m in 1..=m_max {
        header.push_str(&format!(" m={m:<4}"));
    }
    println!("{header}");
    for &len in &lengths {
        let path = spectrum_path(out, &fam.name(), len);
        let file = SpectrumFile::load(&path)
            .with_context(|| format!("loading {} (run `spectrum` first)", path.display()))?;
        let dims = file.y_dims;
        let mut row = format!("{len:>4} |");
        for m in 1..=m_max {
            let a: usize = dims.iter().take(m + 1).sum();
            row.push_str(&format!(" {a:<5}"));
        }
        println!("{row}");
        if crosscheck {
            let cls = classes_path(out, &fam.name(), len);
            let db = ClassDatabase::load(&cls)?;
            let genus_cap = m_max.min(3);
            match wenum::filtration_dims(&db, genus_cap, budget) {
                Ok(direct) => {
                    for (m, &d) in direct.iter().enumerate() {
                        let a: usize = dims.iter().take(m + 1).sum();
                        if d != a {
                            bail!(
                                "N={len} genus {m}: enumerator span dimension {d} != cumulative eigenspace dimension {a}"
                            );
                        }
                    }
                    println!("      cross-check up to genus {}: OK", direct.len() - 1);
                }
                Err(selfdual::Error::BudgetExceeded { .. }) => {
                    println!("      cross-check skipped (budget)");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}

fn cmd_cwe(out: &Path, args: &FamilyArgs, genus: usize, budget: u64) -> Result<()> {
    let fam = resolve_family(args)?;
    let cls = classes_path(out, &fam.name(), args.length);
    let db = ClassDatabase::load(&cls)
        .with_context(|| format!("loading {} (run `classify` first)", cls.display()))?;
    let q = fam.field().q();
    for i in 0..db.class_count() {
        let code = db.code(i)?;
        let we = wenum::cwe(&code, genus, budget)?;
        println!("class {i} (|Aut| = {}):", db.classes[i].aut_order);
        if genus <= 2 {
            println!("  {}", report::render_enumerator(&we, q));
        } else {
            println!("  {} monomials, mass {}", we.terms.len(), we.coefficient_mass());
        }
    }
    Ok(())
}

fn cmd_verify(
    out: &Path,
    args: &FamilyArgs,
    budget: u64,
    verify_mass: bool,
    samples: usize,
    force: bool,
) -> Result<()> {
    let fam = resolve_family(args)?;
    check_cap(fam.as_ref(), args.length, force)?;
    // reuse a stored classification when present, otherwise compute
    let cls = classes_path(out, &fam.name(), args.length);
    let db = if cls.exists() {
        ClassDatabase::load(&cls)?
    } else {
        classify(fam.as_ref(), args.length, None, &ClassifyOptions::default())?
    };
    let opts = VerifyOptions {
        star_samples: samples,
        tuple_budget: budget,
        verify_mass,
        filtration_genus_max: Some(2),
        ..Default::default()
    };
    let report = run_suite(&db, &opts)?;
    let mut failed = false;
    for check in &report.checks {
        println!("{} {:<24} {}", if check.pass { "PASS" } else { "FAIL" }, check.name, check.detail);
        failed |= !check.pass;
    }
    if failed {
        bail!("verification failed");
    }
    Ok(())
}

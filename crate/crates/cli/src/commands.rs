//! Implementations of the four subcommands.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use permfree::conditions::{
    all_satisfied, c_statistic, certify_family, j_statistic, GrowthReport, Hypothesis,
    SchemeSpec, Verdict,
};
use permfree::gaussian::{mc_moment, MomentEstimate};
use permfree::pairings::free_limit_prediction;
use permfree::perm::tensor_perm;
use permfree::schemes::{composed_scheme, SchemeKind, SchemeRegistry};
use permfree::wick::{asymptotic_check, exact_moment, ExactMoment, DEFAULT_BUDGET};
use permfree::word::MomentWord;
use permfree::{EntryPermutation, LinePerm};

use crate::specs;

pub enum CliError {
    Usage(String),
    Budget(String),
}

impl From<permfree::Error> for CliError {
    fn from(e: permfree::Error) -> Self {
        match e {
            permfree::Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<String> for CliError {
    fn from(m: String) -> Self {
        CliError::Usage(m)
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_certify(schemes: &str, grid: &str, out: Option<&Path>) -> Result<i32, CliError> {
    let mut registry = SchemeRegistry::with_builtins();
    let specs = specs::parse_scheme_specs(&mut registry, schemes)?;
    let grid = specs::parse_grid(grid)?;
    let reports = match certify_family(&specs, &grid) {
        Ok(reports) => reports,
        Err(e @ permfree::Error::SymmetryViolation { .. }) => {
            // A failed symmetry declaration is itself a certified violation.
            eprintln!("violation: {e}");
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let report = json!({
        "command": "certify",
        "schemes": specs.iter().map(|s| json!({
            "label": s.scheme.label(),
            "kind": s.kind,
        })).collect::<Vec<_>>(),
        "grid": grid,
        "hypotheses": reports,
    });
    emit(out, &serde_json::to_string_pretty(&report).unwrap())?;
    Ok(if all_satisfied(&reports) { 0 } else { 1 })
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub struct MomentArgs<'a> {
    pub word: &'a str,
    pub sides: Vec<usize>,
    pub exact: bool,
    pub mc: bool,
    pub samples: usize,
    pub seed: u64,
    pub budget: u64,
    pub format: Format,
    pub out: Option<&'a Path>,
}

pub fn cmd_moment(args: MomentArgs<'_>) -> Result<i32, CliError> {
    if !args.exact && !args.mc {
        return Err(CliError::Usage(
            "nothing to do: pass --exact and/or --mc".into(),
        ));
    }
    let mut registry = SchemeRegistry::with_builtins();
    let word = specs::parse_scheme_word(&mut registry, args.word)?;
    let prediction = if word.is_constant_free() {
        word.signature(&BTreeMap::new())
            .ok()
            .map(|sig| free_limit_prediction(&sig))
            .transpose()?
    } else {
        None
    };

    struct Row {
        side: usize,
        exact: Option<ExactMoment>,
        mc: Option<MomentEstimate>,
    }
    let mut rows = Vec::new();
    for &side in &args.sides {
        let exact = if args.exact {
            Some(exact_moment(&word.to_perms(&registry, side)?, args.budget)?)
        } else {
            None
        };
        let mc = if args.mc {
            Some(mc_moment(&word, &registry, side, args.samples, args.seed)?)
        } else {
            None
        };
        rows.push(Row { side, exact, mc });
    }

    let labels = word.labels();
    let text = match args.format {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "N": r.side,
                        "exact": r.exact.as_ref().map(|e| e.value.to_string()),
                        "exact_float": r.exact.as_ref().map(|e| e.value_f64()),
                        "mc": r.mc.as_ref().map(|m| json!({
                            "samples": m.samples,
                            "mean_re": m.mean.re,
                            "mean_im": m.mean.im,
                            "stderr_re": m.stderr_re,
                            "stderr_im": m.stderr_im,
                        })),
                        "prediction": prediction,
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({
                "command": "moment",
                "word": labels,
                "samples": args.mc.then_some(args.samples),
                "seed": args.mc.then_some(args.seed),
                "budget": args.budget,
                "rows": rows,
            }))
            .unwrap()
        }
        Format::Csv => {
            let mut text =
                String::from("N,samples,mean_re,mean_im,stderr_re,stderr_im,exact,prediction,seed\n");
            for r in &rows {
                let (samples, mean_re, mean_im, se_re, se_im, seed) = match &r.mc {
                    Some(m) => (
                        m.samples.to_string(),
                        m.mean.re.to_string(),
                        m.mean.im.to_string(),
                        m.stderr_re.to_string(),
                        m.stderr_im.to_string(),
                        m.seed.to_string(),
                    ),
                    None => Default::default(),
                };
                text.push_str(&format!(
                    "{},{samples},{mean_re},{mean_im},{se_re},{se_im},{},{},{seed}\n",
                    r.side,
                    r.exact.as_ref().map(|e| e.value.to_string()).unwrap_or_default(),
                    prediction.map(|p| p.to_string()).unwrap_or_default(),
                ));
            }
            text
        }
        Format::Text => {
            let mut text = format!("word: {}\n", labels.join(","));
            if let Some(p) = prediction {
                text.push_str(&format!("limit prediction: {p}\n"));
            }
            text.push_str(&format!("{:>6}  {:<18} {:<12} {}\n", "N", "exact", "exact~", "monte-carlo"));
            for r in &rows {
                let exact = r
                    .exact
                    .as_ref()
                    .map(|e| (e.value.to_string(), format!("{:.6}", e.value_f64())))
                    .unwrap_or_default();
                let mc = r
                    .mc
                    .as_ref()
                    .map(|m| {
                        format!(
                            "{:.6} ± {:.6} (im {:.6} ± {:.6}, {} samples)",
                            m.mean.re, m.stderr_re, m.mean.im, m.stderr_im, m.samples
                        )
                    })
                    .unwrap_or_default();
                text.push_str(&format!("{:>6}  {:<18} {:<12} {}\n", r.side, exact.0, exact.1, mc));
            }
            text.trim_end().to_string()
        }
    };
    emit(args.out, &text)?;
    Ok(0)
}

pub fn cmd_predict(word: &str, kinds: Option<&str>) -> Result<i32, CliError> {
    let letters = specs::parse_abstract_word(word)?;
    let kinds = kinds.map(specs::parse_kinds).transpose()?.unwrap_or_default();
    let letters = letters
        .into_iter()
        .map(|(label, star)| {
            let kind = kinds
                .get(&label)
                .copied()
                .or_else(|| SchemeRegistry::default_kind(&label))
                .ok_or_else(|| format!("no kind declared for `{label}` (use --kinds)"))?;
            Ok((label, star, kind.into()))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let sig = permfree::pairings::WordSignature::new(&letters).map_err(CliError::from)?;
    println!("{}", free_limit_prediction(&sig).map_err(CliError::from)?);
    Ok(0)
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Bundle {
    /// Identity / partial transpose / mixing map family.
    Trio,
    /// Quadrant-shift pair: pairwise condition holds, per-scheme fails,
    /// limits are not free.
    Remark41,
    /// Column shear against the identity: per-scheme condition holds,
    /// pairwise fails, limits are free anyway.
    Remark42,
    /// Tensor-product families and their transposes.
    TransposeTensor,
}

struct Checks {
    failures: usize,
}

impl Checks {
    fn new() -> Self {
        Checks { failures: 0 }
    }

    fn record(&mut self, name: &str, pass: bool, detail: String) {
        if pass {
            println!("[ ok ] {name}: {detail}");
        } else {
            self.failures += 1;
            println!("[FAIL] {name}: {detail}");
        }
    }

    fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }
}

fn mc_against_exact(
    checks: &mut Checks,
    registry: &mut SchemeRegistry,
    word_text: &str,
    side: usize,
    samples: usize,
    seed: u64,
) -> Result<(), CliError> {
    let word = specs::parse_scheme_word(registry, word_text)?;
    let exact = exact_moment(&word.to_perms(registry, side)?, DEFAULT_BUDGET)?;
    let est = mc_moment(&word, registry, side, samples, seed)?;
    let exact_f = exact.value_f64();
    let gap = (est.mean.re - exact_f).abs();
    let tol = 5.0 * est.stderr_re;
    checks.record(
        &format!("mc-vs-exact {word_text} at N={side}"),
        gap <= tol && est.mean.im.abs() <= 5.0 * est.stderr_im,
        format!(
            "exact {} ≈ {exact_f:.6}, mc {:.6} ± {:.6}, gap {gap:.2e} (tol {tol:.2e})",
            exact.value, est.mean.re, est.stderr_re
        ),
    );
    Ok(())
}

fn certify_and_report(
    checks: &mut Checks,
    name: &str,
    specs: &[SchemeSpec],
    grid: &[usize],
    expect_all_satisfied: bool,
) -> Result<Vec<GrowthReport>, CliError> {
    let reports = certify_family(specs, grid)?;
    for r in &reports {
        let labels = r.labels.join(",");
        let exponent = r
            .exponent
            .map(|e| format!("{e:.3}"))
            .unwrap_or_else(|| "-inf".into());
        println!(
            "       {name}: {:?} [{labels}] exponent {exponent} -> {:?}",
            r.kind, r.verdict
        );
    }
    if expect_all_satisfied {
        checks.record(
            &format!("{name} certification"),
            all_satisfied(&reports),
            "expected every hypothesis to be satisfied".into(),
        );
    }
    Ok(reports)
}

pub fn cmd_reproduce(
    bundle: Bundle,
    samples: Option<usize>,
    seed: u64,
) -> Result<i32, CliError> {
    let mut checks = Checks::new();
    match bundle {
        Bundle::Trio => reproduce_trio(&mut checks, samples.unwrap_or(4000), seed)?,
        Bundle::Remark41 => reproduce_quadrant_pair(&mut checks, samples.unwrap_or(10_000), seed)?,
        Bundle::Remark42 => reproduce_shear(&mut checks)?,
        Bundle::TransposeTensor => {
            reproduce_transpose_tensor(&mut checks, samples.unwrap_or(4000), seed)?
        }
    }
    println!(
        "{} checks failed",
        if checks.failures == 0 {
            "no".to_string()
        } else {
            checks.failures.to_string()
        }
    );
    Ok(checks.exit_code())
}

fn reproduce_trio(checks: &mut Checks, samples: usize, seed: u64) -> Result<(), CliError> {
    let mut registry = SchemeRegistry::with_builtins();
    let specs = specs::parse_scheme_specs(&mut registry, "id:sym,gamma:sym,mix:jsmall")?;
    certify_and_report(checks, "trio", &specs, &[4, 9, 16, 25], true)?;
    for word in ["gamma,gamma", "id,gamma,id,gamma", "mix,mix*,mix,mix*"] {
        mc_against_exact(checks, &mut registry, word, 16, samples, seed)?;
    }
    Ok(())
}

fn reproduce_quadrant_pair(
    checks: &mut Checks,
    samples: usize,
    seed: u64,
) -> Result<(), CliError> {
    let mut registry = SchemeRegistry::with_builtins();
    let side = 256;
    let mut estimate = |word_text: &str| -> Result<MomentEstimate, CliError> {
        let word = specs::parse_scheme_word(&mut registry, word_text)?;
        Ok(mc_moment(&word, &registry, side, samples, seed)?)
    };
    let within = |est: &MomentEstimate, target: f64| -> (bool, String) {
        let tol = (5.0 * est.stderr_re).max(0.05);
        let gap = (est.mean.re - target).abs();
        (
            gap <= tol,
            format!("mc {:.6} vs {target} (gap {gap:.4}, tol {tol:.4})", est.mean.re),
        )
    };

    let aa = estimate("mu1,mu1")?;
    let (ok, detail) = within(&aa, 0.75);
    checks.record("tr(A²) -> 3/4", ok, detail);

    let bb = estimate("mu2,mu2")?;
    let (ok, detail) = within(&bb, 0.75);
    checks.record("tr(B²) -> 3/4", ok, detail);

    let aabb = estimate("mu1,mu1,mu2,mu2")?;
    let (ok, detail) = within(&aabb, 0.625);
    checks.record("tr(A²B²) -> 5/8", ok, detail);

    let azat = estimate("mu1,Z,mu1,T")?;
    let (ok, detail) = within(&azat, 0.25);
    checks.record("tr(AZAT) -> 1/4", ok, detail);

    // If the pair were asymptotically free, tr(A²B²) would factorize as
    // tr(A²)·tr(B²); the measured gap must beat the propagated error.
    let product = aa.mean.re * bb.mean.re;
    let gap = (aabb.mean.re - product).abs();
    let combined = 5.0
        * (aabb.stderr_re + bb.mean.re.abs() * aa.stderr_re + aa.mean.re.abs() * bb.stderr_re);
    checks.record(
        "non-freeness witness",
        gap > combined,
        format!(
            "|tr(A²B²) − tr(A²)tr(B²)| = {gap:.4} > combined tolerance {combined:.4} \
             (5/8 − 9/16 = 0.0625)"
        ),
    );
    Ok(())
}

fn reproduce_shear(checks: &mut Checks) -> Result<(), CliError> {
    let mut registry = SchemeRegistry::with_builtins();
    let specs = specs::parse_scheme_specs(&mut registry, "id:sym,tau:jsmall")?;
    let reports = certify_and_report(checks, "shear", &specs, &[8, 16, 32], false)?;
    for r in &reports {
        match r.kind {
            Hypothesis::SelfCollision => checks.record(
                "shear self-collision stays small",
                r.verdict == Verdict::Satisfies,
                format!("verdict {:?}", r.verdict),
            ),
            Hypothesis::PairCollision => {
                let counts_large = r
                    .grid
                    .iter()
                    .all(|p| p.count >= (p.side * p.side) as u64);
                checks.record(
                    "pairwise condition fails against the identity",
                    r.verdict == Verdict::Violates && counts_large,
                    format!("verdict {:?}, counts ≥ N² at every side: {counts_large}", r.verdict),
                );
            }
            Hypothesis::Symmetry => {}
        }
    }

    // The limits are free regardless: the alternating word's exact moments
    // still approach the vanished prediction.
    let word = specs::parse_scheme_word(&mut registry, "id,tau,id,tau*")?;
    let report = asymptotic_check(
        &word,
        &registry,
        &BTreeMap::new(),
        &[4, 8, 16],
        DEFAULT_BUDGET,
    )?;
    let decreasing = report.rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let last = report.rows.last().unwrap();
    checks.record(
        "alternating word tends to the free prediction",
        report.prediction == 0 && decreasing && last.gap <= 0.05,
        format!(
            "prediction {}, gaps {:?}",
            report.prediction,
            report.rows.iter().map(|r| r.gap).collect::<Vec<_>>()
        ),
    );
    Ok(())
}

fn reproduce_transpose_tensor(
    checks: &mut Checks,
    samples: usize,
    seed: u64,
) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut ok = true;
    for _ in 0..5 {
        let phi = LinePerm::random(4, &mut rng);
        let psi = LinePerm::random(4, &mut rng);
        let fwd = tensor_perm(&phi, &psi).map_err(CliError::from)?;
        let swapped = tensor_perm(&psi, &phi).map_err(CliError::from)?;
        ok &= fwd.conjugate_by_t() == swapped;
    }
    checks.record(
        "adjoint of a tensor permutation swaps its factors",
        ok,
        "t∘(φ⊗ψ)∘t = ψ⊗φ on 5 random pairs at N=4".into(),
    );

    let mut ok = true;
    for trial in 0..20 {
        let n = 3 + trial % 4;
        let (p1, s1) = (LinePerm::random(n, &mut rng), LinePerm::random(n, &mut rng));
        let (p2, s2) = (LinePerm::random(n, &mut rng), LinePerm::random(n, &mut rng));
        let a = tensor_perm(&p1, &s1).map_err(CliError::from)?;
        let b = tensor_perm(&p2, &s2).map_err(CliError::from)?;
        let j = j_statistic(&a, &b).map_err(CliError::from)?;
        ok &= j == n as u64 * c_statistic(&s1, &p2).map_err(CliError::from)?;
    }
    checks.record(
        "tensor collision statistic reduces to fixed points",
        ok,
        "j(φ₁⊗ψ₁ : φ₂⊗ψ₂) = N·c(ψ₁,φ₂) on 20 random tuples".into(),
    );

    let mut ok = true;
    for trial in 0..10 {
        let n = 3 + trial % 4;
        let t = EntryPermutation::transpose(n);
        let a = tensor_perm(&LinePerm::random(n, &mut rng), &LinePerm::random(n, &mut rng))
            .map_err(CliError::from)?;
        let b = tensor_perm(&LinePerm::random(n, &mut rng), &LinePerm::random(n, &mut rng))
            .map_err(CliError::from)?;
        ok &= j_statistic(&a, &t.compose(&b).map_err(CliError::from)?).map_err(CliError::from)?
            == n as u64;
        ok &= j_statistic(&a, &b.compose(&t).map_err(CliError::from)?).map_err(CliError::from)?
            == n as u64;
    }
    checks.record(
        "collisions against transposed tensors are linear",
        ok,
        "j(φ₁⊗ψ₁ : t∘(φ₂⊗ψ₂)) = j(φ₁⊗ψ₁ : (φ₂⊗ψ₂)∘t) = N on 10 random tuples".into(),
    );

    let mut registry = SchemeRegistry::with_builtins();
    let ten = specs::resolve_scheme(&mut registry, "tensor:cycle+cycle")?;
    let t = registry.get("t").map_err(CliError::from)?;
    let ten_t = registry.insert(composed_scheme(
        "tensor:cycle+cycle.t",
        Arc::clone(&ten),
        t,
    ));
    let specs_list = vec![
        SchemeSpec {
            scheme: registry.get("id").map_err(CliError::from)?,
            kind: SchemeKind::Symmetric,
        },
        SchemeSpec {
            scheme: ten,
            kind: SchemeKind::Symmetric,
        },
        SchemeSpec {
            scheme: registry.get("t").map_err(CliError::from)?,
            kind: SchemeKind::Symmetric,
        },
        SchemeSpec {
            scheme: ten_t,
            kind: SchemeKind::Symmetric,
        },
    ];
    certify_and_report(
        checks,
        "tensor family with transposes",
        &specs_list,
        &[8, 16, 32],
        true,
    )?;

    let word = specs::parse_scheme_word(&mut registry, "tensor:cycle+cycle,t,tensor:cycle+cycle,t")?;
    let kinds: BTreeMap<String, SchemeKind> =
        [("tensor:cycle+cycle".to_string(), SchemeKind::Symmetric)]
            .into_iter()
            .collect();
    let report = asymptotic_check(&word, &registry, &kinds, &[4, 8, 16, 32], DEFAULT_BUDGET)?;
    let decreasing = report.rows.windows(2).all(|w| w[1].gap < w[0].gap);
    let last = report.rows.last().unwrap();
    checks.record(
        "alternating tensor/transpose word tends to its prediction",
        report.prediction == 0 && decreasing && last.gap <= 0.05,
        format!(
            "prediction {}, values {:?}",
            report.prediction,
            report
                .rows
                .iter()
                .map(|r| r.value.to_f64().unwrap_or(f64::NAN))
                .collect::<Vec<_>>()
        ),
    );

    mc_against_exact(
        checks,
        &mut registry,
        "tensor:cycle+cycle,t,tensor:cycle+cycle,t",
        16,
        samples,
        seed,
    )?;
    Ok(())
}

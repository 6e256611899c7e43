use crate::args::{ArcArgs, BisectArgs, CheckArgs, Cli, DbarArgs, EntropyArgs, GenArgs};
use crate::error::CliError;
use serde_json::{json, Value};
use shiftarc::arc::{
    arc_csv, arc_sweep, bisect_entropy, parse_grid, sample_generic, select_alpha, AlphaPolicy, GenericSource, SpotCheck,
};
use shiftarc::entropy::{entropy_estimate_with_guard, lz_entropy_estimate};
use shiftarc::families::{
    bfree_characteristic, heredity_check, load_spec_file, safe_symbol_check, EnumerationBudget, ShiftFamilySpec,
    SpecFile,
};
use shiftarc::measures::{dbar_ladder, ladder_csv};
use shiftarc::report::{fmt_rational, manifest_hash, rational_to_f64, write_atomic, Manifest};
use shiftarc::sequence::{read_window, write_window, FixedFraction, Window};
use std::f64::consts::LN_2;
use std::path::{Path, PathBuf};

/// What a command reports back to `main`.
pub struct Done {
    pub code: i32,
    pub stdout: String,
}

impl Done {
    fn ok(stdout: String) -> Self {
        Done { code: 0, stdout }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn out_path(&self, explicit: &Option<PathBuf>, default_name: &str) -> PathBuf {
        explicit.clone().unwrap_or_else(|| self.cli.out_dir.join(default_name))
    }

    fn unit(&self) -> &'static str {
        if self.cli.bits {
            "bits"
        } else {
            "nats"
        }
    }

    /// Converts nats to the display unit.
    fn show(&self, nats: f64) -> f64 {
        if self.cli.bits {
            nats / LN_2
        } else {
            nats
        }
    }

    fn manifest(&self, command: &str) -> Manifest {
        Manifest::new(command).with("precision_bits", self.cli.precision_bits).with("entropy_unit", self.unit())
    }

    fn alpha(&self, policy: &str, manifest: &mut Manifest) -> Result<FixedFraction, CliError> {
        let policy: AlphaPolicy = policy.parse()?;
        let alpha = select_alpha(&policy, self.cli.precision_bits)?;
        manifest.set("alpha_policy", policy.to_string());
        manifest.set("alpha_hex", alpha.to_hex());
        Ok(alpha)
    }
}

/// Reads a window and records its path and content hash in the manifest.
fn input(path: &Path, key: &str, manifest: &mut Manifest) -> Result<Window, CliError> {
    let w = read_window(path)?;
    manifest.set(key, path.display().to_string());
    manifest.set(&format!("{key}_sha256"), manifest_hash(&write_window(&w, &[])));
    Ok(w)
}

/// Loads a spec file and records its path and normalized definition.
fn spec_input(path: &Path, manifest: &mut Manifest) -> Result<ShiftFamilySpec, CliError> {
    let spec = load_spec_file(path)?;
    manifest.set("spec", path.display().to_string());
    manifest.set("spec_definition", SpecFile::from_spec(&spec));
    Ok(spec)
}

/// Writes an output and its manifest next to it.
fn emit(path: &Path, body: &str, manifest: &Manifest) -> Result<(), CliError> {
    write_atomic(path, body.as_bytes())?;
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    write_atomic(&path.with_file_name(name), manifest.to_text().as_bytes())?;
    Ok(())
}

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("--range {text:?} is not lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
}

pub fn run(cli: &Cli) -> Result<Done, CliError> {
    let ctx = Ctx { cli };
    match &cli.command {
        crate::args::Command::Gen(a) => gen(&ctx, a),
        crate::args::Command::Arc(a) => arc(&ctx, a),
        crate::args::Command::Bisect(a) => bisect(&ctx, a),
        crate::args::Command::Check(a) => check(&ctx, a),
        crate::args::Command::Dbar(a) => dbar(&ctx, a),
        crate::args::Command::Entropy(a) => entropy(&ctx, a),
    }
}

fn gen(ctx: &Ctx, a: &GenArgs) -> Result<Done, CliError> {
    let mut manifest = ctx.manifest("gen");
    let window = if let Some(source) = &a.source {
        let source: GenericSource = source.parse()?;
        let seed = a.seed.ok_or_else(|| CliError::Usage("--seed is required when sampling a source".into()))?;
        let n = a.n.ok_or_else(|| CliError::Usage("--n is required when sampling a source".into()))?;
        manifest.set("source", source.to_string());
        manifest.set("seed", seed);
        manifest.set("n", n);
        sample_generic(&source, n, seed)?
    } else {
        let b = match (&a.family, &a.spec) {
            (Some(f), None) if f == "bfree" || f == "b-free" || f == "b_free" => a.b.clone(),
            (Some(f), None) => {
                return Err(CliError::Usage(format!("family {f:?} has no characteristic window; use bfree")))
            }
            (None, Some(path)) => match spec_input(path, &mut manifest)? {
                ShiftFamilySpec::BFree(b) => b,
                other => {
                    return Err(CliError::Usage(format!("spec family {} has no characteristic window", other.tag())))
                }
            },
            _ => return Err(CliError::Usage("one of --source, --family or --spec is required".into())),
        };
        let range = a.range.as_deref().ok_or_else(|| CliError::Usage("--range is required for a family".into()))?;
        let (lo, hi) = parse_range(range)?;
        manifest.set("family", "bfree");
        manifest.set("B", &b);
        manifest.set("range", [lo, hi]);
        bfree_characteristic(&b, lo, hi)?
    };
    let path = ctx.out_path(&a.out, "gen.win");
    manifest.set("out", path.display().to_string());
    let hash = manifest.hash();
    emit(&path, &write_window(&window, &[("manifest_sha256", &hash)]), &manifest)?;
    Ok(Done::ok(format!("{} symbols written to {}\n", window.len(), path.display())))
}

fn arc(ctx: &Ctx, a: &ArcArgs) -> Result<Done, CliError> {
    let mut manifest = ctx.manifest("arc");
    let x = input(&a.x, "x", &mut manifest)?;
    let alpha = ctx.alpha(&a.alpha, &mut manifest)?;
    let betas = parse_grid(&a.grid)?;
    let check = match &a.spec {
        Some(path) => Some(SpotCheck::new(spec_input(path, &mut manifest)?)),
        None => None,
    };
    if let Some(c) = &check {
        manifest.set("spot_check", json!({ "word_len": c.word_len, "samples": c.samples }));
    }
    manifest.set("grid", &a.grid);
    manifest.set("k", a.k);
    let mut samples = arc_sweep(&x, alpha, &betas, a.k, check.as_ref())?;
    for s in &mut samples {
        s.entropy_profile.chosen_estimate = ctx.show(s.entropy_profile.chosen_estimate);
    }
    let path = ctx.out_path(&a.out, "arc.csv");
    emit(&path, &arc_csv(&samples, Some(&manifest.hash())), &manifest)?;
    Ok(Done::ok(format!("{} rows written to {}\n", samples.len(), path.display())))
}

fn bisect(ctx: &Ctx, a: &BisectArgs) -> Result<Done, CliError> {
    let mut manifest = ctx.manifest("bisect");
    let x = input(&a.x, "x", &mut manifest)?;
    let alpha = ctx.alpha(&a.alpha, &mut manifest)?;
    for (key, v) in
        [("target", json!(a.target)), ("tol", json!(a.tol)), ("max_iter", json!(a.max_iter)), ("k", json!(a.k))]
    {
        manifest.set(key, v);
    }
    let scale = if ctx.cli.bits { LN_2 } else { 1.0 };
    let out = bisect_entropy(&x, alpha, a.target * scale, a.tol * scale, a.max_iter, a.k)?;
    let doc = json!({
        "beta_star": fmt_rational(&out.beta_star),
        "beta_star_value": rational_to_f64(&out.beta_star),
        "achieved": ctx.show(out.achieved),
        "iterations": out.iterations,
        "converged": out.converged,
        "manifest_sha256": manifest.hash(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    emit(&ctx.out_path(&a.out, "bisect.json"), &text, &manifest)?;
    Ok(Done { code: if out.converged { 0 } else { 4 }, stdout: text })
}

fn check(ctx: &Ctx, a: &CheckArgs) -> Result<Done, CliError> {
    let mut manifest = ctx.manifest("check");
    let spec = spec_input(&a.spec, &mut manifest)?;
    manifest.set("family", spec.tag());
    manifest.set("mode", &a.mode);
    manifest.set("max_len", a.max_len);
    manifest.set("budget", a.budget);
    let budget = EnumerationBudget(a.budget);
    let verdict = match a.mode.as_str() {
        "hereditary" => heredity_check(&spec, a.max_len, budget)?,
        mode => {
            let symbol = mode
                .strip_prefix("safe:")
                .and_then(|s| s.parse::<u8>().ok())
                .ok_or_else(|| CliError::Usage(format!("--mode {mode:?} is neither hereditary nor safe:<symbol>")))?;
            safe_symbol_check(&spec, symbol, a.max_len, budget)?
        }
    };
    let witness = verdict.witness.as_ref().map(|(w, v)| json!([w.to_string(), v.to_string()])).unwrap_or(Value::Null);
    let doc = json!({
        "holds": verdict.holds,
        "witness": witness,
        "mode": a.mode,
        "max_len": a.max_len,
        "manifest_sha256": manifest.hash(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("json") + "\n";
    emit(&ctx.out_path(&a.out, "check.json"), &text, &manifest)?;
    Ok(Done { code: if verdict.holds { 0 } else { 1 }, stdout: text })
}

fn dbar(ctx: &Ctx, a: &DbarArgs) -> Result<Done, CliError> {
    let mut manifest = ctx.manifest("dbar");
    let x = input(&a.x, "x", &mut manifest)?;
    let y = input(&a.y, "y", &mut manifest)?;
    manifest.set("ks", &a.ks);
    let ladder = dbar_ladder(&x, &y, &a.ks)?;
    let csv = ladder_csv(&ladder, Some(&manifest.hash()));
    emit(&ctx.out_path(&a.out, "dbar.csv"), &csv, &manifest)?;
    Ok(Done::ok(csv))
}

fn entropy(ctx: &Ctx, a: &EntropyArgs) -> Result<Done, CliError> {
    let mut manifest = ctx.manifest("entropy");
    let x = input(&a.x, "x", &mut manifest)?;
    manifest.set("k", a.k);
    manifest.set("adequacy", a.adequacy);
    manifest.set("lz", a.lz);
    let mut profile = entropy_estimate_with_guard(&x, a.k, a.adequacy)?;
    let lz = if a.lz { Some(ctx.show(lz_entropy_estimate(&x)?)) } else { None };
    for v in profile.block_entropies.iter_mut().chain(profile.conditional.iter_mut()) {
        *v = ctx.show(*v);
    }
    profile.chosen_estimate = ctx.show(profile.chosen_estimate);
    let hash = manifest.hash();
    emit(&ctx.out_path(&a.out, "entropy.csv"), &profile.to_csv(Some(&hash)), &manifest)?;
    let doc = json!({
        "entropy": profile.chosen_estimate,
        "unit": ctx.unit(),
        "method": profile.method,
        "k": a.k,
        "lz": lz,
        "manifest_sha256": hash,
    });
    Ok(Done::ok(serde_json::to_string_pretty(&doc).expect("json") + "\n"))
}

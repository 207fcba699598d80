use std::fs;
use std::path::PathBuf;

use eclift::emit::{
    write_json, write_mult_group_svg, write_obj, write_ply, write_points_obj, write_real_locus_svg,
    write_svg, FdScene, LatticeRecord,
};
use eclift::frobcheck::verify_phi_reduction;
use eclift::hopfmap::{generate_mesh, map_scene, Rotation, TwistVariant};
use eclift::lift::{
    build_lift_report_limited, embedding_class, embedding_ctx, level_context, mult_group_points,
    real_locus, scene_metadata, EmbedOptions, LiftError, MAX_N,
};
use eclift::selftest::run_all;
use eclift::spherecurve::SphereCurveError;
use eclift::weierstrass::{oracle_limit_from_env, validate_curve, CurveParams};
use num_complex::Complex64;
use serde_json::json;

use crate::config::{parse_curve, parse_pair, parse_quad, pick, Config};
use crate::{domain, Cli, CliError, Command, CurveArgs, TwistArg};

const MIN_NT: usize = 8;

/// Largest k tried when the default wobble count hits a pole.
const MAX_AUTO_K: u32 = 16;

struct Env {
    cfg: Config,
    out: Option<PathBuf>,
    limit: u64,
}

impl Env {
    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let dir = self.out_dir();
        fs::create_dir_all(&dir)
            .map_err(|e| CliError::Domain(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::Domain(format!("cannot write {}: {e}", path.display())))?;
        println!("{}", path.display());
        Ok(path)
    }

    fn curve(&self, args: &CurveArgs) -> Result<CurveParams, CliError> {
        let (a, b) = if let Some(eq) = &args.curve {
            parse_curve(eq)?
        } else if args.a.is_some() || args.b.is_some() {
            (
                pick(args.a, &self.cfg, "a")?.ok_or_else(|| missing("-a"))?,
                pick(args.b, &self.cfg, "b")?.ok_or_else(|| missing("-b"))?,
            )
        } else if let Some(eq) = self.cfg.raw("curve") {
            parse_curve(eq)?
        } else {
            (
                self.cfg.get("a")?.ok_or_else(|| missing("-a"))?,
                self.cfg.get("b")?.ok_or_else(|| missing("-b"))?,
            )
        };
        let p = pick(args.p, &self.cfg, "p")?.ok_or_else(|| missing("-p"))?;
        validate_curve(a, b, p).map_err(domain)
    }

    fn level(&self, n: Option<u32>, default: u32) -> Result<u32, CliError> {
        let n = pick(n, &self.cfg, "n")?.unwrap_or(default);
        if !(1..=MAX_N).contains(&n) {
            return Err(CliError::Usage(format!("-n must lie in 1..={MAX_N}, got {n}")));
        }
        Ok(n)
    }
}

fn missing(flag: &str) -> CliError {
    CliError::Usage(format!("missing {flag} (flag, --curve or config)"))
}

fn has_curve(args: &CurveArgs, cfg: &Config) -> bool {
    args.curve.is_some()
        || args.a.is_some()
        || args.b.is_some()
        || args.p.is_some()
        || ["curve", "a", "b", "p"].iter().any(|k| cfg.raw(k).is_some())
}

pub fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let out = match cli.out {
        Some(dir) => Some(dir),
        None => cfg.get::<PathBuf>("out")?,
    };
    let limit = pick(cli.oracle_limit, &cfg, "oracle_limit")?.unwrap_or_else(oracle_limit_from_env);
    if limit == 0 {
        return Err(CliError::Usage("--oracle-limit must be positive".into()));
    }
    let env = Env { cfg, out, limit };
    match cli.command {
        Command::Analyze { curve, n } => analyze(&env, &curve, n),
        Command::Lattice { curve, n } => lattice(&env, &curve, n),
        Command::Embed { curve, n, k, ns, nt, rotation, twist } => {
            embed(&env, &curve, n, EmbedFlags { k, ns, nt, rotation, twist })
        }
        Command::Mulgrp { p, n } => mulgrp(&env, p, n),
        Command::RealLocus { tau, curve } => real_locus_cmd(&env, tau, &curve),
        Command::VerifyFrobeniusLift => verify_lift(&env),
        Command::Selftest => selftest(&env),
    }
}

fn analyze(env: &Env, args: &CurveArgs, n: Option<u32>) -> Result<u8, CliError> {
    let curve = env.curve(args)?;
    let n = env.level(n, 4)?;
    let report = build_lift_report_limited(&curve, n, env.limit).map_err(domain)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let text = write_json(&report);
    if env.out.is_some() {
        env.write(&format!("{}_{}_{n}.json", curve.slug(), curve.p()), &text)?;
    } else {
        print!("{text}");
    }
    Ok(0)
}

fn lattice(env: &Env, args: &CurveArgs, n: Option<u32>) -> Result<u8, CliError> {
    let curve = env.curve(args)?;
    let n = env.level(n, 1)?;
    let lc = level_context(&curve, n, env.limit).map_err(domain)?;
    for w in &lc.warnings {
        eprintln!("warning: {w}");
    }
    let stem = format!("{}_{}_{n}", curve.slug(), curve.p());
    let title = format!("{curve} over F_{}, n = {n}", curve.p());
    env.write(&format!("{stem}.lattice.svg"), &write_svg(&FdScene::from_level(&lc.level, &title)))?;
    env.write(&format!("{stem}.lattice.json"), &write_json(&LatticeRecord::from_level(&lc.level)))?;
    Ok(0)
}

struct EmbedFlags {
    k: Option<u32>,
    ns: Option<usize>,
    nt: Option<usize>,
    rotation: Option<String>,
    twist: Option<TwistArg>,
}

fn embed_options(env: &Env, flags: &EmbedFlags) -> Result<(EmbedOptions, bool), CliError> {
    let defaults = EmbedOptions::default();
    let k = pick(flags.k, &env.cfg, "k")?;
    let rotation = match flags.rotation.as_deref().or(env.cfg.raw("rotation")) {
        Some(s) => {
            let [w, x, y, z] = parse_quad(s)?;
            Rotation::new(w, x, y, z)
                .ok_or_else(|| CliError::Usage(format!("rotation '{s}' is not a nonzero quaternion")))?
        }
        None => defaults.rotation,
    };
    let twist = match flags.twist {
        Some(TwistArg::Squared) => TwistVariant::Squared,
        Some(TwistArg::Unsquared) => TwistVariant::Unsquared,
        None => match env.cfg.raw("twist") {
            None | Some("squared") => TwistVariant::Squared,
            Some("unsquared") => TwistVariant::Unsquared,
            Some(other) => {
                return Err(CliError::Usage(format!("config: twist must be squared or unsquared, got '{other}'")))
            }
        },
    };
    let opts = EmbedOptions {
        k: k.unwrap_or(defaults.k),
        ns: pick(flags.ns, &env.cfg, "ns")?.unwrap_or(defaults.ns),
        nt: pick(flags.nt, &env.cfg, "nt")?.unwrap_or(defaults.nt),
        rotation,
        twist,
    };
    if opts.k < 2 {
        return Err(CliError::Usage(format!("--k must be at least 2, got {}", opts.k)));
    }
    if opts.ns == 0 {
        return Err(CliError::Usage("--ns must be positive".into()));
    }
    if opts.nt < MIN_NT {
        return Err(CliError::Usage(format!("--nt must be at least {MIN_NT}, got {}", opts.nt)));
    }
    Ok((opts, k.is_some()))
}

fn embed(env: &Env, args: &CurveArgs, n: Option<u32>, flags: EmbedFlags) -> Result<u8, CliError> {
    let curve = env.curve(args)?;
    let n = env.level(n, 1)?;
    let (mut opts, k_fixed) = embed_options(env, &flags)?;
    let lc = level_context(&curve, n, env.limit).map_err(domain)?;
    let class = embedding_class(&lc.tau).map_err(domain)?;
    let mut notices = Vec::new();

    if let Some((_, den)) = class.shear {
        let den = den.unsigned_abs() as usize;
        if den > 1 && opts.ns % den != 0 {
            let rounded = opts.ns.div_ceil(den) * den;
            notices.push(format!("Ns rounded up from {} to {rounded} to match the shear denominator {den}", opts.ns));
            opts.ns = rounded;
        }
    }

    let (base, ctx) = loop {
        match embedding_ctx(&class, &opts) {
            Err(LiftError::Sphere(SphereCurveError::PoleCollision { .. }))
                if !k_fixed && opts.k < MAX_AUTO_K =>
            {
                notices.push(format!("k raised from {} to {} to keep the base curve off the poles", opts.k, opts.k + 1));
                opts.k += 1;
            }
            other => break other.map_err(domain)?,
        }
    };
    for m in &notices {
        eprintln!("notice: {m}");
    }
    for w in &lc.warnings {
        eprintln!("warning: {w}");
    }

    let mesh = generate_mesh(&ctx, opts.ns, opts.nt).map_err(domain)?;
    let mut scene = map_scene(&ctx, &lc.level).map_err(domain)?;
    scene.mesh = Some(mesh);
    scene.metadata = scene_metadata(&lc, &class);

    let stem = format!("{}_{}_{n}", curve.slug(), curve.p());
    let obj = write_obj(scene.mesh.as_ref().expect("mesh set above")).map_err(domain)?;
    env.write(&format!("{stem}.obj"), &obj)?;
    env.write(&format!("{stem}.points.obj"), &write_points_obj(&scene))?;
    env.write(&format!("{stem}.ply"), &write_ply(&scene).map_err(domain)?)?;

    let mesh = scene.mesh.as_ref().expect("mesh set above");
    let meta = json!({
        "scene": scene.metadata,
        "base_curve": base,
        "options": {
            "k": opts.k,
            "ns": opts.ns,
            "nt": opts.nt,
            "rotation": opts.rotation,
            "twist": opts.twist,
        },
        "mesh": {
            "vertices": mesh.vertices.len(),
            "faces": mesh.quads.len(),
            "euler_characteristic": mesh.euler_characteristic(),
        },
        "markers": scene.markers.len(),
        "identity_markers": scene.identity_count(),
        "edges": scene.polylines.len(),
        "notices": notices,
    });
    env.write(&format!("{stem}.json"), &write_json(&meta))?;
    Ok(0)
}

fn mulgrp(env: &Env, p: Option<u64>, n: Option<u32>) -> Result<u8, CliError> {
    let p = pick(p, &env.cfg, "p")?.ok_or_else(|| missing("-p"))?;
    let n = env.level(n, 1)?;
    let g = mult_group_points(p, n).map_err(domain)?;
    env.write(&format!("mulgrp_{p}_{n}.svg"), &write_mult_group_svg(&g))?;
    env.write(&format!("mulgrp_{p}_{n}.json"), &write_json(&g))?;
    Ok(0)
}

fn real_locus_cmd(env: &Env, tau: Option<String>, args: &CurveArgs) -> Result<u8, CliError> {
    let (stem, tau) = match tau.as_deref().or(env.cfg.raw("tau")) {
        Some(s) if !(args.curve.is_some() || args.a.is_some() || args.b.is_some()) => {
            let (re, im) = parse_pair(s)?;
            if !(im > 0.0) {
                return Err(CliError::Domain(format!("tau must have positive imaginary part, got {im}")));
            }
            ("real_locus".to_string(), Complex64::new(re, im))
        }
        _ if has_curve(args, &env.cfg) => {
            let curve = env.curve(args)?;
            let lc = level_context(&curve, 1, env.limit).map_err(domain)?;
            (format!("{}_{}.real", curve.slug(), curve.p()), lc.tau.value())
        }
        _ => return Err(CliError::Usage("real-locus needs --tau or a curve".into())),
    };
    let locus = real_locus(tau);
    env.write(&format!("{stem}.json"), &write_json(&locus))?;
    env.write(&format!("{stem}.svg"), &write_real_locus_svg(&locus))?;
    Ok(0)
}

fn verify_lift(env: &Env) -> Result<u8, CliError> {
    let r = verify_phi_reduction();
    let text = write_json(&json!({ "verified": r.all_ok(), "details": r }));
    if env.out.is_some() {
        env.write("frobenius_lift.json", &text)?;
    } else {
        print!("{text}");
    }
    Ok(if r.all_ok() { 0 } else { 1 })
}

fn selftest(env: &Env) -> Result<u8, CliError> {
    let results = run_all(env.limit);
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} checks passed", results.len() - failed, results.len());
    Ok(if failed == 0 { 0 } else { 1 })
}

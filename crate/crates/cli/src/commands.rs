use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde_json::{json, Value};

use holorecon::diagnostics::{
    check_annulus_products, check_net_statistics, check_product_lower_bound, criterion_under_homography,
    riemann_constant_check, NetStatOptions,
};
use holorecon::directions::{
    apply_permutation, build_sigma1, build_sigma2, delete_subsequence, gen_dense, gen_kappa, gen_sigma_c_sequence,
    gen_square_net_sequence, gen_theta, interleave, read_jsonl, search_sigma2_witnesses, write_jsonl,
    DirectionSequence, Provenance,
};
use holorecon::divided_differences::criterion_matrix;
use holorecon::numerics::{BivariateTaylor, CatalogFunction};
use holorecon::reconstruction::{
    convergence_experiment, default_truncation, verify_identity, CompactSet, ExperimentOptions,
    ReconstructionRequest,
};
use holorecon::{CriterionOptions, Precision, PrecisionComplex};

use crate::config::{
    config_error, require_output, resolve_precision, resolved_json, BoundKind, CheckBoundsArgs, CriterionArgs, Family,
    GenArgs, PermuteArgs, ReconstructArgs,
};
use crate::output::{write_atomic, write_report};

fn generate(family: Family, count: usize, prec: Precision) -> anyhow::Result<DirectionSequence> {
    Ok(match family {
        Family::Theta => gen_theta(count, prec),
        Family::Kappa => gen_kappa(count, prec),
        Family::SquareNet => gen_square_net_sequence(count, prec),
        Family::Dense => gen_dense(count, prec),
        Family::DenseSigmaC => gen_sigma_c_sequence(count, prec)?.0,
    })
}

fn read_sequence(path: &Path) -> anyhow::Result<DirectionSequence> {
    let file = File::open(path).map_err(|e| config_error(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_jsonl(BufReader::new(file))?.0)
}

/// The input file when given, otherwise `count` points of `family`.
fn load_sequence(
    input: &Option<PathBuf>,
    family: Option<Family>,
    count: usize,
    prec: Precision,
) -> anyhow::Result<DirectionSequence> {
    match (input, family) {
        (Some(path), _) => read_sequence(path),
        (None, Some(f)) => generate(f, count, prec),
        (None, None) => Err(config_error("either --input or --family is required")),
    }
}

fn write_sequence(path: &Path, seq: &DirectionSequence, config: &Value) -> anyhow::Result<()> {
    write_atomic(path, |w| Ok(write_jsonl(seq, config, w)?))
}

pub fn gen(mut args: GenArgs) -> anyhow::Result<()> {
    let family = args.family.ok_or_else(|| config_error("--family is required"))?;
    let count = *args.count.get_or_insert(25);
    let prec = resolve_precision(args.precision_bits)?;
    args.precision_bits = Some(prec.bits());
    let output = require_output(&args.output)?.to_path_buf();
    let seq = generate(family, count, prec)?;
    write_sequence(&output, &seq, &resolved_json("gen", &args))?;
    let bbox = seq
        .bounding_box()
        .map_or_else(|| "-".into(), |(a, b, c, d)| format!("[{a}, {b}] x [{c}, {d}]"));
    println!("count {}  min gap {:.6e}  bounding box {bbox}", seq.len(), seq.distinctness_gap());
    Ok(())
}

pub fn criterion(mut args: CriterionArgs) -> anyhow::Result<()> {
    let p = *args.p.get_or_insert(40);
    let q = *args.q.get_or_insert(8);
    let delta = *args.delta.get_or_insert(1e-6);
    let prec = resolve_precision(args.precision_bits)?;
    args.precision_bits = Some(prec.bits());
    let output = require_output(&args.output)?.to_path_buf();
    let seq = load_sequence(&args.input, args.family, p + 1, prec)?;
    let opts = CriterionOptions {
        precision: prec,
        ..CriterionOptions::default()
    };
    let config = resolved_json("criterion", &args);
    if args.homography || args.poles.is_some() {
        let poles = args
            .poles
            .iter()
            .flatten()
            .map(|s| PrecisionComplex::parse_literal(s, prec).map_err(|e| config_error(format!("pole {s:?}: {e}"))))
            .collect::<anyhow::Result<Vec<_>>>()?;
        let rep = criterion_under_homography(&seq, &poles, p, q, delta, &opts)?;
        for m in &rep.maps {
            println!("{}: {} (rate exponent {:.3})", m.map, m.report.verdict, m.report.rate_exponent);
        }
        println!("combined verdict {}", rep.combined);
        write_report(&output, &config, &rep)
    } else {
        let rep = criterion_matrix(&seq, p, q, &opts)?;
        print!("{}", rep.table());
        println!(
            "verdict {}  rate exponent {:.3}  R_hat {:.4}  precision {} bits",
            rep.verdict, rep.rate_exponent, rep.r_hat, rep.precision_bits
        );
        write_report(&output, &config, &rep)
    }
}

pub fn reconstruct(mut args: ReconstructArgs) -> anyhow::Result<()> {
    let spec = args.function.get_or_insert_with(|| "exp-linear:1,1".into()).clone();
    let f: CatalogFunction = spec.parse().map_err(|e| config_error(format!("--function: {e}")))?;
    let n_list = args.n_list.get_or_insert_with(|| vec![2, 4, 8, 16, 24]).clone();
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(config_error("--n-list needs positive counts"));
    }
    let radius = *args.radius.get_or_insert(0.5);
    if radius.is_nan() || radius <= 0.0 {
        return Err(config_error("--radius must be positive"));
    }
    let prec = resolve_precision(args.precision_bits)?;
    args.precision_bits = Some(prec.bits());
    let output = require_output(&args.output)?.to_path_buf();
    let identity_path = args
        .identity_report
        .get_or_insert_with(|| output.with_extension("identity.json"))
        .clone();
    let n_max = n_list.iter().copied().max().unwrap_or(1);
    let seq = load_sequence(&args.input, args.family, n_max, prec)?;
    let compact = CompactSet::polydisc(radius);
    let grid = compact.grid(prec);

    let mut identity = BTreeMap::new();
    for &n in &n_list {
        let m = args
            .truncation
            .unwrap_or_else(|| default_truncation(n).max(f.degree().unwrap_or(0)));
        let req = ReconstructionRequest::new(&f, &seq, n, grid.clone())
            .with_truncation(m)
            .with_precision(prec);
        identity.insert(n, verify_identity(&req)?);
    }
    let opts = ExperimentOptions {
        precision: prec,
        truncation: args.truncation,
        record_timing: false,
    };
    let curve = convergence_experiment(&f, &seq, &n_list, &compact, &opts)?;
    let config = resolved_json("reconstruct", &args);

    write_atomic(&output, |w| {
        writeln!(w, "# holorecon {}", holorecon::VERSION)?;
        writeln!(w, "# config {}", serde_json::to_string(&config)?)?;
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record([
            "N",
            "M",
            "precision_bits",
            "sup_error",
            "mean_error",
            "identity_residual",
            "roundoff_budget",
            "wall_time_ms",
        ])?;
        for pt in &curve.points {
            let id = &identity[&pt.n];
            csv.write_record([
                pt.n.to_string(),
                pt.m.to_string(),
                pt.precision_bits.to_string(),
                format!("{:e}", pt.sup_error),
                format!("{:e}", pt.mean_error),
                format!("{:e}", id.residual),
                format!("{:e}", id.budget),
                pt.wall_time_ms.map_or_else(|| "NA".into(), |t| format!("{t}")),
            ])?;
        }
        csv.flush()?;
        Ok(())
    })?;
    let identity_rows: Vec<Value> = identity
        .iter()
        .map(|(n, r)| json!({ "N": n, "identity": r }))
        .collect();
    write_report(&identity_path, &config, &identity_rows)?;

    for pt in &curve.points {
        println!("N {:>4}  M {:>4}  sup error {:.6e}", pt.n, pt.m, pt.sup_error);
    }
    println!("trend {:?}", curve.trend);
    Ok(())
}

pub fn permute(mut args: PermuteArgs) -> anyhow::Result<()> {
    let modes = [args.sigma1, args.sigma2, args.delete_odd];
    if modes.iter().filter(|&&m| m).count() != 1 {
        return Err(config_error("exactly one of --sigma1, --sigma2, --delete-odd is required"));
    }
    let count = *args.count.get_or_insert(25);
    let prec = resolve_precision(args.precision_bits)?;
    args.precision_bits = Some(prec.bits());
    let output = require_output(&args.output)?.to_path_buf();

    let seq = if args.delete_odd {
        let source = match &args.input {
            Some(path) => read_sequence(path)?,
            None => interleave(&gen_theta(count, prec), &gen_kappa(count + 1, prec))?,
        };
        let mut kept = delete_subsequence(&source, |j| j % 2 == 1);
        kept = kept.prefix(count.min(kept.len()));
        println!("kept {} of {} points", kept.len(), source.len());
        kept
    } else if args.sigma1 {
        let r_kappa = *args.r_kappa.get_or_insert(1.0);
        let theta = gen_theta(count + 2, prec);
        let kappa = gen_kappa(count + 2, prec);
        let s1 = build_sigma1(&theta, &kappa, r_kappa, count)?;
        println!("l = {:?}", s1.l);
        println!("theta positions {:?}", s1.theta_positions);
        apply_permutation(&interleave(&theta, &kappa)?, &s1.permutation, count)?
    } else {
        let base = *args.base.get_or_insert(2.0);
        let p_budget = *args.p_budget.get_or_insert(count.saturating_sub(1).max(1));
        let q_budget = *args.q_budget.get_or_insert(6);
        let len = count + p_budget + 2;
        let theta = gen_theta(len, prec);
        let kappa = gen_kappa(len, prec);
        let opts = CriterionOptions {
            precision: prec,
            ..CriterionOptions::default()
        };
        let found = search_sigma2_witnesses(&theta, &kappa, base, p_budget, q_budget, &opts)?;
        if found.witnesses.is_empty() {
            eprintln!("warning: no divergence witnesses within p <= {p_budget}, q <= {q_budget}; output alternates theta and kappa");
        }
        let pairs = found.pairs();
        println!("witnesses {pairs:?}");
        let s2 = build_sigma2(&theta, &kappa, &pairs, count)?;
        let seq = apply_permutation(&interleave(&theta, &kappa)?, &s2.permutation, count)?;
        let mut prov = seq.provenance().clone();
        if let Value::Object(map) = &mut prov.params {
            map.insert("witness_search".into(), serde_json::to_value(&found)?);
        }
        seq.with_provenance(Provenance::new(prov.generator, prov.params))
    };
    write_sequence(&output, &seq, &resolved_json("permute", &args))
}

pub fn check_bounds(mut args: CheckBoundsArgs) -> anyhow::Result<()> {
    let bound = args.bound.ok_or_else(|| config_error("--bound is required"))?;
    let prec = resolve_precision(args.precision_bits)?;
    args.precision_bits = Some(prec.bits());
    let output = require_output(&args.output)?.to_path_buf();
    let report = match bound {
        BoundKind::Products => {
            let p_max = *args.p_max.get_or_insert(80);
            let seq = load_sequence(&args.input, Some(Family::SquareNet), p_max + 1, prec)?;
            check_product_lower_bound(&seq, p_max)
        }
        BoundKind::AnnulusProducts | BoundKind::NetStatistics => {
            let n_list = args
                .n_list
                .get_or_insert_with(|| vec![64, 128, 256, 512, 1024])
                .clone();
            let n_max = n_list.iter().copied().max().unwrap_or(0);
            let seq = load_sequence(&args.input, Some(Family::DenseSigmaC), n_max, prec)?;
            if bound == BoundKind::AnnulusProducts {
                check_annulus_products(&seq, &n_list)
            } else {
                let opts = NetStatOptions {
                    tolerance: *args.tolerance.get_or_insert(NetStatOptions::default().tolerance),
                    ..NetStatOptions::default()
                };
                check_net_statistics(&seq, &n_list, &opts)
            }
        }
        BoundKind::Integrals => riemann_constant_check(),
    };
    print!("{}", report.table());
    write_report(&output, &resolved_json("check-bounds", &args), &report).context("writing the report")
}

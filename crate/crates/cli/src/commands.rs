//! Subcommand bodies. The table-producing ones (`compare`, `bench`) are
//! also callable directly so tests can inspect rows without parsing CSV.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use resprune::costmodel::{self, LlmShape, PrefillReport, Preset, ReferenceFigure, SelectionCost};
use resprune::relevance::relevance_or_absent;
use resprune::seeding::select_seed;
use resprune::synth::Gaussian;
use resprune::{baselines, greedy_select, greedy_select_with, oracle, tensor_io, PruneConfig, RelevanceFormulation};
use serde::Serialize;

use crate::args::{BenchArgs, CompareArgs, FlopsArgs, OracleArgs, RenderArgs, SelectArgs};
use crate::config::{resolve, Inputs};
use crate::error::{CliError, InputContext};
use crate::render::{ascii_mask, pgm_mask, render_mask};

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::output(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| CliError::output("<stdout>", e))
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(resprune::Error::from)?;
    s.push('\n');
    Ok(s.into_bytes())
}

pub fn select(args: &SelectArgs) -> Result<(), CliError> {
    let inputs = Inputs::load(&args.input)?;
    let (cfg, budget) = resolve(&args.tuning, args.budget, inputs.scores.is_some())?;
    if budget.is_none() {
        return Err(CliError::Usage("--budget is required (flag or config file)".into()));
    }
    if (args.mask.is_some() || args.mask_pgm.is_some()) && inputs.visual.grid().is_none() {
        return Err(CliError::Usage("--mask and --mask-pgm need --grid".into()));
    }
    let result = greedy_select(&inputs.visual, &inputs.text, &cfg, inputs.scores.as_ref())?;

    emit(args.out.as_deref(), tensor_io::result_to_json(&result)?.as_bytes())?;
    if let Some(grid) = inputs.visual.grid() {
        let t = inputs.visual.tokens();
        if let Some(p) = &args.mask {
            emit(Some(p), ascii_mask(&result.indices, t, grid)?.as_bytes())?;
        }
        if let Some(p) = &args.mask_pgm {
            emit(Some(p), &pgm_mask(&result.indices, t, grid)?)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub method: String,
    pub budget: usize,
    pub recon_error: f64,
    pub wall_time_s: f64,
}

pub const COMPARE_HEADER: &str = "method,budget,recon_error,wall_time_s";

/// Runs every method at every budget. `recon_error` is always computed
/// by explicit projection, so all methods are scored the same way. Rows
/// are sorted by method name, then budget.
///
/// `top-relevance` is only run when some text row survives the mask.
pub fn compare(
    inputs: &Inputs,
    base: &PruneConfig,
    budgets: &[usize],
    random_seed: u64,
    relevance_sweep: bool,
) -> Result<Vec<CompareRow>, CliError> {
    let v = &inputs.visual;
    let u = &inputs.text;
    let scores = inputs.scores.as_ref();
    let has_text = !u.is_effectively_empty();
    let relevance = relevance_or_absent(v, u, base.formulation)?;
    let seed_index = select_seed(v, base.seed, relevance.as_deref(), scores)?;

    let mut rows = Vec::new();
    for &k in budgets {
        let mut run = |method: String, pick: &dyn Fn() -> resprune::Result<Vec<usize>>| -> Result<(), CliError> {
            let start = Instant::now();
            let indices = pick()?;
            let wall_time_s = start.elapsed().as_secs_f64();
            rows.push(CompareRow {
                method,
                budget: k,
                recon_error: oracle::reconstruction_error(v, &indices)?,
                wall_time_s,
            });
            Ok(())
        };
        let cfg = PruneConfig { budget: k, ..*base };
        run("resprune".into(), &|| Ok(greedy_select(v, u, &cfg, scores)?.indices))?;
        let flat = cfg.with_alpha(0.0);
        run("resprune-alpha0".into(), &|| {
            Ok(greedy_select(v, u, &flat, scores)?.indices)
        })?;
        if relevance_sweep {
            for f in RelevanceFormulation::ALL {
                let c = cfg.with_formulation(f);
                run(format!("resprune-{}", f.name()), &|| {
                    Ok(greedy_select(v, u, &c, scores)?.indices)
                })?;
            }
        }
        run("random".into(), &|| {
            baselines::select_random(v.tokens(), k, random_seed)
        })?;
        run("top-norm".into(), &|| baselines::select_top_norm(v, k))?;
        if has_text {
            run("top-relevance".into(), &|| {
                baselines::select_top_relevance(v, u, k, base.formulation)
            })?;
        }
        run("maxmin".into(), &|| {
            baselines::select_maxmin_diversity(v, k, seed_index)
        })?;
    }
    rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.budget.cmp(&b.budget)));
    Ok(rows)
}

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut s = String::from(COMPARE_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{:.6}\n",
            r.method, r.budget, r.recon_error, r.wall_time_s
        ));
    }
    s
}

pub fn compare_cmd(args: &CompareArgs) -> Result<(), CliError> {
    let inputs = Inputs::load(&args.input)?;
    let (cfg, _) = resolve(&args.tuning, None, inputs.scores.is_some())?;
    let rows = compare(&inputs, &cfg, &args.budgets, args.random_seed, args.relevance_sweep)?;
    emit(args.out.as_deref(), compare_csv(&rows).as_bytes())
}

pub fn oracle_cmd(args: &OracleArgs) -> Result<(), CliError> {
    let v = tensor_io::load_tokens(&args.visual).for_input(&args.visual)?;
    let report = oracle::brute_force_optimal(&v, args.budget)?;
    emit(args.out.as_deref(), &json(&report)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct FlopsRow {
    pub budget: u64,
    pub prefill: PrefillReport,
    pub selection_cost: SelectionCost,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlopsReport {
    pub preset: Preset,
    /// Unpruned shape (`budget = visual_tokens`).
    pub shape: LlmShape,
    pub budgets: Vec<FlopsRow>,
    /// Published figures for the preset, for side-by-side reading only.
    pub reference_figures: Vec<ReferenceFigure>,
}

pub fn flops(args: &FlopsArgs) -> Result<FlopsReport, CliError> {
    let preset: Preset = args.preset.parse()?;
    let base = preset.shape();
    let t = args.visual_tokens.unwrap_or(base.visual_tokens);
    let shape = LlmShape {
        hidden: args.hidden.unwrap_or(base.hidden),
        mlp: args.mlp.unwrap_or(base.mlp),
        layers: args.layers.unwrap_or(base.layers),
        visual_tokens: t,
        text_tokens: args.text_tokens.unwrap_or(base.text_tokens),
        budget: t,
    };
    shape.validate()?;
    let figures = preset.reference_figures().to_vec();
    let budgets: Vec<u64> = if !args.budgets.is_empty() {
        args.budgets.clone()
    } else if !figures.is_empty() && t == base.visual_tokens {
        figures.iter().map(|f| f.budget).collect()
    } else {
        vec![(t / 3).max(1)]
    };
    let rows = budgets
        .into_iter()
        .map(|k| {
            let s = LlmShape { budget: k, ..shape };
            Ok(FlopsRow {
                budget: k,
                prefill: costmodel::prefill_report(&s)?,
                selection_cost: costmodel::selection_cost(t, s.text_tokens, s.hidden, k),
            })
        })
        .collect::<resprune::Result<Vec<_>>>()?;
    Ok(FlopsReport {
        preset,
        shape,
        budgets: rows,
        reference_figures: figures,
    })
}

pub fn flops_cmd(args: &FlopsArgs) -> Result<(), CliError> {
    emit(args.out.as_deref(), &json(&flops(args)?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub tokens: usize,
    pub dim: usize,
    pub budget: usize,
    pub text_tokens: usize,
    /// Median over repetitions.
    pub wall_time_s: f64,
    pub predicted: SelectionCost,
    pub recon_error: f64,
    /// `max |Q^T Q - I|` of the final basis.
    pub ortho_error: f64,
    pub indices_checksum: u64,
}

pub const BENCH_HEADER: &str = "tokens,dim,budget,text_tokens,wall_time_s,pred_relevance_macs,pred_greedy_macs,pred_basis_macs,recon_error,ortho_error,indices_checksum";

/// FNV-1a over the little-endian `u64` bytes of the index sequence.
pub fn indices_checksum(indices: &[usize]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &i in indices {
        for b in (i as u64).to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// One row per (tokens, dim, budget) on data from `Gaussian::new(seed)`:
/// visual tokens first, then text rows. The timed region ends when the
/// last selection has been folded in; the orthonormality check after it
/// is not timed.
pub fn bench(args: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    if args.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &t in &args.tokens {
        for &d in &args.dims {
            let mut g = Gaussian::new(args.seed);
            let v = g.tokens(t, d);
            let u = g.text(args.text_tokens, d);
            for &k in &args.budgets {
                let cfg = PruneConfig::new(k);
                let mut times = Vec::with_capacity(args.reps);
                let mut last = None;
                for _ in 0..args.reps {
                    let start = Instant::now();
                    let mut timed = 0.0;
                    let mut ortho = 0.0;
                    let result = greedy_select_with(&v, &u, &cfg, None, |step| {
                        if step.indices.len() == k {
                            timed = start.elapsed().as_secs_f64();
                            ortho = step.basis.orthonormality_error();
                        }
                    })?;
                    times.push(timed);
                    last = Some((result, ortho));
                }
                times.sort_by(f64::total_cmp);
                let (result, ortho_error) = last.expect("reps >= 1");
                rows.push(BenchRow {
                    tokens: t,
                    dim: d,
                    budget: k,
                    text_tokens: args.text_tokens,
                    wall_time_s: times[times.len() / 2],
                    predicted: costmodel::selection_cost(t as u64, args.text_tokens as u64, d as u64, k as u64),
                    recon_error: result.recon_error,
                    ortho_error,
                    indices_checksum: indices_checksum(&result.indices),
                });
            }
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from(BENCH_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{:.6},{},{},{},{},{:e},{:016x}\n",
            r.tokens,
            r.dim,
            r.budget,
            r.text_tokens,
            r.wall_time_s,
            r.predicted.relevance,
            r.predicted.greedy,
            r.predicted.basis,
            r.recon_error,
            r.ortho_error,
            r.indices_checksum
        ));
    }
    s
}

pub fn bench_cmd(args: &BenchArgs) -> Result<(), CliError> {
    emit(args.out.as_deref(), bench_csv(&bench(args)?).as_bytes())
}

pub fn render_cmd(args: &RenderArgs) -> Result<(), CliError> {
    let result = tensor_io::load_result(&args.result).for_input(&args.result)?;
    let ascii = render_mask(&result, args.grid)?;
    if let Some(p) = &args.pgm {
        emit(Some(p), &pgm_mask(&result.indices, result.weights.len(), args.grid)?)?;
    }
    emit(None, ascii.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksum_depends_on_order() {
        assert_ne!(indices_checksum(&[0, 1]), indices_checksum(&[1, 0]));
        assert_eq!(indices_checksum(&[]), 0xcbf2_9ce4_8422_2325);
    }

    #[test]
    fn csv_header_and_rows() {
        let rows = vec![CompareRow {
            method: "random".into(),
            budget: 3,
            recon_error: 0.5,
            wall_time_s: 0.0,
        }];
        assert_eq!(
            compare_csv(&rows),
            "method,budget,recon_error,wall_time_s\nrandom,3,0.5,0.000000\n"
        );
    }
}

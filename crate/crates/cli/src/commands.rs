use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use tropml::geometry::{ball_generators, estimate_volume, VolumeConfig};
use tropml::learn::{model_from_json, model_to_json, Model};
use tropml::phylo::{tree_to_vector, vector_to_tree, UltrametricVector};
use tropml::rng::stream_rng;
use tropml::sampler::random_hull_point;
use tropml::synth::{gaussian_clusters, ultrametric_clusters, LabeledData};
use tropml::tropical::{normalize_matrix, raw_distance, trop_det};
use tropml::{
    fermat_weber_lp, fermat_weber_regularized, fermat_weber_subgradient, fit_logistic, fit_tropical_pca,
    hyperplane_distance, is_ultrametric, kde_fit, kde_scores, min_enclosing_ball, normalize_point,
    parse_newick, pca_plot_coords, project_onto_polytope, roc_auc, run_chains, sample_segment_centered,
    sample_segment_uniform, trop_segment, Algebra, CenterTarget, ChainConfig, Error, LogisticConfig,
    LogisticModel, PcaConfig, RegularizedFWConfig, SubgradientConfig, TropicalHyperplane, TropicalPoint,
    TropicalPolytope,
};

use crate::io::{fmt_num, fmt_row, parse_point, parse_table, push_row, read_rows, read_table, read_text, round10};
use crate::{
    AlgebraArg, Cli, CliError, Command, FwMethodArg, LogisticAction, PcaArgs, PcaInit, SampleArgs, SampleMode,
    SynthKind, TreeAction,
};

type Res<T> = Result<T, CliError>;

pub fn run(cli: &Cli) -> Res<()> {
    let out = match &cli.command {
        Command::Dist { input } => dist(&read_rows(input, cli.header)?)?,
        Command::Normalize { input } => rows_csv(&normalize_matrix(&read_rows(input, cli.header)?)?.rows()),
        Command::Det { input } => det(&read_rows(input, cli.header)?)?,
        Command::Segment { input } => segment(&read_rows(input, cli.header)?)?,
        Command::Project { polytope, points, point } => {
            let p = TropicalPolytope::from_rows(&read_rows(polytope, cli.header)?)?;
            let queries = match (points, point) {
                (Some(path), _) => read_rows(path, cli.header)?,
                (None, Some(text)) => vec![parse_point(text)?],
                (None, None) => return Err(CliError::Usage("give a points file or --point".into())),
            };
            let mut out = String::new();
            for q in queries {
                push_row(&mut out, project_onto_polytope(&p, &TropicalPoint::new(q)?)?.coords());
            }
            out
        }
        Command::Hyperdist { input, normal, algebra } => {
            let algebra = match algebra {
                AlgebraArg::Max => Algebra::Max,
                AlgebraArg::Min => Algebra::Min,
            };
            let h = TropicalHyperplane::new(TropicalPoint::new(parse_point(normal)?)?, algebra);
            let mut out = String::new();
            for row in read_rows(input, cli.header)? {
                out.push_str(&fmt_num(hyperplane_distance(&h, &TropicalPoint::new(row)?)?));
                out.push('\n');
            }
            out
        }
        Command::Fwpoint { input, method, penalty, max_iters } => {
            fwpoint(&read_rows(input, cli.header)?, *method, *penalty, *max_iters)?
        }
        Command::Sample(args) => sample(cli, args)?,
        Command::Ball { polytope } => ball(&read_rows(polytope, cli.header)?)?,
        Command::Volume { polytope, samples, steps, burnin } => {
            let p = TropicalPolytope::from_rows(&read_rows(polytope, cli.header)?)?;
            let b = min_enclosing_ball(&p)?;
            let config = VolumeConfig { burn_in: *burnin, tol: cli.tol, ..VolumeConfig::new(*samples, *steps, cli.seed) };
            let v = estimate_volume(&ball_generators(&b), &p, &b.center, b.radius, &config)?;
            json_text(&json!({
                "proportion": round10(v.proportion),
                "ball_volume": round10(v.ball_volume),
                "estimate": round10(v.estimate),
                "stderr_binomial": round10(v.stderr_binomial()),
                "samples": v.samples,
                "chain_steps": v.chain_steps,
                "seed": v.seed,
            }))
        }
        Command::Logistic { action } => logistic(cli, action)?,
        Command::Pca(args) => pca(cli, args)?,
        Command::Kde { input, bandwidth, candidates } => {
            let rows = read_rows(input, cli.header)?;
            let model = kde_fit(&rows, *bandwidth)?;
            let mut scores = kde_scores(&model, &rows, true)?;
            if let Some(path) = candidates {
                scores.extend(tropml::learn::kde_outlier_scores(&rows, &read_rows(path, cli.header)?, *bandwidth)?);
            }
            let mut order: Vec<usize> = (0..scores.len()).collect();
            order.sort_by(|&i, &j| scores[i].total_cmp(&scores[j]).then(i.cmp(&j)));
            let mut out = String::from("# index,score\n");
            for i in order {
                out.push_str(&format!("{i},{}\n", fmt_num(scores[i])));
            }
            out
        }
        Command::Tree { action } => tree(cli, action)?,
        Command::Synth { kind } => synth(cli, kind)?,
    };
    emit(cli.output.as_deref(), &out)
}

fn emit(path: Option<&Path>, text: &str) -> Res<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn rows_csv<R: AsRef<[f64]>>(rows: &[R]) -> String {
    let mut out = String::new();
    for r in rows {
        push_row(&mut out, r.as_ref());
    }
    out
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn rounded(row: &[f64]) -> Vec<f64> {
    row.iter().map(|&x| round10(x)).collect()
}

fn dist(rows: &[Vec<f64>]) -> Res<String> {
    let p = TropicalPolytope::from_rows(rows)?;
    if p.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: p.len() }.into());
    }
    let g = p.generators();
    if g.len() == 2 {
        return Ok(format!("{}\n", fmt_num(raw_distance(g[0].coords(), g[1].coords()))));
    }
    let matrix: Vec<Vec<f64>> =
        g.iter().map(|a| g.iter().map(|b| raw_distance(a.coords(), b.coords())).collect()).collect();
    Ok(rows_csv(&matrix))
}

fn det(rows: &[Vec<f64>]) -> Res<String> {
    let d = trop_det(rows)?;
    let mut out = format!("{}\n", fmt_num(d.value));
    out.push_str(&rows_csv(&d.reordered));
    Ok(out)
}

fn segment(rows: &[Vec<f64>]) -> Res<String> {
    if rows.len() != 2 {
        return Err(Error::InvalidParameter(format!("segment needs exactly 2 rows, got {}", rows.len())).into());
    }
    let from = normalize_point(&rows[0])?;
    let to = normalize_point(&rows[1])?;
    // the library orders bends from its second argument to its first
    let seg = trop_segment(&to, &from)?;
    Ok(rows_csv(&seg.bends().iter().map(|b| b.coords().to_vec()).collect::<Vec<_>>()))
}

fn fwpoint(rows: &[Vec<f64>], method: FwMethodArg, penalty: f64, max_iters: usize) -> Res<String> {
    let p = TropicalPolytope::from_rows(rows)?;
    let r = match method {
        FwMethodArg::Lp => fermat_weber_lp(&p)?,
        FwMethodArg::Grad => fermat_weber_subgradient(&p, &SubgradientConfig { max_iters, ..Default::default() })?,
        FwMethodArg::Reg => {
            fermat_weber_regularized(&p, &RegularizedFWConfig { max_iters, ..RegularizedFWConfig::new(penalty) })?
        }
    };
    let method = serde_json::to_value(r.method).expect("method serializes");
    let mut out = format!(
        "# method={} objective={} distance_sum={} penalty={} iterations={} converged={}\n",
        method.as_str().unwrap_or_default(),
        fmt_num(r.objective),
        fmt_num(r.distance_sum),
        fmt_num(r.penalty),
        r.iterations,
        r.converged
    );
    push_row(&mut out, r.point.coords());
    Ok(out)
}

fn default_start(p: &TropicalPolytope) -> Res<TropicalPoint> {
    let mut mean = vec![0.0; p.dim()];
    for g in p.generators() {
        for (m, x) in mean.iter_mut().zip(g.coords()) {
            *m += x / p.len() as f64;
        }
    }
    Ok(project_onto_polytope(p, &TropicalPoint::new(mean)?)?)
}

fn sample(cli: &Cli, args: &SampleArgs) -> Res<String> {
    let rows = read_rows(&args.polytope, cli.header)?;
    let p = TropicalPolytope::from_rows(&rows)?;
    let target = match (&args.center, args.sigma) {
        (Some(c), Some(s)) => {
            let mu = normalize_point(&parse_point(c)?)?;
            if mu.dim() != p.dim() {
                return Err(Error::DimensionMismatch { expected: p.dim(), found: mu.dim() }.into());
            }
            Some(CenterTarget::new(mu, s)?)
        }
        _ => None,
    };
    if args.n == 0 {
        return Err(Error::InvalidParameter("--n must be >= 1".into()).into());
    }
    let draws: Vec<TropicalPoint> = match args.mode {
        SampleMode::Segment => {
            if p.len() != 2 {
                return Err(Error::InvalidParameter(format!("segment mode needs 2 rows, got {}", p.len())).into());
            }
            let (from, to) = (&p.generators()[0], &p.generators()[1]);
            let mut rng = stream_rng(cli.seed, 0);
            (0..args.n)
                .map(|_| match &target {
                    Some(t) => sample_segment_centered(to, from, t, &mut rng),
                    None => sample_segment_uniform(to, from, &mut rng),
                })
                .collect::<Result<_, _>>()?
        }
        SampleMode::Polytope => {
            if !(0.0..1.0).contains(&args.burnin) {
                return Err(Error::InvalidParameter(format!("--burnin must be in [0, 1), got {}", args.burnin)).into());
            }
            let x0 = match &args.start {
                Some(s) => normalize_point(&parse_point(s)?)?,
                None => default_start(&p)?,
            };
            let burn = (args.n as f64 * args.burnin).ceil() as usize;
            let config = ChainConfig { tol: cli.tol, ..ChainConfig::new(args.steps, cli.seed) };
            let chains = run_chains(&p, &x0, args.n + burn, &config, target.as_ref(), args.chains.max(1), cli.parallel)?;
            chains.into_iter().flat_map(|c| c.into_iter().skip(burn)).collect()
        }
    };
    Ok(rows_csv(&draws.iter().map(|d| d.coords().to_vec()).collect::<Vec<_>>()))
}

fn ball(rows: &[Vec<f64>]) -> Res<String> {
    let p = TropicalPolytope::from_rows(rows)?;
    let b = min_enclosing_ball(&p)?;
    let gens: Vec<Vec<f64>> = ball_generators(&b).generators().iter().map(|g| rounded(g.coords())).collect();
    Ok(json_text(&json!({
        "center": rounded(b.center.coords()),
        "radius": round10(b.radius),
        "generators": gens,
        "volume": round10(b.volume()?),
    })))
}

/// Splits off a 0/1 label column (the last one by default).
fn split_labels(rows: Vec<Vec<f64>>, label_col: Option<usize>) -> Res<(Vec<Vec<f64>>, Vec<bool>)> {
    let width = rows[0].len();
    let col = label_col.unwrap_or(width.saturating_sub(1));
    if col >= width {
        return Err(Error::DimensionMismatch { expected: width, found: col + 1 }.into());
    }
    let mut points = Vec::with_capacity(rows.len());
    let mut labels = Vec::with_capacity(rows.len());
    for (i, mut r) in rows.into_iter().enumerate() {
        let y = r.remove(col);
        labels.push(match y {
            v if v == 0.0 => false,
            v if v == 1.0 => true,
            v => return Err(CliError::Usage(format!("row {i}: label must be 0 or 1, got {v}"))),
        });
        points.push(r);
    }
    Ok((points, labels))
}

fn load_logistic(path: &Path) -> Res<LogisticModel> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    match model_from_json(&text)? {
        Model::Logistic(m) => Ok(m),
        Model::Pca(_) => Err(Error::Model("expected a logistic model, found a pca model".into()).into()),
    }
}

fn predictions(model: &LogisticModel, rows: &[Vec<f64>]) -> Res<Vec<f64>> {
    Ok(rows.iter().map(|r| model.predict_prob(r)).collect::<Result<_, _>>()?)
}

fn logistic(cli: &Cli, action: &LogisticAction) -> Res<String> {
    match action {
        LogisticAction::Train { input, label_col, penalty, holdout_every } => {
            let (rows, labels) = split_labels(read_rows(input, cli.header)?, *label_col)?;
            let k = holdout_every.unwrap_or(0);
            if *holdout_every == Some(0) || k == 1 {
                return Err(Error::InvalidParameter("--holdout-every must be >= 2".into()).into());
            }
            let held = |i: usize| k > 0 && i % k == 0;
            let pick = |keep: bool| -> (Vec<Vec<f64>>, Vec<bool>) {
                rows.iter()
                    .zip(&labels)
                    .enumerate()
                    .filter(|(i, _)| held(*i) != keep)
                    .map(|(_, (r, &y))| (r.clone(), y))
                    .unzip()
            };
            let (xtr, ytr) = pick(true);
            let config = LogisticConfig { seed: cli.seed, ..Default::default() };
            let model = fit_logistic(&xtr, &ytr, *penalty, &config)?;
            if k > 0 {
                let (xte, yte) = pick(false);
                let auc = roc_auc(&predictions(&model, &xte)?, &yte)?.auc;
                eprintln!("holdout auc={} rows={}", fmt_num(auc), xte.len());
            }
            let mut text = model_to_json(&Model::Logistic(model));
            text.push('\n');
            Ok(text)
        }
        LogisticAction::Predict { input, model, label_col } => {
            let model = load_logistic(model)?;
            let mut rows = read_rows(input, cli.header)?;
            if let Some(col) = label_col {
                if *col >= rows[0].len() {
                    return Err(Error::DimensionMismatch { expected: rows[0].len(), found: col + 1 }.into());
                }
                rows.iter_mut().for_each(|r| {
                    r.remove(*col);
                });
            }
            let mut out = String::new();
            for p in predictions(&model, &rows)? {
                out.push_str(&fmt_num(p));
                out.push('\n');
            }
            Ok(out)
        }
        LogisticAction::Roc { input, model, label_col } => {
            let model = load_logistic(model)?;
            let (rows, labels) = split_labels(read_rows(input, cli.header)?, *label_col)?;
            let curve = roc_auc(&predictions(&model, &rows)?, &labels)?;
            let mut out = String::from("# fpr,tpr\n");
            for (f, t) in &curve.points {
                push_row(&mut out, &[*f, *t]);
            }
            out.push_str(&format!("# auc={}\n", fmt_num(curve.auc)));
            Ok(out)
        }
    }
}

fn pca(cli: &Cli, args: &PcaArgs) -> Res<String> {
    let rows = read_rows(&args.input, cli.header)?;
    let data = TropicalPolytope::from_rows(&rows)?;
    let initial: Vec<Vec<f64>> = match args.init {
        PcaInit::Data => data.generators().iter().take(3).map(|g| g.coords().to_vec()).collect(),
        PcaInit::Random => {
            // stream 0 belongs to the fit itself
            let mut rng = stream_rng(cli.seed, u64::MAX);
            (0..3).map(|_| random_hull_point(&data, &mut rng).into_inner()).collect()
        }
    };
    if initial.len() < 3 {
        return Err(Error::TooFewPoints { needed: 3, found: initial.len() }.into());
    }
    let config = PcaConfig { outer_iters: args.iters, chain_steps: args.steps, seed: cli.seed };
    let triangle = fit_tropical_pca(&rows, &initial, &config)?;
    let xy = pca_plot_coords(&triangle, &rows)?;
    let mut out = format!("# objective={}\n", fmt_num(triangle.objective));
    for (i, v) in triangle.vertices.iter().enumerate() {
        out.push_str(&format!("# vertex{i}={}\n", fmt_row(v.coords())));
    }
    out.push_str("# x,y\n");
    for p in &xy {
        push_row(&mut out, p);
    }
    if let Some(path) = &args.model {
        let text = model_to_json(&Model::Pca(triangle)) + "\n";
        fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(out)
}

/// Splits Newick text into trees at each top-level `;`.
fn split_trees(text: &str) -> Vec<&str> {
    let mut trees = Vec::new();
    let (mut start, mut quoted) = (0, false);
    for (i, c) in text.char_indices() {
        match c {
            '\'' => quoted = !quoted,
            ';' if !quoted => {
                trees.push(&text[start..=i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !text[start..].trim().is_empty() {
        trees.push(&text[start..]);
    }
    trees.into_iter().filter(|t| !t.trim().is_empty()).collect()
}

/// Reads ultrametric vectors, taking a pair-label header when `--header`
/// is set or when the first line is not numeric.
fn read_vectors(cli: &Cli, input: &str) -> Res<Vec<UltrametricVector>> {
    let text = read_text(input)?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or_default();
    let looks_like_header = first.split(',').any(|f| f.trim().parse::<f64>().is_err());
    let table = parse_table(&text, cli.header || looks_like_header)?;
    if table.rows.is_empty() {
        return Err(Error::Empty.into());
    }
    table
        .rows
        .into_iter()
        .map(|values| {
            Ok(match &table.header {
                Some(h) => UltrametricVector::from_pair_header(values, h)?,
                None => UltrametricVector::unlabeled(values)?,
            })
        })
        .collect()
}

fn tree(cli: &Cli, action: &TreeAction) -> Res<String> {
    match action {
        TreeAction::ToVector { input, normalize } => {
            let text = read_text(input)?;
            let mut out = String::new();
            let mut labels: Option<Vec<String>> = None;
            let mut base = 0;
            for chunk in split_trees(&text) {
                let tree = parse_newick(chunk).map_err(|e| match e {
                    Error::Parse { offset, message } => Error::Parse { offset: offset + base, message },
                    other => other,
                })?;
                base += chunk.len();
                let v = tree_to_vector(&tree, *normalize)?;
                match &labels {
                    None => {
                        out.push_str(&v.pair_labels().join(","));
                        out.push('\n');
                        labels = Some(v.labels().to_vec());
                    }
                    Some(l) if l.as_slice() != v.labels() => {
                        return Err(Error::BadDimension("trees must share one leaf set".into()).into());
                    }
                    Some(_) => {}
                }
                push_row(&mut out, v.values());
            }
            if labels.is_none() {
                return Err(Error::Empty.into());
            }
            Ok(out)
        }
        TreeAction::FromVector { input } => {
            let mut out = String::new();
            for v in read_vectors(cli, input)? {
                out.push_str(&vector_to_tree(&v)?.to_newick());
                out.push('\n');
            }
            Ok(out)
        }
        TreeAction::Check { input } => {
            let mut out = String::new();
            for row in read_table(input, cli.header)?.rows {
                let verdict = if is_ultrametric(&row, cli.tol)? { "ultrametric" } else { "not ultrametric" };
                out.push_str(verdict);
                out.push('\n');
            }
            Ok(out)
        }
    }
}

fn parse_counts(text: &str) -> Res<Vec<usize>> {
    text.split(',')
        .map(|c| c.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad count {c:?}"))))
        .collect()
}

fn labeled_csv(d: &LabeledData) -> String {
    let mut out = String::new();
    for (r, &y) in d.rows.iter().zip(&d.labels) {
        out.push_str(&fmt_row(r));
        out.push_str(&format!(",{y}\n"));
    }
    out
}

fn synth(cli: &Cli, kind: &SynthKind) -> Res<String> {
    let data = match kind {
        SynthKind::Clusters { centers, counts, sigma } => {
            let centers = centers.split(';').map(parse_point).collect::<Res<Vec<_>>>()?;
            gaussian_clusters(&centers, &parse_counts(counts)?, *sigma, cli.seed)?
        }
        SynthKind::Trees { leaves, counts, separation, sigma } => {
            let counts = parse_counts(counts)?;
            let [a, b] = counts[..] else {
                return Err(CliError::Usage("tree data needs two class counts".into()));
            };
            ultrametric_clusters(*leaves, [a, b], *separation, *sigma, cli.seed)?
        }
    };
    Ok(labeled_csv(&data))
}

use tropml::learn::{kde_outlier_scores, projection_objective, PLOT_CORNERS};
use tropml::phylo::is_ultrametric;
use tropml::rng::stream_rng;
use tropml::sampler::random_hull_point;
use tropml::synth::{gaussian_clusters, ultrametric_clusters};
use tropml::{
    fit_logistic, fit_tropical_pca, kde_fit, kde_scores, pca_plot_coords, roc_auc, LogisticConfig,
    PcaConfig, TropicalPolytope,
};

fn split<T: Clone>(items: &[T], every: usize) -> (Vec<T>, Vec<T>) {
    let train = items.iter().enumerate().filter(|(i, _)| i % every != 0).map(|(_, x)| x.clone()).collect();
    let test = items.iter().enumerate().filter(|(i, _)| i % every == 0).map(|(_, x)| x.clone()).collect();
    (train, test)
}

#[test]
fn logistic_separates_gaussian_clusters() {
    for seed in 0..5 {
        let d = gaussian_clusters(&[vec![0.0, 0.0, 0.0], vec![0.0, 10.0, 0.0]], &[1000, 1000], 1.0, seed).unwrap();
        let labels: Vec<bool> = d.labels.iter().map(|&l| l == 1).collect();
        let (xtr, xte) = split(&d.rows, 5);
        let (ytr, yte) = split(&labels, 5);
        let m = fit_logistic(&xtr, &ytr, 0.0, &LogisticConfig { seed, ..Default::default() }).unwrap();
        let scores: Vec<f64> = xte.iter().map(|x| m.predict_prob(x).unwrap()).collect();
        let auc = roc_auc(&scores, &yte).unwrap().auc;
        assert!(auc >= 0.95, "seed {seed}: AUC {auc}");
    }
}

#[test]
fn logistic_on_gene_trees_with_ultrametric_penalty() {
    let d = ultrametric_clusters(5, [150, 150], 2.0, 0.3, 4).unwrap();
    let labels: Vec<bool> = d.labels.iter().map(|&l| l == 1).collect();
    let (xtr, xte) = split(&d.rows, 5);
    let (ytr, yte) = split(&labels, 5);
    let m = fit_logistic(&xtr, &ytr, 1e4, &LogisticConfig::default()).unwrap();
    assert!(is_ultrametric(m.omega0.coords(), 1e-3).unwrap());
    assert!(is_ultrametric(m.omega1.coords(), 1e-3).unwrap());
    let scores: Vec<f64> = xte.iter().map(|x| m.predict_prob(x).unwrap()).collect();
    let auc = roc_auc(&scores, &yte).unwrap().auc;
    assert!(auc >= 0.95, "AUC {auc}");
}

#[test]
fn kde_flags_appended_outliers() {
    let a = gaussian_clusters(&[vec![0.0, 0.0, 0.0]], &[1000], 1.0, 8).unwrap().rows;
    let b = gaussian_clusters(&[vec![0.0, 10.0, -10.0]], &[100], 1.0, 9).unwrap().rows;
    let m = kde_fit(&a, 2.0).unwrap();
    let mut bw = m.bandwidths.clone();
    bw.sort_by(f64::total_cmp);
    let separation = tropml::tropical::raw_distance(&[0.0, 0.0, 0.0], &[0.0, 10.0, -10.0]);
    assert!(separation >= 10.0 * bw[bw.len() / 2]);
    let mut scores = kde_scores(&m, &a, true).unwrap();
    scores.extend(kde_outlier_scores(&a, &b, 2.0).unwrap());
    // low density means outlier, so rank by negated score
    let outlyingness: Vec<f64> = scores.iter().map(|s| -s).collect();
    let is_b: Vec<bool> = (0..scores.len()).map(|i| i >= a.len()).collect();
    let auc = roc_auc(&outlyingness, &is_b).unwrap().auc;
    assert!(auc >= 0.95, "AUC {auc}");
}

#[test]
fn pca_improves_on_its_start() {
    let d = gaussian_clusters(&[vec![0.0, 0.0, 0.0]], &[100], 5.0, 17).unwrap();
    let data = TropicalPolytope::from_rows(&d.rows).unwrap();
    let mut rng = stream_rng(17, 1);
    let init: Vec<Vec<f64>> = (0..3).map(|_| random_hull_point(&data, &mut rng).into_inner()).collect();
    let t = fit_tropical_pca(&d.rows, &init, &PcaConfig { outer_iters: 1000, chain_steps: 50, seed: 17 }).unwrap();
    let start = projection_objective(&TropicalPolytope::from_rows(&init).unwrap(), &data);
    assert_eq!(t.trace[0], start);
    assert!(t.objective <= start);
    assert!(t.trace.windows(2).all(|w| w[1] <= w[0]));
    let xy = pca_plot_coords(&t, &d.rows).unwrap();
    let max_norm = PLOT_CORNERS.iter().map(|c| (c[0] * c[0] + c[1] * c[1]).sqrt()).fold(0.0, f64::max);
    assert!(xy.iter().all(|p| (p[0] * p[0] + p[1] * p[1]).sqrt() <= max_norm + 1e-12));
}

#[test]
fn learners_are_translation_invariant() {
    let d = gaussian_clusters(&[vec![0.0, 0.0, 0.0, 0.0], vec![0.0, 4.0, 0.0, 2.0]], &[30, 30], 1.0, 6).unwrap();
    let shifted: Vec<Vec<f64>> = d.rows.iter().map(|r| r.iter().map(|v| v + 12.25).collect()).collect();
    let labels: Vec<bool> = d.labels.iter().map(|&l| l == 1).collect();
    let m = fit_logistic(&d.rows, &labels, 0.0, &LogisticConfig::default()).unwrap();
    for (a, b) in d.rows.iter().zip(&shifted) {
        assert!((m.predict_prob(a).unwrap() - m.predict_prob(b).unwrap()).abs() < 1e-9);
    }
    let cfg = PcaConfig { outer_iters: 40, chain_steps: 5, seed: 1 };
    let a = fit_tropical_pca(&d.rows, &d.rows[..3], &cfg).unwrap();
    let b = fit_tropical_pca(&shifted, &shifted[..3], &cfg).unwrap();
    assert!((a.objective - b.objective).abs() < 1e-9);
    let sa = kde_scores(&kde_fit(&d.rows, 1.0).unwrap(), &d.rows, true).unwrap();
    let sb = kde_scores(&kde_fit(&shifted, 1.0).unwrap(), &shifted, true).unwrap();
    let rank = |s: &[f64]| {
        let mut idx: Vec<usize> = (0..s.len()).collect();
        idx.sort_by(|&i, &j| s[i].total_cmp(&s[j]));
        idx
    };
    assert_eq!(rank(&sa), rank(&sb));
}

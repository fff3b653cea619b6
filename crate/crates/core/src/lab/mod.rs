//! Seeded experiment sweeps.
//!
//! A run expands an [`ExperimentConfig`] into one job per `(p, trial)`,
//! executes the jobs on the rayon pool and returns the rows in `(p, trial)`
//! order. A trial's randomness depends only on `(base_seed, p, trial)`, so a
//! rerun reproduces every row bit for bit.

mod config;
mod record;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;

pub use config::{
    parse_k_list, parse_primes, ExperimentConfig, Family, MethodChoice, SizeRule, XRule,
};
pub use record::{emit, ExperimentRecord, Format, Table, Value, BASE_COLUMNS};

use crate::energy::{
    aymrs_bound, brute_census, energy_spectrum, line_solution_count, murphy_lhs_rhs,
    BoundComparison, EnergySpectrum,
};
use crate::error::{Error, Result};
use crate::exact::{big, integer, ratio, Rational};
use crate::field::PrimeField;
use crate::rng::{rng_from_seed, stream_seed, trial_seed};
use crate::sets::FpSet;
use crate::sumprod::{char_fourth_moment, solution_count, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Bkt,
    Spectrum,
    Count,
    Sweep,
    Census,
    Rudnev,
    Murphy,
    Split,
    CharMoment,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Bkt,
        Experiment::Spectrum,
        Experiment::Count,
        Experiment::Sweep,
        Experiment::Census,
        Experiment::Rudnev,
        Experiment::Murphy,
        Experiment::Split,
        Experiment::CharMoment,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Bkt => "bkt",
            Experiment::Spectrum => "spectrum",
            Experiment::Count => "count",
            Experiment::Sweep => "sweep",
            Experiment::Census => "census",
            Experiment::Rudnev => "rudnev",
            Experiment::Murphy => "murphy",
            Experiment::Split => "split",
            Experiment::CharMoment => "charmoment",
        }
    }

    /// Quantity columns, in output order.
    pub fn columns(self) -> Vec<&'static str> {
        const BOUNDS: [&str; 8] = [
            "x_rule",
            "x_size",
            "lhs",
            "base_energy",
            "bound_a",
            "bound_b",
            "ratio_a",
            "ratio_b",
        ];
        match self {
            Experiment::Bkt => vec![
                "lhs",
                "rhs",
                "equal",
                "corollary_lhs",
                "corollary_bound",
                "corollary_holds",
                "bounds_ok",
            ],
            Experiment::Spectrum => vec!["xi", "energy", "deviation"],
            Experiment::Count => vec![
                "method",
                "signs",
                "n_total",
                "n_zero",
                "n_nonzero",
                "main_term",
                "main_term_ratio",
                "residual",
                "support_size",
            ],
            Experiment::Sweep => vec![
                "signs",
                "support_size",
                "coverage",
                "above_half_p",
                "cs_bound",
                "n_total",
                "n_zero",
                "n_nonzero",
                "main_term_ratio",
                "residual",
                "bkt_equal",
                "exi2_identity",
                "exi2_bound",
            ],
            Experiment::Census => vec![
                "k_param",
                "k",
                "over_threshold_count",
                "over_threshold_per_k4",
                "bucket_sizes",
                "remainder",
                "k_le_p_over_a",
                "k_le_sqrt_a",
                "recount_matches",
                "corollary_lhs",
                "corollary_bound",
                "corollary_holds",
            ],
            Experiment::Rudnev => {
                let mut c = BOUNDS.to_vec();
                c.extend([
                    "precondition_ratio",
                    "line_count",
                    "aymrs_bound",
                    "line_ratio",
                ]);
                c
            }
            Experiment::Murphy => {
                let mut c = BOUNDS.to_vec();
                c.push("precondition_ratio");
                c
            }
            Experiment::Split => vec![
                "k",
                "k_cubed",
                "very_small_sum",
                "small_sum",
                "large_sum",
                "total",
                "very_small_term",
                "small_term",
                "large_term",
                "very_small_ratio",
                "small_ratio",
                "large_ratio",
                "total_ratio",
            ],
            Experiment::CharMoment => vec!["moment", "n_nonzero", "equal"],
        }
    }

    fn validate(self, config: &ExperimentConfig) -> Result<()> {
        match self {
            Experiment::Census => {
                for k in &config.k_list {
                    match k {
                        None => {
                            return Err(Error::BadParameter(
                                "census has no default K; give explicit values".into(),
                            ))
                        }
                        Some(k) if *k < integer(1) => {
                            return Err(Error::BadParameter(format!(
                                "census needs K >= 1, got {k}"
                            )))
                        }
                        _ => {}
                    }
                }
                Ok(())
            }
            Experiment::Murphy if matches!(config.x_rule, XRule::Large(_)) => Err(
                Error::BadParameter("the large-energy X rule applies to rudnev only".into()),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::BadParameter(format!("unknown experiment {s:?}")))
    }
}

const DEFAULT_CENSUS_K: [u32; 3] = [2, 4, 8];

type Row = Vec<(String, Value)>;

fn row<const N: usize>(pairs: [(&str, Value); N]) -> Row {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// The generated inputs of one trial.
pub struct Trial<'a> {
    pub config: &'a ExperimentConfig,
    pub field: Arc<PrimeField>,
    pub seed: u64,
    pub index: usize,
    pub a: FpSet,
}

impl Trial<'_> {
    /// `B, C, D`: copies of `A`, or random affine images `c + λA` when the
    /// config asks for them.
    pub fn bcd(&self) -> Result<[FpSet; 3]> {
        if !self.config.affine {
            return Ok([self.a.clone(), self.a.clone(), self.a.clone()]);
        }
        let p = self.field.p();
        let mut rng = rng_from_seed(stream_seed(self.seed, 1));
        let mut next = || {
            let lambda = self.field.elem(rng.gen_range(1..p));
            let c = self.field.elem(rng.gen_range(0..p));
            self.a.affine_image(lambda, c)
        };
        Ok([next()?, next()?, next()?])
    }

    fn x_set(&self, spectrum: Option<&EnergySpectrum>) -> Result<FpSet> {
        self.config.x_rule.build(&self.field, self.seed, |k| {
            let spec = spectrum.expect("large X rule needs the spectrum");
            let cube = big((self.a.len() as u128).pow(3));
            let over = spec
                .iter()
                .filter(|&(_, e)| big(e) * k.numer() > &cube * k.denom())
                .map(|(xi, _)| xi);
            Ok(FpSet::from_field_elements(&self.field, over))
        })
    }
}

/// Seed of trial `index` at prime `p`.
pub fn seed_for(base_seed: u64, p: u64, index: usize) -> u64 {
    trial_seed(stream_seed(base_seed, p), index as u64)
}

/// Runs `experiment` over every `(p, trial)` of `config`.
pub fn run(experiment: Experiment, config: &ExperimentConfig) -> Result<Table> {
    config.validate()?;
    experiment.validate(config)?;
    let fields = config
        .primes
        .iter()
        .map(|&p| PrimeField::new(p).map(Arc::new))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(&Arc<PrimeField>, usize)> = fields
        .iter()
        .flat_map(|f| (0..config.trials).map(move |i| (f, i)))
        .collect();
    let records = jobs
        .par_iter()
        .map(|&(field, index)| run_trial(experiment, config, field, index))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(Table {
        columns: experiment.columns(),
        records,
    })
}

pub fn run_sweep(config: &ExperimentConfig) -> Result<Table> {
    run(Experiment::Sweep, config)
}

pub fn run_census(config: &ExperimentConfig) -> Result<Table> {
    run(Experiment::Census, config)
}

pub fn run_rudnev(config: &ExperimentConfig) -> Result<Table> {
    run(Experiment::Rudnev, config)
}

pub fn run_murphy(config: &ExperimentConfig) -> Result<Table> {
    run(Experiment::Murphy, config)
}

fn run_trial(
    experiment: Experiment,
    config: &ExperimentConfig,
    field: &Arc<PrimeField>,
    index: usize,
) -> Vec<ExperimentRecord> {
    let seed = seed_for(config.base_seed, field.p(), index);
    let record = |n: Option<usize>, quantities: Row, error: Option<String>| ExperimentRecord {
        p: field.p(),
        family: config.family.to_string(),
        n,
        seed,
        trial_index: index,
        quantities,
        error,
    };
    let a = match config
        .family
        .build(field, config.size.size(field.p()), stream_seed(seed, 0))
    {
        Ok(a) => a,
        Err(e) => return vec![record(None, Vec::new(), Some(e.to_string()))],
    };
    let n = Some(a.len());
    let trial = Trial {
        config,
        field: field.clone(),
        seed,
        index,
        a,
    };
    match trial_rows(experiment, &trial) {
        Ok(rows) => rows.into_iter().map(|q| record(n, q, None)).collect(),
        Err(e) => vec![record(n, Vec::new(), Some(e.to_string()))],
    }
}

fn trial_rows(experiment: Experiment, t: &Trial) -> Result<Vec<Row>> {
    let a = &t.a;
    let config = t.config;
    match experiment {
        Experiment::Bkt => {
            let spec = energy_spectrum(a)?;
            let check = spec.bkt_check();
            let units = FpSet::from_elements(&t.field, 1..t.field.p());
            let cor = spec.bkt_corollary_check(&units)?;
            Ok(vec![row([
                ("lhs", check.lhs.into()),
                ("rhs", check.rhs.into()),
                ("equal", check.equal.into()),
                ("corollary_lhs", cor.lhs.into()),
                ("corollary_bound", cor.bound.into()),
                ("corollary_holds", cor.holds.into()),
                ("bounds_ok", spec.first_bound_violation().is_none().into()),
            ])])
        }
        Experiment::Spectrum => {
            let spec = energy_spectrum(a)?;
            let p = t.field.p();
            Ok(spec
                .iter()
                .map(|(xi, e)| {
                    let dev = ratio(big(e) * BigInt::from(p) - big((a.len() as u128).pow(4)), p);
                    row([
                        ("xi", xi.value().into()),
                        ("energy", e.into()),
                        ("deviation", dev.into()),
                    ])
                })
                .collect())
        }
        Experiment::Count => {
            let [b, c, d] = t.bcd()?;
            config
                .method
                .methods()
                .into_iter()
                .map(|m| {
                    let rec = solution_count(a, &b, &c, &d, config.signs, m)?;
                    Ok(row([
                        ("method", m.as_str().into()),
                        ("signs", config.signs.to_string().into()),
                        ("n_total", rec.n_total.into()),
                        ("n_zero", rec.n_zero.into()),
                        ("n_nonzero", rec.n_nonzero.into()),
                        ("main_term", rec.main_term.clone().into()),
                        ("main_term_ratio", rec.main_term_ratio().into()),
                        ("residual", rec.residual().into()),
                        ("support_size", rec.support_size.into()),
                    ]))
                })
                .collect()
        }
        Experiment::Sweep => {
            let [b, c, d] = t.bcd()?;
            let method = match config.method {
                MethodChoice::One(m) => m,
                MethodChoice::All => Method::Transform,
            };
            let rec = solution_count(a, &b, &c, &d, config.signs, method)?;
            let spec = energy_spectrum(a)?;
            let exi2 = spec.exi2_check();
            let p = t.field.p();
            Ok(vec![row([
                ("signs", config.signs.to_string().into()),
                ("support_size", rec.support_size.into()),
                ("coverage", (rec.support_size as f64 / p as f64).into()),
                ("above_half_p", (2 * rec.support_size as u64 > p).into()),
                (
                    "cs_bound",
                    ratio(big(rec.mass) * big(rec.mass), big(rec.n_total)).into(),
                ),
                ("n_total", rec.n_total.into()),
                ("n_zero", rec.n_zero.into()),
                ("n_nonzero", rec.n_nonzero.into()),
                ("main_term_ratio", rec.main_term_ratio().into()),
                ("residual", rec.residual().into()),
                ("bkt_equal", spec.bkt_check().equal.into()),
                ("exi2_identity", exi2.identity_holds.into()),
                ("exi2_bound", exi2.lemma_bound_holds.into()),
            ])])
        }
        Experiment::Census => {
            let spec = energy_spectrum(a)?;
            let units = FpSet::from_elements(&t.field, 1..t.field.p());
            let cor = spec.bkt_corollary_check(&units)?;
            let ks: Vec<Rational> = if config.k_list.is_empty() {
                DEFAULT_CENSUS_K.iter().map(|&k| integer(k)).collect()
            } else {
                config.k_list.iter().flatten().cloned().collect()
            };
            ks.iter()
                .map(|k| {
                    let rep = spec.census(k)?;
                    let recount = brute_census(spec.energies(), t.field.p(), a.len(), k)?;
                    let buckets: Vec<String> =
                        rep.bucket_sizes.iter().map(usize::to_string).collect();
                    Ok(row([
                        ("k_param", k.clone().into()),
                        ("k", rep.k.into()),
                        ("over_threshold_count", rep.over_threshold_count.into()),
                        ("over_threshold_per_k4", rep.over_threshold_per_k4().into()),
                        ("bucket_sizes", buckets.join(";").into()),
                        ("remainder", rep.remainder.into()),
                        ("k_le_p_over_a", rep.k_le_p_over_a.into()),
                        ("k_le_sqrt_a", rep.k_le_sqrt_a.into()),
                        ("recount_matches", (rep == recount).into()),
                        ("corollary_lhs", cor.lhs.clone().into()),
                        ("corollary_bound", cor.bound.into()),
                        ("corollary_holds", cor.holds.into()),
                    ]))
                })
                .collect()
        }
        Experiment::Rudnev => {
            let spec = energy_spectrum(a)?;
            let x = t.x_set(Some(&spec))?;
            let cmp = spec.rudnev(&x)?;
            let lines = line_solution_count(a, &x)?;
            let aymrs = aymrs_bound(a.len(), x.len());
            let mut r = bound_row(&config.x_rule, &cmp);
            r.extend(row([
                ("line_count", lines.into()),
                ("aymrs_bound", aymrs.into()),
                (
                    "line_ratio",
                    crate::exact::ratio_f64(lines as f64, aymrs).into(),
                ),
            ]));
            Ok(vec![r])
        }
        Experiment::Murphy => {
            let x = t.x_set(None)?;
            Ok(vec![bound_row(&config.x_rule, &murphy_lhs_rhs(a, &x)?)])
        }
        Experiment::Split => {
            let spec = energy_spectrum(a)?;
            let ks = if config.k_list.is_empty() {
                vec![None]
            } else {
                config.k_list.clone()
            };
            ks.into_iter()
                .map(|k| {
                    let r = spec.proposition_split(k)?;
                    Ok(row([
                        ("k", r.k.into()),
                        ("k_cubed", r.k_cubed.clone().into()),
                        ("very_small_sum", r.very_small_sum.clone().into()),
                        ("small_sum", r.small_sum.clone().into()),
                        ("large_sum", r.large_sum.clone().into()),
                        ("total", r.total.clone().into()),
                        ("very_small_term", r.very_small_term.into()),
                        ("small_term", r.small_term.into()),
                        ("large_term", r.large_term.into()),
                        ("very_small_ratio", r.very_small_ratio().into()),
                        ("small_ratio", r.small_ratio().into()),
                        ("large_ratio", r.large_ratio().into()),
                        ("total_ratio", r.total_ratio(t.field.p(), a.len()).into()),
                    ]))
                })
                .collect()
        }
        Experiment::CharMoment => {
            let moment = char_fourth_moment(a)?;
            let rec = solution_count(a, a, a, a, crate::sumprod::Signs::MM, Method::Transform)?;
            Ok(vec![row([
                ("moment", moment.into()),
                ("n_nonzero", rec.n_nonzero.into()),
                ("equal", (moment == rec.n_nonzero).into()),
            ])])
        }
    }
}

fn bound_row(rule: &XRule, cmp: &BoundComparison) -> Row {
    row([
        ("x_rule", rule.to_string().into()),
        ("x_size", cmp.x_size.into()),
        ("lhs", cmp.lhs.into()),
        ("base_energy", cmp.base_energy.into()),
        ("bound_a", cmp.bound_a.into()),
        ("bound_b", cmp.bound_b.into()),
        ("ratio_a", cmp.ratio_a.into()),
        ("ratio_b", cmp.ratio_b.into()),
        ("precondition_ratio", cmp.precondition_ratio.into()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumprod::Signs;

    fn tiny(family: &str) -> ExperimentConfig {
        ExperimentConfig {
            primes: vec![5],
            family: family.parse().unwrap(),
            size: SizeRule::Absolute(2),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn sweep_example() {
        let t = run_sweep(&tiny("elements:1,2")).unwrap();
        assert_eq!(t.records.len(), 1);
        let r = &t.records[0];
        assert_eq!(r.get("support_size"), Some(&Value::from(3usize)));
        assert_eq!(r.get("n_total"), Some(&Value::from(152u128)));
        assert_eq!(r.get("cs_bound"), Some(&Value::from(ratio(256, 152))));
        assert_eq!(r.get("bkt_equal"), Some(&Value::from(true)));
    }

    #[test]
    fn census_examples() {
        let mut cfg = tiny("elements:1,2");
        cfg.k_list = vec![Some(integer(2)), Some(integer(1))];
        let t = run_census(&cfg).unwrap();
        assert_eq!(t.records.len(), 2);
        assert_eq!(
            t.records[0].get("over_threshold_count"),
            Some(&Value::from(2usize))
        );
        assert_eq!(
            t.records[1].get("over_threshold_count"),
            Some(&Value::from(0usize))
        );
        cfg.k_list = vec![None];
        assert!(run_census(&cfg).is_err());
    }

    #[test]
    fn first_dilate_gives_additive_energy() {
        let mut cfg = tiny("elements:1,2");
        cfg.x_rule = XRule::First(1);
        let t = run_rudnev(&cfg).unwrap();
        assert_eq!(t.records[0].get("lhs"), Some(&Value::from(6u128)));
        let t = run_murphy(&cfg).unwrap();
        assert_eq!(t.records[0].get("lhs"), Some(&Value::from(4u128)));
    }

    #[test]
    fn rows_only_use_declared_columns() {
        let mut cfg = ExperimentConfig {
            primes: vec![31, 37],
            trials: 2,
            size: SizeRule::Absolute(6),
            k_list: vec![Some(integer(2))],
            x_rule: XRule::Random(4),
            method: MethodChoice::All,
            affine: true,
            ..ExperimentConfig::default()
        };
        for e in Experiment::ALL {
            if e == Experiment::Split {
                cfg.k_list = vec![None, Some(integer(2))];
            }
            let t = run(e, &cfg).unwrap();
            assert!(!t.records.is_empty());
            for r in &t.records {
                assert!(r.error.is_none(), "{e}: {:?}", r.error);
                for (k, _) in &r.quantities {
                    assert!(
                        t.columns.contains(&k.as_str()),
                        "{e}: undeclared column {k}"
                    );
                }
                assert_eq!(r.quantities.len(), t.columns.len(), "{e}");
            }
            let ordered: Vec<(u64, usize)> =
                t.records.iter().map(|r| (r.p, r.trial_index)).collect();
            let mut sorted = ordered.clone();
            sorted.sort();
            assert_eq!(ordered, sorted);
        }
    }

    #[test]
    fn failed_trials_are_recorded() {
        let cfg = ExperimentConfig {
            primes: vec![7],
            family: Family::Geometric {
                ratio: Some(2),
                a0: 1,
            },
            size: SizeRule::Absolute(5),
            ..ExperimentConfig::default()
        };
        let t = run(Experiment::Bkt, &cfg).unwrap();
        assert!(t.all_failed());
        assert_eq!(t.records[0].n, None);
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = tiny("random");
        cfg.trials = 0;
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = tiny("random");
        cfg.x_rule = XRule::Large(integer(2));
        assert!(run_murphy(&cfg).is_err());
        assert_eq!("sweep".parse::<Experiment>().unwrap(), Experiment::Sweep);
    }

    #[test]
    fn reruns_are_identical() {
        let cfg = ExperimentConfig {
            primes: vec![101, 103],
            trials: 5,
            base_seed: 99,
            signs: Signs(crate::sets::Sign::Plus, crate::sets::Sign::Minus),
            affine: true,
            ..ExperimentConfig::default()
        };
        let a = run_sweep(&cfg).unwrap().render(Format::Csv).unwrap();
        let b = run_sweep(&cfg).unwrap().render(Format::Csv).unwrap();
        assert_eq!(a, b);
        let seeds: std::collections::HashSet<_> = run_sweep(&cfg)
            .unwrap()
            .records
            .iter()
            .map(|r| r.seed)
            .collect();
        assert_eq!(seeds.len(), 10);
    }
}

//! Acceptance criteria 1 to 11.
//!
//! Every criterion runs in isolation, prints exactly one `PASS`/`FAIL` line
//! and the test fails at the end if any criterion failed.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::{Arc, OnceLock};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sumprodlab_core::energy::{
    bkt_closed_form, energy_spectrum, naive_energy_spectrum, EnergySpectrum,
};
use sumprodlab_core::exact::{integer, Rational};
use sumprodlab_core::lab::{self, Experiment, ExperimentConfig, Family, Format, SizeRule, Value};
use sumprodlab_core::sumprod::{
    adden_check, char_fourth_moment, exi2_check, solution_count, Method, Signs,
};
use sumprodlab_core::{FpSet, PrimeField};

type Outcome = Result<String, String>;

fn field(p: u64) -> Arc<PrimeField> {
    Arc::new(PrimeField::new(p).unwrap())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Trials shared by criteria 1 and 6.
struct SpectrumTrial {
    label: String,
    set: FpSet,
    spectrum: EnergySpectrum,
}

fn criterion1_trials() -> &'static Vec<SpectrumTrial> {
    static TRIALS: OnceLock<Vec<SpectrumTrial>> = OnceLock::new();
    TRIALS.get_or_init(|| {
        let primes = [101u64, 1009, 10007];
        let fields: Vec<_> = primes.iter().map(|&p| field(p)).collect();
        let families = [
            Family::Random,
            Family::Interval { a0: 0 },
            Family::Geometric { ratio: None, a0: 1 },
            Family::Subgroup { d: None },
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(0xB17);
        (0..200)
            .map(|t| {
                let f = &fields[t % 3];
                let family = &families[(t / 3) % 4];
                let max_n = (f.p() as f64).powf(0.7).floor() as usize;
                let n = rng.gen_range(2..=max_n);
                let set = family.build(f, n, rng.gen()).unwrap();
                let spectrum = energy_spectrum(&set).unwrap();
                SpectrumTrial {
                    label: format!("p={} family={} n={}", f.p(), family, set.len()),
                    set,
                    spectrum,
                }
            })
            .collect()
    })
}

fn c1_bkt() -> Outcome {
    let trials = criterion1_trials();
    for t in trials {
        let lhs = t.spectrum.total();
        let rhs = bkt_closed_form(t.set.p(), t.set.len());
        ensure(lhs == rhs, || {
            format!("{}: sum {lhs} != closed form {rhs}", t.label)
        })?;
    }
    Ok(format!("{} trials, exact equality", trials.len()))
}

fn c2_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let primes = [2u64, 3, 5, 7, 11, 13, 31, 61, 101, 127, 211, 257];
    for t in 0..50 {
        let f = field(primes[t % primes.len()]);
        let a = FpSet::random_uniform(&f, rng.gen_range(1..=f.size()), rng.gen()).unwrap();
        let fast = energy_spectrum(&a).unwrap();
        let naive = naive_energy_spectrum(&a).unwrap();
        ensure(fast == naive, || {
            format!("spectrum mismatch at p={} n={}", f.p(), a.len())
        })?;
    }
    for inst in criterion2_instances() {
        let counts: Vec<u128> = Method::ALL
            .iter()
            .map(|&m| {
                let [a, b, c, d] = &inst.sets;
                solution_count(a, b, c, d, inst.signs, m).unwrap().n_total
            })
            .collect();
        ensure(counts.iter().all(|&c| c == counts[0]), || {
            format!("{}: methods disagree {counts:?}", inst.label)
        })?;
    }
    Ok("50 spectra and 100 solution counts agree exactly".into())
}

struct CountInstance {
    label: String,
    sets: [FpSet; 4],
    signs: Signs,
}

fn criterion2_instances() -> &'static Vec<CountInstance> {
    static INSTANCES: OnceLock<Vec<CountInstance>> = OnceLock::new();
    INSTANCES.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 29, 31, 37, 53, 61];
        (0..100)
            .map(|t| {
                let f = field(primes[t % primes.len()]);
                let p = f.p();
                let n_max = 8.min(f.size());
                let a = FpSet::random_uniform(&f, rng.gen_range(1..=n_max), rng.gen()).unwrap();
                let other = |rng: &mut ChaCha8Rng| {
                    if t % 2 == 0 {
                        a.affine_image(f.elem(rng.gen_range(1..p)), f.elem(rng.gen_range(0..p)))
                            .unwrap()
                    } else {
                        FpSet::random_uniform(&f, rng.gen_range(1..=n_max), rng.gen()).unwrap()
                    }
                };
                let sets = [a.clone(), other(&mut rng), other(&mut rng), other(&mut rng)];
                let signs = Signs::ALL[t % 4];
                CountInstance {
                    label: format!("p={p} |A|={} signs={signs}", a.len()),
                    sets,
                    signs,
                }
            })
            .collect()
    })
}

fn c3_character_moment() -> Outcome {
    for inst in criterion2_instances() {
        let a = &inst.sets[0];
        let brute = solution_count(a, a, a, a, Signs::MM, Method::Brute).unwrap();
        let moment = char_fourth_moment(a).unwrap();
        ensure(moment == brute.n_nonzero, || {
            format!(
                "{}: moment {moment} != n_nonzero {}",
                inst.label, brute.n_nonzero
            )
        })?;
    }
    Ok("100 instances, exact".into())
}

fn c4_exi2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE512);
    let primes = [5u64, 31, 101, 1009, 10007];
    for t in 0..100 {
        let f = field(primes[t % primes.len()]);
        let a = FpSet::random_uniform(&f, rng.gen_range(1..=f.size()), rng.gen()).unwrap();
        let r = exi2_check(&a).unwrap();
        ensure(r.identity_holds, || {
            format!("identity fails at p={} n={}", f.p(), a.len())
        })?;
        ensure(r.lemma_bound_holds, || {
            format!("bound fails at p={} n={}", f.p(), a.len())
        })?;
    }
    Ok("100 trials, identity and bound hold exactly".into())
}

fn c5_adden() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xADDE);
    let small = [7u64, 11, 13, 31, 61];
    let large = [101u64, 1009, 10007];
    let mut brute_checked = 0;
    for t in 0..100 {
        let brute = t < 50;
        let p = if brute {
            small[t % small.len()]
        } else {
            large[t % large.len()]
        };
        let f = field(p);
        let n_max = if brute {
            // Keep |A|⁴ within the enumeration budget.
            f.size().min(50)
        } else {
            ((p as f64).powf(0.75) as usize).min(f.size())
        };
        let a = FpSet::random_uniform(&f, rng.gen_range(1..=n_max), rng.gen()).unwrap();
        let mut img = || {
            a.affine_image(f.elem(rng.gen_range(1..p)), f.elem(rng.gen_range(0..p)))
                .unwrap()
        };
        let (b, c, d) = (img(), img(), img());
        let rec = adden_check(&a, &b, &c, &d).unwrap();
        ensure(rec.holds, || {
            format!(
                "p={p} n={}: n_nonzero {} > {}",
                a.len(),
                rec.n_nonzero,
                rec.energy_sum
            )
        })?;
        if brute {
            let exact = solution_count(&a, &b, &c, &d, Signs::MM, Method::Brute).unwrap();
            ensure(exact.n_nonzero == rec.n_nonzero, || {
                format!(
                    "p={p}: brute n_nonzero {} != {}",
                    exact.n_nonzero, rec.n_nonzero
                )
            })?;
            brute_checked += 1;
        }
    }
    Ok(format!("100 trials hold ({brute_checked} brute-verified)"))
}

fn c6_energy_bounds() -> Outcome {
    let trials = criterion1_trials();
    let mut checked = 0usize;
    for t in trials {
        let n = t.set.len() as u128;
        let p = t.set.p() as u128;
        for (xi, e) in t.spectrum.iter() {
            ensure(n * n <= e && e <= n * n * n, || {
                format!("{} xi={xi}: E={e} outside [n², n³]", t.label)
            })?;
            ensure(
                BigInt::from(p) * BigInt::from(e) >= BigInt::from(n).pow(4),
                || format!("{} xi={xi}: pE < n⁴", t.label),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (trial, ξ) pairs"))
}

fn c7_affine_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xAFF1);
    let primes = [31u64, 101, 1009, 10007];
    for t in 0..50 {
        let f = field(primes[t % primes.len()]);
        let p = f.p();
        let a = FpSet::random_uniform(&f, rng.gen_range(1..=f.size() / 2), rng.gen()).unwrap();
        let (lambda, c) = (f.elem(rng.gen_range(1..p)), f.elem(rng.gen_range(0..p)));
        let img = a.affine_image(lambda, c).unwrap();
        ensure(
            energy_spectrum(&a).unwrap() == energy_spectrum(&img).unwrap(),
            || format!("p={p} λ={lambda} c={c}: spectra differ"),
        )?;
    }
    Ok("50 trials, entrywise equal".into())
}

fn c8_coverage() -> Outcome {
    let start = Instant::now();
    let config = ExperimentConfig {
        primes: vec![10007],
        family: Family::Random,
        size: "alpha:5/8,const:4".parse().unwrap(),
        trials: 20,
        base_seed: 8,
        ..ExperimentConfig::default()
    };
    let table = lab::run(Experiment::Sweep, &config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let n = table.records[0].n.unwrap();
    let covered = table
        .records
        .iter()
        .filter(|r| r.get("above_half_p") == Some(&Value::Bool(true)))
        .count();
    let min_cov = table
        .records
        .iter()
        .filter_map(|r| match r.get("coverage") {
            Some(Value::Float(x)) => Some(*x),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min);
    ensure(covered >= 19, || {
        format!("only {covered}/20 trials exceed p/2")
    })?;
    ensure(elapsed < 60.0, || format!("took {elapsed:.1}s (limit 60s)"))?;
    Ok(format!(
        "|A|={n}: {covered}/20 above p/2, min coverage {min_cov:.4}, {elapsed:.1}s"
    ))
}

struct MainTermTrial {
    set: FpSet,
    spectrum: EnergySpectrum,
    n_total: u128,
}

fn criterion9_trials() -> &'static Vec<MainTermTrial> {
    static TRIALS: OnceLock<Vec<MainTermTrial>> = OnceLock::new();
    TRIALS.get_or_init(|| {
        let f = field(10007);
        let n = SizeRule::Power {
            alpha: 0.7,
            constant: 1.0,
        }
        .size(f.p());
        (0..10)
            .map(|t| {
                let set = FpSet::random_uniform(&f, n, lab::seed_for(9, f.p(), t)).unwrap();
                let n_total = solution_count(&set, &set, &set, &set, Signs::MM, Method::Transform)
                    .unwrap()
                    .n_total;
                let spectrum = energy_spectrum(&set).unwrap();
                MainTermTrial {
                    set,
                    spectrum,
                    n_total,
                }
            })
            .collect()
    })
}

fn c9_main_term() -> Outcome {
    let trials = criterion9_trials();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for t in trials {
        let n8 = BigInt::from(t.set.len()).pow(8);
        let np = BigInt::from(t.n_total) * BigInt::from(t.set.p());
        ensure(np >= n8 && np <= &n8 * 2, || {
            format!("N p / |A|⁸ = {np}/{n8} outside [1, 2]")
        })?;
        let r = sumprodlab_core::exact::to_f64(&Rational::new(np, n8));
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok(format!(
        "|A|={}: N p/|A|⁸ in [{lo:.9}, {hi:.9}] over {} trials",
        trials[0].set.len(),
        trials.len()
    ))
}

fn c10_census() -> Outcome {
    let trials = criterion9_trials();
    let mut per_k4 = Vec::new();
    for k in [2u32, 4, 8] {
        let k = integer(k);
        let mut worst: f64 = 0.0;
        for t in trials {
            let fast = t.spectrum.census(&k).unwrap();
            let brute = sumprodlab_core::energy::brute_census(
                t.spectrum.energies(),
                t.set.p(),
                t.set.len(),
                &k,
            )
            .unwrap();
            ensure(fast == brute, || {
                format!("K={k}: census differs from recount")
            })?;
            worst = worst.max(fast.over_threshold_per_k4());
        }
        per_k4.push(format!("K={k}: max count/K⁴={worst:.4}"));
    }
    let units = FpSet::from_elements(&field(10007), 1..10007);
    for t in trials {
        let cor = t.spectrum.bkt_corollary_check(&units).unwrap();
        ensure(cor.holds, || {
            format!("corollary fails: {} > {}", cor.lhs, cor.bound)
        })?;
    }
    Ok(format!(
        "recounts match, corollary holds; {}",
        per_k4.join(", ")
    ))
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = ExperimentConfig {
        primes: vec![101, 1009],
        family: Family::Random,
        size: "alpha:0.7".parse().unwrap(),
        trials: 6,
        base_seed: 11,
        affine: true,
        k_list: vec![Some(integer(2)), Some(integer(4))],
        ..ExperimentConfig::default()
    };
    let mut files = 0;
    for (exp, format) in [
        (Experiment::Sweep, Format::Csv),
        (Experiment::Census, Format::Jsonl),
        (Experiment::Count, Format::Csv),
    ] {
        let mut bytes = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("{exp}-{run}"));
            let table = lab::run(exp, &config).map_err(|e| e.to_string())?;
            lab::emit(&table, &path, format).map_err(|e| e.to_string())?;
            bytes.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(bytes[0] == bytes[1], || {
            format!("{exp} output differs between runs")
        })?;
        files += 2;
    }
    Ok(format!("{files} files, pairwise byte-identical"))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("closed-form energy sum", c1_bkt),
        ("oracle equivalence", c2_oracles),
        ("character fourth moment", c3_character_moment),
        ("deviation-sum identity", c4_exi2),
        ("nonzero solutions vs energy squares", c5_adden),
        ("energy floor and caps", c6_energy_bounds),
        ("affine invariance", c7_affine_invariance),
        ("coverage above p/2 at p = 10007", c8_coverage),
        ("main-term ratio in [1, 2]", c9_main_term),
        ("large-energy census", c10_census),
        ("determinism", c11_determinism),
    ];
    let mut failures = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        // Straight to the process stdout so the lines survive output capture.
        let (verdict, detail) = match outcome {
            Ok(detail) => ("PASS", detail),
            Err(detail) => {
                failures.push(i + 1);
                ("FAIL", detail)
            }
        };
        let line = format!(
            "criterion {:>2} {verdict} {name} [{secs:.1}s]: {detail}\n",
            i + 1
        );
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(line.as_bytes()).and_then(|_| out.flush());
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

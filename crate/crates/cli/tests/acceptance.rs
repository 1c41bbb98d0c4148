//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.
//!
//!     cargo test -p kaya-lmdi-cli --test acceptance

use std::fs;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use kaya_lmdi::kaya::{self, kaya_record};
use kaya_lmdi::{
    chain_periods, decompose_additive, decompose_multiplicative, kaya_chain, kaya_decompose,
    load_dataset, load_dataset_path, log_mean, ChainMode, EffectDirection, FactorChain, FactorDef,
    IndicatorRecord, LoadOptions, PeriodPair, ZeroPolicy,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_kaya-lmdi");

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

/// Runs `f` several times and reports the first result with the fastest
/// wall time, so a single scheduler hiccup does not decide a runtime limit.
fn timed<T>(mut f: impl FnMut() -> T) -> (T, Duration) {
    const RUNS: usize = 5;
    let t = Instant::now();
    let first = f();
    let mut best = t.elapsed();
    for _ in 1..RUNS {
        let t = Instant::now();
        std::hint::black_box(f());
        best = best.min(t.elapsed());
    }
    (first, best)
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn endpoints() -> PeriodPair {
    PeriodPair::new(
        kaya_record(2008, 95224.62, 48166.0, 18230.0, 539834.0, 20635460.0),
        kaya_record(2022, 58638.12, 41562.0, 13289.0, 1409783.0, 19042455.0),
    )
    .unwrap()
}

fn log_uniform(rng: &mut StdRng) -> f64 {
    10f64.powf(rng.gen_range(-6.0..12.0))
}

/// Random telescoping chain of length n: c/k1 * k1/k2 * ... * k(n-1), with
/// factors shuffled so chain order does not follow key order.
fn random_case(rng: &mut StdRng) -> (FactorChain, PeriodPair) {
    let n = rng.gen_range(1..=8);
    let key = |i: usize| {
        if i == 0 {
            "c".to_owned()
        } else {
            format!("k{i}")
        }
    };
    let mut factors: Vec<FactorDef> = (0..n - 1)
        .map(|i| FactorDef::ratio(&format!("f{i}"), &key(i), &key(i + 1)))
        .collect();
    factors.push(FactorDef::level(&format!("f{}", n - 1), &key(n - 1)));
    for i in (1..factors.len()).rev() {
        factors.swap(i, rng.gen_range(0..=i));
    }
    let chain = FactorChain::new("random", "c", factors).unwrap();
    let mut rec = |year| {
        (0..n).fold(IndicatorRecord::new(year), |r, i| {
            r.with(&key(i), log_uniform(rng))
        })
    };
    let start = rec(2000);
    let end = rec(2001);
    (chain, PeriodPair::new(start, end).unwrap())
}

fn c1_cumulative_delta() -> Outcome {
    let pair = endpoints();
    let (ev, elapsed) = timed(|| decompose_additive(&pair, &kaya_chain()));
    let ev = ev.map_err(|e| e.to_string())?;
    ensure((ev.delta_c - -36586.5).abs() <= 0.05, || {
        format!("ΔC = {}", ev.delta_c)
    })?;
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!("ΔC = {:.4} Gg in {elapsed:?}", ev.delta_c))
}

fn c2_first_annual_delta() -> Outcome {
    let start = kaya_record(2008, 95224.62, 48166.0, 18230.0, 539834.0, 20635460.0);
    let end = kaya_record(2009, 75396.61, 47661.0, 17823.0, 578147.0, 20517381.0);
    let records = [start, end];
    let (ev, elapsed) = timed(|| chain_periods(&records, &kaya_chain(), ChainMode::Annual));
    let ev = ev.map_err(|e| e.to_string())?;
    ensure(ev.len() == 1, || format!("{} periods", ev.len()))?;
    ensure((ev[0].delta_c - -19828.01).abs() <= 0.01, || {
        format!("ΔC = {}", ev[0].delta_c)
    })?;
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "2008-2009 ΔC = {:.4} Gg in {elapsed:?}",
        ev[0].delta_c
    ))
}

fn c3_perfect_decomposition() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x1d1);
    let cases: Vec<_> = (0..10_000).map(|_| random_case(&mut rng)).collect();
    let t = Instant::now();
    let mut worst = 0.0f64;
    for (chain, pair) in &cases {
        let ev = decompose_additive(pair, chain).map_err(|e| e.to_string())?;
        let bound = 1e-9 * ev.delta_c.abs().max(1.0);
        let r = ev.residual().abs();
        ensure(r <= bound, || {
            format!("residual {r} > {bound} on chain of {}", chain.len())
        })?;
        worst = worst.max(r / ev.delta_c.abs().max(1.0));
    }
    let elapsed = t.elapsed();
    within_time(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "10000 cases, worst scaled residual {worst:.2e}, {elapsed:?}"
    ))
}

fn c4_log_mean_properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x10c);
    let pairs: Vec<(f64, f64)> = (0..10_000)
        .map(|_| (log_uniform(&mut rng), log_uniform(&mut rng)))
        .collect();
    let t = Instant::now();
    for &(a, b) in &pairs {
        let l = log_mean(a, b).map_err(|e| e.to_string())?;
        let geometric = a.sqrt() * b.sqrt();
        let arithmetic = 0.5 * a + 0.5 * b;
        // bounds hold up to the rounding of the reference means (a few ulps)
        ensure(l >= geometric * (1.0 - 4.0 * f64::EPSILON), || {
            format!("L({a},{b}) = {l} < G = {geometric}")
        })?;
        ensure(l <= arithmetic * (1.0 + 4.0 * f64::EPSILON), || {
            format!("L({a},{b}) = {l} > A = {arithmetic}")
        })?;
        ensure(l >= a.min(b) && l <= a.max(b), || {
            format!("L({a},{b}) = {l} outside [min, max]")
        })?;
        let swapped = log_mean(b, a).map_err(|e| e.to_string())?;
        ensure(l == swapped, || {
            format!("L({a},{b}) = {l} != L({b},{a}) = {swapped}")
        })?;
        let near = log_mean(a, a * (1.0 + 1e-13)).map_err(|e| e.to_string())?;
        ensure((near - a).abs() <= 1e-9 * a, || {
            format!("near-equal limit at {a}: {near}")
        })?;
    }
    let elapsed = t.elapsed();
    within_time(elapsed, Duration::from_secs(1))?;
    Ok(format!("10000 pairs in {elapsed:?}"))
}

fn c5_oracle_equivalence() -> Outcome {
    let oracle: Value = serde_json::from_str(
        &fs::read_to_string(data("romania_oracle.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let want = &oracle["endpoints"]["effects"];
    let pair = endpoints();
    let (k, elapsed) = timed(|| kaya_decompose(&pair));
    let k = k.map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (got, name) in k.as_array().into_iter().zip(["ΔI", "ΔM", "ΔL", "ΔB", "ΔP"]) {
        let w = want[name].as_f64().ok_or("oracle value missing")?;
        let e = rel_err(got, w);
        ensure(e <= 1e-9, || {
            format!("{name}: {got} vs oracle {w} (rel {e:.2e})")
        })?;
        worst = worst.max(e);
    }
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "ΔI {:.2} ΔM {:.2} ΔL {:.2} ΔB {:.2} ΔP {:.2}; worst rel err {worst:.1e}, {elapsed:?}",
        k.carbon_intensity, k.energy_mix, k.generating_efficiency, k.economy, k.population_effect
    ))
}

fn c6_additive_multiplicative_consistency() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6);
    let cases: Vec<_> = (0..1_000).map(|_| random_case(&mut rng)).collect();
    let t = Instant::now();
    for (chain, pair) in &cases {
        let ev = decompose_additive(pair, chain).map_err(|e| e.to_string())?;
        let d = decompose_multiplicative(pair, chain).map_err(|e| e.to_string())?;
        for (name, &di) in &d {
            let want = ev.weight * di.ln();
            let got = ev.effects[name];
            ensure((got - want).abs() <= 1e-10 * want.abs(), || {
                format!("{name}: {got} vs A·ln D = {want}")
            })?;
        }
    }
    let elapsed = t.elapsed();
    within_time(elapsed, Duration::from_secs(1))?;
    Ok(format!("1000 cases in {elapsed:?}"))
}

fn c7_unit_invariance() -> Outcome {
    let recs = load_dataset_path(&data("romania_2008_2022.csv"), &LoadOptions::default())
        .map_err(|e| e.to_string())?;
    let scaled: Vec<_> = recs
        .iter()
        .cloned()
        .map(|mut r| {
            r.values[kaya::GDP] *= 1000.0;
            r
        })
        .collect();
    let chain = kaya_chain();
    let ((a, b), elapsed) = timed(|| {
        (
            chain_periods(&recs, &chain, ChainMode::Annual),
            chain_periods(&scaled, &chain, ChainMode::Annual),
        )
    });
    let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(&b) {
        for (name, &e) in &x.effects {
            let r = rel_err(y.effects[name], e);
            ensure(r <= 1e-12, || {
                format!("{} {name}: rel change {r:.2e}", x.label())
            })?;
            worst = worst.max(r);
        }
    }
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "14 periods, worst rel change {worst:.1e}, {elapsed:?}"
    ))
}

fn c8_zero_policy_convergence() -> Outcome {
    let text = fs::read_to_string(data("romania_2008_2022.csv")).map_err(|e| e.to_string())?;
    let text = text.replace("2015,65518.48,44742,", "2015,65518.48,0,");
    let load = |delta: f64| {
        let opts = LoadOptions::default().with_policy(ZeroPolicy::substitute(delta).unwrap());
        load_dataset(text.as_bytes(), &opts).map_err(|e| e.to_string())
    };
    let (coarse_recs, fine_recs) = (load(1e-10)?, load(1e-20)?);
    let adjusted: Vec<_> = fine_recs
        .iter()
        .filter(|r| r.is_adjusted())
        .map(|r| r.year)
        .collect();
    ensure(adjusted == [2015], || {
        format!("adjusted years {adjusted:?}")
    })?;
    let chain = kaya_chain();
    // effects whose factors do not involve the substituted indicator
    let stable: Vec<&str> = chain
        .factors()
        .iter()
        .filter(|f| {
            f.numerator != kaya::FOSSIL_ENERGY
                && f.denominator.as_deref() != Some(kaya::FOSSIL_ENERGY)
        })
        .map(|f| f.name.as_str())
        .collect();
    let ((coarse, fine), elapsed) = timed(|| {
        (
            chain_periods(&coarse_recs, &chain, ChainMode::Annual),
            chain_periods(&fine_recs, &chain, ChainMode::Annual),
        )
    });
    let (coarse, fine) = (
        coarse.map_err(|e| e.to_string())?,
        fine.map_err(|e| e.to_string())?,
    );
    let mut worst = 0.0f64;
    for (a, b) in coarse.iter().zip(&fine) {
        for name in &stable {
            let r = rel_err(a.effects[*name], b.effects[*name]);
            ensure(r <= 1e-6, || {
                format!("{} {name}: rel diff {r:.2e}", a.label())
            })?;
            worst = worst.max(r);
        }
    }
    within_time(elapsed, Duration::from_millis(1))?;
    Ok(format!(
        "effects {} agree, worst rel diff {worst:.1e}, {elapsed:?}",
        stable.join("/")
    ))
}

fn c9_end_to_end_cli() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let input = data("romania_2008_2022.csv");
    let out = dir.path().join("report.csv");
    let run = || -> Result<(Vec<u8>, Vec<u8>, Duration), String> {
        let t = Instant::now();
        let o = Command::new(BIN)
            .args([
                "decompose",
                input.to_str().unwrap(),
                "-o",
                out.to_str().unwrap(),
            ])
            .args(["--format", "csv", "--mode", "both"])
            .output()
            .map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        ensure(o.status.success(), || {
            String::from_utf8_lossy(&o.stderr).into_owned()
        })?;
        let annual = fs::read(dir.path().join("report.annual.csv")).map_err(|e| e.to_string())?;
        let base = fs::read(dir.path().join("report.base_year.csv")).map_err(|e| e.to_string())?;
        Ok((annual, base, elapsed))
    };
    let (annual, base, t1) = run()?;
    let (annual2, base2, t2) = run()?;
    ensure(annual == annual2 && base == base2, || {
        "outputs differ between runs".into()
    })?;
    let annual = String::from_utf8(annual).map_err(|e| e.to_string())?;
    let base = String::from_utf8(base).map_err(|e| e.to_string())?;
    let first = annual.lines().nth(1).unwrap_or_default();
    let delta = |line: &str| line.split(',').nth(1).and_then(|v| v.parse::<f64>().ok());
    let d1 = delta(first).ok_or_else(|| format!("bad row {first:?}"))?;
    ensure(
        first.starts_with("2008-2009,") && (d1 - -19828.01).abs() <= 0.01,
        || format!("first annual row {first:?}"),
    )?;
    let last = base
        .lines()
        .rfind(|l| l.starts_with("2008-"))
        .unwrap_or_default();
    let d2 = delta(last).ok_or_else(|| format!("bad row {last:?}"))?;
    ensure(
        last.starts_with("2008-2022,") && (d2 - -36586.5).abs() <= 0.05,
        || format!("last base-year row {last:?}"),
    )?;
    within_time(t1.max(t2), Duration::from_millis(100))?;
    Ok(format!(
        "ΔC 2008-2009 = {d1}, 2008-2022 = {d2}; byte-identical reruns; {t1:?} / {t2:?}"
    ))
}

fn c10_sign_pattern() -> Outcome {
    let ev = decompose_additive(&endpoints(), &kaya_chain()).map_err(|e| e.to_string())?;
    let dir = |n: &str| EffectDirection::of(ev.effects[n]);
    let expanding: Vec<_> = ev
        .effects
        .keys()
        .filter(|n| dir(n) == EffectDirection::Expanding)
        .cloned()
        .collect();
    let restraining: Vec<_> = ev
        .effects
        .keys()
        .filter(|n| dir(n) == EffectDirection::Restraining)
        .cloned()
        .collect();
    ensure(expanding == ["ΔM", "ΔB"], || {
        format!("expanding {expanding:?}")
    })?;
    ensure(restraining == ["ΔI", "ΔL", "ΔP"], || {
        format!("restraining {restraining:?}")
    })?;
    let by = |f: fn(f64, f64) -> bool| {
        ev.effects
            .iter()
            .fold(None::<(&String, f64)>, |best, (k, &v)| match best {
                Some((_, b)) if !f(v, b) => best,
                _ => Some((k, v)),
            })
    };
    let (min_name, _) = by(|v, b| v < b).unwrap();
    let (max_name, _) = by(|v, b| v > b).unwrap();
    ensure(min_name == "ΔL" && max_name == "ΔB", || {
        format!("strongest restraining {min_name}, strongest expanding {max_name}")
    })?;
    Ok(format!(
        "expanding {expanding:?}, restraining {restraining:?}; strongest ΔL / ΔB (printed table columns not reproduced)"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (
            "1  cumulative ΔC 2008-2022 = -36586.5 ± 0.05",
            c1_cumulative_delta,
        ),
        (
            "2  first annual ΔC 2008-2009 = -19828.01 ± 0.01",
            c2_first_annual_delta,
        ),
        (
            "3  perfect decomposition, 10k random chains",
            c3_perfect_decomposition,
        ),
        (
            "4  log-mean bounds / symmetry / near-equal limit",
            c4_log_mean_properties,
        ),
        (
            "5  Kaya effects vs high-precision oracle, 1e-9",
            c5_oracle_equivalence,
        ),
        (
            "6  additive/multiplicative consistency, 1e-10",
            c6_additive_multiplicative_consistency,
        ),
        ("7  GDP unit invariance (x1000), 1e-12", c7_unit_invariance),
        (
            "8  zero-policy convergence 1e-10 vs 1e-20, 1e-6",
            c8_zero_policy_convergence,
        ),
        (
            "9  end-to-end CLI, byte-identical reruns",
            c9_end_to_end_cli,
        ),
        ("10 cumulative sign pattern (qualitative)", c10_sign_pattern),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::path::{Path, PathBuf};

use kaya_lmdi::output::{write_file_atomic, write_files_atomic};
use kaya_lmdi::{
    decompose_additive, kaya_chain, load_dataset_path, render_report, render_waterfall_svg,
    ChainMode, DecompositionReport, FactorChain, IndicatorRecord, LoadOptions, PeriodPair,
    ReportFormat, ZeroPolicy,
};

use crate::args::{
    ChainOpts, ChartArgs, DecomposeArgs, FormatArg, ModeArg, PolicyArg, PolicyOpts, ValidateArgs,
};
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn load_chain(opts: &ChainOpts) -> Result<FactorChain> {
    match &opts.chain_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| kaya_lmdi::Error::File {
                path: path.clone(),
                source,
            })?;
            Ok(FactorChain::parse_spec(&text)?)
        }
        None => Ok(kaya_chain()),
    }
}

fn zero_policy(opts: &PolicyOpts) -> Result<ZeroPolicy> {
    match (opts.zero_policy, opts.delta) {
        (PolicyArg::Reject, None) => Ok(ZeroPolicy::reject()),
        (PolicyArg::Reject, Some(_)) => Err(CliError::Usage(
            "--delta only applies with --zero-policy substitute".into(),
        )),
        (PolicyArg::Substitute, delta) => Ok(ZeroPolicy::substitute(
            delta.unwrap_or(kaya_lmdi::record::DEFAULT_ZERO_DELTA),
        )?),
    }
}

fn load(input: &Path, chain: &FactorChain, policy: ZeroPolicy) -> Result<Vec<IndicatorRecord>> {
    let options = LoadOptions::default()
        .with_required(chain.indicator_keys())
        .with_policy(policy);
    Ok(load_dataset_path(input, &options)?)
}

pub fn validate(args: &ValidateArgs) -> Result<()> {
    let chain = load_chain(&args.chain)?;
    let policy = zero_policy(&args.policy)?;
    let records = load(&args.input, &chain, policy)?;
    let (first, last) = (records[0].year, records[records.len() - 1].year);
    println!("{} rows, {first}–{last}", records.len());
    for r in records.iter().filter(|r| r.is_adjusted()) {
        println!(
            "{}: substituted {:e} for {}",
            r.year,
            policy.delta(),
            r.adjusted.join(", ")
        );
    }
    Ok(())
}

/// `report.csv` -> `report.annual.csv`
fn with_mode_suffix(path: &Path, mode: ChainMode) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{mode}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{mode}"),
    };
    path.with_file_name(name)
}

pub fn decompose(args: &DecomposeArgs) -> Result<()> {
    let chain = load_chain(&args.chain)?;
    let policy = zero_policy(&args.policy)?;
    let records = load(&args.input, &chain, policy)?;
    let format = match args.format {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Json => ReportFormat::Json,
    };
    let modes: &[ChainMode] = match args.mode {
        ModeArg::Annual => &[ChainMode::Annual],
        ModeArg::BaseYear => &[ChainMode::BaseYear],
        ModeArg::Both => &[ChainMode::Annual, ChainMode::BaseYear],
    };

    let mut files = Vec::new();
    let mut cumulative = None;
    for &mode in modes {
        let report = DecompositionReport::build(&records, &chain, mode, policy)?;
        let path = if modes.len() > 1 {
            with_mode_suffix(&args.output, mode)
        } else {
            args.output.clone()
        };
        files.push((path, render_report(&report, format)?));
        if let Some(dir) = &args.svg_dir {
            for ev in &report.periods {
                let name = format!("{mode}_{}.svg", ev.label());
                files.push((dir.join(name), render_waterfall_svg(ev).into_bytes()));
            }
        }
        cumulative = Some(report.cumulative);
    }
    if let (Some(path), Some(ev)) = (&args.svg, &cumulative) {
        files.push((path.clone(), render_waterfall_svg(ev).into_bytes()));
    }

    write_files_atomic(&files)?;
    for (path, _) in &files {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn chart(args: &ChartArgs) -> Result<()> {
    let chain = load_chain(&args.chain)?;
    let policy = zero_policy(&args.policy)?;
    let records = load(&args.input, &chain, policy)?;
    let find = |year: Option<i32>, default: &IndicatorRecord| -> Result<IndicatorRecord> {
        match year {
            None => Ok(default.clone()),
            Some(y) => records
                .iter()
                .find(|r| r.year == y)
                .cloned()
                .ok_or_else(|| CliError::Usage(format!("year {y} is not in the dataset"))),
        }
    };
    let start = find(args.from, &records[0])?;
    let end = find(args.to, &records[records.len() - 1])?;
    if end.year <= start.year {
        return Err(CliError::Usage(format!(
            "--to ({}) must be after --from ({})",
            end.year, start.year
        )));
    }
    let ev = decompose_additive(&PeriodPair::new(start, end)?, &chain)?;
    write_file_atomic(&args.output, render_waterfall_svg(&ev).as_bytes())?;
    println!("wrote {}", args.output.display());
    Ok(())
}

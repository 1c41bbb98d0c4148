//! CSV ingestion of indicator time series.
//!
//! Dialect: comma separated, `.` decimal point, UTF-8, header row required.
//! One row per year. Text-only columns listed in [`TEXT_COLUMNS`] are
//! accepted and ignored; every other extra column must be numeric and is
//! kept on the record.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::kaya::INDICATORS;
use crate::record::{apply_zero_policy, IndicatorRecord, ZeroMode, ZeroPolicy};

pub const YEAR_COLUMN: &str = "year";
pub const TEXT_COLUMNS: [&str; 2] = ["provenance", "note"];
pub const YEAR_RANGE: std::ops::RangeInclusive<i32> = 1900..=2100;

#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Indicator columns that must be present besides `year`.
    pub required: Vec<String>,
    pub policy: ZeroPolicy,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            required: INDICATORS.iter().map(|s| s.to_string()).collect(),
            policy: ZeroPolicy::reject(),
        }
    }
}

impl LoadOptions {
    pub fn with_policy(mut self, policy: ZeroPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_required<I, S>(mut self, required: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.required = required.into_iter().map(Into::into).collect();
        self
    }
}

pub fn load_dataset_path(path: &Path, options: &LoadOptions) -> Result<Vec<IndicatorRecord>> {
    let file = File::open(path).map_err(|source| Error::File {
        path: path.to_owned(),
        source,
    })?;
    load_dataset(file, options)
}

/// Reads and validates a dataset. Records come back sorted by year.
pub fn load_dataset<R: Read>(input: R, options: &LoadOptions) -> Result<Vec<IndicatorRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);

    let headers = reader.headers()?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::NoDataRows);
    }
    for (i, h) in headers.iter().enumerate() {
        if headers.iter().take(i).any(|prev| prev == h) {
            return Err(Error::DuplicateColumn(h.to_owned()));
        }
    }
    let position = |name: &str| headers.iter().position(|h| h == name);
    let year_idx = position(YEAR_COLUMN).ok_or_else(|| Error::MissingColumn(YEAR_COLUMN.into()))?;
    for col in &options.required {
        if position(col).is_none() {
            return Err(Error::MissingColumn(col.clone()));
        }
    }
    // Required columns first, in requested order, then extra numeric columns.
    let mut value_cols: Vec<(usize, &str)> = options
        .required
        .iter()
        .map(|c| (position(c).unwrap(), c.as_str()))
        .collect();
    for (i, h) in headers.iter().enumerate() {
        if i != year_idx && !TEXT_COLUMNS.contains(&h) && !options.required.iter().any(|c| c == h) {
            value_cols.push((i, h));
        }
    }

    let mut records = Vec::new();
    for (idx, row) in reader.records().enumerate() {
        let row = row?;
        let row_no = idx + 1;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != headers.len() {
            if row.len() == 1 && row[0].is_empty() {
                continue;
            }
            return Err(Error::RaggedRow {
                row: row_no,
                line,
                expected: headers.len(),
                found: row.len(),
            });
        }

        let year_cell = &row[year_idx];
        let year = year_cell
            .parse::<i32>()
            .ok()
            .filter(|y| YEAR_RANGE.contains(y))
            .ok_or_else(|| Error::InvalidYear {
                row: row_no,
                line,
                value: year_cell.to_owned(),
            })?;

        let mut record = IndicatorRecord::new(year);
        for &(i, name) in &value_cols {
            let cell = &row[i];
            let value = cell
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::NonNumericCell {
                    row: row_no,
                    line,
                    column: name.to_owned(),
                    value: cell.to_owned(),
                })?;
            record.values.insert(name.to_owned(), value);
        }

        if options.policy.mode() == ZeroMode::Reject {
            let bad = record.non_positive_keys();
            if !bad.is_empty() {
                return Err(Error::NonPositiveCells {
                    row: row_no,
                    line,
                    year,
                    columns: bad,
                });
            }
        }
        records.push(apply_zero_policy(record, &options.policy)?);
    }

    if records.is_empty() {
        return Err(Error::NoDataRows);
    }
    records.sort_by_key(|r| r.year);
    if let Some(w) = records.windows(2).find(|w| w[0].year == w[1].year) {
        return Err(Error::DuplicateYear(w[0].year));
    }
    Ok(records)
}

/// Writes records in the dataset dialect. Values use the shortest decimal
/// representation that parses back to the same `f64`.
pub fn write_dataset<W: Write>(records: &[IndicatorRecord], out: W) -> Result<()> {
    let mut columns: Vec<&str> = Vec::new();
    for r in records {
        for k in r.values.keys() {
            if !columns.contains(&k.as_str()) {
                columns.push(k);
            }
        }
    }
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(std::iter::once(YEAR_COLUMN).chain(columns.iter().copied()))?;
    for r in records {
        let mut row = vec![r.year.to_string()];
        for c in &columns {
            row.push(r.get(c).map(|v| v.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "year,co2,fossil_energy,total_energy,gdp,population";

    fn load(text: &str) -> Result<Vec<IndicatorRecord>> {
        load_dataset(text.as_bytes(), &LoadOptions::default())
    }

    #[test]
    fn loads_and_sorts() {
        let text = format!("{HEADER}\n2010,3,4,5,6,7\n2009,1,2,3,4,5\n");
        let recs = load(&text).unwrap();
        assert_eq!(
            recs.iter().map(|r| r.year).collect::<Vec<_>>(),
            [2009, 2010]
        );
        assert_eq!(recs[1].get("gdp"), Some(6.0));
    }

    #[test]
    fn column_order_insensitive_and_extras() {
        let text = "population,gdp,year,total_energy,provenance,fossil_energy,co2,extra\n\
                    7,6,2010,5,synthetic,4,3,1.5\n";
        let recs = load(text).unwrap();
        let keys: Vec<_> = recs[0].values.keys().cloned().collect();
        assert_eq!(
            keys,
            [
                "co2",
                "fossil_energy",
                "total_energy",
                "gdp",
                "population",
                "extra"
            ]
        );
    }

    #[test]
    fn missing_population_column() {
        let err = load("year,co2,fossil_energy,total_energy,gdp\n2010,1,2,3,4\n").unwrap_err();
        assert!(
            matches!(&err, Error::MissingColumn(c) if c == "population"),
            "{err}"
        );
        assert!(err.to_string().contains("population"));
    }

    #[test]
    fn empty_input() {
        assert!(matches!(load(""), Err(Error::NoDataRows)));
        assert_eq!(load("").unwrap_err().to_string(), "no data rows");
        assert!(matches!(
            load(&format!("{HEADER}\n")),
            Err(Error::NoDataRows)
        ));
    }

    #[test]
    fn non_numeric_cell_has_position() {
        let text = format!("{HEADER}\n2008,1,2,3,4,5\n2009,1,2,3,4,5\n2010,1,2,3,abc,5\n");
        match load(&text) {
            Err(e @ Error::NonNumericCell { .. }) => {
                let msg = e.to_string();
                assert!(
                    msg.contains("row 3") && msg.contains("gdp") && msg.contains("line 4"),
                    "{msg}"
                );
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = format!("{HEADER}\n2008,1,2,3,inf,5\n");
        assert!(matches!(load(&text), Err(Error::NonNumericCell { .. })));
    }

    #[test]
    fn duplicate_year() {
        let text = format!("{HEADER}\n2008,1,2,3,4,5\n2008,1,2,3,4,6\n");
        assert!(matches!(load(&text), Err(Error::DuplicateYear(2008))));
    }

    #[test]
    fn bad_year() {
        let text = format!("{HEADER}\n1850,1,2,3,4,5\n");
        assert!(matches!(
            load(&text),
            Err(Error::InvalidYear { row: 1, .. })
        ));
        let text = format!("{HEADER}\n20x8,1,2,3,4,5\n");
        assert!(matches!(load(&text), Err(Error::InvalidYear { .. })));
    }

    #[test]
    fn ragged_row() {
        let text = format!("{HEADER}\n2008,1,2,3,4\n");
        assert!(matches!(
            load(&text),
            Err(Error::RaggedRow {
                expected: 6,
                found: 5,
                ..
            })
        ));
    }

    #[test]
    fn zero_policy_in_loader() {
        let text = format!("{HEADER}\n2008,1,0,3,4,5\n2009,1,2,3,4,5\n");
        match load(&text) {
            Err(Error::NonPositiveCells {
                row: 1,
                year: 2008,
                columns,
                ..
            }) => {
                assert_eq!(columns, ["fossil_energy"])
            }
            other => panic!("unexpected {other:?}"),
        }
        let opts = LoadOptions::default().with_policy(ZeroPolicy::substitute(1e-12).unwrap());
        let recs = load_dataset(text.as_bytes(), &opts).unwrap();
        assert_eq!(recs[0].get("fossil_energy"), Some(1e-12));
        assert_eq!(recs[0].adjusted, ["fossil_energy"]);
        assert!(!recs[1].is_adjusted());
    }

    #[test]
    fn custom_required_columns() {
        let opts = LoadOptions::default().with_required(["c", "x"]);
        let recs = load_dataset("year,x,c\n2000,1,2\n".as_bytes(), &opts).unwrap();
        assert_eq!(recs[0].values.keys().collect::<Vec<_>>(), ["c", "x"]);
    }

    #[test]
    fn missing_file_is_io() {
        let err = load_dataset_path(Path::new("/nonexistent/data.csv"), &LoadOptions::default())
            .unwrap_err();
        assert_eq!(err.kind(), crate::ErrorKind::Io);
        assert!(err.to_string().contains("/nonexistent/data.csv"));
    }
}

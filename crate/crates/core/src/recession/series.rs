use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Calendar quarter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quarter {
    pub year: i32,
    pub quarter: u8,
}

impl Quarter {
    pub fn new(year: i32, quarter: u8) -> Result<Self> {
        if !(1..=4).contains(&quarter) {
            return Err(Error::spec(format!("quarter {quarter} out of range")));
        }
        Ok(Quarter { year, quarter })
    }

    pub fn next(self) -> Self {
        if self.quarter == 4 {
            Quarter { year: self.year + 1, quarter: 1 }
        } else {
            Quarter { year: self.year, quarter: self.quarter + 1 }
        }
    }

    /// Parses an ISO date on the first day of a quarter, `YYYY-MM-01`.
    pub fn from_iso_date(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.trim().split('-').collect();
        let [y, m, d] = parts.as_slice() else {
            return Err(format!("`{s}` is not a YYYY-MM-DD date"));
        };
        let year: i32 = y.parse().map_err(|_| format!("bad year in `{s}`"))?;
        let month: u8 = m.parse().map_err(|_| format!("bad month in `{s}`"))?;
        let day: u8 = d.parse().map_err(|_| format!("bad day in `{s}`"))?;
        if day != 1 || !matches!(month, 1 | 4 | 7 | 10) {
            return Err(format!("`{s}` is not the first day of a quarter"));
        }
        Ok(Quarter { year, quarter: (month - 1) / 3 + 1 })
    }

    pub fn iso_date(&self) -> String {
        format!("{:04}-{:02}-01", self.year, 3 * self.quarter - 2)
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q{}", self.year, self.quarter)
    }
}

impl FromStr for Quarter {
    type Err = Error;

    /// Accepts `1933Q1` or an ISO quarter-start date.
    fn from_str(s: &str) -> Result<Self> {
        if let Some((y, q)) = s.split_once(['Q', 'q']) {
            let year = y.parse().map_err(|_| Error::spec(format!("bad quarter `{s}`")))?;
            let quarter = q.parse().map_err(|_| Error::spec(format!("bad quarter `{s}`")))?;
            return Quarter::new(year, quarter);
        }
        Quarter::from_iso_date(s).map_err(Error::InvalidSpec)
    }
}

/// Quarterly ±1 series, dates strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarterlySeries {
    dates: Vec<Quarter>,
    values: Vec<f64>,
}

impl QuarterlySeries {
    pub fn new(dates: Vec<Quarter>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::Dimension { expected: dates.len(), got: values.len() });
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::spec("quarters must be strictly increasing"));
        }
        if values.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(Error::spec("values must be ±1"));
        }
        Ok(QuarterlySeries { dates, values })
    }

    /// Consecutive quarters starting at `start`.
    pub fn from_values(start: Quarter, values: Vec<f64>) -> Result<Self> {
        let dates = std::iter::successors(Some(start), |q| Some(q.next())).take(values.len()).collect();
        QuarterlySeries::new(dates, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dates(&self) -> &[Quarter] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The original 0/1 indicator.
    pub fn indicator(&self) -> Vec<u8> {
        self.values.iter().map(|&v| u8::from(v > 0.0)).collect()
    }

    /// No missing quarter between the first and last date.
    pub fn is_contiguous(&self) -> bool {
        self.dates.windows(2).all(|w| w[0].next() == w[1])
    }

    /// Observations with `from ≤ date ≤ to`.
    pub fn restrict(&self, from: Quarter, to: Quarter) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.dates[i] >= from && self.dates[i] <= to).collect();
        QuarterlySeries {
            dates: keep.iter().map(|&i| self.dates[i]).collect(),
            values: keep.iter().map(|&i| self.values[i]).collect(),
        }
    }
}

/// Recodes a 0/1 indicator to −1/+1.
pub fn recode(indicator: u8) -> f64 {
    if indicator == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Reads a two-column CSV: a `DATE` or `observation_date` column of
/// quarter-start ISO dates and a 0/1 indicator. Rows are sorted by date.
pub fn parse_usrecq<R: Read>(input: R, origin: &Path) -> Result<QuarterlySeries> {
    let mut rd = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let bad = |row: usize, msg: String| Error::Parse { path: origin.to_path_buf(), row, msg };
    let headers = rd.headers()?.clone();
    let date_col = headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case("date") || h.trim().eq_ignore_ascii_case("observation_date"))
        .ok_or_else(|| bad(1, "no DATE or observation_date column".into()))?;
    if headers.len() != 2 {
        return Err(bad(1, format!("expected 2 columns, found {}", headers.len())));
    }
    let value_col = 1 - date_col;
    let mut rows: Vec<(Quarter, u8, usize)> = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| bad(row, e.to_string()))?;
        if rec.len() != 2 {
            return Err(bad(row, format!("expected 2 fields, found {}", rec.len())));
        }
        let q = Quarter::from_iso_date(&rec[date_col]).map_err(|m| bad(row, m))?;
        let v = match rec[value_col].trim() {
            "0" | "0.0" => 0,
            "1" | "1.0" => 1,
            other => return Err(bad(row, format!("indicator `{other}` is not 0 or 1"))),
        };
        rows.push((q, v, row));
    }
    rows.sort_by_key(|r| r.0);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(bad(w[1].2.max(w[0].2), format!("duplicate date {}", w[1].0)));
    }
    let dates = rows.iter().map(|r| r.0).collect();
    let values = rows.iter().map(|r| recode(r.1)).collect();
    QuarterlySeries::new(dates, values)
}

pub fn load_usrecq(path: &Path) -> Result<QuarterlySeries> {
    let file = std::fs::File::open(path)?;
    parse_usrecq(file, path)
}

/// Source of the quarterly recession indicator.
pub const USRECQ_URL: &str = "https://fred.stlouisfed.org/graph/fredgraph.csv?id=USRECQ";

/// Downloads the indicator with the system `curl`.
pub fn fetch_usrecq(dest: &Path) -> Result<()> {
    let status = std::process::Command::new("curl")
        .args(["--fail", "--silent", "--show-error", "--location", "--output"])
        .arg(dest)
        .arg(USRECQ_URL)
        .status()?;
    if !status.success() {
        return Err(Error::Io(std::io::Error::other(format!("curl exited with {status}"))));
    }
    Ok(())
}

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// 17 significant digits, scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Cell {
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Renders rows under a fixed header.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<Cell>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row
            .into_iter()
            .map(|c| match c {
                Cell::Float(x) => fmt_float(x),
                Cell::Text(s) => s,
                Cell::Bool(b) => u8::from(b).to_string(),
            })
            .collect();
        let _ = writeln!(out, "{}", line.join(","));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Superoscillatory,
    Growth,
    FarField,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Self::Superoscillatory => "superoscillatory",
            Self::Growth => "growth",
            Self::FarField => "far-field",
        }
    }

    /// `[−z_c, 0]`, `(0, z₊]` and everything else.
    pub fn classify(z: f64, extent: f64, growth_end: f64) -> Self {
        if (-extent..=0.0).contains(&z) {
            Self::Superoscillatory
        } else if z > 0.0 && z <= growth_end {
            Self::Growth
        } else {
            Self::FarField
        }
    }
}

/// Samples carried by a synth payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureSeries {
    pub extent: f64,
    pub growth_start: f64,
    pub growth_end: f64,
    pub z: Vec<f64>,
    /// Mantissas; physical values are `re · e^{ln_scale}`.
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub ln_scale: f64,
}

impl FigureSeries {
    pub fn ln_abs(&self, i: usize) -> f64 {
        self.re[i].hypot(self.im[i]).ln() + self.ln_scale
    }

    pub fn region(&self, i: usize) -> Region {
        Region::classify(self.z[i], self.extent, self.growth_end)
    }

    /// `z, re, im, abs, ln_abs, region`.
    pub fn to_csv(&self) -> String {
        let f = self.ln_scale.exp();
        let rows = (0..self.z.len()).map(|i| {
            vec![
                self.z[i].into(),
                (self.re[i] * f).into(),
                (self.im[i] * f).into(),
                (self.re[i].hypot(self.im[i]) * f).into(),
                self.ln_abs(i).into(),
                self.region(i).label().into(),
            ]
        });
        csv_string(&["z", "re", "im", "abs", "ln_abs", "region"], rows)
    }
}

/// Writes the region-labelled figure series of a synth record to
/// `dir/figure.csv`.
pub fn emit_figure_data(record: &super::RunRecord, dir: &Path) -> Result<PathBuf, HarnessError> {
    let series = match &record.payload {
        super::Payload::Synth(p) => &p.series,
        _ => return Err(HarnessError::MissingPayload("synth".into())),
    };
    let path = dir.join("figure.csv");
    write_file(&path, &series.to_csv())?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(-2.0), "-2.0000000000000000e0");
        let x = 1.0 / 3.0;
        assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&["a", "b"], vec![vec![1.0.into(), "x".into()], vec![true.into(), 0.5.into()]]);
        assert_eq!(s, "a,b\n1.0000000000000000e0,x\n1,5.0000000000000000e-1\n");
    }

    #[test]
    fn regions() {
        assert_eq!(Region::classify(-1.0, 2.0, 10.0), Region::Superoscillatory);
        assert_eq!(Region::classify(0.0, 2.0, 10.0), Region::Superoscillatory);
        assert_eq!(Region::classify(5.0, 2.0, 10.0), Region::Growth);
        assert_eq!(Region::classify(-3.0, 2.0, 10.0), Region::FarField);
        assert_eq!(Region::classify(11.0, 2.0, 10.0), Region::FarField);
    }
}

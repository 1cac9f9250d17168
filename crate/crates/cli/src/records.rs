//! Output record types and their CSV/JSON serialization.
//!
//! Floats go out with 17 significant digits so every file round-trips
//! losslessly; identical inputs produce byte-identical files regardless of
//! the worker thread count.

use serde::{Deserialize, Serialize};

use vibron_core::husimi::CrossSectionGrid;

/// Lossless float formatting for CSV cells.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenyiEntry {
    pub nu: f64,
    pub value: f64,
}

/// One row of a sweep: measures of a single (N, xi, source) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    #[serde(rename = "N")]
    pub n_total: u32,
    pub xi: f64,
    pub source: String,
    pub ipr: f64,
    pub wehrl: f64,
    pub renyi: Vec<RenyiEntry>,
    /// Equilibrium radius; absent for the exact source.
    pub radius: Option<f64>,
    pub energy_per_particle: f64,
}

pub fn sweep_csv(records: &[SweepRecord]) -> String {
    let renyi_count = records.first().map_or(0, |r| r.renyi.len());
    let mut out = String::from("N,xi,source,ipr,wehrl");
    for _ in 0..renyi_count {
        out.push_str(",renyi_nu,renyi_value");
    }
    out.push_str(",radius,energy\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}",
            r.n_total,
            fmt_float(r.xi),
            r.source,
            fmt_float(r.ipr),
            fmt_float(r.wehrl)
        ));
        for entry in &r.renyi {
            out.push_str(&format!(
                ",{},{}",
                fmt_float(entry.nu),
                fmt_float(entry.value)
            ));
        }
        let radius = r.radius.map(fmt_float).unwrap_or_default();
        out.push_str(&format!(",{radius},{}\n", fmt_float(r.energy_per_particle)));
    }
    out
}

pub fn sweep_json(records: &[SweepRecord]) -> Result<String, String> {
    serde_json::to_string_pretty(records)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| format!("json: {e}"))
}

/// Cross-section matrix with row/column headers carrying the coordinates.
pub fn section_csv(section: &CrossSectionGrid) -> String {
    use vibron_core::husimi::SectionAxis;
    let corner = match section.axis {
        SectionAxis::Position => "x1\\x2",
        SectionAxis::Momentum => "p1\\p2",
    };
    let mut out = String::from(corner);
    for &c in &section.coords {
        out.push(',');
        out.push_str(&fmt_float(c));
    }
    out.push('\n');
    for (row, &c) in section.values.iter().zip(&section.coords) {
        out.push_str(&fmt_float(c));
        for &v in row {
            out.push(',');
            out.push_str(&fmt_float(v));
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroRow {
    pub index: i32,
    pub offset: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroTable {
    #[serde(rename = "N")]
    pub n_total: u32,
    pub xi: f64,
    pub radius: f64,
    pub lines: Vec<ZeroRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalReport {
    pub xi_min: f64,
    pub xi_max: f64,
    pub xi_step: f64,
    pub xi_c: f64,
    pub second_derivative_jump: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_round_trips() {
        for &x in &[0.0, 1.0 / 3.0, 0.1 + 0.2, 1e-300, 6.02214076e23, -0.25] {
            let s = fmt_float(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn sweep_csv_layout() {
        let rec = SweepRecord {
            n_total: 4,
            xi: 0.0,
            source: "exact".into(),
            ipr: 1.0 / 3.0,
            wehrl: 44.0 / 30.0,
            renyi: vec![RenyiEntry {
                nu: 2.0,
                value: 3.0_f64.ln(),
            }],
            radius: None,
            energy_per_particle: 0.0,
        };
        let csv = sweep_csv(&[rec]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "N,xi,source,ipr,wehrl,renyi_nu,renyi_value,radius,energy"
        );
        let row = lines.next().unwrap();
        assert!(row.starts_with("4,0.0000000000000000e0,exact,3.3333333333333331e-1"));
        assert!(row.contains(",,"), "empty radius cell expected");
    }

    #[test]
    fn sweep_json_round_trips() {
        let rec = SweepRecord {
            n_total: 8,
            xi: 0.5,
            source: "cat".into(),
            ipr: 0.25,
            wehrl: 2.0,
            renyi: vec![RenyiEntry {
                nu: 2.0,
                value: 1.386,
            }],
            radius: Some(0.7745966692414834),
            energy_per_particle: 0.21875,
        };
        let json = sweep_json(std::slice::from_ref(&rec)).unwrap();
        let back: Vec<SweepRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![rec]);
    }
}

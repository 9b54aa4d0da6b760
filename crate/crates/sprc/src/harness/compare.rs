use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::config::ControllerKind;
use super::io::MetricsFile;
use crate::error::{Error, Result};
use crate::metrics::rsd;
use crate::N_BLADES;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub lc: String,
    pub family: String,
    pub controller: ControllerKind,
    pub faulty_blade: usize,
    /// Relative SD reduction per blade against the baseline, healthy window.
    pub rsd_healthy: [f64; N_BLADES],
    /// Same for the faulty window.
    pub rsd_faulty: [f64; N_BLADES],
    pub adc_faulty: [f64; N_BLADES],
    /// Blades whose faulty-window load SD grew relative to the baseline.
    pub negative: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub family: String,
    pub controller: ControllerKind,
    pub n_cases: usize,
    pub mean_rsd_faulty: [f64; N_BLADES],
    pub mean_adc_faulty: [f64; N_BLADES],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub baseline: ControllerKind,
    pub rows: Vec<ComparisonRow>,
}

/// Pairs each run with the baseline run of the same load case.
pub fn compare(results: &[MetricsFile], baseline: ControllerKind) -> Result<ComparisonTable> {
    let mut base: BTreeMap<&str, &MetricsFile> = BTreeMap::new();
    for r in results.iter().filter(|r| r.case.controller == baseline) {
        if base.insert(r.case.lc_label(), r).is_some() {
            return Err(Error::Config(format!("two {} runs for load case {}", baseline.as_str(), r.case.lc_label())));
        }
    }
    let mut rows = Vec::new();
    for r in results.iter().filter(|r| r.case.controller != baseline) {
        let lc = r.case.lc_label();
        let b =
            base.get(lc).ok_or_else(|| Error::Config(format!("no {} run for load case {lc}", baseline.as_str())))?;
        if r.metrics.blades.len() != N_BLADES || b.metrics.blades.len() != N_BLADES {
            return Err(Error::Config(format!("load case {lc}: metrics do not cover {N_BLADES} blades")));
        }
        let mut rh = [0.0; N_BLADES];
        let mut rf = [0.0; N_BLADES];
        let mut ad = [0.0; N_BLADES];
        for i in 0..N_BLADES {
            let (m, mb) = (&r.metrics.blades[i], &b.metrics.blades[i]);
            rh[i] = rsd(mb.sd_healthy, m.sd_healthy)?;
            rf[i] = rsd(mb.sd_faulty, m.sd_faulty)?;
            ad[i] = m.adc_faulty;
        }
        let negative = (0..N_BLADES).filter(|&i| rf[i] < 0.0).map(|i| i + 1).collect();
        rows.push(ComparisonRow {
            lc: lc.to_string(),
            family: r.case.family.clone(),
            controller: r.case.controller,
            faulty_blade: r.case.faulty_blade,
            rsd_healthy: rh,
            rsd_faulty: rf,
            adc_faulty: ad,
            negative,
        });
    }
    rows.sort_by(|a, b| (&a.lc, a.controller).cmp(&(&b.lc, b.controller)));
    Ok(ComparisonTable { baseline, rows })
}

/// Per-family means over the load cases of each controller.
pub fn family_summary(table: &ComparisonTable) -> Vec<FamilyRow> {
    let mut groups: BTreeMap<(String, ControllerKind), Vec<&ComparisonRow>> = BTreeMap::new();
    for r in &table.rows {
        groups.entry((r.family.clone(), r.controller)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((family, controller), rows)| {
            let n = rows.len() as f64;
            let mean = |f: &dyn Fn(&ComparisonRow) -> [f64; N_BLADES]| -> [f64; N_BLADES] {
                std::array::from_fn(|i| rows.iter().map(|r| f(r)[i]).sum::<f64>() / n)
            };
            FamilyRow {
                n_cases: rows.len(),
                mean_rsd_faulty: mean(&|r| r.rsd_faulty),
                mean_adc_faulty: mean(&|r| r.adc_faulty),
                family,
                controller,
            }
        })
        .collect()
}

impl ComparisonTable {
    /// Plain-text table. Faulty blades are marked `*`, negative reductions `!`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "relative SD reduction vs {} (faulty window)", self.baseline.as_str());
        let _ = writeln!(
            s,
            "{:<8} {:<10} {:>10} {:>10} {:>10}   {:>8} {:>8} {:>8}",
            "lc", "controller", "blade1", "blade2", "blade3", "adc1", "adc2", "adc3"
        );
        for r in &self.rows {
            let cell = |i: usize| {
                let mark = if r.faulty_blade == i + 1 {
                    "*"
                } else if r.rsd_faulty[i] < 0.0 {
                    "!"
                } else {
                    " "
                };
                format!("{:>9.3}{mark}", r.rsd_faulty[i])
            };
            let _ = writeln!(
                s,
                "{:<8} {:<10} {} {} {}   {:>8.4} {:>8.4} {:>8.4}",
                r.lc,
                r.controller.as_str(),
                cell(0),
                cell(1),
                cell(2),
                r.adc_faulty[0],
                r.adc_faulty[1],
                r.adc_faulty[2]
            );
        }
        let fam = family_summary(self);
        if fam.iter().any(|f| !f.family.is_empty()) {
            let _ = writeln!(s, "\nfamily means");
            for f in fam {
                let _ = writeln!(
                    s,
                    "{:<10} {:<10} n={:<3} rsd {:>7.3} {:>7.3} {:>7.3}   adc {:>7.4} {:>7.4} {:>7.4}",
                    f.family,
                    f.controller.as_str(),
                    f.n_cases,
                    f.mean_rsd_faulty[0],
                    f.mean_rsd_faulty[1],
                    f.mean_rsd_faulty[2],
                    f.mean_adc_faulty[0],
                    f.mean_adc_faulty[1],
                    f.mean_adc_faulty[2]
                );
            }
        }
        s
    }
}

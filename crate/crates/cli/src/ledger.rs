//! Per-subsystem phase accounting written next to every run.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::output::{fmt_f64, write_csv};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Phase from potentials acting where there is no force.
    Ab,
    /// Phase carried by motion that forces produced.
    ForceMediated,
    /// Phase that a which-path record keeps from showing up as interference.
    RecordSuppressed,
}

impl Classification {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Ab => "AB",
            Self::ForceMediated => "force-mediated",
            Self::RecordSuppressed => "record-suppressed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub label: String,
    /// (1/ħ)Δ∫E dt.
    pub energy_phase: f64,
    /// −(1/ħ)ΔΣ∫p dq, already signed as it enters the total.
    pub momentum_phase: f64,
    pub class: Classification,
}

impl LedgerEntry {
    pub fn total(&self) -> f64 {
        self.energy_phase + self.momentum_phase
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PhaseLedger {
    pub title: String,
    pub entries: Vec<LedgerEntry>,
    /// Free-form summary lines printed above the table.
    pub notes: Vec<(String, String)>,
}

impl PhaseLedger {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            ..Self::default()
        }
    }

    pub fn push(
        &mut self,
        label: impl Into<String>,
        energy_phase: f64,
        momentum_phase: f64,
        class: Classification,
    ) {
        self.entries.push(LedgerEntry {
            label: label.into(),
            energy_phase,
            momentum_phase,
            class,
        });
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    pub fn energy_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.energy_phase).sum()
    }

    pub fn momentum_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.momentum_phase).sum()
    }

    pub fn grand_total(&self) -> f64 {
        self.entries.iter().map(LedgerEntry::total).sum()
    }

    /// Grand total against the column sums.
    pub fn check(&self, tol: f64) -> Result<()> {
        let total = self.grand_total();
        let columns = self.energy_sum() + self.momentum_sum();
        let scale = self
            .entries
            .iter()
            .map(|e| e.energy_phase.abs() + e.momentum_phase.abs())
            .fold(1.0, f64::max);
        if (total - columns).abs() > tol * scale {
            return Err(CliError::Acceptance(format!(
                "ledger '{}' does not balance: total {total} vs columns {columns}",
                self.title
            )));
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {}", self.title);
        for (k, v) in &self.notes {
            let _ = writeln!(s, "{k}: {v}");
        }
        let _ = writeln!(s);
        let w = self
            .entries
            .iter()
            .map(|e| e.label.len())
            .max()
            .unwrap_or(0)
            .max(12);
        let _ = writeln!(
            s,
            "{:<w$} {:>24} {:>24} {:>24}  {}",
            "entry", "energy_phase", "momentum_phase", "total", "class"
        );
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<w$} {:>24} {:>24} {:>24}  {}",
                e.label,
                fmt_f64(e.energy_phase),
                fmt_f64(e.momentum_phase),
                fmt_f64(e.total()),
                e.class.tag()
            );
        }
        let _ = writeln!(
            s,
            "{:<w$} {:>24} {:>24} {:>24}",
            "grand total",
            fmt_f64(self.energy_sum()),
            fmt_f64(self.momentum_sum()),
            fmt_f64(self.grand_total())
        );
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::write(dir.join("ledger.txt"), self.render())?;
        let rows = self.entries.iter().map(|e| {
            vec![
                e.label.clone(),
                fmt_f64(e.energy_phase),
                fmt_f64(e.momentum_phase),
                fmt_f64(e.total()),
                e.class.tag().to_string(),
            ]
        });
        write_csv(
            &dir.join("ledger.csv"),
            &["entry", "energy_phase", "momentum_phase", "total", "class"],
            rows,
        )
    }
}

//! Analysis reports. Identical inputs render to identical bytes.

use std::fmt::Write;

use densic_core::density::{format_word, Analysis, TrivialCase, Witness};
use densic_core::exact::{format_decimal, format_rational, Rational};

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Records,
}

pub struct Extremes {
    pub upper: Rational,
    pub lower: Rational,
    pub witness_upper: Option<Witness>,
    pub witness_lower: Option<Witness>,
    /// Set mode only.
    pub trivial: Option<TrivialCase>,
}

pub struct Report {
    pub mean: bool,
    pub analysis: Analysis,
    pub extremes: Extremes,
}

fn trivial_name(t: TrivialCase) -> &'static str {
    match t {
        TrivialCase::None => "none",
        TrivialCase::Zero => "zero",
        TrivialCase::One => "one",
    }
}

impl Report {
    fn names(&self) -> (&'static str, &'static str) {
        if self.mean {
            ("limsup", "liminf")
        } else {
            ("upper", "lower")
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Records => self.records(),
        }
    }

    fn text(&self) -> String {
        let ks = &self.analysis.ks;
        let t = &self.analysis.table;
        let (hi, lo) = self.names();
        let e = &self.extremes;
        let mut s = String::new();
        writeln!(s, "mode {}", if self.mean { "mean" } else { "set" }).unwrap();
        writeln!(s, "base {}", ks.base()).unwrap();
        writeln!(s, "kernel maps d={}", ks.dim()).unwrap();
        writeln!(s, "period a={}", t.period()).unwrap();
        writeln!(s, "census constants (rows i=1..d, columns j=0..a-1):").unwrap();
        for (i, row) in t.census().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            writeln!(s, "  c[{}] = {}", i + 1, cells.join(" ")).unwrap();
        }
        writeln!(s, "{lo} {} ~ {}", format_rational(&e.lower), format_decimal(&e.lower, 12)).unwrap();
        writeln!(s, "{hi} {} ~ {}", format_rational(&e.upper), format_decimal(&e.upper, 12)).unwrap();
        for (name, w) in [(hi, &e.witness_upper), (lo, &e.witness_lower)] {
            match w {
                Some(w) => writeln!(
                    s,
                    "witness {name} A={} B={} j={}",
                    format_word(&w.prefix, ks.base()),
                    format_word(&w.cycle, ks.base()),
                    w.residue
                )
                .unwrap(),
                None => writeln!(s, "witness {name} none").unwrap(),
            }
        }
        if let Some(tc) = e.trivial {
            writeln!(s, "trivial {}", trivial_name(tc)).unwrap();
        }
        s
    }

    fn records(&self) -> String {
        let ks = &self.analysis.ks;
        let t = &self.analysis.table;
        let (hi, lo) = self.names();
        let e = &self.extremes;
        let mut s = String::new();
        writeln!(s, "mode={}", if self.mean { "mean" } else { "set" }).unwrap();
        writeln!(s, "base={}", ks.base()).unwrap();
        writeln!(s, "d={}", ks.dim()).unwrap();
        writeln!(s, "a={}", t.period()).unwrap();
        for (i, row) in t.census().iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                writeln!(s, "c.{}.{}={}", i + 1, j, format_rational(c)).unwrap();
            }
        }
        for (name, v, w) in [(hi, &e.upper, &e.witness_upper), (lo, &e.lower, &e.witness_lower)] {
            writeln!(s, "{name}={}", format_rational(v)).unwrap();
            writeln!(s, "{name}.decimal={}", format_decimal(v, 12)).unwrap();
            if let Some(w) = w {
                writeln!(s, "{name}.witness.A={}", format_word(&w.prefix, ks.base())).unwrap();
                writeln!(s, "{name}.witness.B={}", format_word(&w.cycle, ks.base())).unwrap();
                writeln!(s, "{name}.witness.j={}", w.residue).unwrap();
            }
        }
        if let Some(tc) = e.trivial {
            writeln!(s, "trivial={}", trivial_name(tc)).unwrap();
        }
        s
    }
}

//! Deterministic CSV writing: commented key=value header block, one row per
//! record, shortest round-trip float formatting (no locale, no timestamps).

use std::io::{self, Write};

pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(out: W) -> Self {
        CsvWriter { out }
    }

    /// Commented header block: `# key = value` lines.
    pub fn meta(&mut self, key: &str, value: &str) -> io::Result<()> {
        writeln!(self.out, "# {key} = {value}")
    }

    pub fn columns(&mut self, names: &[&str]) -> io::Result<()> {
        writeln!(self.out, "{}", names.join(","))
    }

    pub fn row(&mut self, values: &[f64]) -> io::Result<()> {
        let mut first = true;
        for v in values {
            if !first {
                write!(self.out, ",")?;
            }
            write!(self.out, "{v}")?;
            first = false;
        }
        writeln!(self.out)
    }

    pub fn row_mixed(&mut self, values: &[CsvField]) -> io::Result<()> {
        let mut first = true;
        for v in values {
            if !first {
                write!(self.out, ",")?;
            }
            match v {
                CsvField::Num(x) => write!(self.out, "{x}")?,
                CsvField::Int(i) => write!(self.out, "{i}")?,
                CsvField::Str(s) => write!(self.out, "{s}")?,
            }
            first = false;
        }
        writeln!(self.out)
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

pub enum CsvField<'a> {
    Num(f64),
    Int(i64),
    Str(&'a str),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_output() {
        let render = || {
            let mut w = CsvWriter::new(Vec::new());
            w.meta("experiment", "demo").unwrap();
            w.columns(&["omega", "re", "im"]).unwrap();
            w.row(&[0.1, 1.0 / 3.0, -2.5e-17]).unwrap();
            String::from_utf8(w.into_inner()).unwrap()
        };
        assert_eq!(render(), render());
        let s = render();
        assert!(s.starts_with("# experiment = demo\n"));
        assert!(s.contains("omega,re,im"));
    }
}

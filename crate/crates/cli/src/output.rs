//! CSV emission. Every file starts with a `#` manifest naming the command and
//! every parameter, so re-running it reproduces the file byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

/// 17 significant digits, round-trippable.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Manifest {
    command: &'static str,
    params: Vec<(&'static str, String)>,
}

impl Manifest {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            params: Vec::new(),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.params.push((key, value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "# ringtransfer {} {}",
            self.command,
            env!("CARGO_PKG_VERSION")
        )
        .unwrap();
        for (key, value) in &self.params {
            writeln!(out, "# {key} = {value}").unwrap();
        }
        writeln!(
            out,
            "# rows are in grid order; parallel results are collected before writing"
        )
        .unwrap();
        out
    }
}

pub struct Table {
    text: String,
}

impl Table {
    pub fn new(manifest: &Manifest) -> Self {
        Self {
            text: manifest.render(),
        }
    }

    pub fn header(&mut self, columns: &[&str]) {
        self.text.push_str(&columns.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, fields: &[String]) {
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    /// Blank line separating data blocks (gnuplot `index`).
    pub fn gap(&mut self) {
        self.text.push('\n');
    }

    pub fn write(&self, out: Option<&Path>) -> io::Result<()> {
        match out {
            Some(path) => fs::write(path, &self.text),
            None => io::stdout().lock().write_all(self.text.as_bytes()),
        }
    }
}

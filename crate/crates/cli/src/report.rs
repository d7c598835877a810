//! Plain tables rendered as TSV, Markdown or an aligned text document.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Markdown,
    Doc,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grid {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Grid {
    pub fn new(headers: &[&str]) -> Self {
        Grid {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self, format: Format, title: &str) -> String {
        match format {
            Format::Tsv => self.tsv(),
            Format::Markdown => self.markdown(),
            Format::Doc => self.doc(title),
        }
    }

    fn tsv(&self) -> String {
        let clean = |c: &str| c.replace(['\t', '\n'], " ");
        let mut s = String::new();
        for row in std::iter::once(&self.headers).chain(&self.rows) {
            let cells: Vec<String> = row.iter().map(|c| clean(c)).collect();
            s.push_str(&cells.join("\t"));
            s.push('\n');
        }
        s
    }

    fn markdown(&self) -> String {
        let clean = |c: &str| c.replace('|', "\\|").replace('\n', " ");
        let line = |row: &[String]| {
            let cells: Vec<String> = row.iter().map(|c| clean(c)).collect();
            format!("| {} |\n", cells.join(" | "))
        };
        let mut s = line(&self.headers);
        let rule: Vec<&str> = self.headers.iter().map(|_| "---").collect();
        let _ = writeln!(s, "| {} |", rule.join(" | "));
        for row in &self.rows {
            s.push_str(&line(row));
        }
        s
    }

    fn doc(&self, title: &str) -> String {
        let mut width: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| {
            let mut out = String::new();
            for (k, (c, w)) in row.iter().zip(&width).enumerate() {
                if k + 1 == row.len() {
                    out.push_str(c);
                } else {
                    let _ = write!(out, "{c:<w$}  ");
                }
            }
            out.trim_end().to_string() + "\n"
        };
        let mut s = format!("{title}\n{}\n\n", "=".repeat(title.chars().count()));
        s.push_str(&line(&self.headers));
        let rule: Vec<String> = width.iter().map(|&w| "-".repeat(w)).collect();
        s.push_str(&line(&rule));
        for row in &self.rows {
            s.push_str(&line(row));
        }
        s
    }
}

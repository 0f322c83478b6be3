//! CSV and JSON rendering of the library's reports.
//!
//! A report is a list of [`Table`]s. CSV output writes each table as a header
//! row followed by data rows, separates tables by a blank line and appends
//! summary records as `# key=value,...` lines. JSON output is a single object
//! carrying `"schema_version": "1"` and one array of row objects per table.

use serde_json::{json, Map, Value};

use crate::bounds::TrialRow;
use crate::domain::DomainSpec;
use crate::interp::LebesgueReport;
use crate::potential::{Fig3Data, GrowthRow};
use crate::star::StarReport;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Null,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) if v.is_finite() => json!(v),
            Cell::Float(_) | Cell::Null => Value::Null,
            Cell::Bool(v) => json!(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<Vec<(&'static str, Cell)>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table { name, columns: columns.to_vec(), rows: Vec::new(), summary: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A complete report: metadata shown in JSON plus its tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(&'static str, Value)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report { command, meta: Vec::new(), tables: Vec::new() }
    }

    pub fn meta(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.meta.push((key, value.into()));
        self
    }

    pub fn table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tables.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            for s in &t.summary {
                let kv: Vec<String> = s.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect();
                out.push_str("# ");
                out.push_str(&kv.join(","));
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        for (k, v) in &self.meta {
            doc.insert((*k).into(), v.clone());
        }
        for t in &self.tables {
            let rows: Vec<Value> = t
                .rows
                .iter()
                .map(|r| Value::Object(t.columns.iter().zip(r).map(|(c, v)| ((*c).into(), v.json())).collect()))
                .collect();
            doc.insert(t.name.into(), Value::Array(rows));
            if !t.summary.is_empty() {
                let sums: Vec<Value> = t
                    .summary
                    .iter()
                    .map(|s| Value::Object(s.iter().map(|(k, v)| ((*k).into(), v.json())).collect()))
                    .collect();
                doc.insert(format!("{}_summary", t.name), Value::Array(sums));
            }
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("plain values serialize");
        s.push('\n');
        s
    }
}

/// `index,parameter,re,im` for points given in natural coordinates.
pub fn points_table(domain: &DomainSpec, seq: &[f64]) -> Table {
    let mut t = Table::new("points", &["index", "parameter", "re", "im"]);
    for (i, &x) in seq.iter().enumerate() {
        let z = domain.point(x);
        t.push(vec![i.into(), domain.param_of_coord(x).into(), z.re.into(), z.im.into()]);
    }
    t
}

/// `n,j,midpoint,s,H,ratio` with one summary line per stage.
pub fn star_table(reports: &[StarReport]) -> Table {
    let mut t = Table::new("star", &["n", "j", "midpoint", "s", "H", "ratio"]);
    for r in reports {
        for e in &r.entries {
            t.push(vec![r.n.into(), e.j.into(), e.midpoint.into(), e.s.into(), e.h.into(), e.ratio.into()]);
        }
        t.summary.push(vec![
            ("n", r.n.into()),
            ("max_ratio", r.max_ratio.into()),
            ("argmax_j", r.argmax_j.into()),
        ]);
    }
    t
}

/// `n,log_vdm,dn_root,step_ratio,tau_ratio,pseudo_growth`; `step_ratio` is
/// the logarithm `ln|p_n(a_n)|`.
pub fn growth_table(rows: &[GrowthRow]) -> Table {
    let mut t = Table::new(
        "growth",
        &["n", "log_vdm", "dn_root", "step_ratio", "tau_ratio", "pseudo_growth"],
    );
    for r in rows {
        t.push(vec![
            r.n.into(),
            r.log_vdm.into(),
            r.dn_root.into(),
            r.step_ratio.into(),
            r.tau_ratio.into(),
            r.pseudo_growth.into(),
        ]);
    }
    t
}

/// `x,p13` graph samples followed by `midpoint,2p13` markers.
pub fn fig3_tables(d: &Fig3Data) -> [Table; 2] {
    let mut g = Table::new("graph", &["x", "p13"]);
    for &(x, y) in &d.graph {
        g.push(vec![x.into(), y.into()]);
    }
    let mut m = Table::new("midpoints", &["midpoint", "2p13"]);
    for &(x, y) in &d.midpoints {
        m.push(vec![x.into(), y.into()]);
    }
    [g, m]
}

/// `n,sup_error`.
pub fn error_table(rows: &[(usize, f64)]) -> Table {
    let mut t = Table::new("errors", &["n", "sup_error"]);
    for &(n, e) in rows {
        t.push(vec![n.into(), e.into()]);
    }
    t
}

/// `n,lambda,lambda_nth_root,argmax_x`.
pub fn lebesgue_table(rows: &[LebesgueReport]) -> Table {
    let mut t = Table::new("lebesgue", &["n", "lambda", "lambda_nth_root", "argmax_x"]);
    for r in rows {
        t.push(vec![r.n.into(), r.lambda.into(), r.nth_root().into(), r.argmax_x.into()]);
    }
    t
}

/// `trial,epsilon,n1,n2,m,lemma2_ok,prop3_ok,prop3_log_margin`.
pub fn trial_table(rows: &[TrialRow]) -> Table {
    let mut t = Table::new(
        "trials",
        &["trial", "epsilon", "n1", "n2", "m", "lemma2_ok", "prop3_ok", "prop3_log_margin"],
    );
    for r in rows {
        t.push(vec![
            r.trial.into(),
            r.epsilon.into(),
            r.n1.into(),
            r.n2.into(),
            r.m.into(),
            r.lemma2_ok.into(),
            r.prop3_ok.into(),
            r.prop3_log_margin.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leja::generate;
    use crate::star::{sorted_prefix, star_metrics};

    #[test]
    fn points_csv() {
        let d = DomainSpec::interval(2.0, 4.0).unwrap();
        let seq = generate(&d, 3, 0.5).unwrap();
        let csv = Report::new("gen").table(points_table(&d, &seq)).to_csv();
        assert_eq!(csv, "index,parameter,re,im\n0,0,2,0\n1,1,4,0\n2,0.5,3,0\n");
    }

    #[test]
    fn star_summary_lines() {
        let row = sorted_prefix(&[0.0, 1.0], 2).unwrap();
        let r = star_metrics(&row).unwrap();
        let csv = Report::new("star").table(star_table(&[r])).to_csv();
        assert_eq!(csv, "n,j,midpoint,s,H,ratio\n2,1,0.5,0.5,0.5,1\n# n=2,max_ratio=1,argmax_j=1\n");
    }

    #[test]
    fn json_carries_schema_and_nulls() {
        let mut t = Table::new("growth", &["n", "tau_ratio"]);
        t.push(vec![3usize.into(), None.into()]);
        t.push(vec![4usize.into(), Cell::Float(f64::INFINITY)]);
        let v: Value = serde_json::from_str(&Report::new("growth").meta("domain", "0,1").table(t).to_json()).unwrap();
        assert_eq!(v["schema_version"], "1");
        assert_eq!(v["domain"], "0,1");
        assert_eq!(v["growth"][0]["n"], 3);
        assert!(v["growth"][0]["tau_ratio"].is_null());
        assert!(v["growth"][1]["tau_ratio"].is_null());
    }

    #[test]
    fn tables_separated_by_blank_line() {
        let d = crate::potential::fig3_data();
        let [g, m] = fig3_tables(&d);
        let csv = Report::new("fig3").table(g).table(m).to_csv();
        let blocks: Vec<&str> = csv.split("\n\n").collect();
        assert_eq!(blocks.len(), 2);
        assert!(blocks[0].starts_with("x,p13\n"));
        assert_eq!(blocks[0].lines().count(), 2002);
        assert!(blocks[1].starts_with("midpoint,2p13\n"));
        assert_eq!(blocks[1].lines().count(), 13);
    }
}

//! Generation of standalone matplotlib scripts from the tool's CSV output.

use crate::error::{Error, Result};

use super::output::{DIVERGE_HEADER, P2_HEADER, SCALAR_HEADER, WITNESS_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Diverge,
    Scalar,
    Witness,
    P2,
}

struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn column(&self, name: &str) -> Vec<&str> {
        let i = self.columns.iter().position(|c| c == name).expect("known column");
        self.rows.iter().map(|r| r[i].as_str()).collect()
    }
}

fn parse(csv: &str) -> Result<(Schema, Table)> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("no header line found in CSV input".into()))?
        .trim();
    let schema = match header {
        DIVERGE_HEADER => Schema::Diverge,
        SCALAR_HEADER => Schema::Scalar,
        WITNESS_HEADER => Schema::Witness,
        P2_HEADER => Schema::P2,
        other => {
            return Err(Error::Parse(format!(
                "unknown CSV schema with header {other:?}; expected output of diverge, \
                 scalar-bound, witness or p2-contrast"
            )))
        }
    };
    let columns: Vec<String> = header.split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    for line in lines {
        let cells: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
        if cells.len() != columns.len() {
            return Err(Error::Parse(format!(
                "row {line:?} has {} fields, header has {}",
                cells.len(),
                columns.len()
            )));
        }
        rows.push(cells);
    }
    Ok((schema, Table { columns, rows }))
}

pub fn detect_schema(csv: &str) -> Result<Schema> {
    Ok(parse(csv)?.0)
}

fn py_numbers(values: &[&str]) -> String {
    let v: Vec<String> = values
        .iter()
        .map(|s| match *s {
            "nan" => "float('nan')".to_string(),
            "inf" => "float('inf')".to_string(),
            "-inf" => "float('-inf')".to_string(),
            other => other.to_string(),
        })
        .collect();
    format!("[{}]", v.join(", "))
}

fn py_strings(values: &[&str]) -> String {
    let v: Vec<String> = values.iter().map(|s| format!("{s:?}")).collect();
    format!("[{}]", v.join(", "))
}

const PRELUDE: &str = "import math\nimport sys\n\nimport matplotlib\nmatplotlib.use(\"Agg\")\nimport matplotlib.pyplot as plt\n\n";

/// A self-contained Python script that renders `csv` to the PNG path given
/// as its first argument.
pub fn plot_script(csv: &str) -> Result<String> {
    let (schema, t) = parse(csv)?;
    let mut s = String::from("#!/usr/bin/env python3\n");
    s.push_str(PRELUDE);
    match schema {
        Schema::Diverge => {
            s.push_str(&format!("m = {}\n", py_numbers(&t.column("m"))));
            s.push_str(&format!("D = {}\n", py_numbers(&t.column("D_m"))));
            s.push_str(&format!("sqq = {}\n", py_numbers(&t.column("sqq_bound"))));
            s.push_str(&format!("chain = {}\n", py_numbers(&t.column("chain_bound"))));
            s.push_str(
                "x = [math.log(v) for v in m]\n\
                 fig, ax = plt.subplots()\n\
                 ax.plot(x, D, \"o-\", label=\"D_m\")\n\
                 ax.plot(x, sqq, \"s--\", label=\"sqq bound\")\n\
                 ax.plot(x, chain, \"^:\", label=\"chain bound\")\n\
                 ax.set_xlabel(\"ln m\")\n\
                 ax.set_ylabel(\"value\")\n\
                 ax.legend()\n",
            );
        }
        Schema::Scalar => {
            let labels: Vec<String> = t
                .rows
                .iter()
                .map(|r| format!("{} l={} m={}", r[1], r[0], r[2]))
                .collect();
            let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
            s.push_str(&format!("labels = {}\n", py_strings(&labels)));
            s.push_str(&format!("value = {}\n", py_numbers(&t.column("sup_value"))));
            s.push_str(&format!("bound = {}\n", py_numbers(&t.column("bound"))));
            s.push_str(
                "fig, ax = plt.subplots(figsize=(max(6, 0.3 * len(value)), 4))\n\
                 ax.bar(range(len(value)), value)\n\
                 ax.axhline(max(bound), color=\"red\", label=\"pi/sqrt(2)\")\n\
                 ax.set_xticks(range(len(value)))\n\
                 ax.set_xticklabels(labels, rotation=90, fontsize=6)\n\
                 ax.set_ylabel(\"sqrt(lambda) sup |Du|\")\n\
                 ax.legend()\n\
                 fig.tight_layout()\n",
            );
        }
        Schema::Witness => {
            s.push_str(&format!("n = {}\n", py_numbers(&t.column("n"))));
            s.push_str(&format!("value = {}\n", py_numbers(&t.column("value"))));
            s.push_str(&format!("limit = {}\n", py_numbers(&t.column("limit_F0"))));
            s.push_str(
                "pts = [(a, b) for a, b in zip(n, value) if a > 0]\n\
                 fig, ax = plt.subplots()\n\
                 if pts:\n    ax.plot([p[0] for p in pts], [p[1] for p in pts], \"o-\", label=\"F_n witness\")\n    ax.set_xscale(\"log\")\n\
                 ax.axhline(limit[0], color=\"red\", label=\"sign profile\")\n\
                 ax.set_xlabel(\"n\")\n\
                 ax.set_ylabel(\"witness value\")\n\
                 ax.legend()\n",
            );
        }
        Schema::P2 => {
            s.push_str(&format!("m = {}\n", py_numbers(&t.column("m"))));
            s.push_str(&format!("ratio = {}\n", py_numbers(&t.column("ratio"))));
            s.push_str(&format!("err = {}\n", py_numbers(&t.column("std_error"))));
            s.push_str(&format!("D = {}\n", py_numbers(&t.column("D_m"))));
            s.push_str(
                "fig, ax = plt.subplots()\n\
                 ax.errorbar(m, ratio, yerr=[3 * e for e in err], fmt=\"o-\", label=\"L2 ratio\")\n\
                 ax.set_xscale(\"log\", base=2)\n\
                 ax.set_xlabel(\"m\")\n\
                 ax.set_ylabel(\"L2 gradient ratio\")\n\
                 ax2 = ax.twinx()\n\
                 ax2.plot(m, D, \"s--\", color=\"gray\", label=\"D_m\")\n\
                 ax2.set_ylabel(\"D_m\")\n\
                 ax.legend(loc=\"upper left\")\n",
            );
        }
    }
    s.push_str("out = sys.argv[1] if len(sys.argv) > 1 else \"plot.png\"\nfig.savefig(out, dpi=150)\n");
    Ok(s)
}

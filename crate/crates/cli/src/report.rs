//! Report types shared by the machine (JSON) and human (table) formats.

use serde::{Deserialize, Serialize};
use ssmass::Rational;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A report renders as single-line JSON or as a fixed-width table.
pub trait Report: Serialize {
    fn table(&self) -> String;

    fn json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Fixed-width table with right-aligned columns.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|c| self.rows.iter().map(|r| r[c].len()).chain([self.header[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| -> String {
            cells.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect::<Vec<_>>().join("  ")
        };
        let mut out = vec![line(self.header.clone())];
        out.push(widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
        out.extend(self.rows.iter().map(|r| line(r.iter().map(String::as_str).collect())));
        out.join("\n")
    }
}

/// Two-column key/value table.
fn summary(pairs: Vec<(&'static str, String)>) -> String {
    let width = pairs.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    pairs.iter().map(|(k, v)| format!("{k:<width$}  {v}")).collect::<Vec<_>>().join("\n")
}

fn list<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveClass {
    pub j: String,
    pub aut: u32,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SsReport {
    pub p: u64,
    pub classes: Vec<CurveClass>,
    pub mass: Rational,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d: Option<u64>,
    pub seed: u64,
    pub version: String,
}

impl Report for SsReport {
    fn table(&self) -> String {
        let mut t = Table::new(vec!["#", "j", "aut"]);
        for (i, c) in self.classes.iter().enumerate() {
            t.row(vec![(i + 1).to_string(), c.j.clone(), c.aut.to_string()]);
        }
        let mut head = vec![("p", self.p.to_string())];
        if let Some(d) = self.d {
            head.push(("d", d.to_string()));
        }
        head.extend([("seed", self.seed.to_string()), ("version", self.version.clone())]);
        let tail = summary(vec![("count", self.count.to_string()), ("mass", self.mass.to_string())]);
        format!("{}\n\n{}\n\n{}", summary(head), t.render(), tail)
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct OrderClass {
    pub unit_order: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuatReport {
    pub p: u64,
    pub classes: Vec<OrderClass>,
    pub mass: Rational,
    pub count: usize,
    pub certificate: String,
    pub seed: u64,
    pub version: String,
}

impl Report for QuatReport {
    fn table(&self) -> String {
        let mut t = Table::new(vec!["#", "unit_order"]);
        for (i, c) in self.classes.iter().enumerate() {
            t.row(vec![(i + 1).to_string(), c.unit_order.to_string()]);
        }
        let head = summary(vec![
            ("p", self.p.to_string()),
            ("seed", self.seed.to_string()),
            ("version", self.version.clone()),
        ]);
        let tail = summary(vec![
            ("count", self.count.to_string()),
            ("mass", self.mass.to_string()),
            ("certificate", self.certificate.clone()),
        ]);
        format!("{head}\n\n{}\n\n{tail}", t.render())
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MassReport {
    pub g: u32,
    pub p: u64,
    pub mass: Rational,
    pub seed: u64,
    pub version: String,
}

impl Report for MassReport {
    fn table(&self) -> String {
        summary(vec![
            ("g", self.g.to_string()),
            ("p", self.p.to_string()),
            ("mass", self.mass.to_string()),
            ("seed", self.seed.to_string()),
            ("version", self.version.clone()),
        ])
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct LevelReport {
    pub p: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub index: u128,
    pub mass: Rational,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub count: Option<u128>,
    pub seed: u64,
    pub version: String,
}

impl Report for LevelReport {
    fn table(&self) -> String {
        let mut rows = vec![
            ("p", self.p.to_string()),
            ("N", self.n.to_string()),
            ("index", self.index.to_string()),
            ("mass", self.mass.to_string()),
        ];
        if let Some(c) = self.count {
            rows.push(("count", c.to_string()));
        }
        rows.extend([("seed", self.seed.to_string()), ("version", self.version.clone())]);
        summary(rows)
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub label: String,
    pub slopes: String,
    pub isoclinic: bool,
    pub supersingular: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NewtonReport {
    pub components: Vec<ComponentVerdict>,
    pub basic: bool,
    pub seed: u64,
    pub version: String,
}

impl Report for NewtonReport {
    fn table(&self) -> String {
        let mut t = Table::new(vec!["label", "slopes", "isoclinic", "supersingular"]);
        for c in &self.components {
            t.row(vec![c.label.clone(), c.slopes.clone(), c.isoclinic.to_string(), c.supersingular.to_string()]);
        }
        let tail = summary(vec![
            ("basic", self.basic.to_string()),
            ("seed", self.seed.to_string()),
            ("version", self.version.clone()),
        ]);
        format!("{}\n\n{tail}", t.render())
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VerifyReport {
    pub p: u64,
    pub geometric_mass: Rational,
    pub arithmetic_mass: Rational,
    pub analytic_mass: Rational,
    pub aut_multiset: Vec<u32>,
    pub unit_multiset: Vec<u32>,
    pub class_number: u64,
    #[serde(rename = "match")]
    pub all_match: bool,
    pub seed: u64,
    pub version: String,
}

impl Report for VerifyReport {
    fn table(&self) -> String {
        let mut t = Table::new(vec!["side", "mass", "multiset"]);
        t.row(vec!["geometric".into(), self.geometric_mass.to_string(), list(&self.aut_multiset)]);
        t.row(vec!["arithmetic".into(), self.arithmetic_mass.to_string(), list(&self.unit_multiset)]);
        t.row(vec!["analytic".into(), self.analytic_mass.to_string(), "-".into()]);
        let head = summary(vec![
            ("p", self.p.to_string()),
            ("seed", self.seed.to_string()),
            ("version", self.version.clone()),
        ]);
        let tail =
            summary(vec![("class_number", self.class_number.to_string()), ("match", self.all_match.to_string())]);
        format!("{head}\n\n{}\n\n{tail}", t.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerifyReport {
        VerifyReport {
            p: 11,
            geometric_mass: Rational::new(5, 12),
            arithmetic_mass: Rational::new(5, 12),
            analytic_mass: Rational::new(5, 12),
            aut_multiset: vec![4, 6],
            unit_multiset: vec![4, 6],
            class_number: 2,
            all_match: true,
            seed: 7,
            version: VERSION.into(),
        }
    }

    #[test]
    fn verify_json_field_order() {
        let json = sample().json();
        assert!(json.starts_with(
            r#"{"p":11,"geometric_mass":"5/12","arithmetic_mass":"5/12","analytic_mass":"5/12","aut_multiset":[4,6],"unit_multiset":[4,6],"class_number":2,"match":true,"seed":7,"#
        ));
        assert!(!json.contains('\n'));
    }

    #[test]
    fn json_round_trips() {
        let json = sample().json();
        let back: VerifyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.json(), json);
    }

    #[test]
    fn tables_are_aligned() {
        let table = sample().table();
        let rows: Vec<&str> = table.lines().skip_while(|l| !l.contains("side")).take(5).collect();
        let widths: Vec<usize> = rows.iter().map(|l| l.chars().count()).collect();
        assert!(widths.windows(2).all(|w| w[0] == w[1]), "{table}");
    }
}

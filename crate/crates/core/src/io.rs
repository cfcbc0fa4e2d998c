//! The complex-datum file format: one JSON document per datum.
//!
//! Top-level keys: `degrees` (required), `differential`, `inner`,
//! `contractions`, `product`, `cap` — everything else is rejected. All
//! coefficients are strings `"p"` or `"p/q"`. Entries are addressed by
//! basis label, so labels must be unique across the whole document. Inner
//! products are symmetric: an entry fills both positions, and listing both
//! orientations with different values is an error. Degrees left out of
//! `inner` keep the identity Gram matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::GradedComplex;
use crate::equivariant::{Contraction, EquivariantDatum, ProductTable};
use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{fmt_rat, parse_rat};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDatum {
    degrees: Vec<FileDegree>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    differential: Vec<FileMapEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    inner: Vec<FileInnerEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    contractions: Vec<FileContraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    product: Option<Vec<FileProductEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cap: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileDegree {
    degree: usize,
    labels: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileMapEntry {
    from_label: String,
    to_label: String,
    coeff: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileInnerEntry {
    degree: usize,
    row_label: String,
    col_label: String,
    coeff: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileContraction {
    t_degree: usize,
    #[serde(default)]
    entries: Vec<FileMapEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileProductEntry {
    left_label: String,
    right_label: String,
    out_label: String,
    coeff: String,
}

/// Parsed datum plus the cap the file asked for, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDatum {
    pub datum: EquivariantDatum,
    pub cap: Option<usize>,
}

pub fn parse_datum_str(text: &str) -> Result<ParsedDatum> {
    let file: FileDatum =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    build_datum(file)
}

pub fn parse_datum_path(path: &std::path::Path) -> Result<ParsedDatum> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_datum_str(&text)
}

fn build_datum(file: FileDatum) -> Result<ParsedDatum> {
    // degree table and global label map
    let mut by_degree: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for d in &file.degrees {
        if by_degree.insert(d.degree, d.labels.clone()).is_some() {
            return Err(Error::Parse(format!(
                "degree {} listed twice under key degrees",
                d.degree
            )));
        }
    }
    let max_degree = by_degree.keys().max().copied();
    let len = max_degree.map_or(0, |m| m + 1);
    let mut labels: Vec<Vec<String>> = vec![Vec::new(); len];
    for (deg, ls) in &by_degree {
        labels[*deg] = ls.clone();
    }
    let mut lookup: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for (deg, ls) in labels.iter().enumerate() {
        for (idx, l) in ls.iter().enumerate() {
            if lookup.insert(l.clone(), (deg, idx)).is_some() {
                return Err(Error::Parse(format!(
                    "label {l:?} appears in more than one degree; labels must be unique"
                )));
            }
        }
    }
    let find = |label: &str, key: &str| -> Result<(usize, usize)> {
        lookup.get(label).copied().ok_or_else(|| {
            Error::Parse(format!("unknown label {label:?} under key {key}"))
        })
    };
    let dim = |deg: usize| labels.get(deg).map_or(0, Vec::len);

    // differential
    let mut differential: Vec<RatMatrix> = (0..len)
        .map(|m| RatMatrix::zero(if m + 1 < len { dim(m + 1) } else { 0 }, dim(m)))
        .collect();
    for entry in &file.differential {
        let (fd, fi) = find(&entry.from_label, "differential")?;
        let (td, ti) = find(&entry.to_label, "differential")?;
        if td != fd + 1 {
            return Err(Error::Parse(format!(
                "differential entry {} -> {} does not raise degree by one",
                entry.from_label, entry.to_label
            )));
        }
        let coeff = parse_rat(&entry.coeff)?;
        let current = differential[fd].get(ti, fi) + coeff;
        differential[fd].set(ti, fi, current);
    }

    // inner products: explicit degrees start from zero and mirror entries
    let mut inner: Vec<RatMatrix> = (0..len).map(|m| RatMatrix::identity(dim(m))).collect();
    let mut touched: BTreeMap<usize, RatMatrix> = BTreeMap::new();
    let mut explicit: BTreeMap<(usize, usize, usize), String> = BTreeMap::new();
    for entry in &file.inner {
        let deg = entry.degree;
        if deg >= len {
            return Err(Error::Parse(format!(
                "inner entry at degree {deg} is outside the complex"
            )));
        }
        let (rd, ri) = find(&entry.row_label, "inner")?;
        let (cd, ci) = find(&entry.col_label, "inner")?;
        if rd != deg || cd != deg {
            return Err(Error::Parse(format!(
                "inner entry ({}, {}) does not live in degree {deg}",
                entry.row_label, entry.col_label
            )));
        }
        if let Some(prev) = explicit.insert((deg, ci, ri), entry.coeff.clone()) {
            if parse_rat(&prev)? != parse_rat(&entry.coeff)? {
                return Err(Error::Parse(format!(
                    "inner entries ({}, {}) and its mirror disagree",
                    entry.row_label, entry.col_label
                )));
            }
        }
        explicit.insert((deg, ri, ci), entry.coeff.clone());
        let m = touched
            .entry(deg)
            .or_insert_with(|| RatMatrix::zero(dim(deg), dim(deg)));
        let coeff = parse_rat(&entry.coeff)?;
        m.set(ri, ci, coeff.clone());
        m.set(ci, ri, coeff);
    }
    for (deg, m) in touched {
        inner[deg] = m;
    }

    // contractions
    let mut contractions = Vec::new();
    for (jc, con) in file.contractions.iter().enumerate() {
        let t = con.t_degree;
        if t < 2 || t % 2 != 0 {
            return Err(Error::Parse(format!(
                "contraction {jc} has t_degree {t}; expected an even integer >= 2"
            )));
        }
        let mut ops: Vec<RatMatrix> = (0..len)
            .map(|m| {
                let target_dim = (m + 1).checked_sub(t).map_or(0, dim);
                RatMatrix::zero(target_dim, dim(m))
            })
            .collect();
        for entry in &con.entries {
            let (fd, fi) = find(&entry.from_label, "contractions")?;
            let (td, ti) = find(&entry.to_label, "contractions")?;
            if fd < t - 1 || td != fd + 1 - t {
                return Err(Error::Parse(format!(
                    "contraction entry {} -> {} does not lower degree by {}",
                    entry.from_label,
                    entry.to_label,
                    t - 1
                )));
            }
            let coeff = parse_rat(&entry.coeff)?;
            let current = ops[fd].get(ti, fi) + coeff;
            ops[fd].set(ti, fi, current);
        }
        contractions.push(Contraction { t_degree: t, ops });
    }

    // product table
    let product = match &file.product {
        None => None,
        Some(entries) => {
            let mut table = ProductTable::new();
            for entry in entries {
                let (ld, li) = find(&entry.left_label, "product")?;
                let (rd, ri) = find(&entry.right_label, "product")?;
                let (od, oi) = find(&entry.out_label, "product")?;
                if od != ld + rd {
                    return Err(Error::Parse(format!(
                        "product entry {} * {} -> {} has inconsistent degrees",
                        entry.left_label, entry.right_label, entry.out_label
                    )));
                }
                table.insert(ld, li, rd, ri, oi, parse_rat(&entry.coeff)?);
            }
            Some(table)
        }
    };

    let complex = GradedComplex::new(labels, differential, Some(inner))?;
    let datum = EquivariantDatum::new(complex, contractions, product)?;
    Ok(ParsedDatum {
        datum,
        cap: file.cap,
    })
}

/// Serialize a datum (and optional cap) back to the file format. Parsing
/// the output reproduces the datum exactly.
pub fn datum_to_json(datum: &EquivariantDatum, cap: Option<usize>) -> String {
    let c = &datum.complex;
    let degrees: Vec<FileDegree> = (0..c.len())
        .map(|m| FileDegree {
            degree: m,
            labels: c.labels(m).to_vec(),
        })
        .collect();
    let mut differential = Vec::new();
    for m in 0..c.len() {
        for (r, col, v) in c.d(m).entries() {
            differential.push(FileMapEntry {
                from_label: c.label(m, col).to_string(),
                to_label: c.label(m + 1, r).to_string(),
                coeff: fmt_rat(v),
            });
        }
    }
    let mut inner = Vec::new();
    for m in 0..c.len() {
        let g = c.inner(m);
        if g == RatMatrix::identity(c.dim(m)) {
            continue;
        }
        for (r, col, v) in g.entries() {
            if r > col {
                continue; // symmetric: emit the upper triangle once
            }
            inner.push(FileInnerEntry {
                degree: m,
                row_label: c.label(m, r).to_string(),
                col_label: c.label(m, col).to_string(),
                coeff: fmt_rat(v),
            });
        }
    }
    let contractions = datum
        .contractions
        .iter()
        .map(|con| {
            let mut entries = Vec::new();
            for (m, op) in con.ops.iter().enumerate() {
                for (r, col, v) in op.entries() {
                    entries.push(FileMapEntry {
                        from_label: c.label(m, col).to_string(),
                        to_label: c.label(m + 1 - con.t_degree, r).to_string(),
                        coeff: fmt_rat(v),
                    });
                }
            }
            FileContraction {
                t_degree: con.t_degree,
                entries,
            }
        })
        .collect();
    let product = datum.product.as_ref().map(|table| {
        let mut entries = Vec::new();
        for (&(p, i, q, j), vals) in table.iter() {
            for (k, v) in vals {
                entries.push(FileProductEntry {
                    left_label: c.label(p, i).to_string(),
                    right_label: c.label(q, j).to_string(),
                    out_label: c.label(p + q, *k).to_string(),
                    coeff: fmt_rat(v),
                });
            }
        }
        entries
    });
    let file = FileDatum {
        degrees,
        differential,
        inner,
        contractions,
        product,
        cap,
    };
    serde_json::to_string_pretty(&file).expect("file model serializes")
}

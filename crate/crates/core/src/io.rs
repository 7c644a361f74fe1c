//! File formats: graph and assignment JSON, and the plain-text matrix dump.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adversary::Perturbation;
use crate::error::{Error, Result};
use crate::graph::{MatrixKind, SparseGraph, SparseSymMatrix};
use crate::model::TypedGraphSample;

/// `{"n":..,"r":..,"seed":..,"types":[..],"edges":[[u,v],..]}` with `u < v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub r: usize,
    pub seed: u64,
    pub types: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
}

impl GraphDocument {
    pub fn from_sample(sample: &TypedGraphSample) -> Self {
        GraphDocument {
            n: sample.graph.n(),
            r: sample.r,
            seed: sample.seed,
            types: sample.sigma.clone(),
            edges: sample.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn into_sample(self) -> Result<TypedGraphSample> {
        if self.types.len() != self.n {
            return Err(Error::InvalidGraph(format!(
                "{} types for {} vertices",
                self.types.len(),
                self.n
            )));
        }
        if let Some((v, &label)) = self.types.iter().enumerate().find(|(_, &t)| t >= self.r) {
            return Err(Error::LabelOutOfRange { vertex: v, label, r: self.r });
        }
        let graph = SparseGraph::from_edges(self.n, self.edges.iter().map(|&[u, v]| (u, v)))?;
        Ok(TypedGraphSample {
            graph,
            sigma: self.types,
            r: self.r,
            seed: self.seed,
        })
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_graph(path: &Path, sample: &TypedGraphSample) -> Result<()> {
    write_json(path, &GraphDocument::from_sample(sample))
}

pub fn read_graph(path: &Path) -> Result<TypedGraphSample> {
    read_json::<GraphDocument>(path)?.into_sample()
}

pub fn write_perturbation(path: &Path, p: &Perturbation) -> Result<()> {
    write_json(path, p)
}

pub fn read_perturbation(path: &Path) -> Result<Perturbation> {
    read_json(path)
}

/// `{"labels":[..],"overlap":x,"perm":[..]}`; `overlap` and `perm` are null
/// when no ground truth was available.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssignmentDocument {
    pub labels: Vec<usize>,
    pub overlap: Option<f64>,
    pub perm: Option<Vec<usize>>,
}

/// Header `n ell kind`, then one `i j v` line per stored entry in
/// lexicographic order.
pub fn matrix_dump(m: &SparseSymMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} {}", m.n(), m.ell(), m.kind());
    for (i, j, v) in m.entries() {
        let _ = writeln!(out, "{i} {j} {v}");
    }
    out
}

pub fn parse_matrix_dump(text: &str) -> Result<SparseSymMatrix> {
    let bad = |msg: &str| Error::InvalidGraph(format!("matrix dump: {msg}"));
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<&str> = lines.next().ok_or_else(|| bad("missing header"))?.split_whitespace().collect();
    let [n, ell, kind] = header[..] else {
        return Err(bad("header must be `n ell kind`"));
    };
    let n: usize = n.parse().map_err(|_| bad("bad n"))?;
    let ell: usize = ell.parse().map_err(|_| bad("bad ell"))?;
    let kind = MatrixKind::parse(kind).ok_or_else(|| bad("unknown kind"))?;
    let mut rows = vec![Vec::new(); n];
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [i, j, v] = f[..] else {
            return Err(bad("entry lines must be `i j v`"));
        };
        let i: usize = i.parse().map_err(|_| bad("bad row"))?;
        let j: usize = j.parse().map_err(|_| bad("bad column"))?;
        let v: u32 = v.parse().map_err(|_| bad("bad value"))?;
        if i >= n || j >= n {
            return Err(bad("index out of range"));
        }
        rows[i].push((j, v));
    }
    let m = SparseSymMatrix::from_rows_unchecked(n, ell, kind, rows);
    if !m.is_symmetric() {
        return Err(bad("matrix is not symmetric"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::distance_matrix;
    use crate::model::{sample_graph, SbmParams};

    #[test]
    fn graph_document_round_trip() {
        let params = SbmParams::circulant(2, 5.0, 1.0, 60).unwrap();
        let s = sample_graph(&params, 4);
        let doc = GraphDocument::from_sample(&s);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"n":60,"r":2,"seed":4,"types":["#));
        let back: GraphDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.into_sample().unwrap(), s);
    }

    #[test]
    fn graph_document_validation() {
        let doc = GraphDocument {
            n: 2,
            r: 2,
            seed: 0,
            types: vec![0, 2],
            edges: vec![],
        };
        assert!(matches!(doc.into_sample(), Err(Error::LabelOutOfRange { .. })));
        let doc = GraphDocument {
            n: 2,
            r: 2,
            seed: 0,
            types: vec![0, 1],
            edges: vec![[0, 0]],
        };
        assert!(doc.into_sample().is_err());
    }

    #[test]
    fn dump_round_trip() {
        let d = distance_matrix(&SparseGraph::path(4), 2);
        let text = matrix_dump(&d);
        assert_eq!(text, "4 2 distance\n0 2 1\n1 3 1\n2 0 1\n3 1 1\n");
        assert_eq!(parse_matrix_dump(&text).unwrap(), d);
        assert!(parse_matrix_dump("2 1 distance\n0 1 1\n").is_err());
        assert!(parse_matrix_dump("2 1 bogus\n").is_err());
    }
}

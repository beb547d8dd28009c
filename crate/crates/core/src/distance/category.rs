use std::collections::HashMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::graph::CitationGraph;

/// Symmetric `C × C` matrix of citation counts between categories.
#[derive(Clone, Debug, PartialEq)]
pub struct CategoryCitationMatrix {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// Row-major, nonnegative.
    weights: Vec<f64>,
}

impl CategoryCitationMatrix {
    pub fn new(names: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        let c = names.len();
        if weights.len() != c * c {
            return Err(Error::CategoryMatrix(format!(
                "{} categories need {} weights, got {}",
                c,
                c * c,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::CategoryMatrix(format!("invalid weight {w}")));
        }
        let mut index = HashMap::with_capacity(c);
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::CategoryMatrix(format!("duplicate category `{n}`")));
            }
        }
        Ok(CategoryCitationMatrix { names, index, weights })
    }

    /// Counts every edge of labeled `g` between its endpoint categories.
    /// Same-category edges add 1 to the diagonal, cross edges 1 to each mirror cell.
    pub fn from_graph(g: &CitationGraph) -> Result<Self> {
        let labels = g.labels().ok_or(Error::Unlabeled)?;
        let c = g.category_names().len();
        let mut weights = vec![0.0; c * c];
        for e in g.edges() {
            let (a, b) = (labels[e.u], labels[e.v]);
            weights[a * c + b] += 1.0;
            if a != b {
                weights[b * c + a] += 1.0;
            }
        }
        Self::new(g.category_names().to_vec(), weights)
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn category_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(name.to_string()))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.size();
        &self.weights[i * c..(i + 1) * c]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.size() + j]
    }

    /// `1 - cos(row_i, row_j)`, in `[0, 1]` because weights are nonnegative.
    pub fn topic_distance(&self, i: usize, j: usize) -> Result<f64> {
        let c = self.size();
        for k in [i, j] {
            if k >= c {
                return Err(Error::UnknownCategory(k.to_string()));
            }
        }
        let (a, b) = (self.row(i), self.row(j));
        let norm = |r: &[f64]| r.iter().map(|x| x * x).sum::<f64>().sqrt();
        let (na, nb) = (norm(a), norm(b));
        for (k, n) in [(i, na), (j, nb)] {
            if n == 0.0 {
                return Err(Error::ZeroVector(format!("category `{}` has no citations", self.names[k])));
            }
        }
        if i == j {
            return Ok(0.0);
        }
        let cos = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
        Ok((1.0 - cos).clamp(0.0, 1.0))
    }

    /// Header of tab-separated names, then one tab-separated row per category.
    pub fn read_tsv<R: Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .has_headers(true)
            .flexible(true)
            .from_reader(source);
        let names: Vec<String> = reader.headers()?.iter().map(|s| s.trim().to_string()).collect();
        let mut weights = Vec::with_capacity(names.len() * names.len());
        let mut rows = 0;
        for (r, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != names.len() {
                return Err(Error::CategoryMatrix(format!(
                    "row {} has {} entries, header has {}",
                    r + 1,
                    record.len(),
                    names.len()
                )));
            }
            for field in record.iter() {
                let w: f64 = field.trim().parse().map_err(|_| Error::Parse {
                    line: r + 2,
                    message: format!("not a number: `{field}`"),
                })?;
                weights.push(w);
            }
            rows += 1;
        }
        if rows != names.len() {
            return Err(Error::CategoryMatrix(format!(
                "{} rows for {} categories",
                rows,
                names.len()
            )));
        }
        Self::new(names, weights)
    }

    pub fn write_tsv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().delimiter(b'\t').from_writer(sink);
        w.write_record(&self.names)?;
        for i in 0..self.size() {
            w.write_record(self.row(i).iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }
}

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::scalar::{self, Real};

/// How graph nodes resolve to matrix rows.
#[derive(Clone, Debug, PartialEq)]
pub enum RowIndex {
    /// Row `i` belongs to node `i`.
    Identity,
    /// `map[node]` is the node's row (role-indexed embeddings).
    Mapped(Vec<usize>),
}

/// Dense `rows × dim` embedding table plus a node → row resolver.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix<T> {
    data: Vec<T>,
    rows: usize,
    dim: usize,
    index: RowIndex,
}

impl<T: Real> EmbeddingMatrix<T> {
    pub fn new(rows: usize, dim: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * dim {
            return Err(Error::ShapeMismatch {
                expected: rows * dim,
                actual: data.len(),
            });
        }
        Ok(EmbeddingMatrix {
            data,
            rows,
            dim,
            index: RowIndex::Identity,
        })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch {
                expected: dim,
                actual: bad.len(),
            });
        }
        Self::new(rows.len(), dim, rows.concat())
    }

    /// Resolves nodes through `map` instead of by identity.
    pub fn with_row_map(mut self, map: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&r| r >= self.rows) {
            return Err(Error::ShapeMismatch {
                expected: self.rows,
                actual: bad,
            });
        }
        self.index = RowIndex::Mapped(map);
        Ok(self)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index(&self) -> &RowIndex {
        &self.index
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    /// Number of nodes the resolver covers.
    pub fn node_count(&self) -> usize {
        match &self.index {
            RowIndex::Identity => self.rows,
            RowIndex::Mapped(m) => m.len(),
        }
    }

    pub fn row_of(&self, node: usize) -> Option<usize> {
        match &self.index {
            RowIndex::Identity => (node < self.rows).then_some(node),
            RowIndex::Mapped(m) => m.get(node).copied(),
        }
    }

    pub fn node_vector(&self, node: usize) -> Result<&[T]> {
        self.row_of(node)
            .map(|r| self.row(r))
            .ok_or_else(|| Error::UnknownNode(format!("#{node} (no embedding row)")))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Cosine similarity between the vectors of two nodes.
    pub fn cosine(&self, a: usize, b: usize) -> Result<T> {
        let (x, y) = (self.node_vector(a)?, self.node_vector(b)?);
        let (nx, ny) = (scalar::norm(x), scalar::norm(y));
        if nx == T::zero() || ny == T::zero() {
            let which = if nx == T::zero() { a } else { b };
            return Err(Error::ZeroVector(format!("node #{which}")));
        }
        Ok(scalar::dot(x, y) / (nx * ny))
    }

    /// word2vec text format: `<rows> <dim>` then `<token> <dim values>` per row.
    pub fn write_word2vec<W: Write>(&self, mut w: W, token: impl Fn(usize) -> String) -> Result<()> {
        writeln!(w, "{} {}", self.rows, self.dim)?;
        for r in 0..self.rows {
            write!(w, "{}", token(r))?;
            for x in self.row(r) {
                write!(w, " {x}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Reads the word2vec text format; returns row tokens and an identity-indexed matrix.
    pub fn read_word2vec<R: BufRead>(source: R) -> Result<(Vec<String>, Self)> {
        let mut lines = source.lines().enumerate();
        let header = match lines.next() {
            Some((_, l)) => l?,
            None => return Err(Error::Parse { line: 1, message: "missing header".into() }),
        };
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: 1, message: format!("bad header: {e}") })?;
        let [rows, dim] = dims[..] else {
            return Err(Error::Parse { line: 1, message: "header must be `<rows> <dim>`".into() });
        };
        let mut tokens = Vec::with_capacity(rows);
        let mut data = Vec::with_capacity(rows * dim);
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            tokens.push(parts.next().unwrap_or_default().to_string());
            let before = data.len();
            for p in parts {
                let x: f64 = p.parse().map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("bad value `{p}`: {e}"),
                })?;
                data.push(T::of(x));
            }
            if data.len() - before != dim {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {dim} values, found {}", data.len() - before),
                });
            }
        }
        if tokens.len() != rows {
            return Err(Error::Parse {
                line: tokens.len() + 1,
                message: format!("header promises {rows} rows, found {}", tokens.len()),
            });
        }
        Ok((tokens, Self::new(rows, dim, data)?))
    }
}

//! JSON documents for RSMPs and pencils.
//!
//! Both kinds share one layout: a `"kind"` tag, integer size fields and
//! matrices written as lists of rows. An entry is either a real number or a
//! `[re, im]` pair; documents are always written back with pairs.

use serde::{Deserialize, Serialize};

use fiedler_core::{ComplexMatrix, MatrixPolynomial, Pencil, Rsmp, C64};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Complex([f64; 2]),
    Real(f64),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Complex([re, im]) => C64::new(re, im),
            Entry::Real(re) => C64::new(re, 0.0),
        }
    }
}

pub type MatrixText = Vec<Vec<Entry>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RsmpFile {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    #[serde(rename = "d_A")]
    pub deg_a: usize,
    #[serde(rename = "d_D")]
    pub deg_d: usize,
    /// Coefficients of `A(λ)`, constant term first.
    #[serde(rename = "A")]
    pub a: Vec<MatrixText>,
    #[serde(rename = "B")]
    pub b: MatrixText,
    #[serde(rename = "C")]
    pub c: MatrixText,
    /// Coefficients of `D(λ)`, constant term first.
    #[serde(rename = "D")]
    pub d: Vec<MatrixText>,
}

/// The pencil `λ·lead − tail` with its block partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilFile {
    pub rows: usize,
    pub cols: usize,
    pub row_blocks: Vec<usize>,
    pub col_blocks: Vec<usize>,
    pub lead: MatrixText,
    pub tail: MatrixText,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Rsmp(RsmpFile),
    Pencil(PencilFile),
}

fn dimension(field: &str, expected: (usize, usize), found: (usize, usize)) -> CliError {
    CliError::Dimension(format!(
        "{field}: expected {}x{}, found {}x{}",
        expected.0, expected.1, found.0, found.1
    ))
}

fn to_matrix(
    field: &str,
    text: &MatrixText,
    rows: usize,
    cols: usize,
) -> Result<ComplexMatrix, CliError> {
    if text.len() != rows {
        let found_cols = text.first().map_or(0, Vec::len);
        return Err(dimension(field, (rows, cols), (text.len(), found_cols)));
    }
    if let Some((i, row)) = text.iter().enumerate().find(|(_, row)| row.len() != cols) {
        return Err(CliError::Dimension(format!(
            "{field}: row {i} has {} entries, expected {cols}",
            row.len()
        )));
    }
    let data: Vec<C64> = text.iter().flatten().map(|e| e.value()).collect();
    if data.iter().any(|z| !z.is_finite()) {
        return Err(CliError::Dimension(format!(
            "{field}: entries must be finite"
        )));
    }
    Ok(ComplexMatrix::new(rows, cols, data)?)
}

fn to_poly(
    field: &str,
    text: &[MatrixText],
    degree: usize,
    rows: usize,
    cols: usize,
) -> Result<MatrixPolynomial, CliError> {
    if text.len() != degree + 1 {
        return Err(CliError::Dimension(format!(
            "{field}: expected {} coefficients for degree {degree}, found {}",
            degree + 1,
            text.len()
        )));
    }
    let coeffs = text
        .iter()
        .enumerate()
        .map(|(k, c)| to_matrix(&format!("{field}[{k}]"), c, rows, cols))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixPolynomial::new(coeffs)?)
}

fn to_text(m: &ComplexMatrix) -> MatrixText {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|z| Entry::Complex([z.re, z.im]))
                .collect()
        })
        .collect()
}

impl RsmpFile {
    pub fn to_rsmp(&self) -> Result<Rsmp, CliError> {
        let Self {
            n,
            p,
            m,
            deg_a,
            deg_d,
            ..
        } = *self;
        let a = to_poly("A", &self.a, deg_a, n, n)?;
        let b = to_matrix("B", &self.b, n, m)?;
        let c = to_matrix("C", &self.c, p, n)?;
        let d = to_poly("D", &self.d, deg_d, p, m)?;
        Ok(Rsmp::new(a, b, c, d)?)
    }

    pub fn from_rsmp(r: &Rsmp) -> Self {
        Self {
            n: r.n(),
            p: r.p(),
            m: r.m(),
            deg_a: r.deg_a(),
            deg_d: r.deg_d(),
            a: r.a().coeffs().iter().map(to_text).collect(),
            b: to_text(r.b()),
            c: to_text(r.c()),
            d: r.d().coeffs().iter().map(to_text).collect(),
        }
    }
}

impl PencilFile {
    pub fn to_pencil(&self) -> Result<Pencil, CliError> {
        let lead = to_matrix("lead", &self.lead, self.rows, self.cols)?;
        let tail = to_matrix("tail", &self.tail, self.rows, self.cols)?;
        Ok(Pencil::new(
            lead,
            tail,
            self.row_blocks.clone(),
            self.col_blocks.clone(),
        )?)
    }

    pub fn from_pencil(l: &Pencil) -> Self {
        let (rows, cols) = l.dims();
        Self {
            rows,
            cols,
            row_blocks: l.row_sizes().to_vec(),
            col_blocks: l.col_sizes().to_vec(),
            lead: to_text(l.lead()),
            tail: to_text(l.tail()),
        }
    }
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses an RSMP document. Pencil documents are rejected.
pub fn parse_rsmp(text: &str) -> Result<Rsmp, CliError> {
    match parse_document(text)? {
        Document::Rsmp(file) => file.to_rsmp(),
        Document::Pencil(_) => Err(CliError::WrongKind {
            expected: "rsmp",
            found: "pencil",
        }),
    }
}

pub fn emit(document: &Document) -> String {
    let mut text = serde_json::to_string_pretty(document).expect("documents always serialize");
    text.push('\n');
    text
}

pub fn emit_rsmp(r: &Rsmp) -> String {
    emit(&Document::Rsmp(RsmpFile::from_rsmp(r)))
}

pub fn emit_pencil(l: &Pencil) -> String {
    emit(&Document::Pencil(PencilFile::from_pencil(l)))
}

/// Reads a document and writes it back in normal form.
pub fn normalize(text: &str) -> Result<String, CliError> {
    Ok(match parse_document(text)? {
        Document::Rsmp(file) => emit_rsmp(&file.to_rsmp()?),
        Document::Pencil(file) => emit_pencil(&file.to_pencil()?),
    })
}

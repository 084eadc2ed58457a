//! Finite mixed complexes presented by exact rational matrices.
//!
//! Degrees run over `0..=top`. `b_n: X_n → X_{n+1}` is given for `n < top`
//! and `B_n: X_n → X_{n-1}` for `n ≥ 1`; both are `rows × cols` matrices
//! acting on column vectors of coordinates.

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operators::{connes_b, hochschild_b};
use super::{Chain, CocyclicModule};
use crate::linalg::QMatrix;
use crate::rational::{parse, Rational};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[serde(rename = "b")]
    LittleB,
    #[serde(rename = "B")]
    BigB,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedComplexPresentation {
    dims: Vec<usize>,
    b: Vec<QMatrix>,
    big_b: Vec<QMatrix>,
}

/// JSON form: `{ "dims": [...], "b": [matrix...], "B": [matrix...] }` with
/// matrices as nested arrays of `"p/q"` strings; `b[n]` is `b_n` and
/// `B[n]` is `B_{n+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub dims: Vec<usize>,
    pub b: Vec<Vec<Vec<String>>>,
    #[serde(rename = "B")]
    pub big_b: Vec<Vec<Vec<String>>>,
}

fn matrix_from_json(rows: usize, cols: usize, m: &[Vec<String>]) -> Result<QMatrix> {
    if rows == 0 || cols == 0 {
        return Ok(QMatrix::zeros(rows, cols));
    }
    let parsed = m
        .iter()
        .map(|row| row.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let q = QMatrix::from_rows(parsed)?;
    if q.rows() != rows || q.cols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "expected {rows}x{cols}, found {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    Ok(q)
}

fn matrix_to_json(m: &QMatrix) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

impl MixedComplexPresentation {
    /// Validates shapes and `b² = 0`, `B² = 0`, `bB + Bb = 0` exactly.
    pub fn new(dims: Vec<usize>, b: Vec<QMatrix>, big_b: Vec<QMatrix>) -> Result<Self> {
        let p = Self::unchecked(dims, b, big_b)?;
        p.validate()?;
        Ok(p)
    }

    fn unchecked(dims: Vec<usize>, b: Vec<QMatrix>, big_b: Vec<QMatrix>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidInput("no degrees".into()));
        }
        let top = dims.len() - 1;
        if b.len() != top || big_b.len() != top {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {top} matrices for b and for B",
                dims.len()
            )));
        }
        for n in 0..top {
            if b[n].rows() != dims[n + 1] || b[n].cols() != dims[n] {
                return Err(Error::NotComposable(format!("b_{n} has wrong shape")));
            }
            if big_b[n].rows() != dims[n] || big_b[n].cols() != dims[n + 1] {
                return Err(Error::NotComposable(format!("B_{} has wrong shape", n + 1)));
            }
        }
        Ok(Self { dims, b, big_b })
    }

    fn validate(&self) -> Result<()> {
        let top = self.top();
        for n in 0..top.saturating_sub(1) {
            if !self.b[n + 1].mul(&self.b[n])?.is_zero() {
                return Err(Error::InvalidModule(format!("b_{} b_{n} ≠ 0", n + 1)));
            }
            if !self.big_b[n].mul(&self.big_b[n + 1])?.is_zero() {
                return Err(Error::InvalidModule(format!("B_{} B_{} ≠ 0", n + 1, n + 2)));
            }
        }
        // bB + Bb on X_n; on X_top the b-composite is not presented.
        for n in 0..top {
            let mut acc = self.big_b[n].mul(&self.b[n])?;
            if n >= 1 {
                acc = acc.add(&self.b[n - 1].mul(&self.big_b[n - 1])?)?;
            }
            if !acc.is_zero() {
                return Err(Error::InvalidModule(format!("bB + Bb ≠ 0 on X_{n}")));
            }
        }
        Ok(())
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self> {
        let top = j.dims.len().saturating_sub(1);
        if j.b.len() != top || j.big_b.len() != top {
            return Err(Error::DimensionMismatch("matrix count".into()));
        }
        let b = (0..top)
            .map(|n| matrix_from_json(j.dims[n + 1], j.dims[n], &j.b[n]))
            .collect::<Result<_>>()?;
        let big_b = (0..top)
            .map(|n| matrix_from_json(j.dims[n], j.dims[n + 1], &j.big_b[n]))
            .collect::<Result<_>>()?;
        Self::new(j.dims.clone(), b, big_b)
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            dims: self.dims.clone(),
            b: self.b.iter().map(matrix_to_json).collect(),
            big_b: self.big_b.iter().map(matrix_to_json).collect(),
        }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// `b_n`, or `None` outside the presented range.
    pub fn b(&self, n: usize) -> Option<&QMatrix> {
        self.b.get(n)
    }

    /// `B_n` for `n ≥ 1`.
    pub fn big_b(&self, n: usize) -> Option<&QMatrix> {
        n.checked_sub(1).and_then(|k| self.big_b.get(k))
    }

    /// `dim ker − rank(incoming)` in degree `m`. Differentials leaving the
    /// presented range count as zero.
    pub fn betti(&self, m: usize, direction: Direction) -> Result<usize> {
        if m > self.top() {
            return Err(Error::IndexOutOfRange {
                map: "betti",
                index: m,
                degree: self.top(),
            });
        }
        let (outgoing, incoming) = match direction {
            Direction::LittleB => (self.b(m), m.checked_sub(1).and_then(|k| self.b(k))),
            Direction::BigB => (self.big_b(m), self.big_b(m + 1)),
        };
        let kernel = outgoing.map_or(self.dims[m], QMatrix::nullity);
        let image = incoming.map_or(0, QMatrix::rank);
        Ok(kernel - image)
    }

    /// Good truncation at `n`.
    ///
    /// `Below` keeps `X_m` for `m ≤ n`, replaces `X_{n+1}` by `Im b_n` and
    /// drops higher degrees. `Above` zeroes `X_m` for `m ≤ n`, replaces
    /// `X_{n+1}` by `X_{n+1} / Im b_n` and keeps higher degrees. Both are
    /// presented on degrees `0..=top`, with zero spaces where dropped.
    pub fn good_truncation(&self, n: usize, side: Side) -> Result<Self> {
        let top = self.top();
        if n > top {
            return Err(Error::IndexOutOfRange {
                map: "good_truncation",
                index: n,
                degree: top,
            });
        }
        if n == top {
            return Ok(match side {
                Side::Below => self.clone(),
                Side::Above => self.zeroed_through(top),
            });
        }
        let cut = n + 1;
        let (_, pivots) = self.b[n].rref();
        let image_basis = self.b[n].select_columns(&pivots);
        match side {
            Side::Below => {
                let mut dims = self.dims.clone();
                dims[cut] = pivots.len();
                for d in dims.iter_mut().skip(cut + 1) {
                    *d = 0;
                }
                let mut b = self.b.clone();
                let mut big_b = self.big_b.clone();
                b[n] = image_basis.coordinates_of(&self.b[n])?;
                big_b[n] = self.big_b[n].mul(&image_basis)?;
                for k in cut..top {
                    b[k] = QMatrix::zeros(dims[k + 1], dims[k]);
                    big_b[k] = QMatrix::zeros(dims[k], dims[k + 1]);
                }
                Self::new(dims, b, big_b)
            }
            Side::Above => {
                let full = self.dims[cut];
                let complement = complement_columns(&image_basis, full);
                let mut extended = image_basis.clone();
                let mut cols: Vec<Vec<Rational>> =
                    (0..extended.cols()).map(|c| extended.column(c)).collect();
                cols.extend(complement.iter().map(|&e| unit(full, e)));
                extended = QMatrix::from_columns(full, &cols);
                let k = image_basis.cols();
                let quotient_dim = complement.len();
                // Coordinates in the quotient: last block of coordinates in
                // the extended basis.
                let project = |m: &QMatrix| -> Result<QMatrix> {
                    let coords = extended.coordinates_of(m)?;
                    let mut out = QMatrix::zeros(quotient_dim, m.cols());
                    for r in 0..quotient_dim {
                        for c in 0..m.cols() {
                            out[(r, c)] = coords[(k + r, c)].clone();
                        }
                    }
                    Ok(out)
                };
                let mut dims = self.dims.clone();
                for d in dims.iter_mut().take(cut) {
                    *d = 0;
                }
                dims[cut] = quotient_dim;
                let mut b = self.b.clone();
                let mut big_b = self.big_b.clone();
                for k2 in 0..cut {
                    b[k2] = QMatrix::zeros(dims[k2 + 1], dims[k2]);
                    big_b[k2] = QMatrix::zeros(dims[k2], dims[k2 + 1]);
                }
                if cut < top {
                    let lift = QMatrix::from_columns(
                        full,
                        &complement.iter().map(|&e| unit(full, e)).collect::<Vec<_>>(),
                    );
                    b[cut] = self.b[cut].mul(&lift)?;
                    big_b[cut] = project(&self.big_b[cut])?;
                }
                Self::new(dims, b, big_b)
            }
        }
    }

    fn zeroed_through(&self, n: usize) -> Self {
        let mut dims = self.dims.clone();
        for d in dims.iter_mut().take(n + 1) {
            *d = 0;
        }
        let top = self.top();
        let b = (0..top).map(|k| QMatrix::zeros(dims[k + 1], dims[k])).collect();
        let big_b = (0..top).map(|k| QMatrix::zeros(dims[k], dims[k + 1])).collect();
        Self { dims, b, big_b }
    }
}

fn unit(len: usize, e: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[e] = Rational::one();
    v
}

/// Standard basis vectors completing the columns of `basis` to a basis.
fn complement_columns(basis: &QMatrix, full: usize) -> Vec<usize> {
    let mut cols: Vec<Vec<Rational>> = (0..basis.cols()).map(|c| basis.column(c)).collect();
    cols.extend((0..full).map(|e| unit(full, e)));
    let (_, pivots) = QMatrix::from_columns(full, &cols).rref();
    pivots
        .into_iter()
        .filter(|&p| p >= basis.cols())
        .map(|p| p - basis.cols())
        .collect()
}

/// Presents the restriction of a cocyclic module to finite sets of basis
/// keys in degrees `0..=top`. `b` out of the top degree is not presented.
/// Fails when `b` or `B` leaves the span of the given keys.
pub fn presentation_from_module<M: CocyclicModule + ?Sized>(
    m: &M,
    bases: &[Vec<M::Key>],
) -> Result<MixedComplexPresentation> {
    if bases.is_empty() {
        return Err(Error::InvalidInput("no degrees".into()));
    }
    let top = bases.len() - 1;
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let column = |target: usize, image: &Chain<M::Key>| -> Result<Vec<Rational>> {
        let mut col = vec![Rational::zero(); dims[target]];
        for (k, v) in image.iter() {
            let pos = bases[target].iter().position(|b| b == k).ok_or_else(|| {
                Error::InvalidModule(format!("image term {k} leaves the presented span"))
            })?;
            col[pos] = v.clone();
        }
        Ok(col)
    };
    let mut b = Vec::new();
    let mut big_b = Vec::new();
    for n in 0..top {
        let cols = bases[n]
            .iter()
            .map(|k| column(n + 1, &hochschild_b(m, &Chain::basis(n, k.clone()))?))
            .collect::<Result<Vec<_>>>()?;
        b.push(QMatrix::from_columns(dims[n + 1], &cols));
        let cols = bases[n + 1]
            .iter()
            .map(|k| column(n, &connes_b(m, &Chain::basis(n + 1, k.clone()))?))
            .collect::<Result<Vec<_>>>()?;
        big_b.push(QMatrix::from_columns(dims[n], &cols));
    }
    MixedComplexPresentation::new(dims, b, big_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn zero_differentials_give_dimensions() {
        let p = MixedComplexPresentation::new(
            vec![2, 3],
            vec![QMatrix::zeros(3, 2)],
            vec![QMatrix::zeros(2, 3)],
        )
        .unwrap();
        assert_eq!(p.betti(0, Direction::LittleB).unwrap(), 2);
        assert_eq!(p.betti(1, Direction::LittleB).unwrap(), 3);
        assert_eq!(p.betti(1, Direction::BigB).unwrap(), 3);
    }

    #[test]
    fn isomorphism_kills_homology_and_truncation_splits_it() {
        let p = MixedComplexPresentation::new(
            vec![1, 1],
            vec![q(&[&[1]])],
            vec![QMatrix::zeros(1, 1)],
        )
        .unwrap();
        assert_eq!(p.betti(0, Direction::LittleB).unwrap(), 0);
        assert_eq!(p.betti(1, Direction::LittleB).unwrap(), 0);
        let below = p.good_truncation(0, Side::Below).unwrap();
        let above = p.good_truncation(0, Side::Above).unwrap();
        assert_eq!(below.dims(), &[1, 1]);
        assert_eq!(above.dims(), &[0, 0]);
        for m in 0..=1 {
            assert_eq!(below.betti(m, Direction::LittleB).unwrap(), 0);
            assert_eq!(above.betti(m, Direction::LittleB).unwrap(), 0);
        }
    }

    #[test]
    fn truncation_at_top_is_identity() {
        let p = MixedComplexPresentation::new(
            vec![1, 2],
            vec![q(&[&[1], &[0]])],
            vec![QMatrix::zeros(1, 2)],
        )
        .unwrap();
        assert_eq!(p.good_truncation(1, Side::Below).unwrap(), p);
    }

    #[test]
    fn invalid_presentation_is_rejected() {
        // b_1 b_0 ≠ 0.
        let r = MixedComplexPresentation::new(
            vec![1, 1, 1],
            vec![q(&[&[1]]), q(&[&[1]])],
            vec![QMatrix::zeros(1, 1), QMatrix::zeros(1, 1)],
        );
        assert!(r.is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = MixedComplexPresentation::new(
            vec![1, 2],
            vec![q(&[&[1], &[-1]])],
            vec![q(&[&[1, 1]])],
        )
        .unwrap();
        let j = serde_json::to_string(&p.to_json()).unwrap();
        let back: PresentationJson = serde_json::from_str(&j).unwrap();
        assert_eq!(MixedComplexPresentation::from_json(&back).unwrap(), p);
    }
}

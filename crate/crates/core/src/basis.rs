//! Scheffé canonical regression vectors.

use crate::error::{Error, Result};
use crate::simplex::{Combinations, MixturePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    First,
    Second,
}

impl TryFrom<u8> for Order {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            other => Err(Error::InvalidArgument(format!(
                "model order must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// A first- or second-order Scheffé model in `q` components.
///
/// Second-order terms are the pairwise products `x_i x_j`, `i < j`, in
/// lexicographic order after the `q` linear terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModelBasis {
    q: usize,
    order: Order,
}

impl ModelBasis {
    pub fn new(q: usize, order: Order) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument(
                "a model needs q >= 1 components".into(),
            ));
        }
        if order == Order::Second && q < 2 {
            return Err(Error::InvalidArgument(
                "a second-order model needs q >= 2".into(),
            ));
        }
        Ok(ModelBasis { q, order })
    }

    pub fn first(q: usize) -> Result<Self> {
        Self::new(q, Order::First)
    }

    pub fn second(q: usize) -> Result<Self> {
        Self::new(q, Order::Second)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Number of model parameters.
    pub fn p(&self) -> usize {
        match self.order {
            Order::First => self.q,
            Order::Second => self.q * (self.q + 1) / 2,
        }
    }

    /// Evaluates `f(x)`. The point is used as given, without renormalization.
    pub fn eval(&self, x: &MixturePoint) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.p());
        self.eval_into(x, &mut out)?;
        Ok(out)
    }

    pub(crate) fn eval_into(&self, x: &MixturePoint, out: &mut Vec<f64>) -> Result<()> {
        if x.dim() != self.q {
            return Err(Error::DimensionMismatch {
                expected: self.q,
                found: x.dim(),
            });
        }
        let c = x.coords();
        out.clear();
        out.extend_from_slice(c);
        if self.order == Order::Second {
            for i in 0..self.q {
                for j in (i + 1)..self.q {
                    out.push(c[i] * c[j]);
                }
            }
        }
        Ok(())
    }
}

/// The `C(q,2) x q` binary matrix whose row for pair `(i, j)` marks
/// components `i` and `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairIncidenceMatrix {
    q: usize,
    rows: Vec<Vec<u8>>,
}

impl PairIncidenceMatrix {
    pub fn new(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!(
                "pair incidence needs q >= 2, got {q}"
            )));
        }
        let rows = Combinations::new(q, 2)
            .map(|pair| {
                let mut row = vec![0u8; q];
                row[pair[0]] = 1;
                row[pair[1]] = 1;
                row
            })
            .collect();
        Ok(PairIncidenceMatrix { q, rows })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn column_sums(&self) -> Vec<usize> {
        (0..self.q)
            .map(|j| self.rows.iter().map(|r| r[j] as usize).sum())
            .collect()
    }
}

pub fn pair_incidence(q: usize) -> Result<PairIncidenceMatrix> {
    PairIncidenceMatrix::new(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> MixturePoint {
        MixturePoint::new(c.to_vec()).unwrap()
    }

    #[test]
    fn first_order_is_verbatim() {
        let b = ModelBasis::first(3).unwrap();
        assert_eq!(b.p(), 3);
        assert_eq!(b.eval(&pt(&[1.0, 0.0, 0.0])).unwrap(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn second_order_midpoint() {
        let b = ModelBasis::second(3).unwrap();
        assert_eq!(b.p(), 6);
        assert_eq!(
            b.eval(&pt(&[0.5, 0.5, 0.0])).unwrap(),
            vec![0.5, 0.5, 0.0, 0.25, 0.0, 0.0]
        );
    }

    #[test]
    fn second_order_centroid_q4() {
        let b = ModelBasis::second(4).unwrap();
        let f = b.eval(&pt(&[0.25; 4])).unwrap();
        assert_eq!(f.len(), 10);
        assert_eq!(&f[..4], &[0.25; 4]);
        assert_eq!(&f[4..], &[1.0 / 16.0; 6]);
    }

    #[test]
    fn vertex_has_no_cross_terms() {
        for q in 2..=6 {
            let b = ModelBasis::second(q).unwrap();
            for i in 0..q {
                let f = b.eval(&MixturePoint::vertex(q, i)).unwrap();
                let mut expected = vec![0.0; b.p()];
                expected[i] = 1.0;
                assert_eq!(f, expected);
            }
        }
    }

    #[test]
    fn basis_errors() {
        assert!(ModelBasis::second(1).is_err());
        assert!(ModelBasis::first(0).is_err());
        assert!(Order::try_from(3).is_err());
        let b = ModelBasis::second(3).unwrap();
        assert!(matches!(
            b.eval(&pt(&[0.5, 0.5])),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn incidence_q4_rows() {
        let m = pair_incidence(4).unwrap();
        let expected: Vec<Vec<u8>> = vec![
            vec![1, 1, 0, 0],
            vec![1, 0, 1, 0],
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
        ];
        assert_eq!(m.rows(), expected.as_slice());
    }

    #[test]
    fn incidence_small_and_sums() {
        assert_eq!(pair_incidence(2).unwrap().rows(), &[vec![1, 1]]);
        let m5 = pair_incidence(5).unwrap();
        assert_eq!(m5.rows().len(), 10);
        assert_eq!(m5.column_sums(), vec![4; 5]);
        for q in 2..=9 {
            let m = pair_incidence(q).unwrap();
            assert_eq!(m.column_sums(), vec![q - 1; q]);
            assert!(m
                .rows()
                .iter()
                .all(|r| r.iter().map(|&v| v as usize).sum::<usize>() == 2));
        }
        assert!(pair_incidence(1).is_err());
    }
}

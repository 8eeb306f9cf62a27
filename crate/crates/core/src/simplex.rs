//! Mixture points, approximate designs and the canonical support sets on the
//! simplex, plus the lower- and upper-bound pseudo-component maps used for
//! constrained mixture regions.

use std::fmt;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Slack allowed below zero for a single coordinate.
pub const COORD_SLACK: f64 = 1e-12;
/// Allowed deviation of the coordinate sum from one.
pub const SUM_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of the design weight sum from one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-10;
/// Max-norm distance under which two support points are considered identical.
pub const POINT_TOLERANCE: f64 = 1e-10;
/// Slack allowed when checking a point against component bounds.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-10;

/// A point of the simplex: `q` nonnegative proportions summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct MixturePoint(Vec<f64>);

impl MixturePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidPoint(
                "a mixture point needs at least one component".into(),
            ));
        }
        if let Some((i, v)) = coords
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < -COORD_SLACK)
        {
            return Err(Error::InvalidPoint(format!(
                "coordinate {i} = {v} is not a proportion"
            )));
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidPoint(format!(
                "coordinates sum to {sum}, not 1"
            )));
        }
        Ok(MixturePoint(coords))
    }

    /// Unit vector `e_i` in `q` components.
    pub fn vertex(q: usize, i: usize) -> Self {
        let mut c = vec![0.0; q];
        c[i] = 1.0;
        MixturePoint(c)
    }

    /// Midpoint of the edge joining vertices `i` and `j`.
    pub fn edge_midpoint(q: usize, i: usize, j: usize) -> Self {
        let mut c = vec![0.0; q];
        c[i] = 0.5;
        c[j] = 0.5;
        MixturePoint(c)
    }

    /// Builds a point from raw coordinates that are already known to be on
    /// the simplex up to rounding; negative rounding noise is clipped and the
    /// coordinates are rescaled to sum to one.
    fn from_rounded(mut coords: Vec<f64>) -> Result<Self> {
        for c in coords.iter_mut() {
            if *c < 0.0 && *c >= -FEASIBILITY_TOLERANCE {
                *c = 0.0;
            }
        }
        let sum: f64 = coords.iter().sum();
        if sum > 0.0 && (sum - 1.0).abs() <= 1e-9 {
            coords.iter_mut().for_each(|c| *c /= sum);
        }
        MixturePoint::new(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    /// Max-norm distance to another point of the same dimension.
    pub fn max_distance(&self, other: &MixturePoint) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &MixturePoint) -> bool {
        self.dim() == other.dim() && self.max_distance(other) <= POINT_TOLERANCE
    }
}

impl fmt::Display for MixturePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// An approximate design: distinct support points carrying probability weights.
///
/// When the weights are known in closed form they are also kept as exact
/// fractions in `exact_weights`.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    q: usize,
    points: Vec<MixturePoint>,
    weights: Vec<f64>,
    exact_weights: Option<Vec<Ratio<i64>>>,
}

impl Design {
    pub fn new(points: Vec<MixturePoint>, weights: Vec<f64>) -> Result<Self> {
        let q = Self::check_support(&points)?;
        if weights.len() != points.len() {
            return Err(Error::InvalidDesign(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            return Err(Error::InvalidDesign(format!(
                "weight {i} = {w} is negative"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidDesign(format!("weights sum to {sum}, not 1")));
        }
        Ok(Design {
            q,
            points,
            weights,
            exact_weights: None,
        })
    }

    /// Equal weight on every support point.
    pub fn uniform(points: Vec<MixturePoint>) -> Result<Self> {
        let n = points.len() as i64;
        let exact = vec![Ratio::new(1, n.max(1)); points.len()];
        Self::with_exact_weights(points, exact)
    }

    pub fn with_exact_weights(points: Vec<MixturePoint>, weights: Vec<Ratio<i64>>) -> Result<Self> {
        if weights.iter().any(|w| *w < Ratio::zero()) {
            return Err(Error::InvalidDesign("negative exact weight".into()));
        }
        let total = weights.iter().fold(Ratio::zero(), |acc, w| acc + w);
        if total != Ratio::from_integer(1) {
            return Err(Error::InvalidDesign(format!(
                "exact weights sum to {total}, not 1"
            )));
        }
        let floats = weights.iter().map(ratio_to_f64).collect();
        let mut design = Design::new(points, floats)?;
        design.exact_weights = Some(weights);
        Ok(design)
    }

    fn check_support(points: &[MixturePoint]) -> Result<usize> {
        let first = points.first().ok_or_else(|| {
            Error::InvalidDesign("a design needs at least one support point".into())
        })?;
        let q = first.dim();
        for p in points {
            if p.dim() != q {
                return Err(Error::DimensionMismatch {
                    expected: q,
                    found: p.dim(),
                });
            }
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                if points[i].approx_eq(&points[j]) {
                    return Err(Error::InvalidDesign(format!(
                        "support points {i} and {j} coincide"
                    )));
                }
            }
        }
        Ok(q)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[MixturePoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_weights(&self) -> Option<&[Ratio<i64>]> {
        self.exact_weights.as_deref()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MixturePoint, f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// Same support and weights, with every point mapped through `f`.
    fn map_points<F>(&self, mut f: F) -> Result<Design>
    where
        F: FnMut(&MixturePoint) -> Result<MixturePoint>,
    {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| f(p).map_err(|e| Error::at_point(i, e)))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Design::new(points, self.weights.clone())?;
        out.exact_weights = self.exact_weights.clone();
        Ok(out)
    }
}

pub(crate) fn ratio_to_f64(r: &Ratio<i64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// The `{q, m}` simplex lattice: every point whose coordinates are multiples
/// of `1/m`, in descending lexicographic order.
pub fn simplex_lattice(q: usize, m: usize) -> Result<Vec<MixturePoint>> {
    if q == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "simplex lattice needs q >= 1 and m >= 1 (got q = {q}, m = {m})"
        )));
    }
    let mut out = Vec::new();
    let mut numerators = vec![0usize; q];
    lattice_rec(&mut numerators, 0, m, m, &mut out);
    Ok(out)
}

fn lattice_rec(
    num: &mut [usize],
    pos: usize,
    remaining: usize,
    m: usize,
    out: &mut Vec<MixturePoint>,
) {
    let q = num.len();
    if pos == q - 1 {
        num[pos] = remaining;
        let denom = m as f64;
        out.push(MixturePoint(
            num.iter().map(|&n| n as f64 / denom).collect(),
        ));
        return;
    }
    for n in (0..=remaining).rev() {
        num[pos] = n;
        lattice_rec(num, pos + 1, remaining - n, m, out);
    }
}

/// The simplex-centroid point set: the barycenter of every nonempty subset of
/// components, by subset size and then lexicographically.
pub fn simplex_centroid(q: usize) -> Result<Vec<MixturePoint>> {
    if q == 0 {
        return Err(Error::InvalidArgument(
            "simplex centroid needs q >= 1".into(),
        ));
    }
    if q >= usize::BITS as usize - 1 {
        return Err(Error::InvalidArgument(format!(
            "q = {q} is too large to enumerate"
        )));
    }
    let mut out = Vec::with_capacity((1usize << q) - 1);
    for k in 1..=q {
        let share = 1.0 / k as f64;
        for subset in Combinations::new(q, k) {
            let mut c = vec![0.0; q];
            for i in subset {
                c[i] = share;
            }
            out.push(MixturePoint(c));
        }
    }
    Ok(out)
}

/// Lexicographic k-subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.idx.clone();
        let k = self.idx.len();
        // advance to the next subset
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in (i + 1)..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

/// Per-component lower and upper bounds of a constrained mixture region.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ComponentBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InfeasibleBounds(
                "bounds need at least one component".into(),
            ));
        }
        for (i, (&l, &u)) in lower.iter().zip(&upper).enumerate() {
            if !(0.0..1.0).contains(&l) {
                return Err(Error::InfeasibleBounds(format!(
                    "lower bound {i} = {l} is outside [0, 1)"
                )));
            }
            if !(u > 0.0 && u <= 1.0) {
                return Err(Error::InfeasibleBounds(format!(
                    "upper bound {i} = {u} is outside (0, 1]"
                )));
            }
            if l > u {
                return Err(Error::InfeasibleBounds(format!(
                    "component {i} has lower bound {l} above upper bound {u}"
                )));
            }
        }
        Ok(ComponentBounds { lower, upper })
    }

    pub fn lower_only(lower: Vec<f64>) -> Result<Self> {
        let upper = vec![1.0; lower.len()];
        Self::new(lower, upper)
    }

    pub fn upper_only(upper: Vec<f64>) -> Result<Self> {
        let lower = vec![0.0; upper.len()];
        Self::new(lower, upper)
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// `1 - sum(L)`, the scale of the lower-bound pseudo simplex.
    pub fn lower_gap(&self) -> f64 {
        1.0 - self.lower.iter().sum::<f64>()
    }

    /// `sum(U) - 1`, the scale of the upper-bound pseudo simplex.
    pub fn upper_gap(&self) -> f64 {
        self.upper.iter().sum::<f64>() - 1.0
    }

    fn checked_lower_gap(&self) -> Result<f64> {
        let gap = self.lower_gap();
        if gap <= 0.0 {
            return Err(Error::InfeasibleBounds(format!(
                "lower bounds sum to {}, need a sum below 1",
                1.0 - gap
            )));
        }
        Ok(gap)
    }

    fn checked_upper_gap(&self) -> Result<f64> {
        let gap = self.upper_gap();
        if gap <= 0.0 {
            return Err(Error::InfeasibleBounds(format!(
                "upper bounds sum to {}, need a sum above 1",
                1.0 + gap
            )));
        }
        Ok(gap)
    }

    fn check_dim(&self, x: &MixturePoint) -> Result<()> {
        if x.dim() != self.q() {
            return Err(Error::DimensionMismatch {
                expected: self.q(),
                found: x.dim(),
            });
        }
        Ok(())
    }
}

/// `x'_i = (x_i - L_i) / (1 - sum L)`.
pub fn to_pseudo_lower(x: &MixturePoint, b: &ComponentBounds) -> Result<MixturePoint> {
    b.check_dim(x)?;
    let gap = b.checked_lower_gap()?;
    for (i, (&xi, &li)) in x.coords().iter().zip(b.lower()).enumerate() {
        if xi < li - FEASIBILITY_TOLERANCE {
            return Err(Error::OutOfRegion {
                component: i,
                value: xi,
                bound: li,
            });
        }
    }
    MixturePoint::from_rounded(
        x.coords()
            .iter()
            .zip(b.lower())
            .map(|(xi, li)| (xi - li) / gap)
            .collect(),
    )
}

/// `x_i = L_i + (1 - sum L) x'_i`.
pub fn from_pseudo_lower(xp: &MixturePoint, b: &ComponentBounds) -> Result<MixturePoint> {
    b.check_dim(xp)?;
    let gap = b.checked_lower_gap()?;
    MixturePoint::from_rounded(
        xp.coords()
            .iter()
            .zip(b.lower())
            .map(|(x, li)| li + gap * x)
            .collect(),
    )
}

/// `x*_i = (U_i - x_i) / (sum U - 1)`.
pub fn to_pseudo_upper(x: &MixturePoint, b: &ComponentBounds) -> Result<MixturePoint> {
    b.check_dim(x)?;
    let gap = b.checked_upper_gap()?;
    for (i, (&xi, &ui)) in x.coords().iter().zip(b.upper()).enumerate() {
        if xi > ui + FEASIBILITY_TOLERANCE {
            return Err(Error::OutOfRegion {
                component: i,
                value: xi,
                bound: ui,
            });
        }
    }
    MixturePoint::from_rounded(
        x.coords()
            .iter()
            .zip(b.upper())
            .map(|(xi, ui)| (ui - xi) / gap)
            .collect(),
    )
}

/// `x_i = U_i - (sum U - 1) x*_i`. Fails when the inverted pseudo simplex
/// pokes outside the original simplex at `xs`.
pub fn from_pseudo_upper(xs: &MixturePoint, b: &ComponentBounds) -> Result<MixturePoint> {
    b.check_dim(xs)?;
    let gap = b.checked_upper_gap()?;
    let coords: Vec<f64> = xs
        .coords()
        .iter()
        .zip(b.upper())
        .map(|(x, ui)| ui - gap * x)
        .collect();
    if let Some((i, &v)) = coords
        .iter()
        .enumerate()
        .find(|(_, v)| **v < -FEASIBILITY_TOLERANCE)
    {
        return Err(Error::OutOfRegion {
            component: i,
            value: v,
            bound: 0.0,
        });
    }
    MixturePoint::from_rounded(coords)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformDirection {
    ToPseudoLower,
    FromPseudoLower,
    ToPseudoUpper,
    FromPseudoUpper,
}

impl TransformDirection {
    pub fn inverse(self) -> Self {
        match self {
            TransformDirection::ToPseudoLower => TransformDirection::FromPseudoLower,
            TransformDirection::FromPseudoLower => TransformDirection::ToPseudoLower,
            TransformDirection::ToPseudoUpper => TransformDirection::FromPseudoUpper,
            TransformDirection::FromPseudoUpper => TransformDirection::ToPseudoUpper,
        }
    }

    pub fn apply(self, x: &MixturePoint, b: &ComponentBounds) -> Result<MixturePoint> {
        match self {
            TransformDirection::ToPseudoLower => to_pseudo_lower(x, b),
            TransformDirection::FromPseudoLower => from_pseudo_lower(x, b),
            TransformDirection::ToPseudoUpper => to_pseudo_upper(x, b),
            TransformDirection::FromPseudoUpper => from_pseudo_upper(x, b),
        }
    }
}

impl std::str::FromStr for TransformDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "to-pseudo-lower" => Ok(TransformDirection::ToPseudoLower),
            "from-pseudo-lower" => Ok(TransformDirection::FromPseudoLower),
            "to-pseudo-upper" => Ok(TransformDirection::ToPseudoUpper),
            "from-pseudo-upper" => Ok(TransformDirection::FromPseudoUpper),
            other => Err(Error::InvalidArgument(format!(
                "unknown transform direction '{other}'"
            ))),
        }
    }
}

/// Applies a pseudo-component map to every support point; weights are kept.
pub fn transform_design(
    d: &Design,
    b: &ComponentBounds,
    direction: TransformDirection,
) -> Result<Design> {
    if d.q() != b.q() {
        return Err(Error::DimensionMismatch {
            expected: b.q(),
            found: d.q(),
        });
    }
    match direction {
        TransformDirection::ToPseudoLower | TransformDirection::FromPseudoLower => {
            b.checked_lower_gap()?
        }
        TransformDirection::ToPseudoUpper | TransformDirection::FromPseudoUpper => {
            b.checked_upper_gap()?
        }
    };
    d.map_points(|p| direction.apply(p, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> MixturePoint {
        MixturePoint::new(c.to_vec()).unwrap()
    }

    fn assert_close(a: &MixturePoint, b: &[f64], tol: f64) {
        assert_eq!(a.dim(), b.len());
        for (x, y) in a.coords().iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a} vs {b:?}");
        }
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn mixture_point_rejects_bad_input() {
        assert!(MixturePoint::new(vec![0.5, 0.6]).is_err());
        assert!(MixturePoint::new(vec![1.1, -0.1]).is_err());
        assert!(MixturePoint::new(vec![]).is_err());
        assert!(MixturePoint::new(vec![f64::NAN, 1.0]).is_err());
        assert!(MixturePoint::new(vec![1.0 + 1e-13, -1e-13]).is_ok());
    }

    #[test]
    fn design_validation() {
        let v = simplex_lattice(3, 1).unwrap();
        assert!(Design::new(v.clone(), vec![0.5, 0.5]).is_err());
        assert!(Design::new(v.clone(), vec![0.5, 0.5, 0.5]).is_err());
        assert!(Design::new(v.clone(), vec![1.5, -0.5, 0.0]).is_err());
        let dup = vec![v[0].clone(), v[0].clone()];
        assert!(Design::new(dup, vec![0.5, 0.5]).is_err());
        let mixed = vec![v[0].clone(), pt(&[1.0, 0.0])];
        assert!(matches!(
            Design::new(mixed, vec![0.5, 0.5]),
            Err(Error::DimensionMismatch { .. })
        ));
        let d = Design::uniform(v).unwrap();
        assert_eq!(d.exact_weights().unwrap()[0], Ratio::new(1, 3));
    }

    #[test]
    fn lattice_vertices_only() {
        let pts = simplex_lattice(3, 1).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(
            coords,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0]
            ]
        );
    }

    #[test]
    fn lattice_q3_m2_is_vertices_and_midpoints() {
        let pts = simplex_lattice(3, 2).unwrap();
        let coords: Vec<_> = pts.iter().map(|p| p.coords().to_vec()).collect();
        assert_eq!(
            coords,
            vec![
                vec![1.0, 0.0, 0.0],
                vec![0.5, 0.5, 0.0],
                vec![0.5, 0.0, 0.5],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.5, 0.5],
                vec![0.0, 0.0, 1.0],
            ]
        );
    }

    #[test]
    fn lattice_q3_m3_matches_enumeration() {
        // brute force: all (a, b, c) in {0..3}^3 with a + b + c = 3
        let mut expected = Vec::new();
        for a in 0..=3 {
            for b in 0..=3 {
                for c in 0..=3 {
                    if a + b + c == 3 {
                        expected.push([a, b, c]);
                    }
                }
            }
        }
        let pts = simplex_lattice(3, 3).unwrap();
        assert_eq!(pts.len(), 10);
        assert_eq!(expected.len(), 10);
        for e in expected {
            let target: Vec<f64> = e.iter().map(|&n| n as f64 / 3.0).collect();
            assert!(pts.iter().any(|p| p.coords() == target.as_slice()));
        }
    }

    #[test]
    fn lattice_counts_and_order() {
        for q in 1..=8 {
            for m in 1..=4 {
                let pts = simplex_lattice(q, m).unwrap();
                assert_eq!(pts.len(), binomial(q + m - 1, m), "q={q} m={m}");
                for w in pts.windows(2) {
                    let a = w[0].coords();
                    let b = w[1].coords();
                    assert_eq!(a.partial_cmp(b), Some(std::cmp::Ordering::Greater));
                }
                for p in &pts {
                    let s: f64 = p.coords().iter().sum();
                    assert!((s - 1.0).abs() <= 1e-15 * q as f64);
                }
            }
        }
        assert!(simplex_lattice(0, 2).is_err());
        assert!(simplex_lattice(3, 0).is_err());
    }

    #[test]
    fn centroid_sets() {
        let c2 = simplex_centroid(2).unwrap();
        assert_eq!(c2.len(), 3);
        assert_eq!(c2[2].coords(), &[0.5, 0.5]);
        let c3 = simplex_centroid(3).unwrap();
        assert_eq!(c3.len(), 7);
        assert_close(c3.last().unwrap(), &[1.0 / 3.0; 3], 0.0);
        assert_eq!(c3[3].coords(), &[0.5, 0.5, 0.0]);
        assert_eq!(c3[5].coords(), &[0.0, 0.5, 0.5]);
        for q in 1..=10 {
            assert_eq!(simplex_centroid(q).unwrap().len(), (1 << q) - 1);
        }
        assert!(simplex_centroid(0).is_err());
    }

    #[test]
    fn centroid_q4_matches_subset_enumeration() {
        let pts = simplex_centroid(4).unwrap();
        assert_eq!(pts.len(), 15);
        for mask in 1u32..16 {
            let k = mask.count_ones() as f64;
            let target: Vec<f64> = (0..4)
                .map(|i| if mask & (1 << i) != 0 { 1.0 / k } else { 0.0 })
                .collect();
            assert!(
                pts.iter().any(|p| p.coords() == target.as_slice()),
                "{target:?}"
            );
        }
    }

    #[test]
    fn pseudo_lower_examples() {
        let zero = ComponentBounds::lower_only(vec![0.0; 3]).unwrap();
        let x = pt(&[0.2, 0.3, 0.5]);
        assert_close(&to_pseudo_lower(&x, &zero).unwrap(), x.coords(), 0.0);

        let b = ComponentBounds::lower_only(vec![0.08, 0.0, 0.15]).unwrap();
        let xp = to_pseudo_lower(&pt(&[0.85, 0.0, 0.15]), &b).unwrap();
        assert_close(&xp, &[1.0, 0.0, 0.0], 1e-12);

        let b = ComponentBounds::lower_only(vec![0.2, 0.2, 0.2]).unwrap();
        let xp = to_pseudo_lower(&pt(&[0.4, 0.3, 0.3]), &b).unwrap();
        assert_close(&xp, &[0.5, 0.25, 0.25], 1e-12);
        let back = from_pseudo_lower(&xp, &b).unwrap();
        assert_close(&back, &[0.4, 0.3, 0.3], 1e-12);
    }

    #[test]
    fn pseudo_lower_errors() {
        let b = ComponentBounds::lower_only(vec![0.5, 0.5, 0.1]).unwrap();
        assert!(matches!(
            to_pseudo_lower(&pt(&[0.5, 0.5, 0.0]), &b),
            Err(Error::InfeasibleBounds(_))
        ));
        let b = ComponentBounds::lower_only(vec![0.2, 0.2, 0.2]).unwrap();
        assert!(matches!(
            to_pseudo_lower(&pt(&[0.1, 0.45, 0.45]), &b),
            Err(Error::OutOfRegion { component: 0, .. })
        ));
        assert!(matches!(
            to_pseudo_lower(&pt(&[0.5, 0.5]), &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pseudo_upper_examples() {
        let b = ComponentBounds::upper_only(vec![0.43, 0.35, 0.50]).unwrap();
        let xs = to_pseudo_upper(&pt(&[0.43, 0.07, 0.50]), &b).unwrap();
        assert_close(&xs, &[0.0, 1.0, 0.0], 1e-12);
        let xs = to_pseudo_upper(&pt(&[0.29, 0.21, 0.50]), &b).unwrap();
        assert_close(&xs, &[0.5, 0.5, 0.0], 1e-12);
        // the U-vertex with x_j = U_j for j != i maps to e_i
        for i in 0..3 {
            let mut c = b.upper().to_vec();
            c[i] = 1.0
                - c.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, v)| v)
                    .sum::<f64>();
            let xs = to_pseudo_upper(&pt(&c), &b).unwrap();
            assert_eq!(xs.coords(), MixturePoint::vertex(3, i).coords());
        }
    }

    #[test]
    fn pseudo_upper_errors() {
        let tight = ComponentBounds::upper_only(vec![0.3, 0.3, 0.4]).unwrap();
        assert!(matches!(
            to_pseudo_upper(&pt(&[0.3, 0.3, 0.4]), &tight),
            Err(Error::InfeasibleBounds(_))
        ));
        let b = ComponentBounds::upper_only(vec![0.43, 0.35, 0.50]).unwrap();
        assert!(matches!(
            to_pseudo_upper(&pt(&[0.5, 0.2, 0.3]), &b),
            Err(Error::OutOfRegion { component: 0, .. })
        ));
        // 0.2 - 0.4 * 1 < 0: the inverted simplex leaves the original one
        let wide = ComponentBounds::upper_only(vec![0.2, 0.6, 0.6]).unwrap();
        assert!(from_pseudo_upper(&MixturePoint::vertex(3, 0), &wide).is_err());
    }

    #[test]
    fn bounds_validation() {
        assert!(ComponentBounds::new(vec![0.1], vec![0.5, 0.5]).is_err());
        assert!(ComponentBounds::new(vec![0.6, 0.0], vec![0.5, 1.0]).is_err());
        assert!(ComponentBounds::new(vec![1.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(ComponentBounds::new(vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn transform_design_reports_point_index() {
        let b = ComponentBounds::lower_only(vec![0.2, 0.2, 0.2]).unwrap();
        let d = Design::uniform(simplex_lattice(3, 1).unwrap()).unwrap();
        match transform_design(&d, &b, TransformDirection::ToPseudoLower) {
            Err(Error::AtPoint { index: 0, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let ok = transform_design(&d, &b, TransformDirection::FromPseudoLower).unwrap();
        assert_eq!(ok.weights(), d.weights());
        assert_eq!(ok.exact_weights(), d.exact_weights());
        let back = transform_design(&ok, &b, TransformDirection::ToPseudoLower).unwrap();
        for (p, q) in back.points().iter().zip(d.points()) {
            assert!(p.max_distance(q) <= 1e-12);
        }
    }

    #[test]
    fn direction_parsing() {
        for (s, d) in [
            ("to-pseudo-lower", TransformDirection::ToPseudoLower),
            ("from-pseudo-lower", TransformDirection::FromPseudoLower),
            ("to-pseudo-upper", TransformDirection::ToPseudoUpper),
            ("from-pseudo-upper", TransformDirection::FromPseudoUpper),
        ] {
            assert_eq!(s.parse::<TransformDirection>().unwrap(), d);
            assert_eq!(d.inverse().inverse(), d);
        }
        assert!("sideways".parse::<TransformDirection>().is_err());
    }
}

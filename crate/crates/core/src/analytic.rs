//! Closed-form K-optimal designs for first- and second-order Scheffé models,
//! the extreme eigenvalues of the symmetric vertex/midpoint information
//! matrix, and orbit averaging under component permutations.

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::format_significant;
use crate::linalg::{ConditionNumber, SINGULAR_THRESHOLD};
use crate::simplex::{ratio_to_f64, Design, MixturePoint, POINT_TOLERANCE, WEIGHT_SUM_TOLERANCE};

/// Uniform weight `1/q` on the `q` vertices. Its information matrix is
/// `diag(1/q)` with condition number one.
pub fn k_optimal_first_order(q: usize) -> Result<Design> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let points = (0..q).map(|i| MixturePoint::vertex(q, i)).collect();
    Design::with_exact_weights(points, vec![Ratio::new(1, q as i64); q])
}

/// Per-point vertex and midpoint weights of the K-optimal second-order design:
/// `r1 = (8q - 7) / (q (16q - 15))`, `r2 = 16 / (q (16q - 15))`.
pub fn k_optimal_second_order_weights(q: usize) -> Result<(Ratio<i64>, Ratio<i64>)> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!(
            "second-order designs need q >= 2, got {q}"
        )));
    }
    let q = q as i64;
    let denom = q * (16 * q - 15);
    Ok((Ratio::new(8 * q - 7, denom), Ratio::new(16, denom)))
}

/// Vertices (weight `r1` each) followed by edge midpoints in lexicographic
/// pair order (weight `r2` each).
pub fn k_optimal_second_order(q: usize) -> Result<Design> {
    let (r1, r2) = k_optimal_second_order_weights(q)?;
    let (points, class_sizes) = vertices_and_midpoints(q);
    let mut weights = vec![r1; class_sizes.0];
    weights.extend(std::iter::repeat_n(r2, class_sizes.1));
    Design::with_exact_weights(points, weights)
}

/// The `q` vertices followed by the `C(q,2)` edge midpoints.
pub fn vertices_and_midpoints(q: usize) -> (Vec<MixturePoint>, (usize, usize)) {
    let mut points: Vec<MixturePoint> = (0..q).map(|i| MixturePoint::vertex(q, i)).collect();
    for i in 0..q {
        for j in (i + 1)..q {
            points.push(MixturePoint::edge_midpoint(q, i, j));
        }
    }
    (points, (q, q * (q - 1) / 2))
}

/// Largest admissible midpoint weight, reached when the vertex weight is zero.
pub fn r2_upper_limit(q: usize) -> f64 {
    2.0 / (q as f64 * (q as f64 - 1.0))
}

/// Permutation-symmetric weights on vertices and midpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricWeightClass {
    q: usize,
    r1: f64,
    r2: f64,
}

impl SymmetricWeightClass {
    pub fn new(q: usize, r1: f64, r2: f64) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("need q >= 2, got {q}")));
        }
        if !(r1 >= 0.0 && r2 >= 0.0) {
            return Err(Error::Domain(format!(
                "weights r1 = {r1}, r2 = {r2} must be nonnegative"
            )));
        }
        let n2 = (q * (q - 1) / 2) as f64;
        let total = q as f64 * r1 + n2 * r2;
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "class weights sum to {total}, not 1"
            )));
        }
        Ok(SymmetricWeightClass { q, r1, r2 })
    }

    /// Fixes `r1` from the unit-mass constraint.
    pub fn from_r2(q: usize, r2: f64) -> Result<Self> {
        check_r2_domain(q, r2)?;
        let n2 = (q * (q - 1) / 2) as f64;
        let r1 = ((1.0 - n2 * r2) / q as f64).max(0.0);
        Ok(SymmetricWeightClass { q, r1, r2 })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    /// The design on vertices and midpoints. Zero-weight points are kept.
    pub fn design(&self) -> Result<Design> {
        let (points, (n1, n2)) = vertices_and_midpoints(self.q);
        let mut weights = vec![self.r1; n1];
        weights.extend(std::iter::repeat_n(self.r2, n2));
        Design::new(points, weights)
    }
}

fn check_r2_domain(q: usize, r2: f64) -> Result<()> {
    if q < 2 {
        return Err(Error::Domain(format!("need q >= 2, got {q}")));
    }
    let hi = r2_upper_limit(q);
    if !r2.is_finite() || r2 < 0.0 || r2 > hi * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "r2 = {r2} is outside [0, {hi}] for q = {q}"
        )));
    }
    Ok(())
}

/// Closed-form `(lambda_max, lambda_min)` of the information matrix of the
/// symmetric vertex/midpoint design with midpoint weight `r2`.
pub fn symmetric_extreme_eigenvalues(q: usize, r2: f64) -> Result<(f64, f64)> {
    check_r2_domain(q, r2)?;
    let qf = q as f64;
    let radicand = qf * qf * (32.0 * qf - 31.0) / 4.0 * r2 * r2 - 8.0 * qf * r2 + 64.0;
    let s = radicand.max(0.0).sqrt();
    let a = qf / 2.0 * r2 + 8.0;
    let lambda_max = (s + a) / (16.0 * qf);
    // (a - s) / (16q) rationalized: a^2 - s^2 = 8 q r2 (2 - q (q - 1) r2)
    let lambda_min = (r2 * (2.0 - qf * (qf - 1.0) * r2)).max(0.0) / (2.0 * (a + s));
    Ok((lambda_max, lambda_min))
}

/// Closed-form condition number for midpoint weight `r2`; infinite at both
/// ends of the admissible range.
pub fn symmetric_condition_number(q: usize, r2: f64) -> Result<ConditionNumber> {
    check_r2_domain(q, r2)?;
    if r2 <= 0.0 || r2 >= r2_upper_limit(q) {
        return Ok(ConditionNumber::Infinite);
    }
    let (max, min) = symmetric_extreme_eigenvalues(q, r2)?;
    if min > SINGULAR_THRESHOLD * max {
        Ok(ConditionNumber::Finite(max / min))
    } else {
        Ok(ConditionNumber::Infinite)
    }
}

/// One row of the K-optimal second-order weight table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTableRow {
    pub q: usize,
    #[serde(serialize_with = "crate::io::serialize_ratio")]
    pub r1: Ratio<i64>,
    pub n1: usize,
    #[serde(serialize_with = "crate::io::serialize_ratio")]
    pub n1r1: Ratio<i64>,
    #[serde(serialize_with = "crate::io::serialize_ratio")]
    pub r2: Ratio<i64>,
    pub n2: usize,
    #[serde(serialize_with = "crate::io::serialize_ratio")]
    pub n2r2: Ratio<i64>,
    pub total_points: usize,
}

impl WeightTableRow {
    pub fn new(q: usize) -> Result<Self> {
        let (r1, r2) = k_optimal_second_order_weights(q)?;
        let n1 = q;
        let n2 = q * (q - 1) / 2;
        Ok(WeightTableRow {
            q,
            r1,
            n1,
            n1r1: r1 * n1 as i64,
            r2,
            n2,
            n2r2: r2 * n2 as i64,
            total_points: n1 + n2,
        })
    }
}

/// K-optimal second-order weights for `q = 3..=q_max`, with the common limit
/// of the vertex and midpoint total masses as `q` grows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightTable {
    pub rows: Vec<WeightTableRow>,
    pub limit_n1r1: f64,
    pub limit_n2r2: f64,
}

pub const WEIGHT_TABLE_CSV_HEADER: &str = "q,r1,n1,n1r1,r2,n2,n2r2,total_points";

impl WeightTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(WEIGHT_TABLE_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.q,
                format_significant(ratio_to_f64(&r.r1), 10),
                r.n1,
                format_significant(ratio_to_f64(&r.n1r1), 10),
                format_significant(ratio_to_f64(&r.r2), 10),
                r.n2,
                format_significant(ratio_to_f64(&r.n2r2), 10),
                r.total_points
            ));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let header = [
            "q",
            "r1",
            "r1 (exact)",
            "n1",
            "n1*r1",
            "r2",
            "r2 (exact)",
            "n2",
            "n2*r2",
            "n1+n2",
        ];
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            cells.push(vec![
                r.q.to_string(),
                format_significant(ratio_to_f64(&r.r1), 10),
                r.r1.to_string(),
                r.n1.to_string(),
                format_significant(ratio_to_f64(&r.n1r1), 10),
                format_significant(ratio_to_f64(&r.r2), 10),
                r.r2.to_string(),
                r.n2.to_string(),
                format_significant(ratio_to_f64(&r.n2r2), 10),
                r.total_points.to_string(),
            ]);
        }
        cells.push(vec![
            "inf".into(),
            "0".into(),
            "0".into(),
            "inf".into(),
            self.limit_n1r1.to_string(),
            "0".into(),
            "0".into(),
            "inf".into(),
            self.limit_n2r2.to_string(),
            "inf".into(),
        ]);
        let widths: Vec<usize> = (0..header.len())
            .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// The weight table for `q = 3..=q_max` (empty when `q_max < 3`).
pub fn weight_table(q_max: usize) -> Result<WeightTable> {
    let rows = (3..=q_max)
        .map(WeightTableRow::new)
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightTable {
        rows,
        limit_n1r1: 0.5,
        limit_n2r2: 0.5,
    })
}

/// Total vertex mass `(8q - 7) / (16q - 15)` of the K-optimal second-order design.
pub fn vertex_mass(q: usize) -> Result<Ratio<i64>> {
    let (r1, _) = k_optimal_second_order_weights(q)?;
    Ok(r1 * q as i64)
}

/// Total midpoint mass `8 (q - 1) / (16q - 15)` of the K-optimal second-order design.
pub fn midpoint_mass(q: usize) -> Result<Ratio<i64>> {
    let (_, r2) = k_optimal_second_order_weights(q)?;
    Ok(r2 * (q * (q - 1) / 2) as i64)
}

/// Whether some permutation of the coordinates of `a` lands on `b`.
pub fn same_orbit(a: &MixturePoint, b: &MixturePoint) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    if a.dim() <= 8 {
        let mut used = vec![false; a.dim()];
        match_permutation(a.coords(), b.coords(), 0, &mut used)
    } else {
        let (sa, sb) = (sorted_desc(a.coords()), sorted_desc(b.coords()));
        sa.iter()
            .zip(&sb)
            .all(|(x, y)| (x - y).abs() <= POINT_TOLERANCE)
    }
}

/// Depth-first search over permutations, pruned on the first mismatch.
fn match_permutation(a: &[f64], b: &[f64], pos: usize, used: &mut [bool]) -> bool {
    if pos == b.len() {
        return true;
    }
    for j in 0..a.len() {
        if !used[j] && (a[j] - b[pos]).abs() <= POINT_TOLERANCE {
            used[j] = true;
            if match_permutation(a, b, pos + 1, used) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

pub(crate) fn sorted_desc(c: &[f64]) -> Vec<f64> {
    let mut s = c.to_vec();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Partition of point indices into permutation orbits, in order of first appearance.
pub fn orbit_classes(points: &[MixturePoint]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        match classes.iter_mut().find(|c| same_orbit(&points[c[0]], p)) {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Every distinct coordinate permutation of `x`, in descending lexicographic order.
pub fn orbit_members(x: &MixturePoint) -> Vec<MixturePoint> {
    let sorted = sorted_desc(x.coords());
    // group near-equal values so permutations are generated over exact labels
    let mut reps: Vec<f64> = Vec::new();
    let mut labels: Vec<usize> = Vec::with_capacity(sorted.len());
    for v in sorted {
        match reps.last() {
            Some(&r) if (r - v).abs() <= POINT_TOLERANCE => {}
            _ => reps.push(v),
        }
        labels.push(reps.len() - 1);
    }
    let mut out = Vec::new();
    loop {
        out.push(
            MixturePoint::new(labels.iter().map(|&l| reps[l]).collect())
                .expect("permutation of a valid point"),
        );
        if !next_permutation(&mut labels) {
            break;
        }
    }
    out
}

/// Advances to the next permutation in ascending label order (labels ascending
/// correspond to descending coordinate values).
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Averages weights over permutation orbits of the support, adding orbit
/// members that are missing from the support.
pub fn symmetrize(d: &Design) -> Result<Design> {
    let points = d.points();
    let classes = orbit_classes(points);
    let mut out_points: Vec<MixturePoint> = points.to_vec();
    let mut out_weights: Vec<f64> = vec![0.0; points.len()];
    let exact_in = d.exact_weights();
    let mut out_exact: Option<Vec<Ratio<i64>>> =
        exact_in.map(|_| vec![Ratio::zero(); points.len()]);

    for class in &classes {
        let members = orbit_members(&points[class[0]]);
        // member index in the output support
        let mut slots = Vec::with_capacity(members.len());
        for m in members {
            match class.iter().find(|&&i| points[i].approx_eq(&m)) {
                Some(&i) => slots.push(i),
                None => {
                    out_points.push(m);
                    out_weights.push(0.0);
                    if let Some(e) = out_exact.as_mut() {
                        e.push(Ratio::zero());
                    }
                    slots.push(out_points.len() - 1);
                }
            }
        }
        let ws: Vec<f64> = class.iter().map(|&i| d.weights()[i]).collect();
        let closed = slots.len() == class.len();
        let avg = if closed && ws.iter().all(|&w| w == ws[0]) {
            ws[0]
        } else {
            ws.iter().sum::<f64>() / slots.len() as f64
        };
        for &s in &slots {
            out_weights[s] = avg;
        }
        if let (Some(exact), Some(e)) = (exact_in, out_exact.as_mut()) {
            let total = class.iter().fold(Ratio::zero(), |acc, &i| acc + exact[i]);
            let share = total / slots.len() as i64;
            for &s in &slots {
                e[s] = share;
            }
        }
    }

    match out_exact {
        Some(e) => Design::with_exact_weights(out_points, e),
        None => {
            let sum: f64 = out_weights.iter().sum();
            debug_assert!((sum - 1.0).abs() <= WEIGHT_SUM_TOLERANCE);
            Design::new(out_points, out_weights)
        }
    }
}

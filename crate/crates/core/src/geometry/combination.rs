use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{Point, PointSource};

/// Allowed deviation of `sum(weights)` from 1.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Coordinates per work unit in [`eval_combination_with`].
const EVAL_CHUNK: usize = 512;

/// Sparse convex weights over the points of some point family.
///
/// The support is kept sorted by index with strictly positive weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexCombination {
    support: Vec<(usize, f64)>,
    num_points: usize,
}

impl ConvexCombination {
    /// Validates and normalizes `support`: zero weights are dropped and
    /// entries are sorted by index.
    pub fn new(mut support: Vec<(usize, f64)>, num_points: usize) -> Result<Self> {
        for &(i, w) in &support {
            if i >= num_points {
                return Err(Error::InvalidInput(format!(
                    "index {i} out of range for {num_points} points"
                )));
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "weight {w} at index {i} is not a non-negative number"
                )));
            }
        }
        support.retain(|&(_, w)| w > 0.0);
        support.sort_by_key(|&(i, _)| i);
        if support.windows(2).any(|p| p[0].0 == p[1].0) {
            return Err(Error::InvalidInput("duplicate index in support".into()));
        }
        if support.is_empty() {
            return Err(Error::InvalidInput("empty support".into()));
        }
        let total: f64 = support.iter().map(|&(_, w)| w).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidInput(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(ConvexCombination {
            support,
            num_points,
        })
    }

    /// Dense weights, one per point.
    pub fn from_dense(weights: &[f64]) -> Result<Self> {
        Self::new(weights.iter().copied().enumerate().collect(), weights.len())
    }

    pub fn point_mass(index: usize, num_points: usize) -> Result<Self> {
        Self::new(vec![(index, 1.0)], num_points)
    }

    pub fn uniform(num_points: usize) -> Result<Self> {
        let w = 1.0 / num_points as f64;
        Self::new((0..num_points).map(|i| (i, w)).collect(), num_points)
    }

    /// Builds from already-sorted, positive entries without re-validating the sum.
    pub(crate) fn from_sorted_unchecked(support: Vec<(usize, f64)>, num_points: usize) -> Self {
        debug_assert!(support.windows(2).all(|p| p[0].0 < p[1].0));
        ConvexCombination {
            support,
            num_points,
        }
    }

    pub fn support(&self) -> &[(usize, f64)] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().map(|&(i, _)| i)
    }

    pub fn weight_sum(&self) -> f64 {
        self.support.iter().map(|&(_, w)| w).sum()
    }

    pub(crate) fn check_against<P: PointSource + ?Sized>(&self, points: &P) -> Result<()> {
        if self.num_points != points.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                found: self.num_points,
            });
        }
        Ok(())
    }
}

/// `sum_i w_i p_i`, summed naively in ascending index order.
pub fn eval_combination<P: PointSource + ?Sized>(
    points: &P,
    c: &ConvexCombination,
) -> Result<Point> {
    eval_combination_with(points, c, Exec::default())
}

pub fn eval_combination_with<P: PointSource + ?Sized>(
    points: &P,
    c: &ConvexCombination,
    exec: Exec,
) -> Result<Point> {
    c.check_against(points)?;
    let mut out = vec![0.0; points.dimension()];
    // Each coordinate is summed over the support in the same order whichever
    // chunk it lands in.
    exec.for_each_chunk(&mut out, EVAL_CHUNK, |offset, acc| {
        let coords = offset..offset + acc.len();
        for &(i, w) in c.support() {
            points.accumulate(i, w, coords.clone(), acc);
        }
    });
    Point::new(out)
}

pub fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;

    fn set(rows: &[&[f64]]) -> PointSet {
        PointSet::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ConvexCombination::new(vec![(0, 0.5), (1, 0.5)], 2).is_ok());
        assert!(ConvexCombination::new(vec![(0, 0.5), (2, 0.5)], 2).is_err());
        assert!(ConvexCombination::new(vec![(0, 0.5), (0, 0.5)], 2).is_err());
        assert!(ConvexCombination::new(vec![(0, -0.5), (1, 1.5)], 2).is_err());
        assert!(ConvexCombination::new(vec![(0, 0.5), (1, 0.4)], 2).is_err());
        assert!(ConvexCombination::new(vec![(0, f64::NAN)], 1).is_err());
        assert!(ConvexCombination::new(vec![(0, 0.0)], 1).is_err());
        let c = ConvexCombination::new(vec![(2, 0.5), (0, 0.0), (1, 0.5)], 3).unwrap();
        assert_eq!(c.support(), &[(1, 0.5), (2, 0.5)]);
    }

    #[test]
    fn single_point_is_identity() {
        let s = set(&[&[0.3, -0.7, 2.0], &[1.0, 1.0, 1.0]]);
        let c = ConvexCombination::point_mass(0, 2).unwrap();
        assert_eq!(&*eval_combination(&s, &c).unwrap(), &[0.3, -0.7, 2.0]);
    }

    #[test]
    fn centroid_of_triangle() {
        let s = set(&[&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]]);
        let c = ConvexCombination::uniform(3).unwrap();
        let x = eval_combination(&s, &c).unwrap();
        assert!(linf_distance(&x, &[1.0 / 3.0, 1.0 / 3.0]) < 1e-15);
    }

    #[test]
    fn antipodal_pair() {
        let s = set(&[&[1.0, 1.0], &[-1.0, -1.0]]);
        let c = ConvexCombination::from_dense(&[0.75, 0.25]).unwrap();
        assert_eq!(&*eval_combination(&s, &c).unwrap(), &[0.5, 0.5]);
    }

    #[test]
    fn mismatched_point_set() {
        let s = set(&[&[1.0], &[2.0]]);
        let c = ConvexCombination::uniform(3).unwrap();
        assert!(matches!(
            eval_combination(&s, &c),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_eval_is_bit_identical() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let rows = (0..40)
            .map(|_| (0..3000).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let s = PointSet::from_rows(rows).unwrap();
        let w: Vec<f64> = (0..40).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = w.iter().sum();
        let c = ConvexCombination::from_dense(&w.iter().map(|v| v / total).collect::<Vec<_>>())
            .unwrap();
        let a = eval_combination_with(&s, &c, Exec::Sequential).unwrap();
        let b = eval_combination_with(&s, &c, Exec::Parallel).unwrap();
        assert!(a
            .iter()
            .zip(b.iter())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

//! Haar analysis and synthesis, dyadic conditional expectations and the
//! dyadic square function on `[0, 1)`.
//!
//! Functions are piecewise constant on the `2^N` cells of depth `N`, so every
//! integral in this module is a finite sum. Haar coefficients use the
//! normalization `a_I = <f, h_I> / |I|` where `h_I` is `+1` on the left half of
//! `I` and `-1` on the right half; the coefficient of the indicator `h_0` is the
//! mean of `f`.

use serde::Deserialize;

use crate::error::{invalid, Error, Result};

pub const MAX_DEPTH: u32 = 20;
pub const DEFAULT_DEPTH: u32 = 10;

/// `[index * 2^-level, (index + 1) * 2^-level)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicInterval {
    pub level: u32,
    pub index: u64,
}

impl DyadicInterval {
    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level > MAX_DEPTH {
            return Err(Error::DepthTooLarge(level));
        }
        if index >= 1u64 << level {
            return Err(invalid(format!("index {index} out of range for level {level}")));
        }
        Ok(Self { level, index })
    }

    pub const fn root() -> Self {
        Self { level: 0, index: 0 }
    }

    pub fn measure(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn start(&self) -> f64 {
        self.index as f64 * self.measure()
    }

    pub fn end(&self) -> f64 {
        (self.index + 1) as f64 * self.measure()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.start() <= x && x < self.end()
    }

    pub fn parent(&self) -> Option<Self> {
        (self.level > 0).then(|| Self {
            level: self.level - 1,
            index: self.index / 2,
        })
    }

    /// Left and right halves.
    pub fn children(&self) -> [Self; 2] {
        let level = self.level + 1;
        [
            Self { level, index: 2 * self.index },
            Self { level, index: 2 * self.index + 1 },
        ]
    }

    /// Position of the Haar function supported on this interval in the flat
    /// enumeration `h_1, h_2, ...` (level-major, left to right). `h_0` is the
    /// indicator of the unit interval and has no interval of its own here.
    pub fn haar_number(&self) -> u64 {
        (1u64 << self.level) + self.index
    }

    pub fn from_haar_number(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("h_0 is the constant function, not a detail"));
        }
        let level = 63 - n.leading_zeros();
        Self::new(level, n - (1u64 << level))
    }
}

impl std::fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}/2^{}, {}/2^{})", self.index, self.level, self.index + 1, self.level)
    }
}

/// Piecewise-constant function on the depth-`N` dyadic grid of `[0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    depth: u32,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(depth: u32, values: Vec<f64>) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        if values.len() != 1usize << depth {
            return Err(invalid(format!(
                "depth {depth} needs {} values, got {}",
                1usize << depth,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("value at cell {i} is not finite")));
        }
        Ok(Self { depth, values })
    }

    /// Infers the depth from the number of values, which must be a power of two.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n == 0 || !n.is_power_of_two() {
            return Err(invalid(format!("{n} values is not a power of two")));
        }
        Self::new(n.trailing_zeros(), values)
    }

    pub fn constant(depth: u32, c: f64) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        Self::new(depth, vec![c; 1usize << depth])
    }

    pub fn zeros(depth: u32) -> Result<Self> {
        Self::constant(depth, 0.0)
    }

    /// Samples `f` at cell midpoints.
    pub fn from_fn(depth: u32, f: impl Fn(f64) -> f64) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        let n = 1usize << depth;
        let h = 1.0 / n as f64;
        Self::new(depth, (0..n).map(|i| f((i as f64 + 0.5) * h)).collect())
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_measure(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    pub fn value_at(&self, x: f64) -> f64 {
        let n = self.values.len();
        let i = ((x * n as f64).floor() as isize).clamp(0, n as isize - 1) as usize;
        self.values[i]
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_measure()
    }

    pub fn mean(&self) -> f64 {
        self.integral()
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() * self.cell_measure()
    }

    /// `∫ f² w` for a weight on the same grid.
    pub fn weighted_l2_sq(&self, w: &GridFunction) -> Result<f64> {
        self.check_same_depth(w)?;
        Ok(self
            .values
            .iter()
            .zip(&w.values)
            .map(|(f, w)| f * f * w)
            .sum::<f64>()
            * self.cell_measure())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<GridFunction> {
        GridFunction::new(self.depth, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scale(&self, lambda: f64) -> GridFunction {
        GridFunction {
            depth: self.depth,
            values: self.values.iter().map(|v| lambda * v).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.check_same_depth(other)?;
        Ok(GridFunction {
            depth: self.depth,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub(crate) fn check_same_depth(&self, other: &GridFunction) -> Result<()> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch {
                expected: self.depth,
                found: other.depth,
            });
        }
        Ok(())
    }

    /// Averages over all atoms of every level: entry `n` has `2^n` values.
    pub fn average_pyramid(&self) -> Vec<Vec<f64>> {
        average_pyramid(&self.values)
    }

    /// Averages over the atoms of level `n`.
    pub fn atom_averages(&self, n: u32) -> Result<Vec<f64>> {
        if n > self.depth {
            return Err(Error::LevelOutOfRange { level: n, depth: self.depth });
        }
        let mut current = self.values.clone();
        for _ in n..self.depth {
            current = halve(&current);
        }
        Ok(current)
    }

    /// Extends atom values of level `n` to a function on this grid's depth.
    pub fn from_atoms(depth: u32, atoms: &[f64]) -> Result<GridFunction> {
        let n = atoms.len();
        if !n.is_power_of_two() || n > 1usize << depth {
            return Err(invalid("atom count must be a power of two not above 2^depth"));
        }
        let rep = (1usize << depth) / n;
        GridFunction::new(
            depth,
            atoms.iter().flat_map(|&a| std::iter::repeat_n(a, rep)).collect(),
        )
    }

    /// `depth,v0,v1,...` with 17 significant digits per value.
    pub fn to_csv(&self) -> String {
        let mut out = self.depth.to_string();
        for v in &self.values {
            out.push(',');
            out.push_str(&fmt17(*v));
        }
        out
    }

    pub fn from_csv(line: &str) -> Result<GridFunction> {
        let mut fields = line.trim().split(',').map(str::trim);
        let depth: u32 = fields
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Parse("empty line".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("depth: {e}")))?;
        let values = fields
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse(format!("value {s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(depth, values)
    }

    /// `{"depth": N, "values": [...]}` with 17 significant digits per value.
    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.values.iter().map(|v| fmt17(*v)).collect();
        format!("{{\"depth\":{},\"values\":[{}]}}", self.depth, body.join(","))
    }

    pub fn from_json(text: &str) -> Result<GridFunction> {
        #[derive(Deserialize)]
        struct Raw {
            depth: u32,
            values: Vec<f64>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        GridFunction::new(raw.depth, raw.values)
    }
}

pub(crate) fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn halve(values: &[f64]) -> Vec<f64> {
    values.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

pub(crate) fn average_pyramid(values: &[f64]) -> Vec<Vec<f64>> {
    let depth = values.len().trailing_zeros() as usize;
    let mut levels = vec![Vec::new(); depth + 1];
    levels[depth] = values.to_vec();
    for n in (0..depth).rev() {
        levels[n] = halve(&levels[n + 1]);
    }
    levels
}

/// Mean plus one detail coefficient per dyadic interval of level `< depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarCoefficients {
    depth: u32,
    pub mean: f64,
    detail: Vec<Vec<f64>>,
}

impl HaarCoefficients {
    pub fn new(depth: u32, mean: f64, detail: Vec<Vec<f64>>) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        if detail.len() != depth as usize {
            return Err(Error::DepthMismatch {
                expected: depth,
                found: detail.len() as u32,
            });
        }
        for (k, row) in detail.iter().enumerate() {
            if row.len() != 1usize << k {
                return Err(invalid(format!(
                    "level {k} needs {} coefficients, got {}",
                    1usize << k,
                    row.len()
                )));
            }
        }
        Ok(Self { depth, mean, detail })
    }

    pub fn zeros(depth: u32) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        let detail = (0..depth).map(|k| vec![0.0; 1usize << k]).collect();
        Ok(Self { depth, mean: 0.0, detail })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn level(&self, k: u32) -> &[f64] {
        &self.detail[k as usize]
    }

    pub fn get(&self, interval: DyadicInterval) -> Option<f64> {
        self.detail
            .get(interval.level as usize)
            .and_then(|row| row.get(interval.index as usize))
            .copied()
    }

    pub fn set(&mut self, interval: DyadicInterval, value: f64) -> Result<()> {
        let slot = self
            .detail
            .get_mut(interval.level as usize)
            .and_then(|row| row.get_mut(interval.index as usize))
            .ok_or(Error::LevelOutOfRange {
                level: interval.level,
                depth: self.depth,
            })?;
        *slot = value;
        Ok(())
    }

    /// `mean² + Σ a_I² |I|`, equal to `‖f‖₂²` by orthogonality.
    pub fn parseval_sum(&self) -> f64 {
        let details: f64 = self
            .detail
            .iter()
            .enumerate()
            .map(|(k, row)| row.iter().map(|a| a * a).sum::<f64>() * (-(k as f64)).exp2())
            .sum();
        self.mean * self.mean + details
    }

    /// Coefficients in the flat enumeration `h_0, h_1, h_2, ...`.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(1usize << self.depth);
        out.push(self.mean);
        for row in &self.detail {
            out.extend_from_slice(row);
        }
        out
    }

    pub fn from_flat(depth: u32, flat: &[f64]) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        if flat.len() != 1usize << depth {
            return Err(invalid(format!(
                "depth {depth} needs {} coefficients, got {}",
                1usize << depth,
                flat.len()
            )));
        }
        let detail = (0..depth)
            .map(|k| flat[1usize << k..1usize << (k + 1)].to_vec())
            .collect();
        Ok(Self {
            depth,
            mean: flat[0],
            detail,
        })
    }

    /// `S_n²` on the atoms of level `n`: `mean² + Σ_{k<n} a_{I_k}²`.
    pub fn square_sum_atoms(&self, n: u32) -> Result<Vec<f64>> {
        if n > self.depth {
            return Err(Error::LevelOutOfRange { level: n, depth: self.depth });
        }
        let mut acc = vec![self.mean * self.mean];
        for row in &self.detail[..n as usize] {
            acc = acc
                .iter()
                .zip(row)
                .flat_map(|(&s, &a)| {
                    let v = s + a * a;
                    [v, v]
                })
                .collect();
        }
        Ok(acc)
    }
}

pub fn haar_analyze(f: &GridFunction) -> HaarCoefficients {
    let pyramid = f.average_pyramid();
    let detail = (0..f.depth as usize)
        .map(|k| {
            pyramid[k + 1]
                .chunks_exact(2)
                .map(|p| 0.5 * (p[0] - p[1]))
                .collect()
        })
        .collect();
    HaarCoefficients {
        depth: f.depth,
        mean: pyramid[0][0],
        detail,
    }
}

pub fn haar_synthesize(c: &HaarCoefficients, depth: u32) -> Result<GridFunction> {
    if c.depth != depth {
        return Err(Error::DepthMismatch {
            expected: depth,
            found: c.depth,
        });
    }
    let mut values = vec![c.mean];
    for row in &c.detail {
        values = values
            .iter()
            .zip(row)
            .flat_map(|(&v, &a)| [v + a, v - a])
            .collect();
    }
    GridFunction::new(depth, values)
}

/// Conditional expectation onto the level-`n` atoms, returned at full depth.
pub fn project(f: &GridFunction, n: u32) -> Result<GridFunction> {
    let atoms = f.atom_averages(n)?;
    GridFunction::from_atoms(f.depth, &atoms)
}

pub fn square_function(f: &GridFunction) -> GridFunction {
    let sq = haar_analyze(f)
        .square_sum_atoms(f.depth)
        .expect("full depth is always in range");
    GridFunction {
        depth: f.depth,
        values: sq.into_iter().map(f64::sqrt).collect(),
    }
}

/// `S_n(f) = S(f_n)`.
pub fn truncated_square_function(f: &GridFunction, n: u32) -> Result<GridFunction> {
    let sq = haar_analyze(f).square_sum_atoms(n)?;
    let atoms: Vec<f64> = sq.into_iter().map(f64::sqrt).collect();
    GridFunction::from_atoms(f.depth, &atoms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1234() -> GridFunction {
        GridFunction::new(2, vec![1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    /// `(1/|I|) ∫ f h_I` by direct summation over cells.
    fn inner_product_coefficient(f: &GridFunction, i: DyadicInterval) -> f64 {
        let h = f.cell_measure();
        let mut acc = 0.0;
        for (j, v) in f.values().iter().enumerate() {
            let x = (j as f64 + 0.5) * h;
            if i.contains(x) {
                let mid = 0.5 * (i.start() + i.end());
                acc += v * if x < mid { 1.0 } else { -1.0 } * h;
            }
        }
        acc / i.measure()
    }

    #[test]
    fn constant_has_no_detail() {
        let c = haar_analyze(&GridFunction::constant(5, 1.0).unwrap());
        assert_eq!(c.mean, 1.0);
        assert!(c.to_flat()[1..].iter().all(|&a| a == 0.0));
    }

    #[test]
    fn first_haar_function_is_its_own_coefficient() {
        let c = haar_analyze(&GridFunction::new(1, vec![1.0, -1.0]).unwrap());
        assert_eq!(c.mean, 0.0);
        assert_eq!(c.level(0), &[1.0]);
    }

    #[test]
    fn four_cell_example_matches_inner_products() {
        let f = f1234();
        let c = haar_analyze(&f);
        assert_eq!(c.mean, 2.5);
        assert_eq!(c.level(0), &[-1.0]);
        assert_eq!(c.level(1), &[-0.5, -0.5]);
        for k in 0..2 {
            for i in 0..(1u64 << k) {
                let iv = DyadicInterval::new(k, i).unwrap();
                assert_eq!(c.get(iv).unwrap(), inner_product_coefficient(&f, iv));
            }
        }
        assert_eq!(c.parseval_sum(), 7.5);
        assert_eq!(f.l2_norm_sq(), 7.5);
    }

    #[test]
    fn synthesis_of_trivial_trees() {
        let z = haar_synthesize(&HaarCoefficients::zeros(4).unwrap(), 4).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
        let mut c = HaarCoefficients::zeros(3).unwrap();
        c.mean = 5.0;
        let f = haar_synthesize(&c, 3).unwrap();
        assert!(f.values().iter().all(|&v| v == 5.0));
        assert!(matches!(
            haar_synthesize(&c, 4),
            Err(Error::DepthMismatch { .. })
        ));
    }

    #[test]
    fn projection_examples() {
        let f = f1234();
        assert_eq!(project(&f, 2).unwrap(), f);
        assert_eq!(project(&f, 0).unwrap().values(), &[2.5; 4]);
        assert_eq!(project(&f, 1).unwrap().values(), &[1.5, 1.5, 3.5, 3.5]);
        assert!(matches!(project(&f, 3), Err(Error::LevelOutOfRange { .. })));
    }

    #[test]
    fn square_function_examples() {
        let s = square_function(&GridFunction::constant(3, -2.0).unwrap());
        assert!(s.values().iter().all(|&v| v == 2.0));

        let s = square_function(&GridFunction::new(1, vec![2.0, 0.0]).unwrap());
        assert_eq!(s.values(), &[2f64.sqrt(); 2]);

        let f = f1234();
        let s = square_function(&f);
        assert!((s.values()[0] - 7.5f64.sqrt()).abs() < 1e-15);
        assert!((s.l2_norm_sq() - 7.5).abs() < 1e-14);
    }

    #[test]
    fn truncated_square_function_examples() {
        let f = f1234();
        let s0 = truncated_square_function(&f, 0).unwrap();
        assert!(s0.values().iter().all(|&v| v == 2.5));
        let s1 = truncated_square_function(&f, 1).unwrap();
        let expect = (2.5f64 * 2.5 + 1.0).sqrt();
        assert!(s1.values().iter().all(|&v| (v - expect).abs() < 1e-15));
        let h1 = GridFunction::new(1, vec![1.0, -1.0]).unwrap();
        assert!(truncated_square_function(&h1, 0)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0.0));
        assert_eq!(truncated_square_function(&f, 2).unwrap(), square_function(&f));
    }

    #[test]
    fn haar_numbering_follows_level_major_order() {
        assert_eq!(DyadicInterval::new(0, 0).unwrap().haar_number(), 1);
        assert_eq!(DyadicInterval::new(1, 1).unwrap().haar_number(), 3);
        assert_eq!(DyadicInterval::new(2, 1).unwrap().haar_number(), 5);
        for n in 1..64 {
            assert_eq!(DyadicInterval::from_haar_number(n).unwrap().haar_number(), n);
        }
        let i = DyadicInterval::new(3, 5).unwrap();
        assert_eq!(i.children()[1].parent(), Some(i));
        assert!(DyadicInterval::new(2, 4).is_err());
    }

    #[test]
    fn csv_and_json_preserve_values() {
        let f = GridFunction::new(2, vec![0.1, -1.0 / 3.0, 1e-300, 2.0]).unwrap();
        let csv = f.to_csv();
        assert!(csv.starts_with("2,1.0000000000000001e-1,"));
        assert_eq!(GridFunction::from_csv(&csv).unwrap(), f);
        assert_eq!(GridFunction::from_json(&f.to_json()).unwrap(), f);
        assert!(GridFunction::from_csv("3,1,2").is_err());
        assert!(GridFunction::from_json("{\"depth\":1}").is_err());
    }

    #[test]
    fn rejects_bad_lengths_and_depths() {
        assert!(GridFunction::new(2, vec![1.0; 3]).is_err());
        assert!(matches!(
            GridFunction::constant(21, 0.0),
            Err(Error::DepthTooLarge(21))
        ));
        assert!(GridFunction::new(1, vec![f64::NAN, 0.0]).is_err());
    }
}

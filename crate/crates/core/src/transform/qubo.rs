use std::collections::BTreeMap;

use super::BilpInstance;
use crate::error::{Error, Result};

/// Upper bound on QUBO variables accepted by [`build_qubo`]; the number of
/// interactions grows quadratically with it.
pub const MAX_QUBO_VARIABLES: usize = 4095;

/// Minimisation QUBO `f(x) = sum_i diag_i x_i + sum_{i<j} q_ij x_i x_j`, with
/// the additive constant kept separately.
///
/// Only the upper triangle is stored, folded: `q_ij` is the sum of both
/// symmetric entries. Zero couplings are never stored, so the map's key set
/// is the interaction set.
#[derive(Clone, Debug, PartialEq)]
pub struct QuboInstance {
    diag: Vec<f64>,
    offdiag: BTreeMap<(usize, usize), f64>,
    constant: f64,
    lambda: Option<f64>,
}

impl QuboInstance {
    pub fn new(
        diag: Vec<f64>,
        offdiag: BTreeMap<(usize, usize), f64>,
        constant: f64,
        lambda: Option<f64>,
    ) -> Result<Self> {
        let m = diag.len();
        if let Some(&(i, j)) = offdiag.keys().find(|&&(i, j)| !(i < j && j < m)) {
            return Err(Error::Schema(format!(
                "interaction ({i}, {j}) is not an upper-triangular pair of {m} variables"
            )));
        }
        let finite = diag.iter().chain(offdiag.values()).all(|v| v.is_finite());
        if !finite || !constant.is_finite() {
            return Err(Error::Schema("QUBO coefficients must be finite".into()));
        }
        let offdiag = offdiag.into_iter().filter(|&(_, q)| q != 0.0).collect();
        Ok(QuboInstance {
            diag,
            offdiag,
            constant,
            lambda,
        })
    }

    /// Variable count.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.offdiag
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    /// Neighbours of every variable with their coupling, both directions.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (&(i, j), &q) in &self.offdiag {
            adj[i].push((j, q));
            adj[j].push((i, q));
        }
        adj
    }

    /// Energy of the assignment whose bit `k` is `x_k`. Requires `m <= 64`.
    pub fn energy_of_mask(&self, mask: u64) -> f64 {
        let linear: f64 = self
            .diag
            .iter()
            .enumerate()
            .filter(|&(k, _)| mask >> k & 1 == 1)
            .map(|(_, d)| d)
            .sum();
        let quadratic: f64 = self
            .offdiag
            .iter()
            .filter(|&(&(i, j), _)| mask >> i & mask >> j & 1 == 1)
            .map(|(_, q)| q)
            .sum();
        linear + quadratic
    }
}

/// `1 + 2 sum_j |v_j|`: any violated cover constraint then costs more than
/// the whole range of attainable objective values.
pub fn default_lambda(bilp: &BilpInstance) -> f64 {
    1.0 + 2.0 * bilp.values().iter().map(|v| v.abs()).sum::<f64>()
}

/// Folds `-v.x + lambda |Sx - b|^2` into QUBO form.
///
/// With `|C|` the coalition size, expanding the penalty gives
/// `diag_j = -v_j - lambda |C_j|`, `q_jk = 2 lambda |C_j & C_k|` and
/// `c = lambda n`.
pub fn build_qubo(bilp: &BilpInstance, lambda: Option<f64>) -> Result<QuboInstance> {
    let lambda = match lambda {
        Some(l) if !(l > 0.0 && l.is_finite()) => {
            return Err(Error::Config(format!("penalty must be positive, got {l}")))
        }
        Some(l) => l,
        None => default_lambda(bilp),
    };
    let m = bilp.len();
    if m > MAX_QUBO_VARIABLES {
        return Err(Error::ResourceLimit(format!(
            "{m} QUBO variables exceeds the limit of {MAX_QUBO_VARIABLES}"
        )));
    }
    let cols = bilp.columns();
    let diag = cols
        .iter()
        .zip(bilp.values())
        .map(|(c, v)| -v - lambda * f64::from(c.size()))
        .collect();
    let mut offdiag = BTreeMap::new();
    for (i, a) in cols.iter().enumerate() {
        for (j, b) in cols.iter().enumerate().skip(i + 1) {
            let shared = a.overlap(*b);
            if shared > 0 {
                offdiag.insert((i, j), 2.0 * lambda * f64::from(shared));
            }
        }
    }
    QuboInstance::new(diag, offdiag, lambda * bilp.agents() as f64, Some(lambda))
}

/// `x^T Q x` without the constant.
pub fn qubo_energy(qubo: &QuboInstance, x: &[bool]) -> Result<f64> {
    if x.len() != qubo.len() {
        return Err(Error::Dimension {
            expected: qubo.len(),
            actual: x.len(),
        });
    }
    let linear: f64 = qubo
        .diag
        .iter()
        .zip(x)
        .filter(|(_, &b)| b)
        .map(|(d, _)| d)
        .sum();
    let quadratic: f64 = qubo
        .offdiag
        .iter()
        .filter(|&(&(i, j), _)| x[i] && x[j])
        .map(|(_, q)| q)
        .sum();
    Ok(linear + quadratic)
}

/// Size `s` of the interaction set.
pub fn interaction_count(qubo: &QuboInstance) -> usize {
    qubo.offdiag.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::g2;
    use crate::game::{Coalition, CoalitionGame};
    use crate::transform::{build_bilp, parse_bits};

    fn g2_qubo() -> QuboInstance {
        build_qubo(&build_bilp(&g2(), &[]).unwrap(), Some(10.0)).unwrap()
    }

    #[test]
    fn g2_coefficients() {
        let q = g2_qubo();
        assert_eq!(q.diag(), &[-11.0, -12.0, -24.0]);
        let expected: BTreeMap<_, _> = [((0, 2), 20.0), ((1, 2), 20.0)].into();
        assert_eq!(q.offdiag(), &expected);
        assert_eq!(q.constant(), 20.0);
        assert_eq!(q.lambda(), Some(10.0));
    }

    #[test]
    fn g2_energies() {
        let q = g2_qubo();
        let e = |s: &str| qubo_energy(&q, &parse_bits(s).unwrap()).unwrap();
        assert_eq!(e("000"), 0.0);
        assert_eq!(e("001"), -24.0);
        assert_eq!(e("001") + q.constant(), -4.0);
        assert_eq!(e("110") + q.constant(), -3.0);
        assert_eq!(e("111"), -7.0);
        for mask in 0..8u64 {
            assert_eq!(
                q.energy_of_mask(mask),
                e(&crate::transform::format_bits(
                    &crate::transform::bits_from_mask(mask, 3)
                ))
            );
        }
    }

    #[test]
    fn length_mismatch() {
        let err = qubo_energy(&g2_qubo(), &[true, false]).unwrap_err();
        assert!(matches!(
            err,
            Error::Dimension {
                expected: 3,
                actual: 2
            }
        ));
    }

    #[test]
    fn penalty_must_be_positive() {
        let bilp = build_bilp(&g2(), &[]).unwrap();
        assert!(matches!(
            build_qubo(&bilp, Some(0.0)),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_qubo(&bilp, Some(-1.0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn default_penalty() {
        let bilp = build_bilp(&g2(), &[]).unwrap();
        assert_eq!(default_lambda(&bilp), 15.0);
        let neg = CoalitionGame::new(2, vec![-1.0, 2.0, -4.0]).unwrap();
        assert_eq!(default_lambda(&build_bilp(&neg, &[]).unwrap()), 15.0);
    }

    #[test]
    fn interaction_counts() {
        let q = g2_qubo();
        assert_eq!(interaction_count(&q), 2);
        let g3 = CoalitionGame::new(3, vec![1.0; 7]).unwrap();
        let q3 = build_qubo(&build_bilp(&g3, &[]).unwrap(), None).unwrap();
        assert_eq!(interaction_count(&q3), 15);
        assert!(interaction_count(&q3) <= 21);
        // Removing the grand coalition removes its 6 interactions.
        let q3x = build_qubo(&build_bilp(&g3, &[Coalition(7)]).unwrap(), None).unwrap();
        assert_eq!(interaction_count(&q3x), 9);
    }

    #[test]
    fn rejects_lower_triangular_keys() {
        let off: BTreeMap<_, _> = [((2, 1), 1.0)].into();
        assert!(QuboInstance::new(vec![0.0; 3], off, 0.0, None).is_err());
        let off: BTreeMap<_, _> = [((1, 3), 1.0)].into();
        assert!(QuboInstance::new(vec![0.0; 3], off, 0.0, None).is_err());
    }

    #[test]
    fn zero_couplings_are_dropped() {
        let off: BTreeMap<_, _> = [((0, 1), 0.0), ((1, 2), 3.0)].into();
        let q = QuboInstance::new(vec![0.0; 3], off, 0.0, None).unwrap();
        assert_eq!(interaction_count(&q), 1);
    }
}

//! Quasi-Monte Carlo integration over point sets.

mod asian;
mod normal;

pub use asian::{asian_integrand, AsianParams};
pub use normal::inverse_normal_cdf;

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2core::{
    fourier_transform, to_unit_cube_into, LinearNet, NetPoint, MAX_FOURIER_DIGITS,
};
use crate::netgen::sobol_net_with_dims;
use crate::sum::CompensatedSum;
use crate::wafom::{mu, wafom_inversion};

/// Points per work unit when integrating over a net.
const INTEGRATE_CHUNK_LOG2: usize = 12;

/// Degree of discretization used for reference and net integrations.
pub const DEFAULT_DIGITS: usize = 30;

/// log₂ of the Sobol point count behind [`reference_price`].
pub const REFERENCE_LOG2_POINTS: usize = 20;

pub type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A real function on [0,1)^S with metadata.
#[derive(Clone)]
pub struct Integrand {
    name: String,
    arity: usize,
    params: BTreeMap<String, f64>,
    exact_integral: Option<f64>,
    evaluator: Evaluator,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("params", &self.params)
            .field("exact_integral", &self.exact_integral)
            .finish_non_exhaustive()
    }
}

impl Integrand {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        params: BTreeMap<String, f64>,
        exact_integral: Option<f64>,
        evaluator: Evaluator,
    ) -> Self {
        Integrand {
            name: name.into(),
            arity,
            params,
            exact_integral,
            evaluator,
        }
    }

    pub fn constant(value: f64, arity: usize) -> Self {
        Integrand::new(
            "constant",
            arity,
            BTreeMap::from([("c".to_string(), value)]),
            Some(value),
            Arc::new(move |_| value),
        )
    }

    /// The Walsh character x ↦ ⟨B(x)|A⟩ at n digits, where B(x) is the
    /// n-digit truncation of x. Its integral is 1 for A = 0 and 0 otherwise.
    pub fn walsh(a: &NetPoint) -> Self {
        let n = a.n();
        let rows = a.rows().to_vec();
        let scale = (n as f64).exp2();
        let index = if a.flat_len() <= 63 {
            a.to_index() as f64
        } else {
            f64::NAN
        };
        Integrand::new(
            "walsh",
            a.s(),
            BTreeMap::from([("index".to_string(), index), ("n".to_string(), n as f64)]),
            Some(if a.is_zero() { 1.0 } else { 0.0 }),
            Arc::new(move |x: &[f64]| {
                let ones: u32 = x
                    .iter()
                    .zip(&rows)
                    .map(|(&xi, &r)| (((xi * scale) as u64) & r).count_ones())
                    .sum();
                if ones.is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            }),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn exact_integral(&self) -> Option<f64> {
        self.exact_integral
    }

    #[inline]
    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.evaluator)(x)
    }
}

/// f(x) = c + g·x. Its n-digit cube averages equal its values at cube midpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineIntegrand {
    pub intercept: f64,
    pub gradient: Vec<f64>,
}

impl AffineIntegrand {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.intercept
            + self
                .gradient
                .iter()
                .zip(x)
                .map(|(g, xi)| g * xi)
                .sum::<f64>()
    }

    /// Euclidean Lipschitz constant ‖g‖₂.
    pub fn lipschitz(&self) -> f64 {
        self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt()
    }

    /// K·√S·2^{−n}.
    pub fn discretization_bound(&self, n: usize) -> f64 {
        self.lipschitz() * (self.gradient.len() as f64).sqrt() * (-(n as f64)).exp2()
    }

    pub fn to_integrand(&self) -> Integrand {
        let me = self.clone();
        let exact = self.intercept + 0.5 * self.gradient.iter().sum::<f64>();
        Integrand::new(
            "affine",
            self.gradient.len(),
            BTreeMap::from([("c".to_string(), self.intercept)]),
            Some(exact),
            Arc::new(move |x: &[f64]| me.eval(x)),
        )
    }
}

/// Arithmetic mean of `f` over `points`.
pub fn qmc_integrate(points: &[Vec<f64>], f: &Integrand) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::Invalid(
            "cannot integrate over an empty point set".into(),
        ));
    }
    if let Some(p) = points.iter().find(|p| p.len() != f.arity()) {
        return Err(Error::Shape(format!(
            "point of dimension {} for integrand of arity {}",
            p.len(),
            f.arity()
        )));
    }
    let acc: CompensatedSum = points.iter().map(|p| f.eval(p)).collect();
    Ok(acc.value() / points.len() as f64)
}

/// Mean of `f` over every point of `net`, optionally midpoint shifted.
///
/// Chunks are evaluated in parallel and merged in order, so the value is
/// independent of the thread count.
pub fn integrate_net(net: &LinearNet, f: &Integrand, midpoint: bool) -> Result<f64> {
    if net.s() != f.arity() {
        return Err(Error::Shape(format!(
            "net dimension {} for integrand of arity {}",
            net.s(),
            f.arity()
        )));
    }
    if net.dim() > crate::f2core::DEFAULT_ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "point enumeration",
            log2_size: net.dim(),
            cap: crate::f2core::DEFAULT_ENUMERATION_CAP,
        });
    }
    let total = 1u64 << net.dim();
    let chunk = 1u64 << INTEGRATE_CHUNK_LOG2;
    let partials: Vec<CompensatedSum> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = CompensatedSum::new();
            let mut x = vec![0.0; net.s()];
            net.for_each_in_range(c * chunk, ((c + 1) * chunk).min(total), |rows| {
                to_unit_cube_into(rows, net.n(), midpoint, &mut x);
                acc.add(f.eval(&x));
            });
            acc
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for p in &partials {
        acc.merge(p);
    }
    Ok(acc.value() / total as f64)
}

/// Unit-cube coordinates of every point of `net`, in enumeration order.
pub fn net_to_points(net: &LinearNet, midpoint: bool) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(1 << net.dim());
    for p in net.points()? {
        out.push(crate::f2core::to_unit_cube(&p, midpoint));
    }
    Ok(out)
}

/// |I_P(f) − I_{P,n}(f)| for affine f, where I_P evaluates at the points
/// (corners, or midpoints when `midpoint` is set) and I_{P,n} averages the
/// n-digit cube means, which for affine f are the midpoint values.
pub fn discretization_gap(f: &AffineIntegrand, points: &[NetPoint], midpoint: bool) -> Result<f64> {
    let first = points
        .first()
        .ok_or_else(|| Error::Invalid("empty point set".into()))?;
    if points.iter().any(|p| !p.same_shape(first)) || first.s() != f.gradient.len() {
        return Err(Error::Shape(
            "points and integrand disagree on dimension".into(),
        ));
    }
    let mut evaluated = CompensatedSum::new();
    let mut cube_means = CompensatedSum::new();
    for p in points {
        evaluated.add(f.eval(&crate::f2core::to_unit_cube(p, midpoint)));
        cube_means.add(f.eval(&crate::f2core::to_unit_cube(p, true)));
    }
    Ok((evaluated.value() - cube_means.value()).abs() / points.len() as f64)
}

/// Price from 2^20 midpoint-shifted Sobol points at 30 digits, Sobol dimensions 1..=S.
pub fn reference_price(params: &AsianParams) -> Result<f64> {
    let dims: Vec<usize> = (1..=params.steps).collect();
    reference_price_with(params, REFERENCE_LOG2_POINTS, &dims)
}

/// As [`reference_price`] with a chosen point count and Sobol dimensions.
pub fn reference_price_with(
    params: &AsianParams,
    log2_points: usize,
    dims: &[usize],
) -> Result<f64> {
    if dims.len() != params.steps {
        return Err(Error::Shape(format!(
            "{} Sobol dimensions for {} sampling times",
            dims.len(),
            params.steps
        )));
    }
    let f = asian_integrand(*params)?;
    let net = sobol_net_with_dims(log2_points, DEFAULT_DIGITS, dims)?;
    integrate_net(&net, &f, true)
}

/// One line of an error-curve table.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurveRow {
    pub d: usize,
    pub n_points: u64,
    /// Defined only for F₂-linear nets.
    pub wafom: Option<f64>,
    pub abs_error: f64,
    pub integrand: String,
    pub seed: Option<u64>,
}

pub const ERROR_CURVE_HEADER: &str = "d,N,wafom,abs_error,integrand,seed";

impl ErrorCurveRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.d,
            self.n_points,
            self.wafom.map(crate::fmt_f64).unwrap_or_default(),
            crate::fmt_f64(self.abs_error),
            self.integrand,
            self.seed.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

pub fn error_curve_csv(rows: &[ErrorCurveRow]) -> String {
    let mut out = format!("{ERROR_CURVE_HEADER}\n");
    for r in rows {
        writeln!(out, "{}", r.csv_row()).unwrap();
    }
    out
}

/// |I_P(f) − reference| for each net (midpoint shifted), sorted by d.
pub fn error_curve(
    nets: &[LinearNet],
    f: &Integrand,
    reference: f64,
) -> Result<Vec<ErrorCurveRow>> {
    let mut rows = nets
        .iter()
        .map(|net| {
            let estimate = integrate_net(net, f, true)?;
            Ok(ErrorCurveRow {
                d: net.dim(),
                n_points: 1u64 << net.dim(),
                wafom: Some(wafom_inversion(net)?.value),
                abs_error: (estimate - reference).abs(),
                integrand: f.name().to_string(),
                seed: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.d);
    Ok(rows)
}

/// Error-curve rows for plain point lists, keyed by their log₂ size.
pub fn error_curve_points(
    sets: &[(usize, Vec<Vec<f64>>)],
    f: &Integrand,
    reference: f64,
) -> Result<Vec<ErrorCurveRow>> {
    let mut rows = sets
        .iter()
        .map(|(d, pts)| {
            Ok(ErrorCurveRow {
                d: *d,
                n_points: pts.len() as u64,
                wafom: None,
                abs_error: (qmc_integrate(pts, f)? - reference).abs(),
                integrand: f.name().to_string(),
                seed: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.d);
    Ok(rows)
}

/// One Walsh coefficient of the discretized integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub index: u64,
    pub mu: u64,
    pub abs_coeff: f64,
}

/// |f̂_n(A)| for every A ∈ V, with f_n(B) approximated by f at the midpoint of cube I_B.
pub fn walsh_spectrum(f: &Integrand, n: usize, s: usize) -> Result<Vec<SpectrumRow>> {
    if f.arity() != s {
        return Err(Error::Shape(format!(
            "integrand arity {} differs from S={s}",
            f.arity()
        )));
    }
    if n * s > MAX_FOURIER_DIGITS {
        return Err(Error::Capacity {
            what: "Fourier table",
            log2_size: n * s,
            cap: MAX_FOURIER_DIGITS,
        });
    }
    let size = 1u64 << (n * s);
    let table: Vec<f64> = (0..size)
        .into_par_iter()
        .map(|i| {
            let p = NetPoint::from_index(i, n, s).expect("index within 2^{nS}");
            f.eval(&crate::f2core::to_unit_cube(&p, true))
        })
        .collect();
    let coeffs = fourier_transform(&table, n, s)?;
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| SpectrumRow {
            index: i as u64,
            mu: mu(&NetPoint::from_index(i as u64, n, s).expect("index within 2^{nS}")),
            abs_coeff: c.abs(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_mean() {
        let pts = vec![vec![0.1, 0.2], vec![0.7, 0.9], vec![0.4, 0.4]];
        assert_eq!(
            qmc_integrate(&pts, &Integrand::constant(7.0, 2)).unwrap(),
            7.0
        );
    }

    #[test]
    fn full_space_midpoints_average_to_half() {
        let net = LinearNet::full(3, 1).unwrap();
        let f = AffineIntegrand {
            intercept: 0.0,
            gradient: vec![1.0],
        }
        .to_integrand();
        assert_eq!(integrate_net(&net, &f, true).unwrap(), 0.5);
        let pts = net_to_points(&net, true).unwrap();
        assert_eq!(qmc_integrate(&pts, &f).unwrap(), 0.5);
    }

    #[test]
    fn integrate_errors() {
        let f = Integrand::constant(1.0, 2);
        assert!(qmc_integrate(&[], &f).is_err());
        assert!(matches!(
            qmc_integrate(&[vec![0.5]], &f),
            Err(Error::Shape(_))
        ));
        let net = LinearNet::full(2, 1).unwrap();
        assert!(matches!(
            integrate_net(&net, &f, true),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn gap_examples() {
        let net = LinearNet::full(4, 1).unwrap();
        let pts: Vec<_> = net.points().unwrap().collect();
        let constant = AffineIntegrand {
            intercept: 3.0,
            gradient: vec![0.0],
        };
        assert_eq!(discretization_gap(&constant, &pts, false).unwrap(), 0.0);
        let x = AffineIntegrand {
            intercept: 0.0,
            gradient: vec![1.0],
        };
        let corner = discretization_gap(&x, &pts, false).unwrap();
        assert_eq!(corner, 2f64.powi(-5));
        assert!(corner <= x.discretization_bound(4));
        assert!(discretization_gap(&x, &pts, true).unwrap() <= 1e-15);
    }

    #[test]
    fn walsh_integrand_values() {
        let a = NetPoint::from_bit_strings(&["10"]).unwrap();
        let f = Integrand::walsh(&a);
        assert_eq!(f.eval(&[0.1]), 1.0);
        assert_eq!(f.eval(&[0.6]), -1.0);
        assert_eq!(f.exact_integral(), Some(0.0));
    }

    #[test]
    fn spectrum_of_constant_and_character() {
        let rows = walsh_spectrum(&Integrand::constant(2.0, 2), 2, 2).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!(rows[0].abs_coeff, 2.0);
        assert!(rows[1..].iter().all(|r| r.abs_coeff == 0.0));

        let a = NetPoint::from_bit_strings(&["01", "10"]).unwrap();
        let rows = walsh_spectrum(&Integrand::walsh(&a), 2, 2).unwrap();
        for r in &rows {
            let expected = if r.index == a.to_index() { 1.0 } else { 0.0 };
            assert_eq!(r.abs_coeff, expected);
        }
        assert_eq!(rows[a.to_index() as usize].mu, 3);
    }

    #[test]
    fn error_curve_rows() {
        let nets = vec![
            LinearNet::full(3, 1).unwrap(),
            LinearNet::full(2, 1).unwrap(),
        ];
        let rows = error_curve(&nets, &Integrand::constant(1.5, 1), 1.5).unwrap();
        assert_eq!(rows.iter().map(|r| r.d).collect::<Vec<_>>(), vec![2, 3]);
        assert!(rows.iter().all(|r| r.abs_error == 0.0));
        let csv = error_curve_csv(&rows);
        assert_eq!(
            csv,
            "d,N,wafom,abs_error,integrand,seed\n2,4,0.0000000000000000e0,0.0000000000000000e0,constant,\n3,8,0.0000000000000000e0,0.0000000000000000e0,constant,\n"
        );
    }
}

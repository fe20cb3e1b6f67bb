//! Two-stage random search for low-WAFOM output transforms.
//!
//! Stage 1 draws random rank-d d×d matrices U′ and scores the net WU′ at
//! discretization degree d. Stage 2 keeps the best U′ and appends random
//! d×(n−d) blocks, scoring WU at the full degree n. The same primitive
//! polynomial is used for every trial.
//!
//! Every trial draws from its own generator seeded by mixing the master seed
//! with the stage and trial index, and minima are tie-broken by trial index,
//! so results do not depend on how trials are scheduled across threads.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::f2core::{BitMatrix, LinearNet};
use crate::netgen::{
    random_primitive_poly, PrimitivePoly, SequentialGenerator, TransformTable, MAX_DEGREE,
};
use crate::wafom::{sequential_sum, RowFactorTable, SequentialOptions};

pub const DEFAULT_STAGE1_TRIALS: usize = 5000;
pub const DEFAULT_STAGE2_TRIALS: usize = 2000;

const POLY_STREAM: u64 = 0;
const STAGE1_STREAM: u64 = 1;
const STAGE2_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub d: usize,
    pub n: usize,
    pub s: usize,
    pub stage1_trials: usize,
    pub stage2_trials: usize,
    pub master_seed: u64,
    /// Drawn with [`random_primitive_poly`] from the master seed when absent.
    pub poly: Option<PrimitivePoly>,
}

impl SearchConfig {
    /// Full-budget configuration: 5000 stage-1 and 2000 stage-2 trials.
    pub fn new(d: usize, n: usize, s: usize) -> Self {
        SearchConfig {
            d,
            n,
            s,
            stage1_trials: DEFAULT_STAGE1_TRIALS,
            stage2_trials: DEFAULT_STAGE2_TRIALS,
            master_seed: 0,
            poly: None,
        }
    }

    pub fn with_budget(mut self, stage1: usize, stage2: usize) -> Self {
        self.stage1_trials = stage1;
        self.stage2_trials = stage2;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 || self.d > MAX_DEGREE {
            return Err(Error::Invalid(format!(
                "d={} outside 1..={MAX_DEGREE}",
                self.d
            )));
        }
        if self.d > self.n {
            return Err(Error::Invalid(format!("d={} exceeds n={}", self.d, self.n)));
        }
        if self.n > crate::f2core::MAX_DIGITS {
            return Err(Error::Invalid(format!(
                "n={} exceeds {}",
                self.n,
                crate::f2core::MAX_DIGITS
            )));
        }
        if self.s == 0 {
            return Err(Error::Invalid("S must be positive".into()));
        }
        if self.stage1_trials == 0 || self.stage2_trials == 0 {
            return Err(Error::Invalid("trial counts must be at least 1".into()));
        }
        if let Some(p) = &self.poly {
            if p.degree() != self.d {
                return Err(Error::Invalid(format!(
                    "polynomial degree {} differs from d={}",
                    p.degree(),
                    self.d
                )));
            }
        }
        Ok(())
    }

    /// The configured polynomial, or the one drawn from the master seed.
    pub fn resolve_poly(&self) -> Result<PrimitivePoly> {
        match self.poly {
            Some(p) => Ok(p),
            None => random_primitive_poly(self.d, &mut trial_rng(self.master_seed, POLY_STREAM, 0)),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for one trial: ChaCha8 seeded by splitmix64(master, stream, trial).
pub fn trial_rng(master_seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let seed = splitmix64(splitmix64(splitmix64(master_seed) ^ stream) ^ trial);
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rows×cols matrix of rank `rows`, by resampling until full rank.
pub fn random_full_rank_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<BitMatrix> {
    if rows > cols {
        return Err(Error::Invalid(format!(
            "cannot have rank {rows} with {cols} columns"
        )));
    }
    loop {
        let m = random_matrix(rows, cols, rng)?;
        if m.rank() == rows {
            return Ok(m);
        }
    }
}

fn random_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Result<BitMatrix> {
    let mask = if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    };
    BitMatrix::from_rows(cols, (0..rows).map(|_| rng.gen::<u64>() & mask).collect())
}

/// The d×d matrix drawn by stage-1 trial `trial`.
pub fn stage1_candidate(config: &SearchConfig, trial: usize) -> Result<BitMatrix> {
    let mut rng = trial_rng(config.master_seed, STAGE1_STREAM, trial as u64);
    random_full_rank_matrix(config.d, config.d, &mut rng)
}

/// The d×n matrix evaluated by stage-2 trial `trial`: U′ followed by a random
/// d×(n−d) block, or by zeros for trial 0.
pub fn stage2_candidate(
    config: &SearchConfig,
    u_prime: &BitMatrix,
    trial: usize,
) -> Result<BitMatrix> {
    let extra = config.n - config.d;
    if extra == 0 {
        return Ok(u_prime.clone());
    }
    if trial == 0 {
        return u_prime.zero_extend(extra);
    }
    let mut rng = trial_rng(config.master_seed, STAGE2_STREAM, trial as u64);
    u_prime.hconcat(&random_matrix(config.d, extra, &mut rng)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage1Outcome {
    pub best: BitMatrix,
    pub best_trial: usize,
    pub best_wafom: f64,
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_u: BitMatrix,
    pub best_trial: usize,
    pub best_wafom: f64,
    pub stage1_best: BitMatrix,
    pub stage1_best_wafom: f64,
    pub poly: PrimitivePoly,
    pub s: usize,
    pub stage1_trace: Vec<f64>,
    pub stage2_trace: Vec<f64>,
}

impl SearchResult {
    pub fn d(&self) -> usize {
        self.poly.degree()
    }

    pub fn n(&self) -> usize {
        self.best_u.ncols()
    }

    pub fn generator(&self) -> SequentialGenerator {
        SequentialGenerator::new(self.poly, self.best_u.clone(), self.s)
            .expect("search only keeps rank-d transforms")
    }

    pub fn net(&self) -> LinearNet {
        self.generator().to_linear_net().expect("rank-d generator")
    }

    /// `stage,trial,wafom`, stage 1 rows first.
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("stage,trial,wafom\n");
        for (stage, trace) in [(1, &self.stage1_trace), (2, &self.stage2_trace)] {
            for (i, w) in trace.iter().enumerate() {
                writeln!(out, "{stage},{i},{}", crate::fmt_f64(*w)).unwrap();
            }
        }
        out
    }
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

fn score(poly: PrimitivePoly, u: BitMatrix, s: usize, table: &RowFactorTable) -> Result<f64> {
    let transform = TransformTable::new(&u);
    let generator = SequentialGenerator::new(poly, u, s)?;
    Ok(sequential_sum(
        &generator,
        table,
        &transform,
        SequentialOptions::default(),
    ))
}

pub fn stage1(config: &SearchConfig, poly: PrimitivePoly) -> Result<Stage1Outcome> {
    config.validate()?;
    let table = RowFactorTable::new(config.d);
    let scored: Vec<(BitMatrix, f64)> = (0..config.stage1_trials)
        .into_par_iter()
        .map(|i| {
            let u = stage1_candidate(config, i)?;
            let w = score(poly, u.clone(), config.s, &table)?;
            Ok((u, w))
        })
        .collect::<Result<_>>()?;
    let trace: Vec<f64> = scored.iter().map(|(_, w)| *w).collect();
    let best_trial = argmin(&trace);
    Ok(Stage1Outcome {
        best: scored[best_trial].0.clone(),
        best_trial,
        best_wafom: trace[best_trial],
        trace,
    })
}

pub fn stage2(
    config: &SearchConfig,
    poly: PrimitivePoly,
    stage1: &Stage1Outcome,
) -> Result<SearchResult> {
    config.validate()?;
    let u_prime = &stage1.best;
    if u_prime.nrows() != config.d || u_prime.ncols() != config.d || u_prime.rank() != config.d {
        return Err(Error::Rank {
            expected: config.d,
            found: u_prime.rank(),
        });
    }
    let trials = if config.n == config.d {
        1
    } else {
        config.stage2_trials
    };
    let table = RowFactorTable::new(config.n);
    let trace: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            score(
                poly,
                stage2_candidate(config, u_prime, i)?,
                config.s,
                &table,
            )
        })
        .collect::<Result<_>>()?;
    let best_trial = argmin(&trace);
    Ok(SearchResult {
        best_u: stage2_candidate(config, u_prime, best_trial)?,
        best_trial,
        best_wafom: trace[best_trial],
        stage1_best: u_prime.clone(),
        stage1_best_wafom: stage1.best_wafom,
        poly,
        s: config.s,
        stage1_trace: stage1.trace.clone(),
        stage2_trace: trace,
    })
}

/// Stage 1 then stage 2; deterministic given the configuration.
pub fn search(config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let poly = config.resolve_poly()?;
    let first = stage1(config, poly)?;
    stage2(config, poly, &first)
}

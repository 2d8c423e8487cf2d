//! Zero-sum game solving by exact rational simplex.
//!
//! The column player's LP (max_ν min_x Σ_j P[x][j]·ν_j) is solved through
//! the shifted covering form: with P̃ = P + 1 > 0, minimize 1ᵀu subject to
//! P̃u ≥ 1, u ≥ 0; then the game value of P̃ is 1/Σu and ν = u·(1/Σu). The
//! row strategy falls out of the dual multipliers. Two-phase dense simplex
//! with Bland's rule: deterministic, anti-cycling, and exact over
//! rationals, so the reported duality gap is literally zero.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct GameSolution {
    /// Game value of the payoff matrix: max_ν min_x.
    pub value: BigRational,
    /// Column-player optimal mixture, one weight per column.
    pub col_strategy: Vec<BigRational>,
    /// Row-player optimal mixture, one weight per row.
    pub row_strategy: Vec<BigRational>,
    /// max_j (μᵀP)_j − min_x (Pν)_x, recomputed from the returned
    /// strategies; zero at an exact optimum.
    pub gap: BigRational,
    pub pivots: u64,
}

impl GameSolution {
    pub fn value_f64(&self) -> f64 {
        rational_to_f64(&self.value)
    }

    pub fn gap_f64(&self) -> f64 {
        rational_to_f64(&self.gap)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Solve the zero-sum game with payoffs to the column player. Rows are the
/// adversary's pure choices, columns the player's. Entries must lie in a
/// bounded range (success probabilities in [0,1] here).
pub fn solve_zero_sum(payoff: &[Vec<BigRational>]) -> Result<GameSolution> {
    let num_rows = payoff.len();
    if num_rows == 0 {
        return Err(Error::LpFailed("empty payoff matrix"));
    }
    let num_cols = payoff[0].len();
    if num_cols == 0 || payoff.iter().any(|r| r.len() != num_cols) {
        return Err(Error::LpFailed("ragged or empty payoff matrix"));
    }
    let one = BigRational::one();

    // Covering LP on the shifted matrix.
    let shifted: Vec<Vec<BigRational>> = payoff
        .iter()
        .map(|row| row.iter().map(|e| e + &one).collect())
        .collect();
    let (u, y, pivots) = solve_covering(&shifted)?;

    let total: BigRational = u.iter().cloned().sum();
    if !total.is_positive() {
        return Err(Error::LpFailed("covering optimum is not positive"));
    }
    let shifted_value = total.recip();
    let col_strategy: Vec<BigRational> = u.iter().map(|ui| ui * &shifted_value).collect();
    let row_strategy: Vec<BigRational> = y.iter().map(|yi| yi * &shifted_value).collect();

    // Certificate: evaluate both strategies against the original payoff.
    let primal = (0..num_rows)
        .map(|x| {
            (0..num_cols)
                .map(|j| &payoff[x][j] * &col_strategy[j])
                .sum::<BigRational>()
        })
        .min()
        .expect("nonempty rows");
    let dual = (0..num_cols)
        .map(|j| {
            (0..num_rows)
                .map(|x| &payoff[x][j] * &row_strategy[x])
                .sum::<BigRational>()
        })
        .max()
        .expect("nonempty cols");
    let gap = &dual - &primal;
    if gap.is_negative() {
        return Err(Error::LpFailed("negative duality gap; solver bug"));
    }
    Ok(GameSolution {
        value: primal,
        col_strategy,
        row_strategy,
        gap,
        pivots,
    })
}

/// min 1ᵀu s.t. A·u ≥ 1, u ≥ 0 with A > 0. Returns (u*, dual y*, pivots).
fn solve_covering(a: &[Vec<BigRational>]) -> Result<(Vec<BigRational>, Vec<BigRational>, u64)> {
    let nx = a.len(); // constraints
    let nj = a[0].len(); // structural variables
                         // Column layout: [u_0..u_{nj-1} | s_0..s_{nx-1} | a_0..a_{nx-1} | rhs].
    let surplus0 = nj;
    let art0 = nj + nx;
    let width = nj + 2 * nx + 1;
    let rhs_col = width - 1;

    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(nx);
    for (x, row) in a.iter().enumerate() {
        let mut t = vec![BigRational::zero(); width];
        for (j, e) in row.iter().enumerate() {
            t[j] = e.clone();
        }
        t[surplus0 + x] = -BigRational::one();
        t[art0 + x] = BigRational::one();
        t[rhs_col] = BigRational::one();
        tab.push(t);
    }
    let mut basis: Vec<usize> = (0..nx).map(|x| art0 + x).collect();
    let mut pivots = 0u64;

    // Phase 1: minimize the artificial sum. Reduced-cost row r_v = c_v − z_v
    // with c = 1 on artificials.
    let mut obj = vec![BigRational::zero(); width];
    for o in obj.iter_mut().take(art0 + nx).skip(art0) {
        *o = BigRational::one();
    }
    for row in &tab {
        for (o, e) in obj.iter_mut().zip(row.iter()) {
            *o -= e;
        }
    }
    run_simplex(&mut tab, &mut obj, &mut basis, width, &mut pivots)?;
    // Feasible iff the artificial objective reached 0: obj rhs = −z.
    if !obj[rhs_col].is_zero() {
        return Err(Error::LpFailed("phase 1 did not reach zero; infeasible"));
    }
    // Drive any basic artificial out or confirm its row is redundant.
    for r in 0..nx {
        if basis[r] >= art0 {
            if let Some(enter) = (0..art0).find(|&v| !tab[r][v].is_zero()) {
                pivot(&mut tab, &mut obj, &mut basis, r, enter, width);
                pivots += 1;
            }
        }
    }

    // Phase 2: minimize 1ᵀu. Artificial columns are frozen out by cost ∞
    // semantics: simply exclude them from entering (see run_simplex bound).
    let mut obj2 = vec![BigRational::zero(); width];
    for o in obj2.iter_mut().take(nj) {
        *o = BigRational::one();
    }
    for (r, &b) in basis.iter().enumerate() {
        if b < nj {
            let scale = obj2[b].clone();
            if !scale.is_zero() {
                for v in 0..width {
                    let delta = &scale * &tab[r][v];
                    obj2[v] -= delta;
                }
            }
        }
    }
    run_simplex_bounded(&mut tab, &mut obj2, &mut basis, art0, width, &mut pivots)?;

    // Extract u and the duals y_x = reduced cost of surplus column x.
    let mut u = vec![BigRational::zero(); nj];
    for (r, &b) in basis.iter().enumerate() {
        if b < nj {
            u[b] = tab[r][rhs_col].clone();
        }
    }
    let y: Vec<BigRational> = (0..nx).map(|x| obj2[surplus0 + x].clone()).collect();
    Ok((u, y, pivots))
}

fn run_simplex(
    tab: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    basis: &mut [usize],
    width: usize,
    pivots: &mut u64,
) -> Result<()> {
    run_simplex_bounded(tab, obj, basis, width - 1, width, pivots)
}

/// Bland's rule simplex; only columns < enter_bound may enter the basis.
fn run_simplex_bounded(
    tab: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    basis: &mut [usize],
    enter_bound: usize,
    width: usize,
    pivots: &mut u64,
) -> Result<()> {
    let rhs_col = width - 1;
    loop {
        // Entering: smallest index with negative reduced cost.
        let Some(enter) = (0..enter_bound).find(|&v| obj[v].is_negative()) else {
            return Ok(());
        };
        // Leaving: minimum ratio, ties by smallest basis variable.
        let mut leave: Option<(usize, BigRational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[rhs_col] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((leave_row, _)) = leave else {
            return Err(Error::LpFailed("unbounded"));
        };
        pivot(tab, obj, basis, leave_row, enter, width);
        *pivots += 1;
        if *pivots > 2_000_000 {
            return Err(Error::LpFailed("pivot limit exceeded"));
        }
    }
}

fn pivot(
    tab: &mut [Vec<BigRational>],
    obj: &mut [BigRational],
    basis: &mut [usize],
    row: usize,
    col: usize,
    width: usize,
) {
    let pivot_val = tab[row][col].clone();
    for entry in tab[row].iter_mut() {
        *entry /= &pivot_val;
    }
    for r in 0..tab.len() {
        if r == row {
            continue;
        }
        let factor = tab[r][col].clone();
        if factor.is_zero() {
            continue;
        }
        for v in 0..width {
            let delta = &factor * &tab[row][v];
            tab[r][v] -= delta;
        }
    }
    let factor = obj[col].clone();
    if !factor.is_zero() {
        for v in 0..width {
            let delta = &factor * &tab[row][v];
            obj[v] -= delta;
        }
    }
    basis[row] = col;
}

/// Exact rational from a probability-like f64 (which is already dyadic).
pub fn rational_from_f64(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or(Error::LpFailed("non-finite payoff entry"))
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

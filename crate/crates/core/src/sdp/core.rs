//! Block-diagonal SDP with free variables, solved by an infeasible
//! primal-dual path-following method (HKM direction, Mehrotra
//! predictor-corrector).
//!
//! ```text
//! (P)  min  C•X + c_zᵀz   s.t.  A_i•X + (E z)_i = b_i,  X ⪰ 0
//! (D)  max  bᵀy           s.t.  Σ y_i A_i + S = C,  Eᵀy = c_z,  S ⪰ 0
//! ```

use nalgebra::{DMatrix, DVector};

use crate::par::{self, ExecMode};

use super::{SdpError, SolveStatus, SolverOptions};

/// One upper-triangle entry (`row ≤ col`) of a symmetric block matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEntry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl SymEntry {
    pub fn new(block: usize, row: usize, col: usize, value: f64) -> Self {
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        Self { block, row, col, value }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CoreSdp {
    pub block_sizes: Vec<usize>,
    pub c: Vec<SymEntry>,
    /// One sparse symmetric matrix per constraint.
    pub a: Vec<Vec<SymEntry>>,
    pub b: Vec<f64>,
    /// Sparse free-variable coefficients `(column, value)` per constraint.
    pub e: Vec<Vec<(usize, f64)>>,
    pub c_z: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct CoreSolution {
    pub status: SolveStatus,
    pub x: Vec<DMatrix<f64>>,
    pub z: DVector<f64>,
    pub y: DVector<f64>,
    pub s: Vec<DMatrix<f64>>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub relative_gap: f64,
    pub iterations: usize,
}

impl CoreSdp {
    pub fn new(block_sizes: Vec<usize>, num_free: usize) -> Self {
        Self { block_sizes, c_z: vec![0.0; num_free], ..Self::default() }
    }

    pub fn num_constraints(&self) -> usize {
        self.a.len()
    }

    pub fn num_free(&self) -> usize {
        self.c_z.len()
    }

    /// Appends `A•X + Σ e_k z_k = rhs`.
    pub fn push_constraint(&mut self, entries: Vec<SymEntry>, free: Vec<(usize, f64)>, rhs: f64) {
        self.a.push(entries);
        self.e.push(free);
        self.b.push(rhs);
    }

    pub fn free_matrix(&self) -> DMatrix<f64> {
        let mut e = DMatrix::zeros(self.a.len(), self.num_free());
        for (i, row) in self.e.iter().enumerate() {
            for &(k, v) in row {
                e[(i, k)] += v;
            }
        }
        e
    }

    pub fn validate(&self) -> Result<(), SdpError> {
        let check = |e: &SymEntry| e.block < self.block_sizes.len() && e.col < self.block_sizes[e.block] && e.row <= e.col;
        if !self.c.iter().chain(self.a.iter().flatten()).all(check) {
            return Err(SdpError::Malformed("entry outside its block".into()));
        }
        let p = self.num_free();
        if self.b.len() != self.a.len() || self.e.len() != self.a.len() || self.e.iter().flatten().any(|&(k, _)| k >= p) {
            return Err(SdpError::Malformed("inconsistent constraint counts".into()));
        }
        Ok(())
    }
}

/// Symmetric dense matrix of a sparse upper-triangle list.
fn dense_block(entries: impl Iterator<Item = (usize, usize, f64)>, s: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(s, s);
    for (i, j, v) in entries {
        m[(i, j)] += v;
        if i != j {
            m[(j, i)] += v;
        }
    }
    m
}

fn sym(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

fn frob(blocks: &[DMatrix<f64>]) -> f64 {
    blocks.iter().map(|b| b.norm_squared()).sum::<f64>().sqrt()
}

fn dot(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

/// Largest `α ≤ 1` with `X + α ΔX ⪰ 0`, given the Cholesky factor of `X`.
fn max_step(l: &DMatrix<f64>, dx: &DMatrix<f64>) -> f64 {
    let s = l.nrows();
    if s == 0 {
        return 1.0;
    }
    let linv = l.clone().solve_lower_triangular(&DMatrix::identity(s, s)).unwrap_or_else(|| DMatrix::identity(s, s));
    let w = &linv * dx * linv.transpose();
    let lam = sym(w).symmetric_eigenvalues().min();
    if lam >= 0.0 {
        1.0
    } else {
        (-1.0 / lam).min(1.0)
    }
}

fn cholesky(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.l())
}

struct Structure {
    sizes: Vec<usize>,
    /// Per constraint: entries grouped by block.
    by_block: Vec<Vec<(usize, Vec<(usize, usize, f64)>)>>,
}

impl Structure {
    fn new(sdp: &CoreSdp) -> Self {
        let nb = sdp.block_sizes.len();
        let by_block = sdp
            .a
            .iter()
            .map(|row| {
                let mut groups: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); nb];
                for e in row {
                    groups[e.block].push((e.row, e.col, e.value));
                    if e.row != e.col {
                        groups[e.block].push((e.col, e.row, e.value));
                    }
                }
                groups.into_iter().enumerate().filter(|(_, g)| !g.is_empty()).collect()
            })
            .collect();
        Self { sizes: sdp.block_sizes.clone(), by_block }
    }

    /// `𝒜ᵀy = Σ y_i A_i`.
    fn adjoint(&self, y: &DVector<f64>) -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = self.sizes.iter().map(|&s| DMatrix::zeros(s, s)).collect();
        for (i, groups) in self.by_block.iter().enumerate() {
            for (b, entries) in groups {
                for &(r, c, v) in entries {
                    out[*b][(r, c)] += y[i] * v;
                }
            }
        }
        out
    }

    /// `𝒜(Y)` for dense, not necessarily symmetric `Y`.
    fn apply(&self, y: &[DMatrix<f64>]) -> DVector<f64> {
        DVector::from_iterator(
            self.by_block.len(),
            self.by_block.iter().map(|groups| {
                groups
                    .iter()
                    .map(|(b, entries)| entries.iter().map(|&(r, c, v)| v * y[*b][(r, c)]).sum::<f64>())
                    .sum()
            }),
        )
    }

    /// HKM Schur complement `M_ij = tr(A_i X A_j S⁻¹)`.
    fn schur(&self, x: &[DMatrix<f64>], sinv: &[DMatrix<f64>], mode: ExecMode) -> DMatrix<f64> {
        let m = self.by_block.len();
        let rows = par::map_range(mode, m, |i| {
            // G = S⁻¹ A_i X per block, then M_ij = Σ A_j[c,d] G[d,c].
            let gs: Vec<(usize, DMatrix<f64>)> = self.by_block[i]
                .iter()
                .map(|(b, entries)| {
                    let s = self.sizes[*b];
                    let mut g = DMatrix::zeros(s, s);
                    for &(r, c, v) in entries {
                        g.ger(v, &sinv[*b].column(r), &x[*b].column(c), 1.0);
                    }
                    (*b, g)
                })
                .collect();
            let mut row = vec![0.0; m];
            for (j, slot) in row.iter_mut().enumerate().skip(i) {
                let mut acc = 0.0;
                for (bj, entries) in &self.by_block[j] {
                    if let Some((_, g)) = gs.iter().find(|(b, _)| b == bj) {
                        acc += entries.iter().map(|&(c, d, v)| v * g[(d, c)]).sum::<f64>();
                    }
                }
                *slot = acc;
            }
            row
        });
        let mut out = DMatrix::zeros(m, m);
        for (i, row) in rows.into_iter().enumerate() {
            for j in i..m {
                out[(i, j)] = row[j];
                out[(j, i)] = row[j];
            }
        }
        out
    }
}

#[derive(Clone)]
struct Iterate {
    x: Vec<DMatrix<f64>>,
    z: DVector<f64>,
    y: DVector<f64>,
    s: Vec<DMatrix<f64>>,
}

struct Direction {
    dx: Vec<DMatrix<f64>>,
    dz: DVector<f64>,
    dy: DVector<f64>,
    ds: Vec<DMatrix<f64>>,
}

/// Null-space factorization of `[[M, E], [Eᵀ, 0]]` with `E = Q₁R` and
/// `Q₂` an orthonormal basis of `null(Eᵀ)`.
struct FreeSplit {
    q1: DMatrix<f64>,
    q2: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl FreeSplit {
    fn new(e: &DMatrix<f64>) -> Self {
        let (m, p) = e.shape();
        let qr = e.clone().qr();
        let q1 = qr.q();
        let r = qr.r();
        let mut aug = DMatrix::zeros(m, p + m);
        aug.view_mut((0, 0), (m, p)).copy_from(&q1);
        aug.view_mut((0, p), (m, m)).copy_from(&DMatrix::identity(m, m));
        let full = aug.qr().q();
        let q2 = full.columns(p, m - p).into_owned();
        Self { q1, q2, r }
    }
}

struct Newton<'a> {
    schur: DMatrix<f64>,
    chol: nalgebra::Cholesky<f64, nalgebra::Dyn>,
    /// Symmetric diagonal scaling applied before factorizing.
    scaling: DVector<f64>,
    split: Option<&'a FreeSplit>,
}

impl<'a> Newton<'a> {
    fn new(schur: DMatrix<f64>, split: Option<&'a FreeSplit>) -> Option<Self> {
        let mut reduced = match split {
            Some(sp) => sym(sp.q2.transpose() * &schur * &sp.q2),
            None => schur.clone(),
        };
        let n = reduced.nrows();
        let scaling = DVector::from_iterator(n, (0..n).map(|i| 1.0 / reduced[(i, i)].abs().sqrt().max(1e-150)));
        for i in 0..n {
            for j in 0..n {
                reduced[(i, j)] *= scaling[i] * scaling[j];
            }
        }
        let mut shift = 0.0;
        for attempt in 0..10 {
            if let Some(chol) = reduced.clone().cholesky() {
                if shift > 0.0 {
                    log::debug!("Schur complement regularized by {shift:.1e}");
                }
                return Some(Self { schur, chol, scaling, split });
            }
            let next = 1e-14 * 10f64.powi(attempt);
            for i in 0..n {
                reduced[(i, i)] += next - shift;
            }
            shift = next;
        }
        None
    }

    fn reduced_solve(&self, r: DVector<f64>) -> DVector<f64> {
        let scaled = r.component_mul(&self.scaling);
        self.chol.solve(&scaled).component_mul(&self.scaling)
    }

    fn solve(&self, r1: &DVector<f64>, r2: &DVector<f64>) -> Option<(DVector<f64>, DVector<f64>)> {
        let (dy, dz) = match self.split {
            None => (self.reduced_solve(r1.clone()), DVector::zeros(0)),
            Some(sp) => {
                let a = sp.r.transpose().solve_lower_triangular(r2)?;
                let y1 = &sp.q1 * a;
                let w = self.reduced_solve(sp.q2.transpose() * (r1 - &self.schur * &y1));
                let dy = y1 + &sp.q2 * w;
                let t = sp.q1.transpose() * (r1 - &self.schur * &dy);
                (dy, sp.r.solve_upper_triangular(&t)?)
            }
        };
        dy.iter().chain(dz.iter()).all(|v| v.is_finite()).then_some((dy, dz))
    }
}

/// Solves the core problem. The problem must already be presolved
/// (`E` of full column rank).
///
/// A numerical breakdown after the first iteration ends the run with the
/// best iterate found and status [`SolveStatus::MaxIter`].
pub fn solve_core(sdp: &CoreSdp, opts: &SolverOptions) -> Result<CoreSolution, SdpError> {
    sdp.validate()?;
    let st = Structure::new(sdp);
    let m = sdp.num_constraints();
    let nb = sdp.block_sizes.len();
    let n_total: usize = sdp.block_sizes.iter().sum();
    let c_blocks: Vec<DMatrix<f64>> = (0..nb)
        .map(|b| {
            dense_block(sdp.c.iter().filter(|e| e.block == b).map(|e| (e.row, e.col, e.value)), sdp.block_sizes[b])
        })
        .collect();
    let b = DVector::from_column_slice(&sdp.b);
    let c_z = DVector::from_column_slice(&sdp.c_z);
    let e = &sdp.free_matrix();
    if e.ncols() > m {
        return Err(SdpError::Malformed("more free variables than constraints".into()));
    }
    let split = (e.ncols() > 0).then(|| FreeSplit::new(e));

    let norm_b = b.norm();
    let norm_c = (frob(&c_blocks).powi(2) + c_z.norm_squared()).sqrt();
    let a_norms: Vec<f64> = sdp
        .a
        .iter()
        .map(|row| row.iter().map(|e| e.value * e.value * if e.row == e.col { 1.0 } else { 2.0 }).sum::<f64>().sqrt())
        .collect();
    let max_a = a_norms.iter().cloned().fold(0.0, f64::max);

    let mut it = {
        let mut xi: f64 = 10.0_f64.max((n_total as f64).sqrt());
        for i in 0..m {
            xi = xi.max(n_total as f64 * (1.0 + sdp.b[i].abs()) / (1.0 + a_norms[i]));
        }
        let eta = 10.0_f64.max((n_total as f64).sqrt()).max(norm_c).max(max_a);
        Iterate {
            x: sdp.block_sizes.iter().map(|&s| DMatrix::identity(s, s) * xi).collect(),
            z: DVector::zeros(sdp.num_free()),
            y: DVector::zeros(m),
            s: sdp.block_sizes.iter().map(|&s| DMatrix::identity(s, s) * eta).collect(),
        }
    };

    let residuals = |it: &Iterate| {
        let rp = &b - st.apply(&it.x) - e * &it.z;
        let aty = st.adjoint(&it.y);
        let rd: Vec<DMatrix<f64>> = (0..nb).map(|k| &c_blocks[k] - &aty[k] - &it.s[k]).collect();
        let rz = &c_z - e.transpose() * &it.y;
        (rp, rd, rz)
    };
    let objectives = |it: &Iterate| (dot(&c_blocks, &it.x) + c_z.dot(&it.z), b.dot(&it.y));
    let measures = |it: &Iterate| {
        let (rp, rd, rz) = residuals(it);
        let (pobj, dobj) = objectives(it);
        let pinf = rp.norm() / (1.0 + norm_b);
        let dinf = (frob(&rd).powi(2) + rz.norm_squared()).sqrt() / (1.0 + norm_c);
        let gap = (pobj - dobj).abs().max(dot(&it.x, &it.s).abs()) / (1.0 + pobj.abs() + dobj.abs());
        (pinf, dinf, gap)
    };

    let mut status = SolveStatus::MaxIter;
    let mut iterations = 0;
    let mut best = (f64::INFINITY, it.clone());
    let mut since_best = 0;
    let mut last_infeas = f64::INFINITY;
    let mut growth = 0;

    loop {
        let (rp, rd, rz) = residuals(&it);
        let (pinf, dinf, gap) = measures(&it);
        log::trace!("iter {iterations}: pinf {pinf:.2e} dinf {dinf:.2e} gap {gap:.2e}");
        let merit = pinf.max(dinf).max(gap);
        if merit < best.0 {
            best = (merit, it.clone());
            since_best = 0;
        } else {
            since_best += 1;
        }
        if pinf <= opts.tol && dinf <= opts.tol && gap <= opts.tol {
            status = SolveStatus::Optimal;
            break;
        }
        if iterations >= opts.max_iter || since_best >= 15 {
            break;
        }
        let scale = frob(&it.x).max(it.y.norm()).max(it.z.norm());
        if scale > opts.divergence {
            status = SolveStatus::InfeasibleSuspect;
            break;
        }
        let infeas = pinf.max(dinf);
        if infeas > 0.9 * last_infeas && infeas > opts.tol && scale > 1e8 {
            growth += 1;
            if growth >= 5 {
                status = SolveStatus::InfeasibleSuspect;
                break;
            }
        } else {
            growth = 0;
        }
        last_infeas = infeas.min(last_infeas);
        iterations += 1;

        let breakdown = |what: &'static str| SdpError::Factorization { iteration: iterations, what };
        let factors = (|| {
            let lx: Vec<DMatrix<f64>> = it.x.iter().map(cholesky).collect::<Option<_>>().ok_or(breakdown("X"))?;
            let ls: Vec<DMatrix<f64>> = it.s.iter().map(cholesky).collect::<Option<_>>().ok_or(breakdown("S"))?;
            Ok::<_, SdpError>((lx, ls))
        })();
        let (lx, ls) = match factors {
            Ok(f) => f,
            Err(err) if iterations == 1 => return Err(err),
            Err(err) => {
                log::warn!("{err}; stopping");
                break;
            }
        };
        let sinv: Vec<DMatrix<f64>> = ls
            .iter()
            .map(|l| {
                let s = l.nrows();
                let li = l.clone().solve_lower_triangular(&DMatrix::identity(s, s)).unwrap_or_else(|| DMatrix::identity(s, s));
                sym(li.transpose() * li)
            })
            .collect();
        let mu = dot(&it.x, &it.s) / n_total.max(1) as f64;

        let schur = st.schur(&it.x, &sinv, opts.mode);
        let Some(newton) = Newton::new(schur, split.as_ref()) else {
            if iterations == 1 {
                return Err(breakdown("Schur complement"));
            }
            log::warn!("Schur complement factorization failed at iteration {iterations}; stopping");
            break;
        };

        // ΔX = σμS⁻¹ − X − sym(X ΔS S⁻¹) − corr with ΔS = R_d − 𝒜ᵀΔy.
        let x_rd_sinv: Vec<DMatrix<f64>> = (0..nb).map(|k| sym(&it.x[k] * &rd[k] * &sinv[k])).collect();
        let direction = |sigma_mu: f64, corr: Option<&[DMatrix<f64>]>| -> Option<Direction> {
            let target: Vec<DMatrix<f64>> = (0..nb)
                .map(|k| {
                    let mut r = &sinv[k] * sigma_mu - &it.x[k];
                    if let Some(c) = corr {
                        r -= &c[k];
                    }
                    r
                })
                .collect();
            let base: Vec<DMatrix<f64>> = (0..nb).map(|k| &target[k] - &x_rd_sinv[k]).collect();
            let rhs = &rp - st.apply(&base);
            let (dy, dz) = newton.solve(&rhs, &rz)?;
            let aty = st.adjoint(&dy);
            let ds: Vec<DMatrix<f64>> = (0..nb).map(|k| &rd[k] - &aty[k]).collect();
            let dx: Vec<DMatrix<f64>> = (0..nb).map(|k| &target[k] - sym(&it.x[k] * &ds[k] * &sinv[k])).collect();
            Some(Direction { dx, dz, dy, ds })
        };
        let steps = |d: &Direction| -> (f64, f64) {
            let ap = (0..nb).map(|k| max_step(&lx[k], &d.dx[k])).fold(1.0, f64::min);
            let ad = (0..nb).map(|k| max_step(&ls[k], &d.ds[k])).fold(1.0, f64::min);
            (ap, ad)
        };

        let Some(pred) = direction(0.0, None) else {
            log::warn!("predictor failed at iteration {iterations}; stopping");
            break;
        };
        let (ap, ad) = steps(&pred);
        let mu_aff = (0..nb)
            .map(|k| (&it.x[k] + &pred.dx[k] * ap).dot(&(&it.s[k] + &pred.ds[k] * ad)))
            .sum::<f64>()
            / n_total.max(1) as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let corr: Vec<DMatrix<f64>> = (0..nb).map(|k| sym(&pred.dx[k] * &pred.ds[k] * &sinv[k])).collect();
        let Some(d) = direction(sigma * mu, Some(&corr)) else {
            log::warn!("corrector failed at iteration {iterations}; stopping");
            break;
        };
        let (ap, ad) = steps(&d);
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let (mut ap, mut ad) = ((gamma * ap).min(1.0), (gamma * ad).min(1.0));
        let mut accepted = false;
        for _ in 0..30 {
            let x: Vec<DMatrix<f64>> = (0..nb).map(|k| sym(&it.x[k] + &d.dx[k] * ap)).collect();
            let s: Vec<DMatrix<f64>> = (0..nb).map(|k| sym(&it.s[k] + &d.ds[k] * ad)).collect();
            let x_ok = x.iter().all(|m| cholesky(m).is_some());
            let s_ok = s.iter().all(|m| cholesky(m).is_some());
            if x_ok && s_ok {
                it.x = x;
                it.s = s;
                it.z += &d.dz * ap;
                it.y += &d.dy * ad;
                accepted = true;
                break;
            }
            if !x_ok {
                ap *= 0.8;
            }
            if !s_ok {
                ad *= 0.8;
            }
        }
        if !accepted {
            log::warn!("no positive definite step at iteration {iterations}; stopping");
            break;
        }
    }

    if status != SolveStatus::Optimal {
        let (pinf, dinf, gap) = measures(&it);
        if best.0 < pinf.max(dinf).max(gap) {
            it = best.1;
        }
    }
    let (pinf, dinf, gap) = measures(&it);
    if status == SolveStatus::MaxIter && pinf <= opts.tol && dinf <= opts.tol && gap <= opts.tol {
        status = SolveStatus::Optimal;
    }
    let (pobj, dobj) = objectives(&it);
    Ok(CoreSolution {
        status,
        x: it.x,
        z: it.z,
        y: it.y,
        s: it.s,
        primal_objective: pobj,
        dual_objective: dobj,
        primal_infeasibility: pinf,
        dual_infeasibility: dinf,
        relative_gap: gap,
        iterations,
    })
}

/// Drops columns of `E` that are dependent (pivoted QR, relative tolerance
/// `tol`). Returns the kept column indices, or `None` when the dropped
/// columns make `Eᵀy = c_z` inconsistent.
pub fn independent_columns(e: &DMatrix<f64>, c_z: &[f64], tol: f64) -> Option<Vec<usize>> {
    let p = e.ncols();
    if p == 0 {
        return Some(Vec::new());
    }
    let mut work = e.clone();
    let scale = (0..p).map(|j| work.column(j).norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut kept = Vec::new();
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut remaining: Vec<usize> = (0..p).collect();
    loop {
        let best = remaining
            .iter()
            .copied()
            .map(|j| (j, work.column(j).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));
        let Some((j, norm)) = best else { break };
        if norm <= tol * scale {
            break;
        }
        let q = work.column(j) / norm;
        remaining.retain(|&r| r != j);
        for &r in &remaining {
            let proj = q.dot(&work.column(r));
            let col = work.column(r) - &q * proj;
            work.set_column(r, &col);
        }
        basis.push(q);
        kept.push(j);
    }
    kept.sort_unstable();
    let dropped: Vec<usize> = (0..p).filter(|j| !kept.contains(j)).collect();
    if !dropped.is_empty() {
        // Each dropped column is E_kept·t; consistency needs c_drop = tᵀ c_kept.
        let ek = e.select_columns(&kept);
        let svd = ek.clone().svd(true, true);
        let ck = DVector::from_iterator(kept.len(), kept.iter().map(|&j| c_z[j]));
        let cscale = c_z.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        for j in dropped {
            let t = svd.solve(&e.column(j).into_owned(), 1e-12).ok()?;
            if (t.dot(&ck) - c_z[j]).abs() > 1e-8 * cscale * (1.0 + t.norm()) {
                return None;
            }
        }
    }
    Some(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn two_by_two_bound() {
        // min y  s.t.  [[1, y],[y, 1]] ⪰ 0, as  max -y  with C = I, A_1 = -E_01.
        let mut sdp = CoreSdp::new(vec![2], 0);
        sdp.c = vec![SymEntry::new(0, 0, 0, 1.0), SymEntry::new(0, 1, 1, 1.0)];
        sdp.push_constraint(vec![SymEntry::new(0, 0, 1, -1.0)], vec![], -1.0);
        let sol = solve_core(&sdp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((-sol.dual_objective + 1.0).abs() < 1e-8, "{}", sol.dual_objective);
        assert!((sol.y[0] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn diagonal_lp() {
        // min x1 + x2  s.t.  x1 + x2 - s = 1, x ≥ 0, s ≥ 0 (three 1×1 blocks).
        let mut sdp = CoreSdp::new(vec![1, 1, 1], 0);
        sdp.c = vec![SymEntry::new(0, 0, 0, 1.0), SymEntry::new(1, 0, 0, 1.0)];
        sdp.push_constraint(
            vec![SymEntry::new(0, 0, 0, 1.0), SymEntry::new(1, 0, 0, 1.0), SymEntry::new(2, 0, 0, -1.0)],
            vec![],
            1.0,
        );
        let sol = solve_core(&sdp, &SolverOptions { tol: 1e-11, ..opts() }).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_objective - 1.0).abs() < 1e-9);
        assert!((sol.dual_objective - 1.0).abs() < 1e-9);
    }

    #[test]
    fn free_variables() {
        // min -z  s.t.  X11 + z = 3, X11 ≥ 0: optimum z = 3.
        let mut sdp = CoreSdp::new(vec![1], 1);
        sdp.c_z = vec![-1.0];
        sdp.push_constraint(vec![SymEntry::new(0, 0, 0, 1.0)], vec![(0, 1.0)], 3.0);
        let sol = solve_core(&sdp, &opts()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.primal_objective + 3.0).abs() < 1e-7, "{}", sol.primal_objective);
        assert!((sol.z[0] - 3.0).abs() < 1e-6);
    }

    #[test]
    fn infeasible_is_suspected() {
        // X11 = -1 with X ⪰ 0.
        let mut sdp = CoreSdp::new(vec![1], 0);
        sdp.push_constraint(vec![SymEntry::new(0, 0, 0, 1.0)], vec![], -1.0);
        let sol = solve_core(&sdp, &opts()).unwrap();
        assert_ne!(sol.status, SolveStatus::Optimal);
    }

    #[test]
    fn dependent_columns() {
        let e = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 0.0, 1.0, 1.0, 2.0, 0.0]);
        assert_eq!(independent_columns(&e, &[1.0, 2.0, 0.0], 1e-10), Some(vec![1, 2]));
        assert_eq!(independent_columns(&e, &[1.0, 3.0, 0.0], 1e-10), None);
        assert_eq!(independent_columns(&DMatrix::zeros(2, 0), &[], 1e-10), Some(vec![]));
    }
}

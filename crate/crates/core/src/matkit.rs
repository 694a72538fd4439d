//! Dense matrix kernel.
//!
//! Everything downstream works on small-to-medium dense matrices (a few
//! hundred rows at most), so this module wraps `nalgebra` storage and its
//! unordered real Schur decomposition, and adds what `nalgebra` lacks:
//! eigenvalue reordering of a real Schur form by adjacent block swaps and a
//! Bartels–Stewart Sylvester solver on quasi-triangular factors.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const SCHUR_RETRY_SEED: u64 = 0x5c4u64 << 20;
const SCHUR_RETRIES: usize = 4;

/// Dense real matrix.
pub type RealMatrix = DMatrix<f64>;
/// Dense complex matrix.
pub type ComplexMatrix = DMatrix<Complex64>;

/// A diagonal block of a quasi-upper-triangular matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub start: usize,
    /// 1 for a real eigenvalue, 2 for a complex-conjugate pair.
    pub size: usize,
}

/// Real Schur decomposition `M = Q T Qᵀ` with `T` quasi-upper-triangular.
///
/// Every 2×2 diagonal block carries a complex-conjugate eigenvalue pair; real
/// eigenvalues always sit in 1×1 blocks.
#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: RealMatrix,
    pub t: RealMatrix,
    blocks: Vec<Block>,
    selected: usize,
}

impl SchurForm {
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Dimension of the leading invariant subspace gathered by [`real_schur`].
    /// Zero for an unordered form.
    pub fn selected_dim(&self) -> usize {
        self.selected
    }

    /// Eigenvalues in block order; pairs are listed with the positive
    /// imaginary part first.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.t.nrows());
        for blk in &self.blocks {
            let (l1, l2) = block_eigenvalues(&self.t, *blk);
            out.push(l1);
            if let Some(l2) = l2 {
                out.push(l2);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> RealMatrix {
        &self.q * &self.t * self.q.transpose()
    }

    /// Reorders the form so that eigenvalues with `select == true` lead.
    fn reorder<F: Fn(Complex64) -> bool>(&mut self, select: F) -> Result<()> {
        let mut blocks = self.blocks.clone();
        let mut flags = Vec::with_capacity(blocks.len());
        for blk in &blocks {
            let (l1, l2) = block_eigenvalues(&self.t, *blk);
            let s = select(l1);
            if let Some(l2) = l2 {
                if select(l2) != s {
                    return Err(Error::SelectSplitsPair(l1));
                }
            }
            flags.push(s);
        }

        let mut leading = 0;
        for i in 0..blocks.len() {
            if !flags[i] {
                continue;
            }
            let mut pos = i;
            while pos > leading {
                let (b1, b2) = (blocks[pos - 1], blocks[pos]);
                swap_blocks(&mut self.q, &mut self.t, b1.start, b1.size, b2.size)?;
                blocks[pos - 1] = Block { start: b1.start, size: b2.size };
                blocks[pos] = Block { start: b1.start + b2.size, size: b1.size };
                flags.swap(pos - 1, pos);
                pos -= 1;
            }
            leading += 1;
        }
        self.selected = blocks[..leading].iter().map(|b| b.size).sum();
        self.blocks = blocks;
        Ok(())
    }
}

fn check_square<T>(m: &DMatrix<T>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.nrows())
}

/// Unordered real Schur form with standardized blocks.
pub fn schur(m: &RealMatrix) -> Result<SchurForm> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok(SchurForm {
            q: RealMatrix::zeros(0, 0),
            t: RealMatrix::zeros(0, 0),
            blocks: Vec::new(),
            selected: 0,
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NoConvergence(n));
    }
    let (mut q, mut t) = raw_schur(m)?;
    let blocks = standardize(&mut q, &mut t)?;
    Ok(SchurForm { q, t, blocks, selected: 0 })
}

/// Hessenberg reduction followed by Francis double-shift QR. A run that
/// exhausts its iteration budget is restarted from a few fixed random
/// orthogonal similarities.
fn raw_schur(m: &RealMatrix) -> Result<(RealMatrix, RealMatrix)> {
    let n = m.nrows();
    if let Some(qt) = hessenberg_qr(m) {
        return Ok(qt);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SCHUR_RETRY_SEED);
    for _ in 0..SCHUR_RETRIES {
        let z = random_orthogonal(n, &mut rng);
        if let Some((q, t)) = hessenberg_qr(&(z.transpose() * m * &z)) {
            return Ok((z * q, t));
        }
    }
    Err(Error::NoConvergence(n))
}

fn hessenberg_qr(m: &RealMatrix) -> Option<(RealMatrix, RealMatrix)> {
    let (mut z, mut h) = m.clone().hessenberg().unpack();
    francis(&mut h, &mut z).then_some((z, h))
}

/// Small-bulge double-shift QR on an upper Hessenberg `h`, accumulating the
/// transformations into `z`. Uses exceptional shifts every tenth iteration
/// on a stalled window and the Ahues–Tisseur deflation test.
fn francis(h: &mut RealMatrix, z: &mut RealMatrix) -> bool {
    const EXCEPTIONAL_EVERY: usize = 10;
    const DAT1: f64 = 0.75;
    const DAT2: f64 = -0.4375;
    let n = h.nrows();
    for j in 0..n {
        for i in (j + 2)..n {
            h[(i, j)] = 0.0;
        }
    }
    if n < 2 {
        return true;
    }
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    let itmax = 30 * n.max(10);
    let mut kdefl = 0usize;
    let mut i = n as isize - 1;
    while i >= 0 {
        let iu = i as usize;
        let mut l = 0usize;
        let mut converged = false;
        for _ in 0..=itmax {
            let mut k = iu;
            while k > l {
                let sub = h[(k, k - 1)].abs();
                if sub <= smlnum {
                    break;
                }
                let mut tst = h[(k - 1, k - 1)].abs() + h[(k, k)].abs();
                if tst == 0.0 {
                    if k >= 2 {
                        tst += h[(k - 1, k - 2)].abs();
                    }
                    if k + 1 < n {
                        tst += h[(k + 1, k)].abs();
                    }
                }
                if sub <= ulp * tst {
                    let ab = sub.max(h[(k - 1, k)].abs());
                    let ba = sub.min(h[(k - 1, k)].abs());
                    let diff = (h[(k - 1, k - 1)] - h[(k, k)]).abs();
                    let aa = h[(k, k)].abs().max(diff);
                    let bb = h[(k, k)].abs().min(diff);
                    let s = aa + ab;
                    if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                        break;
                    }
                }
                k -= 1;
            }
            l = k;
            if l > 0 {
                h[(l, l - 1)] = 0.0;
            }
            if l + 1 >= iu {
                converged = true;
                break;
            }
            kdefl += 1;

            let (h11, h12, h21, h22) = if kdefl.is_multiple_of(2 * EXCEPTIONAL_EVERY) {
                let s = h[(iu, iu - 1)].abs() + h[(iu - 1, iu - 2)].abs();
                let d = DAT1 * s + h[(iu, iu)];
                (d, DAT2 * s, s, d)
            } else if kdefl.is_multiple_of(EXCEPTIONAL_EVERY) {
                let s = h[(l + 1, l)].abs() + h[(l + 2, l + 1)].abs();
                let d = DAT1 * s + h[(l, l)];
                (d, DAT2 * s, s, d)
            } else {
                (h[(iu - 1, iu - 1)], h[(iu - 1, iu)], h[(iu, iu - 1)], h[(iu, iu)])
            };
            let s = h11.abs() + h12.abs() + h21.abs() + h22.abs();
            let (rt1r, rt1i, rt2r, rt2i) = if s == 0.0 {
                (0.0, 0.0, 0.0, 0.0)
            } else {
                let (h11, h12, h21, h22) = (h11 / s, h12 / s, h21 / s, h22 / s);
                let tr = 0.5 * (h11 + h22);
                let det = (h11 - tr) * (h22 - tr) - h12 * h21;
                let rtdisc = det.abs().sqrt();
                if det >= 0.0 {
                    (tr * s, rtdisc * s, tr * s, -rtdisc * s)
                } else {
                    let (a, b) = (tr + rtdisc, tr - rtdisc);
                    let r = if (a - h22).abs() <= (b - h22).abs() { a * s } else { b * s };
                    (r, 0.0, r, 0.0)
                }
            };

            let mut v = [0.0f64; 3];
            let mut m = iu - 2;
            loop {
                let h21s = h[(m + 1, m)];
                let s = (h[(m, m)] - rt2r).abs() + rt2i.abs() + h21s.abs();
                let h21s = h21s / s;
                v[0] = h21s * h[(m, m + 1)] + (h[(m, m)] - rt1r) * ((h[(m, m)] - rt2r) / s) - rt1i * (rt2i / s);
                v[1] = h21s * (h[(m, m)] + h[(m + 1, m + 1)] - rt1r - rt2r);
                v[2] = h21s * h[(m + 2, m + 1)];
                let s = v[0].abs() + v[1].abs() + v[2].abs();
                v.iter_mut().for_each(|x| *x /= s);
                if m == l {
                    break;
                }
                let h00 = h[(m, m - 1)].abs() * (v[1].abs() + v[2].abs());
                let h01 = v[0].abs() * (h[(m - 1, m - 1)].abs() + h[(m, m)].abs() + h[(m + 1, m + 1)].abs());
                if h00 <= ulp * h01 {
                    break;
                }
                m -= 1;
            }

            for k in m..iu {
                let nr = 3.min(iu - k + 1);
                if k > m {
                    for (r, x) in v.iter_mut().enumerate().take(nr) {
                        *x = h[(k + r, k - 1)];
                    }
                }
                let (beta, tau) = householder(&mut v[..nr]);
                if k > m {
                    h[(k, k - 1)] = beta;
                    h[(k + 1, k - 1)] = 0.0;
                    if k + 2 < iu + 1 {
                        h[(k + 2, k - 1)] = 0.0;
                    }
                } else if m > l {
                    h[(k, k - 1)] *= 1.0 - tau;
                }
                let w = &v[1..nr];
                for j in k..n {
                    let sum = h[(k, j)] + w.iter().enumerate().map(|(r, x)| x * h[(k + 1 + r, j)]).sum::<f64>();
                    h[(k, j)] -= sum * tau;
                    for (r, x) in w.iter().enumerate() {
                        h[(k + 1 + r, j)] -= sum * tau * x;
                    }
                }
                for j in 0..=(k + 3).min(iu) {
                    let sum = h[(j, k)] + w.iter().enumerate().map(|(r, x)| x * h[(j, k + 1 + r)]).sum::<f64>();
                    h[(j, k)] -= sum * tau;
                    for (r, x) in w.iter().enumerate() {
                        h[(j, k + 1 + r)] -= sum * tau * x;
                    }
                }
                for j in 0..n {
                    let sum = z[(j, k)] + w.iter().enumerate().map(|(r, x)| x * z[(j, k + 1 + r)]).sum::<f64>();
                    z[(j, k)] -= sum * tau;
                    for (r, x) in w.iter().enumerate() {
                        z[(j, k + 1 + r)] -= sum * tau * x;
                    }
                }
            }
        }
        if !converged {
            return false;
        }
        kdefl = 0;
        i = l as isize - 1;
    }
    true
}

/// Elementary reflector `I − τ·u·uᵀ`, `u = (1, v[1..])`, mapping `v` to
/// `(β, 0, …)`. On return `v[1..]` holds the tail of `u`.
fn householder(v: &mut [f64]) -> (f64, f64) {
    let alpha = v[0];
    let xnorm = v[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
    if xnorm == 0.0 {
        v[1..].iter_mut().for_each(|x| *x = 0.0);
        return (alpha, 0.0);
    }
    let beta = -alpha.signum() * alpha.hypot(xnorm);
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    v[1..].iter_mut().for_each(|x| *x *= scale);
    v[0] = beta;
    (beta, tau)
}

/// Ordered real Schur form: eigenvalues for which `select` holds occupy the
/// leading diagonal blocks.
///
/// `select` must agree on both members of a conjugate pair.
pub fn real_schur<F: Fn(Complex64) -> bool>(m: &RealMatrix, select: F) -> Result<SchurForm> {
    let mut form = schur(m)?;
    form.reorder(select)?;
    Ok(form)
}

/// Eigenvalues of a square real matrix; complex values come in conjugate pairs.
///
/// The matrix is balanced first, which matters for companion-form inputs.
pub fn eigenvalues(m: &RealMatrix) -> Result<Vec<Complex64>> {
    check_square(m)?;
    let (balanced, _) = balance(m);
    Ok(schur(&balanced)?.eigenvalues())
}

/// Diagonal similarity `D⁻¹ M D` with power-of-two entries that equalizes
/// row and column norms. Returns the balanced matrix and the diagonal of `D`.
pub fn balance(m: &RealMatrix) -> (RealMatrix, Vec<f64>) {
    let n = m.nrows();
    let mut b = m.clone();
    let mut d = vec![1.0; n];
    if n < 2 {
        return (b, d);
    }
    let radix: f64 = 2.0;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += b[(j, i)].abs();
                    r += b[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if cc + rr < 0.95 * total {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    b[(i, j)] /= f;
                    b[(j, i)] *= f;
                }
            }
        }
    }
    (b, d)
}

/// Cleans the raw output of the QR iteration: exact zeros below the first
/// subdiagonal, negligible subdiagonals flushed, and 2×2 blocks with real
/// eigenvalues split by a Givens rotation.
fn standardize(q: &mut RealMatrix, t: &mut RealMatrix) -> Result<Vec<Block>> {
    let n = t.nrows();
    for j in 0..n {
        for i in (j + 2)..n {
            t[(i, j)] = 0.0;
        }
    }
    let floor = 4.0 * f64::EPSILON * t.norm();
    for i in 0..n.saturating_sub(1) {
        let local = f64::EPSILON * (t[(i, i)].abs() + t[(i + 1, i + 1)].abs());
        if t[(i + 1, i)].abs() <= local.max(floor) {
            t[(i + 1, i)] = 0.0;
        }
    }
    let mut blocks = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && t[(i + 1, i)] != 0.0 {
            if i + 2 < n && t[(i + 2, i + 1)] != 0.0 {
                return Err(Error::NoConvergence(n));
            }
            if split_real_pair(q, t, i) {
                blocks.push(Block { start: i, size: 1 });
                blocks.push(Block { start: i + 1, size: 1 });
            } else {
                blocks.push(Block { start: i, size: 2 });
            }
            i += 2;
        } else {
            blocks.push(Block { start: i, size: 1 });
            i += 1;
        }
    }
    Ok(blocks)
}

/// Triangularizes the 2×2 block at `i` when its eigenvalues are real.
fn split_real_pair(q: &mut RealMatrix, t: &mut RealMatrix, i: usize) -> bool {
    let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc < 0.0 {
        return false;
    }
    let lambda = 0.5 * (a + d) + disc.sqrt().copysign(if p == 0.0 { 1.0 } else { p });
    let v1 = (b, lambda - a);
    let v2 = (lambda - d, c);
    let (x, y) = if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) { v1 } else { v2 };
    let r = x.hypot(y);
    if r == 0.0 {
        return false;
    }
    let (cs, sn) = (x / r, y / r);
    rotate(q, t, i, cs, sn);
    t[(i + 1, i)] = 0.0;
    true
}

/// Applies `T ← Gᵀ T G`, `Q ← Q G` for the plane rotation acting on `i, i+1`.
fn rotate(q: &mut RealMatrix, t: &mut RealMatrix, i: usize, cs: f64, sn: f64) {
    let n = t.nrows();
    for j in 0..n {
        let (x, y) = (t[(i, j)], t[(i + 1, j)]);
        t[(i, j)] = cs * x + sn * y;
        t[(i + 1, j)] = -sn * x + cs * y;
    }
    for r in 0..n {
        let (x, y) = (t[(r, i)], t[(r, i + 1)]);
        t[(r, i)] = cs * x + sn * y;
        t[(r, i + 1)] = -sn * x + cs * y;
        let (x, y) = (q[(r, i)], q[(r, i + 1)]);
        q[(r, i)] = cs * x + sn * y;
        q[(r, i + 1)] = -sn * x + cs * y;
    }
}

fn block_eigenvalues(t: &RealMatrix, blk: Block) -> (Complex64, Option<Complex64>) {
    let i = blk.start;
    if blk.size == 1 {
        return (Complex64::new(t[(i, i)], 0.0), None);
    }
    let (a, b, c, d) = (t[(i, i)], t[(i, i + 1)], t[(i + 1, i)], t[(i + 1, i + 1)]);
    let mean = 0.5 * (a + d);
    let p = 0.5 * (a - d);
    let disc = p * p + b * c;
    if disc < 0.0 {
        let im = (-disc).sqrt();
        (Complex64::new(mean, im), Some(Complex64::new(mean, -im)))
    } else {
        let r = disc.sqrt();
        (Complex64::new(mean + r, 0.0), Some(Complex64::new(mean - r, 0.0)))
    }
}

/// Swaps the adjacent diagonal blocks of sizes `n1` (at `start`) and `n2`
/// (right after it), updating `Q` to keep `M = Q T Qᵀ`.
fn swap_blocks(q: &mut RealMatrix, t: &mut RealMatrix, start: usize, n1: usize, n2: usize) -> Result<()> {
    let n = t.nrows();
    let m = n1 + n2;
    let t11 = t.view((start, start), (n1, n1)).into_owned();
    let t22 = t.view((start + n1, start + n1), (n2, n2)).into_owned();
    let t12 = t.view((start, start + n1), (n1, n2)).into_owned();
    let dnorm = t.view((start, start), (m, m)).amax();
    let x = small_sylvester(&t11, &t22, &t12, t11.norm() + t22.norm())?;

    // The columns of [-X; I] span the invariant subspace belonging to T22.
    let mut basis = RealMatrix::zeros(m, m);
    basis.view_mut((0, 0), (n1, n2)).copy_from(&(-&x));
    for k in 0..n2 {
        basis[(n1 + k, k)] = 1.0;
    }
    for k in 0..n1 {
        basis[(k, n2 + k)] = 1.0;
    }
    let rot = basis.qr().q();

    let rows = rot.transpose() * t.view((start, start), (m, n - start));
    t.view_mut((start, start), (m, n - start)).copy_from(&rows);
    let cols = t.view((0, start), (start + m, m)) * &rot;
    t.view_mut((0, start), (start + m, m)).copy_from(&cols);
    let qcols = q.view((0, start), (n, m)) * &rot;
    q.view_mut((0, start), (n, m)).copy_from(&qcols);

    let residual = t.view((start + n2, start), (n1, n2)).norm();
    let thresh = 1e3 * f64::EPSILON * dnorm.max(f64::MIN_POSITIVE) * (1.0 + x.norm());
    if residual > thresh {
        return Err(Error::ReorderFailed { position: start, residual });
    }
    t.view_mut((start + n2, start), (n1, n2)).fill(0.0);

    for (s, size) in [(start, n2), (start + n2, n1)] {
        if size == 2 {
            let (_, l2) = block_eigenvalues(t, Block { start: s, size: 2 });
            if l2.is_none_or(|l| l.im == 0.0) {
                return Err(Error::ReorderFailed { position: start, residual });
            }
        }
    }
    Ok(())
}

/// Solves `A X − X B = C` for blocks of order at most two via the Kronecker
/// form. `scale` sets the absolute level below which the operator counts as
/// singular.
fn small_sylvester(a: &RealMatrix, b: &RealMatrix, c: &RealMatrix, scale: f64) -> Result<RealMatrix> {
    let (n1, n2) = (a.nrows(), b.nrows());
    let k = n1 * n2;
    let tiny = 1e-14 * scale.max(f64::MIN_POSITIVE);
    if k == 1 {
        let d = a[(0, 0)] - b[(0, 0)];
        if d.abs() <= tiny {
            return Err(Error::SpectraOverlap { separation: d.abs() });
        }
        return Ok(RealMatrix::from_element(1, 1, c[(0, 0)] / d));
    }
    let mut kron = RealMatrix::zeros(k, k);
    for j in 0..n2 {
        for i in 0..n1 {
            let row = j * n1 + i;
            for l in 0..n1 {
                kron[(row, j * n1 + l)] += a[(i, l)];
            }
            for l in 0..n2 {
                kron[(row, l * n1 + i)] -= b[(l, j)];
            }
        }
    }
    let rhs = DVector::from_column_slice(c.as_slice());
    let lu = kron.full_piv_lu();
    let separation = lu.u().diagonal().iter().fold(f64::INFINITY, |acc, v| acc.min(v.abs()));
    if separation <= tiny {
        return Err(Error::SpectraOverlap { separation });
    }
    let sol = lu.solve(&rhs).ok_or(Error::SpectraOverlap { separation })?;
    Ok(RealMatrix::from_column_slice(n1, n2, sol.as_slice()))
}

/// Bartels–Stewart back substitution for `Ta Y − Y Tb = F` with both
/// coefficients quasi-upper-triangular.
pub(crate) fn solve_quasi_triangular_sylvester(
    ta: &RealMatrix,
    blocks_a: &[Block],
    tb: &RealMatrix,
    blocks_b: &[Block],
    f: &RealMatrix,
) -> Result<RealMatrix> {
    let (m, k) = (ta.nrows(), tb.nrows());
    let scale = ta.norm() + tb.norm();
    let mut y = RealMatrix::zeros(m, k);
    for bj in blocks_b {
        let (j0, nj) = (bj.start, bj.size);
        for bi in blocks_a.iter().rev() {
            let (i0, ni) = (bi.start, bi.size);
            let mut rhs = f.view((i0, j0), (ni, nj)).into_owned();
            let after = i0 + ni;
            if after < m {
                rhs -= ta.view((i0, after), (ni, m - after)) * y.view((after, j0), (m - after, nj));
            }
            if j0 > 0 {
                rhs += y.view((i0, 0), (ni, j0)) * tb.view((0, j0), (j0, nj));
            }
            let aii = ta.view((i0, i0), (ni, ni)).into_owned();
            let bjj = tb.view((j0, j0), (nj, nj)).into_owned();
            let blk = small_sylvester(&aii, &bjj, &rhs, scale)?;
            y.view_mut((i0, j0), (ni, nj)).copy_from(&blk);
        }
    }
    Ok(y)
}

/// Solves the Sylvester equation `A X − X B = C`.
///
/// Requires disjoint spectra of `A` (m×m) and `B` (k×k).
pub fn solve_sylvester(a: &RealMatrix, b: &RealMatrix, c: &RealMatrix) -> Result<RealMatrix> {
    let m = check_square(a)?;
    let k = check_square(b)?;
    if c.nrows() != m || c.ncols() != k {
        return Err(Error::Dimension(format!(
            "right-hand side is {}x{}, expected {m}x{k}",
            c.nrows(),
            c.ncols()
        )));
    }
    if m == 0 || k == 0 {
        return Ok(RealMatrix::zeros(m, k));
    }
    let sa = schur(a)?;
    let sb = schur(b)?;
    let f = sa.q.transpose() * c * &sb.q;
    let y = solve_quasi_triangular_sylvester(&sa.t, &sa.blocks, &sb.t, &sb.blocks, &f)?;
    Ok(&sa.q * y * sb.q.transpose())
}

/// Largest singular value.
pub fn spectral_norm<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Power-iteration estimate of `‖M‖₂` from below, to about three digits.
/// Much cheaper than [`spectral_norm`] on large matrices.
pub fn spectral_norm_estimate(m: &RealMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let n = m.ncols();
    let mut v = DVector::from_fn(n, |i, _| 1.0 + (i as f64 * 0.618_034).fract());
    v /= v.norm();
    let mut est = 0.0;
    for _ in 0..100 {
        let w = m.transpose() * (m * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return m.amax();
        }
        let next = norm.sqrt();
        v = w / norm;
        let done = (next - est).abs() <= 1e-3 * next;
        est = next;
        if done {
            break;
        }
    }
    est.max(m.amax())
}

/// Square root of the sum of squared entry magnitudes.
pub fn frobenius_norm<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    m.norm()
}

/// 2-norm condition number; infinite for singular input.
pub fn condition_number<T: ComplexField<RealField = f64>>(m: &DMatrix<T>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let (max, min) = (sv.max(), sv.min());
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending and
/// eigenvectors as the matching columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = check_square(m)?;
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let eig = nalgebra::linalg::SymmetricEigen::try_new(m.clone(), f64::EPSILON, 1000 * n)
        .ok_or(Error::NoConvergence(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok((values, vectors))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

pub fn to_complex(m: &RealMatrix) -> ComplexMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Haar-like random orthogonal matrix from the QR factor of a Gaussian-ish
/// sample.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> RealMatrix {
    if n == 0 {
        return RealMatrix::zeros(0, 0);
    }
    let g = RealMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    g.qr().q()
}

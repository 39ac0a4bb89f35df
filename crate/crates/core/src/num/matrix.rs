use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Enclosure, NumError, QuadScalar, Rational, Scalar};

/// Dense square integer matrix. When `n = 2k` the rows and columns are
/// indexed by the wedge alphabet `(1,l),(1,r),...,(k,l),(k,r)` in that
/// order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to basis vector
    /// `perm[j]`, i.e. `(Pv)[perm[j]] = v[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = BigInt::one();
        }
        m
    }

    /// The sign involution `J = diag(-1, 1, ..., -1, 1)`.
    pub fn sign_involution(n: usize) -> Self {
        assert!(n.is_multiple_of(2));
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = if i % 2 == 0 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
        }
        m
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|e| e.is_positive())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn mul_scalar_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.n {
                    if !self[(i, j)].is_zero() {
                        let c = Scalar::Rat(Rational::from(self[(i, j)].clone()));
                        acc = acc + c * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// True iff some power of `M` up to the Wielandt bound
    /// `(n-1)^2 + 1` is strictly positive. Pre: non-negative entries.
    pub fn is_primitive(&self) -> Result<bool, NumError> {
        for i in 0..self.n {
            for j in 0..self.n {
                if self[(i, j)].is_negative() {
                    return Err(NumError::NegativeEntry(i, j));
                }
            }
        }
        let n = self.n;
        let bound = (n - 1) * (n - 1) + 1;
        // Boolean support powers suffice.
        let support: Vec<bool> = self.entries.iter().map(|e| e.is_positive()).collect();
        let mut acc = support.clone();
        if acc.iter().all(|&b| b) {
            return Ok(true);
        }
        for _ in 1..bound {
            let mut next = vec![false; n * n];
            for i in 0..n {
                for k in 0..n {
                    if acc[i * n + k] {
                        for j in 0..n {
                            if support[k * n + j] {
                                next[i * n + j] = true;
                            }
                        }
                    }
                }
            }
            acc = next;
            if acc.iter().all(|&b| b) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Characteristic polynomial by Faddeev–LeVerrier; coefficients are
    /// returned low-degree first, with leading coefficient 1.
    pub fn char_poly(&self) -> CharPoly {
        let n = self.n;
        let to_rat = |m: &IntMatrix| -> Vec<BigRational> {
            m.entries
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect()
        };
        let mul = |a: &[BigRational], b: &[BigRational]| -> Vec<BigRational> {
            let mut c = vec![BigRational::zero(); n * n];
            for i in 0..n {
                for k in 0..n {
                    if !a[i * n + k].is_zero() {
                        for j in 0..n {
                            let prod = &a[i * n + k] * &b[k * n + j];
                            c[i * n + j] += prod;
                        }
                    }
                }
            }
            c
        };
        let a = to_rat(self);
        let mut m = a.clone();
        let mut coeffs = vec![BigRational::zero(); n + 1];
        coeffs[n] = BigRational::one();
        for k in 1..=n {
            let trace: BigRational = (0..n).map(|i| m[i * n + i].clone()).sum();
            let c = -trace / BigRational::from_integer(BigInt::from(k));
            coeffs[n - k] = c.clone();
            if k < n {
                for i in 0..n {
                    m[i * n + i] += &c;
                }
                m = mul(&a, &m);
            }
        }
        CharPoly {
            coeffs: coeffs
                .into_iter()
                .map(|c| {
                    debug_assert!(c.is_integer());
                    c.to_integer()
                })
                .collect(),
        }
    }

    pub fn det(&self) -> BigInt {
        let p = self.char_poly();
        let c0 = p.coeffs[0].clone();
        if self.n.is_multiple_of(2) {
            c0
        } else {
            -c0
        }
    }

    /// Inverse of a matrix with `det = ±1`; exact Gaussian elimination
    /// over the rationals followed by an integrality check.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let n = self.n;
        let mut a: Vec<BigRational> = self
            .entries
            .iter()
            .map(|e| BigRational::from_integer(e.clone()))
            .collect();
        let mut inv: Vec<BigRational> = (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                    inv.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= &p;
                inv[col * n + j] /= &p;
            }
            for r in 0..n {
                if r != col && !a[r * n + col].is_zero() {
                    let f = a[r * n + col].clone();
                    for j in 0..n {
                        let av = &a[col * n + j] * &f;
                        a[r * n + j] -= av;
                        let iv = &inv[col * n + j] * &f;
                        inv[r * n + j] -= iv;
                    }
                }
            }
        }
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if !inv[i * n + j].is_integer() {
                    return None;
                }
                out[(i, j)] = inv[i * n + j].to_integer();
            }
        }
        Some(out)
    }

    /// Certified leading eigenpair of a primitive non-negative matrix.
    ///
    /// Power iteration with exact integer matrix squarings gives rational
    /// Collatz–Wielandt bounds; certification checks a sign change of the
    /// characteristic polynomial across the bracket. The default tolerance
    /// is `2^-60`.
    pub fn pf_leading(&self, tolerance: Option<Rational>) -> Result<PfData, NumError> {
        if !self.is_primitive()? {
            return Err(NumError::NotPrimitive);
        }
        let tol = tolerance
            .unwrap_or_else(|| Rational::from_big(BigInt::one(), BigInt::from(2).pow(60)).unwrap());
        let n = self.n;
        let char_poly = self.char_poly();

        let mut power = self.clone();
        let mut v: Vec<BigInt> = vec![BigInt::one(); n];
        let mut bounds = self.rayleigh_bounds(&v);
        for _ in 0..64 {
            v = power.mul_vec(&v);
            if v.iter().all(|e| e.is_positive()) {
                if let Some(b) = self.rayleigh_bounds_checked(&v) {
                    bounds = b;
                    let width = &bounds.1 - &bounds.0;
                    if width.cmp(&tol) != std::cmp::Ordering::Greater {
                        break;
                    }
                }
            }
            power = &power * &power;
        }
        let (lo, hi) = bounds;
        // Certification: the bracket must contain a root of the
        // characteristic polynomial.
        let s_lo = char_poly.eval(&lo).signum();
        let s_hi = char_poly.eval(&hi).signum();
        if s_lo != 0 && s_hi != 0 && s_lo == s_hi {
            return Err(NumError::NotPrimitive);
        }
        let sum: BigRational = v.iter().map(|e| BigRational::from_integer(e.clone())).sum();
        let eigenvector: Vec<f64> = v
            .iter()
            .map(|e| {
                (BigRational::from_integer(e.clone()) / &sum)
                    .to_f64()
                    .unwrap()
            })
            .collect();
        let mid = (lo.to_f64() + hi.to_f64()) / 2.0;
        let rad = (hi.to_f64() - lo.to_f64()) / 2.0 + mid.abs() * f64::EPSILON * 4.0;
        let exact = char_poly.identify_root(&lo, &hi);
        Ok(PfData {
            eigenvalue: Enclosure::new(mid, rad),
            bounds: (lo, hi),
            eigenvector,
            char_poly,
            exact,
        })
    }

    fn rayleigh_bounds(&self, v: &[BigInt]) -> (Rational, Rational) {
        self.rayleigh_bounds_checked(v)
            .expect("positive vector required")
    }

    /// Collatz–Wielandt: for positive `v`, `min_i (Mv)_i/v_i <= lambda <=
    /// max_i (Mv)_i/v_i`.
    fn rayleigh_bounds_checked(&self, v: &[BigInt]) -> Option<(Rational, Rational)> {
        if !v.iter().all(|e| e.is_positive()) {
            return None;
        }
        let w = self.mul_vec(v);
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for i in 0..self.n {
            let q = BigRational::new(w[i].clone(), v[i].clone());
            if lo.as_ref().is_none_or(|l| q < *l) {
                lo = Some(q.clone());
            }
            if hi.as_ref().is_none_or(|h| q > *h) {
                hi = Some(q);
            }
        }
        Some((Rational(lo?), Rational(hi?)))
    }

    /// Exact kernel vector of `M - lambda I` over the field of `lambda`,
    /// for `lambda` a simple exact eigenvalue. Returned with unit 1-norm
    /// of absolute values.
    #[allow(clippy::needless_range_loop)]
    pub fn eigenvector_exact(&self, lambda: &Scalar) -> Option<Vec<Scalar>> {
        let n = self.n;
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut e = Scalar::Rat(Rational::from(self[(i, j)].clone()));
                        if i == j {
                            e = e - lambda.clone();
                        }
                        e
                    })
                    .collect()
            })
            .collect();
        // Gauss-Jordan with exact pivots; record pivot columns.
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].recip().ok()?;
            for j in 0..n {
                a[row][j] = &a[row][j] * &inv;
            }
            for r in 0..n {
                if r != row && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let sub = &a[row][j] * &f;
                        a[r][j] = &a[r][j] - &sub;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        if row == n {
            return None; // nonsingular: lambda not an eigenvalue
        }
        let free = (0..n).find(|c| !pivot_cols.contains(c))?;
        let mut v = vec![Scalar::zero(); n];
        v[free] = Scalar::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        let norm = v.iter().fold(Scalar::zero(), |acc, x| acc + x.abs());
        if norm.is_zero() {
            return None;
        }
        Some(v.into_iter().map(|x| x / norm.clone()).collect())
    }

    pub fn rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut row = Vec::with_capacity(self.n);
            for j in 0..self.n {
                row.push(self[(i, j)].to_i64()?);
            }
            out.push(row);
        }
        Some(out)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                if !self[(i, k)].is_zero() {
                    for j in 0..n {
                        let prod = &self[(i, k)] * &rhs[(k, j)];
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Monic integer polynomial, coefficients stored low-degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + Rational::from(c.clone());
        }
        acc
    }

    pub fn eval_scalar(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + Scalar::Rat(Rational::from(c.clone()));
        }
        acc
    }

    /// Attempts to identify the unique root inside `(lo, hi)` as an exact
    /// rational or quadratic scalar, by searching monic linear and
    /// quadratic integer factors. Returns `None` when the root has degree
    /// > 2 (the enclosure stands on its own then).
    pub fn identify_root(&self, lo: &Rational, hi: &Rational) -> Option<Scalar> {
        let mid = (lo.to_f64() + hi.to_f64()) / 2.0;
        // Integer root: must divide the constant term.
        let near = mid.round() as i64;
        for cand in [near - 1, near, near + 1] {
            let r = Rational::from_int(cand);
            if self.eval(&r).is_zero() && &r >= lo && &r <= hi {
                return Some(Scalar::Rat(r));
            }
        }
        // Quadratic factor x^2 - t x + m with m dividing the constant term.
        let c0 = &self.coeffs[0];
        let c0_small = c0.to_i64()?;
        if c0_small == 0 {
            return None;
        }
        let mut divisors = Vec::new();
        let a = c0_small.abs();
        let mut k = 1;
        while k * k <= a && k < 1_000_000 {
            if a % k == 0 {
                for m in [k, a / k] {
                    divisors.push(m);
                    divisors.push(-m);
                }
            }
            k += 1;
        }
        for m in divisors {
            if mid.abs() < 1e-12 {
                continue;
            }
            let t_est = mid + m as f64 / mid;
            for t in [
                t_est.round() as i64 - 1,
                t_est.round() as i64,
                t_est.round() as i64 + 1,
            ] {
                let Some(t_sq) = t.checked_mul(t) else {
                    continue;
                };
                let Some(four_m) = 4i64.checked_mul(m) else {
                    continue;
                };
                let Some(disc) = t_sq.checked_sub(four_m) else {
                    continue;
                };
                if disc <= 0 {
                    continue;
                }
                if !self.divisible_by_quadratic(t, m) {
                    continue;
                }
                // root (t + sqrt(disc)) / 2, reduced to a square-free tag
                let sq = Scalar::sqrt_int(disc).ok()?;
                let root = (Scalar::from_int(t) + sq) / Scalar::from_int(2);
                let root = root.reduce();
                let ge_lo = root.cmp_exact(&Scalar::Rat(lo.clone())) != std::cmp::Ordering::Less;
                let le_hi = root.cmp_exact(&Scalar::Rat(hi.clone())) != std::cmp::Ordering::Greater;
                if ge_lo && le_hi {
                    if let Scalar::Quad(q) = &root {
                        return Some(Scalar::Quad(QuadScalar::new(q.a.clone(), q.b.clone(), q.d)));
                    }
                    return Some(root);
                }
            }
        }
        None
    }

    /// Exact division test by `x^2 - t x + m`.
    fn divisible_by_quadratic(&self, t: i64, m: i64) -> bool {
        if self.degree() < 2 {
            return false;
        }
        let t = BigInt::from(t);
        let m = BigInt::from(m);
        let mut rem: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect(); // high first
        for i in 0..=(self.coeffs.len() - 3) {
            let lead = rem[i].clone();
            let prod_t = &lead * &t;
            rem[i + 1] += prod_t;
            let prod_m = &lead * &m;
            rem[i + 2] -= prod_m;
        }
        let k = self.coeffs.len();
        rem[k - 2].is_zero() && rem[k - 1].is_zero()
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Certified Perron–Frobenius data of a primitive matrix.
pub struct PfData {
    /// Leading eigenvalue as a float with certified error radius.
    pub eigenvalue: Enclosure,
    /// Exact rational bracket around the eigenvalue.
    pub bounds: (Rational, Rational),
    /// Strictly positive eigenvector, unit 1-norm.
    pub eigenvector: Vec<f64>,
    /// Exact characteristic polynomial, for downstream identification.
    pub char_poly: CharPoly,
    /// Exact value when the eigenvalue lives in a quadratic field.
    pub exact: Option<Scalar>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitivity_examples() {
        let fib = IntMatrix::from_rows(&[&[1, 1], &[1, 0]]);
        assert!(fib.is_primitive().unwrap());
        let upper = IntMatrix::from_rows(&[&[1, 1], &[0, 1]]);
        assert!(!upper.is_primitive().unwrap());
        assert!(!IntMatrix::identity(3).is_primitive().unwrap());
        let neg = IntMatrix::from_rows(&[&[1, -1], &[1, 1]]);
        assert!(neg.is_primitive().is_err());
    }

    #[test]
    fn char_poly_cat_map() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[1, 1]]);
        let p = m.char_poly();
        // x^2 - 3x + 1
        assert_eq!(
            p.coeffs,
            vec![BigInt::from(1), BigInt::from(-3), BigInt::from(1)]
        );
        assert_eq!(m.det(), BigInt::one());
    }

    #[test]
    fn pf_cat_map() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[1, 1]]);
        let pf = m.pf_leading(None).unwrap();
        let golden = (3.0 + 5f64.sqrt()) / 2.0;
        assert!(pf.eigenvalue.contains(golden));
        assert!(pf.eigenvalue.radius < 1e-14);
        // eigenvector proportional to ((1+sqrt5)/2, 1), 1-normalized
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let expect = [phi / (1.0 + phi), 1.0 / (1.0 + phi)];
        for (a, b) in pf.eigenvector.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
        // exact identification: (3 + sqrt 5)/2
        let exact = pf.exact.unwrap();
        let want = (Scalar::from_int(3) + Scalar::sqrt_int(5).unwrap()) / Scalar::from_int(2);
        assert_eq!(exact, want);
    }

    #[test]
    fn pf_conjugate_same_eigenvalue() {
        let a = IntMatrix::from_rows(&[&[2, 1], &[1, 1]])
            .pf_leading(None)
            .unwrap();
        let b = IntMatrix::from_rows(&[&[1, 1], &[1, 2]])
            .pf_leading(None)
            .unwrap();
        assert_eq!(a.exact, b.exact);
        // spectral mapping: square has eigenvalue lambda^2 ~ 6.854
        let sq =
            &IntMatrix::from_rows(&[&[2, 1], &[1, 1]]) * &IntMatrix::from_rows(&[&[2, 1], &[1, 1]]);
        let pf = sq.pf_leading(None).unwrap();
        assert!(pf.eigenvalue.contains(((3.0 + 5f64.sqrt()) / 2.0).powi(2)));
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(&m * &inv, IntMatrix::identity(2));
    }

    #[test]
    fn exact_eigenvector() {
        let m = IntMatrix::from_rows(&[&[2, 1], &[1, 1]]);
        let lambda = (Scalar::from_int(3) + Scalar::sqrt_int(5).unwrap()) / Scalar::from_int(2);
        let v = m.eigenvector_exact(&lambda).unwrap();
        let mv = m.mul_scalar_vec(&v);
        for (a, b) in mv.iter().zip(&v) {
            assert_eq!(a, &(b * &lambda));
        }
    }
}

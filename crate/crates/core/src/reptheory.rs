//! Finite-dimensional representations of the mapping-torus group, twisted
//! Lefschetz numbers and the twisted Lefschetz zeta function.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::foxcalc::{chain_matrices, ChainMatrices};
use crate::freegroup::{Endomorphism, Word};
use crate::groupring::HMatrix;
use crate::intmat::IntMatrix;
use crate::linalg::{Mat, Scalar};
use crate::poly::{cancel_close_roots, Polynomial, RationalFunction, Root};

/// Unitarity tolerance `‖U*U − I‖_max` for float representations.
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RepKind {
    Permutation,
    Unitary,
}

/// Images of the free generators and of `z`, with cached inverses.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep<T> {
    dim: usize,
    gens: Vec<Mat<T>>,
    gen_invs: Vec<Mat<T>>,
    z: Mat<T>,
    z_inv: Mat<T>,
}

impl<T: Scalar> MatrixRep<T> {
    fn build(gens: Vec<Mat<T>>, z: Mat<T>) -> Result<Self> {
        let dim = z.rows();
        if dim == 0 {
            return Err(Error::InvalidRepresentation("dimension must be positive".into()));
        }
        if gens
            .iter()
            .chain(core::iter::once(&z))
            .any(|m| m.rows() != dim || m.cols() != dim)
        {
            return Err(Error::InvalidRepresentation(alloc::format!(
                "all images must be {dim}x{dim}"
            )));
        }
        // both kinds are unitary, so inverses are adjoints
        let gen_invs = gens.iter().map(Mat::adjoint).collect();
        let z_inv = z.adjoint();
        Ok(MatrixRep {
            dim,
            gens,
            gen_invs,
            z,
            z_inv,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, i: usize) -> &Mat<T> {
        &self.gens[i - 1]
    }

    pub fn z(&self) -> &Mat<T> {
        &self.z
    }

    /// `ρ(w)`, multiplying letter images left to right.
    pub fn word(&self, w: &Word) -> Mat<T> {
        w.letters().iter().fold(Mat::identity(self.dim), |acc, &l| {
            let m = if l > 0 {
                &self.gens[(l - 1) as usize]
            } else {
                &self.gen_invs[(-l - 1) as usize]
            };
            acc.mul(m).expect("square")
        })
    }

    fn check_rank(&self, f: &Endomorphism) -> Result<()> {
        if self.rank() != f.rank() {
            return Err(Error::RankMismatch {
                expected: f.rank(),
                found: self.rank(),
            });
        }
        Ok(())
    }

    /// Largest entry of `ρ(z)⁻¹ρ(a_i)ρ(z) − ρ(f(a_i))` over all generators.
    pub fn relation_residual(&self, f: &Endomorphism) -> Result<f64> {
        self.check_rank(f)?;
        let mut worst = 0.0f64;
        for (i, img) in f.images().iter().enumerate() {
            let lhs = self.z_inv.mul(&self.gens[i])?.mul(&self.z)?;
            let rhs = self.word(img);
            let d = lhs.max_abs_diff(&rhs)?;
            if T::EXACT && lhs != rhs && d == 0.0 {
                worst = worst.max(f64::MIN_POSITIVE);
            }
            worst = worst.max(d);
        }
        Ok(worst)
    }

    /// Block matrix replacing each entry `zᵏ·Σ c_w w` by `ρ(z)ᵏ Σ c_w ρ(w)`.
    pub fn twist(&self, m: &HMatrix) -> Result<Mat<T>> {
        let body = m.body();
        if body.max_generator() > self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                found: body.max_generator(),
            });
        }
        let zk = self.z.pow(m.z_degree())?;
        let n = m.size();
        let mut blocks = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc: Mat<T> = Mat::zeros(self.dim, self.dim);
                for (w, c) in body.get(i, j).terms() {
                    acc = acc.add(&self.word(w).scale(&T::from_bigint(c)))?;
                }
                row.push(zk.mul(&acc)?);
            }
            blocks.push(row);
        }
        Ok(Mat::from_blocks(&blocks, self.dim))
    }

    fn twisted_chain(&self, chain: &ChainMatrices) -> Result<Vec<Mat<T>>> {
        chain.iter().map(|(_, fd)| self.twist(&HMatrix::z_times(fd)?)).collect()
    }

    /// `Σ_d (−1)^d tr T_dⁿ` for a chain that has already been twisted.
    fn lefschetz_of(twisted: &[Mat<T>], n: u32) -> Result<T> {
        let mut total = T::zero();
        for (d, t) in twisted.iter().enumerate() {
            let tr = t.pow(n)?.trace();
            total = if d % 2 == 0 { total + tr } else { total - tr };
        }
        Ok(total)
    }

    /// `Π_d det(I − t T_d)^{(−1)^{d+1}}`, unreduced.
    fn zeta_of(twisted: &[Mat<T>]) -> Result<RationalFunction<T>> {
        let mut num = Polynomial::one();
        let mut den = Polynomial::one();
        for (d, t) in twisted.iter().enumerate() {
            let p = t.det_one_minus_t()?;
            if d % 2 == 1 {
                num = num.mul(&p);
            } else {
                den = den.mul(&p);
            }
        }
        RationalFunction::new(num, den)
    }
}

/// A representation of `H` in one of the two supported kinds.
#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    /// Permutation matrices with exact rational arithmetic.
    Permutation(MatrixRep<BigRational>),
    /// Unitary matrices in double precision.
    Unitary(MatrixRep<Complex64>),
}

fn perm_matrix(perm: &[usize]) -> Result<Mat<BigRational>> {
    let k = perm.len();
    let mut seen = alloc::vec![false; k];
    for &p in perm {
        if p >= k || core::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidRepresentation(alloc::format!(
                "{perm:?} is not a permutation"
            )));
        }
    }
    Ok(Mat::from_fn(k, k, |i, j| {
        if perm[i] == j {
            BigRational::one()
        } else {
            BigRational::zero()
        }
    }))
}

fn is_permutation_matrix(m: &IntMatrix) -> bool {
    let k = m.rows();
    let entries_ok = m.entries().iter().all(|x| x.is_zero() || x.is_one());
    let rows_ok = (0..k).all(|i| m.row(i).iter().filter(|x| x.is_one()).count() == 1);
    let cols_ok = (0..k).all(|j| (0..k).filter(|&i| m[(i, j)].is_one()).count() == 1);
    m.is_square() && entries_ok && rows_ok && cols_ok
}

impl Representation {
    /// The one-dimensional trivial representation.
    pub fn trivial(rank: usize) -> Self {
        let one = Mat::identity(1);
        Representation::Permutation(MatrixRep::build(alloc::vec![one.clone(); rank], one).expect("1x1"))
    }

    /// From permutations given as image arrays: row `i` of the matrix has its 1 in column `perm[i]`.
    pub fn from_permutations(gens: &[Vec<usize>], z: &[usize]) -> Result<Self> {
        let mats = gens.iter().map(|p| perm_matrix(p)).collect::<Result<Vec<_>>>()?;
        Ok(Representation::Permutation(MatrixRep::build(mats, perm_matrix(z)?)?))
    }

    /// From explicit 0/1 permutation matrices.
    pub fn from_permutation_matrices(gens: &[IntMatrix], z: &IntMatrix) -> Result<Self> {
        for m in gens.iter().chain(core::iter::once(z)) {
            if !is_permutation_matrix(m) {
                return Err(Error::InvalidRepresentation("not a permutation matrix".into()));
            }
        }
        let mats = gens.iter().map(Mat::from_int).collect();
        Ok(Representation::Permutation(MatrixRep::build(mats, Mat::from_int(z))?))
    }

    /// From unitary matrices; each must satisfy `‖U*U − I‖_max ≤ 1e-8`.
    pub fn from_unitary(gens: Vec<Mat<Complex64>>, z: Mat<Complex64>) -> Result<Self> {
        for (idx, m) in gens.iter().chain(core::iter::once(&z)).enumerate() {
            if !m.is_square() {
                return Err(Error::InvalidRepresentation("non-square image".into()));
            }
            let err = m.adjoint().mul(m)?.max_abs_diff(&Mat::identity(m.rows()))?;
            if err.is_nan() || err > UNITARY_TOL {
                return Err(Error::InvalidRepresentation(alloc::format!(
                    "image {idx} is not unitary (residual {err:e})"
                )));
            }
        }
        Ok(Representation::Unitary(MatrixRep::build(gens, z)?))
    }

    /// Affine maps of `ℤ/m`: `a_i ↦ (x ↦ x + shifts[i])`, `z ↦ (x ↦ multiplier·x)`.
    ///
    /// Valid for `f` exactly when `multiplier·v ≡ A v (mod m)` for the
    /// abelianization `A` and shift vector `v`.
    pub fn affine(modulus: usize, shifts: &[i64], multiplier: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidRepresentation("modulus must be positive".into()));
        }
        let m = modulus as i64;
        let gens: Vec<Vec<usize>> = shifts
            .iter()
            .map(|s| (0..m).map(|x| (x + s).rem_euclid(m) as usize).collect())
            .collect();
        let z: Vec<usize> = (0..m).map(|x| (x * multiplier).rem_euclid(m) as usize).collect();
        Representation::from_permutations(&gens, &z)
    }

    pub fn kind(&self) -> RepKind {
        match self {
            Representation::Permutation(_) => RepKind::Permutation,
            Representation::Unitary(_) => RepKind::Unitary,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Representation::Permutation(r) => r.dim(),
            Representation::Unitary(r) => r.dim(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Representation::Permutation(r) => r.rank(),
            Representation::Unitary(r) => r.rank(),
        }
    }

    /// `ρ(w)` as a complex matrix.
    pub fn rho_word(&self, w: &Word) -> Mat<Complex64> {
        match self {
            Representation::Permutation(r) => r.word(w).to_complex(),
            Representation::Unitary(r) => r.word(w),
        }
    }
}

/// Outcome of checking the mapping-torus relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validation {
    pub valid: bool,
    pub max_residual: f64,
}

/// Checks `ρ(z)⁻¹ρ(a_i)ρ(z) = ρ(f(a_i))`, exactly for permutation representations.
pub fn validate_rep(rho: &Representation, f: &Endomorphism, tol: f64) -> Result<Validation> {
    match rho {
        Representation::Permutation(r) => {
            let res = r.relation_residual(f)?;
            Ok(Validation {
                valid: res == 0.0,
                max_residual: res,
            })
        }
        Representation::Unitary(r) => {
            let res = r.relation_residual(f)?;
            Ok(Validation {
                valid: res <= tol,
                max_residual: res,
            })
        }
    }
}

fn require_valid(rho: &Representation, f: &Endomorphism) -> Result<()> {
    let v = validate_rep(rho, f, UNITARY_TOL)?;
    if !v.valid {
        return Err(Error::InvalidRepresentation(alloc::format!(
            "relations fail with residual {:e}",
            v.max_residual
        )));
    }
    Ok(())
}

pub fn rho_word(rho: &Representation, w: &Word) -> Mat<Complex64> {
    rho.rho_word(w)
}

/// Twisted block matrix of a homogeneous matrix.
pub fn twist_matrix(m: &HMatrix, rho: &Representation) -> Result<Mat<Complex64>> {
    match rho {
        Representation::Permutation(r) => Ok(r.twist(m)?.to_complex()),
        Representation::Unitary(r) => r.twist(m),
    }
}

/// A twisted Lefschetz number: exact for permutation representations.
#[derive(Clone, Debug, PartialEq)]
pub enum TwistedValue {
    Exact(BigRational),
    Float(Complex64),
}

impl TwistedValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            TwistedValue::Exact(q) => q.to_complex(),
            TwistedValue::Float(z) => *z,
        }
    }

    pub fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }

    /// The value as an integer when exact and integral.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self {
            TwistedValue::Exact(q) if q.is_integer() => Some(q.to_integer()),
            _ => None,
        }
    }
}

/// `L_ρ(fⁿ) = Σ_d (−1)^d tr (zF_d)^ρⁿ` for the bouquet chain of `f`.
pub fn twisted_lefschetz(f: &Endomorphism, rho: &Representation, n: u32) -> Result<TwistedValue> {
    twisted_lefschetz_with_chain(&chain_matrices(f), f, rho, n)
}

pub fn twisted_lefschetz_with_chain(
    chain: &ChainMatrices,
    f: &Endomorphism,
    rho: &Representation,
    n: u32,
) -> Result<TwistedValue> {
    if n == 0 {
        return Err(Error::Precondition("iterate n must be >= 1".into()));
    }
    require_valid(rho, f)?;
    match rho {
        Representation::Permutation(r) => Ok(TwistedValue::Exact(MatrixRep::lefschetz_of(
            &r.twisted_chain(chain)?,
            n,
        )?)),
        Representation::Unitary(r) => Ok(TwistedValue::Float(MatrixRep::lefschetz_of(
            &r.twisted_chain(chain)?,
            n,
        )?)),
    }
}

/// `L_ρ(fⁿ)` for `n = 1..=count`, twisting the chain once.
pub fn twisted_lefschetz_sequence(
    chain: &ChainMatrices,
    f: &Endomorphism,
    rho: &Representation,
    count: u32,
) -> Result<Vec<TwistedValue>> {
    require_valid(rho, f)?;
    match rho {
        Representation::Permutation(r) => {
            let t = r.twisted_chain(chain)?;
            (1..=count)
                .map(|n| Ok(TwistedValue::Exact(MatrixRep::lefschetz_of(&t, n)?)))
                .collect()
        }
        Representation::Unitary(r) => {
            let t = r.twisted_chain(chain)?;
            (1..=count)
                .map(|n| Ok(TwistedValue::Float(MatrixRep::lefschetz_of(&t, n)?)))
                .collect()
        }
    }
}

/// The twisted Lefschetz zeta function. Exact results are reduced by the
/// polynomial gcd; float results keep both factors and cancel near-equal
/// roots only when locating zeros and poles.
#[derive(Clone, Debug, PartialEq)]
pub enum TwistedZeta {
    Exact(RationalFunction<BigRational>),
    Float(RationalFunction<Complex64>),
}

impl TwistedZeta {
    pub fn numerator(&self) -> Polynomial<Complex64> {
        match self {
            TwistedZeta::Exact(r) => r.numerator().to_complex(),
            TwistedZeta::Float(r) => r.numerator().clone(),
        }
    }

    pub fn denominator(&self) -> Polynomial<Complex64> {
        match self {
            TwistedZeta::Exact(r) => r.denominator().to_complex(),
            TwistedZeta::Float(r) => r.denominator().clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, TwistedZeta::Exact(_))
    }
}

pub fn twisted_zeta(f: &Endomorphism, rho: &Representation) -> Result<TwistedZeta> {
    twisted_zeta_with_chain(&chain_matrices(f), f, rho)
}

pub fn twisted_zeta_with_chain(chain: &ChainMatrices, f: &Endomorphism, rho: &Representation) -> Result<TwistedZeta> {
    require_valid(rho, f)?;
    match rho {
        Representation::Permutation(r) => Ok(TwistedZeta::Exact(
            MatrixRep::zeta_of(&r.twisted_chain(chain)?)?.reduced(),
        )),
        Representation::Unitary(r) => Ok(TwistedZeta::Float(MatrixRep::zeta_of(&r.twisted_chain(chain)?)?)),
    }
}

/// Smallest zero or pole of a rational function.
#[derive(Clone, Debug, PartialEq)]
pub struct MinRoot {
    /// `+∞` when numerator and denominator are constant after cancellation.
    pub modulus: f64,
    pub root: Option<Root>,
    /// Whether the minimizing root belongs to the numerator.
    pub is_zero: bool,
    /// Numerator/denominator root pairs removed as numerically equal.
    pub cancelled: Vec<(Root, Root)>,
}

fn min_of(num: Vec<Root>, den: Vec<Root>, cancel: bool) -> MinRoot {
    let (num, den, cancelled) = if cancel {
        cancel_close_roots(num, den)
    } else {
        (num, den, Vec::new())
    };
    let best = num
        .iter()
        .map(|r| (*r, true))
        .chain(den.iter().map(|r| (*r, false)))
        .min_by(|a, b| a.0.value.norm().total_cmp(&b.0.value.norm()));
    match best {
        Some((r, is_zero)) => MinRoot {
            modulus: r.value.norm(),
            root: Some(r),
            is_zero,
            cancelled,
        },
        None => MinRoot {
            modulus: f64::INFINITY,
            root: None,
            is_zero: false,
            cancelled,
        },
    }
}

/// Minimum modulus over zeros and poles.
pub fn min_root_modulus(r: &TwistedZeta) -> Result<MinRoot> {
    match r {
        TwistedZeta::Exact(r) => min_root_modulus_exact(r),
        TwistedZeta::Float(r) => min_root_modulus_float(r),
    }
}

pub fn min_root_modulus_exact(r: &RationalFunction<BigRational>) -> Result<MinRoot> {
    // multiple roots would lose digits; their location is all that matters here
    let r = r.reduced();
    Ok(min_of(
        roots_or_none(&r.numerator().squarefree())?,
        roots_or_none(&r.denominator().squarefree())?,
        false,
    ))
}

pub fn min_root_modulus_float(r: &RationalFunction<Complex64>) -> Result<MinRoot> {
    Ok(min_of(
        roots_or_none(r.numerator())?,
        roots_or_none(r.denominator())?,
        true,
    ))
}

fn roots_or_none<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<Root>> {
    if p.degree().unwrap_or(0) == 0 {
        Ok(Vec::new())
    } else {
        p.roots()
    }
}
